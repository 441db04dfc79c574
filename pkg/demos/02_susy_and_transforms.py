"""Schrodinger m-functions, supersymmetry and the transforms between Weyl functions.

One Dirac system factorizes two Schrodinger operators with potentials
phi^2 -+ phi'.  Their Dirichlet m-functions multiply to -z, and all three
Weyl functions map to the same contraction in the unit ball.
"""
import numpy as np

from weylkit import (
    BoundaryParam,
    PotentialPath,
    boundary_transform,
    compute_weyl_dirac,
    compute_weyl_schrodinger,
    dirac_to_contractive,
    potential_family,
    random_boundary_param,
    schrodinger_to_contractive,
)

f = potential_family("step", 2, value=[[0.4, 0.3 - 0.2j], [0.3 + 0.2j, -0.2]], x_jump=0.7)
path = PotentialPath.from_function(f, X=2.0, N=256)

rng = np.random.default_rng(1)
zeta = rng.uniform(-3, 3, 5) + 1j * rng.uniform(0.3, 2, 5)
z = zeta**2

# both m-functions straight from the quasi-derivative systems
M1 = compute_weyl_schrodinger(path, 1, z, method="direct")
M2 = compute_weyl_schrodinger(path, 2, z, method="direct")
print("max ||Mhat1 Mhat2 + z I||:", np.linalg.norm(M1 @ M2 + z[:, None, None] * np.eye(2), 2, axis=(1, 2)).max())

# the three routes to the contractive function
MD = compute_weyl_dirac(path, zeta)
C = dirac_to_contractive(MD)
for j, Mj in ((1, M1), (2, M2)):
    print(f"j = {j}: max |contractive(Dirac) - contractive(Schrodinger)| =",
          np.abs(C - schrodinger_to_contractive(Mj, j, zeta)).max())
print("contractive norms:", np.round(np.linalg.norm(C, 2, axis=(1, 2)), 4))

# changing the boundary condition at 0 is a Moebius map of the Weyl function
alpha = random_boundary_param(2, rng)
M_alpha = compute_weyl_dirac(path, zeta, alpha)
back = boundary_transform(M_alpha, BoundaryParam.dirichlet(2), alpha)
print("Moebius round trip to the Dirichlet condition:", np.abs(back - MD).max())
