"""Forward problem: Weyl functions of half-line Dirac systems.

We start from the free system, whose Weyl function is ``i I`` everywhere in
the upper half-plane, then switch on a constant potential and compare the
solver with the eigen-decomposition of the constant-coefficient system.
Finally we check the "energy" identity Im M = Im(zeta) * int |U|^2.
"""
import numpy as np

from weylkit import PotentialPath, compute_weyl_dirac, potential_family, weyl_identity_residual
from weylkit.dirac_forward import weyl_solution

# --- the free system ----------------------------------------------------------------
free = PotentialPath.zero(m=2, X=1.0, N=32)
zetas = np.array([0.5 + 0.5j, -3 + 0.1j, 4j])
M = compute_weyl_dirac(free, zetas)
print("free case, max |M - iI| over three points:", np.abs(M - 1j * np.eye(2)).max())

# the Weyl solution is e^{i zeta x} (I; iI); at zeta = i it decays like e^{-x}
sol = weyl_solution(free, 1j)
print("free Weyl solution at x = 1:", np.round(sol.values[-1, 0, 0], 12), "vs e^-1 =", np.exp(-1))

# --- constant potential phi = 1 ------------------------------------------------------
# Support [0, 12]: the zero tail beyond changes M by ~exp(-2 sqrt(5) 12).
const = PotentialPath.from_function(lambda x: 1.0, 12.0, 48)
M = compute_weyl_dirac(const, 2j)[0, 0]

A = np.array([[-1.0, 2j], [-2j, 1.0]])  # constant coefficient at zeta = 2i
lam, V = np.linalg.eig(A)
v = V[:, np.argmin(lam.real)]  # decaying mode
print("phi = 1, zeta = 2i:  solver", M, " eigenvector oracle", v[1] / v[0],
      " closed form", 1j * (np.sqrt(5) - 1) / 2)

# --- a matrix-valued, smooth potential ----------------------------------------------
f = potential_family("gaussian-decay", 2, amplitude=[[0.4, 0.3 - 0.2j], [0.3 + 0.2j, -0.2]], width=0.6)
path = PotentialPath.from_function(f, X=2.0, N=256)
for zeta in (1 + 1j, -2 + 0.5j):
    print(f"identity residual at zeta = {zeta}:", f"{weyl_identity_residual(path, zeta):.2e}")
