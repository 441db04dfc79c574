"""Spectral measure by Stieltjes inversion.

The imaginary part of M just above the real axis approximates pi times the
spectral density.  For the free system Im M = I, so the mass of (0, 1] is
I / pi; a potential redistributes the mass but keeps it positive.
"""
import numpy as np

from weylkit import PotentialPath, WeylSampleSet, compute_weyl_dirac, potential_family, stieltjes_measure

eps = 1e-3
t = np.linspace(-4.0, 4.0, 8001)
pts = t + 1j * eps

free = PotentialPath.zero(2, 1.0, 16)
est = stieltjes_measure(WeylSampleSet("dirac-M", 2, pts, compute_weyl_dirac(free, pts)), [(0.0, 1.0)])
print("free mass of (0, 1]:\n", np.round(est.masses[0].real, 6), "\n1/pi =", 1 / np.pi)

f = potential_family("gaussian-decay", 1, amplitude=1.2, width=0.5)
path = PotentialPath.from_function(f, 2.0, 256)
s = WeylSampleSet("dirac-M", 1, pts, compute_weyl_dirac(path, pts))
edges = np.linspace(-4, 4, 9)
est = stieltjes_measure(s, np.column_stack([edges[:-1], edges[1:]]))
for (mu, nu), mass in zip(est.intervals, est.masses):
    print(f"  ({mu:+.0f}, {nu:+.0f}]  mass {mass[0, 0].real:.4f}   (free: {(nu - mu) / np.pi:.4f})")
