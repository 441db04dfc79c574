"""Cached forward -> reconstruct round trips shared by several test modules."""
import time
from functools import lru_cache

import numpy as np

from weylkit.dirac_forward import WeylSampleSet, compute_weyl_dirac
from weylkit.linalg_core import BoundaryParam
from weylkit.potential import PotentialPath
from weylkit.reconstruct import (
    ReconstructionConfig,
    line_points,
    reconstruct_from_contractive,
    relative_l2_error,
    _line_from_points,
)
from weylkit.weyl_transform import dirac_to_contractive

PHI_C = np.array([[0.5, 0.2], [0.2, -0.3]])

CASES = {
    "free": (1, lambda x: np.zeros((1, 1))),
    "free2": (2, lambda x: np.zeros((2, 2))),
    "exp": (1, lambda x: 0.5 * np.exp(-x)),
    "const2": (2, lambda x: PHI_C),
    "const1": (1, lambda x: 1.0),
}


@lru_cache(maxsize=None)
def run(name, N=512, a=200.0, n_xi=4096, eta=1.0, X_support=2.0):
    """Forward samples on the line, then the full pipeline; returns a result dict."""
    m, f = CASES[name]
    t0 = time.perf_counter()
    h = 1.0 / N
    path = PotentialPath.from_function(f, X_support, int(round(X_support / h)), m)
    _, zeta = line_points(eta, a, n_xi)
    samples = WeylSampleSet("dirac-M", m, zeta, compute_weyl_dirac(path, zeta))
    t_forward = time.perf_counter() - t0
    t0 = time.perf_counter()
    Mh = dirac_to_contractive(samples.values, BoundaryParam.dirichlet(m))
    line = _line_from_points(samples.points, Mh)
    phi_hat, diag, parts = reconstruct_from_contractive(line, ReconstructionConfig(N=N))
    t_recon = time.perf_counter() - t0
    return {
        "m": m,
        "phi": f,
        "path": path,
        "samples": samples,
        "phi_hat": phi_hat,
        "diag": diag,
        "parts": parts,
        "error": relative_l2_error(phi_hat, f),
        "l2_norm": relative_l2_error(phi_hat, lambda x: np.zeros((m, m))),
        "t_forward": t_forward,
        "t_recon": t_recon,
    }
