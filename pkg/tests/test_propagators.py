import numpy as np
import pytest
from scipy.linalg import expm

from weylkit._propagators import cell_exponential, right_divide, sweep, dirac_coefficients
from weylkit.errors import Diverged
from weylkit.potential import PotentialPath


def _hermitian(rng, m):
    A = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return 0.5 * (A + A.conj().T)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_cell_exponential_matches_expm(rng, m):
    P = _hermitian(rng, m)
    b = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    c = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    t = 0.37
    E = cell_exponential(P, b, c, t)
    I = np.eye(m)
    for k in range(5):
        G = np.block([[P, b[k] * I], [c[k] * I, -P]])
        ref = expm(t * G)
        assert np.linalg.norm(E[k] - ref) <= 1e-12 * max(1.0, np.linalg.norm(ref))


def test_cell_exponential_degenerate_root():
    # P^2 + bc = 0 exercises the small-argument series
    P = np.array([[1.0]])
    E = cell_exponential(P, np.array([1.0 + 0j]), np.array([-1.0 + 0j]), 0.5)
    G = np.array([[1.0, 1.0], [-1.0, -1.0]])
    assert np.allclose(E[0], expm(0.5 * G), atol=1e-14)


@pytest.mark.parametrize("m", [1, 2, 4])
def test_right_divide(rng, m):
    A = rng.standard_normal((3, m, m)) + 1j * rng.standard_normal((3, m, m))
    B = rng.standard_normal((3, m, m)) + 1j * rng.standard_normal((3, m, m))
    assert np.allclose(right_divide(A, B), A @ np.linalg.inv(B), atol=1e-12)


def test_sweep_overflow_guard():
    # growth ~ exp(|zeta| X) with a huge imaginary part overflows the guard
    path = PotentialPath.zero(1, 10.0, 10)
    zeta = np.array([100j])
    with pytest.raises(Diverged):
        sweep(path, lambda P: dirac_coefficients(P, zeta), np.eye(2)[None].astype(complex), 0.0, 10.0)
