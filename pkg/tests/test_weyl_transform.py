import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylkit.errors import CayleySingular, MoebiusSingular, SingularWeyl
from weylkit.linalg_core import BoundaryParam, min_imag_eigenvalue, random_boundary_param
from weylkit.weyl_transform import (
    boundary_transform,
    contractive_to_dirac,
    dirac_to_contractive,
    schrodinger_to_contractive,
    susy_partner,
)

GOLDEN = (np.sqrt(5) - 1) / 2
C0 = (GOLDEN - 1) / (GOLDEN + 1)  # -0.2361


def random_herglotz(rng, m, n=1):
    A = rng.standard_normal((n, m, m)) + 1j * rng.standard_normal((n, m, m))
    B = rng.standard_normal((n, m, m)) + 1j * rng.standard_normal((n, m, m))
    return 0.5 * (A + np.conj(np.swapaxes(A, 1, 2))) + 1j * (B @ np.conj(np.swapaxes(B, 1, 2)) + 0.1 * np.eye(m))


def test_boundary_transform_examples():
    I = np.eye(2)
    a = BoundaryParam.dirichlet(2)
    M = random_herglotz(np.random.default_rng(0), 2)[0]
    assert np.allclose(boundary_transform(M, a, a), M, atol=1e-14)
    d = BoundaryParam(np.zeros((2, 2)), I)
    # [I][(-I)(iI)]^{-1} = I (-iI)^{-1} = iI
    assert np.allclose(boundary_transform(1j * I, a, d), 1j * I, atol=1e-15)


@settings(max_examples=25, deadline=None)
@given(m=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
def test_boundary_transform_group_law(m, seed):
    rng = np.random.default_rng(seed)
    a, d, g = (random_boundary_param(m, rng) for _ in range(3))
    M = random_herglotz(rng, m, 4)
    Ma = boundary_transform(M, a, d)
    assert np.abs(boundary_transform(Ma, d, a) - M).max() <= 1e-9 * (1 + np.abs(M).max()) ** 2
    two_step = boundary_transform(boundary_transform(M, g, d), a, g)
    assert np.abs(two_step - Ma).max() <= 1e-9 * (1 + np.abs(Ma).max()) ** 2
    assert min_imag_eigenvalue(Ma).min() >= -1e-10


def test_moebius_singular():
    a = BoundaryParam.dirichlet(1)
    d = BoundaryParam(np.zeros((1, 1)), np.eye(1))
    with pytest.raises(MoebiusSingular):
        boundary_transform(np.zeros((1, 1)), a, d)


def test_cayley_examples():
    assert np.allclose(dirac_to_contractive(1j * np.eye(3)), 0)
    assert dirac_to_contractive(np.array([[1j * GOLDEN]]))[0, 0] == pytest.approx(-0.2361, abs=1e-4)
    assert np.allclose(contractive_to_dirac(np.zeros((2, 2))), 1j * np.eye(2))
    assert contractive_to_dirac(np.array([[C0]]))[0, 0] == pytest.approx(1j * GOLDEN, abs=1e-12)
    with pytest.raises(CayleySingular):
        dirac_to_contractive(-1j * np.eye(1))
    with pytest.raises(CayleySingular):
        contractive_to_dirac(np.eye(1))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_cayley_round_trip_and_maps(rng, m):
    for _ in range(5):
        alpha = random_boundary_param(m, rng)
        M = random_herglotz(rng, m, 3)
        C = dirac_to_contractive(M, alpha)
        assert np.linalg.norm(C, 2, axis=(1, 2)).max() <= 1 + 1e-12
        assert np.abs(contractive_to_dirac(C, alpha) - M).max() <= 1e-9 * (1 + np.abs(M).max())
        K = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        K *= 0.9 * rng.uniform() / np.linalg.norm(K, 2)
        assert min_imag_eigenvalue(contractive_to_dirac(K, alpha)) >= -1e-12


def test_schrodinger_to_contractive_examples():
    zeta = 0.3 + 1.2j
    free = 1j * zeta * np.eye(2)
    assert np.allclose(schrodinger_to_contractive(free, 1, zeta), 0)
    assert np.allclose(schrodinger_to_contractive(free, 2, zeta), 0)
    M1 = np.array([[2j * 1j * GOLDEN]])
    got = schrodinger_to_contractive(M1, 1, 2j)[0, 0]
    assert got == pytest.approx(dirac_to_contractive(np.array([[1j * GOLDEN]]))[0, 0], abs=1e-14)
    with pytest.raises(ValueError):
        schrodinger_to_contractive(free, 1, -zeta)


def test_susy_partner():
    z = -2 + 1j
    r = np.sqrt(z)
    r = r if r.imag > 0 else -r
    assert np.allclose(susy_partner(1j * r * np.eye(2), z), 1j * r * np.eye(2))
    assert susy_partner(np.array([[1 - np.sqrt(5)]]), -4.0)[0, 0] == pytest.approx(-1 - np.sqrt(5))
    M = random_herglotz(np.random.default_rng(3), 2)[0]
    assert np.allclose(susy_partner(susy_partner(M, z), z), M)
    with pytest.raises(SingularWeyl):
        susy_partner(np.zeros((1, 1)), z)


def test_stacks(rng):
    M = random_herglotz(rng, 2, 7)
    C = dirac_to_contractive(M)
    assert C.shape == (7, 2, 2)
    assert np.allclose(C[3], dirac_to_contractive(M[3]))
