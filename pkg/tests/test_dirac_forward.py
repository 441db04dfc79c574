import numpy as np
import pytest
from scipy.integrate import solve_ivp

from conftest import corpus, random_upper
from weylkit.dirac_forward import (
    WeylSampleSet,
    compute_weyl_dirac,
    propagate_fundamental,
    stieltjes_measure,
    tol_ode,
    weyl_identity_residual,
    weyl_solution,
)
from weylkit.errors import InsufficientSamples, InvalidShape, InvalidSpectralPoint, InvalidWeylData
from weylkit.linalg_core import BoundaryParam, J_matrix, min_imag_eigenvalue, random_boundary_param
from weylkit.potential import PotentialPath, potential_family

GOLDEN = (np.sqrt(5) - 1) / 2


def constant_oracle(Phi, zeta):
    """Weyl function of the constant-coefficient system on [0, inf) by eigen-decomposition."""
    Phi = np.atleast_2d(Phi)
    m = Phi.shape[0]
    I = np.eye(m)
    A = np.block([[-Phi, zeta * I], [-zeta * I, Phi]])
    lam, V = np.linalg.eig(A)
    dec = V[:, np.argsort(lam.real)[:m]]  # the m decaying modes
    return dec[m:] @ np.linalg.inv(dec[:m])


def test_free_propagator_closed_form():
    path = PotentialPath.zero(1, np.pi / 2, 64)
    tr = propagate_fundamental(path, 1.0)
    assert np.allclose(tr.nodes[-1], [[0, 1], [-1, 0]], atol=1e-13)
    x = tr.x
    assert np.allclose(tr.theta1[:, 0, 0], np.cos(x), atol=1e-13)
    assert np.allclose(tr.phi1[:, 0, 0], np.sin(x), atol=1e-13)


@pytest.mark.parametrize("name,m,path", corpus())
def test_initial_node_and_j_unitarity(rng, name, m, path):
    alpha = random_boundary_param(m, rng)
    tr = propagate_fundamental(path, 1.3, alpha)
    assert np.allclose(tr.nodes[0], alpha.initial_fundamental(), atol=1e-15)
    assert tr.j_unitarity_defect() <= tol_ode(1.3, path.X)


def test_fundamental_against_ode_oracle():
    # smooth phi: the cellwise-frozen propagator converges to the ODE solution
    f = potential_family("gaussian-decay", 2, amplitude=[[0.4, 0.3 - 0.2j], [0.3 + 0.2j, -0.2]], width=0.6)
    path = PotentialPath.from_function(f, 2.0, 2000, 2)
    zeta = 0.7 + 0.3j
    J = J_matrix(2)

    def rhs(x, y):
        phi = f(x)
        V = np.block([[np.zeros((2, 2)), phi], [phi, np.zeros((2, 2))]])
        return (-J @ (zeta * np.eye(4) - V) @ y.reshape(4, 4)).ravel()

    sol = solve_ivp(rhs, (0, 2.0), np.eye(4, dtype=complex).ravel(), rtol=1e-11, atol=1e-12)
    ref = sol.y[:, -1].reshape(4, 4)
    got = propagate_fundamental(path, zeta).nodes[-1]
    assert np.linalg.norm(got - ref) <= 1e-5 * np.linalg.norm(ref)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_free_weyl_is_iI(m):
    path = PotentialPath.zero(m, 1.0, 16)
    zetas = np.array([0.5 + 0.5j, -3 + 0.1j, 2j, 10 + 4j])
    M = compute_weyl_dirac(path, zetas)
    assert np.abs(M - 1j * np.eye(m)).max() <= 1e-12
    assert compute_weyl_dirac(path, 1j).shape == (m, m)


def test_constant_potential_matches_eigen_oracle():
    path = potential_family("constant", 1, value=1.0)
    path = PotentialPath.from_function(path, 12.0, 24, 1)
    M = compute_weyl_dirac(path, 2j)
    assert abs(M[0, 0] - 1j * GOLDEN) <= 1e-6
    assert abs(M[0, 0] - constant_oracle(1.0, 2j)[0, 0]) <= 1e-12


def test_constant_matrix_potential_matches_eigen_oracle(rng):
    Phi = np.array([[0.5, 0.2], [0.2, -0.3]])
    path = PotentialPath.from_function(lambda x: Phi, 15.0, 30, 2)
    for zeta in random_upper(rng, 5, im=(1.0, 3.0)):
        M = compute_weyl_dirac(path, zeta)
        assert np.linalg.norm(M - constant_oracle(Phi, zeta)) <= 1e-9


@pytest.mark.parametrize("name,m,path", corpus())
def test_conjugate_symmetry_and_herglotz(rng, name, m, path):
    zetas = random_upper(rng, 8)
    M = compute_weyl_dirac(path, zetas)
    Mc = compute_weyl_dirac(path, zetas.conj(), allow_lower=True)
    assert np.abs(Mc - np.conj(np.swapaxes(M, 1, 2))).max() <= 1e-10
    assert min_imag_eigenvalue(M).min() >= -1e-8


@pytest.mark.parametrize("name,m,path", corpus())
def test_weyl_identity(name, m, path):
    for zeta in (1 + 1j, -2 + 0.5j, 3j):
        assert weyl_identity_residual(path, zeta) <= 1e-6


@pytest.mark.parametrize("name,m,path", corpus())
def test_weyl_solution_normalization_and_decay(rng, name, m, path):
    alpha = random_boundary_param(m, rng)
    for zeta in (1j, 2 + 1.5j):
        sol = weyl_solution(path, zeta, alpha)
        Psi0 = alpha.initial_fundamental()
        assert np.allclose(sol.values[0], Psi0 @ np.vstack([np.eye(m), sol.M]), atol=1e-12)
        assert np.linalg.norm(sol.values[-1], 2) < np.linalg.norm(sol.values[0], 2)
        assert np.allclose(sol.M, compute_weyl_dirac(path, zeta, alpha), atol=1e-12)
    sol = weyl_solution(path, 1j)
    assert np.allclose(sol.values[0], np.vstack([np.eye(m), sol.M]), atol=1e-13)


def test_free_weyl_solution_closed_form():
    path = PotentialPath.zero(2, 2.0, 32)
    sol = weyl_solution(path, 1j)
    ref = np.exp(-sol.x)[:, None, None] * np.vstack([np.eye(2), 1j * np.eye(2)])
    assert np.abs(sol.values - ref).max() <= 1e-12


def test_weyl_solution_agrees_with_forward_propagation():
    # U = Psi (I; M) built from the forward fundamental matrix
    f = potential_family("step", 1, value=0.8, x_jump=0.7, value2=-0.4)
    path = PotentialPath.from_function(f, 2.0, 64, 1)
    zeta = 0.5 + 1j
    sol = weyl_solution(path, zeta)
    Psi = propagate_fundamental(path, zeta).nodes
    U = Psi @ np.vstack([np.eye(1), sol.M])
    assert np.abs(U - sol.values).max() <= 1e-10


def test_truncation_convergence():
    f = potential_family("gaussian-decay", 1, amplitude=1.2, width=0.5)
    zeta = 1 + 0.5j
    vals = [compute_weyl_dirac(PotentialPath.from_function(f, X, int(64 * X), 1), zeta)[0, 0] for X in (2, 3, 4, 5)]
    diffs = np.abs(np.diff(vals))
    assert diffs[-1] < 1e-8 and np.all(diffs[1:] <= diffs[:-1] + 1e-15)


def test_errors():
    path = PotentialPath.zero(2, 1.0, 8)
    with pytest.raises(InvalidSpectralPoint):
        compute_weyl_dirac(path, 1.0)
    with pytest.raises(InvalidSpectralPoint):
        compute_weyl_dirac(path, 1 - 1j)
    with pytest.raises(InvalidShape):
        compute_weyl_dirac(path, 1j, BoundaryParam.dirichlet(3))


def _free_line(m, eps=1e-3, lo=-1.0, hi=2.0, n=301):
    t = np.linspace(lo, hi, n)
    pts = t + 1j * eps
    path = PotentialPath.zero(m, 1.0, 8)
    return WeylSampleSet("dirac-M", m, pts, compute_weyl_dirac(path, pts))


@pytest.mark.parametrize("m", [1, 2])
def test_stieltjes_free_mass(m):
    est = stieltjes_measure(_free_line(m), [(0.0, 1.0), (0.3, 0.3), (0.0, 0.35), (0.35, 1.0)])
    assert np.allclose(est.masses[0], np.eye(m) / np.pi, atol=1e-10)
    assert np.array_equal(est.masses[1], np.zeros((m, m)))
    assert np.allclose(est.masses[2] + est.masses[3], est.masses[0], atol=1e-14)


@pytest.mark.parametrize("name,m,path", corpus())
def test_stieltjes_masses_psd(name, m, path):
    t = np.linspace(-3, 3, 241)
    s = WeylSampleSet("dirac-M", m, t + 0.05j, compute_weyl_dirac(path, t + 0.05j))
    est = stieltjes_measure(s, [(-3, -1), (-1, 0.5), (0.5, 3)])
    for mass in est.masses:
        assert np.linalg.eigvalsh(mass).min() >= -1e-12


def test_stieltjes_errors():
    s = _free_line(1)
    with pytest.raises(InsufficientSamples):
        stieltjes_measure(s, [(0.0, 5.0)])
    bad = WeylSampleSet("dirac-M", 1, [0.1 + 1e-3j, 0.2 + 2e-3j], [[[1j]], [[1j]]])
    with pytest.raises(InsufficientSamples):
        stieltjes_measure(bad, [(0.1, 0.2)])


def test_sample_set_invariants():
    s = WeylSampleSet("dirac-M", 1, [1j, 2j], [[[1j]], [[-1j]]])
    assert not s.invariant_report()["ok"]
    with pytest.raises(InvalidWeylData):
        s.check_invariants()
    c = WeylSampleSet("contractive-Mhat", 1, [1j], [[[0.5]]])
    assert c.check_invariants()["ok"]
    with pytest.raises(ValueError):
        WeylSampleSet("bogus", 1, [1j], [[[0]]])
