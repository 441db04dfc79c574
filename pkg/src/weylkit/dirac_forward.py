"""Forward problem for the half-line matrix Dirac system.

The system is ``J Psi' + [[0, phi], [phi, 0]] Psi = zeta Psi`` on ``[0, inf)``
with ``phi`` extended by zero beyond ``X``.  On the tail the decaying
solution is exactly ``e^{i zeta x} (I; iI)``, so the Weyl function follows
from one backward sweep of the Riccati-normalized solution ``(I; M_x)``
from ``X`` to ``0``.  Sweeping backward keeps the recessive subspace
dominant, which is the numerically stable direction.
"""
from dataclasses import dataclass, field

import numpy as np

from ._parallel import chunked_map
from ._propagators import dirac_coefficients, recessive_solution, riccati_sweep, sweep
from .errors import (
    InsufficientSamples,
    InvalidShape,
    InvalidSpectralPoint,
    InvalidWeylData,
    InvariantViolation,
    WeylMatchSingular,
)
from .linalg_core import BoundaryParam, hermitian_part, imag_part, min_imag_eigenvalue

__all__ = [
    "FundamentalSolutionTrace",
    "WeylSolutionTrace",
    "WeylSampleSet",
    "SpectralMeasureEstimate",
    "propagate_fundamental",
    "compute_weyl_dirac",
    "weyl_solution",
    "weyl_identity_residual",
    "stieltjes_measure",
    "TOL_WEYL",
    "TOL_HERGLOTZ",
    "TOL_QUAD",
    "MATCH_COND_MAX",
]

TOL_WEYL = 1e-6
TOL_HERGLOTZ = 1e-8
TOL_QUAD = 1e-6
MATCH_COND_MAX = 1e12

KINDS = ("dirac-M", "schrodinger-Mhat-j1", "schrodinger-Mhat-j2", "contractive-Mhat")


def tol_ode(zeta, X):
    """Default J-unitarity tolerance ``1e-8 (1 + |zeta|) X``."""
    return 1e-8 * (1.0 + abs(zeta)) * X


@dataclass(frozen=True)
class FundamentalSolutionTrace:
    """``Psi(zeta, x, alpha)`` at the grid nodes, ``Psi = [[theta1, phi1], [theta2, phi2]]``."""

    alpha: BoundaryParam
    zeta: complex
    x: np.ndarray
    nodes: np.ndarray

    @property
    def m(self):
        return self.alpha.m

    @property
    def theta1(self):
        return self.nodes[:, : self.m, : self.m]

    @property
    def phi1(self):
        return self.nodes[:, : self.m, self.m :]

    @property
    def theta2(self):
        return self.nodes[:, self.m :, : self.m]

    @property
    def phi2(self):
        return self.nodes[:, self.m :, self.m :]

    def j_unitarity_defect(self):
        """``max_k ||Psi_k* J Psi_k - J||``; small only for real ``zeta``."""
        m = self.m
        J = np.block([[np.zeros((m, m)), -np.eye(m)], [np.eye(m), np.zeros((m, m))]])
        R = np.conj(np.swapaxes(self.nodes, 1, 2)) @ J @ self.nodes - J
        return float(np.linalg.norm(R, 2, axis=(1, 2)).max())


@dataclass(frozen=True)
class WeylSolutionTrace:
    """``U(zeta, x, alpha) = Psi(zeta, x, alpha) (I; M)`` at the sweep points."""

    alpha: BoundaryParam
    zeta: complex
    M: np.ndarray
    x: np.ndarray
    values: np.ndarray


@dataclass
class WeylSampleSet:
    """Matrix samples of one Weyl-function flavour at points of the upper half-plane.

    For the Schrodinger kinds the stored point is ``zeta`` with ``z = zeta**2``;
    the keys thus stay in the upper half-plane even where ``z`` does not.
    """

    kind: str
    m: int
    points: np.ndarray
    values: np.ndarray
    provenance: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        self.points = np.atleast_1d(np.asarray(self.points, dtype=complex))
        self.values = np.asarray(self.values, dtype=complex).reshape(-1, self.m, self.m)
        if self.values.shape[0] != self.points.size:
            raise InvalidShape("one matrix per sample point required")

    def __len__(self):
        return self.points.size

    def as_dict(self):
        return {complex(p): v for p, v in zip(self.points, self.values)}

    @property
    def z(self):
        """Schrodinger spectral parameter ``zeta**2``."""
        return self.points**2

    def invariant_report(self, tol=TOL_HERGLOTZ):
        rep = {"min_imag_point": float(self.points.imag.min(initial=np.inf))}
        if self.kind == "contractive-Mhat":
            rep["max_norm"] = float(np.linalg.norm(self.values, 2, axis=(1, 2)).max(initial=0.0))
            rep["ok"] = rep["max_norm"] <= 1 + tol
        else:
            lam = min_imag_eigenvalue(self.values)
            if self.kind.startswith("schrodinger"):
                # Herglotz in z: Im M has the sign of Im z
                lam = np.where(self.z.imag < 0, -np.linalg.eigvalsh(imag_part(self.values))[..., -1], lam)
            rep["min_imag_eig"] = float(lam.min(initial=np.inf))
            rep["ok"] = rep["min_imag_eig"] >= -tol
        rep["ok"] = bool(rep["ok"] and rep["min_imag_point"] > 0)
        return rep

    def check_invariants(self, tol=TOL_HERGLOTZ):
        rep = self.invariant_report(tol)
        if not rep["ok"]:
            raise InvalidWeylData(f"{self.kind} samples violate their invariant: {rep}")
        return rep


@dataclass(frozen=True)
class SpectralMeasureEstimate:
    intervals: np.ndarray
    masses: np.ndarray
    epsilon: float


def _as_zetas(zeta):
    z = np.asarray(zeta, dtype=complex)
    return z.reshape(-1), z.ndim == 0


def _check_dims(phi, alpha):
    if phi.m != alpha.m:
        raise InvalidShape(f"phi is {phi.m}x{phi.m} but alpha has m = {alpha.m}")


def propagate_fundamental(phi, zeta, alpha=None):
    """Fundamental matrix ``Psi(zeta, x, alpha)`` on the grid nodes of ``phi``.

    ``Psi(zeta, 0, alpha) = (alpha*  J alpha*)``; each cell is advanced by the
    exact exponential of the frozen coefficient.
    """
    alpha = alpha or BoundaryParam.dirichlet(phi.m)
    _check_dims(phi, alpha)
    zeta = complex(zeta)
    Y0 = alpha.initial_fundamental()[None]
    xs, states = sweep(phi, lambda P: dirac_coefficients(P, zeta), Y0, 0.0, phi.X)
    return FundamentalSolutionTrace(alpha, zeta, xs, states[:, 0])


def _riccati_backward(phi, zetas, substeps=1, store=False):
    """Sweep ``(I; M_x)`` from ``X`` down to ``0``.

    ``M_x`` is the Weyl function of the problem restricted to ``[x, inf)``
    with Dirichlet condition at ``x``.  Points with negative imaginary part
    use the tail ``(I; -iI)`` (decay in the lower half-plane).
    """
    sgn = np.where(zetas.imag >= 0, 1.0, -1.0)
    tail = (1j * sgn)[:, None, None] * np.eye(phi.m)
    return riccati_sweep(phi, lambda P: dirac_coefficients(P, zetas), tail, phi.X, substeps, store)


def _apply_alpha(M0, alpha, cond_max=MATCH_COND_MAX):
    """Weyl function for ``alpha`` from the Dirichlet-at-0 normalized solution ``(I; M0)``."""
    a1, a2 = alpha.alpha1, alpha.alpha2
    D = a1 + a2 @ M0
    if np.any(np.linalg.cond(D) > cond_max):
        raise WeylMatchSingular(f"matching matrix condition exceeds {cond_max:.0e}")
    Nm = a1 @ M0 - a2
    return np.swapaxes(np.linalg.solve(np.swapaxes(D, 1, 2), np.swapaxes(Nm, 1, 2)), 1, 2), D


def _weyl_dirac(phi, zetas, alpha, cond_max=MATCH_COND_MAX):
    def work(zs):
        _, M0, _, _ = _riccati_backward(phi, zs)
        return _apply_alpha(M0, alpha, cond_max)[0]

    return chunked_map(work, zetas)


def compute_weyl_dirac(phi, zeta, alpha=None, *, allow_lower=False, cond_max=MATCH_COND_MAX):
    """Weyl-Titchmarsh matrix ``M(zeta, alpha)`` for the zero-extended ``phi``.

    ``zeta`` may be a scalar (returns ``m x m``) or an array (returns a stack).
    Points must lie in the open upper half-plane unless ``allow_lower`` is
    set, in which case lower half-plane points use the decay condition there
    (used to test ``M(conj zeta) = M(zeta)*``).
    """
    alpha = alpha or BoundaryParam.dirichlet(phi.m)
    _check_dims(phi, alpha)
    zetas, scalar = _as_zetas(zeta)
    bad = zetas.imag == 0 if allow_lower else zetas.imag <= 0
    if np.any(bad):
        raise InvalidSpectralPoint("Weyl function needs Im(zeta) > 0")
    M = _weyl_dirac(phi, zetas, alpha, cond_max)
    return M[0] if scalar else M


def weyl_solution(phi, zeta, alpha=None, substeps=1):
    """Weyl solution ``U = Psi (I; M)`` on the grid (``substeps`` points per cell)."""
    alpha = alpha or BoundaryParam.dirichlet(phi.m)
    _check_dims(phi, alpha)
    zeta = complex(zeta)
    if zeta.imag <= 0:
        raise InvalidSpectralPoint("Weyl solution needs Im(zeta) > 0")
    xs, M0, Ms, Bs = _riccati_backward(phi, np.array([zeta]), substeps, store=True)
    M, D = _apply_alpha(M0, alpha)
    x, U = recessive_solution(xs, Ms, Bs, np.linalg.inv(D[0]))
    return WeylSolutionTrace(alpha, zeta, M[0], x, U)


def weyl_identity_residual(phi, zeta, alpha=None):
    """Residual of ``Im M = Im(zeta) int_0^inf U* U dx``.

    Simpson's rule on each cell (exact propagation gives the half-cell
    values) plus the closed-form free tail ``U(X)* U(X) / (2 Im zeta)``.
    """
    sol = weyl_solution(phi, zeta, alpha, substeps=2)
    U = sol.values
    F = np.conj(np.swapaxes(U, 1, 2)) @ U
    dx = np.diff(sol.x[::2])
    integral = np.einsum("k,kij->ij", dx / 6.0, F[0:-1:2] + 4 * F[1::2] + F[2::2])
    integral += F[-1] / (2 * sol.zeta.imag)
    R = imag_part(sol.M) - sol.zeta.imag * integral
    return float(np.linalg.norm(R, 2))


def stieltjes_measure(samples, intervals, tol=TOL_HERGLOTZ):
    """Interval masses ``(1/pi) int_mu^nu Im M(t + i eps) dt`` of a Dirac Weyl function.

    ``samples`` must sit on a uniform real grid at one height ``eps``.  The
    integral is taken exactly over the piecewise-linear interpolant of
    ``Im M``, which is the trapezoid rule on whole cells and keeps masses
    additive over adjacent intervals.
    """
    if samples.kind != "dirac-M":
        raise ValueError("stieltjes_measure expects dirac-M samples")
    t = samples.points.real
    eps = samples.points.imag
    if t.size < 2 or np.ptp(eps) > 1e-12 * max(1.0, eps.max()) or eps.min() <= 0:
        raise InsufficientSamples("samples must lie on one horizontal line Im = eps > 0")
    order = np.argsort(t)
    t = t[order]
    dt = np.diff(t)
    if np.ptp(dt) > 1e-9 * dt.mean() or dt.min() <= 0:
        raise InsufficientSamples("sample grid must be uniform")
    f = imag_part(samples.values[order])
    cum = np.concatenate([np.zeros((1,) + f.shape[1:]), np.cumsum(0.5 * dt[:, None, None] * (f[1:] + f[:-1]), 0)])

    def F(s):
        i = min(int(np.searchsorted(t, s, side="right")) - 1, t.size - 2)
        w = (s - t[i]) / dt[i]
        fs = (1 - w) * f[i] + w * f[i + 1]
        return cum[i] + 0.5 * (s - t[i]) * (f[i] + fs)

    iv = np.asarray(intervals, dtype=float).reshape(-1, 2)
    masses = []
    for mu, nu in iv:
        if nu < mu:
            raise ValueError(f"interval ({mu}, {nu}] is reversed")
        if mu < t[0] - 1e-12 or nu > t[-1] + 1e-12:
            raise InsufficientSamples(f"interval ({mu}, {nu}] not covered by [{t[0]}, {t[-1]}]")
        mass = np.zeros_like(f[0]) if nu == mu else hermitian_part(F(nu) - F(mu)) / np.pi
        lam = np.linalg.eigvalsh(mass)[0]
        if lam < -tol * (1 + np.abs(mass).max()):
            raise InvariantViolation(f"mass over ({mu}, {nu}] not PSD (min eig {lam:.3g})")
        masses.append(mass)
    return SpectralMeasureEstimate(iv, np.array(masses), float(eps[0]))
