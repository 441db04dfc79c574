"""Inverse problem: potential ``phi`` from contractive Weyl data.

Pipeline::

    Mhat^D on the line (xi + i eta)/2
      -> Lambda        regularized inverse Fourier sum (chirp-z evaluation)
      -> S_X           Nystrom matrix of the structured operator
      -> E, H          Gram trace Pi* S_x^{-1} Pi and its derivative H = gamma* gamma
      -> v, gamma      v = gamma2^{-1} gamma1 from H, gamma2 by RK4
      -> beta          beta1 by RK4, beta = beta1 (I, v*)
      -> phi           phi = -beta' S3 gamma*

Discretization.  The reconstruction window ``[0, X]`` is split into ``N``
cells of width ``h``.  ``Lambda`` is sampled at the cell midpoints
``y_k = (k + 1/2) h`` and anchored by ``Lambda(0) = 0``; the kernel uses the
staggered differences ``d_k = (Lambda(y_k) - Lambda(y_{k-1})) / h``.  With
the midpoint rule this yields a matrix ``S`` that satisfies the discrete
operator identity ``A S - S A* = i Pi S3 Pi*`` exactly (``A`` the midpoint
discretization of ``-i int_0^y``), so the identity residual measures
round-off only.  One Cholesky factorization of the full ``S`` provides the
factors of every leading block, i.e. of every ``S_x``.
"""
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.interpolate import CubicSpline
from scipy.signal import czt

from .dirac_forward import TOL_HERGLOTZ, WeylSampleSet
from .errors import (
    ContractionLost,
    DegenerateFrame,
    DegenerateHamiltonian,
    GridMismatch,
    InvalidWeylData,
    NotStrictlyPositive,
    WeylkitError,
)
from .linalg_core import BoundaryParam, hermitian_part
from .potential import PotentialPath
from .weyl_transform import dirac_to_contractive, schrodinger_to_contractive

__all__ = [
    "ReconstructionConfig",
    "ContractiveLineSamples",
    "AccelerantProfile",
    "StructuredKernelSystem",
    "CanonicalHamiltonian",
    "BetaGammaTrace",
    "recover_lambda",
    "assemble_kernel_system",
    "extract_hamiltonian",
    "recover_gamma",
    "recover_beta",
    "extract_phi",
    "reconstruct_pipeline",
    "reconstruct_from_schrodinger",
    "reconstruct_from_contractive",
    "line_points",
    "relative_l2_error",
]


def _H(A):
    return np.conj(np.swapaxes(A, -1, -2))


@dataclass(frozen=True)
class ReconstructionConfig:
    X: float = 1.0  # reconstruction window [0, X]
    N: int = 512  # cells on the window
    tail_correction: bool = True
    tol_fourier: float = 1e-2
    tol_herglotz: float = TOL_HERGLOTZ
    tol_recon: float = 1e-5
    tol_opid: float = 1e-8
    delta_contr: float = 1e-8
    cond_max: float = 1e10
    smooth_hamiltonian: bool = False

    @property
    def h(self):
        return self.X / self.N


def line_points(eta, a, n_xi):
    """Spectral points ``zeta_n = (xi_n + i eta)/2`` with ``xi_n = (n - N/2) 2a/N``."""
    xi = (np.arange(n_xi) - n_xi // 2) * (2.0 * a / n_xi)
    return xi, 0.5 * (xi + 1j * eta)


@dataclass(frozen=True)
class ContractiveLineSamples:
    """``Mhat^D((xi + i eta)/2)`` on a uniform grid ``xi_n = (n - N/2) dxi``."""

    eta: float
    xi: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        n = xi.size
        if n < 4 or n & (n - 1):
            raise GridMismatch(f"N_xi = {n} must be a power of two")
        d = np.diff(xi)
        if np.ptp(d) > 1e-9 * d.mean() or abs(xi[n // 2]) > 1e-9 * d.mean():
            raise GridMismatch("xi grid must be uniform with xi[N/2] = 0")
        if not self.eta > 0:
            raise GridMismatch("eta must be positive")
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 3 or vals.shape[0] != n:
            raise InvalidWeylData("one m x m value per xi point required")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "values", vals)

    @property
    def m(self):
        return self.values.shape[1]

    @property
    def dxi(self):
        return self.xi[1] - self.xi[0]

    @property
    def a(self):
        return -self.xi[0]

    @property
    def zeta(self):
        return 0.5 * (self.xi + 1j * self.eta)


@dataclass(frozen=True)
class AccelerantProfile:
    """``Lambda`` at the cell midpoints ``x_grid``; ``Lambda_prime[k]`` is the
    difference quotient across the node ``k h`` (``Lambda(0) = 0`` anchors ``k = 0``)."""

    x_grid: np.ndarray
    h: float
    Lambda: np.ndarray
    Lambda_prime: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def m(self):
        return self.Lambda.shape[1]

    @property
    def N(self):
        return self.Lambda.shape[0]


@dataclass(frozen=True)
class StructuredKernelSystem:
    x_grid: np.ndarray
    h: float
    S: np.ndarray  # (N m, N m)
    weights: np.ndarray
    chol: np.ndarray  # lower Cholesky factor of S
    m: int

    def block(self, i, k):
        m = self.m
        return self.S[i * m : (i + 1) * m, k * m : (k + 1) * m]


@dataclass(frozen=True)
class CanonicalHamiltonian:
    """``E`` at the nodes ``x_nodes`` and ``H = gamma* gamma`` at the midpoints ``x_mid``."""

    x_nodes: np.ndarray
    x_mid: np.ndarray
    E: np.ndarray
    H: np.ndarray
    opid_residual: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def m(self):
        return self.H.shape[1] // 2


@dataclass(frozen=True)
class BetaGammaTrace:
    x_grid: np.ndarray
    v: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    beta1: np.ndarray = None
    beta_breve: np.ndarray = None
    beta: np.ndarray = None
    v_spline: object = field(default=None, repr=False)

    @property
    def m(self):
        return self.v.shape[1]

    @property
    def gamma(self):
        return np.concatenate([self.gamma1, self.gamma2], axis=2)

    def residuals(self):
        """Max norms of the five frame identities along the trace (derivatives by centered differences)."""
        m = self.m
        S3 = np.diag(np.r_[np.ones(m), -np.ones(m)])
        b, g = self.beta, self.gamma
        bp = np.gradient(b, self.x_grid, axis=0, edge_order=2)
        gp = np.gradient(g, self.x_grid, axis=0, edge_order=2)
        I = np.eye(m)
        nrm = lambda A: float(np.linalg.norm(A, 2, axis=(1, 2)).max())  # noqa: E731
        return {
            "beta_S3_beta_minus_I": nrm(b @ S3 @ _H(b) - I),
            "gamma_S3_gamma_plus_I": nrm(g @ S3 @ _H(g) + I),
            "beta_S3_gamma": nrm(b @ S3 @ _H(g)),
            "dbeta_S3_beta": nrm(bp @ S3 @ _H(b)),
            "dgamma_S3_gamma": nrm(gp @ S3 @ _H(g)),
        }


# -- Lambda ------------------------------------------------------------------------


def _tail_fit(s):
    """Least-squares fit ``c0 + c1 R(xi)``, ``R = 1/(i(xi + i eta) - eta)``, on ``|xi| > a/2``.

    The fitted part is inverted in closed form, which removes the slowly
    decaying part of the integrand before truncation.
    """
    m = s.m
    R = 1.0 / (1j * (s.xi + 1j * s.eta) - s.eta)
    sel = np.abs(s.xi) > s.a / 2
    B = np.stack([np.ones(sel.sum()), R[sel]], axis=1)
    coef = np.linalg.lstsq(B, s.values[sel].reshape(sel.sum(), m * m), rcond=None)[0]
    return R, coef[0].reshape(m, m), coef[1].reshape(m, m)


def _oscillatory_sum(g, xi, x):
    """``sum_n g_n exp(-i x_k xi_n)`` for all ``x_k``; chirp-z for uniform ``x``."""
    dxi = xi[1] - xi[0]
    if x.size > 2 and np.ptp(np.diff(x)) < 1e-9 * (x[1] - x[0]):
        hx = x[1] - x[0]
        pre = np.exp(-1j * x[0] * dxi * np.arange(xi.size))
        s = czt(g * pre[:, None, None], m=x.size, w=np.exp(-1j * hx * dxi), a=1.0, axis=0)
        return s * np.exp(-1j * x * xi[0])[:, None, None]
    E = np.exp(-1j * np.outer(x, xi))
    return np.einsum("kn,nij->kij", E, g)


def recover_lambda(samples, x_grid, tail_correction=True, tol_fourier=1e-2, tol=TOL_HERGLOTZ):
    """``Lambda(x) = (2 pi i)^{-1} e^{x eta} sum dxi e^{-i x xi} (xi + i eta)^{-1} Mhat^D((xi + i eta)/2)``.

    ``x_grid`` is the uniform midpoint grid of the reconstruction (positive
    points).  Trapezoid weights are used on the xi grid.  With
    ``tail_correction`` the fitted ``c0 + c1 R(xi)`` is subtracted before
    truncation and its exact transform ``-c0 + c1 (1 - e^{-eta x})/eta``
    added back; the fit is linear in the data, so the map stays linear.
    """
    s = samples
    x = np.asarray(x_grid, dtype=float)
    norms = np.linalg.norm(s.values, 2, axis=(1, 2))
    if norms.max() > 1 + tol:
        raise InvalidWeylData(f"samples not contractive (max norm {norms.max():.6g})")
    if x.max() > np.pi / s.dxi:
        raise GridMismatch(f"x up to {x.max():.4g} exceeds the Nyquist limit pi/dxi = {np.pi / s.dxi:.4g}")
    tail_bound = float(norms.max() / (np.pi * s.a))
    if tail_bound > tol_fourier:
        raise GridMismatch(f"truncation tail bound {tail_bound:.3g} exceeds {tol_fourier:.3g}; increase a")
    m = s.m
    vals = s.values
    c0 = c1 = np.zeros((m, m), dtype=complex)
    if tail_correction:
        R, c0, c1 = _tail_fit(s)
        vals = vals - c0 - R[:, None, None] * c1
    w = np.full(s.xi.size, s.dxi)
    w[0] *= 0.5
    g = (w / (s.xi + 1j * s.eta))[:, None, None] * vals
    L = _oscillatory_sum(g, s.xi, x) * (np.exp(x * s.eta) / (2j * np.pi))[:, None, None]
    L = L - c0 + ((1 - np.exp(-s.eta * x)) / s.eta)[:, None, None] * c1
    h = x[1] - x[0] if x.size > 1 else 2 * x[0]
    Lprev = np.concatenate([np.zeros((1, m, m)), L[:-1]])
    d = (L - Lprev) / h
    lam0 = 1.5 * L[0] - 0.5 * L[1] if x.size > 1 else L[0]
    diag = {
        "tail_bound": tail_bound,
        "nyquist_limit": float(np.pi / s.dxi),
        "lambda0_raw": float(np.linalg.norm(lam0, 2)),
        "tail_fit_c0": float(np.linalg.norm(c0, 2)),
        "tail_fit_c1": float(np.linalg.norm(c1, 2)),
        "lambda_prime_l2": float(np.sqrt(h * np.sum(np.abs(d) ** 2))),
    }
    return AccelerantProfile(x, h, L, d, diag)


# -- S_X ---------------------------------------------------------------------------


def assemble_kernel_system(acc):
    """Nystrom matrix ``S = I + h K`` with ``K_ik = -h sum_{l <= min(i,k)} d_{i-l} d_{k-l}*``.

    This is the midpoint discretization of
    ``K(y, s) = -1/2 int_{|y-s|}^{y+s} Lambda'((t+y-s)/2) Lambda'((t+s-y)/2)* dt``
    (substitute ``u = (t - |y-s|)/2``).  Positivity of every leading block
    is established by one Cholesky factorization.
    """
    d, h = acc.Lambda_prime, acc.h
    N, m = d.shape[0], d.shape[1]
    K = np.zeros((N, N, m, m), dtype=complex)
    for off in range(N):
        prod = d[: N - off] @ _H(d[off:])  # d_l d_{l+off}*
        cs = -h * np.cumsum(prod, axis=0)
        idx = np.arange(N - off)
        K[idx, idx + off] = cs
        if off:
            K[idx + off, idx] = _H(cs)
    S = np.eye(N * m) + h * K.transpose(0, 2, 1, 3).reshape(N * m, N * m)
    defect = np.abs(S - _H(S)).max()
    if defect > 1e-12 * max(1.0, np.abs(S).max()):
        raise NotStrictlyPositive(0.0, f"S not Hermitian (defect {defect:.3g})")
    c, info = sla.lapack.zpotrf(S, lower=1, clean=1)
    if info > 0:
        k = int(np.ceil(info / m))
        raise NotStrictlyPositive(k * h, f"S_x loses positive definiteness at x = {k * h:.6g}")
    if info < 0:  # pragma: no cover - argument error
        raise ValueError("zpotrf argument error")
    return StructuredKernelSystem(acc.x_grid, h, S, np.full(N, h), c, m)


def _opid_residual(sys, acc):
    """Per-node Frobenius norm of the leading block of ``A S - S A* - i Pi S3 Pi*``, scaled."""
    N, m, h = acc.N, acc.m, acc.h
    T = np.tril(np.ones((N, N)), -1) + 0.5 * np.eye(N)
    TS = np.kron(T, np.eye(m)) @ sys.S
    L = acc.Lambda.reshape(N * m, m)
    R = -1j * h * (TS + _H(TS) + L @ _H(L) - np.kron(np.ones((N, N)), np.eye(m)))
    P = np.cumsum(np.cumsum(np.abs(R) ** 2, axis=0), axis=1)
    idx = (np.arange(1, N + 1) * m) - 1
    lead = np.sqrt(P[idx, idx])
    scale = 1.0 + np.maximum.accumulate(np.abs(np.diag(sys.S)).reshape(N, m).max(axis=1))
    return lead / scale


def extract_hamiltonian(sys, acc, smooth=False):
    """Gram trace ``E(x_k) = Pi_{x_k}* S_{x_k}^{-1} Pi_{x_k}`` and ``H`` at the midpoints.

    With ``Z = L^{-1} [Lambda | I] sqrt(h)`` (``L`` the Cholesky factor),
    row block ``k`` of ``Z`` is ``gamma`` at ``y_k`` up to a unitary, so
    ``E_{k+1} = E_k + h z_k* z_k`` and ``H(y_k) = z_k* z_k`` is exactly
    Hermitian PSD of rank ``<= m``.
    """
    N, m, h = acc.N, acc.m, acc.h
    P = np.concatenate([acc.Lambda, np.broadcast_to(np.eye(m), (N, m, m))], axis=2)
    Z = sla.solve_triangular(sys.chol, P.reshape(N * m, 2 * m), lower=True).reshape(N, m, 2 * m)
    H = _H(Z) @ Z
    if smooth:
        Hs = H.copy()
        Hs[1:-1] = 0.25 * H[:-2] + 0.5 * H[1:-1] + 0.25 * H[2:]
        H = hermitian_part(Hs)
    E = np.concatenate([np.zeros((1, 2 * m, 2 * m)), h * np.cumsum(H, axis=0)])
    x_nodes = np.arange(N + 1) * h
    ev = np.linalg.eigvalsh(H)
    diag = {
        "H_min_eig": float(ev[:, 0].min()),
        "H_small_eigs_max": float(np.abs(ev[:, :m]).max()),
        "H_rank_gap_min": float(ev[:, m].min()),
    }
    res = _opid_residual(sys, acc)
    diag["opid_residual_max"] = float(res.max())
    return CanonicalHamiltonian(x_nodes, acc.x_grid, E, H, res, diag)


# -- beta / gamma ------------------------------------------------------------------


def _v_spline(x_mid, v):
    m = v.shape[1]
    xs = np.concatenate([[0.0], x_mid])
    vs = np.concatenate([np.zeros((1, m, m)), v])
    return CubicSpline(xs, vs, axis=0)


def _rk4_linear(rhs_mats, y0, h, left=False):
    """Fixed-step RK4 for ``Y' = Y A(x)`` given ``A`` at nodes and half nodes.

    ``rhs_mats`` is ``(A_nodes (n+1), A_half (n))``.
    """
    An, Ah = rhs_mats
    Y = np.empty((An.shape[0],) + y0.shape, dtype=complex)
    Y[0] = y0
    for k in range(Ah.shape[0]):
        y = Y[k]
        k1 = y @ An[k]
        k2 = (y + 0.5 * h * k1) @ Ah[k]
        k3 = (y + 0.5 * h * k2) @ Ah[k]
        k4 = (y + h * k3) @ An[k + 1]
        Y[k + 1] = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return Y


def _check_contraction(x, v, delta):
    nv = np.linalg.norm(v, 2, axis=(1, 2))
    bad = np.nonzero(nv >= 1 - delta)[0]
    if bad.size:
        raise ContractionLost(x[bad[0]], f"|v| = {nv[bad[0]]:.6g} at x = {x[bad[0]]:.6g}")
    return nv


def recover_gamma(ham, delta_contr=1e-8, cond_max=1e10):
    """``v = H22^{-1} H21`` and ``gamma2' = gamma2 v' v* (I - v v*)^{-1}``, ``gamma2(0) = I``."""
    m = ham.m
    H21, H22 = ham.H[:, m:, :m], ham.H[:, m:, m:]
    cond = np.linalg.cond(H22)
    bad = np.nonzero(~(cond <= cond_max))[0]
    if bad.size:
        raise DegenerateHamiltonian(ham.x_mid[bad[0]], f"H22 condition {cond[bad[0]]:.3g} at x = {ham.x_mid[bad[0]]:.6g}")
    v = np.linalg.solve(H22, H21)
    _check_contraction(ham.x_mid, v, delta_contr)
    sp = _v_spline(ham.x_mid, v)
    dsp = sp.derivative()
    x = ham.x_nodes
    h = x[1] - x[0]
    xh = x[:-1] + 0.5 * h
    I = np.eye(m)

    def A(t):
        V, Vp = sp(t), dsp(t)
        _check_contraction(t, V, delta_contr)
        return Vp @ _H(V) @ np.linalg.inv(I - V @ _H(V))

    g2 = _rk4_linear((A(x), A(xh)), I.astype(complex), h)
    vn = sp(x)
    return BetaGammaTrace(x, vn, g2 @ vn, g2, v_spline=sp)


def recover_beta(trace, cond_max=1e10):
    """``beta_breve = (I, v*)``, ``beta1' = beta1 v'* v (I - v* v)^{-1}``, ``beta = beta1 beta_breve``."""
    m = trace.m
    sp = trace.v_spline if trace.v_spline is not None else CubicSpline(trace.x_grid, trace.v, axis=0)
    dsp = sp.derivative()
    x = trace.x_grid
    h = x[1] - x[0]
    xh = x[:-1] + 0.5 * h
    I = np.eye(m)

    def A(t):
        V, Vp = sp(t), dsp(t)
        F = I - _H(V) @ V  # beta_breve S3 beta_breve*
        cond = np.linalg.cond(F)
        bad = np.nonzero(~(cond <= cond_max))[0]
        if bad.size:
            raise DegenerateFrame(t[bad[0]])
        return _H(Vp) @ V @ np.linalg.inv(F)

    b1 = _rk4_linear((A(x), A(xh)), I.astype(complex), h)
    bb = np.concatenate([np.broadcast_to(I, trace.v.shape), _H(trace.v)], axis=2)
    beta = b1 @ bb
    return BetaGammaTrace(x, trace.v, trace.gamma1, trace.gamma2, b1, bb, beta, sp)


def extract_phi(trace, with_report=False):
    """``phi = -beta' S3 gamma*`` with ``beta'`` by centered differences, Hermitian-projected.

    The sign pairs with the convention ``W = 2^{-1/2}[[-iI, iI], [I, I]]``:
    conjugating the Dirac form by this ``W`` produces the off-diagonal block
    ``-i phi``, so the frame identity reads ``beta' S3 gamma* = -phi``.
    """
    m = trace.m
    S3 = np.diag(np.r_[np.ones(m), -np.ones(m)])
    bp = np.gradient(trace.beta, trace.x_grid, axis=0, edge_order=2)
    raw = -bp @ S3 @ _H(trace.gamma)
    phi = hermitian_part(raw)
    defect = float(np.linalg.norm(raw - phi, 2, axis=(1, 2)).max())
    X = float(trace.x_grid[-1])
    path = PotentialPath(X, phi, interpolation="piecewise-linear")
    if with_report:
        return path, {"phi_antihermitian_defect": defect}
    return path


# -- drivers -----------------------------------------------------------------------


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except WeylkitError as exc:
        exc.stage = name
        raise


def reconstruct_from_contractive(line, cfg=None):
    """Run the pipeline from contractive line samples.  Returns ``(phi_hat, diagnostics, parts)``."""
    cfg = cfg or ReconstructionConfig()
    timings = {}
    t0 = time.perf_counter()
    x_mid = (np.arange(cfg.N) + 0.5) * cfg.h
    acc = _stage("recover_lambda", recover_lambda, line, x_mid, cfg.tail_correction, cfg.tol_fourier, cfg.tol_herglotz)
    timings["recover_lambda"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    sys = _stage("assemble_kernel_system", assemble_kernel_system, acc)
    timings["assemble_kernel_system"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    ham = _stage("extract_hamiltonian", extract_hamiltonian, sys, acc, cfg.smooth_hamiltonian)
    timings["extract_hamiltonian"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    tr = _stage("recover_gamma", recover_gamma, ham, cfg.delta_contr, cfg.cond_max)
    tr = _stage("recover_beta", recover_beta, tr, cfg.cond_max)
    timings["recover_beta_gamma"] = time.perf_counter() - t0
    phi_hat, rep = _stage("extract_phi", extract_phi, tr, True)
    diag = {}
    diag.update(acc.diagnostics)
    diag.update(ham.diagnostics)
    diag["S_hermitian_defect"] = float(np.abs(sys.S - _H(sys.S)).max())
    diag["S_norm"] = float(np.linalg.norm(sys.S, 2))
    diag["opid_tolerance"] = cfg.tol_opid
    diag["opid_ok"] = bool(ham.opid_residual.max() <= cfg.tol_opid)
    diag["v_norm_max"] = float(np.linalg.norm(tr.v, 2, axis=(1, 2)).max())
    diag.update(tr.residuals())
    diag.update(rep)
    diag["contractive_max_norm"] = float(np.linalg.norm(line.values, 2, axis=(1, 2)).max())
    diag["timings"] = timings
    parts = {"accelerant": acc, "system": sys, "hamiltonian": ham, "trace": tr}
    return phi_hat, diag, parts


def _line_from_points(points, values, eta=None):
    """Recover ``(eta, xi)`` from points ``(xi + i eta)/2`` in ascending order of ``xi``."""
    pts = np.asarray(points, dtype=complex)
    order = np.argsort(pts.real)
    pts, values = pts[order], np.asarray(values)[order]
    etas = 2 * pts.imag
    if np.ptp(etas) > 1e-9 * max(1.0, etas.max()):
        raise GridMismatch("samples are not on a single line (xi + i eta)/2")
    eta = float(etas.mean()) if eta is None else eta
    return ContractiveLineSamples(eta, 2 * pts.real, values)


def reconstruct_pipeline(M_samples, alpha=None, cfg=None):
    """``phi`` from Dirac Weyl samples on the line ``(xi + i eta)/2``.

    Returns ``(phi_hat, diagnostics)``; errors carry the failing stage in ``.stage``.
    """
    if isinstance(M_samples, WeylSampleSet) and M_samples.kind != "dirac-M":
        raise ValueError("reconstruct_pipeline expects dirac-M samples")
    alpha = alpha or BoundaryParam.dirichlet(M_samples.m)
    Mh = _stage("dirac_to_contractive", dirac_to_contractive, M_samples.values, alpha)
    line = _stage("line", _line_from_points, M_samples.points, Mh)
    phi, diag, _ = reconstruct_from_contractive(line, cfg)
    return phi, diag


def reconstruct_from_schrodinger(Mhat_samples, j, cfg=None):
    """``phi`` from one Schrodinger m-function; samples keyed by ``zeta`` with ``z = zeta**2``.

    Returns ``(phi_hat, diagnostics, V_report)``.
    """
    zeta = Mhat_samples.points
    Mh = _stage("schrodinger_to_contractive", schrodinger_to_contractive, Mhat_samples.values, j, zeta)
    line = _stage("line", _line_from_points, zeta, Mh)
    phi, diag, _ = reconstruct_from_contractive(line, cfg)
    return phi, diag, v_report(phi, j)


def v_report(phi, j):
    """Formal ``V_j = phi^2 + (-1)^j phi'`` on the nodes of ``phi`` (``phi'`` finite-differenced)."""
    x = phi.nodes
    P = phi.values
    P2 = P @ P
    dP = np.gradient(P, x, axis=0, edge_order=2)
    return {"x": x, "phi_squared": P2, "phi_prime": dP, "V": P2 + (-1) ** j * dP, "formal": True}


def relative_l2_error(phi_hat, phi_true):
    """Relative ``L^2[0, X]`` error of ``phi_hat`` against a callable or :class:`PotentialPath`.

    Trapezoid rule on the nodes of ``phi_hat``; absolute error when the
    reference vanishes.
    """
    x = phi_hat.nodes
    if isinstance(phi_true, PotentialPath):
        ref = phi_true.at(x)
    else:
        ref = np.array([np.asarray(phi_true(t), dtype=complex).reshape(phi_hat.m, phi_hat.m) for t in x])
    w = np.full(x.size, x[1] - x[0])
    w[[0, -1]] *= 0.5
    num = np.sqrt(np.sum(w * np.sum(np.abs(phi_hat.values - ref) ** 2, axis=(1, 2))))
    den = np.sqrt(np.sum(w * np.sum(np.abs(ref) ** 2, axis=(1, 2))))
    return float(num / den) if den > 0 else float(num)
