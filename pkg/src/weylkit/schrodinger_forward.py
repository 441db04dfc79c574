"""Distributional Schrodinger operators ``-d^2/dx^2 + phi^2 + (-1)^j phi'``.

The potential contains ``phi'`` which may only exist as a distribution, so
everything here runs through the first-order quasi-derivative system

    (f; f^[1,j])' = [[(-1)^j phi, I], [-z I, (-1)^(j+1) phi]] (f; f^[1,j]),
    f^[1,j] = f' + (-1)^(j+1) phi f,

and ``phi'`` is never formed.  Cells are propagated exactly (see
:mod:`weylkit._propagators`); beyond ``X`` the equation is free and the
decaying solution is ``e^{i zeta x}`` with ``zeta = sqrt(z)``, ``Im zeta > 0``.
"""
from dataclasses import dataclass

import numpy as np

from ._parallel import chunked_map
from ._propagators import quasi_coefficients, recessive_solution, riccati_sweep, sweep
from .dirac_forward import MATCH_COND_MAX, _weyl_dirac
from .errors import InvalidShape, InvalidSpectralPoint, SingularWeyl
from .linalg_core import BoundaryParam, imag_part

__all__ = [
    "QuasiState",
    "QuasiTrace",
    "SchrodingerFundamental",
    "GreenEvaluation",
    "upper_sqrt",
    "propagate_quasi",
    "fundamental_system",
    "compute_weyl_schrodinger",
    "schrodinger_weyl_solution",
    "green_function",
    "schrodinger_identity_residual",
]


def _check_j(j):
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    return j


def upper_sqrt(z):
    """Square root with positive imaginary part (``z`` off ``[0, inf)``)."""
    r = np.sqrt(np.asarray(z, dtype=complex))
    return np.where(r.imag < 0, -r, r)


def _check_z(z):
    z = np.asarray(z, dtype=complex)
    if np.any((z.imag == 0) & (z.real >= 0)):
        raise InvalidSpectralPoint("z must lie off the half-line [0, inf)")
    return z


@dataclass(frozen=True)
class QuasiState:
    """A (possibly matrix-valued) solution value ``f`` and its quasi-derivative."""

    j: int
    f: np.ndarray
    f_quasi: np.ndarray

    def __post_init__(self):
        _check_j(self.j)
        f = np.atleast_2d(np.asarray(self.f, dtype=complex))
        fq = np.atleast_2d(np.asarray(self.f_quasi, dtype=complex))
        if f.shape != fq.shape:
            raise InvalidShape("f and its quasi-derivative must have the same shape")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "f_quasi", fq)


@dataclass(frozen=True)
class QuasiTrace:
    j: int
    z: complex
    x: np.ndarray
    f: np.ndarray
    f_quasi: np.ndarray


@dataclass(frozen=True)
class SchrodingerFundamental:
    """``s_j, c_j`` and their quasi-derivatives at the grid nodes."""

    j: int
    z: complex
    x: np.ndarray
    s: np.ndarray
    s_quasi: np.ndarray
    c: np.ndarray
    c_quasi: np.ndarray

    def wronskian(self):
        """``(s^[1])* c - s* c^[1]`` per node; constant ``I`` for real ``z``."""
        H = lambda A: np.conj(np.swapaxes(A, 1, 2))  # noqa: E731
        return H(self.s_quasi) @ self.c - H(self.s) @ self.c_quasi


@dataclass(frozen=True)
class GreenEvaluation:
    j: int
    z: complex
    x: float
    x_prime: float
    value: np.ndarray


def propagate_quasi(phi, j, z, init, x0=0.0, x1=None):
    """Solve the quasi-derivative system from ``x0`` to ``x1`` (default ``X``).

    The returned trace holds the grid nodes between the endpoints plus the
    endpoints themselves.
    """
    _check_j(j)
    if init.j != j:
        raise ValueError("initial state belongs to the other quasi-derivative")
    if init.f.shape[0] != phi.m:
        raise InvalidShape(f"initial state has {init.f.shape[0]} rows, expected {phi.m}")
    x1 = phi.X if x1 is None else x1
    z = complex(z)
    Y0 = np.vstack([init.f, init.f_quasi])[None]
    xs, st = sweep(phi, lambda P: quasi_coefficients(P, np.array([z]), j), Y0, x0, x1)
    m = phi.m
    return QuasiTrace(j, z, xs, st[:, 0, :m], st[:, 0, m:])


def fundamental_system(phi, j, z, x1=None):
    """``s_j`` (``s(0) = 0``, ``s^[1](0) = I``) and ``c_j`` (``c(0) = I``, ``c^[1](0) = 0``)."""
    m = phi.m
    I, O = np.eye(m), np.zeros((m, m))
    init = QuasiState(j, np.hstack([O, I]), np.hstack([I, O]))
    tr = propagate_quasi(phi, j, z, init, 0.0, x1)
    return SchrodingerFundamental(
        j, tr.z, tr.x, tr.f[:, :, :m], tr.f_quasi[:, :, :m], tr.f[:, :, m:], tr.f_quasi[:, :, m:]
    )


def _quasi_riccati(phi, j, zetas, substeps=1, store=False, x_start=None, extra=()):
    tail = (1j * zetas)[:, None, None] * np.eye(phi.m)
    z = zetas**2
    x_start = phi.X if x_start is None else max(phi.X, x_start)
    return riccati_sweep(phi, lambda P: quasi_coefficients(P, z, j), tail, x_start, substeps, store, extra)


def compute_weyl_schrodinger(phi, j, z, method="via-dirac", branch=1, cond_max=MATCH_COND_MAX):
    """Dirichlet m-function ``Mhat_j(z)`` with ``psi_j = c_j + s_j Mhat_j`` decaying.

    ``via-dirac`` uses ``Mhat_1 = zeta M`` and ``Mhat_2 = -zeta M^{-1}`` with
    the Dirac Weyl function at ``alpha_0``; ``direct`` matches the
    quasi-derivative system to the free decaying tail.  ``branch=-1`` runs
    the via-dirac route with ``-zeta`` (lower half-plane Dirac data), which
    must give the same answer.
    """
    _check_j(j)
    z = _check_z(z)
    scalar = z.ndim == 0
    zs = z.reshape(-1)
    zeta = upper_sqrt(zs)
    if method == "via-dirac":
        zeta = zeta * branch
        M = _weyl_dirac(phi, zeta, BoundaryParam.dirichlet(phi.m), cond_max)
        if j == 1:
            out = zeta[:, None, None] * M
        else:
            if np.any(np.linalg.cond(M) > cond_max):
                raise SingularWeyl("Dirac Weyl matrix numerically singular")
            out = -zeta[:, None, None] * np.linalg.inv(M)
    elif method == "direct":
        out = chunked_map(lambda zz: _quasi_riccati(phi, j, zz)[1], zeta)
    else:
        raise ValueError("method must be 'via-dirac' or 'direct'")
    return out[0] if scalar else out


def schrodinger_weyl_solution(phi, j, z, substeps=1, extra=(), x_start=None):
    """``psi_j(z, x)`` and its quasi-derivative at the sweep points; also ``Mhat_j``.

    Returns ``(x, psi, psi_quasi, Mhat)`` with ``psi(0) = I``.
    """
    _check_j(j)
    z = complex(_check_z(z))
    zeta = upper_sqrt(np.array([z]))
    xs, N0, Ns, Bs = _quasi_riccati(phi, j, zeta, substeps, True, x_start, extra)
    x, Y = recessive_solution(xs, Ns, Bs, np.eye(phi.m, dtype=complex))
    m = phi.m
    return x, Y[:, :m], Y[:, m:], N0[0]


def _at(x_grid, values, x):
    i = int(np.argmin(np.abs(x_grid - x)))
    return values[i]


def green_function(phi, j, z, x, x_prime):
    """Green's function of the Dirichlet operator: ``s_j(z, x) psi_j(conj z, x')*`` for ``x <= x'``."""
    _check_j(j)
    z = complex(_check_z(z))
    lo, hi = min(x, x_prime), max(x, x_prime)
    if lo < 0:
        raise ValueError("x and x_prime must be non-negative")
    # x <= x': s(z, x) psi(conj z, x')*; otherwise psi(z, x) s(conj z, x')*
    zs, zp = (z, z.conjugate()) if x <= x_prime else (z.conjugate(), z)
    m = phi.m
    I, O = np.eye(m), np.zeros((m, m))
    s_val = O if lo == 0 else propagate_quasi(phi, j, zs, QuasiState(j, O, I), 0.0, lo).f[-1]
    xg, psi, _, _ = schrodinger_weyl_solution(phi, j, zp, extra=(hi,), x_start=hi)
    psi_val = _at(xg, psi, hi)
    if x <= x_prime:
        G = s_val @ psi_val.conj().T
    else:
        G = psi_val @ s_val.conj().T
    return GreenEvaluation(j, z, float(x), float(x_prime), G)


def schrodinger_identity_residual(phi, j, z):
    """Residual of ``Im Mhat_j(z) = Im(z) int_0^inf psi* psi dx`` (Simpson plus exact tail)."""
    z = complex(_check_z(z))
    x, psi, _, M = schrodinger_weyl_solution(phi, j, z, substeps=2)
    F = np.conj(np.swapaxes(psi, 1, 2)) @ psi
    dx = np.diff(x[::2])
    integral = np.einsum("k,kij->ij", dx / 6.0, F[0:-1:2] + 4 * F[1::2] + F[2::2])
    integral += F[-1] / (2 * upper_sqrt(z).imag)
    R = imag_part(M) - z.imag * integral
    return float(np.linalg.norm(R, 2))
