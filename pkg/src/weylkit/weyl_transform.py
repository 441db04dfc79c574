"""Exact algebraic maps between Weyl-function flavours.

Everything here is pointwise matrix algebra on single matrices or stacks
``(..., m, m)``.  Near-singular denominators raise instead of being
regularized, so downstream code learns which samples are unusable.
"""
import numpy as np

from .errors import CayleySingular, InvalidBoundaryParam, MoebiusSingular, SingularWeyl
from .linalg_core import TOL_PARAM, BoundaryParam, J_matrix

__all__ = [
    "boundary_transform",
    "dirac_to_contractive",
    "contractive_to_dirac",
    "schrodinger_to_contractive",
    "susy_partner",
    "COND_MAX",
]

COND_MAX = 1e12


def _H(A):
    return np.conj(np.swapaxes(A, -1, -2))


def _right_divide(Nm, D, exc, what):
    """``Nm D^{-1}`` with a condition check on ``D``."""
    if np.any(~np.isfinite(D)) or np.any(np.linalg.cond(D) > COND_MAX):
        raise exc(f"{what} is numerically singular")
    return _H(np.linalg.solve(_H(D), _H(Nm)))


def _as_param(a, m):
    if isinstance(a, BoundaryParam):
        return a
    return BoundaryParam.from_matrix(a) if a is not None else BoundaryParam.dirichlet(m)


def boundary_transform(M_delta, alpha, delta):
    """Weyl function at ``alpha`` from its value at ``delta``:
    ``[-a J d* + a d* M][a d* + a J d* M]^{-1}``."""
    M = np.asarray(M_delta, dtype=complex)
    m = M.shape[-1]
    alpha, delta = _as_param(alpha, m), _as_param(delta, m)
    a, d = alpha.alpha, delta.alpha
    J = J_matrix(m)
    ad, aJd = a @ _H(d), a @ J @ _H(d)
    return _right_divide(-aJd + ad @ M, ad + aJd @ M, MoebiusSingular, "Moebius denominator")


def _frame(alpha, tol=TOL_PARAM):
    """``(a1* + i a2*, a1 + i a2)`` after checking ``(a1 + i a2)(a1* - i a2*) = I``."""
    a1, a2 = alpha.alpha1, alpha.alpha2
    right = a1 + 1j * a2
    left = _H(a1) + 1j * _H(a2)
    if np.linalg.norm(right @ (_H(a1) - 1j * _H(a2)) - np.eye(alpha.m), 2) > tol * 10:
        raise InvalidBoundaryParam("alpha1 + i alpha2 is not unitary")
    return left, right


def dirac_to_contractive(M, alpha=None):
    """Contractive function ``(a1* + i a2*)(M - iI)(M + iI)^{-1}(a1 + i a2)``."""
    M = np.asarray(M, dtype=complex)
    m = M.shape[-1]
    left, right = _frame(_as_param(alpha, m))
    I = np.eye(m)
    C = _right_divide(M - 1j * I, M + 1j * I, CayleySingular, "M + iI")
    return left @ C @ right


def contractive_to_dirac(Mhat, alpha=None):
    """Inverse of :func:`dirac_to_contractive`.

    With ``T = (a1 - i a2) Mhat (a1* - i a2*)`` (the unitary frame removed),
    returns ``i (I + T)(I - T)^{-1}``.
    """
    Mhat = np.asarray(Mhat, dtype=complex)
    m = Mhat.shape[-1]
    alpha = _as_param(alpha, m)
    _frame(alpha)
    a1, a2 = alpha.alpha1, alpha.alpha2
    T = (a1 - 1j * a2) @ Mhat @ (_H(a1) - 1j * _H(a2))
    I = np.eye(m)
    return _right_divide(1j * (I + T), I - T, CayleySingular, "I - Mhat")


def schrodinger_to_contractive(Mhat_j, j, zeta):
    """``(-1)^(j+1) (Mhat_j - i zeta)(Mhat_j + i zeta)^{-1}`` with ``Im zeta > 0``."""
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    Mj = np.asarray(Mhat_j, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    if np.any(zeta.imag <= 0):
        raise ValueError("zeta must lie in the open upper half-plane")
    iz = (1j * zeta)[..., None, None] * np.eye(Mj.shape[-1])
    sign = 1.0 if j == 1 else -1.0
    return sign * _right_divide(Mj - iz, Mj + iz, CayleySingular, "Mhat_j + i zeta")


def susy_partner(Mhat_1, z):
    """The partner m-function ``-z Mhat_1^{-1}`` (an involution)."""
    M = np.asarray(Mhat_1, dtype=complex)
    z = np.asarray(z, dtype=complex)
    I = np.eye(M.shape[-1])
    return _right_divide(-z[..., None, None] * I, M, SingularWeyl, "Mhat_1")
