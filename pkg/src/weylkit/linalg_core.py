"""Hermitian matrix helpers, the fixed structure matrices and boundary parameters.

Conventions used throughout the package:

* ``J = [[0, -I], [I, 0]]`` and ``S3 = diag(I, -I)`` are ``2m x 2m``.
* ``W = 2**-0.5 [[-iI, iI], [I, I]]`` is the unitary that conjugates the
  Dirac expression ``J d/dx + [[0, phi], [phi, 0]]`` into the form
  ``i(zeta S3 + S3 V)`` used by the reconstruction.
* Complex matrices serialize to JSON as ``{"rows", "cols", "re", "im"}``
  with row-major entry lists.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import InvalidBoundaryParam, InvalidShape, NotHermitian, NumericalFailure

__all__ = [
    "TOL_PARAM",
    "BoundaryParam",
    "StructureMatrices",
    "structure_matrices",
    "validate_boundary_param",
    "conjugate_by_W",
    "min_imag_eigenvalue",
    "imag_part",
    "hermitian_part",
    "random_boundary_param",
    "matrix_to_json",
    "matrix_from_json",
    "as_matrix",
]

TOL_PARAM = 1e-12


def as_matrix(value, m=None):
    """Coerce a scalar, nested list or JSON matrix dict to a complex 2-d array.

    A scalar with ``m`` given becomes ``value * I_m``.
    """
    if isinstance(value, dict):
        return matrix_from_json(value)
    arr = np.asarray(value, dtype=complex)
    if arr.ndim == 0:
        if m is None:
            return arr.reshape(1, 1)
        return arr * np.eye(m, dtype=complex)
    if arr.ndim == 1 and m is not None and arr.size == m * m:
        arr = arr.reshape(m, m)
    if arr.ndim != 2:
        raise InvalidShape(f"expected a matrix, got shape {arr.shape}")
    return arr


def hermitian_part(M):
    return 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))


def imag_part(M):
    """Matrix imaginary part ``(M - M*) / 2i`` (Hermitian)."""
    return (M - np.conj(np.swapaxes(M, -1, -2))) / 2j


def min_imag_eigenvalue(M):
    """Smallest eigenvalue of ``Im(M) = (M - M*)/(2i)``.

    Works on a single square matrix or a stack ``(..., m, m)``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2]:
        raise InvalidShape(f"square matrix required, got {M.shape}")
    try:
        ev = np.linalg.eigvalsh(imag_part(M))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalFailure(str(exc)) from exc
    return ev[..., 0]


@dataclass(frozen=True)
class StructureMatrices:
    J: np.ndarray
    S3: np.ndarray
    W: np.ndarray


def structure_matrices(m):
    """Return ``J``, ``S3`` and ``W`` of size ``2m``."""
    I = np.eye(m)
    Z = np.zeros((m, m))
    J = np.block([[Z, -I], [I, Z]]).astype(complex)
    S3 = np.block([[I, Z], [Z, -I]]).astype(complex)
    W = np.block([[-1j * I, 1j * I], [I, I]]) / np.sqrt(2.0)
    return StructureMatrices(J=J, S3=S3, W=W)


def J_matrix(m):
    return structure_matrices(m).J


def S3_matrix(m):
    return structure_matrices(m).S3


@dataclass(frozen=True)
class BoundaryParam:
    """Boundary condition ``alpha = (alpha1 alpha2)`` at ``x = 0``.

    Construction only checks shapes; use :func:`validate_boundary_param`
    (or :meth:`checked`) to test the algebraic conditions.
    """

    alpha1: np.ndarray
    alpha2: np.ndarray

    def __post_init__(self):
        a1 = np.array(self.alpha1, dtype=complex)
        a2 = np.array(self.alpha2, dtype=complex)
        if a1.ndim != 2 or a1.shape[0] != a1.shape[1] or a1.shape != a2.shape:
            raise InvalidShape(
                f"alpha1 and alpha2 must be equal square matrices, got {a1.shape} and {a2.shape}"
            )
        a1.setflags(write=False)
        a2.setflags(write=False)
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha2", a2)

    @property
    def m(self):
        return self.alpha1.shape[0]

    @property
    def alpha(self):
        """The ``m x 2m`` matrix ``(alpha1 alpha2)``."""
        return np.hstack([self.alpha1, self.alpha2])

    @classmethod
    def dirichlet(cls, m):
        """``alpha_0 = (I_m 0)``."""
        return cls(np.eye(m), np.zeros((m, m)))

    @classmethod
    def from_matrix(cls, alpha):
        alpha = np.asarray(alpha, dtype=complex)
        m = alpha.shape[0]
        if alpha.shape != (m, 2 * m):
            raise InvalidShape(f"alpha must be m x 2m, got {alpha.shape}")
        return cls(alpha[:, :m], alpha[:, m:])

    def initial_fundamental(self):
        """``Psi(zeta, 0, alpha) = (alpha*  J alpha*)``, a unitary ``2m x 2m`` matrix."""
        a = self.alpha
        J = J_matrix(self.m)
        return np.hstack([a.conj().T, J @ a.conj().T])

    def checked(self, tol=TOL_PARAM):
        ok, report = validate_boundary_param(self, tol)
        if not ok:
            raise InvalidBoundaryParam(f"boundary parameter residuals {report}")
        return self

    def to_json(self):
        return {"alpha1": matrix_to_json(self.alpha1), "alpha2": matrix_to_json(self.alpha2)}

    @classmethod
    def from_json(cls, obj, m=None):
        return cls(as_matrix(obj["alpha1"], m), as_matrix(obj["alpha2"], m))


def validate_boundary_param(alpha, tol=TOL_PARAM):
    """Check ``alpha alpha* = I`` and ``alpha J alpha* = 0``.

    Returns ``(ok, report)``.  ``report`` holds the two defining residuals
    plus the residuals of the dual identities
    ``alpha1* alpha1 + alpha2* alpha2 = I`` and ``alpha2* alpha1 = alpha1* alpha2``,
    which follow from the first two because the ``2m x 2m`` block matrix
    ``[[a1, a2], [-a2, a1]]`` is then unitary.
    """
    if not isinstance(alpha, BoundaryParam):
        alpha = BoundaryParam(*alpha)
    a1, a2 = alpha.alpha1, alpha.alpha2
    I = np.eye(alpha.m)
    H = lambda A: A.conj().T  # noqa: E731
    report = {
        "orthonormal": float(np.linalg.norm(a1 @ H(a1) + a2 @ H(a2) - I, 2)),
        "lagrangian": float(np.linalg.norm(a2 @ H(a1) - a1 @ H(a2), 2)),
        "dual_orthonormal": float(np.linalg.norm(H(a1) @ a1 + H(a2) @ a2 - I, 2)),
        "dual_lagrangian": float(np.linalg.norm(H(a2) @ a1 - H(a1) @ a2, 2)),
    }
    ok = report["orthonormal"] <= tol and report["lagrangian"] <= tol
    return ok, report


def conjugate_by_W(phi_value, tol=TOL_PARAM):
    """Conjugate the Dirac structure by ``W``.

    Returns ``(-W* J W, -W* [[0, phi], [phi, 0]] W)``.  The first equals
    ``i S3``; the second is ``[[0, Q], [Q*, 0]]`` with ``Q = -i phi``.
    """
    phi = as_matrix(phi_value)
    m = phi.shape[0]
    if phi.shape != (m, m):
        raise InvalidShape(f"phi must be square, got {phi.shape}")
    if np.linalg.norm(phi - phi.conj().T) > tol * max(1.0, np.linalg.norm(phi)):
        raise NotHermitian("phi must be Hermitian")
    sm = structure_matrices(m)
    Wh = sm.W.conj().T
    Z = np.zeros((m, m))
    V = np.block([[Z, phi], [phi, Z]])
    return -Wh @ sm.J @ sm.W, -Wh @ V @ sm.W


def random_boundary_param(m, rng):
    """Draw a valid boundary parameter ``alpha = U (cos T  sin T) Q*``.

    ``U`` and ``Q`` are random unitaries and ``T`` a random real diagonal;
    every valid ``alpha`` has this form.
    """
    Z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    Q, R = np.linalg.qr(Z)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    L = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    U, _ = np.linalg.qr(L)
    theta = rng.uniform(0, np.pi, size=m)
    a1 = U @ np.diag(np.cos(theta)) @ Q.conj().T
    a2 = U @ np.diag(np.sin(theta)) @ Q.conj().T
    return BoundaryParam(a1, a2)


def matrix_to_json(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise InvalidShape(f"expected a matrix, got shape {M.shape}")
    flat = M.ravel()
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "re": [float(v) for v in flat.real],
        "im": [float(v) for v in flat.imag],
    }


def matrix_from_json(obj):
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise InvalidShape("entry count must equal rows * cols")
    return (re + 1j * im).reshape(rows, cols)


def solve_checked(A, B, cond_max, exc, what="matrix"):
    """``A^{-1} B`` with a 1-norm condition estimate; raises ``exc`` past ``cond_max``."""
    A = np.asarray(A)
    lu, piv, info = sla.lapack.zgetrf(A.astype(complex))
    if info > 0:
        raise exc(f"{what} is singular")
    anorm = np.linalg.norm(A, 1)
    rcond, _ = sla.lapack.zgecon(lu, anorm, norm="1")
    if rcond == 0 or 1.0 / rcond > cond_max:
        raise exc(f"{what} condition number {1.0 / max(rcond, 1e-300):.3g} exceeds {cond_max:.1g}")
    x, _ = sla.lapack.zgetrs(lu, piv, np.asarray(B, dtype=complex))
    return x
