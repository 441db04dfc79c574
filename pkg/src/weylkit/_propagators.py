"""Exact cell propagators for the frozen-coefficient first-order systems.

Both first-order systems solved here have, on a cell where ``phi`` is
frozen to a Hermitian ``P``, a coefficient of the block form

    G = [[P, b I], [c I, -P]]

with scalars ``b``, ``c``.  Then ``G @ G = diag(P^2 + bc, P^2 + bc)``, so

    expm(t G) = diag(C, C) + diag(S, S) @ G,
    C = cosh(t sqrt(P^2 + bc)),  S = sinh(t sqrt(P^2 + bc)) / sqrt(P^2 + bc),

which we evaluate through the eigen-decomposition of ``P``.  The branch of
the square root drops out because both functions are even in it.

* Dirac system ``Psi' = -J (zeta - [[0, phi], [phi, 0]]) Psi``:
  ``P = -phi``, ``b = zeta``, ``c = -zeta``.
* Quasi-derivative system ``(f, f^[1,j])' = [[(-1)^j phi, I], [-z, (-1)^(j+1) phi]] (f, f^[1,j])``:
  ``P = (-1)^j phi``, ``b = 1``, ``c = -z``.
"""
import numpy as np

from .errors import Diverged

OVERFLOW_GUARD = 1e250


def _sinhc(w):
    small = np.abs(w) < 1e-3
    if not small.any():
        return np.sinh(w) / w
    ws = np.where(small, 1.0, w)
    w2 = w * w
    return np.where(small, 1.0 + w2 / 6.0 + w2 * w2 / 120.0, np.sinh(ws) / ws)


def right_divide(A, B):
    """``A B^{-1}`` for stacks of small square ``B``; closed form for ``m <= 2``."""
    m = B.shape[-1]
    if m == 1:
        return A / B
    if m == 2:
        a, b, c, d = B[..., 0, 0], B[..., 0, 1], B[..., 1, 0], B[..., 1, 1]
        det = a * d - b * c
        inv = np.empty_like(B)
        inv[..., 0, 0], inv[..., 0, 1] = d / det, -b / det
        inv[..., 1, 0], inv[..., 1, 1] = -c / det, a / det
        return A @ inv
    return np.swapaxes(np.linalg.solve(np.swapaxes(B, -1, -2), np.swapaxes(A, -1, -2)), -1, -2)


def cell_exponential(P, b, c, t):
    """``expm(t G)`` for a stack of spectral parameters.

    ``P`` is ``(m, m)`` Hermitian, ``b`` and ``c`` broadcast to shape ``(Z,)``.
    Returns an array of shape ``(Z, 2m, 2m)``.
    """
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    b, c = np.broadcast_arrays(b, c)
    m = P.shape[0]
    if m == 1:
        p = P[0, 0].real
        mu = np.sqrt(p * p + b * c + 0j)
        ch = np.cosh(t * mu)
        sh = t * _sinhc(t * mu)
        out = np.empty((b.size, 2, 2), dtype=complex)
        out[:, 0, 0] = ch + sh * p
        out[:, 0, 1] = b * sh
        out[:, 1, 0] = c * sh
        out[:, 1, 1] = ch - sh * p
        return out
    p, Q = np.linalg.eigh(P)
    mu = np.sqrt(p[None, :] ** 2 + (b * c)[:, None] + 0j)
    ch = np.cosh(t * mu)
    sh = t * _sinhc(t * mu)
    Qh = Q.conj().T
    Cm = (Q * ch[:, None, :]) @ Qh
    Sm = (Q * sh[:, None, :]) @ Qh
    out = np.empty((b.size, 2 * m, 2 * m), dtype=complex)
    SP = Sm @ P
    out[:, :m, :m] = Cm + SP
    out[:, :m, m:] = b[:, None, None] * Sm
    out[:, m:, :m] = c[:, None, None] * Sm
    out[:, m:, m:] = Cm - SP
    return out


def dirac_coefficients(phi_cell, zeta):
    return -phi_cell, zeta, -zeta


def quasi_coefficients(phi_cell, z, j):
    sign = 1.0 if j == 2 else -1.0
    return sign * phi_cell, np.ones_like(z), -z


def breakpoints(path, x0, x1, substeps=1, extra=()):
    """Segment endpoints from ``x0`` to ``x1`` aligned with the cell grid.

    Every grid node (and every point of ``extra``) strictly between the two
    endpoints is a breakpoint; each piece is further split into ``substeps``
    equal parts.  Beyond ``X`` the tail is treated as one cell.
    """
    lo, hi = min(x0, x1), max(x0, x1)
    eps = 1e-13 * max(path.X, hi)
    cand = np.concatenate([path.nodes, np.asarray(extra, dtype=float).ravel()])
    inner = np.unique(cand[(cand > lo + eps) & (cand < hi - eps)])
    pts = np.concatenate([[lo], inner, [hi]])
    if substeps > 1:
        fine = [pts[:1]]
        for a, b in zip(pts[:-1], pts[1:]):
            fine.append(np.linspace(a, b, substeps + 1)[1:])
        pts = np.concatenate(fine)
    if x1 < x0:
        pts = pts[::-1]
    return pts


def sweep(path, coeffs, Y0, x0, x1, substeps=1):
    """Propagate ``Y0`` (shape ``(Z, 2m, p)``) from ``x0`` to ``x1``.

    ``coeffs(phi_cell) -> (P, b, c)`` selects the system.  Returns the
    breakpoints and the stacked states, shape ``(len(xs), Z, 2m, p)``.
    """
    xs = breakpoints(path, x0, x1, substeps)
    Y = np.array(Y0, dtype=complex)
    states = np.empty((xs.size,) + Y.shape, dtype=complex)
    states[0] = Y
    cache = {}
    for i in range(1, xs.size):
        a, b = xs[i - 1], xs[i]
        k = int(path.cell_index(0.5 * (a + b)))
        t = b - a
        key = (k, round(t / path.h, 12))
        G = cache.get(key)
        if G is None:
            P, bb, cc = coeffs(path.cell_value(k))
            G = cell_exponential(P, bb, cc, t)
            if len(cache) < 8:
                cache[key] = G
        Y = G @ Y
        if not np.all(np.isfinite(Y)) or np.abs(Y).max() > OVERFLOW_GUARD:
            raise Diverged(f"solution overflow near x = {b:.6g}")
        states[i] = Y
    return xs, states


def riccati_sweep(path, coeffs, tail, x_start, substeps=1, store=False, extra=()):
    """Backward sweep of the normalized recessive solution ``(I; N_x)``.

    Starts from ``(I; tail)`` at ``x_start >= X`` (``tail`` has shape
    ``(Z, m, m)``) and advances down to ``0``.  ``N_x`` is the ratio of the
    second block to the first.  With ``store`` the sweep keeps every ``N_x``
    and the first blocks ``B`` of the unnormalized images; those give the
    actual solution through ``u(x_hi) = B^{-1} u(x_lo)``.
    """
    m = path.m
    Nx = np.array(tail, dtype=complex)
    xs = breakpoints(path, x_start, 0.0, substeps, extra)
    Ns, Bs = [Nx], []
    for i in range(1, xs.size):
        a, b = xs[i - 1], xs[i]
        k = int(path.cell_index(0.5 * (a + b)))
        G = cell_exponential(*coeffs(path.cell_value(k)), b - a)
        Z = G[:, :, :m] + G[:, :, m:] @ Nx
        B = Z[:, :m]
        try:
            with np.errstate(all="ignore"):
                Nx = right_divide(Z[:, m:], B)
        except np.linalg.LinAlgError:
            raise Diverged(f"Riccati sweep hit a singular block near x = {b:.6g}") from None
        if not np.all(np.isfinite(Nx)):
            raise Diverged(f"Riccati sweep broke down near x = {b:.6g}")
        if store:
            Ns.append(Nx)
            Bs.append(B)
    return xs, Nx, Ns, Bs


def recessive_solution(xs, Ns, Bs, u0):
    """Assemble ``(u; N u)`` at the sweep points in ascending order of ``x``.

    ``u0`` is the first block at ``x = 0`` (shape ``(m, p)``), single point only.
    """
    n = len(Ns)
    m = u0.shape[0]
    out = np.empty((n, 2 * m, u0.shape[1]), dtype=complex)
    u = u0
    for i in range(n - 1, -1, -1):
        out[i, :m] = u
        out[i, m:] = Ns[i][0] @ u
        if i > 0:
            u = np.linalg.solve(Bs[i - 1][0], u)
    return xs[::-1].copy(), out[::-1].copy()
