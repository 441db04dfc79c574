"""Grid-sampled Hermitian matrix potentials ``phi`` on ``[0, X]``.

A :class:`PotentialPath` is extended by zero beyond ``X``.  Every solver
freezes ``phi`` to one Hermitian matrix per cell; :attr:`PotentialPath.cells`
holds those matrices.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidShape, NotHermitian
from .linalg_core import TOL_PARAM, as_matrix

__all__ = ["PotentialPath", "potential_family", "FAMILIES"]

INTERPOLATIONS = ("piecewise-constant-midpoint", "piecewise-linear")


@dataclass(frozen=True)
class PotentialPath:
    """Nodal samples of ``phi`` on a uniform grid of ``N`` cells over ``[0, X]``.

    ``midpoints`` optionally carries exact samples at the cell centres; when
    absent (or when interpolation is piecewise linear) the cell value is the
    mean of the two nodal values.
    """

    X: float
    values: np.ndarray
    interpolation: str = "piecewise-constant-midpoint"
    midpoints: np.ndarray = None
    cells: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.ndim != 3 or vals.shape[1] != vals.shape[2] or vals.shape[0] < 2:
            raise InvalidShape(f"values must have shape (N+1, m, m), got {vals.shape}")
        if not self.X > 0:
            raise ValueError("X must be positive")
        if self.interpolation not in INTERPOLATIONS:
            raise ValueError(f"interpolation must be one of {INTERPOLATIONS}")
        _check_hermitian(vals)
        mids = None
        if self.midpoints is not None:
            mids = np.array(self.midpoints, dtype=complex)
            if mids.shape != (vals.shape[0] - 1,) + vals.shape[1:]:
                raise InvalidShape("midpoints must have shape (N, m, m)")
            _check_hermitian(mids)
        if mids is not None and self.interpolation == "piecewise-constant-midpoint":
            cells = mids
        else:
            cells = 0.5 * (vals[1:] + vals[:-1])
        cells = 0.5 * (cells + np.conj(np.swapaxes(cells, 1, 2)))
        for arr in (vals, mids, cells):
            if arr is not None:
                arr.setflags(write=False)
        object.__setattr__(self, "X", float(self.X))
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "midpoints", mids)
        object.__setattr__(self, "cells", cells)

    @property
    def m(self):
        return self.values.shape[1]

    @property
    def N(self):
        return self.values.shape[0] - 1

    @property
    def h(self):
        return self.X / self.N

    @property
    def nodes(self):
        return np.linspace(0.0, self.X, self.N + 1)

    @classmethod
    def from_function(cls, func, X, N, m=None, interpolation="piecewise-constant-midpoint"):
        """Sample ``func(x)`` (scalar or ``m x m``) at the nodes and cell midpoints."""
        x = np.linspace(0.0, X, N + 1)
        xm = 0.5 * (x[1:] + x[:-1])
        vals = np.array([as_matrix(func(t), m) for t in x])
        mids = np.array([as_matrix(func(t), m) for t in xm])
        return cls(X, vals, interpolation=interpolation, midpoints=mids)

    @classmethod
    def zero(cls, m, X, N):
        return cls(X, np.zeros((N + 1, m, m)))

    def cell_index(self, x):
        """Index of the cell containing ``x``; ``N`` marks the zero tail ``x >= X``."""
        k = np.floor(np.asarray(x, dtype=float) / self.h).astype(int)
        return np.clip(k, 0, self.N)

    def cell_value(self, k):
        """Frozen cell matrix, zero on the tail index ``N``."""
        if k >= self.N:
            return np.zeros((self.m, self.m), dtype=complex)
        return self.cells[k]

    def at(self, x):
        """Evaluate ``phi`` at points ``x`` according to the interpolation rule."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros((x.size, self.m, self.m), dtype=complex)
        inside = (x >= 0) & (x <= self.X)
        if self.interpolation == "piecewise-linear":
            t = self.nodes
            for i in range(self.m):
                for j in range(self.m):
                    out[inside, i, j] = np.interp(x[inside], t, self.values[:, i, j].real) + 1j * np.interp(
                        x[inside], t, self.values[:, i, j].imag
                    )
        else:
            k = np.minimum(self.cell_index(x[inside]), self.N - 1)
            out[inside] = self.cells[k]
        return out

    def restrict(self, X_new):
        """The same potential cut off (and zero-extended) at ``X_new <= X``."""
        n = int(round(X_new / self.h))
        if n < 1 or n > self.N or not np.isclose(n * self.h, X_new):
            raise ValueError("X_new must be a grid node")
        mids = None if self.midpoints is None else self.midpoints[:n]
        return PotentialPath(n * self.h, self.values[: n + 1], self.interpolation, mids)


def _check_hermitian(vals, tol=TOL_PARAM):
    defect = np.abs(vals - np.conj(np.swapaxes(vals, 1, 2))).max(initial=0.0)
    scale = max(1.0, np.abs(vals).max(initial=0.0))
    if defect > tol * scale:
        raise NotHermitian(f"potential samples not Hermitian (defect {defect:.3g})")


# -- named families used by the CLI configuration ---------------------------------


def _zero(m, **_):
    Z = np.zeros((m, m), dtype=complex)
    return lambda x: Z


def _constant(m, value=1.0, **_):
    C = as_matrix(value, m)
    return lambda x: C


def _step(m, value=1.0, x_jump=0.5, value2=0.0, **_):
    A, B = as_matrix(value, m), as_matrix(value2, m)
    return lambda x: A if x < x_jump else B


def _gaussian(m, amplitude=1.0, center=0.0, width=0.5, **_):
    A = as_matrix(amplitude, m)
    return lambda x: A * np.exp(-0.5 * ((x - center) / width) ** 2)


def _exponential(m, amplitude=1.0, rate=1.0, **_):
    A = as_matrix(amplitude, m)
    return lambda x: A * np.exp(-rate * x)


FAMILIES = {
    "zero": _zero,
    "constant": _constant,
    "step": _step,
    "gaussian-decay": _gaussian,
    "exp-decay": _exponential,
}


def potential_family(name, m, **params):
    """Return the callable ``x -> phi(x)`` of a named family."""
    try:
        make = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown potential family {name!r}") from None
    return make(m, **params)
