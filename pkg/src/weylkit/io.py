"""CSV / JSON serialization.

Weyl samples::

    re_zeta,im_zeta,re_M11,im_M11,re_M12,im_M12,...,kind

Grid traces (potentials, Lambda, H)::

    x,re_11,im_11,re_12,im_12,...

Numbers use the shortest round-trip representation of binary64 (``repr``),
so rewriting a file read back from disk is bit-identical.
"""
import csv
import json

import numpy as np

from .dirac_forward import KINDS, WeylSampleSet
from .errors import InvalidShape
from .linalg_core import matrix_from_json, matrix_to_json
from .potential import PotentialPath

__all__ = [
    "write_weyl_csv",
    "read_weyl_csv",
    "write_weyl_json",
    "read_weyl_json",
    "write_trace_csv",
    "read_trace_csv",
    "read_potential_csv",
]


def _fmt(v):
    return repr(float(v))


def _entry_header(rows, cols, prefix=""):
    out = []
    for i in range(rows):
        for j in range(cols):
            out += [f"re_{prefix}{i + 1}{j + 1}", f"im_{prefix}{i + 1}{j + 1}"]
    return out


def _entries(M):
    flat = np.asarray(M, dtype=complex).ravel()
    out = []
    for v in flat:
        out += [_fmt(v.real), _fmt(v.imag)]
    return out


def _parse_entries(row, rows, cols):
    vals = np.array([float(t) for t in row], dtype=float)
    if vals.size != 2 * rows * cols:
        raise InvalidShape(f"expected {2 * rows * cols} entry columns, got {vals.size}")
    return (vals[0::2] + 1j * vals[1::2]).reshape(rows, cols)


def write_weyl_csv(path, samples):
    m = samples.m
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["re_zeta", "im_zeta"] + _entry_header(m, m, "M") + ["kind"])
        for p, M in zip(samples.points, samples.values):
            w.writerow([_fmt(p.real), _fmt(p.imag)] + _entries(M) + [samples.kind])


def read_weyl_csv(path, kind=None):
    """Read a Weyl sample CSV.

    ``kind`` supplies the kind when the file has no kind column, and
    selects the matching rows when it has one.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["re_zeta", "im_zeta"]:
        raise InvalidShape(f"{path}: missing re_zeta,im_zeta header")
    header = rows[0]
    has_kind = header[-1] == "kind"
    n_entries = len(header) - 2 - int(has_kind)
    m = int(round(np.sqrt(n_entries / 2)))
    if 2 * m * m != n_entries:
        raise InvalidShape(f"{path}: {n_entries} entry columns is not 2 m^2")
    body = [r for r in rows[1:] if r]
    if kind is not None and has_kind:
        body = [r for r in body if r[-1] == kind]
        if not body:
            raise InvalidShape(f"{path}: no rows of kind {kind!r}")
    if kind is None:
        kinds = {r[-1] for r in body} if has_kind else set()
        if len(kinds) != 1:
            raise InvalidShape(f"{path}: cannot infer a single sample kind")
        kind = kinds.pop()
    pts = np.array([float(r[0]) + 1j * float(r[1]) for r in body])
    vals = np.array([_parse_entries(r[2 : 2 + n_entries], m, m) for r in body]).reshape(-1, m, m)
    return WeylSampleSet(kind, m, pts, vals, provenance=str(path))


def write_weyl_json(path, samples):
    obj = {
        "kind": samples.kind,
        "m": samples.m,
        "provenance": samples.provenance,
        "samples": [
            {"zeta": [float(p.real), float(p.imag)], "value": matrix_to_json(M)}
            for p, M in zip(samples.points, samples.values)
        ],
    }
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)


def read_weyl_json(path):
    with open(path) as fh:
        obj = json.load(fh)
    if obj.get("kind") not in KINDS:
        raise InvalidShape(f"{path}: unknown kind {obj.get('kind')!r}")
    pts = np.array([s["zeta"][0] + 1j * s["zeta"][1] for s in obj["samples"]])
    vals = np.array([matrix_from_json(s["value"]) for s in obj["samples"]])
    return WeylSampleSet(obj["kind"], int(obj["m"]), pts, vals, obj.get("provenance", ""))


def write_trace_csv(path, x, values, prefix=""):
    """One row per grid point: ``x`` then the row-major complex entries."""
    values = np.asarray(values, dtype=complex)
    r, c = values.shape[1:]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x"] + _entry_header(r, c, prefix))
        for t, M in zip(x, values):
            w.writerow([_fmt(t)] + _entries(M))


def read_trace_csv(path):
    """Return ``(x, values)`` from a grid-trace CSV (square matrices)."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows or rows[0][0] != "x":
        raise InvalidShape(f"{path}: missing x header")
    n = len(rows[0]) - 1
    m = int(round(np.sqrt(n / 2)))
    if 2 * m * m != n:
        raise InvalidShape(f"{path}: {n} entry columns is not 2 m^2")
    x = np.array([float(r[0]) for r in rows[1:]])
    vals = np.array([_parse_entries(r[1:], m, m) for r in rows[1:]]).reshape(-1, m, m)
    return x, vals


def read_potential_csv(path, interpolation="piecewise-linear"):
    """Nodal potential samples on a uniform grid starting at ``x = 0``."""
    x, vals = read_trace_csv(path)
    if x.size < 2 or abs(x[0]) > 1e-12:
        raise InvalidShape(f"{path}: grid must start at 0 with at least two nodes")
    d = np.diff(x)
    if np.ptp(d) > 1e-9 * d.mean():
        raise InvalidShape(f"{path}: grid must be uniform")
    return PotentialPath(float(x[-1]), vals, interpolation=interpolation)
