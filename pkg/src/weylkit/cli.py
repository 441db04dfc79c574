"""Batch driver: ``weylkit {forward,reconstruct,roundtrip,measure,transform}``.

Exit codes: 0 success, 1 bad configuration or grid mismatch, 2 invariant
violation, 3 numerical failure (stage on stderr), 4 loss of positivity of
the structured operator.  Output files are staged in a temporary directory
and renamed into place only after every file of the command is written.
"""
import argparse
import json
import os
import shutil
import sys
import tempfile
import time

import numpy as np

from . import io as wio
from .config import RunConfig, load_config
from .dirac_forward import WeylSampleSet, compute_weyl_dirac, stieltjes_measure
from .errors import (
    ConfigError,
    GridMismatch,
    InsufficientSamples,
    InvalidBoundaryParam,
    InvalidShape,
    InvalidWeylData,
    InvariantViolation,
    NotStrictlyPositive,
    WeylkitError,
)
from .linalg_core import BoundaryParam
from .reconstruct import (
    ReconstructionConfig,
    _line_from_points,
    line_points,
    reconstruct_from_contractive,
    relative_l2_error,
    v_report,
)
from .schrodinger_forward import compute_weyl_schrodinger, upper_sqrt
from .weyl_transform import (
    boundary_transform,
    contractive_to_dirac,
    dirac_to_contractive,
    schrodinger_to_contractive,
    susy_partner,
)

KIND_FLAGS = {"dirac-M": "dirac-M", "mhat-j1": "schrodinger-Mhat-j1", "mhat-j2": "schrodinger-Mhat-j2"}


# -- computations (library-level, no file I/O) ----------------------------------------


def run_forward(cfg):
    """Weyl samples on the reconstruction line plus optional user grids."""
    phi = cfg.potential_path()
    alpha = cfg.boundary
    tol = cfg.tolerances.tol_herglotz
    prov = f"potential={cfg.potential} X={phi.X} N={phi.N} alpha={'alpha0' if cfg.alpha is None else 'custom'}"
    _, zeta = line_points(cfg.eta, cfg.a, cfg.N_xi)
    out = {}
    M = compute_weyl_dirac(phi, zeta, alpha)
    out["weyl_dirac"] = WeylSampleSet("dirac-M", cfg.m, zeta, M, prov)
    for j in (1, 2):
        Mj = compute_weyl_schrodinger(phi, j, zeta**2, method="direct")
        out[f"weyl_schrodinger_j{j}"] = WeylSampleSet(f"schrodinger-Mhat-j{j}", cfg.m, zeta, Mj, prov)
    out["contractive_line"] = WeylSampleSet(
        "contractive-Mhat", cfg.m, zeta, dirac_to_contractive(M, alpha), prov + f" eta={cfg.eta}"
    )
    extra = []
    if cfg.zeta_grid:
        zg = np.array(cfg.zeta_grid)
        extra.append(WeylSampleSet("dirac-M", cfg.m, zg, compute_weyl_dirac(phi, zg, alpha), prov))
    if cfg.z_grid:
        zz = np.array(cfg.z_grid)
        for j in (1, 2):
            Mj = compute_weyl_schrodinger(phi, j, zz, method="direct")
            extra.append(WeylSampleSet(f"schrodinger-Mhat-j{j}", cfg.m, upper_sqrt(zz), Mj, prov))
    for s in list(out.values()) + extra:
        rep = s.invariant_report(tol)
        if not rep["ok"]:
            raise InvariantViolation(f"{s.kind} samples violate their invariant: {rep}")
    return out, extra


def _recon_cfg(cfg):
    t = cfg.tolerances
    return ReconstructionConfig(
        X=cfg.X_eval,
        N=cfg.N,
        tail_correction=cfg.tail_correction,
        tol_fourier=t.tol_fourier,
        tol_herglotz=t.tol_herglotz,
        tol_recon=t.tol_recon,
        tol_opid=t.tol_opid,
        delta_contr=t.delta_contr,
        smooth_hamiltonian=cfg.smooth_hamiltonian,
    )


def run_reconstruct(cfg, samples):
    """Route any supported sample kind to the contractive line and reconstruct."""
    kind = samples.kind
    if kind == "contractive-Mhat":
        values = samples.values
    elif kind == "dirac-M":
        values = dirac_to_contractive(samples.values, cfg.boundary)
    elif kind.startswith("schrodinger"):
        values = schrodinger_to_contractive(samples.values, int(kind[-1]), samples.points)
    else:  # pragma: no cover - WeylSampleSet validates kinds
        raise InvalidShape(f"unsupported kind {kind}")
    line = _line_from_points(samples.points, values)
    phi, diag, parts = reconstruct_from_contractive(line, _recon_cfg(cfg))
    diag["input_kind"] = kind
    t = cfg.tolerances
    diag["invariants"] = {
        "opid": {"value": float(parts["hamiltonian"].opid_residual.max()), "tol": t.tol_opid},
        **{
            k: {"value": diag[k], "tol": t.tol_recon}
            for k in (
                "beta_S3_beta_minus_I",
                "gamma_S3_gamma_plus_I",
                "beta_S3_gamma",
                "dbeta_S3_beta",
                "dgamma_S3_gamma",
                "phi_antihermitian_defect",
                "H_small_eigs_max",
            )
        },
    }
    for v in diag["invariants"].values():
        v["ok"] = bool(v["value"] <= v["tol"])
    if not diag["invariants"]["opid"]["ok"]:
        raise InvariantViolation("discrete operator identity residual exceeds tol_opid")
    if kind.startswith("schrodinger"):
        rep = v_report(phi, int(kind[-1]))
        diag["V_report"] = {"formal": True, "max_abs_V": float(np.abs(rep["V"]).max())}
    return phi, diag, parts


def run_measure(cfg):
    opts = cfg.measure
    eps = float(opts.get("epsilon", 1e-3))
    if not eps > 0:
        raise ConfigError("measure.epsilon must be positive")
    intervals = np.asarray(opts.get("intervals", [[0.0, 1.0]]), dtype=float).reshape(-1, 2)
    t_min = float(opts.get("t_min", intervals.min() - 1.0))
    t_max = float(opts.get("t_max", intervals.max() + 1.0))
    n = int(opts.get("n", 4001))
    if n < 2 or not t_max > t_min:
        raise ConfigError("measure grid needs t_max > t_min and n >= 2")
    t = np.linspace(t_min, t_max, n)
    phi = cfg.potential_path()
    M = compute_weyl_dirac(phi, t + 1j * eps, cfg.boundary)
    samples = WeylSampleSet("dirac-M", cfg.m, t + 1j * eps, M)
    return stieltjes_measure(samples, intervals, cfg.tolerances.tol_herglotz)


def run_transform(cfg, samples):
    opts = dict(cfg.transform)
    to = opts.get("to")
    m = samples.m
    alpha = BoundaryParam.from_json(opts["alpha"], m).checked() if "alpha" in opts else cfg.boundary
    z = samples.points
    k = samples.kind
    if to == "boundary" and k == "dirac-M":
        delta = BoundaryParam.from_json(opts["delta"], m).checked() if "delta" in opts else cfg.boundary
        return WeylSampleSet(k, m, z, boundary_transform(samples.values, alpha, delta))
    if to == "contractive-Mhat" and k == "dirac-M":
        return WeylSampleSet(to, m, z, dirac_to_contractive(samples.values, alpha))
    if to == "dirac-M" and k == "contractive-Mhat":
        return WeylSampleSet(to, m, z, contractive_to_dirac(samples.values, alpha))
    if to == "contractive-Mhat" and k.startswith("schrodinger"):
        return WeylSampleSet(to, m, z, schrodinger_to_contractive(samples.values, int(k[-1]), z))
    if to in ("schrodinger-Mhat-j1", "schrodinger-Mhat-j2") and k.startswith("schrodinger") and to != k:
        return WeylSampleSet(to, m, z, susy_partner(samples.values, z**2))
    if to in ("schrodinger-Mhat-j1", "schrodinger-Mhat-j2") and k == "dirac-M":
        zeta = z[:, None, None]
        v = zeta * samples.values if to.endswith("j1") else susy_partner(zeta * samples.values, z**2)
        return WeylSampleSet(to, m, z, v)
    raise ConfigError(f"unsupported transform {k} -> {to}")


# -- file handling -----------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def commit(out_dir, writers):
    """Write every ``name -> fn(path)`` into a staging dir, then rename into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    stage = tempfile.mkdtemp(prefix=".weylkit-", dir=out_dir)
    try:
        for name, fn in writers.items():
            fn(os.path.join(stage, name))
        for name in writers:
            os.replace(os.path.join(stage, name), os.path.join(out_dir, name))
    finally:
        shutil.rmtree(stage, ignore_errors=True)
    return [os.path.join(out_dir, n) for n in writers]


def _w_weyl(s):
    return lambda p: wio.write_weyl_csv(p, s)


def _w_trace(x, v, prefix=""):
    return lambda p: wio.write_trace_csv(p, x, v, prefix)


def _recon_writers(phi, diag, parts):
    acc, ham = parts["accelerant"], parts["hamiltonian"]
    return {
        "phi_reconstructed.csv": _w_trace(phi.nodes, phi.values),
        "lambda.csv": _w_trace(acc.x_grid, acc.Lambda),
        "hamiltonian.csv": _w_trace(ham.x_mid, ham.H),
        "diagnostics.json": lambda p: _write_json(p, diag),
    }


def _phi_pair_writer(phi, ref_values):
    def write(path):
        import csv

        m = phi.m
        head = ["x"] + wio._entry_header(m, m, "true_") + wio._entry_header(m, m, "hat_")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(head)
            for t, a, b in zip(phi.nodes, ref_values, phi.values):
                w.writerow([wio._fmt(t)] + wio._entries(a) + wio._entries(b))

    return write


def _reference_values(cfg, phi_hat):
    ref = cfg.reference()
    x = phi_hat.nodes
    if callable(ref):
        return np.array([np.asarray(ref(t), dtype=complex).reshape(cfg.m, cfg.m) for t in x])
    return ref.at(x)


# -- commands ----------------------------------------------------------------------


def cmd_forward(cfg, args):
    out, extra = run_forward(cfg)
    writers = {f"{k}.csv": _w_weyl(s) for k, s in out.items()}
    if extra:

        def write_extra(path):
            import csv

            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["re_zeta", "im_zeta"] + wio._entry_header(cfg.m, cfg.m, "M") + ["kind"])
                for s in extra:
                    for p, M in zip(s.points, s.values):
                        w.writerow([wio._fmt(p.real), wio._fmt(p.imag)] + wio._entries(M) + [s.kind])

        writers["weyl_user_grid.csv"] = write_extra
    return writers


def cmd_reconstruct(cfg, args):
    if not args.input:
        raise ConfigError("reconstruct needs --input")
    kind = KIND_FLAGS[args.kind] if args.kind else None
    try:
        samples = wio.read_weyl_csv(args.input, kind)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.input}: {exc}") from exc
    phi, diag, parts = run_reconstruct(cfg, samples)
    return _recon_writers(phi, diag, parts)


def cmd_roundtrip(cfg, args):
    t0 = time.perf_counter()
    out, _ = run_forward(cfg)
    t_fwd = time.perf_counter() - t0
    t0 = time.perf_counter()
    phi, diag, parts = run_reconstruct(cfg, out["contractive_line"])
    t_rec = time.perf_counter() - t0
    ref = _reference_values(cfg, phi)
    from .potential import PotentialPath

    err = relative_l2_error(phi, PotentialPath(phi.X, ref, interpolation="piecewise-linear"))
    report = {
        "relative_l2_error": err,
        "X_eval": cfg.X_eval,
        "N": cfg.N,
        "a": cfg.a,
        "N_xi": cfg.N_xi,
        "eta": cfg.eta,
        "refine": bool(args.refine),
        "potential": cfg.potential,
        "residuals": {k: v for k, v in diag.items() if k != "timings"},
        "timings": {"forward": t_fwd, "reconstruct": t_rec, **diag["timings"]},
    }
    return {"error_report.json": lambda p: _write_json(p, report), "phi_pair.csv": _phi_pair_writer(phi, ref)}


def cmd_measure(cfg, args):
    est = run_measure(cfg)

    def write(path):
        import csv

        m = cfg.m
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["mu", "nu"] + wio._entry_header(m, m, "mass_") + ["epsilon"])
            for (mu, nu), M in zip(est.intervals, est.masses):
                w.writerow([wio._fmt(mu), wio._fmt(nu)] + wio._entries(M) + [wio._fmt(est.epsilon)])

    return {"measure.csv": write}


def cmd_transform(cfg, args):
    if not args.input:
        raise ConfigError("transform needs --input")
    kind = KIND_FLAGS[args.kind] if args.kind else None
    try:
        samples = wio.read_weyl_csv(args.input, kind)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.input}: {exc}") from exc
    res = run_transform(cfg, samples)
    return {"transformed.csv": _w_weyl(res)}


COMMANDS = {
    "forward": cmd_forward,
    "reconstruct": cmd_reconstruct,
    "roundtrip": cmd_roundtrip,
    "measure": cmd_measure,
    "transform": cmd_transform,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="weylkit", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--out", help="output directory (overrides output_dir)")
    p.add_argument("--input", help="input sample CSV for reconstruct / transform")
    p.add_argument("--kind", choices=sorted(KIND_FLAGS), help="kind of the input samples")
    p.add_argument("--refine", action="store_true", help="halve h, double a and N_xi")
    return p


def exit_code(exc):
    if isinstance(exc, NotStrictlyPositive):
        return 4
    if isinstance(exc, (ConfigError, GridMismatch, InsufficientSamples, InvalidShape, InvalidBoundaryParam)):
        return 1
    if isinstance(exc, (InvariantViolation, InvalidWeylData)):
        return 2
    return 3


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.refine:
            cfg = cfg.refined()
        writers = COMMANDS[args.command](cfg, args)
        out_dir = args.out or cfg.output_dir
        for path in commit(out_dir, writers):
            print(path)
    except WeylkitError as exc:
        stage = exc.stage or args.command
        where = f" at x = {exc.x:.6g}" if hasattr(exc, "x") else ""
        print(f"weylkit: {type(exc).__name__} [stage: {stage}]{where}: {exc}", file=sys.stderr)
        return exit_code(exc)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
