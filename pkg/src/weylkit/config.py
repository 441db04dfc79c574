"""Run configuration for the batch driver.

One JSON document describes an experiment.  Recognised keys (all optional
except where noted)::

    m                  matrix size (default 1)
    X                  support of the forward potential, zero beyond (2.0)
    X_eval             reconstruction window [0, X_eval] (1.0)
    N                  cells on the reconstruction window (512); the forward
                       grid uses the same spacing h = X_eval / N
    potential          {"family": zero|constant|step|gaussian-decay|exp-decay,
                        ...family parameters}  or  {"family": "csv", "path": ...}
    interpolation      piecewise-constant-midpoint | piecewise-linear
    eta, a, N_xi       reconstruction line and xi grid (1.0, 200, 4096)
    tail_correction    fit-and-subtract the slow tail before truncation (true)
    alpha              {"alpha1": M, "alpha2": M}; default (I 0)
    tolerances         overrides, see :class:`Tolerances`
    zeta_grid          extra Dirac points [[re, im], ...]
    z_grid             extra Schrodinger points [[re, im], ...]
    measure            {"epsilon", "t_min", "t_max", "n", "intervals": [[mu, nu], ...]}
    transform          {"to": ..., "alpha": ..., "delta": ...}
    output_dir         default output directory ("out")

Matrices may be scalars (times identity), nested lists, or the
``{"rows", "cols", "re", "im"}`` schema.
"""
import json
import os
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigError, WeylkitError
from .linalg_core import BoundaryParam
from .potential import FAMILIES, PotentialPath, potential_family

__all__ = ["Tolerances", "RunConfig", "load_config", "parse_config"]


@dataclass(frozen=True)
class Tolerances:
    tol_param: float = 1e-12
    tol_ode_scale: float = 1e-8  # tol_ode = scale (1 + |zeta|) X
    tol_weyl: float = 1e-6
    tol_herglotz: float = 1e-8
    tol_quad: float = 1e-6
    tol_recon: float = 1e-5
    tol_opid: float = 1e-8
    tol_fourier: float = 1e-2
    delta_contr: float = 1e-8


@dataclass(frozen=True)
class RunConfig:
    m: int = 1
    X: float = 2.0
    X_eval: float = 1.0
    N: int = 512
    potential: dict = field(default_factory=lambda: {"family": "zero"})
    interpolation: str = "piecewise-constant-midpoint"
    eta: float = 1.0
    a: float = 200.0
    N_xi: int = 4096
    tail_correction: bool = True
    alpha: BoundaryParam = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    zeta_grid: tuple = ()
    z_grid: tuple = ()
    measure: dict = field(default_factory=dict)
    transform: dict = field(default_factory=dict)
    smooth_hamiltonian: bool = False
    output_dir: str = "out"
    base_dir: str = "."

    @property
    def h(self):
        return self.X_eval / self.N

    @property
    def boundary(self):
        return self.alpha or BoundaryParam.dirichlet(self.m)

    def refined(self):
        """Half the step, twice the xi half-width and count."""
        return replace(self, N=2 * self.N, a=2 * self.a, N_xi=2 * self.N_xi)

    def phi_function(self):
        """Callable ``x -> phi(x)`` for named families, else ``None``."""
        opts = dict(self.potential)
        fam = opts.pop("family")
        if fam == "csv":
            return None
        return potential_family(fam, self.m, **opts)

    def potential_path(self):
        """Forward potential on ``[0, X]`` with spacing ``h`` (or the CSV grid)."""
        opts = self.potential
        if opts["family"] == "csv":
            from .io import read_potential_csv

            path = opts["path"]
            if not os.path.isabs(path):
                path = os.path.join(self.base_dir, path)
            pp = read_potential_csv(path, self.interpolation)
            if pp.m != self.m:
                raise ConfigError(f"CSV potential is {pp.m}x{pp.m}, config says m = {self.m}")
            return pp
        n = int(round(self.X / self.h))
        return PotentialPath.from_function(self.phi_function(), n * self.h, n, self.m, self.interpolation)

    def reference(self):
        """Truth for error reports: callable or path."""
        return self.phi_function() or self.potential_path()


def _num(obj, key, default, kind=float, positive=True):
    v = obj.get(key, default)
    try:
        v = kind(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a {kind.__name__}") from None
    if kind is int and float(obj.get(key, default)) != v:
        raise ConfigError(f"{key} must be an integer")
    if positive and not v > 0:
        raise ConfigError(f"{key} must be positive")
    return v


def _points(obj, key):
    pts = obj.get(key, [])
    try:
        return tuple(complex(p[0], p[1]) if isinstance(p, (list, tuple)) else complex(p) for p in pts)
    except (TypeError, ValueError, IndexError):
        raise ConfigError(f"{key} must be a list of [re, im] pairs") from None


def parse_config(obj, base_dir="."):
    """Validate a decoded JSON object and build a :class:`RunConfig`."""
    if not isinstance(obj, dict):
        raise ConfigError("configuration must be a JSON object")
    try:
        m = _num(obj, "m", 1, int)
        X = _num(obj, "X", 2.0)
        X_eval = _num(obj, "X_eval", 1.0)
        N = _num(obj, "N", 512, int)
        pot = obj.get("potential", {"family": "zero"})
        if isinstance(pot, str):
            pot = {"family": pot}
        if not isinstance(pot, dict) or pot.get("family") not in tuple(FAMILIES) + ("csv",):
            raise ConfigError(f"potential family must be one of {sorted(FAMILIES) + ['csv']}")
        if pot["family"] == "csv" and "path" not in pot:
            raise ConfigError("csv potential needs a path")
        interp = obj.get("interpolation", "piecewise-constant-midpoint")
        if interp not in ("piecewise-constant-midpoint", "piecewise-linear"):
            raise ConfigError("unknown interpolation")
        tol_over = obj.get("tolerances", {})
        names = {f.name for f in fields(Tolerances)}
        if not isinstance(tol_over, dict) or set(tol_over) - names:
            raise ConfigError(f"tolerances may only set {sorted(names)}")
        tols = Tolerances(**{k: float(v) for k, v in tol_over.items()})
        if any(not getattr(tols, k) > 0 for k in names):
            raise ConfigError("tolerances must be positive")
        alpha = None
        if obj.get("alpha") is not None:
            alpha = BoundaryParam.from_json(obj["alpha"], m).checked(tols.tol_param)
            if alpha.m != m:
                raise ConfigError("alpha size does not match m")
        cfg = RunConfig(
            m=m,
            X=X,
            X_eval=X_eval,
            N=N,
            potential=pot,
            interpolation=interp,
            eta=_num(obj, "eta", 1.0),
            a=_num(obj, "a", 200.0),
            N_xi=_num(obj, "N_xi", 4096, int),
            tail_correction=bool(obj.get("tail_correction", True)),
            alpha=alpha,
            tolerances=tols,
            zeta_grid=_points(obj, "zeta_grid"),
            z_grid=_points(obj, "z_grid"),
            measure=dict(obj.get("measure", {})),
            transform=dict(obj.get("transform", {})),
            smooth_hamiltonian=bool(obj.get("smooth_hamiltonian", False)),
            output_dir=str(obj.get("output_dir", "out")),
            base_dir=base_dir,
        )
        if X < X_eval:
            raise ConfigError("X (forward support) must be at least X_eval")
        if cfg.N_xi & (cfg.N_xi - 1):
            raise ConfigError("N_xi must be a power of two")
        if pot["family"] != "csv":
            # build once so bad family parameters surface as configuration errors
            # a coarse probe path runs the shape and Hermiticity checks
            PotentialPath.from_function(cfg.phi_function(), X, 8, m, interp)
    except ConfigError:
        raise
    except (WeylkitError, TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    return parse_config(obj, base_dir=os.path.dirname(os.path.abspath(path)))
