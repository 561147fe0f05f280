"""Command-line batch runs: ``zmthermo {thermo,gstate,tmin,check}``.

A run is described by one JSON document (``--config``); long flags override
its keys.  Output is CSV or JSON on stdout or ``--out``, byte-identical for a
fixed configuration and package version.

Exit codes: 0 ok, 1 self-check failure, 2 configuration error, 3 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import dataclasses
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import __version__, checks, oracle, thermo
from .model import PotentialSpec
from .quadrature import QuadratureConfig, QuadratureError

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NONCONV = 0, 1, 2, 3
WORKERS_ENV = "ZMTHERMO_WORKERS"

TABLE_LAMBDAS = (0.008, 0.04, 0.4, 1.2, 2.0, 4.0, 8.0, 200.0)
TMIN_LAMBDAS = (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Serializable description of one batch run."""

    mass: float = 1.0
    omega: float = 1.0
    coupling: float = 0.4
    tmin: float = 0.2
    tmax: float = 10.0
    tcount: int = 50
    tscale: str = "log"
    methods: tuple[str, ...] = ("classical", "quadratic", "improved", "oneloop", "exact")
    lambdas: tuple[float, ...] | None = None
    format: str = "csv"
    out: str | None = None
    quadrature: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.tmin > 0 and self.tmax > 0):
            raise ConfigError("temperature bounds must be positive")
        if self.tmax < self.tmin or (self.tcount > 1 and self.tmax == self.tmin):
            raise ConfigError("tmax must exceed tmin")
        if self.tcount < 1:
            raise ConfigError("tcount must be at least 1")
        if self.tscale not in ("log", "linear"):
            raise ConfigError("tscale must be 'log' or 'linear'")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be 'csv' or 'json'")
        for m in self.methods:
            if m not in thermo.Method._value2member_map_:
                raise ConfigError(f"unknown method {m!r}")
        if not self.methods:
            raise ConfigError("no methods selected")
        unknown = set(self.quadrature) - {f.name for f in dataclasses.fields(QuadratureConfig)}
        if unknown:
            raise ConfigError(f"unknown quadrature keys: {sorted(unknown)}")

    def spec(self) -> PotentialSpec:
        try:
            return PotentialSpec(self.mass, self.omega, self.coupling)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def quadrature_config(self) -> QuadratureConfig:
        try:
            return QuadratureConfig(**self.quadrature)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def temperatures(self) -> np.ndarray:
        if self.tscale == "log":
            return np.geomspace(self.tmin, self.tmax, self.tcount)
        return np.linspace(self.tmin, self.tmax, self.tcount)

    def to_json(self) -> dict:
        d = dataclasses.asdict(self)
        d["lambda"] = d.pop("coupling")
        d["methods"] = list(self.methods)
        d["lambdas"] = None if self.lambdas is None else list(self.lambdas)
        return d


# JSON key -> RunConfig field
_KEYS = {
    "mass": "mass",
    "omega": "omega",
    "lambda": "coupling",
    "tmin": "tmin",
    "tmax": "tmax",
    "tcount": "tcount",
    "tscale": "tscale",
    "methods": "methods",
    "lambdas": "lambdas",
    "format": "format",
    "out": "out",
    "quadrature": "quadrature",
}


def _split(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def build_config(document: dict, overrides: dict) -> RunConfig:
    """Merge a JSON document with flag overrides; unknown keys are rejected."""
    unknown = set(document) - set(_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = {**document, **{k: v for k, v in overrides.items() if v is not None}}
    kwargs = {_KEYS[k]: v for k, v in merged.items()}
    try:
        if isinstance(kwargs.get("methods"), str):
            kwargs["methods"] = _split(kwargs["methods"])
        if "methods" in kwargs:
            kwargs["methods"] = tuple(kwargs["methods"])
        if isinstance(kwargs.get("lambdas"), str):
            kwargs["lambdas"] = [float(v) for v in _split(kwargs["lambdas"])]
        if kwargs.get("lambdas") is not None:
            kwargs["lambdas"] = tuple(float(v) for v in kwargs["lambdas"])
        for name in ("mass", "omega", "coupling", "tmin", "tmax"):
            if name in kwargs:
                kwargs[name] = float(kwargs[name])
        if "tcount" in kwargs:
            if float(kwargs["tcount"]) != int(kwargs["tcount"]):
                raise ConfigError("tcount must be an integer")
            kwargs["tcount"] = int(kwargs["tcount"])
        if not isinstance(kwargs.get("quadrature", {}), dict):
            raise ConfigError("quadrature must be an object")
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(**kwargs)


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{WORKERS_ENV} must be an integer") from exc
    if n < 1:
        raise ConfigError(f"{WORKERS_ENV} must be positive")
    return n


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    return "%.17g" % value


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render(columns: Sequence[str], rows: list[dict], config: RunConfig) -> str:
    if config.format == "json":
        doc = {
            "config": config.to_json(),
            "version": __version__,
            "rows": [{c: _json_value(r[c]) for c in columns} for r in rows],
        }
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(r[c]) for c in columns) + "\n")
    return buf.getvalue()


def _emit(text: str, config: RunConfig) -> None:
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_thermo(config: RunConfig) -> int:
    spec = config.spec()
    qc = config.quadrature_config()
    if spec.omega == 0 and "oneloop" in config.methods:
        raise ConfigError("oneloop needs omega > 0 (infrared-divergent perturbative reference)")
    temps = config.temperatures()
    workers = _workers()
    curves = {m: thermo.thermo_curve(m, spec, temps, qc, workers=workers) for m in config.methods}
    rows = []
    for i, T in enumerate(temps):
        for m in config.methods:
            p = curves[m][i]
            rows.append(dict(T=float(T), method=m, F=p.F, U=p.U, C=p.C, err=p.err, flags=p.flags))
    _emit(render(("T", "method", "F", "U", "C", "err", "flags"), rows, config), config)
    if any("nonconvergence" in r["flags"] for r in rows):
        return EXIT_NONCONV
    return EXIT_OK


def _lambda_grid(config: RunConfig, default) -> tuple[float, ...]:
    lams = default if config.lambdas is None else config.lambdas
    if not lams:
        raise ConfigError("empty coupling grid")
    if any(not lam > 0 for lam in lams):
        raise ConfigError("couplings must be positive")
    return tuple(lams)


def cmd_gstate(config: RunConfig) -> int:
    qc = config.quadrature_config()
    rows = []
    for lam in _lambda_grid(config, TABLE_LAMBDAS):
        spec = PotentialSpec(config.mass, config.omega, lam)
        exact = oracle.spectrum(spec).E0
        quad = thermo.ground_state_estimate(spec, qc)
        rows.append(
            dict(lambda_=lam, E0_exact=exact, E0_quadratic=quad,
                 percent_error=100.0 * (quad - exact) / exact)
        )
    cols = ("lambda", "E0_exact", "E0_quadratic", "percent_error")
    for r in rows:
        r["lambda"] = r.pop("lambda_")
    _emit(render(cols, rows, config), config)
    return EXIT_OK


def cmd_tmin(config: RunConfig) -> int:
    lams = sorted(_lambda_grid(config, TMIN_LAMBDAS))
    rows = []
    for lam in lams:
        # T_min is quoted in units of omega for the dimensionless coupling g = lambda / (m^2 omega^3)
        g = lam / (config.mass**2 * config.omega**3) if config.omega > 0 else math.inf
        try:
            root = thermo.t_min_root(g)
            rows.append(dict(T_min=config.omega / root, theta_root=root, flags=""))
        except (thermo.NoCrossing, ValueError):
            rows.append(dict(T_min=math.nan, theta_root=math.nan, flags="no_crossing"))
        rows[-1]["lambda"] = lam
    found = [r["T_min"] for r in rows if not r["flags"]]
    if any(b < a for a, b in zip(found, found[1:])):
        print("T_min is not monotone in lambda", file=sys.stderr)
        return EXIT_NONCONV
    _emit(render(("lambda", "theta_root", "T_min", "flags"), rows, config), config)
    return EXIT_OK


def cmd_check(config: RunConfig | None = None) -> int:
    results = checks.run_checks()
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--lambda", dest="lambda", type=float)
    common.add_argument("--omega", type=float)
    common.add_argument("--mass", type=float)
    common.add_argument("--tmin", type=float)
    common.add_argument("--tmax", type=float)
    common.add_argument("--tcount", type=int)
    common.add_argument("--tscale", choices=("log", "linear"))
    common.add_argument("--methods", help="comma-separated method names")
    common.add_argument("--lambdas", help="comma-separated couplings (gstate, tmin)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="zmthermo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("thermo", parents=[common], help="F, U, C over a temperature grid")
    sub.add_parser("gstate", parents=[common], help="ground-state energies, exact and quadratic")
    sub.add_parser("tmin", parents=[common], help="validity boundary T_min against the coupling")
    sub.add_parser("check", help="run the invariant suite")
    return parser


_COMMANDS = {"thermo": cmd_thermo, "gstate": cmd_gstate, "tmin": cmd_tmin}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.command == "check":
        return cmd_check()
    try:
        document = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                document = json.load(fh)
            if not isinstance(document, dict):
                raise ConfigError("config must be a JSON object")
        overrides = {k: getattr(args, k) for k in _KEYS if k != "quadrature"}
        config = build_config(document, overrides)
        return _COMMANDS[args.command](config)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (oracle.ConvergenceError, QuadratureError, RuntimeError) as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONV


if __name__ == "__main__":
    sys.exit(main())
