"""Command-line front end: ``aokrwalk {simulate,analytic,sweep,energy,compare}``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .analysis import (
    DomainError,
    central_fraction,
    compare_walks,
    fit_power_law,
    mean_energy,
    side_peak_mass,
)
from .analytic import analytic_distribution, coefficients_csv
from .ensemble import QuasiMomentumEnsemble, ensemble_distribution, sample_betas
from .errors import WalkError
from .evolution import (
    AFTER_KICK,
    BEFORE_KICK,
    DistributionHistory,
    KickParams,
    RESONANT_TAU,
    protocol_by_name,
    read_matrix_csv,
    run_walk,
    swapped_protocol,
)
from .lattice import RatchetSpec, make_lattice, ratchet_state

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
PROTOCOLS = ("original", "swapped", "lightshift-raw", "custom")
ANALYTIC_SELF_CHECK = 1e-6
CENTRAL_HALFWIDTH = 2

# manifest keys that are not part of the run configuration
_MANIFEST_ONLY = {"library_version", "command", "lattice", "outputs"}


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class RunConfig:
    protocol: str = "swapped"
    k: float = 1.45
    tau: float = RESONANT_TAU
    steps: int = 15
    classes: list = field(default_factory=lambda: [0, 1])
    fwhm: float = 0.0
    n_samples: int = 1000
    seed: int = 0
    thermal_fraction: float = 0.0
    chi: float = math.pi
    init_coin: str = "Y"
    step_coin: str = "H"
    light_shift: bool = False
    coin_position: str = BEFORE_KICK

    def validate(self) -> "RunConfig":
        if self.protocol not in PROTOCOLS:
            raise ConfigError("protocol", f"unknown protocol {self.protocol!r}, expected one of {PROTOCOLS}")
        for name in ("k", "tau", "fwhm", "thermal_fraction", "chi"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise ConfigError(name, f"must be a finite number, got {v!r}")
        if self.k < 0:
            raise ConfigError("k", f"kick strength must be >= 0, got {self.k}")
        if self.tau <= 0:
            raise ConfigError("tau", f"must be > 0, got {self.tau}")
        if not isinstance(self.steps, int) or self.steps < 0:
            raise ConfigError("steps", f"must be an integer >= 0, got {self.steps!r}")
        if self.fwhm < 0:
            raise ConfigError("fwhm", f"must be >= 0, got {self.fwhm}")
        if not 0 <= self.thermal_fraction <= 1:
            raise ConfigError("thermal_fraction", f"must lie in [0, 1], got {self.thermal_fraction}")
        if not isinstance(self.n_samples, int) or self.n_samples < 1:
            raise ConfigError("n_samples", f"must be an integer >= 1, got {self.n_samples!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.coin_position not in (BEFORE_KICK, AFTER_KICK):
            raise ConfigError("coin_position", f"must be {BEFORE_KICK!r} or {AFTER_KICK!r}")
        try:
            RatchetSpec(self.classes)
        except (TypeError, ValueError) as exc:
            raise ConfigError("classes", str(exc)) from None
        try:
            self.walk_protocol()
        except ValueError as exc:
            raise ConfigError("init_coin/step_coin", str(exc)) from None
        return self

    def walk_protocol(self):
        proto = protocol_by_name(self.protocol, chi=self.chi, init=self.init_coin,
                                 step=self.step_coin, light_shift=self.light_shift)
        return dataclasses.replace(proto, coin_position=self.coin_position)

    @property
    def is_ensemble(self) -> bool:
        return self.fwhm > 0 or self.thermal_fraction > 0

    def ensemble(self) -> QuasiMomentumEnsemble:
        return QuasiMomentumEnsemble(self.fwhm, self.n_samples, self.seed, self.thermal_fraction)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _coerce(name: str, value):
    if name == "classes":
        if isinstance(value, str):
            return [int(v) for v in value.replace(" ", "").split(",") if v]
        return [int(v) for v in value]
    if name == "light_shift" and isinstance(value, str):
        if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigError(name, f"expected a boolean, got {value!r}")
        return value.lower() in ("true", "1", "yes")
    return value


def load_config(path: Optional[Path], overrides: dict) -> RunConfig:
    values: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from None
        for key, v in raw.items():
            if key in _MANIFEST_ONLY:
                continue
            if key not in _FIELDS:
                raise ConfigError(key, "unknown configuration key")
            values[key] = v
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        values = {k: _coerce(k, v) for k, v in values.items()}
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("classes", str(exc)) from None
    cfg = RunConfig(**values)
    # JSON integers for float fields are fine; keep ints where declared
    for name in ("k", "tau", "fwhm", "thermal_fraction", "chi"):
        v = getattr(cfg, name)
        if isinstance(v, int) and not isinstance(v, bool):
            setattr(cfg, name, float(v))
    return cfg.validate()


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _plot_tsv(history: DistributionHistory) -> str:
    """Heatmap block ``n j P``, one blank-line separated block per step."""
    lines = ["# n\tj\tP"]
    for j in range(history.steps + 1):
        for n, p in zip(history.momenta, history.total[j]):
            lines.append(f"{int(n)}\t{j}\t{float(p):.17g}")
        lines.append("")
    return "\n".join(lines) + "\n"


def simulate(cfg: RunConfig, out: Path, workers: int = 1) -> DistributionHistory:
    """Run one configuration and write its artifacts to ``out``."""
    spec = RatchetSpec(cfg.classes)
    params = KickParams(cfg.k, cfg.tau)
    protocol = cfg.walk_protocol()
    lattice = make_lattice(cfg.steps, cfg.k, spec)
    if cfg.is_ensemble:
        ens = cfg.ensemble()
        history = ensemble_distribution(protocol, spec, cfg.steps, params, ens, workers=workers)
        betas = sample_betas(ens)
        _write(out / "betas.csv", "index,beta\n" + "".join(
            f"{i},{b:.17g}\n" for i, b in enumerate(betas)))
    else:
        history = run_walk(protocol, ratchet_state(spec, lattice), cfg.steps, params, 0.0)

    _write(out / "history.csv", history.to_csv("total"))
    _write(out / "history_spin2.csv", history.to_csv("spin2"))
    _write(out / "history_spin1.csv", history.to_csv("spin1"))
    _write(out / "history.tsv", _plot_tsv(history))
    manifest = {
        **cfg.to_dict(),
        "library_version": __version__,
        "command": "simulate",
        "lattice": [lattice.n_min, lattice.n_max],
    }
    _write(out / "manifest.json", _json(manifest))
    return history


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config, _overrides(args))
    simulate(cfg, Path(args.out), workers=args.workers)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_analytic(args) -> int:
    cfg = load_config(args.config, _overrides(args))
    j = cfg.steps
    if j < 1:
        raise ConfigError("steps", f"analytic distribution needs steps >= 1, got {j}")
    out = Path(args.out)
    spec = RatchetSpec(cfg.classes)
    lattice = make_lattice(j, cfg.k, spec)
    p_analytic = analytic_distribution(j, cfg.k, spec, lattice)
    numeric = run_walk(swapped_protocol(), ratchet_state(spec, lattice), j, KickParams(cfg.k), 0.0)
    deviation = float(np.max(np.abs(p_analytic - numeric.at(j))))

    _write(out / "analytic.csv", "n,P\n" + "".join(
        f"{int(n)},{p:.17g}\n" for n, p in zip(lattice.momenta, p_analytic)))
    _write(out / "coefficients.csv", coefficients_csv([j - 1]))
    _write(out / "check.json", _json({
        "max_abs_deviation": deviation,
        "threshold": ANALYTIC_SELF_CHECK,
        "numeric_protocol": "swapped",
        "passed": deviation <= ANALYTIC_SELF_CHECK,
    }))
    manifest = {
        **cfg.to_dict(),
        "library_version": __version__,
        "command": "analytic",
        "lattice": [lattice.n_min, lattice.n_max],
    }
    _write(out / "manifest.json", _json(manifest))
    print(f"max |P_analytic - P_numeric| = {deviation:.3e}")
    if deviation > ANALYTIC_SELF_CHECK:
        print(f"error: analytic self-check failed ({deviation:.3e} > {ANALYTIC_SELF_CHECK})", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _axis_value(axis: str, text: str):
    if axis == "S":
        return int(text)
    return float(text)


def _cmd_sweep(args) -> int:
    base = load_config(args.config, _overrides(args))
    if not args.values:
        raise ConfigError("values", "sweep axis needs at least one value")
    try:
        values = [_axis_value(args.axis, v) for v in args.values]
    except ValueError as exc:
        raise ConfigError("values", str(exc)) from None

    out = Path(args.out)
    rows = ["axis,value,central_fraction,side_peak_mass,status"]
    failures = []
    for raw, value in zip(args.values, values):
        if args.axis == "S":
            changes = {"classes": list(range(value))}
        else:
            changes = {args.axis: value}
        cell = f"{args.axis}={raw}"
        try:
            cfg = dataclasses.replace(base, **changes).validate()
            hist = simulate(cfg, out / cell, workers=args.workers)
        except (ConfigError, WalkError, ValueError) as exc:
            failures.append(f"{cell}: {exc}")
            rows.append(f"{args.axis},{raw},,,failed")
            continue
        final = hist.at(hist.steps)
        rows.append(",".join([
            args.axis, raw,
            format(central_fraction(final, hist.momenta, CENTRAL_HALFWIDTH), ".17g"),
            format(side_peak_mass(final, hist.momenta, halfwidth=CENTRAL_HALFWIDTH), ".17g"),
            "ok",
        ]))
    _write(out / "rollup.csv", "\n".join(rows) + "\n")
    if failures:
        _write(out / "failures.txt", "\n".join(failures) + "\n")
        for f in failures:
            print(f"error: {f}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"wrote {len(values)} cells to {out}")
    return EXIT_OK


def _cmd_energy(args) -> int:
    window = tuple(args.window) if args.window else None
    if window is not None and window[1] - window[0] + 1 < 3:
        raise ConfigError("window", f"fit window {window} needs at least 3 steps")
    out = Path(args.out)
    status = EXIT_OK
    for path in args.histories:
        path = Path(path)
        try:
            hist = DistributionHistory.from_csv(path.read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError("histories", f"cannot read {path}: {exc}") from None
        series = mean_energy(hist)
        stem = path.parent.name + "_" + path.stem if path.parent.name else path.stem
        _write(out / f"{stem}_energy.csv", series.to_csv())
        try:
            fit = fit_power_law(series, window)
        except DomainError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            status = EXIT_NUMERIC
            continue
        except ValueError as exc:
            raise ConfigError("window", str(exc)) from None
        _write(out / f"{stem}_fit.json", fit.to_json() + "\n")
        print(f"{path}: exponent {fit.exponent:.4f} +/- {fit.stderr:.4f}")
    return status


def _cmd_compare(args) -> int:
    try:
        _, obs = read_matrix_csv(Path(args.observed).read_text())
        _, pred = read_matrix_csv(Path(args.predicted).read_text())
    except (OSError, ValueError) as exc:
        raise ConfigError("observed/predicted", str(exc)) from None
    try:
        res = compare_walks(obs, pred, args.scale_a)
    except ValueError as exc:
        raise ConfigError("observed/predicted", str(exc)) from None
    out = Path(args.out)
    lines = [",".join(["row"] + [str(c) for c in range(res.pixels.shape[1])])]
    for i, row in enumerate(res.pixels):
        lines.append(",".join([str(i)] + ["" if not np.isfinite(v) else format(float(v), ".17g") for v in row]))
    _write(out / "comparison.csv", "\n".join(lines) + "\n")
    _write(out / "summary.json", _json(res.summary()))
    print(f"total error {res.total_error:.6g} ({res.skipped} pixels skipped)")
    return EXIT_OK


def _overrides(args) -> dict:
    return {name: getattr(args, name, None) for name in _FIELDS}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file with RunConfig keys (a manifest works)")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int, default=1, help="processes; affects wall time only")

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--protocol", choices=PROTOCOLS)
    run.add_argument("--k", type=float)
    run.add_argument("--tau", type=float)
    run.add_argument("--steps", type=int)
    run.add_argument("--classes", help="comma-separated momentum classes, e.g. 0,1")
    run.add_argument("--fwhm", type=float)
    run.add_argument("--n-samples", dest="n_samples", type=int)
    run.add_argument("--thermal-fraction", dest="thermal_fraction", type=float)
    run.add_argument("--chi", type=float)
    run.add_argument("--init-coin", dest="init_coin")
    run.add_argument("--step-coin", dest="step_coin")
    run.add_argument("--light-shift", dest="light_shift")
    run.add_argument("--coin-position", dest="coin_position", choices=(BEFORE_KICK, AFTER_KICK))

    parser = argparse.ArgumentParser(prog="aokrwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common, run], help="run one walk or ensemble")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("analytic", parents=[common, run],
                       help="closed-form distribution with numerical self-check (steps = j)")
    p.set_defaults(func=_cmd_analytic)

    p = sub.add_parser("sweep", parents=[common, run], help="repeat simulate along one axis")
    p.add_argument("--axis", choices=("S", "k", "fwhm"), required=True)
    p.add_argument("--values", nargs="+", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("energy", parents=[common], help="mean energy and power-law fit of histories")
    p.add_argument("histories", nargs="+")
    p.add_argument("--window", nargs=2, type=int, metavar=("LO", "HI"))
    p.set_defaults(func=_cmd_energy)

    p = sub.add_parser("compare", parents=[common], help="pixelwise comparison of two walk matrices")
    p.add_argument("observed")
    p.add_argument("predicted")
    p.add_argument("--scale-a", dest="scale_a", type=float, default=1.0)
    p.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.workers < 1:
        print("error: workers: must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
