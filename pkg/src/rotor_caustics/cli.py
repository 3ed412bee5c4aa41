"""Command line front end.

Usage::

    rotor-caustics MODE [CONFIG] [--set key=value ...] [--out DIR] [--workers N]

MODE selects what to compute; CONFIG is an optional flat ``key = value``
text file (``#`` starts a comment). ``--set`` entries override the file,
and the dedicated flags override both. Every run writes fixed-name output
files plus a ``manifest.json`` describing them. All numeric output is
formatted with ``%.17g`` so repeated runs are byte identical; the manifest
records a wall-clock duration and is the one file excluded from that
guarantee.

Exit codes: 0 success, 1 invalid usage or configuration, 2 a runtime
failure inside an otherwise valid run (lost norm guard, root finding,
quadrature).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import backend_name
from .classical import fold_detect, grid_ensemble, poincare_section
from .core import make_params, uniform_state
from .errors import ConfigError, ValidationError
from .nonlinear import NonlinearConfig, nonlinear_evolve, suppression_ratios
from .quantum import evolve
from .scaling import ScalingRecord, fit_arnold_index, measure_cusp_amplitude
from .semiclassics import caustic_curve, launch_modulus, pendulum_angle

MODES = (
    "evolve",
    "classical",
    "semiclassical",
    "caustics",
    "scaling",
    "nonlinear",
    "sweep",
)


# ---------------------------------------------------------------------------
# configuration keys

def _parse_float(text: str) -> float:
    value = float(text)
    if not np.isfinite(value):
        raise ValueError("must be finite")
    return value


def _parse_int(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise ValueError("must be an integer") from None


def _parse_float_list(text: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("must be a comma separated list of numbers")
    return tuple(_parse_float(p) for p in parts)


def _parse_choice(options):
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError("must be one of " + ", ".join(options))
        return text

    return parse


def _positive(value) -> bool:
    return value > 0


def _non_negative(value) -> bool:
    return value >= 0


def _even_ge2(value) -> bool:
    return value >= 2 and value % 2 == 0


# name -> (parser, domain check, domain message, default). A default of None
# marks the key as required for any mode that lists it.
_KEYS = {
    "K": (_parse_float, _non_negative, "must be >= 0", None),
    "delta": (_parse_float, None, "", None),
    "g": (_parse_float, None, "", 0.0),
    "basis_size": (_parse_int, _even_ge2, "must be an even integer >= 2", 2048),
    "n_kicks": (_parse_int, _non_negative, "must be >= 0", 300),
    "steps": (_parse_int, _non_negative, "must be >= 0", 300),
    "workers": (_parse_int, _positive, "must be >= 1", 1),
    "out": (str, None, "", "out"),
    "map": (_parse_choice(("standard", "resonant")), None, "", "resonant"),
    "theta0_count": (_parse_int, lambda v: v >= 3, "must be >= 3", 256),
    "theta0_list": (_parse_float_list, None, "", (1.0, 2.0, 3.0, 4.0, 5.0)),
    "branch": (_parse_int, _non_negative, "must be >= 0", 0),
    "k_min": (_parse_float, lambda v: -1.0 < v < 1.0, "must lie in (-1, 1)", -0.9),
    "k_max": (_parse_float, lambda v: -1.0 < v < 1.0, "must lie in (-1, 1)", 0.9),
    "k_count": (_parse_int, lambda v: v >= 2, "must be >= 2", 73),
    "variant": (_parse_choice(("continuous", "kicked")), None, "", "kicked"),
    "substeps": (_parse_int, _positive, "must be >= 1", 16),
    "K_list": (_parse_float_list, None, "", None),
    "delta_list": (_parse_float_list, None, "", None),
}

_COMMON = ("basis_size", "workers", "out")
_MODE_KEYS = {
    "evolve": _COMMON + ("K", "delta", "n_kicks"),
    "classical": _COMMON + ("K", "delta", "map", "steps", "theta0_count"),
    "semiclassical": _COMMON + ("K", "delta", "steps", "theta0_list"),
    "caustics": _COMMON + ("K", "delta", "branch", "k_min", "k_max", "k_count"),
    "scaling": _COMMON + ("K", "delta"),
    "nonlinear": _COMMON + ("K", "delta", "g", "n_kicks", "variant", "substeps", "branch"),
    "sweep": _COMMON + ("K_list", "delta_list"),
}

# modes whose physics needs a strictly positive detuning
_NEEDS_POSITIVE_DELTA = {"semiclassical", "caustics", "scaling", "nonlinear"}
_NEEDS_POSITIVE_K = {"caustics", "scaling", "nonlinear", "semiclassical"}


def _read_config_file(path: str, problems: list) -> dict:
    raw = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        problems.append(f"config file {path!r}: {exc.strerror or exc}")
        return raw
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            problems.append(f"config file {path!r} line {lineno}: expected key = value")
            continue
        key, value = stripped.split("=", 1)
        raw[key.strip()] = value.strip()
    return raw


def _read_overrides(entries, problems: list) -> dict:
    raw = {}
    for entry in entries:
        if "=" not in entry:
            problems.append(f"--set {entry!r}: expected key=value")
            continue
        key, value = entry.split("=", 1)
        raw[key.strip()] = value.strip()
    return raw


def resolve_config(mode: str, config_path=None, overrides=(), out=None, workers=None) -> dict:
    """Merge defaults, config file and overrides into a validated mapping.

    Raises :class:`ConfigError` listing every problem at once: unknown keys,
    parse failures, domain violations and missing required keys.
    """
    allowed = _MODE_KEYS[mode]
    problems: list[str] = []
    raw: dict[str, str] = {}
    if config_path is not None:
        raw.update(_read_config_file(config_path, problems))
    raw.update(_read_overrides(overrides, problems))
    if out is not None:
        raw["out"] = out
    if workers is not None:
        raw["workers"] = str(workers)

    config = {}
    for key, text in raw.items():
        if key not in allowed:
            problems.append(f"{key}: not a recognized key for mode {mode!r}")
            continue
        parser, check, message, _ = _KEYS[key]
        try:
            value = parser(text) if isinstance(text, str) else text
        except ValueError as exc:
            problems.append(f"{key}: {exc} (got {text!r})")
            continue
        if check is not None and not check(value):
            problems.append(f"{key}: {message} (got {text!r})")
            continue
        config[key] = value

    for key in allowed:
        if key in config:
            continue
        default = _KEYS[key][3]
        if default is None:
            if key not in raw:
                problems.append(f"{key}: required for mode {mode!r}")
        else:
            config[key] = default

    if mode in _NEEDS_POSITIVE_DELTA and config.get("delta", 1.0) <= 0:
        problems.append(f"delta: must be > 0 for mode {mode!r}")
    if mode in _NEEDS_POSITIVE_K and config.get("K", 1.0) <= 0:
        problems.append(f"K: must be > 0 for mode {mode!r}")
    if mode == "sweep":
        for name in ("K_list", "delta_list"):
            values = config.get(name)
            if values is not None and any(v <= 0 for v in values):
                problems.append(f"{name}: every entry must be > 0")
    if "k_min" in config and "k_max" in config and config["k_min"] >= config["k_max"]:
        problems.append("k_min: must be smaller than k_max")

    if problems:
        raise ConfigError(problems)
    return config


# ---------------------------------------------------------------------------
# output helpers

def _fmt(value) -> str:
    return format(float(value), ".17g")


def _file_entry(path: Path, rows: int) -> dict:
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    return {"name": path.name, "rows": rows, "sha256": digest}


def _write_csv(outdir: Path, name: str, header, rows) -> dict:
    path = outdir / name
    count = 0
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
            count += 1
    return _file_entry(path, count)


def _write_field(outdir: Path, name: str, values: np.ndarray) -> dict:
    path = outdir / name
    data = np.ascontiguousarray(values, dtype="<f8")
    path.write_bytes(data.tobytes())
    return _file_entry(path, int(data.shape[0]))


def _axis_cut_rows(record):
    theta = record.field.grid.nodes[record.field.grid.axis_index]
    for kick, amplitude in enumerate(record.axis_cut):
        yield (kick, _fmt(theta), _fmt(amplitude))


# ---------------------------------------------------------------------------
# mode runners

def _run_evolve(config: dict, outdir: Path) -> list:
    params = make_params(
        config["K"], config["delta"], config["basis_size"], config["n_kicks"]
    )
    record = evolve(uniform_state(params.basis_size), params)
    return [
        _write_csv(outdir, "axis_cut.csv", ("kick", "theta", "amplitude"),
                   _axis_cut_rows(record)),
        _write_field(outdir, "field.bin", record.field.values),
    ]


def _run_classical(config: dict, outdir: Path) -> list:
    params = make_params(
        config["K"], config["delta"], config["basis_size"], config["steps"]
    )
    count = config["theta0_count"]
    theta0 = (np.arange(count) + 0.5) * (2.0 * np.pi / count)
    ensemble = grid_ensemble(theta0)
    thetas, ps = poincare_section(ensemble, config["map"], params, config["steps"])

    def trajectory_rows():
        for step in range(thetas.shape[0]):
            for index in range(thetas.shape[1]):
                yield (step, index, _fmt(thetas[step, index]), _fmt(ps[step, index]))

    folds = fold_detect(theta0, config["map"], params, config["steps"])
    fold_rows = ((f.step, _fmt(f.theta), _fmt(f.theta0)) for f in folds)
    return [
        _write_csv(outdir, "trajectories.csv", ("step", "index", "theta", "p"),
                   trajectory_rows()),
        _write_csv(outdir, "folds.csv", ("step", "theta", "theta0"), fold_rows),
    ]


def _run_semiclassical(config: dict, outdir: Path) -> list:
    params = make_params(
        config["K"], config["delta"], config["basis_size"], config["steps"]
    )
    steps = config["steps"]
    rows = []
    for theta0 in config["theta0_list"]:
        if not 0.0 <= theta0 <= 2.0 * np.pi:
            raise ValidationError(
                f"theta0_list entry {theta0} lies outside [0, 2*pi]"
            )
        launch_modulus(theta0)  # separatrix launches are a configuration error
        ensemble = grid_ensemble(np.array([theta0]))
        thetas, _ = poincare_section(ensemble, "resonant", params, steps)
        kicks = np.arange(steps + 1)
        # map momenta live on half steps, so angles compare against the
        # continuum pendulum at the midpoint times |n - 1/2| (rest launch
        # makes the solution even in t)
        continuum = pendulum_angle(
            theta0, np.abs(kicks - 0.5) * params.detuning,
            params.kick_strength, params.detuning,
        )
        for kick in kicks:
            mapped = float(thetas[kick, 0])
            smooth = float(continuum[kick])
            rows.append((
                _fmt(theta0), int(kick), _fmt(mapped), _fmt(smooth),
                _fmt(abs(mapped - smooth)),
            ))
    return [
        _write_csv(outdir, "pendulum.csv",
                   ("theta0", "kick", "theta_map", "theta_pendulum", "abs_diff"),
                   rows)
    ]


def _run_caustics(config: dict, outdir: Path) -> list:
    k_grid = np.linspace(config["k_min"], config["k_max"], config["k_count"])
    curve = caustic_curve(
        config["K"], config["delta"], config["branch"], k_grid
    )
    for failure in curve.failures:
        print(f"note: no caustic for k = {failure.modulus:.6g}: {failure.reason}",
              file=sys.stderr)
    rows = (
        (p.branch, _fmt(p.modulus), _fmt(p.time), p.kick_index, _fmt(p.theta))
        for p in curve.points
    )
    return [
        _write_csv(outdir, "caustics.csv", ("m", "k", "time", "kick_index", "theta"),
                   rows)
    ]


def _scaling_row(record) -> tuple:
    return (
        _fmt(record.kick_strength), _fmt(record.detuning),
        _fmt(record.quartic_coeff), _fmt(record.measured), _fmt(record.predicted),
    )


def _run_scaling(config: dict, outdir: Path) -> list:
    params = make_params(config["K"], config["delta"], config["basis_size"], 1)
    record = measure_cusp_amplitude(params)
    return [
        _write_csv(outdir, "scaling.csv",
                   ("K", "delta", "lambda", "measured", "predicted"),
                   [_scaling_row(record)])
    ]


def _sweep_job(job) -> tuple:
    kick_strength, detuning, basis_size = job
    params = make_params(kick_strength, detuning, basis_size, 1)
    record = measure_cusp_amplitude(params)
    return (
        record.kick_strength, record.detuning, record.quartic_coeff,
        record.measured, record.predicted,
    )


def _run_sweep(config: dict, outdir: Path) -> list:
    jobs = [
        (kick, detuning, config["basis_size"])
        for kick in config["K_list"]
        for detuning in config["delta_list"]
    ]
    workers = config["workers"]
    if workers == 1:
        results = [_sweep_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_job, jobs))

    records = [ScalingRecord(*r) for r in results]
    fit = fit_arnold_index(records)
    fit_path = outdir / "fit.json"
    fit_path.write_text(json.dumps(
        {"slope": fit.slope, "intercept": fit.intercept, "residual": fit.residual},
        indent=2, sort_keys=True,
    ) + "\n")
    return [
        _write_csv(outdir, "scaling.csv",
                   ("K", "delta", "lambda", "measured", "predicted"),
                   (_scaling_row(r) for r in records)),
        _file_entry(fit_path, 1),
    ]


def _run_nonlinear(config: dict, outdir: Path) -> list:
    params = make_params(
        config["K"], config["delta"], config["basis_size"], config["n_kicks"],
        config["g"],
    )
    nl_config = NonlinearConfig(config["variant"], config["substeps"])
    record = nonlinear_evolve(uniform_state(params.basis_size), params, nl_config)
    branches = sorted({0, config["branch"]})
    ratios = suppression_ratios(params, nl_config, branches)
    ratio_rows = (
        (r.branch, r.window[0], r.window[1], _fmt(r.baseline_peak),
         _fmt(r.nonlinear_peak), _fmt(r.ratio))
        for r in ratios
    )
    return [
        _write_csv(outdir, "axis_cut.csv", ("kick", "theta", "amplitude"),
                   _axis_cut_rows(record)),
        _write_field(outdir, "field.bin", record.field.values),
        _write_csv(outdir, "suppression.csv",
                   ("branch", "window_lo", "window_hi", "baseline_peak",
                    "nonlinear_peak", "ratio"),
                   ratio_rows),
    ]


_RUNNERS = {
    "evolve": _run_evolve,
    "classical": _run_classical,
    "semiclassical": _run_semiclassical,
    "caustics": _run_caustics,
    "scaling": _run_scaling,
    "nonlinear": _run_nonlinear,
    "sweep": _run_sweep,
}


# ---------------------------------------------------------------------------
# entry point

class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so usage problems share the config path."""

    def error(self, message):
        raise ConfigError([message])


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="rotor-caustics",
        description="Simulate caustic recurrences of the near-resonant kicked rotor.",
    )
    parser.add_argument("mode", choices=MODES, help="what to compute")
    parser.add_argument("config", nargs="?", default=None,
                        help="flat key = value configuration file")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a single configuration key")
    parser.add_argument("--out", default=None, metavar="DIR",
                        help="output directory (default: out)")
    parser.add_argument("--workers", type=int, default=None, metavar="N",
                        help="process count for sweep mode")
    return parser


def main(argv=None) -> int:
    started = time.monotonic()
    try:
        args = _build_parser().parse_args(argv)
        config = resolve_config(
            args.mode, args.config, args.set, args.out, args.workers
        )
        outdir = Path(config["out"])
        outdir.mkdir(parents=True, exist_ok=True)
        files = _RUNNERS[args.mode](config, outdir)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (RuntimeError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    manifest = {
        "mode": args.mode,
        "version": __version__,
        "backend": backend_name(),
        "config": {k: list(v) if isinstance(v, tuple) else v
                   for k, v in sorted(config.items())},
        "duration_seconds": time.monotonic() - started,
        "files": files,
    }
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
