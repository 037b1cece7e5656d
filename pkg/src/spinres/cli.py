"""Command-line front end.

    spinres gr        G_r table for r in [-r_max, r_max]
    spinres resource  one resource measure for r = 1..r_max
    spinres sweep     1D or 2D parameter grid x distance
    spinres diagnose  phase label from the decay mode (plus winding off the XXT line)
    spinres winding   winding number at a point, or per region along an axis
    spinres validate  oracle-vs-formula and analytic-vs-quadrature checks

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical error. Every command accepts ``--config file.json`` whose keys
are the long flag names (dashes or underscores); flags given on the command
line win over file values.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import oracle
from .classify import Measure, Mode, PhaseLabel, diagnose_topological, diagnose_xxt
from .corr import DEFAULT_TOL, Method, g_series
from .errors import (
    ConfigurationError,
    CriticalParametersError,
    InsufficientDataError,
    NumericalError,
    PhaseError,
    SpinResError,
)
from .model import ModelParams
from .rdm import correlators, reduced_states
from .resources import coherence_l1, concurrence, discord
from .topology import Axis, critical_scan, gap_minimum, winding_number

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3
SIG_DIGITS = 12

# flag name -> (type, default); shared by every subcommand
_OPTIONS = {
    "gamma": (float, 0.0),
    "lambda": (float, None),
    "alpha": (float, None),
    "delta": (float, 0.0),
    "chain_length": (int, None),
    "method": (str, "quadrature"),
    "resource": (str, "coherence"),
    "r_max": (int, None),
    "r_min": (int, 1),
    "tol": (float, None),
    "axis": (str, None),
    "lo": (float, None),
    "hi": (float, None),
    "steps": (int, None),
    "output": (str, None),
    "format": (str, None),
}
_LIST_OPTIONS = {"axis", "lo", "hi", "steps"}


# ---------------------------------------------------------------------------
# configuration


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinres", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default option values")
    for name, (typ, _) in _OPTIONS.items():
        flag = "--" + name.replace("_", "-")
        kwargs = {"type": typ, "default": None, "dest": name}
        if name in _LIST_OPTIONS:
            kwargs["action"] = "append"
        if name == "method":
            kwargs["choices"] = [m.value for m in Method]
        if name == "resource":
            kwargs["choices"] = [m.value for m in Measure]
        if name == "axis":
            kwargs["choices"] = [a.value for a in Axis]
        if name == "format":
            kwargs["choices"] = ["csv", "json"]
        common.add_argument(flag, **kwargs)
    helps = {
        "gr": "G_r table",
        "resource": "resource versus distance",
        "sweep": "parameter sweep",
        "diagnose": "phase diagnosis",
        "winding": "winding number",
        "validate": "cross-validation suite",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("config file must hold a JSON object")
    out = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name == "lam":
            name = "lambda"
        if name not in _OPTIONS:
            raise ConfigurationError(f"unknown config key {key!r}")
        typ = _OPTIONS[name][0]
        try:
            if name in _LIST_OPTIONS:
                value = [typ(v) for v in (value if isinstance(value, list) else [value])]
            elif value is not None:
                value = typ(value)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"config key {key!r}: {exc}") from exc
        out[name] = value
    return out


def resolve_options(args: argparse.Namespace) -> dict:
    """Defaults < config file < command-line flags."""
    opts = {name: default for name, (_, default) in _OPTIONS.items()}
    if args.config:
        opts.update(_load_config(args.config))
    for name in _OPTIONS:
        value = getattr(args, name)
        if value is not None:
            opts[name] = value
    for name in _LIST_OPTIONS:
        if opts[name] is not None and not isinstance(opts[name], list):
            opts[name] = [opts[name]]
    return opts


def _params(opts, need_point=True) -> ModelParams:
    for name in ("lambda", "alpha"):
        if opts[name] is None:
            if need_point:
                raise ConfigurationError(f"--{name} is required")
            opts[name] = 0.0
    values = [opts["gamma"], opts["lambda"], opts["alpha"], opts["delta"]]
    if not all(math.isfinite(v) for v in values):
        raise ConfigurationError("model parameters must be finite")
    L = opts["chain_length"]
    if Method(opts["method"]) is Method.FINITE and L is None:
        raise ConfigurationError("--method finite needs --chain-length")
    return ModelParams(gamma=values[0], lam=values[1], alpha=values[2], delta=values[3], chain_length=L)


def _tol(opts):
    return DEFAULT_TOL if opts["tol"] is None else opts["tol"]


def _check_r(opts, default=10):
    if opts["r_max"] is None:
        opts["r_max"] = default
    if opts["r_max"] < 1:
        raise ConfigurationError("--r-max must be >= 1")
    if not 1 <= opts["r_min"] <= opts["r_max"]:
        raise ConfigurationError("--r-min must lie in [1, r_max]")


# ---------------------------------------------------------------------------
# output


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return ""
        v = 0.0 if v == 0.0 else v  # normalize -0.0
        return f"{v:.{SIG_DIGITS}g}"
    return str(value)


def _jsonable(value):
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return float(f"{v:.{SIG_DIGITS}g}") if math.isfinite(v) else None
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render(records: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([_jsonable({c: r.get(c) for c in columns}) for r in records], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_fmt(rec.get(c)) for c in columns])
    return buf.getvalue()


def _emit(text: str, opts):
    if opts["output"]:
        with open(opts["output"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_table(records, columns, opts):
    _emit(render(records, columns, opts["format"] or "csv"), opts)


def _emit_report(report: dict, opts):
    if (opts["format"] or "json") == "json":
        _emit(json.dumps(_jsonable(report), indent=2) + "\n", opts)
    else:
        flat = {k: (json.dumps(_jsonable(v)) if isinstance(v, (list, dict)) else v) for k, v in report.items()}
        _emit(render([flat], list(flat), "csv"), opts)


# ---------------------------------------------------------------------------
# commands


def _resource_values(params: ModelParams, measure: Measure, r_max: int, method: str, tol: float):
    """[(value, label)] for r = 1..r_max; label is the discord measurement."""
    states = reduced_states(params, r_max, method, tol)
    out = []
    for s in states:
        if measure is Measure.COHERENCE:
            out.append((coherence_l1(s), None))
        elif measure is Measure.CONCURRENCE:
            out.append((concurrence(s), None))
        else:
            d = discord(s)
            out.append((d.value, d.optimal_measurement.label))
    return out


def cmd_gr(opts):
    _check_r(opts)
    params = _params(opts)
    g = g_series(params, opts["r_max"], opts["method"], _tol(opts))
    rows = [{"r": int(r), "g": g[int(r)], "method": g.method.value} for r in g.rs]
    _emit_table(rows, ["r", "g", "method"], opts)
    return EXIT_OK


def cmd_resource(opts):
    _check_r(opts)
    params = _params(opts)
    measure = Measure(opts["resource"])
    values = _resource_values(params, measure, opts["r_max"], opts["method"], _tol(opts))
    columns = ["r", "value", "measure"] + (["measurement"] if measure is Measure.DISCORD else [])
    rows = [
        {"r": r, "value": v, "measure": measure.value, "measurement": label}
        for r, (v, label) in enumerate(values, start=1)
        if r >= opts["r_min"]
    ]
    _emit_table(rows, columns, opts)
    return EXIT_OK


@dataclass(frozen=True)
class SweepConfig:
    base: ModelParams
    axes: tuple[Axis, ...]
    grids: tuple[tuple[float, ...], ...]
    measure: Measure
    r_min: int
    r_max: int
    method: str
    tol: float

    @classmethod
    def from_options(cls, opts) -> "SweepConfig":
        _check_r(opts)
        axes = opts["axis"] or []
        if not 1 <= len(axes) <= 2:
            raise ConfigurationError("sweep needs one or two --axis")
        if len(set(axes)) != len(axes):
            raise ConfigurationError("sweep axes must differ")
        grids = []
        for k, name in enumerate(axes):
            try:
                lo, hi, steps = opts["lo"][k], opts["hi"][k], opts["steps"][k]
            except (TypeError, IndexError):
                raise ConfigurationError(f"axis {name!r} needs --lo, --hi and --steps") from None
            if steps < 2:
                raise ConfigurationError("--steps must be >= 2")
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
                raise ConfigurationError("range needs finite lo < hi")
            grids.append(tuple(float(x) for x in np.linspace(lo, hi, steps)))
        axes = tuple(Axis(a) for a in axes)
        for a in axes:
            if a is Axis.LAMBDA and opts["lambda"] is None:
                opts["lambda"] = 0.0
            if a is Axis.ALPHA and opts["alpha"] is None:
                opts["alpha"] = 0.0
        return cls(_params(opts), axes, tuple(grids), Measure(opts["resource"]), opts["r_min"],
                   opts["r_max"], opts["method"], _tol(opts))

    def points(self):
        if len(self.axes) == 1:
            return [(x,) for x in self.grids[0]]
        return [(x, y) for x in self.grids[0] for y in self.grids[1]]


def _sweep_point(task):
    cfg, point = task
    params = cfg.base.with_(**{a.field: v for a, v in zip(cfg.axes, point)})
    try:
        values = [v for v, _ in _resource_values(params, cfg.measure, cfg.r_max, cfg.method, cfg.tol)]
    except (NumericalError, CriticalParametersError, PhaseError):
        values = [None] * cfg.r_max
    return values


def worker_count() -> int:
    cap = os.environ.get("SPINRES_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ConfigurationError("SPINRES_THREADS must be a positive integer") from None
    return n


def run_sweep(cfg: SweepConfig) -> list[dict]:
    points = cfg.points()
    workers = min(worker_count(), len(points))
    tasks = [(cfg, p) for p in points]
    if workers <= 1:
        results = [_sweep_point(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map returns in submission order, so the grid order is deterministic
            results = list(pool.map(_sweep_point, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    rows = []
    for point, values in zip(points, results):
        for r in range(cfg.r_min, cfg.r_max + 1):
            row = {a.value: v for a, v in zip(cfg.axes, point)}
            row.update(r=r, value=values[r - 1])
            rows.append(row)
    return rows


def cmd_sweep(opts):
    cfg = SweepConfig.from_options(opts)
    rows = run_sweep(cfg)
    _emit_table(rows, [a.value for a in cfg.axes] + ["r", "value"], opts)
    return EXIT_OK


def cmd_diagnose(opts):
    params = _params(opts)
    measure = Measure(opts["resource"])
    _check_r(opts, default=30)
    r_max = opts["r_max"]
    tol = _tol(opts)
    report = {"gamma": params.gamma, "lambda": params.lam, "alpha": params.alpha, "delta": params.delta,
              "measure": measure.value, "r_max": r_max}
    if params.is_xxt:
        d = diagnose_xxt(params.alpha, params.lam, r_max=r_max, measure=measure, tol=tol)
        report.update(
            regime="xxt",
            label=d.label.value,
            decay=d.decay.mode.value,
            expected_phase=d.expected.value,
            agrees_with_fermi_points=d.agrees,
            fermi_points=list(d.fermi_points),
            winding=None,
        )
    else:
        d = diagnose_topological(params, r_max=r_max, measure=measure, tol=tol)
        report.update(regime="topological", label=d.label.value, decay=d.decay.mode.value,
                      winding=d.winding, consistent=d.consistent)
    report.update(
        undetermined=d.decay.mode is Mode.UNDETERMINED,
        extremum_count=d.decay.extremum_count,
        tail_spread=d.decay.tail_spread,
        frozen_value=d.decay.frozen_value,
        profile=list(d.profile.values),
    )
    _emit_report(report, opts)
    return EXIT_OK


def cmd_winding(opts):
    params = _params(opts, need_point=not opts["axis"])
    if not opts["axis"]:
        w = winding_number(params)
        report = {"winding": w.n, "raw": w.raw, "closure_defect": w.closure_defect,
                  "gap": gap_minimum(params)[1]}
        _emit_report(report, opts)
        return EXIT_OK
    if len(opts["axis"]) != 1:
        raise ConfigurationError("winding scans a single --axis")
    axis = Axis(opts["axis"][0])
    lo, hi = (opts["lo"] or [None])[0], (opts["hi"] or [None])[0]
    if lo is None or hi is None or not lo < hi:
        raise ConfigurationError("winding scan needs --lo < --hi")
    steps = (opts["steps"] or [401])[0]
    roots = critical_scan(params, axis, lo, hi, n=steps)
    edges = [lo] + roots + [hi]
    rows = []
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        try:
            w = winding_number(params.with_(**{axis.field: mid}))
            n, defect = w.n, w.closure_defect
        except (CriticalParametersError, NumericalError):
            n, defect = None, None
        rows.append({"lo": a, "hi": b, "midpoint": mid, "winding": n, "closure_defect": defect})
    _emit_table(rows, ["lo", "hi", "midpoint", "winding", "closure_defect"], opts)
    return EXIT_OK


VALIDATE_LENGTHS = (9, 11, 13)
VALIDATE_R = 2


def _max_diff(a, b):
    return max(abs(getattr(a, f) - getattr(b, f)) for f in ("mag_z", "xx", "yy", "zz"))


def validation_checks(params: ModelParams, lengths, tol: float | None):
    """Rows of (check, value, tolerance, passed)."""
    ff_tol = 1e-8 if tol is None else tol
    checks = []
    finite_errors = []
    for L in lengths:
        pl = params.with_(chain_length=L)
        state = oracle.solve(pl)
        ed = oracle.oracle_correlators(state, VALIDATE_R)
        matched = correlators(oracle.sector_matched_g(pl, state, VALIDATE_R), VALIDATE_R)
        err = _max_diff(ed, matched)
        checks.append({"check": f"oracle_vs_free_fermion_L{L}", "value": err, "tolerance": ff_tol,
                       "passed": err <= ff_tol})
        try:
            eq3 = correlators(g_series(pl, VALIDATE_R, "finite"), VALIDATE_R)
            finite_errors.append(_max_diff(ed, eq3))
        except CriticalParametersError:
            finite_errors.append(float("nan"))
    if len(finite_errors) > 1:
        trend = all(b <= a + 1e-12 for a, b in zip(finite_errors[:-1], finite_errors[1:]))
        checks.append({"check": "eq3_discrepancy_nonincreasing",
                       "value": finite_errors[-1], "tolerance": None, "passed": bool(trend)})
    for L, e in zip(lengths, finite_errors):
        checks.append({"check": f"eq3_discrepancy_L{L} (informational)", "value": e, "tolerance": None,
                       "passed": True})
    if params.is_xxt:
        try:
            qa = g_series(params.with_(chain_length=None), 10, "quadrature")
            an = g_series(params.with_(chain_length=None), 10, "analytic")
            err = float(np.max(np.abs(qa.table() - an.table())))
            aq_tol = 1e-8 if tol is None else tol
            checks.append({"check": "analytic_vs_quadrature", "value": err, "tolerance": aq_tol,
                           "passed": err <= aq_tol})
        except PhaseError:
            pass
    return checks


def cmd_validate(opts):
    if opts["alpha"] is None and opts["lambda"] is None:
        opts["alpha"], opts["lambda"] = 0.7, 1.0  # gapped SL-I point
    opts["method"] = "quadrature"
    lengths = VALIDATE_LENGTHS if opts["chain_length"] is None else (opts["chain_length"],)
    params = _params(opts)
    checks = validation_checks(params.with_(chain_length=None), lengths, opts["tol"])
    _emit_table(checks, ["check", "value", "tolerance", "passed"], opts)
    failed = [c["check"] for c in checks if not c["passed"]]
    if failed:
        print("validation failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


COMMANDS = {
    "gr": cmd_gr,
    "resource": cmd_resource,
    "sweep": cmd_sweep,
    "diagnose": cmd_diagnose,
    "winding": cmd_winding,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve_options(args)
        return COMMANDS[args.command](opts)
    except (ConfigurationError, PhaseError, InsufficientDataError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, CriticalParametersError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SpinResError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
