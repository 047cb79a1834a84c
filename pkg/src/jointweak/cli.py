"""Command-line front end.

Subcommands:

    weakvalue --config cfg.yaml [--out table.csv]
    moments   --config cfg.yaml [--out table.csv]
    sweep     --config cfg.yaml [--out table.csv] [--no-plot]
    hardy     --config cfg.yaml [--out table.csv] [--no-plot]
    verify    [--config cfg.yaml] [--out report.json] [--fast] [--grid-n N]

Configuration files are YAML with a documented schema (see README);
complex numbers are written as [re, im] pairs, observables as builtin
names (sigma_x, sigma_y, sigma_z, identity), {proj: ket}, {matrix: ...},
or a list of those meaning a tensor product.  Unknown keys anywhere are
rejected.

CSV output is deterministic: 17 significant digits, '.' decimal, LF line
endings, identical bytes for identical configs.  Sweeping report paths
render a companion PNG figure next to the CSV unless --no-plot is given.
All failures exit nonzero after printing a single machine-parseable line
``jointweak: error: <category>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import closedform as cf
from . import gaussian, hardy, plotting, verify
from .errors import ConfigError, DegenerateNorm, ToolkitError
from .hilbert import Ket, Operator, identity, ket, projector, sigma_x, sigma_y, sigma_z, tensor
from .weakvalue import weak_value_set

_BUILTIN_OBSERVABLES = {
    "sigma_x": sigma_x,
    "sigma_y": sigma_y,
    "sigma_z": sigma_z,
    "identity": lambda: identity(2),
}


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------

@dataclass
class SweepTable:
    """Rows of real values under a named header; first column is g."""

    header: list[str]
    rows: list[tuple] = field(default_factory=list)
    dropped: int = 0

    def append(self, values) -> None:
        vals = tuple(float(v) for v in values)
        if any(not np.isfinite(v) for v in vals):
            self.dropped += 1
            return
        if self.rows and self.header[0] == "g" and vals[0] <= self.rows[-1][0]:
            raise ConfigError("sweep values of g must be strictly increasing")
        self.rows.append(vals)


def emit_csv(table: SweepTable, path) -> Path:
    """RFC-4180-style CSV: header row, %.17g fields, LF endings."""
    path = Path(path)
    lines = [",".join(table.header)]
    for row in table.rows:
        lines.append(",".join(f"{v:.17g}" for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="ascii", newline="")
    return path


# --------------------------------------------------------------------------
# config parsing
# --------------------------------------------------------------------------

@dataclass
class RunConfig:
    command: str
    scenario: dict = field(default_factory=dict)
    hardy: dict = field(default_factory=dict)
    verify: dict = field(default_factory=dict)


def _fail(msg: str) -> ConfigError:
    return ConfigError(msg)


def _require_keys(mapping: dict, allowed: set, context: str) -> None:
    if not isinstance(mapping, dict):
        raise _fail(f"{context} must be a mapping")
    unknown = set(mapping) - allowed
    if unknown:
        raise _fail(f"unknown key(s) in {context}: {', '.join(sorted(unknown))}")


def _as_complex(value, context: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, (int, float)) for v in value)
    ):
        return complex(value[0], value[1])
    raise _fail(f"{context}: expected a number or [re, im] pair, got {value!r}")


def parse_state(values, context: str, require_normalized: bool = True) -> Ket:
    if not isinstance(values, list) or not values:
        raise _fail(f"{context}: expected a non-empty list of amplitudes")
    amps = np.array([_as_complex(v, context) for v in values])
    state = ket(amps)
    if require_normalized and abs(state.norm() - 1.0) > 1e-6:
        raise _fail(f"{context}: state is not normalized (norm {state.norm():.6g})")
    return state


def parse_observable(spec, context: str) -> Operator:
    if isinstance(spec, str):
        if spec not in _BUILTIN_OBSERVABLES:
            raise _fail(
                f"{context}: unknown observable {spec!r}; builtins are "
                + ", ".join(sorted(_BUILTIN_OBSERVABLES))
            )
        return _BUILTIN_OBSERVABLES[spec]()
    if isinstance(spec, dict):
        _require_keys(spec, {"proj", "matrix"}, context)
        if len(spec) != 1:
            raise _fail(f"{context}: give exactly one of proj/matrix")
        if "proj" in spec:
            return projector(parse_state(spec["proj"], f"{context}.proj", False))
        rows = spec["matrix"]
        if not isinstance(rows, list) or not rows:
            raise _fail(f"{context}.matrix: expected a list of rows")
        mat = np.array(
            [[_as_complex(v, f"{context}.matrix") for v in row] for row in rows]
        )
        return Operator(mat)
    if isinstance(spec, list):
        parts = [parse_observable(p, f"{context}[{i}]") for i, p in enumerate(spec)]
        out = parts[0]
        for p in parts[1:]:
            out = tensor(out, p)
        return out
    raise _fail(f"{context}: unsupported observable spec {spec!r}")


def parse_g_range(spec, context: str) -> np.ndarray:
    if (
        not isinstance(spec, list)
        or len(spec) != 4
        or not all(isinstance(v, (int, float)) for v in spec[:3])
        or spec[3] not in ("lin", "log")
    ):
        raise _fail(f"{context}: expected [start, stop, count, lin|log]")
    start, stop, count, spacing = float(spec[0]), float(spec[1]), int(spec[2]), spec[3]
    if count < 2 or start <= 0 or stop <= start:
        raise _fail(f"{context}: need 0 < start < stop and count >= 2")
    if spacing == "log":
        return np.geomspace(start, stop, count)
    return np.linspace(start, stop, count)


_SCENARIO_KEYS = {
    "kind", "pre", "post", "observable_a", "observable_b",
    "sigma", "g", "g_range",
}
_HARDY_KEYS = {"meter", "sigma", "g_range", "cases"}
_VERIFY_KEYS = {"grid_n", "fast", "pairs"}


def parse_config(text: str, command: str) -> RunConfig:
    """Parse and validate a YAML run configuration for one subcommand."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" (line {mark.line + 1})" if mark is not None else ""
        raise _fail(f"YAML parse error{where}: {getattr(exc, 'problem', exc)}")
    if raw is None:
        raw = {}
    _require_keys(raw, {"scenario", "hardy", "verify"}, "config")
    cfg = RunConfig(command=command)

    if command in ("weakvalue", "moments", "sweep"):
        scenario = raw.get("scenario")
        if scenario is None:
            raise _fail(f"command {command!r} needs a 'scenario' section")
        _require_keys(scenario, _SCENARIO_KEYS, "scenario")
        parsed: dict = {}
        parsed["pre"] = parse_state(scenario.get("pre"), "scenario.pre")
        parsed["post"] = parse_state(scenario.get("post"), "scenario.post")
        parsed["a"] = parse_observable(scenario.get("observable_a"), "scenario.observable_a")
        parsed["b"] = parse_observable(scenario.get("observable_b"), "scenario.observable_b")
        dims = {parsed["pre"].dim, parsed["post"].dim, parsed["a"].dim, parsed["b"].dim}
        if len(dims) != 1:
            raise _fail(f"scenario: inconsistent dimensions {sorted(dims)}")
        if command in ("moments", "sweep"):
            kind = scenario.get("kind")
            if kind not in ("involutory", "projector"):
                raise _fail("scenario.kind must be 'involutory' or 'projector'")
            parsed["kind"] = kind
            sigma = scenario.get("sigma")
            if not isinstance(sigma, (int, float)) or sigma <= 0:
                raise _fail("scenario.sigma must be a positive number")
            parsed["sigma"] = float(sigma)
        if command == "moments":
            g = scenario.get("g")
            if not isinstance(g, (int, float)):
                raise _fail("scenario.g must be a number")
            parsed["g"] = float(g)
        if command == "sweep":
            parsed["g_values"] = parse_g_range(scenario.get("g_range"), "scenario.g_range")
        cfg.scenario = parsed

    elif command == "hardy":
        section = raw.get("hardy", {})
        _require_keys(section, _HARDY_KEYS, "hardy")
        meter = section.get("meter", "continuous")
        if meter not in ("continuous", "qubit"):
            raise _fail("hardy.meter must be 'continuous' or 'qubit'")
        sigma = section.get("sigma", 1.0)
        if not isinstance(sigma, (int, float)) or sigma <= 0:
            raise _fail("hardy.sigma must be a positive number")
        cases = section.get("cases", [1, 2, 3, 4])
        if (
            not isinstance(cases, list)
            or not cases
            or any(c not in (1, 2, 3, 4) for c in cases)
        ):
            raise _fail("hardy.cases must be a non-empty subset of [1, 2, 3, 4]")
        g_values = None
        if "g_range" in section:
            g_values = parse_g_range(section["g_range"], "hardy.g_range")
            if meter == "qubit" and float(g_values[-1]) >= np.pi:
                raise _fail("hardy.g_range: qubit meter needs g < pi")
        cfg.hardy = {
            "meter": meter,
            "sigma": float(sigma),
            "cases": sorted(set(cases)),
            "g_values": g_values,
        }

    elif command == "verify":
        section = raw.get("verify", {})
        _require_keys(section, _VERIFY_KEYS, "verify")
        grid_n = section.get("grid_n", 1024)
        if grid_n not in (256, 512, 1024):
            raise _fail("verify.grid_n must be one of 256, 512, 1024")
        pairs = section.get("pairs", 50)
        if not isinstance(pairs, int) or pairs < 1:
            raise _fail("verify.pairs must be a positive integer")
        cfg.verify = {
            "grid_n": grid_n,
            "fast": bool(section.get("fast", False)),
            "pairs": pairs,
        }
    return cfg


# --------------------------------------------------------------------------
# subcommand runners
# --------------------------------------------------------------------------

def run_weakvalue(cfg: RunConfig, out: Path) -> int:
    sc = cfg.scenario
    wv = weak_value_set(sc["pre"], sc["post"], sc["a"], sc["b"])
    header = [
        "a_w_re", "a_w_im", "b_w_re", "b_w_im", "ab_w_re", "ab_w_im",
        "overlap_re", "overlap_im", "postselect_prob",
    ]
    table = SweepTable(header=header)
    table.append([
        wv.a_w.real, wv.a_w.imag, wv.b_w.real, wv.b_w.imag,
        wv.ab_w.real, wv.ab_w.imag, wv.overlap.real, wv.overlap.imag,
        wv.postselect_prob,
    ])
    emit_csv(table, out)
    print(f"a_w = {wv.a_w:.12g}")
    print(f"b_w = {wv.b_w:.12g}")
    print(f"ab_w = {wv.ab_w:.12g}")
    print(f"postselect_prob = {wv.postselect_prob:.12g}")
    print(f"wrote {out}")
    return 0


_MOMENT_COLUMNS = ["x", "y", "xy", "x_py", "x2", "px_py", "w_norm"]


def _scenario_row(sc: dict, g: float) -> list[float]:
    wv = weak_value_set(sc["pre"], sc["post"], sc["a"], sc["b"])
    sup = gaussian.superposition_from_weak_values(
        sc["kind"], wv, g, sc["sigma"], prob_weight=wv.postselect_prob
    )
    m = gaussian.moments(sup)
    inp = cf.ClosedFormInputs(wv, g, sc["sigma"])
    if sc["kind"] == "involutory":
        cfs = [cf.cf_x_inv(inp), cf.cf_xy_inv(inp), cf.cf_xpy_inv(inp),
               cf.cf_x2_inv(inp).displacement]
    else:
        cfs = [cf.cf_x_proj(inp), cf.cf_xy_proj(inp), cf.cf_pxpy_proj(inp)]
    return [g] + [getattr(m, c) for c in _MOMENT_COLUMNS] + cfs


def _cf_columns(kind: str) -> list[str]:
    if kind == "involutory":
        return ["cf_x", "cf_xy", "cf_x_py", "cf_x2"]
    return ["cf_x", "cf_xy", "cf_px_py"]


def run_moments(cfg: RunConfig, out: Path) -> int:
    sc = cfg.scenario
    header = ["g"] + _MOMENT_COLUMNS + _cf_columns(sc["kind"])
    table = SweepTable(header=header)
    table.append(_scenario_row(sc, sc["g"]))
    emit_csv(table, out)
    for name, value in zip(header, table.rows[0]):
        print(f"{name} = {value:.12g}")
    print(f"wrote {out}")
    return 0


def run_sweep(cfg: RunConfig, out: Path, plot: bool = True) -> int:
    sc = cfg.scenario
    header = ["g"] + _MOMENT_COLUMNS + _cf_columns(sc["kind"])
    table = SweepTable(header=header)
    for g in sc["g_values"]:
        try:
            table.append(_scenario_row(sc, float(g)))
        except DegenerateNorm:
            table.dropped += 1
    if table.dropped:
        print(
            f"jointweak: note: dropped {table.dropped} degenerate sweep points",
            file=sys.stderr,
        )
    if table.dropped > 0.01 * len(sc["g_values"]):
        raise ToolkitError(
            f"degenerate points ({table.dropped}) exceed 1% of the sweep"
        )
    emit_csv(table, out)
    if plot:
        fig = plotting.render_sweep_figure(
            header, table.rows, plotting.figure_path_for(out),
            f"pointer displacements ({sc['kind']} pair)",
        )
        print(f"wrote {fig}")
    print(f"wrote {out} ({len(table.rows)} rows)")
    return 0


def run_hardy(cfg: RunConfig, out: Path, plot: bool = True) -> int:
    hc = cfg.hardy
    scenario = hardy.build_scenario(hc["meter"], hc["sigma"])
    g_values = hc["g_values"]
    if g_values is None:
        g_values = hardy.default_g_values(hc["meter"])
    cases = hc["cases"]
    header = (
        ["g"]
        + [f"P{c}" for c in cases]
        + [f"P{c}_cf" for c in cases]
    )
    table = SweepTable(header=header)
    rows = []
    for g in g_values:
        try:
            prober = hardy.p_continuous if hc["meter"] == "continuous" else hardy.p_discrete
            results = [prober(scenario, c, float(g)) for c in cases]
        except DegenerateNorm:
            table.dropped += 1
            continue
        row = {"g": float(g)}
        for c, r in zip(cases, results):
            row[f"P{c}"] = r.engine
            row[f"P{c}_cf"] = r.closed_form
        rows.append(row)
        table.append(
            [row["g"]]
            + [row[f"P{c}"] for c in cases]
            + [row[f"P{c}_cf"] for c in cases]
        )
    if table.dropped:
        print(
            f"jointweak: note: dropped {table.dropped} degenerate sweep points",
            file=sys.stderr,
        )
    if table.dropped > 0.01 * len(g_values):
        raise ToolkitError(
            f"degenerate points ({table.dropped}) exceed 1% of the sweep"
        )
    emit_csv(table, out)
    if plot:
        fig = plotting.render_hardy_figure(
            rows, cases, hc["meter"], plotting.figure_path_for(out)
        )
        print(f"wrote {fig}")
    print(f"wrote {out} ({len(table.rows)} rows)")
    return 0


def run_verify(cfg: RunConfig, out: Path | None, fast: bool, grid_n: int | None) -> int:
    opts = dict(cfg.verify) if cfg.verify else {"grid_n": 1024, "fast": False, "pairs": 50}
    if fast:
        opts["fast"] = True
    if grid_n is not None:
        if grid_n not in (256, 512, 1024):
            raise ConfigError("--grid-n must be one of 256, 512, 1024")
        opts["grid_n"] = grid_n
    report = verify.run_all(
        grid_n=opts["grid_n"], fast=opts["fast"], pairs=opts["pairs"]
    )
    for res in report.results:
        print(res.line())
    n_pass = sum(1 for r in report.results if r.passed and not r.skipped)
    n_skip = sum(1 for r in report.results if r.skipped)
    n_note = sum(1 for r in report.results if r.adjudication)
    print(
        f"SUMMARY: {n_pass} passed, {len(report.failed)} failed, "
        f"{n_skip} skipped, {n_note} adjudications"
    )
    if out is not None:
        Path(out).write_text(
            json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
            encoding="ascii",
        )
        print(f"wrote {out}")
    return report.exit_code()


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

_DEFAULT_OUT = {
    "weakvalue": "weakvalue.csv",
    "moments": "moments.csv",
    "sweep": "sweep.csv",
    "hardy": "hardy.csv",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jointweak",
        description="joint weak measurement simulation and verification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("weakvalue", "moments", "sweep", "hardy"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="YAML run configuration")
        p.add_argument("--out", default=None, help="output CSV path")
        if name in ("sweep", "hardy"):
            p.add_argument(
                "--no-plot", action="store_true",
                help="skip the companion PNG figure",
            )
    pv = sub.add_parser("verify")
    pv.add_argument("--config", default=None, help="optional YAML configuration")
    pv.add_argument("--out", default=None, help="optional JSON report path")
    pv.add_argument("--fast", action="store_true", help="skip the grid oracle")
    pv.add_argument("--grid-n", type=int, default=None, help="grid resolution")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            text = Path(args.config).read_text() if args.config else ""
            cfg = parse_config(text, "verify")
            return run_verify(
                cfg,
                Path(args.out) if args.out else None,
                fast=args.fast,
                grid_n=args.grid_n,
            )
        text = Path(args.config).read_text()
        cfg = parse_config(text, args.command)
        out = Path(args.out) if args.out else Path(_DEFAULT_OUT[args.command])
        if args.command == "weakvalue":
            return run_weakvalue(cfg, out)
        if args.command == "moments":
            return run_moments(cfg, out)
        if args.command == "sweep":
            return run_sweep(cfg, out, plot=not args.no_plot)
        return run_hardy(cfg, out, plot=not args.no_plot)
    except ConfigError as exc:
        print(f"jointweak: error: config: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"jointweak: error: io: {exc}", file=sys.stderr)
        return 2
    except ToolkitError as exc:
        print(f"jointweak: error: run: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
