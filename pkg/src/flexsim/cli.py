"""Command-line front end: run scenarios, check stability ahead of time,
sweep gains, list models, and convert exported bundles.

Output is machine-greppable key=value lines. Exit codes separate physics from
plumbing: 0 clean/stable, 2 diverged or predicted unstable, 1 usage or
validation failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog, engine, scenario_io
from .errors import GridMemoryError, ScenarioValidationError
from .mesh import build_mesh

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DIVERGED = 2


def _parse_override(text: str) -> tuple[str, object]:
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise ValueError(f"override must look like key.path=value, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw  # bare strings stay strings
    return key, value


def apply_overrides(doc: dict, overrides: list[str]) -> dict:
    """Apply dotted-path key=value overrides to a scenario document.

    Equivalent to editing the file: the result goes through the same strict
    validation, so unknown paths are rejected there.
    """
    for item in overrides:
        key, value = _parse_override(item)
        node = doc
        parts = key.split(".")
        for part in parts[:-1]:
            nxt = node.get(part)
            if not isinstance(nxt, dict):
                nxt = {}
                node[part] = nxt
            node = nxt
        node[parts[-1]] = value
    return doc


def _load_scenario(args) -> engine.Scenario:
    doc = json.loads(Path(args.scenario).read_text(encoding="utf-8"))
    if args.set:
        doc = apply_overrides(doc, args.set)
    return scenario_io.scenario_from_dict(doc)


def _print_issues(exc: ScenarioValidationError) -> None:
    for path, msg in exc.issues:
        print(f"error={path or '<document>'} message={msg}", file=sys.stderr)


def cmd_run(args) -> int:
    scenario = _load_scenario(args)
    if args.threshold is not None:
        from dataclasses import replace

        scenario = replace(scenario, divergence_threshold=args.threshold)
    result = engine.run(scenario)
    verdict = result.verdict
    print(f"label={scenario.label or Path(args.scenario).stem}")
    print(f"verdict={'diverged' if verdict.diverged else 'stable'}")
    if verdict.diverged:
        print(f"first_bad_step={verdict.first_bad_step}")
        print(f"reason={verdict.reason.value}")
    print(f"steps_completed={result.steps_completed}")
    print(f"peak_magnitude={verdict.peak_magnitude!r}")
    print(f"final_tip={float(result.tip_displacement[-1])!r}")
    print(f"wall_time_seconds={result.wall_time:.3f}")
    if args.out:
        formats = {"csv", "bin"} if args.format == "both" else {args.format}
        bundle = scenario_io.export_result(result, args.out, formats)
        print(f"bundle={bundle.directory}")
    return EXIT_DIVERGED if verdict.diverged else EXIT_OK


def cmd_check(args) -> int:
    scenario = _load_scenario(args)
    mesh = build_mesh(scenario.mesh)
    report = engine.a_priori_report(scenario, mesh)
    print(f"criterion={report.criterion_name}")
    print(f"lhs={report.lhs_value!r}")
    print(f"threshold={report.threshold!r}")
    print(f"predicted_stable={'true' if report.predicted_stable else 'false'}")
    print(f"margin={report.margin!r}")
    if report.advisory:
        print("note=advisory (no closed-form criterion for this model)")
    return EXIT_OK if report.predicted_stable else EXIT_DIVERGED


def cmd_sweep(args) -> int:
    scenario = _load_scenario(args)
    values = [float(v) for v in args.values.split(",") if v.strip()]
    entries = engine.gain_sweep(scenario, args.gain, values, jobs=args.jobs)
    for entry in entries:
        verdict = "diverged" if entry.verdict.diverged else "stable"
        step = "" if entry.verdict.first_bad_step is None else entry.verdict.first_bad_step
        print(
            f"gain={args.gain} value={entry.value!r} verdict={verdict} "
            f"first_bad_step={step} final_tip={entry.final_tip_magnitude!r}"
        )
    return EXIT_OK


def cmd_list_models(args) -> int:
    doc = catalog.model_catalog()
    if args.json:
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    for model in doc["models"]:
        print(f"kind={model['kind']} label={model['label']} fields={','.join(model['fields'])}")
        for p in model["params"]:
            print(f"  param={p['name']} default={p['default']!r}")
        print(f"  controllers={','.join(model['controllers'])}")
        if model["disturbances"]:
            print(f"  disturbances={','.join(model['disturbances'])}")
    for entry in doc["excluded"]:
        print(f"excluded={entry['kind']} reason={entry['reason']}")
    return EXIT_OK


def cmd_export(args) -> int:
    meta = scenario_io.read_metadata(args.bundle)
    fields = sorted(
        key.split("_")[1]
        for key in meta
        if key.startswith("field_") and key.endswith("_rows")
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    times = None
    formats = {"csv", "bin"} if args.format == "both" else {args.format}
    import numpy as np

    for field in fields:
        grid = scenario_io.import_grid(args.bundle, field)
        if times is None:
            k = float(meta["mesh_final_time"]) / int(meta["mesh_n_time"])
            times = np.arange(grid.shape[0]) * k
        if "csv" in formats:
            scenario_io._write_grid_csv(out / f"{field}.csv", grid, times)
            print(f"wrote={out / (field + '.csv')}")
        if "bin" in formats:
            (out / f"{field}.bin").write_bytes(np.ascontiguousarray(grid, "<f8").tobytes())
            print(f"wrote={out / (field + '.bin')}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flexsim",
        description="Explicit finite-difference simulation of flexible links "
        "with boundary control.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_args(p):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a scenario key by dotted path (repeatable), "
            "e.g. --set controller.pd_gains.k2=30",
        )

    p_run = sub.add_parser("run", help="run one scenario")
    add_scenario_args(p_run)
    p_run.add_argument("--out", help="directory to write the result bundle")
    p_run.add_argument("--format", choices=["csv", "bin", "both"], default="both")
    p_run.add_argument("--threshold", type=float, help="divergence threshold override")
    p_run.set_defaults(func=cmd_run)

    p_check = sub.add_parser("check", help="a-priori stability check")
    add_scenario_args(p_check)
    p_check.set_defaults(func=cmd_check)

    p_sweep = sub.add_parser("sweep", help="run the scenario once per gain value")
    add_scenario_args(p_sweep)
    p_sweep.add_argument("--gain", required=True, help="gain name, e.g. k2")
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel runs")
    p_sweep.set_defaults(func=cmd_sweep)

    p_list = sub.add_parser("list-models", help="print the model catalog")
    p_list.add_argument("--json", action="store_true", help="print JSON")
    p_list.set_defaults(func=cmd_list_models)

    p_export = sub.add_parser("export", help="convert an existing bundle's grids")
    p_export.add_argument("--bundle", required=True, help="existing bundle directory")
    p_export.add_argument("--out", required=True, help="output directory")
    p_export.add_argument("--format", choices=["csv", "bin", "both"], default="csv")
    p_export.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioValidationError as exc:
        _print_issues(exc)
        return EXIT_ERROR
    except (ValueError, GridMemoryError, FileNotFoundError, KeyError) as exc:
        print(f"error={type(exc).__name__} message={exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
