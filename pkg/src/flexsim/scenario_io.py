"""Scenario file loading/saving and result persistence.

Scenario files are strict JSON: schema version 1, unknown keys rejected,
every constraint violation reported with its key path. Result bundles are a
directory of plain files cross-referenced from a key=value metadata document:
grids as CSV (17 significant digits, lossless for 64-bit floats) and/or flat
little-endian float64 binary, plus a two-column tip trajectory CSV.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .control import ControlKind, ControllerSpec, EMGains, PDGains, DEFAULT_DISTURBANCE_BOUND
from .engine import Scenario, SimulationResult, scenario_issues
from .errors import ScenarioValidationError
from .mesh import MeshConfig
from .models import (
    DisturbanceKind,
    DisturbanceSpec,
    EBBeamParams,
    HeatParams,
    InitialSpec,
    ModelKind,
    ModelSpec,
    StringParams,
    TimoshenkoParams,
)
from .stability import DEFAULT_DIVERGENCE_THRESHOLD, DivergenceReason

SCHEMA_VERSION = 1
BUNDLE_FORMAT_VERSION = 1
CSV_FLOAT_FORMAT = "%.17g"  # guarantees float64 text round-trip

_PARAM_FIELDS = {
    ModelKind.HEAT: {"alpha": float},
    ModelKind.EB_BEAM: {
        "rho": float,
        "ei": float,
        "tension": float,
        "damping": float,
        "boundary": str,
    },
    ModelKind.TIMOSHENKO: {
        "rho": float,
        "i_rho": float,
        "ei": float,
        "shear_k": float,
        "payload_mass": float,
        "payload_inertia": float,
    },
    ModelKind.STRING: {
        "payload_mass": float,
        "tension_slope": float,
        "tension_offset": float,
        "lambda_coeff": float,
        "rho": float,
    },
}

_PARAM_TYPES = {
    ModelKind.HEAT: HeatParams,
    ModelKind.EB_BEAM: EBBeamParams,
    ModelKind.TIMOSHENKO: TimoshenkoParams,
    ModelKind.STRING: StringParams,
}


class _Collector:
    def __init__(self):
        self.issues: list[tuple[str, str]] = []

    def add(self, path: str, msg: str) -> None:
        self.issues.append((path, msg))

    def raise_if_any(self) -> None:
        if self.issues:
            raise ScenarioValidationError(self.issues)


def _expect_mapping(c: _Collector, value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        c.add(path, f"expected an object, got {type(value).__name__}")
        return {}
    return value


def _take_number(c: _Collector, obj: dict, key: str, path: str, default=None, required=False):
    if key not in obj:
        if required:
            c.add(f"{path}.{key}" if path else key, "missing required key")
        return default
    val = obj.pop(key)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        c.add(f"{path}.{key}" if path else key, f"expected a number, got {val!r}")
        return default
    return float(val)


def _take_int(c: _Collector, obj: dict, key: str, path: str, default=None, required=False):
    if key not in obj:
        if required:
            c.add(f"{path}.{key}" if path else key, "missing required key")
        return default
    val = obj.pop(key)
    if isinstance(val, bool) or not isinstance(val, int):
        c.add(f"{path}.{key}" if path else key, f"expected an integer, got {val!r}")
        return default
    return val


def _take_str(c: _Collector, obj: dict, key: str, path: str, default=None, required=False):
    if key not in obj:
        if required:
            c.add(f"{path}.{key}" if path else key, "missing required key")
        return default
    val = obj.pop(key)
    if not isinstance(val, str):
        c.add(f"{path}.{key}" if path else key, f"expected a string, got {val!r}")
        return default
    return val


def _take_bool(c: _Collector, obj: dict, key: str, path: str, default=None):
    if key not in obj:
        return default
    val = obj.pop(key)
    if not isinstance(val, bool):
        c.add(f"{path}.{key}" if path else key, f"expected a boolean, got {val!r}")
        return default
    return val


def _reject_unknown(c: _Collector, obj: dict, path: str) -> None:
    for key in obj:
        c.add(f"{path}.{key}" if path else key, "unknown key")


def scenario_from_dict(doc: dict) -> Scenario:
    """Parse and validate a scenario document; raises ScenarioValidationError
    listing every problem with its key path."""
    c = _Collector()
    doc = dict(_expect_mapping(c, doc, ""))
    c.raise_if_any()

    version = _take_int(c, doc, "schema_version", "", required=True)
    if version is not None and version != SCHEMA_VERSION:
        c.add("schema_version", f"unsupported version {version}; this build reads {SCHEMA_VERSION}")
    label = _take_str(c, doc, "label", "", default="")
    notes = _take_str(c, doc, "notes", "", default="")
    threshold = _take_number(
        c, doc, "divergence_threshold", "", default=DEFAULT_DIVERGENCE_THRESHOLD
    )

    # model
    model_obj = dict(_expect_mapping(c, doc.pop("model", None), "model"))
    kind_str = _take_str(c, model_obj, "kind", "model", required=True)
    model_kind = None
    if kind_str is not None:
        try:
            model_kind = ModelKind(kind_str)
        except ValueError:
            c.add("model.kind", f"unknown model kind {kind_str!r}")
    params = None
    if model_kind is not None:
        params_obj = dict(_expect_mapping(c, model_obj.pop("params", {}), "model.params"))
        fields = {}
        for name, typ in _PARAM_FIELDS[model_kind].items():
            if typ is float:
                val = _take_number(c, params_obj, name, "model.params")
            else:
                val = _take_str(c, params_obj, name, "model.params")
            if val is not None:
                fields[name] = val
        _reject_unknown(c, params_obj, "model.params")
        try:
            params = _PARAM_TYPES[model_kind](**fields)
        except TypeError:
            params = None
    initial_obj = dict(_expect_mapping(c, model_obj.pop("initial", {}), "model.initial"))
    initial = InitialSpec(
        kind=_take_str(c, initial_obj, "kind", "model.initial", default="default"),
        amplitude=_take_number(c, initial_obj, "amplitude", "model.initial", default=1.0),
        seed=_take_int(c, initial_obj, "seed", "model.initial", default=0),
    )
    _reject_unknown(c, initial_obj, "model.initial")
    _reject_unknown(c, model_obj, "model")

    # mesh
    mesh_obj = dict(_expect_mapping(c, doc.pop("mesh", None), "mesh"))
    mesh = MeshConfig(
        n_space=_take_int(c, mesh_obj, "n_space", "mesh", required=True) or 0,
        n_time=_take_int(c, mesh_obj, "n_time", "mesh", required=True) or 0,
        length=_take_number(c, mesh_obj, "length", "mesh", required=True) or 0.0,
        final_time=_take_number(c, mesh_obj, "final_time", "mesh", required=True) or 0.0,
    )
    _reject_unknown(c, mesh_obj, "mesh")

    # controller
    controller = ControllerSpec()
    if "controller" in doc:
        ctl_obj = dict(_expect_mapping(c, doc.pop("controller"), "controller"))
        ctl_kind_str = _take_str(c, ctl_obj, "kind", "controller", default="none")
        ctl_kind = ControlKind.NONE
        try:
            ctl_kind = ControlKind(ctl_kind_str)
        except ValueError:
            c.add("controller.kind", f"unknown controller kind {ctl_kind_str!r}")
        pd_gains = None
        em_gains = None
        if "pd_gains" in ctl_obj:
            if ctl_kind is not ControlKind.PD:
                c.add("controller.pd_gains", f"not applicable to kind {ctl_kind.value!r}")
                ctl_obj.pop("pd_gains")
            else:
                g = dict(_expect_mapping(c, ctl_obj.pop("pd_gains"), "controller.pd_gains"))
                pd_gains = PDGains(
                    k1=_take_number(c, g, "k1", "controller.pd_gains", default=PDGains.k1),
                    k2=_take_number(c, g, "k2", "controller.pd_gains", default=PDGains.k2),
                    k3=_take_number(c, g, "k3", "controller.pd_gains", default=PDGains.k3),
                    k4=_take_number(c, g, "k4", "controller.pd_gains", default=PDGains.k4),
                )
                _reject_unknown(c, g, "controller.pd_gains")
        elif ctl_kind is ControlKind.PD:
            pd_gains = PDGains()
        if "em_gains" in ctl_obj:
            if ctl_kind is not ControlKind.EXACT_MODEL:
                c.add("controller.em_gains", f"not applicable to kind {ctl_kind.value!r}")
                ctl_obj.pop("em_gains")
            else:
                g = dict(_expect_mapping(c, ctl_obj.pop("em_gains"), "controller.em_gains"))
                em_gains = EMGains(
                    k1=_take_number(c, g, "k1", "controller.em_gains", default=EMGains.k1),
                    k2=_take_number(c, g, "k2", "controller.em_gains", default=EMGains.k2),
                )
                _reject_unknown(c, g, "controller.em_gains")
        elif ctl_kind is ControlKind.EXACT_MODEL:
            em_gains = EMGains()
        bound = _take_number(
            c, ctl_obj, "disturbance_bound", "controller", default=DEFAULT_DISTURBANCE_BOUND
        )
        _reject_unknown(c, ctl_obj, "controller")
        controller = ControllerSpec(
            kind=ctl_kind, pd_gains=pd_gains, em_gains=em_gains, disturbance_bound=bound
        )

    # disturbances
    disturbances: list[DisturbanceSpec] = []
    if "disturbances" in doc:
        arr = doc.pop("disturbances")
        if not isinstance(arr, list):
            c.add("disturbances", f"expected a list, got {type(arr).__name__}")
        else:
            for idx, item in enumerate(arr):
                path = f"disturbances[{idx}]"
                obj = dict(_expect_mapping(c, item, path))
                kind_s = _take_str(c, obj, "kind", path, required=True)
                enabled = _take_bool(c, obj, "enabled", path, default=True)
                _reject_unknown(c, obj, path)
                if kind_s is None:
                    continue
                try:
                    disturbances.append(DisturbanceSpec(DisturbanceKind(kind_s), enabled))
                except ValueError:
                    c.add(f"{path}.kind", f"unknown disturbance kind {kind_s!r}")

    _reject_unknown(c, doc, "")
    if model_kind is None or params is None:
        c.raise_if_any()

    scenario = Scenario(
        model=ModelSpec(kind=model_kind, params=params, initial=initial),
        mesh=mesh,
        controller=controller,
        disturbances=tuple(disturbances),
        divergence_threshold=threshold,
        label=label or "",
        notes=notes or "",
    )
    seen = {path for path, _ in c.issues}
    c.issues.extend(
        (path, msg) for path, msg in scenario_issues(scenario) if path not in seen
    )
    c.raise_if_any()
    return scenario


def scenario_to_dict(scenario: Scenario) -> dict:
    """Serialize to the schema scenario_from_dict reads (normal form)."""
    params = scenario.model.params
    params_doc = {
        name: getattr(params, name) for name in _PARAM_FIELDS[scenario.model.kind]
    }
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "label": scenario.label,
        "model": {
            "kind": scenario.model.kind.value,
            "params": params_doc,
            "initial": {
                "kind": scenario.model.initial.kind,
                "amplitude": scenario.model.initial.amplitude,
                "seed": scenario.model.initial.seed,
            },
        },
        "mesh": {
            "n_space": scenario.mesh.n_space,
            "n_time": scenario.mesh.n_time,
            "length": scenario.mesh.length,
            "final_time": scenario.mesh.final_time,
        },
        "controller": {"kind": scenario.controller.kind.value},
        "disturbances": [
            {"kind": d.kind.value, "enabled": d.enabled} for d in scenario.disturbances
        ],
        "divergence_threshold": scenario.divergence_threshold,
    }
    if scenario.notes:
        doc["notes"] = scenario.notes
    if scenario.controller.kind is ControlKind.PD:
        g = scenario.controller.pd_gains
        doc["controller"]["pd_gains"] = {"k1": g.k1, "k2": g.k2, "k3": g.k3, "k4": g.k4}
    if scenario.controller.kind is ControlKind.EXACT_MODEL:
        g = scenario.controller.em_gains
        doc["controller"]["em_gains"] = {"k1": g.k1, "k2": g.k2}
        doc["controller"]["disturbance_bound"] = scenario.controller.disturbance_bound
    return doc


def load_scenario(path: str | os.PathLike) -> Scenario:
    """Read, parse, and validate a scenario file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioValidationError([("", f"not valid JSON: {exc}")]) from exc
    return scenario_from_dict(doc)


def save_scenario(scenario: Scenario, path: str | os.PathLike) -> None:
    Path(path).write_text(
        json.dumps(scenario_to_dict(scenario), indent=2) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# result bundles


@dataclass
class ResultBundle:
    """Locations and shapes of one exported run."""

    directory: Path
    metadata: dict[str, str]
    fields: dict[str, dict[str, str]]  # field name -> {"csv": ..., "bin": ...}
    tip_file: str
    scenario_file: str


def _write_grid_csv(path: Path, grid: np.ndarray, times: np.ndarray) -> None:
    n_nodes = grid.shape[1]
    header = "t," + ",".join(f"x_{i}" for i in range(n_nodes))
    data = np.column_stack([times, grid])
    np.savetxt(path, data, fmt=CSV_FLOAT_FORMAT, delimiter=",", header=header, comments="")


def _read_grid_csv(path: Path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1:]


def export_result(
    result: SimulationResult,
    directory: str | os.PathLike,
    formats: set[str] = frozenset({"csv", "bin"}),
) -> ResultBundle:
    """Write one completed run to a directory.

    Grid rows cover exactly the completed levels (a diverged run stops at the
    first bad step). Requires the run to have kept its history.
    """
    unknown = set(formats) - {"csv", "bin"}
    if unknown:
        raise ValueError(f"unknown formats {sorted(unknown)}; choose from csv, bin")
    if result.history is None:
        raise ValueError("cannot export a rolling-mode result; rerun with full history")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    grids = {"w": result.history.w}
    if result.history.phi is not None:
        grids["phi"] = result.history.phi

    fields: dict[str, dict[str, str]] = {}
    for name, grid in grids.items():
        entry: dict[str, str] = {}
        if "csv" in formats:
            entry["csv"] = f"{name}.csv"
            _write_grid_csv(directory / entry["csv"], grid, result.tip_times)
        if "bin" in formats:
            entry["bin"] = f"{name}.bin"
            (directory / entry["bin"]).write_bytes(
                np.ascontiguousarray(grid, dtype="<f8").tobytes()
            )
        fields[name] = entry

    tip_file = "tip.csv"
    tip = np.column_stack([result.tip_times, result.tip_displacement])
    np.savetxt(
        directory / tip_file,
        tip,
        fmt=CSV_FLOAT_FORMAT,
        delimiter=",",
        header="t,w_tip",
        comments="",
    )

    scenario_file = "scenario.json"
    save_scenario(result.scenario, directory / scenario_file)

    verdict = result.verdict
    meta: dict[str, str] = {
        "format_version": str(BUNDLE_FORMAT_VERSION),
        "label": result.scenario.label,
        "model_kind": result.scenario.model.kind.value,
        "steps_completed": str(result.steps_completed),
        "verdict_diverged": "true" if verdict.diverged else "false",
        "verdict_reason": verdict.reason.value,
        "first_bad_step": "" if verdict.first_bad_step is None else str(verdict.first_bad_step),
        "peak_magnitude": repr(verdict.peak_magnitude),
        "wall_time_seconds": repr(result.wall_time),
        "mesh_n_space": str(result.scenario.mesh.n_space),
        "mesh_n_time": str(result.scenario.mesh.n_time),
        "mesh_length": repr(result.scenario.mesh.length),
        "mesh_final_time": repr(result.scenario.mesh.final_time),
        "tip_file": tip_file,
        "scenario_file": scenario_file,
    }
    if result.a_priori is not None:
        meta["apriori_criterion"] = result.a_priori.criterion_name
        meta["apriori_lhs"] = repr(result.a_priori.lhs_value)
        meta["apriori_threshold"] = repr(result.a_priori.threshold)
        meta["apriori_stable"] = "true" if result.a_priori.predicted_stable else "false"
        meta["apriori_advisory"] = "true" if result.a_priori.advisory else "false"
    for name, entry in fields.items():
        meta[f"field_{name}_rows"] = str(grids[name].shape[0])
        meta[f"field_{name}_cols"] = str(grids[name].shape[1])
        for fmt, fname in entry.items():
            meta[f"field_{name}_{fmt}"] = fname

    lines = [f"{key}={value}" for key, value in meta.items()]
    (directory / "metadata.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return ResultBundle(
        directory=directory,
        metadata=meta,
        fields=fields,
        tip_file=tip_file,
        scenario_file=scenario_file,
    )


def read_metadata(directory: str | os.PathLike) -> dict[str, str]:
    meta: dict[str, str] = {}
    for line in (Path(directory) / "metadata.txt").read_text(encoding="utf-8").splitlines():
        if line.strip():
            key, _, value = line.partition("=")
            meta[key] = value
    return meta


def import_grid(directory: str | os.PathLike, field: str, prefer: str = "bin") -> np.ndarray:
    """Load one exported grid back; binary is bit-exact, CSV is lossless via
    the 17-digit format."""
    directory = Path(directory)
    meta = read_metadata(directory)
    rows = int(meta[f"field_{field}_rows"])
    cols = int(meta[f"field_{field}_cols"])
    bin_key, csv_key = f"field_{field}_bin", f"field_{field}_csv"
    if prefer == "bin" and bin_key in meta:
        raw = (directory / meta[bin_key]).read_bytes()
        return np.frombuffer(raw, dtype="<f8").reshape(rows, cols).copy()
    if csv_key in meta:
        _, grid = _read_grid_csv(directory / meta[csv_key])
        if grid.shape != (rows, cols):
            raise ValueError(
                f"grid shape {grid.shape} does not match metadata ({rows}, {cols})"
            )
        return grid
    raise FileNotFoundError(f"no stored file for field {field!r} in {directory}")
