"""Time-marching recursion: initial conditions, per-step boundary and
interior updates, divergence monitoring, and result assembly."""
from __future__ import annotations

import time as _time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .control import ControlKind, ControllerSpec, tip_update_exact_model, tip_update_no_control, tip_update_pd
from .errors import GridMemoryError, ScenarioValidationError
from .mesh import Mesh, MeshConfig, build_mesh
from .models import (
    DISTRIBUTED_KINDS,
    MODEL_DISTURBANCE_KINDS,
    TIP_KINDS,
    DisturbanceSpec,
    FieldHistory,
    ModelKind,
    ModelSpec,
    apply_initial_conditions,
    eb_beam_interior_step,
    fixed_end_condition,
    heat_interior_step,
    string_interior_step,
    timoshenko_interior_step,
)
from .stability import (
    DEFAULT_DIVERGENCE_THRESHOLD,
    DivergenceVerdict,
    StabilityReport,
    beam_stability,
    heat_stability,
    monitor_step,
    wave_speed_heuristic,
)

DEFAULT_MEMORY_CAP_BYTES = 1 << 30  # full-history grids beyond this are refused

PHASE_NAMES = ("clamp", "tip", "interior")


@dataclass(frozen=True)
class Scenario:
    """Everything one run needs: model, grid, controller, disturbances,
    runtime divergence threshold, and a human label."""

    model: ModelSpec
    mesh: MeshConfig
    controller: ControllerSpec = ControllerSpec()
    disturbances: tuple[DisturbanceSpec, ...] = ()
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD
    label: str = ""
    notes: str = ""


@dataclass
class SimulationResult:
    """Completed grids, tip trajectory, stability verdicts, diagnostics.

    history is None when the run used rolling storage. Arrays are immutable
    by convention once returned.
    """

    scenario: Scenario
    history: Optional[FieldHistory]
    tip_times: np.ndarray
    tip_displacement: np.ndarray
    tip_rotation: Optional[np.ndarray]
    a_priori: Optional[StabilityReport]
    verdict: DivergenceVerdict
    wall_time: float
    steps_completed: int


def scenario_issues(scenario: Scenario) -> list[tuple[str, str]]:
    """All constraint violations as (key path, message) pairs."""
    found: list[tuple[str, str]] = []
    found.extend((f"mesh.{n}", m) for n, m in scenario.mesh.issues())
    found.extend((f"model.params.{n}", m) for n, m in scenario.model.params.issues())
    found.extend(
        (f"model.initial.{n}", m)
        for n, m in scenario.model.initial.issues(scenario.model.kind)
    )
    found.extend((f"controller.{n}", m) for n, m in scenario.controller.issues())
    if scenario.model.kind not in scenario.controller.compatible_models():
        found.append(
            (
                "controller.kind",
                f"{scenario.controller.kind.value} controller does not apply to "
                f"{scenario.model.kind.value}",
            )
        )
    allowed = MODEL_DISTURBANCE_KINDS[scenario.model.kind]
    for idx, spec in enumerate(scenario.disturbances):
        if spec.kind not in allowed:
            found.append(
                (
                    f"disturbances[{idx}].kind",
                    f"{spec.kind.value} does not apply to {scenario.model.kind.value}",
                )
            )
    if not (scenario.divergence_threshold > 0):
        found.append(
            ("divergence_threshold", f"must be > 0, got {scenario.divergence_threshold!r}")
        )
    return found


def validate_scenario(scenario: Scenario) -> None:
    found = scenario_issues(scenario)
    if found:
        raise ScenarioValidationError(found)


class _RollingRows:
    """Three-row circular buffer addressed by absolute time level; level j
    lives in row j mod 3. Supports the same indexing the kernels use."""

    def __init__(self, n_nodes: int):
        self.data = np.zeros((3, n_nodes), dtype=np.float64)
        self.shape = (3, n_nodes)

    def __getitem__(self, key):
        if isinstance(key, tuple):
            return self.data[(key[0] % 3,) + key[1:]]
        return self.data[key % 3]

    def __setitem__(self, key, value):
        if isinstance(key, tuple):
            self.data[(key[0] % 3,) + key[1:]] = value
        else:
            self.data[key % 3] = value


def _select_disturbances(
    scenario: Scenario,
) -> tuple[Optional[DisturbanceSpec], Optional[DisturbanceSpec]]:
    """Enabled (tip, distributed) specs for this scenario, or None."""
    tip = dist = None
    for spec in scenario.disturbances:
        if not spec.enabled:
            continue
        if spec.kind in TIP_KINDS:
            tip = spec
        elif spec.kind in DISTRIBUTED_KINDS:
            dist = spec
    return tip, dist


def _build_phases(
    scenario: Scenario, mesh: Mesh, history: FieldHistory
) -> dict[str, Callable[[int], None]]:
    model = scenario.model
    controller = scenario.controller
    tip_spec, dist_spec = _select_disturbances(scenario)

    def clamp(j: int) -> None:
        fixed_end_condition(model, history, j)

    if controller.kind is ControlKind.PD:
        def tip(j: int) -> None:
            tip_update_pd(model.params, controller.pd_gains, mesh, tip_spec, history, j)
    elif controller.kind is ControlKind.EXACT_MODEL:
        def tip(j: int) -> None:
            tip_update_exact_model(
                model.params,
                controller.em_gains,
                controller.disturbance_bound,
                mesh,
                tip_spec,
                history,
                j,
            )
    else:
        def tip(j: int) -> None:
            tip_update_no_control(model, mesh, tip_spec, history, j)

    if model.kind is ModelKind.HEAT:
        r = model.params.alpha * mesh.k / mesh.h**2

        def interior(j: int) -> None:
            heat_interior_step(r, history, j - 1)
    elif model.kind is ModelKind.EB_BEAM:
        def interior(j: int) -> None:
            eb_beam_interior_step(model.params, mesh, dist_spec, history, j)
    elif model.kind is ModelKind.TIMOSHENKO:
        def interior(j: int) -> None:
            timoshenko_interior_step(model.params, mesh, dist_spec, history, j)
    else:
        def interior(j: int) -> None:
            string_interior_step(model.params, mesh, dist_spec, history, j)

    return {"clamp": clamp, "tip": tip, "interior": interior}


def a_priori_report(scenario: Scenario, mesh: Mesh) -> StabilityReport:
    """Closed-form stability check where one exists, otherwise the advisory
    wave-speed heuristic."""
    params = scenario.model.params
    kind = scenario.model.kind
    if kind is ModelKind.HEAT:
        return heat_stability(params.alpha, mesh.h, mesh.k)
    if kind is ModelKind.EB_BEAM:
        return beam_stability(params.ei, params.rho, params.tension, mesh.h, mesh.k)
    if kind is ModelKind.TIMOSHENKO:
        return wave_speed_heuristic(params.max_wave_speed(), mesh.h, mesh.k)
    return wave_speed_heuristic(params.max_wave_speed(mesh.config.length), mesh.h, mesh.k)


def run(
    scenario: Scenario,
    *,
    store_history: bool = True,
    progress: Optional[Callable[[int, int], None]] = None,
    memory_cap_bytes: int = DEFAULT_MEMORY_CAP_BYTES,
    phase_order: Sequence[str] = PHASE_NAMES,
) -> SimulationResult:
    """Execute one scenario to completion or first divergence.

    Deterministic: identical scenarios produce bit-identical grids. The
    update order within a step is configurable only to demonstrate that all
    phases read levels j-1/j-2 exclusively, so any order gives the same
    result.
    """
    validate_scenario(scenario)
    if sorted(phase_order) != sorted(PHASE_NAMES):
        raise ValueError(f"phase_order must permute {PHASE_NAMES}, got {phase_order!r}")
    mesh = build_mesh(scenario.mesh)
    n_nodes = mesh.n_space + 1
    n_steps = mesh.n_time
    with_rotation = scenario.model.kind is ModelKind.TIMOSHENKO

    if store_history:
        fields = 2 if with_rotation else 1
        need = fields * (n_steps + 1) * n_nodes * 8
        if need > memory_cap_bytes:
            raise GridMemoryError(
                f"full history needs {need} bytes, exceeding the cap of "
                f"{memory_cap_bytes}; rerun with store_history=False or raise the cap"
            )
        history = FieldHistory.allocate(n_steps + 1, n_nodes, with_rotation)
    else:
        history = FieldHistory(
            w=_RollingRows(n_nodes),
            phi=_RollingRows(n_nodes) if with_rotation else None,
        )

    apply_initial_conditions(scenario.model, mesh, history)
    phases = _build_phases(scenario, mesh, history)
    verdict = DivergenceVerdict.clean()
    threshold = scenario.divergence_threshold

    tip_w = [float(history.w[0][-1]), float(history.w[1][-1])]
    tip_phi = (
        [float(history.phi[0][-1]), float(history.phi[1][-1])] if with_rotation else None
    )

    report_every = max(1, n_steps // 100)
    steps_completed = n_steps
    start = _time.perf_counter()
    for j in range(2, n_steps + 1):
        for name in phase_order:
            phases[name](j)
        if not store_history:
            tip_w.append(float(history.w[j][-1]))
            if with_rotation:
                tip_phi.append(float(history.phi[j][-1]))
        verdict = monitor_step(history.w[j], threshold, j, verdict)
        if with_rotation and not verdict.diverged:
            verdict = monitor_step(history.phi[j], threshold, j, verdict)
        if verdict.diverged:
            steps_completed = j
            break
        if progress is not None and (j % report_every == 0 or j == n_steps):
            progress(j, n_steps)
    wall = _time.perf_counter() - start

    if store_history:
        kept = steps_completed + 1
        history.w = history.w[:kept]
        if with_rotation:
            history.phi = history.phi[:kept]
        tip_displacement = history.w[:, -1].copy()
        tip_rotation = history.phi[:, -1].copy() if with_rotation else None
        result_history: Optional[FieldHistory] = history
    else:
        tip_displacement = np.array(tip_w[: steps_completed + 1])
        tip_rotation = np.array(tip_phi[: steps_completed + 1]) if with_rotation else None
        result_history = None

    tip_times = np.arange(steps_completed + 1) * mesh.k
    return SimulationResult(
        scenario=scenario,
        history=result_history,
        tip_times=tip_times,
        tip_displacement=tip_displacement,
        tip_rotation=tip_rotation,
        a_priori=a_priori_report(scenario, mesh),
        verdict=verdict,
        wall_time=wall,
        steps_completed=steps_completed,
    )


@dataclass(frozen=True)
class SweepEntry:
    value: float
    verdict: DivergenceVerdict
    final_tip_magnitude: float


def _with_gain(scenario: Scenario, gain_name: str, value: float) -> Scenario:
    controller = scenario.controller
    if controller.kind is ControlKind.PD:
        gains = controller.pd_gains
        if gain_name not in ("k1", "k2", "k3", "k4"):
            raise ValueError(f"unknown pd gain {gain_name!r}")
        controller = replace(controller, pd_gains=replace(gains, **{gain_name: value}))
    elif controller.kind is ControlKind.EXACT_MODEL:
        if gain_name not in ("k1", "k2"):
            raise ValueError(f"unknown exact_model gain {gain_name!r}")
        controller = replace(
            controller, em_gains=replace(controller.em_gains, **{gain_name: value})
        )
    else:
        raise ValueError("scenario has no controller gains to sweep")
    return replace(scenario, controller=controller)


def gain_sweep(
    base: Scenario,
    gain_name: str,
    values: Sequence[float],
    *,
    jobs: int = 1,
    store_history: bool = False,
) -> list[SweepEntry]:
    """Run the base scenario once per gain value; results keep input order."""
    scenarios = [_with_gain(base, gain_name, v) for v in values]

    def one(s: Scenario) -> SweepEntry:
        result = run(s, store_history=store_history)
        return SweepEntry(
            value=getattr(
                s.controller.pd_gains
                if s.controller.kind is ControlKind.PD
                else s.controller.em_gains,
                gain_name,
            ),
            verdict=result.verdict,
            final_tip_magnitude=float(abs(result.tip_displacement[-1])),
        )

    if jobs <= 1 or len(scenarios) <= 1:
        return [one(s) for s in scenarios]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, scenarios))
