"""flexsim: explicit finite-difference simulation of flexible links
(beams and strings) under disturbance, with boundary control."""

from .control import ControlKind, ControllerSpec, EMGains, PDGains
from .engine import Scenario, SimulationResult, gain_sweep, run
from .mesh import Mesh, MeshConfig, build_mesh
from .models import (
    DisturbanceKind,
    DisturbanceSpec,
    EBBeamParams,
    FieldHistory,
    HeatParams,
    InitialSpec,
    ModelKind,
    ModelSpec,
    StringParams,
    TimoshenkoParams,
)
from .scenario_io import export_result, load_scenario, save_scenario
from .stability import (
    DivergenceReason,
    DivergenceVerdict,
    StabilityReport,
    beam_stability,
    heat_stability,
    monitor_step,
)

__version__ = "0.1.0"

__all__ = [
    "ControlKind",
    "ControllerSpec",
    "DisturbanceKind",
    "DisturbanceSpec",
    "DivergenceReason",
    "DivergenceVerdict",
    "EBBeamParams",
    "EMGains",
    "FieldHistory",
    "HeatParams",
    "InitialSpec",
    "Mesh",
    "MeshConfig",
    "ModelKind",
    "ModelSpec",
    "PDGains",
    "Scenario",
    "SimulationResult",
    "StabilityReport",
    "StringParams",
    "TimoshenkoParams",
    "beam_stability",
    "build_mesh",
    "export_result",
    "gain_sweep",
    "heat_stability",
    "load_scenario",
    "monitor_step",
    "run",
    "save_scenario",
    "__version__",
]
