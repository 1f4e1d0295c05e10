"""Machine-readable catalog of the simulated systems: parameter schemas,
compatible controllers and disturbances, and ready-to-run default scenarios.
Drives the CLI listing, the HTTP catalog endpoint, and the UI forms."""
from __future__ import annotations

from typing import Any

from .control import DEFAULT_DISTURBANCE_BOUND
from .stability import DEFAULT_DIVERGENCE_THRESHOLD


def _param(name: str, default: float, minimum: float | None, description: str) -> dict:
    return {"name": name, "default": default, "min": minimum, "description": description}


_MODELS: list[dict[str, Any]] = [
    {
        "kind": "heat",
        "label": "Heat rod",
        "description": "Diffusion along a rod with both ends held at zero.",
        "fields": ["w"],
        "params": [
            _param("alpha", 1.0, 0.0, "thermal diffusivity"),
        ],
        "initial_kinds": ["sine", "zero", "noise"],
        "controllers": ["none"],
        "disturbances": [],
        "default_scenario": {
            "schema_version": 1,
            "label": "heat_default",
            "model": {"kind": "heat", "params": {"alpha": 1.0}},
            "mesh": {"n_space": 50, "n_time": 10000, "length": 1.0, "final_time": 1.0},
            "controller": {"kind": "none"},
            "disturbances": [],
            "divergence_threshold": DEFAULT_DIVERGENCE_THRESHOLD,
        },
    },
    {
        "kind": "eb_beam",
        "label": "Flexible beam",
        "description": "Tensioned, damped beam with fourth-order stiffness; "
        "held base, free or pinned tip.",
        "fields": ["w"],
        "params": [
            _param("rho", 1.0, 0.0, "mass per unit length"),
            _param("ei", 1.0, None, "bending stiffness"),
            _param("tension", 10.0, None, "axial tension"),
            _param("damping", 0.5, None, "viscous damping coefficient"),
        ],
        "initial_kinds": ["sine", "zero", "noise"],
        "controllers": ["none"],
        "disturbances": [],
        "default_scenario": {
            "schema_version": 1,
            "label": "eb_beam_default",
            "model": {
                "kind": "eb_beam",
                "params": {"rho": 1.0, "ei": 1.0, "tension": 10.0, "damping": 0.5, "boundary": "free"},
            },
            "mesh": {"n_space": 50, "n_time": 10000, "length": 1.0, "final_time": 1.0},
            "controller": {"kind": "none"},
            "disturbances": [],
            "divergence_threshold": DEFAULT_DIVERGENCE_THRESHOLD,
        },
    },
    {
        "kind": "timoshenko",
        "label": "Shear-deformable beam",
        "description": "Beam with independent displacement and cross-section "
        "rotation coupled through shear stiffness; tip payload under "
        "force/torque disturbances; optional PD tip control.",
        "fields": ["w", "phi"],
        "params": [
            _param("rho", 1.0, 0.0, "mass per unit length"),
            _param("i_rho", 1.0, 0.0, "cross-section mass moment of inertia"),
            _param("ei", 20.0, 0.0, "bending stiffness"),
            _param("shear_k", 50.0, 0.0, "shear stiffness"),
            _param("payload_mass", 0.01, 0.0, "tip payload mass"),
            _param("payload_inertia", 0.01, 0.0, "tip payload inertia"),
        ],
        "initial_kinds": ["ramp", "zero"],
        "controllers": ["none", "pd"],
        "gains": [
            _param("k1", 100.0, 0.0, "tip force, proportional"),
            _param("k2", 10.0, 0.0, "tip force, derivative"),
            _param("k3", 100.0, 0.0, "tip torque, proportional"),
            _param("k4", 10.0, 0.0, "tip torque, derivative"),
        ],
        "disturbances": ["timoshenko_tip", "timoshenko_distributed"],
        "default_scenario": {
            "schema_version": 1,
            "label": "timoshenko_pd_stable",
            "notes": "PD tip control with moderate derivative gains; tip settles near zero.",
            "model": {
                "kind": "timoshenko",
                "params": {
                    "rho": 1.0,
                    "i_rho": 1.0,
                    "ei": 20.0,
                    "shear_k": 50.0,
                    "payload_mass": 0.01,
                    "payload_inertia": 0.01,
                },
            },
            "mesh": {"n_space": 50, "n_time": 10000, "length": 2.0, "final_time": 10.0},
            "controller": {
                "kind": "pd",
                "pd_gains": {"k1": 100.0, "k2": 10.0, "k3": 100.0, "k4": 10.0},
            },
            "disturbances": [
                {"kind": "timoshenko_tip", "enabled": True},
                {"kind": "timoshenko_distributed", "enabled": True},
            ],
            "divergence_threshold": DEFAULT_DIVERGENCE_THRESHOLD,
        },
    },
    {
        "kind": "string",
        "label": "Non-uniform string",
        "description": "String with position-dependent base tension and a "
        "gradient-dependent tension term; tip payload under disturbance; "
        "optional exact-model tip control with a sign-function robust term.",
        "fields": ["w"],
        "params": [
            _param("payload_mass", 1.0, 0.0, "tip payload mass"),
            _param("tension_slope", 10.0, 0.0, "base tension slope a in a*(x+b)"),
            _param("tension_offset", 1.0, 0.0, "base tension offset b in a*(x+b)"),
            _param("lambda_coeff", 0.1, None, "gradient tension coefficient c in c*x"),
            _param("rho", 1.0, 0.0, "mass per unit length"),
        ],
        "initial_kinds": ["ramp", "zero"],
        "controllers": ["none", "exact_model"],
        "gains": [
            _param("k1", 10.0, 0.0, "tip velocity gain"),
            _param("k2", 10.0, 0.0, "tip gradient gain"),
        ],
        "disturbance_bound_default": DEFAULT_DISTURBANCE_BOUND,
        "disturbances": ["string_tip", "string_distributed"],
        "default_scenario": {
            "schema_version": 1,
            "label": "string_exact_model",
            "notes": "Exact-model tip control rejecting the tip disturbance; "
            "the distributed load stays off because boundary control cannot "
            "cancel interior static forcing.",
            "model": {
                "kind": "string",
                "params": {
                    "payload_mass": 1.0,
                    "tension_slope": 10.0,
                    "tension_offset": 1.0,
                    "lambda_coeff": 0.1,
                    "rho": 1.0,
                },
            },
            "mesh": {"n_space": 50, "n_time": 10000, "length": 1.0, "final_time": 10.0},
            "controller": {
                "kind": "exact_model",
                "em_gains": {"k1": 10.0, "k2": 10.0},
                "disturbance_bound": DEFAULT_DISTURBANCE_BOUND,
            },
            "disturbances": [
                {"kind": "string_tip", "enabled": True},
                {"kind": "string_distributed", "enabled": False},
            ],
            "divergence_threshold": DEFAULT_DIVERGENCE_THRESHOLD,
        },
    },
]

# Systems deliberately not offered: named in the original platform's menu but
# with no governing equations available to implement.
_EXCLUDED = [
    {"kind": "exponential_beam", "reason": "no governing equations available; not implemented"},
]


def model_catalog() -> dict[str, Any]:
    """Deep-copyable catalog document for the CLI and the HTTP API."""
    import copy

    return copy.deepcopy({"models": _MODELS, "excluded": _EXCLUDED})


def default_scenario_dict(kind: str) -> dict:
    for entry in _MODELS:
        if entry["kind"] == kind:
            import copy

            return copy.deepcopy(entry["default_scenario"])
    raise KeyError(f"unknown model kind {kind!r}")
