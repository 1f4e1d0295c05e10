"""The four simulated systems: heat rod, tensioned damped flexible beam,
shear-deformable beam with tip payload, and a non-uniform string.

Each model contributes initial conditions, optional disturbances, an interior
update rule, and (through the control module) tip update rules. All updates
are fully explicit: a new time level is computed from the two previous levels
only, so write order within a level never matters.

Sign conventions for the shear-deformable beam follow the energy-consistent
pair

    rho * w_tt  = K * (w_xx - phi_x) + f
    i_rho * phi_tt = EI * phi_xx + K * (w_x - phi)

with shear force K*(w_x - phi) and bending moment EI*phi_x; the tip payload
feels minus the shear and minus the moment. Any other pairing of the coupling
signs makes intermediate wavelengths grow without bound, which contradicts
the intended bounded no-control behavior.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .mesh import Mesh

ROTATION_INITIAL_ANGLE = math.pi / 6  # uniform initial cross-section rotation


def _raise_if_issues(found: list[tuple[str, str]]) -> None:
    if found:
        raise ValueError("; ".join(f"{name}: {msg}" for name, msg in found))


class ModelKind(enum.Enum):
    HEAT = "heat"
    EB_BEAM = "eb_beam"
    TIMOSHENKO = "timoshenko"
    STRING = "string"


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class HeatParams:
    alpha: float = 1.0

    def issues(self) -> list[tuple[str, str]]:
        if not (self.alpha > 0):
            return [("alpha", f"must be > 0, got {self.alpha!r}")]
        return []

    def validate(self) -> None:
        _raise_if_issues(self.issues())


@dataclass(frozen=True)
class EBBeamParams:
    """Tensioned, damped fourth-order beam. boundary selects the tip rule:
    'free' (zero moment and shear at the tip node) or 'pinned' (tip held
    at zero with a zero-moment reflection)."""

    rho: float = 1.0
    ei: float = 1.0
    tension: float = 10.0
    damping: float = 0.5
    boundary: str = "free"

    def issues(self) -> list[tuple[str, str]]:
        found = []
        if not (self.rho > 0):
            found.append(("rho", f"must be > 0, got {self.rho!r}"))
        for name in ("ei", "tension", "damping"):
            if getattr(self, name) < 0:
                found.append((name, f"must be >= 0, got {getattr(self, name)!r}"))
        if self.boundary not in ("free", "pinned"):
            found.append(("boundary", f"must be 'free' or 'pinned', got {self.boundary!r}"))
        return found

    def validate(self) -> None:
        _raise_if_issues(self.issues())


@dataclass(frozen=True)
class TimoshenkoParams:
    rho: float = 1.0            # mass per unit length
    i_rho: float = 1.0          # cross-section mass moment of inertia
    ei: float = 20.0            # bending stiffness
    shear_k: float = 50.0       # shear stiffness K = kGA
    payload_mass: float = 0.01  # tip payload mass M
    payload_inertia: float = 0.01  # tip payload inertia J

    def issues(self) -> list[tuple[str, str]]:
        found = []
        for name in ("rho", "i_rho", "ei", "shear_k", "payload_mass", "payload_inertia"):
            if not (getattr(self, name) > 0):
                found.append((name, f"must be > 0, got {getattr(self, name)!r}"))
        return found

    def validate(self) -> None:
        _raise_if_issues(self.issues())

    def max_wave_speed(self) -> float:
        return max(math.sqrt(self.shear_k / self.rho), math.sqrt(self.ei / self.i_rho))


@dataclass(frozen=True)
class StringParams:
    """Non-uniform string: base tension T0(x) = slope*(x + offset), gradient
    coefficient lambda(x) = lambda_coeff*x, local tension
    T = T0(x) + lambda(x)*w_x^2. Density is constant unless a profile
    callable is supplied programmatically (profiles are not serializable)."""

    payload_mass: float = 1.0
    tension_slope: float = 10.0
    tension_offset: float = 1.0
    lambda_coeff: float = 0.1
    rho: float = 1.0
    rho_profile: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, compare=False
    )

    def issues(self) -> list[tuple[str, str]]:
        found = []
        for name in ("payload_mass", "tension_slope", "tension_offset", "rho"):
            if not (getattr(self, name) > 0):
                found.append((name, f"must be > 0, got {getattr(self, name)!r}"))
        if self.lambda_coeff < 0:
            found.append(("lambda_coeff", f"must be >= 0, got {self.lambda_coeff!r}"))
        return found

    def validate(self) -> None:
        _raise_if_issues(self.issues())

    def base_tension(self, x):
        return self.tension_slope * (x + self.tension_offset)

    def base_tension_slope(self) -> float:
        return self.tension_slope

    def lam(self, x):
        return self.lambda_coeff * x

    def lam_slope(self) -> float:
        return self.lambda_coeff

    def density(self, x):
        if self.rho_profile is not None:
            return self.rho_profile(x)
        return self.rho * np.ones_like(np.asarray(x, dtype=float))

    def max_wave_speed(self, length: float) -> float:
        rho_min = float(np.min(self.density(np.linspace(0.0, length, 64))))
        return math.sqrt(self.base_tension(length) / rho_min)


ModelParams = Union[HeatParams, EBBeamParams, TimoshenkoParams, StringParams]

_PARAMS_BY_KIND = {
    ModelKind.HEAT: HeatParams,
    ModelKind.EB_BEAM: EBBeamParams,
    ModelKind.TIMOSHENKO: TimoshenkoParams,
    ModelKind.STRING: StringParams,
}


# ---------------------------------------------------------------------------
# initial conditions


@dataclass(frozen=True)
class InitialSpec:
    """Named initial displacement profile.

    'default' resolves per model: ramp for the two tip-payload models,
    sine for heat and the flexible beam. 'zero' rests every field;
    'noise' (heat/beam only) is a seeded uniform perturbation for
    excitation studies. Zero initial velocity is encoded by duplicating
    level 0 into level 1.
    """

    kind: str = "default"
    amplitude: float = 1.0
    seed: int = 0

    def issues(self, model_kind: ModelKind) -> list[tuple[str, str]]:
        allowed = {
            ModelKind.HEAT: {"default", "sine", "zero", "noise"},
            ModelKind.EB_BEAM: {"default", "sine", "zero", "noise"},
            ModelKind.TIMOSHENKO: {"default", "ramp", "zero"},
            ModelKind.STRING: {"default", "ramp", "zero"},
        }[model_kind]
        if self.kind not in allowed:
            return [(
                "kind",
                f"{self.kind!r} not valid for {model_kind.value}; choose from {sorted(allowed)}",
            )]
        return []

    def validate(self, model_kind: ModelKind) -> None:
        _raise_if_issues(self.issues(model_kind))


@dataclass(frozen=True)
class ModelSpec:
    kind: ModelKind
    params: ModelParams
    initial: InitialSpec = InitialSpec()

    def validate(self) -> None:
        expected = _PARAMS_BY_KIND[self.kind]
        if not isinstance(self.params, expected):
            raise ValueError(
                f"model kind {self.kind.value} requires {expected.__name__}, "
                f"got {type(self.params).__name__}"
            )
        self.params.validate()
        self.initial.validate(self.kind)


# ---------------------------------------------------------------------------
# disturbances


class DisturbanceKind(enum.Enum):
    TIMOSHENKO_TIP = "timoshenko_tip"
    TIMOSHENKO_DISTRIBUTED = "timoshenko_distributed"
    STRING_TIP = "string_tip"
    STRING_DISTRIBUTED = "string_distributed"


TIP_KINDS = {DisturbanceKind.TIMOSHENKO_TIP, DisturbanceKind.STRING_TIP}
DISTRIBUTED_KINDS = {
    DisturbanceKind.TIMOSHENKO_DISTRIBUTED,
    DisturbanceKind.STRING_DISTRIBUTED,
}

MODEL_DISTURBANCE_KINDS = {
    ModelKind.HEAT: set(),
    ModelKind.EB_BEAM: set(),
    ModelKind.TIMOSHENKO: {
        DisturbanceKind.TIMOSHENKO_TIP,
        DisturbanceKind.TIMOSHENKO_DISTRIBUTED,
    },
    ModelKind.STRING: {
        DisturbanceKind.STRING_TIP,
        DisturbanceKind.STRING_DISTRIBUTED,
    },
}


@dataclass(frozen=True)
class DisturbanceSpec:
    kind: DisturbanceKind
    enabled: bool = True


def eval_disturbance(spec: DisturbanceSpec, x, t: float, length: float):
    """Evaluate one disturbance waveform at physical position x and time t.

    Tip-payload kinds return the force on the payload (the beam tip kind
    returns the force/torque pair); distributed kinds return force per unit
    length and broadcast over array x. Disabled specs evaluate to zero.
    """
    if not spec.enabled:
        if spec.kind is DisturbanceKind.TIMOSHENKO_TIP:
            return 0.0, 0.0
        return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
    if spec.kind is DisturbanceKind.TIMOSHENKO_TIP:
        s = math.sin(math.pi * x * t) + math.sin(2 * math.pi * x * t) + math.sin(3 * math.pi * x * t)
        return 1.0 + s, s
    if spec.kind is DisturbanceKind.TIMOSHENKO_DISTRIBUTED:
        xt = np.asarray(x, dtype=float) * t
        return (np.asarray(x) / (1000.0 * length)) * (
            1.0
            + np.sin(0.1 * np.pi * xt)
            + np.sin(0.2 * np.pi * xt)
            + np.sin(0.3 * np.pi * xt)
        )
    if spec.kind is DisturbanceKind.STRING_TIP:
        return (
            1.0
            + 0.2 * math.sin(0.2 * t)
            + 0.3 * math.sin(0.3 * t)
            + 0.5 * math.sin(0.5 * t)
        )
    if spec.kind is DisturbanceKind.STRING_DISTRIBUTED:
        xt = np.asarray(x, dtype=float) * t
        return np.asarray(x) * (
            3.0 + np.sin(np.pi * xt) + np.sin(2 * np.pi * xt) + np.sin(3 * np.pi * xt)
        )
    raise ValueError(f"unknown disturbance kind {spec.kind!r}")


def string_tension(params: StringParams, x, wx):
    """Local string tension T0(x) + lambda(x)*wx^2."""
    return params.base_tension(x) + params.lam(x) * np.square(wx)


# ---------------------------------------------------------------------------
# field storage


@dataclass
class FieldHistory:
    """Displacement grid w indexed [time level, node]; rotation grid phi of
    the same shape for the shear-deformable beam, else None. Levels 0 and 1
    hold initial data; a run owns the history exclusively while stepping."""

    w: np.ndarray
    phi: Optional[np.ndarray] = None

    @classmethod
    def allocate(cls, n_levels: int, n_nodes: int, with_rotation: bool) -> "FieldHistory":
        w = np.zeros((n_levels, n_nodes), dtype=np.float64)
        phi = np.zeros((n_levels, n_nodes), dtype=np.float64) if with_rotation else None
        return cls(w=w, phi=phi)

    @property
    def n_levels(self) -> int:
        return self.w.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.w.shape[1]


def apply_initial_conditions(model: ModelSpec, mesh: Mesh, history: FieldHistory) -> FieldHistory:
    """Populate time levels 0 and 1 in place (two equal levels encode zero
    initial velocity) and return the history."""
    x = mesh.node_positions()
    init = model.initial
    kind = init.kind
    if kind == "default":
        kind = "ramp" if model.kind in (ModelKind.TIMOSHENKO, ModelKind.STRING) else "sine"

    if model.kind is ModelKind.TIMOSHENKO:
        if kind == "ramp":
            history.w[0] = init.amplitude * x / 2.0
            history.phi[0] = init.amplitude * ROTATION_INITIAL_ANGLE
        elif kind == "zero":
            history.w[0] = 0.0
            history.phi[0] = 0.0
        history.w[1] = history.w[0]
        history.phi[1] = history.phi[0]
        return history

    if model.kind is ModelKind.STRING:
        history.w[0] = init.amplitude * x if kind == "ramp" else 0.0
        history.w[1] = history.w[0]
        return history

    # heat / flexible beam
    if kind == "sine":
        history.w[0] = init.amplitude * np.sin(np.pi * x / mesh.config.length)
    elif kind == "noise":
        rng = np.random.default_rng(init.seed)
        profile = rng.uniform(-init.amplitude, init.amplitude, x.shape[0])
        profile[0] = 0.0
        if model.kind is ModelKind.HEAT:
            profile[-1] = 0.0
        history.w[0] = profile
    else:
        history.w[0] = 0.0
    history.w[1] = history.w[0]
    return history


def fixed_end_condition(model: ModelSpec, history: FieldHistory, j: int) -> None:
    """Clamp the held boundary nodes of level j to zero: node 0 for every
    model (displacement and rotation), both ends for the heat rod."""
    history.w[j, 0] = 0.0
    if history.phi is not None:
        history.phi[j, 0] = 0.0
    if model.kind is ModelKind.HEAT:
        history.w[j, -1] = 0.0


# ---------------------------------------------------------------------------
# interior update rules


def heat_interior_step(r: float, history: FieldHistory, j: int) -> None:
    """Write interior nodes of level j+1 from level j:
    new = r*left + (1-2r)*center + r*right. Endpoints stay untouched."""
    row = history.w[j]
    history.w[j + 1, 1:-1] = r * row[:-2] + (1.0 - 2.0 * r) * row[1:-1] + r * row[2:]


def _fourth_difference(row: np.ndarray, boundary: str) -> np.ndarray:
    """Five-point fourth difference over interior nodes 1..N-1.

    Missing neighbors are eliminated by reflection: the held base uses
    w(-1) = -w(1) (zero displacement and moment), the tip uses
    w(N+1) = 2w(N) - w(N-1) for a free moment or w(N+1) = -w(N-1) when the
    tip is pinned.
    """
    n = row.shape[0] - 1
    d4 = np.empty(n - 1, dtype=np.float64)
    d4[1:-1] = row[4:] - 4.0 * row[3:-1] + 6.0 * row[2:-2] - 4.0 * row[1:-3] + row[:-4]
    # node 1: ghost w(-1) = -w(1)
    d4[0] = row[3] - 4.0 * row[2] + 5.0 * row[1] - 4.0 * row[0]
    # node N-1
    if boundary == "free":
        ghost = 2.0 * row[n] - row[n - 1]
    else:
        ghost = -row[n - 1]
    d4[-1] = ghost - 4.0 * row[n] + 6.0 * row[n - 1] - 4.0 * row[n - 2] + row[n - 3]
    return d4


def eb_beam_interior_step(
    params: EBBeamParams,
    mesh: Mesh,
    disturbance: Optional[DisturbanceSpec],
    history: FieldHistory,
    j: int,
) -> None:
    """Write interior nodes 1..N-1 of level j for the flexible beam:
    three-level recursion with central tension term, five-point stiffness
    term, backward-difference damping, and forcing sampled at level j-1."""
    h, k = mesh.h, mesh.k
    w1 = history.w[j - 1]
    w2 = history.w[j - 2]
    d2 = w1[2:] - 2.0 * w1[1:-1] + w1[:-2]
    d4 = _fourth_difference(w1, params.boundary)
    new = (
        2.0 * w1[1:-1]
        - w2[1:-1]
        + (k**2 * params.tension / (params.rho * h**2)) * d2
        - (k**2 * params.ei / (params.rho * h**4)) * d4
        - (k * params.damping / params.rho) * (w1[1:-1] - w2[1:-1])
    )
    if disturbance is not None and disturbance.enabled:
        x = mesh.node_positions()[1:-1]
        new = new + (k**2 / params.rho) * eval_disturbance(
            disturbance, x, mesh.time(j - 1), mesh.config.length
        )
    history.w[j, 1:-1] = new


def timoshenko_interior_step(
    params: TimoshenkoParams,
    mesh: Mesh,
    disturbance: Optional[DisturbanceSpec],
    history: FieldHistory,
    j: int,
) -> None:
    """Write interior nodes 1..N-1 of level j for displacement and rotation.

    Displacement: w_new = 2w - w_old + (k^2 K/rho) * (D2w/h^2 - Dphi/h) + (k^2/rho) f
    Rotation:   phi_new = 2phi - phi_old + (k^2 EI/I_rho) * D2phi/h^2
                          + (k^2 K/I_rho) * (Dw/h - phi)
    with central second differences D2, backward first differences D, and
    forcing sampled at level j-1.
    """
    h, k = mesh.h, mesh.k
    w1, w2 = history.w[j - 1], history.w[j - 2]
    p1, p2 = history.phi[j - 1], history.phi[j - 2]
    d2w = w1[2:] - 2.0 * w1[1:-1] + w1[:-2]
    d2p = p1[2:] - 2.0 * p1[1:-1] + p1[:-2]
    dw = w1[1:-1] - w1[:-2]
    dp = p1[1:-1] - p1[:-2]
    ck = k**2 * params.shear_k
    new_w = (
        2.0 * w1[1:-1]
        - w2[1:-1]
        + (ck / params.rho) * (d2w / h**2 - dp / h)
    )
    if disturbance is not None and disturbance.enabled:
        x = mesh.node_positions()[1:-1]
        new_w = new_w + (k**2 / params.rho) * eval_disturbance(
            disturbance, x, mesh.time(j - 1), mesh.config.length
        )
    new_p = (
        2.0 * p1[1:-1]
        - p2[1:-1]
        + (k**2 * params.ei / (params.i_rho * h**2)) * d2p
        + (ck / params.i_rho) * (dw / h - p1[1:-1])
    )
    history.w[j, 1:-1] = new_w
    history.phi[j, 1:-1] = new_p


def string_interior_step(
    params: StringParams,
    mesh: Mesh,
    disturbance: Optional[DisturbanceSpec],
    history: FieldHistory,
    j: int,
) -> None:
    """Write interior nodes 1..N-1 of level j for the non-uniform string.

    The local tension uses the level j-1 backward gradient; the update keeps
    the gradient-dependent terms separate:
      T*w_xx + T0'*w_x + lambda'*w_x^3 + 3*lambda*w_x^2*w_xx + f.
    """
    h, k = mesh.h, mesh.k
    w1, w2 = history.w[j - 1], history.w[j - 2]
    x = mesh.node_positions()[1:-1]
    g = (w1[1:-1] - w1[:-2]) / h
    d2 = (w1[2:] - 2.0 * w1[1:-1] + w1[:-2]) / h**2
    tension = string_tension(params, x, g)
    rho = params.density(x)
    forcing = (
        tension * d2
        + params.base_tension_slope() * g
        + params.lam_slope() * g**3
        + 3.0 * params.lam(x) * g**2 * d2
    )
    if disturbance is not None and disturbance.enabled:
        forcing = forcing + eval_disturbance(
            disturbance, x, mesh.time(j - 1), mesh.config.length
        )
    history.w[j, 1:-1] = 2.0 * w1[1:-1] - w2[1:-1] + (k**2 / rho) * forcing
