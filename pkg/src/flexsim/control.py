"""Boundary controllers and the tip-node update rules they induce.

Controllers act only at the last node. Every rule is explicit: control terms
are evaluated from levels j-1 and j-2, with backward differences standing in
for rates. The tip payload models carry their own dynamics, so "no control"
is still a nontrivial update there; the heat rod's far end is simply held and
the flexible beam's tip follows its configured free/pinned rule.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mesh import Mesh
from .models import (
    DisturbanceKind,
    DisturbanceSpec,
    EBBeamParams,
    FieldHistory,
    ModelKind,
    ModelSpec,
    StringParams,
    TimoshenkoParams,
    eval_disturbance,
    string_tension,
)

# Least upper bound of the string tip disturbance waveform
# 1 + 0.2 sin + 0.3 sin + 0.5 sin: 1 + 0.2 + 0.3 + 0.5.
DEFAULT_DISTURBANCE_BOUND = 2.0


class ControlKind(enum.Enum):
    NONE = "none"
    PD = "pd"
    EXACT_MODEL = "exact_model"


@dataclass(frozen=True)
class PDGains:
    """Tip force/torque gains: k1, k3 proportional; k2, k4 derivative."""

    k1: float = 100.0
    k2: float = 10.0
    k3: float = 100.0
    k4: float = 10.0

    def issues(self) -> list[tuple[str, str]]:
        return [
            (name, f"must be >= 0, got {getattr(self, name)!r}")
            for name in ("k1", "k2", "k3", "k4")
            if getattr(self, name) < 0
        ]

    def validate(self) -> None:
        found = self.issues()
        if found:
            raise ValueError("; ".join(f"{n}: {m}" for n, m in found))


@dataclass(frozen=True)
class EMGains:
    """Exact-model law gains: k1 on tip velocity, k2 on tip gradient."""

    k1: float = 10.0
    k2: float = 10.0

    def issues(self) -> list[tuple[str, str]]:
        return [
            (name, f"must be >= 0, got {getattr(self, name)!r}")
            for name in ("k1", "k2")
            if getattr(self, name) < 0
        ]

    def validate(self) -> None:
        found = self.issues()
        if found:
            raise ValueError("; ".join(f"{n}: {m}" for n, m in found))


@dataclass(frozen=True)
class ControllerSpec:
    kind: ControlKind = ControlKind.NONE
    pd_gains: Optional[PDGains] = None
    em_gains: Optional[EMGains] = None
    disturbance_bound: float = DEFAULT_DISTURBANCE_BOUND

    def issues(self) -> list[tuple[str, str]]:
        found = []
        if self.kind is ControlKind.PD:
            if self.pd_gains is None:
                found.append(("pd_gains", "pd controller requires pd_gains"))
            else:
                found.extend(
                    (f"pd_gains.{name}", msg) for name, msg in self.pd_gains.issues()
                )
        if self.kind is ControlKind.EXACT_MODEL:
            if self.em_gains is None:
                found.append(("em_gains", "exact_model controller requires em_gains"))
            else:
                found.extend(
                    (f"em_gains.{name}", msg) for name, msg in self.em_gains.issues()
                )
        if self.disturbance_bound < 0:
            found.append(
                ("disturbance_bound", f"must be >= 0, got {self.disturbance_bound!r}")
            )
        return found

    def validate(self) -> None:
        found = self.issues()
        if found:
            raise ValueError("; ".join(f"{n}: {m}" for n, m in found))

    def compatible_models(self) -> set[ModelKind]:
        if self.kind is ControlKind.PD:
            return {ModelKind.TIMOSHENKO}
        if self.kind is ControlKind.EXACT_MODEL:
            return {ModelKind.STRING}
        return set(ModelKind)


# ---------------------------------------------------------------------------
# tip updates


def _tip_disturbance(
    disturbance: Optional[DisturbanceSpec], model_kind: ModelKind, x_tip: float, t: float, length: float
):
    if disturbance is None or not disturbance.enabled:
        return (0.0, 0.0) if model_kind is ModelKind.TIMOSHENKO else 0.0
    return eval_disturbance(disturbance, x_tip, t, length)


def _timoshenko_tip_base(
    params: TimoshenkoParams,
    mesh: Mesh,
    disturbance: Optional[DisturbanceSpec],
    history: FieldHistory,
    j: int,
) -> tuple[float, float]:
    """Uncontrolled payload dynamics at the tip node:

    M w_tt = K*(phi - w_x) + d      (payload feels minus the shear)
    J phi_tt = -EI*phi_x + theta    (payload feels minus the moment)

    discretized with the three-level time stencil and backward space
    differences, forcing sampled at level j-1.
    """
    h, k = mesh.h, mesh.k
    n = mesh.n_space
    w1, w2 = history.w[j - 1], history.w[j - 2]
    p1, p2 = history.phi[j - 1], history.phi[j - 2]
    m, inertia = params.payload_mass, params.payload_inertia
    d, theta = _tip_disturbance(
        disturbance, ModelKind.TIMOSHENKO, mesh.node_position(n), mesh.time(j - 1), mesh.config.length
    )
    new_w = (
        2.0 * w1[n]
        - w2[n]
        + (k**2 * params.shear_k / m) * p1[n]
        - (k**2 * params.shear_k / (m * h)) * (w1[n] - w1[n - 1])
        + (k**2 / m) * d
    )
    new_p = (
        2.0 * p1[n]
        - p2[n]
        - (k**2 * params.ei / (inertia * h)) * (p1[n] - p1[n - 1])
        + (k**2 / inertia) * theta
    )
    return new_w, new_p


def _eb_beam_tip(
    params: EBBeamParams,
    mesh: Mesh,
    disturbance: Optional[DisturbanceSpec],
    history: FieldHistory,
    j: int,
) -> None:
    n = mesh.n_space
    if params.boundary == "pinned":
        history.w[j, n] = 0.0
        return
    # Free tip: zero moment and zero shear eliminate the ghost nodes, leaving
    # a fourth difference of 2w(N) - 4w(N-1) + 2w(N-2); the tension term
    # drops because the zero-moment ghost zeroes the curvature at the tip.
    h, k = mesh.h, mesh.k
    w1, w2 = history.w[j - 1], history.w[j - 2]
    d4 = 2.0 * w1[n] - 4.0 * w1[n - 1] + 2.0 * w1[n - 2]
    new = (
        2.0 * w1[n]
        - w2[n]
        - (k**2 * params.ei / (params.rho * h**4)) * d4
        - (k * params.damping / params.rho) * (w1[n] - w2[n])
    )
    if disturbance is not None and disturbance.enabled:
        new = new + (k**2 / params.rho) * eval_disturbance(
            disturbance, mesh.node_position(n), mesh.time(j - 1), mesh.config.length
        )
    history.w[j, n] = new


def _string_tip_base(
    params: StringParams,
    mesh: Mesh,
    disturbance: Optional[DisturbanceSpec],
    history: FieldHistory,
    j: int,
) -> tuple[float, float]:
    """Uncontrolled string tip: M w_tt = -T(L)*w_x - lambda(L)*w_x^3 + d.
    Returns (new tip value, level j-1 backward gradient)."""
    h, k = mesh.h, mesh.k
    n = mesh.n_space
    length = mesh.config.length
    w1, w2 = history.w[j - 1], history.w[j - 2]
    m = params.payload_mass
    g = (w1[n] - w1[n - 1]) / h
    tension = string_tension(params, length, g)
    d = _tip_disturbance(disturbance, ModelKind.STRING, length, mesh.time(j - 1), length)
    new = (
        2.0 * w1[n]
        - w2[n]
        + (k**2 / m) * (-tension * g - params.lam(length) * g**3 + d)
    )
    return new, g


def tip_update_no_control(
    model: ModelSpec,
    mesh: Mesh,
    disturbance: Optional[DisturbanceSpec],
    history: FieldHistory,
    j: int,
) -> None:
    """Write the tip node(s) of level j with zero control effort."""
    if model.kind is ModelKind.HEAT:
        return  # both ends are held by the fixed-end rule
    if model.kind is ModelKind.EB_BEAM:
        _eb_beam_tip(model.params, mesh, disturbance, history, j)
        return
    if model.kind is ModelKind.TIMOSHENKO:
        new_w, new_p = _timoshenko_tip_base(model.params, mesh, disturbance, history, j)
        history.w[j, -1] = new_w
        history.phi[j, -1] = new_p
        return
    new, _ = _string_tip_base(model.params, mesh, disturbance, history, j)
    history.w[j, -1] = new


def tip_update_pd(
    params: TimoshenkoParams,
    gains: PDGains,
    mesh: Mesh,
    disturbance: Optional[DisturbanceSpec],
    history: FieldHistory,
    j: int,
) -> None:
    """Tip update under u = -k1*w - k2*w_t, tau = -k3*phi - k4*phi_t.

    Rates use backward differences, so the control contribution per step is
    -(k^2 k1/M) w - (k k2/M) (w - w_old) for the force and the k3/k4
    analogue for the torque. Zero gains reduce exactly to the uncontrolled
    update.
    """
    k = mesh.k
    n = mesh.n_space
    w1, w2 = history.w[j - 1], history.w[j - 2]
    p1, p2 = history.phi[j - 1], history.phi[j - 2]
    m, inertia = params.payload_mass, params.payload_inertia
    base_w, base_p = _timoshenko_tip_base(params, mesh, disturbance, history, j)
    history.w[j, n] = (
        base_w
        - (k**2 * gains.k1 / m) * w1[n]
        - (k * gains.k2 / m) * (w1[n] - w2[n])
    )
    history.phi[j, n] = (
        base_p
        - (k**2 * gains.k3 / inertia) * p1[n]
        - (k * gains.k4 / inertia) * (p1[n] - p2[n])
    )


def tip_update_exact_model(
    params: StringParams,
    gains: EMGains,
    disturbance_bound: float,
    mesh: Mesh,
    disturbance: Optional[DisturbanceSpec],
    history: FieldHistory,
    j: int,
) -> None:
    """Tip update under the exact-model law

    u = T0(L)*w_x - M*w_xt - k1*w_t - k2*w_x - sgn(w_t + w_x)*dbar

    evaluated from level j-1 data: backward differences for w_x and w_t, the
    backward-time difference of the backward-space difference for w_xt, and
    sgn(0) = 0 so no effort is injected at exact rest. The robust term
    contributes at most (k^2/M)*dbar per step.
    """
    h, k = mesh.h, mesh.k
    n = mesh.n_space
    w1, w2 = history.w[j - 1], history.w[j - 2]
    m = params.payload_mass
    base, g1 = _string_tip_base(params, mesh, disturbance, history, j)
    g2 = (w2[n] - w2[n - 1]) / h
    wt = (w1[n] - w2[n]) / k
    wxt = (g1 - g2) / k
    u = (
        params.base_tension(mesh.config.length) * g1
        - m * wxt
        - gains.k1 * wt
        - gains.k2 * g1
        - float(np.sign(wt + g1)) * disturbance_bound
    )
    history.w[j, n] = base + (k**2 / m) * u
