"""A-priori stability predicates for the explicit schemes and a runtime
divergence monitor usable by any simulation."""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

DEFAULT_DIVERGENCE_THRESHOLD = 1e6  # dimensionless displacement units

HEAT_CRITERION = "heat_explicit_ratio"
BEAM_CRITERION = "beam_explicit_combined"
ADVISORY_CRITERION = "advisory_wave_speed"


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of a closed-form (or advisory) stability check."""

    criterion_name: str
    lhs_value: float
    threshold: float
    predicted_stable: bool
    margin: float
    advisory: bool = False


class DivergenceReason(enum.Enum):
    NONE = "none"
    THRESHOLD_EXCEEDED = "threshold_exceeded"
    NON_FINITE_VALUE = "non_finite_value"


@dataclass(frozen=True)
class DivergenceVerdict:
    """Running runtime-divergence state for one simulation."""

    diverged: bool = False
    first_bad_step: Optional[int] = None
    peak_magnitude: float = 0.0
    reason: DivergenceReason = DivergenceReason.NONE

    @classmethod
    def clean(cls) -> "DivergenceVerdict":
        return cls()


def heat_stability(alpha: float, h: float, k: float) -> StabilityReport:
    """Explicit heat scheme check: r = alpha*k/h^2 must stay strictly
    below 1/2."""
    for name, val in (("alpha", alpha), ("h", h), ("k", k)):
        if not (val > 0):
            raise ValueError(f"{name} must be > 0, got {val!r}")
    r = alpha * k / h**2
    return StabilityReport(
        criterion_name=HEAT_CRITERION,
        lhs_value=r,
        threshold=0.5,
        predicted_stable=r < 0.5,
        margin=0.5 - r,
    )


def beam_stability(ei: float, rho: float, tension: float, h: float, k: float) -> StabilityReport:
    """Explicit tensioned-beam scheme check:
    4*k^2*EI/(rho*h^4) + k^2*T/(rho*h^2) must not exceed 1."""
    for name, val in (("rho", rho), ("h", h), ("k", k)):
        if not (val > 0):
            raise ValueError(f"{name} must be > 0, got {val!r}")
    for name, val in (("ei", ei), ("tension", tension)):
        if val < 0:
            raise ValueError(f"{name} must be >= 0, got {val!r}")
    lhs = 4 * k**2 * ei / (rho * h**4) + k**2 * tension / (rho * h**2)
    return StabilityReport(
        criterion_name=BEAM_CRITERION,
        lhs_value=lhs,
        threshold=1.0,
        predicted_stable=lhs <= 1.0,
        margin=1.0 - lhs,
    )


def wave_speed_heuristic(max_wave_speed: float, h: float, k: float) -> StabilityReport:
    """Advisory check k*c_max <= h for models without a closed-form
    criterion (shear/rotation or tension wave speeds). Labeled advisory:
    it is a plausibility screen, not a proof either way."""
    for name, val in (("max_wave_speed", max_wave_speed), ("h", h), ("k", k)):
        if not (val > 0):
            raise ValueError(f"{name} must be > 0, got {val!r}")
    lhs = k * max_wave_speed
    return StabilityReport(
        criterion_name=ADVISORY_CRITERION,
        lhs_value=lhs,
        threshold=h,
        predicted_stable=lhs <= h,
        margin=h - lhs,
        advisory=True,
    )


def monitor_step(
    field_slice: np.ndarray,
    threshold: float,
    step_index: int,
    verdict: DivergenceVerdict,
) -> DivergenceVerdict:
    """Fold one freshly computed grid row into the running verdict.

    Non-finite entries are flagged before magnitude checks. Once diverged the
    verdict is a fixed point: further calls return it unchanged.
    """
    if verdict.diverged:
        return verdict
    values = np.asarray(field_slice, dtype=float)
    finite = np.isfinite(values)
    if finite.any():
        peak = max(verdict.peak_magnitude, float(np.max(np.abs(values[finite]))))
    else:
        peak = verdict.peak_magnitude
    if not finite.all():
        return DivergenceVerdict(
            diverged=True,
            first_bad_step=step_index,
            peak_magnitude=peak,
            reason=DivergenceReason.NON_FINITE_VALUE,
        )
    if peak > threshold:
        return DivergenceVerdict(
            diverged=True,
            first_bad_step=step_index,
            peak_magnitude=peak,
            reason=DivergenceReason.THRESHOLD_EXCEEDED,
        )
    return replace(verdict, peak_magnitude=peak)
