"""Finite-difference approximation formulas as pure operators on grid slices.

Each kind is a fixed integer-coefficient rule divided by a power of the step.
Values are passed in increasing index order (left to right, or earlier to
later). Evaluation composes plain differences instead of a dot product so
that constant slices annihilate exactly in floating point.
"""
from __future__ import annotations

import enum
import math
from typing import Callable, Sequence


class StencilKind(enum.Enum):
    # name -> (axis, coefficients over the window, step power, divisor scale,
    # order); the axis tag keeps time/space kinds distinct enum members even
    # though the first/second formulas share coefficients
    FIRST_TIME = ("time", (-1, 1), 1, 1, 1)        # forward difference
    SECOND_TIME = ("time", (1, -2, 1), 2, 1, 2)    # central second difference
    FIRST_SPACE = ("space", (-1, 1), 1, 1, 1)      # two-point difference; window
    #                                                placement decides fwd vs bwd
    SECOND_SPACE = ("space", (1, -2, 1), 2, 1, 2)  # central second difference
    THIRD_SPACE = ("space", (-1, 2, 0, -2, 1), 3, 2, 2)   # central five-point
    FOURTH_SPACE = ("space", (1, -4, 6, -4, 1), 4, 1, 2)  # central five-point

    def __init__(self, axis, coefficients, power, scale, order):
        self.axis = axis
        self.coefficients = coefficients
        self.power = power
        self.scale = scale
        # Observed convergence order on smooth data. The five-point third
        # derivative is genuinely second order even though its truncation
        # term is often quoted one order higher.
        self.order = order

    @property
    def width(self) -> int:
        return len(self.coefficients)


def apply_stencil(kind: StencilKind, values: Sequence[float], step: float) -> float:
    """Evaluate one stencil on a window of samples.

    values must have exactly kind.width entries, ordered by increasing index;
    step is the (positive) grid spacing the window was sampled on.
    """
    if len(values) != kind.width:
        raise ValueError(
            f"{kind.name} needs {kind.width} values, got {len(values)}"
        )
    if not (step > 0):
        raise ValueError(f"step must be > 0, got {step!r}")
    v = [float(x) for x in values]
    if kind in (StencilKind.FIRST_TIME, StencilKind.FIRST_SPACE):
        num = v[1] - v[0]
    elif kind in (StencilKind.SECOND_TIME, StencilKind.SECOND_SPACE):
        num = (v[2] - v[1]) - (v[1] - v[0])
    elif kind is StencilKind.THIRD_SPACE:
        # second difference of the three centered two-wide gaps
        c0, c1, c2 = v[2] - v[0], v[3] - v[1], v[4] - v[2]
        num = (c2 - c1) - (c1 - c0)
    else:  # FOURTH_SPACE: fourth repeated difference
        d = v
        for _ in range(4):
            d = [b - a for a, b in zip(d, d[1:])]
        num = d[0]
    return num / (kind.scale * step**kind.power)


def _window(kind: StencilKind, f: Callable[[float], float], point: float, step: float) -> list[float]:
    """Sample f on the window the stencil expects around point."""
    if kind.width == 2:
        offsets = (0, 1)
    elif kind.width == 3:
        offsets = (-1, 0, 1)
    else:
        offsets = (-2, -1, 0, 1, 2)
    return [f(point + o * step) for o in offsets]


def evaluate_at(kind: StencilKind, f: Callable[[float], float], point: float, step: float) -> float:
    """Apply the stencil to samples of f around point with spacing step."""
    return apply_stencil(kind, _window(kind, f, point, step), step)


def empirical_order(
    kind: StencilKind,
    test_function: Callable[[float], float],
    point: float,
    base_step: float = 0.1,
) -> float:
    """Estimate the convergence order by the Richardson ratio
    log2 of successive approximation differences at steps s, s/2, s/4.

    Returns NaN when the differences underflow to zero (the stencil is exact
    on the sampled function, so there is no error to measure).
    """
    d_coarse = evaluate_at(kind, test_function, point, base_step) - evaluate_at(
        kind, test_function, point, base_step / 2
    )
    d_fine = evaluate_at(kind, test_function, point, base_step / 2) - evaluate_at(
        kind, test_function, point, base_step / 4
    )
    if d_coarse == 0.0 or d_fine == 0.0:
        return math.nan
    return math.log2(abs(d_coarse) / abs(d_fine))
