"""Space/time discretization: grid sizes, physical extents, derived steps."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_SPACE_INTERVALS = 4  # five-point spatial stencils need indices i-2..i+2
MIN_TIME_STEPS = 2       # three-level time recursion needs two seed levels


@dataclass(frozen=True)
class MeshConfig:
    """Grid configuration: n_space intervals over length metres,
    n_time steps over final_time seconds."""

    n_space: int
    n_time: int
    length: float
    final_time: float

    def issues(self) -> list[tuple[str, str]]:
        found = []
        if int(self.n_space) != self.n_space or self.n_space < MIN_SPACE_INTERVALS:
            found.append(
                ("n_space", f"must be an integer >= {MIN_SPACE_INTERVALS}, got {self.n_space!r}")
            )
        if int(self.n_time) != self.n_time or self.n_time < MIN_TIME_STEPS:
            found.append(
                ("n_time", f"must be an integer >= {MIN_TIME_STEPS}, got {self.n_time!r}")
            )
        if not (self.length > 0):
            found.append(("length", f"must be > 0, got {self.length!r}"))
        if not (self.final_time > 0):
            found.append(("final_time", f"must be > 0, got {self.final_time!r}"))
        return found

    def validate(self) -> None:
        found = self.issues()
        if found:
            raise ValueError("; ".join(f"{name}: {msg}" for name, msg in found))


@dataclass(frozen=True)
class Mesh:
    """Validated grid with derived spacings h = length/n_space and
    k = final_time/n_time. Immutable; safe to share between runs."""

    config: MeshConfig
    h: float
    k: float

    @property
    def n_space(self) -> int:
        return self.config.n_space

    @property
    def n_time(self) -> int:
        return self.config.n_time

    def node_position(self, i: int) -> float:
        """Physical coordinate x_i = i*h of node i in [0, n_space]."""
        if i < 0 or i > self.config.n_space:
            raise IndexError(f"node index {i} outside [0, {self.config.n_space}]")
        return i * self.h

    def node_positions(self) -> np.ndarray:
        """All node coordinates as an array of shape (n_space + 1,)."""
        return np.arange(self.config.n_space + 1) * self.h

    def time(self, j: int) -> float:
        """Physical time t_j = j*k of time level j in [0, n_time]."""
        if j < 0 or j > self.config.n_time:
            raise IndexError(f"time index {j} outside [0, {self.config.n_time}]")
        return j * self.k


def build_mesh(config: MeshConfig) -> Mesh:
    """Validate the configuration and derive the grid spacings."""
    config.validate()
    return Mesh(
        config=config,
        h=config.length / config.n_space,
        k=config.final_time / config.n_time,
    )
