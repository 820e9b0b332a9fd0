"""Cartesian grid, boundary kinds, and the per-field reflection parities.

The GEM quarter domain is [0, Lx/2] x [0, Ly/2]: mirror symmetry planes at
x = 0, x = Lx/2 (periodicity plus even symmetry), and y = 0, with the
conducting wall at y = Ly/2.  The full domain uses periodic x and walls on
both y boundaries.

Ghost states at mirror/wall boundaries are the interior trace with a
per-field sign flip.  The signs follow from the tensor character of each
field: velocities are vectors, B is a pseudovector, E a vector, psi a
pseudoscalar, and phi a scalar.  At a conducting wall the roles of the
tangential/normal EM components swap relative to a mirror plane so that
E_parallel = 0 and B.n = 0 hold weakly; psi is reflected oddly so cleaning
waves bounce without injecting divergence error, phi evenly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .model import NFIELD


class BCKind(Enum):
    PERIODIC = 0
    SYMMETRY = 1
    WALL = 2


def _signs(odd_indices) -> np.ndarray:
    s = np.ones(NFIELD)
    s[list(odd_indices)] = -1.0
    return s


# odd fields under reflection across a vertical plane (x = const):
#   u_x, B2, B3, E1, psi
SIGN_SYMMETRY_X = _signs([1, 6, 11, 12, 13, 16])
# odd fields under reflection across a horizontal plane (y = const):
#   u_y, B1, B3, E2, psi
SIGN_SYMMETRY_Y = _signs([2, 7, 10, 12, 14, 16])
# conducting wall normal to y: slip fluid (u_y odd), tangential E odd,
# normal B odd, psi odd
SIGN_WALL_Y = _signs([2, 7, 11, 13, 15, 16])
# conducting wall normal to x (unused by the GEM setup, kept for generality)
SIGN_WALL_X = _signs([1, 6, 10, 14, 15, 16])

SIDE_WEST, SIDE_EAST, SIDE_SOUTH, SIDE_NORTH = 0, 1, 2, 3


def ghost_signs(side: int, kind: BCKind) -> np.ndarray:
    """Sign table mapping an interior boundary trace to its ghost state."""
    if kind == BCKind.PERIODIC:
        return np.ones(NFIELD)
    horizontal = side in (SIDE_WEST, SIDE_EAST)
    if kind == BCKind.SYMMETRY:
        return SIGN_SYMMETRY_X if horizontal else SIGN_SYMMETRY_Y
    return SIGN_WALL_X if horizontal else SIGN_WALL_Y


def ghost_state(interior: np.ndarray, side: int, kind: BCKind) -> np.ndarray:
    """Ghost conserved state for an interior trace at a boundary point.

    The mirror maps the boundary point to itself, so the ghost is simply a
    per-field sign flip of the trace.  Not meaningful for periodic sides
    (the ghost there is the opposite edge's trace).
    """
    if kind == BCKind.PERIODIC:
        raise ValueError("periodic sides take the opposite edge trace, not a ghost")
    return np.asarray(interior) * ghost_signs(side, kind)


@dataclass(frozen=True)
class Grid:
    """Uniform Cartesian cell grid on [x_lo, x_hi] x [y_lo, y_hi]."""

    nx: int
    ny: int
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    dx: float = field(init=False)
    dy: float = field(init=False)

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"need at least one cell per direction, got {self.nx}x{self.ny}")
        if not (self.x_hi > self.x_lo and self.y_hi > self.y_lo):
            raise ValueError("domain extents must be increasing")
        object.__setattr__(self, "dx", (self.x_hi - self.x_lo) / self.nx)
        object.__setattr__(self, "dy", (self.y_hi - self.y_lo) / self.ny)

    @classmethod
    def quarter_domain(cls, nx: int, ny: int, lx: float = 8 * np.pi, ly: float = 4 * np.pi) -> "Grid":
        return cls(nx, ny, 0.0, lx / 2, 0.0, ly / 2)

    @classmethod
    def full_domain(cls, nx: int, ny: int, lx: float = 8 * np.pi, ly: float = 4 * np.pi) -> "Grid":
        return cls(nx, ny, -lx / 2, lx / 2, -ly / 2, ly / 2)

    def cell_center(self, i, j):
        return (self.x_lo + (np.asarray(i) + 0.5) * self.dx,
                self.y_lo + (np.asarray(j) + 0.5) * self.dy)

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        """Containing cell, lowest index winning on shared boundaries."""
        if not (self.x_lo <= x <= self.x_hi and self.y_lo <= y <= self.y_hi):
            raise ValueError(f"point ({x}, {y}) outside domain closure")
        ix = int(np.ceil((x - self.x_lo) / self.dx)) - 1
        iy = int(np.ceil((y - self.y_lo) / self.dy)) - 1
        return min(max(ix, 0), self.nx - 1), min(max(iy, 0), self.ny - 1)


@dataclass(frozen=True)
class BoundarySpec:
    """Boundary kinds on the four sides (west, east, south, north)."""

    west: BCKind = BCKind.SYMMETRY
    east: BCKind = BCKind.SYMMETRY
    south: BCKind = BCKind.SYMMETRY
    north: BCKind = BCKind.WALL

    def __post_init__(self):
        if (self.west == BCKind.PERIODIC) != (self.east == BCKind.PERIODIC):
            raise ValueError("periodic x requires both west and east periodic")
        if (self.south == BCKind.PERIODIC) != (self.north == BCKind.PERIODIC):
            raise ValueError("periodic y requires both south and north periodic")

    @classmethod
    def gem_quarter(cls) -> "BoundarySpec":
        return cls(BCKind.SYMMETRY, BCKind.SYMMETRY, BCKind.SYMMETRY, BCKind.WALL)

    @classmethod
    def gem_full(cls) -> "BoundarySpec":
        return cls(BCKind.PERIODIC, BCKind.PERIODIC, BCKind.WALL, BCKind.WALL)

    @classmethod
    def doubly_periodic(cls) -> "BoundarySpec":
        return cls(BCKind.PERIODIC, BCKind.PERIODIC, BCKind.PERIODIC, BCKind.PERIODIC)

    @property
    def sides(self) -> tuple[BCKind, BCKind, BCKind, BCKind]:
        return (self.west, self.east, self.south, self.north)
