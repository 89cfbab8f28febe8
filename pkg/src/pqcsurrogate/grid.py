"""Points of the (pi/2)-lattice, stored as exact integer residues mod 4.

Every angle that the shift rule or the interpolation node set ever touches is
an integer multiple of pi/2 in each coordinate.  Keeping the multiple (reduced
to the residue system {0, 1, 2, 3}) instead of a float makes grid points exact
dictionary keys: two ways of arriving at the same lattice point always collide.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

HALF_PI = np.pi / 2.0

# Residue -> angle, kept here so every module converts identically.
_RESIDUE_ANGLES = (0.0, HALF_PI, 2 * HALF_PI, 3 * HALF_PI)


@dataclass(frozen=True)
class GridPoint:
    """A lattice point (pi/2)*(r_1, ..., r_m) with residues r_j in {0,1,2,3}."""

    residues: tuple[int, ...]

    def __post_init__(self) -> None:
        for r in self.residues:
            if not isinstance(r, int) or not 0 <= r <= 3:
                raise ValidationError(
                    f"grid point residues must be integers in 0..3, got {self.residues!r}"
                )

    @classmethod
    def from_multiples(cls, multiples) -> "GridPoint":
        """Build a point from raw integer multiples of pi/2 (Euclidean mod 4)."""
        return cls(tuple(int(k) % 4 for k in multiples))

    @property
    def m(self) -> int:
        return len(self.residues)

    def angles(self) -> np.ndarray:
        """The point as a float angle vector, entries in {0, pi/2, pi, 3pi/2}."""
        return np.array([_RESIDUE_ANGLES[r] for r in self.residues], dtype=float)

    def __str__(self) -> str:
        return "(" + ", ".join(str(r) for r in self.residues) + ")*pi/2"
