"""Multi-index enumeration and the lattice geometry of the shift rule.

A multi-index alpha = (a_1, ..., a_m) addresses the mixed partial derivative
d^|alpha| f / d theta_1^{a_1} ... d theta_m^{a_m}.  The arbitrary-order shift
rule evaluates f on points whose coordinates are integer multiples of pi/2:
each unit of order contributes a +1 or -1 to its coordinate's multiple, and
the multiple is reduced mod 4.  Sign assignments are enumerated by binary
counting so that sums over them are performed in a fixed order.
"""

from __future__ import annotations

import itertools
import math

from .errors import ValidationError
from .grid import GridPoint

MultiIndex = tuple[int, ...]


def _validated(alpha) -> MultiIndex:
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) == 0:
        raise ValidationError("multi-index must have at least one coordinate")
    if any(a < 0 for a in alpha):
        raise ValidationError(f"multi-index entries must be >= 0, got {alpha}")
    return alpha


def index_order(alpha) -> int:
    """|alpha|: the total derivative order."""
    return sum(_validated(alpha))


def index_factorial(alpha) -> int:
    """alpha! = product of coordinate factorials, exact integer."""
    out = 1
    for a in _validated(alpha):
        out *= math.factorial(a)
    return out


def _compositions(total: int, parts: int):
    """All ways to write `total` as `parts` ordered non-negative summands,
    first coordinate largest first (graded-lexicographic within one grade)."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def enumerate_multiindices(m: int, max_order: int) -> list[MultiIndex]:
    """All alpha with |alpha| <= max_order, graded lexicographic.

    Grades ascend; within a grade, indices with more weight on earlier
    coordinates come first.  The list has C(m + max_order, max_order) entries.
    """
    if m < 1:
        raise ValidationError(f"need m >= 1, got {m}")
    if max_order < 0:
        raise ValidationError(f"need max_order >= 0, got {max_order}")
    out: list[MultiIndex] = []
    for k in range(max_order + 1):
        out.extend(_compositions(k, m))
    return out


def sign_product(signs) -> int:
    """Product of a tuple over {-1, +1}; the empty product is +1."""
    out = 1
    for s in signs:
        if s not in (-1, 1):
            raise ValidationError(f"signs must be -1 or +1, got {s}")
        out *= s
    return out


def shift_assignments(alpha):
    """All sign tuples in {-1, +1}^|alpha| for the shift-rule sum.

    Enumerated by binary counting: assignment index c maps bit b (LSB first)
    to -1 when the bit is 0 and +1 when it is 1.  Position b belongs to the
    coordinate groups of alpha laid out left to right.
    """
    k = index_order(alpha)
    for counter in range(2 ** k):
        yield tuple(1 if (counter >> b) & 1 else -1 for b in range(k))


def shift_point(alpha, signs) -> GridPoint:
    """The lattice point whose coordinate multiples are the per-coordinate
    sums of `signs`, grouped by alpha and reduced mod 4.

    An empty per-coordinate group sums to 0, so coordinates outside the
    support of alpha sit at angle 0.
    """
    alpha = _validated(alpha)
    signs = tuple(signs)
    if len(signs) != sum(alpha):
        raise ValidationError(
            f"expected {sum(alpha)} signs for alpha={alpha}, got {len(signs)}"
        )
    multiples = []
    pos = 0
    for a in alpha:
        multiples.append(sum(signs[pos:pos + a]))
        pos += a
    return GridPoint.from_multiples(multiples)


def count_multiindices(m: int, max_order: int) -> int:
    """C(m + max_order, max_order), the size of enumerate_multiindices."""
    return math.comb(m + max_order, max_order)


def distinct_shift_points(m: int, max_order: int) -> set[GridPoint]:
    """Every lattice point the shift rule can touch up to the given order."""
    points: set[GridPoint] = set()
    for alpha in enumerate_multiindices(m, max_order):
        for signs in shift_assignments(alpha):
            points.add(shift_point(alpha, signs))
    return points
