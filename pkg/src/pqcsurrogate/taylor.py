"""Taylor surrogates from exact shift-rule derivatives at the origin.

Every mixed partial of f at theta = 0 is a finite signed average of f values
on the (pi/2)-lattice, so a degree-L Taylor model needs only lattice queries.
Distinct multi-indices reuse many of the same lattice points, which is why the
builder routes all queries through one shared evaluation cache.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ValidationError
from .grid import GridPoint
from .multiindex import (
    MultiIndex,
    enumerate_multiindices,
    index_factorial,
    index_order,
    shift_assignments,
    shift_point,
    sign_product,
)

#: Orders above this would push exact integer factorials past float reliability.
MAX_ORDER = 20


def partial_at_zero(oracle: Callable[[GridPoint], float], alpha) -> float:
    """D^alpha f(0) via the arbitrary-order shift rule.

    `oracle` maps a lattice point to f's value there.  The result is
    2^{-|alpha|} times the signed sum of f over all sign assignments; for
    alpha = 0 this degenerates to f(0) itself.
    """
    k = index_order(alpha)
    total = 0.0
    for signs in shift_assignments(alpha):
        total += sign_product(signs) * oracle(shift_point(alpha, signs))
    return total / (2 ** k)


@dataclass(frozen=True)
class TaylorSurrogate:
    """Polynomial model sum_alpha coeffs[alpha] * theta^alpha of degree <= order.

    `coeffs` preserves graded-lexicographic enumeration order; evaluation sums
    terms in exactly that order.
    """

    m: int
    order: int
    coeffs: dict[MultiIndex, float]
    obs_one_norm: float

    def __call__(self, theta) -> float:
        return eval_taylor(self, theta)

    def eval_many(self, thetas) -> np.ndarray:
        """Vectorized evaluation over rows of `thetas`, same term order."""
        thetas = np.asarray(thetas, dtype=float)
        if thetas.ndim != 2 or thetas.shape[1] != self.m:
            raise ValidationError(
                f"expected rows of length {self.m}, got shape {thetas.shape}"
            )
        out = np.zeros(thetas.shape[0])
        for alpha, coeff in self.coeffs.items():
            term = np.full(thetas.shape[0], coeff)
            for j, a in enumerate(alpha):
                if a:
                    term *= thetas[:, j] ** a
            out += term
        return out


def build_taylor(oracle, order: int, *, workers: int = 1) -> TaylorSurrogate:
    """Degree-`order` Taylor surrogate of the oracle's function at theta = 0.

    `oracle` is a GridOracle (or any callable on lattice points exposing .m and
    .one_norm()).  All shift-rule queries share the oracle's cache, so repeated
    lattice points are evaluated once.
    """
    if not 0 <= order <= MAX_ORDER:
        raise ValidationError(f"order must be in 0..{MAX_ORDER}, got {order}")
    m = oracle.m
    alphas = enumerate_multiindices(m, order)
    if workers > 1 and hasattr(oracle, "prefetch"):
        points = (shift_point(a, s) for a in alphas for s in shift_assignments(a))
        oracle.prefetch(points, workers=workers)
    coeffs: dict[MultiIndex, float] = {}
    for alpha in alphas:
        coeffs[alpha] = partial_at_zero(oracle, alpha) / index_factorial(alpha)
    return TaylorSurrogate(
        m=m, order=order, coeffs=coeffs, obs_one_norm=float(oracle.one_norm())
    )


def eval_taylor(surrogate: TaylorSurrogate, theta) -> float:
    """Direct term-by-term sum in enumeration order (no Horner regrouping)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (surrogate.m,):
        raise ValidationError(
            f"theta must have shape ({surrogate.m},), got {theta.shape}"
        )
    total = 0.0
    for alpha, coeff in surrogate.coeffs.items():
        term = coeff
        for j, a in enumerate(alpha):
            if a:
                term *= theta[j] ** a
        total += term
    return float(total)


def taylor_error_bound(one_norm: float, order: int, theta) -> float:
    """Upper bound on |f - surrogate| at theta for any f with the given
    observable 1-norm.

    The universal form is one_norm * (exp(t) - sum_{k<=order} t^k/k!) with
    t = ||theta||_1, computed as the convergent tail series to avoid
    cancellation.  When t <= 1 + order/2 the alternating-remainder form
    2 * one_norm * t^{order+1}/(order+1)! also applies and the tighter of the
    two is returned.
    """
    if one_norm < 0:
        raise ValidationError(f"one_norm must be >= 0, got {one_norm}")
    if not 0 <= order <= MAX_ORDER:
        raise ValidationError(f"order must be in 0..{MAX_ORDER}, got {order}")
    t = float(np.sum(np.abs(np.asarray(theta, dtype=float))))
    term = t ** (order + 1) / math.factorial(order + 1)
    tail = 0.0
    k = order + 1
    while term > 0.0 and tail + term != tail:
        tail += term
        k += 1
        term *= t / k
    generic = one_norm * tail
    if t <= 1 + order / 2:
        sharpened = 2.0 * one_norm * t ** (order + 1) / math.factorial(order + 1)
        return min(generic, sharpened)
    return generic


def taylor_sample_bound(m: int, order: int) -> int:
    """floor(4^order * m^order / order!), the lattice-query guarantee for
    building a degree-`order` surrogate when order <= m (exact integers)."""
    if m < 1 or order < 0:
        raise ValidationError(f"need m >= 1 and order >= 0, got m={m}, order={order}")
    return (4 ** order * m ** order) // math.factorial(order)
