"""Kernel interpolation surrogates on the (pi/2)-lattice.

Circuit expectation functions live in the span H of Fourier terms with
per-coordinate frequencies in {-1, 0, 1}.  H carries a product reproducing
kernel; in its rescaled form

    K~(x, z) = prod_j (1 + 2 cos(x_j - z_j)) / 3,

K~(x, x) = 1, which keeps Gram matrices well scaled at any dimension.  The
surrogate interpolates f on all lattice nodes with at most L nonzero
coordinates and is simultaneously the H-orthogonal projection of f onto the
span of the node kernels, hence the minimum-norm interpolant.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import ConditioningWarning, NumericError, SizeError, ValidationError
from .grid import GridPoint

#: Cholesky pivots below this fraction of the largest Gram diagonal trigger
#: the fallback solve path.
PIVOT_REL_TOL = 1e-12

#: Interpolation residual gate: ||G eta - y||_inf <= RESIDUAL_TOL * max(1, ||y||_inf).
RESIDUAL_TOL = 1e-8

#: Brute-force reconstruction enumerates 4^m lattice points; keep m tiny.
RECONSTRUCT_MAX_M = 3

#: Brute-force inner products are test oracles; 4^m evaluations per product.
SPACE_MAX_M = 4


def _as_angle_vector(x, m: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValidationError(f"expected a flat angle vector, got shape {x.shape}")
    if m is not None and x.shape[0] != m:
        raise ValidationError(f"expected {m} coordinates, got {x.shape[0]}")
    return x


def unscaled_factor(m: int) -> float:
    """K = (3/(2 pi))^m * K~ ; this is that factor."""
    return float((3.0 / (2.0 * np.pi)) ** m)


def kernel_scaled(x, z) -> float:
    """K~(x, z) = prod_j (1 + 2 cos(x_j - z_j)) / 3, with K~(x, x) = 1."""
    x = _as_angle_vector(x)
    z = _as_angle_vector(z, x.shape[0])
    return float(np.prod((1.0 + 2.0 * np.cos(x - z)) / 3.0))


def kernel_unscaled(x, z) -> float:
    """The reproducing kernel of H itself: (3/(2 pi))^m * K~(x, z)."""
    x = _as_angle_vector(x)
    return unscaled_factor(x.shape[0]) * kernel_scaled(x, z)


def grid_nodes(m: int, order: int) -> list[GridPoint]:
    """Interpolation nodes: lattice points with entries in {0, +-pi/2} and at
    most `order` nonzero coordinates.

    Ordered by support size, then support positions lexicographically, then
    sign pattern with -pi/2 before +pi/2.  The count is
    sum_{k<=order} C(m, k) * 2^k.
    """
    if m < 1:
        raise ValidationError(f"need m >= 1, got {m}")
    if not 0 <= order <= m:
        raise ValidationError(f"order must be in 0..m={m}, got {order}")
    zeros = (0,) * m
    nodes = [GridPoint(zeros)]
    for k in range(1, order + 1):
        for support in itertools.combinations(range(m), k):
            for pattern in itertools.product((3, 1), repeat=k):
                residues = list(zeros)
                for pos, res in zip(support, pattern):
                    residues[pos] = res
                nodes.append(GridPoint(tuple(residues)))
    return nodes


def kernel_sample_bound(m: int, order: int) -> int:
    """floor(3^order * m^order / order!), the node-count guarantee for
    order <= m (exact integers)."""
    if m < 1 or order < 0:
        raise ValidationError(f"need m >= 1 and order >= 0, got m={m}, order={order}")
    return (3 ** order * m ** order) // math.factorial(order)


@dataclass(frozen=True)
class KernelSurrogate:
    """f~(theta) = sum_j eta_j K(p_j, theta) over the stored nodes.

    `scaling` records which kernel the weights belong to: "ktilde" for the
    rescaled kernel (the default everywhere) or "k" for the raw one.
    """

    m: int
    order: int
    nodes: tuple[GridPoint, ...]
    eta: np.ndarray
    scaling: str = "ktilde"

    def __call__(self, theta) -> float:
        return eval_kernel_surrogate(self, theta)

    def node_angles(self) -> np.ndarray:
        return np.stack([p.angles() for p in self.nodes])

    def eval_many(self, thetas) -> np.ndarray:
        """Vectorized evaluation over rows of `thetas`."""
        thetas = np.asarray(thetas, dtype=float)
        if thetas.ndim != 2 or thetas.shape[1] != self.m:
            raise ValidationError(
                f"expected rows of length {self.m}, got shape {thetas.shape}"
            )
        angles = self.node_angles()
        kmat = np.ones((thetas.shape[0], len(self.nodes)))
        for j in range(self.m):
            kmat *= (1.0 + 2.0 * np.cos(thetas[:, j, None] - angles[None, :, j])) / 3.0
        if self.scaling == "k":
            kmat *= unscaled_factor(self.m)
        return kmat @ self.eta


def _gram_matrix(angles: np.ndarray) -> np.ndarray:
    """Scaled-kernel Gram matrix; upper triangle computed, then mirrored."""
    count = angles.shape[0]
    gram = np.empty((count, count))
    for i in range(count):
        diff = angles[i] - angles[i:]
        row = np.prod((1.0 + 2.0 * np.cos(diff)) / 3.0, axis=1)
        gram[i, i:] = row
        gram[i:, i] = row
    return gram


def _solve_gram(gram: np.ndarray, values: np.ndarray, allow_dependent: bool) -> np.ndarray:
    """Solve G eta = y, preferring Cholesky, with a gated fallback.

    The Gram matrix is positive definite in exact arithmetic for distinct
    nodes; floating point can be marginal for large node sets, and node sets
    enriched with translated duplicates of the lattice basis are genuinely
    rank-deficient (allow_dependent=True routes those to least squares).
    """
    scale = float(np.max(np.diagonal(gram)))
    min_pivot = None
    try:
        factor = scipy.linalg.cholesky(gram, lower=True, check_finite=False)
        min_pivot = float(np.min(np.diagonal(factor)) ** 2)
        if min_pivot >= PIVOT_REL_TOL * scale:
            return scipy.linalg.cho_solve((factor, True), values, check_finite=False)
    except np.linalg.LinAlgError:
        pass
    if min_pivot is None:
        # Factorization broke down outright; report the spectrum floor instead.
        min_pivot = float(np.min(scipy.linalg.eigvalsh(gram)))
    warnings.warn(
        f"Gram matrix is not safely positive definite (smallest pivot {min_pivot:.3e}); "
        f"using {'least-squares' if allow_dependent else 'symmetric-indefinite'} fallback",
        ConditioningWarning,
        stacklevel=3,
    )
    if allow_dependent:
        eta, *_ = np.linalg.lstsq(gram, values, rcond=None)
        return eta
    try:
        return scipy.linalg.solve(gram, values, assume_a="sym", check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"Gram solve failed (smallest pivot {min_pivot:.3e}): {exc}"
        ) from exc


def interpolate_on_nodes(
    oracle,
    nodes,
    order: int,
    *,
    scaled: bool = True,
    allow_dependent: bool = False,
    workers: int = 1,
) -> KernelSurrogate:
    """Kernel interpolant of the oracle's function on an explicit node list.

    Nodes must be distinct.  After the solve, the interpolation residual
    ||G eta - y||_inf must pass the RESIDUAL_TOL gate or a NumericError is
    raised: weights that do not reproduce the node data are worthless.
    """
    nodes = tuple(nodes)
    if not nodes:
        raise ValidationError("need at least one interpolation node")
    m = oracle.m
    for p in nodes:
        if p.m != m:
            raise ValidationError(f"node {p} has {p.m} coordinates, expected {m}")
    if len(set(nodes)) != len(nodes):
        raise ValidationError("interpolation nodes must be distinct")

    if workers > 1 and hasattr(oracle, "prefetch"):
        oracle.prefetch(nodes, workers=workers)
    values = np.array([oracle(p) for p in nodes], dtype=float)
    angles = np.stack([p.angles() for p in nodes])
    gram = _gram_matrix(angles)
    if not scaled:
        gram = gram * unscaled_factor(m)
    eta = _solve_gram(gram, values, allow_dependent)
    residual = float(np.max(np.abs(gram @ eta - values)))
    tol = RESIDUAL_TOL * max(1.0, float(np.max(np.abs(values))) if len(values) else 1.0)
    if residual > tol:
        raise NumericError(
            f"interpolation residual {residual:.3e} exceeds gate {tol:.3e}"
        )
    return KernelSurrogate(
        m=m,
        order=order,
        nodes=nodes,
        eta=eta,
        scaling="ktilde" if scaled else "k",
    )


def build_kernel_surrogate(oracle, order: int, *, scaled: bool = True, workers: int = 1) -> KernelSurrogate:
    """Interpolate the oracle's function on the canonical nodes of the given order.

    `oracle` is a GridOracle (or any callable on lattice points exposing .m).
    The node set is grid_nodes(m, order); the result matches f exactly on every
    lattice point with at most `order` nonzero coordinates and is the
    minimum-norm element of H doing so.
    """
    nodes = grid_nodes(oracle.m, order)
    return interpolate_on_nodes(
        oracle, nodes, order, scaled=scaled, allow_dependent=False, workers=workers
    )


def eval_kernel_surrogate(surrogate: KernelSurrogate, theta) -> float:
    """sum_j eta_j K(p_j, theta) in node order."""
    theta = _as_angle_vector(theta, surrogate.m)
    return float(surrogate.eval_many(theta[None, :])[0])


def reconstruct_exact(oracle, m: int) -> Callable[[np.ndarray], float]:
    """Exact brute-force reconstruction over the full 4^m lattice.

    Any g in H satisfies g = (pi/2)^m sum_p g(p) K(p, .) with p ranging over
    all lattice points; this returns that sum as a closure.  Exponential cost,
    hence the small-m guard.
    """
    if not 1 <= m <= RECONSTRUCT_MAX_M:
        raise SizeError(f"exact reconstruction supports m in 1..{RECONSTRUCT_MAX_M}, got {m}")
    lattice = [
        GridPoint(residues) for residues in itertools.product(range(4), repeat=m)
    ]
    values = np.array([oracle(p) for p in lattice], dtype=float)
    angles = np.stack([p.angles() for p in lattice])
    weight = (np.pi / 2.0) ** m * unscaled_factor(m)

    def reconstruction(theta) -> float:
        th = _as_angle_vector(theta, m)
        kvec = np.prod((1.0 + 2.0 * np.cos(angles - th[None, :])) / 3.0, axis=1)
        return float(weight * np.dot(kvec, values))

    return reconstruction


def pi_node_reduction_check(base: GridPoint):
    """Closures (lhs, rhs) witnessing that a node with a pi coordinate is
    redundant: its kernel section equals K(+pi/2 node) + K(-pi/2 node)
    - K(0 node) with the other coordinates fixed.

    Uses the rescaled kernel (the identity is scale-invariant) so values stay
    O(1) at any m.
    """
    try:
        coord = base.residues.index(2)
    except ValueError:
        raise ValidationError(f"base point {base} has no coordinate at angle pi")

    def variant(residue: int) -> GridPoint:
        res = list(base.residues)
        res[coord] = residue
        return GridPoint(tuple(res))

    plus, minus, zero = variant(1), variant(3), variant(0)

    def lhs(theta) -> float:
        return kernel_scaled(base.angles(), theta)

    def rhs(theta) -> float:
        return (
            kernel_scaled(plus.angles(), theta)
            + kernel_scaled(minus.angles(), theta)
            - kernel_scaled(zero.angles(), theta)
        )

    return lhs, rhs


class KernelSpace:
    """Brute-force oracle for the function space H itself (test support).

    Inner products of elements of H reduce to finite sums over the 4^m
    lattice: <g, h> = (pi/2)^m sum_p g(p) h(p).  Arguments are callables on
    angle vectors.
    """

    def __init__(self, m: int):
        if not 1 <= m <= SPACE_MAX_M:
            raise SizeError(f"KernelSpace supports m in 1..{SPACE_MAX_M}, got {m}")
        self.m = m
        self.lattice = [
            GridPoint(residues) for residues in itertools.product(range(4), repeat=m)
        ]

    def inner(self, g, h) -> float:
        total = 0.0
        for p in self.lattice:
            ang = p.angles()
            total += g(ang) * h(ang)
        return (np.pi / 2.0) ** self.m * total

    def norm(self, g) -> float:
        return math.sqrt(max(self.inner(g, g), 0.0))
