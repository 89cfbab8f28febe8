"""Benchmark circuit, parameter-space curves, and error studies.

The benchmark family alternates a layer of per-qubit RX rotations with a
CNOT-conjugated T gate on every qubit pair, repeated d times, measured in
Z on every qubit.  It is Clifford+T, heavy on magic states (d*n*(n-1)/2
T gates), and classically hard at scale, which is what makes surrogate
quality on it interesting.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .grid import GridPoint
from .pauli import Observable, PauliString
from .simulator import ParametrizedCircuit, cnot, fixed, rx

#: Fixed Monte-Carlo chunk size; partial sums are accumulated per chunk in
#: order, so results are reproducible for a fixed (seed, workers).
MC_CHUNK = 4096


@dataclass(frozen=True)
class BenchmarkSpec:
    """Size of a benchmark instance: n qubits, d layers, m = n*d parameters."""

    n: int
    d: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValidationError(f"benchmark needs n >= 2, got {self.n}")
        if self.d < 1:
            raise ValidationError(f"benchmark needs d >= 1, got {self.d}")

    @property
    def m(self) -> int:
        return self.n * self.d

    @property
    def t_count(self) -> int:
        return self.d * self.n * (self.n - 1) // 2

    @property
    def meets_reference_depth(self) -> bool:
        """The reference configuration uses d >= 2; d = 1 is a test-scale deviation."""
        return self.d >= 2

    def observable(self) -> Observable:
        """Z on every qubit (a single Pauli word with coefficient 1)."""
        return Observable(self.n, [(1.0, PauliString("Z" * self.n))])


def build_benchmark_circuit(n: int, d: int) -> ParametrizedCircuit:
    """The benchmark circuit: d repetitions of an RX layer followed by
    CNOT(i,j) T(j) CNOT(i,j) over all pairs i < j in lexicographic order.

    Parameter indices run layer-major: layer r uses r*n+1 .. r*n+n, one per
    qubit in wire order.  At theta = 0 the circuit fixes |0...0>, so the
    Z-word expectation there is exactly 1.
    """
    spec = BenchmarkSpec(n, d)
    gates = []
    for layer in range(d):
        for q in range(n):
            gates.append(rx(n, q, layer * n + q + 1))
        for i in range(n - 1):
            for j in range(i + 1, n):
                gates.append(cnot(i, j))
                gates.append(fixed("T", j))
                gates.append(cnot(i, j))
    return ParametrizedCircuit(n, spec.m, gates)


# ── Parameter-space curves ───────────────────────────────────────────────────

CURVE_IDS = ("gamma1", "gamma2", "gamma3", "gamma4", "gamma5")


@dataclass(frozen=True)
class CurveSpec:
    """One of the named curves t -> theta(t) in R^m.

    gamma1: the diagonal (t, ..., t).
    gamma2: (pi/2)(sin t, (1-cos t)^2, sin^4 t, ..., sin^4 t); tangent to the
            first axis at t = 0.
    gamma3: (4pi/5)((t+1)/(2(m-1)), ..., (t+1)/(2(m-1)), 1-(t+1)/2) on
            t in [-1, 1]; constant 1-norm 4pi/5.
    gamma4: gamma3 scaled to constant 1-norm 2pi/5.
    gamma5: (t, t, t, t, 0, ..., 0).
    """

    curve_id: str
    m: int

    def __post_init__(self) -> None:
        if self.curve_id not in CURVE_IDS:
            raise ValidationError(
                f"unknown curve {self.curve_id!r}; expected one of {CURVE_IDS}"
            )
        minimum = {"gamma1": 1, "gamma2": 2, "gamma3": 2, "gamma4": 2, "gamma5": 4}
        if self.m < minimum[self.curve_id]:
            raise ValidationError(
                f"{self.curve_id} needs m >= {minimum[self.curve_id]}, got {self.m}"
            )

    @property
    def domain(self) -> tuple[float, float]:
        if self.curve_id in ("gamma3", "gamma4"):
            return (-1.0, 1.0)
        return (-np.inf, np.inf)

    def check_t(self, t: float) -> float:
        t = float(t)
        lo, hi = self.domain
        if not lo <= t <= hi:
            raise ValidationError(
                f"t={t} outside the domain [{lo}, {hi}] of {self.curve_id}"
            )
        return t


def curve_point(spec: CurveSpec, t: float) -> np.ndarray:
    """theta(t) for the given curve."""
    t = spec.check_t(t)
    m = spec.m
    if spec.curve_id == "gamma1":
        return np.full(m, t)
    if spec.curve_id == "gamma2":
        theta = np.full(m, np.sin(t) ** 4)
        theta[0] = np.sin(t)
        theta[1] = (1.0 - np.cos(t)) ** 2
        return (np.pi / 2.0) * theta
    if spec.curve_id in ("gamma3", "gamma4"):
        scale = 4.0 * np.pi / 5.0 if spec.curve_id == "gamma3" else 2.0 * np.pi / 5.0
        theta = np.full(m, (t + 1.0) / (2.0 * (m - 1)))
        theta[-1] = 1.0 - (t + 1.0) / 2.0
        return scale * theta
    theta = np.zeros(m)
    theta[:4] = t
    return theta


@dataclass(frozen=True)
class ScanRow:
    """One curve-scan sample: truth, surrogate, gap, and optional bound."""

    t: float
    f: float
    f_tilde: float
    abs_diff: float
    bound: float | None = None


def scan_curve(f, f_tilde, spec: CurveSpec, t_grid, bound_fn=None) -> list[ScanRow]:
    """Evaluate truth and surrogate along a curve.

    `f` and `f_tilde` map an angle vector to a value; `bound_fn`, when given,
    maps an angle vector to an error bound recorded alongside each row.
    """
    rows: list[ScanRow] = []
    for t in np.asarray(t_grid, dtype=float):
        theta = curve_point(spec, float(t))
        fv = float(f(theta))
        sv = float(f_tilde(theta))
        bound = float(bound_fn(theta)) if bound_fn is not None else None
        rows.append(ScanRow(float(t), fv, sv, abs(fv - sv), bound))
    return rows


# ── Monte-Carlo relative L2 error ────────────────────────────────────────────


@dataclass(frozen=True)
class MCResult:
    """Volume-scaled L2 estimates over the cube [-pi/k, pi/k]^m.

    norm_f and norm_diff carry the (2 pi / k)^{m/2} volume factor so absolute
    values are comparable across k; the factor cancels in `ratio`.  sem_f and
    sem_diff are standard errors of the volume-scaled mean-of-squares
    estimates (the quantities under the square roots).
    """

    ratio: float
    norm_f: float
    norm_diff: float
    sem_f: float
    sem_diff: float
    n_f: int
    n_diff: int
    seed: int


def _worker_counts(total: int, workers: int) -> list[int]:
    base, extra = divmod(total, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def _mean_of_squares(fn, m: int, k: int, count: int, seed: int, widx: int):
    """Partial sums (sum x, sum x^2, n) of x = fn(theta)^2 over one substream.

    Each worker owns a counter-based Philox stream keyed on (seed, widx), so
    the sample set is a pure function of (seed, workers).
    """
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, widx], dtype=np.uint64)))
    half_width = np.pi / k
    s1 = 0.0
    s2 = 0.0
    done = 0
    while done < count:
        batch = min(MC_CHUNK, count - done)
        thetas = rng.uniform(-half_width, half_width, size=(batch, m))
        sq = np.asarray(fn(thetas), dtype=float) ** 2
        s1 += float(np.sum(sq))
        s2 += float(np.sum(sq * sq))
        done += batch
    return s1, s2, count


def _estimate_norm(fn, m: int, k: int, total: int, seed: int, workers: int):
    """Volume-scaled L2 norm estimate and the SEM of its square."""
    counts = _worker_counts(total, workers)
    jobs = [(w, c) for w, c in enumerate(counts) if c > 0]
    if workers <= 1 or len(jobs) <= 1:
        partials = [_mean_of_squares(fn, m, k, c, seed, w) for w, c in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_mean_of_squares, fn, m, k, c, seed, w) for w, c in jobs]
            partials = [fut.result() for fut in futures]
    s1 = 0.0
    s2 = 0.0
    for p1, p2, _ in partials:  # fixed worker order: deterministic reduction
        s1 += p1
        s2 += p2
    mean = s1 / total
    volume = (2.0 * np.pi / k) ** m
    if total > 1:
        variance = max(s2 - s1 * s1 / total, 0.0) / (total - 1)
        sem = volume * np.sqrt(variance / total)
    else:
        sem = float("nan")
    return float(np.sqrt(volume * mean)), float(sem), float(volume * mean)


def mc_relative_l2(
    f,
    f_tilde,
    m: int,
    k: int,
    n_f: int,
    n_diff: int,
    seed: int,
    *,
    workers: int = 1,
    sem_warn_fraction: float | None = None,
) -> MCResult:
    """Monte-Carlo estimate of ||f - f~|| / ||f|| over [-pi/k, pi/k]^m.

    `f` and `f_tilde` take a (batch, m) array of angle rows and return a batch
    of values.  ||f||^2 uses n_f fresh samples, ||f - f~||^2 uses n_diff
    samples from a disjoint substream.  With sem_warn_fraction set, a warning
    is emitted when either SEM exceeds that fraction of its mean estimate.
    """
    if k < 1:
        raise ValidationError(f"need k >= 1, got {k}")
    if n_f < 1 or n_diff < 1:
        raise ValidationError(f"need positive sample counts, got {n_f}, {n_diff}")
    if seed < 0 or workers < 1:
        raise ValidationError("seed must be >= 0 and workers >= 1")

    norm_f, sem_f, mean_sq_f = _estimate_norm(f, m, k, n_f, seed, workers)

    def gap(thetas):
        return np.asarray(f(thetas), dtype=float) - np.asarray(f_tilde(thetas), dtype=float)

    # Offset the worker index space so the diff stream never reuses f's streams.
    diff_fn = lambda w: w + workers
    counts = _worker_counts(n_diff, workers)
    jobs = [(diff_fn(w), c) for w, c in enumerate(counts) if c > 0]
    if workers <= 1 or len(jobs) <= 1:
        partials = [_mean_of_squares(gap, m, k, c, seed, w) for w, c in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_mean_of_squares, gap, m, k, c, seed, w) for w, c in jobs]
            partials = [fut.result() for fut in futures]
    s1 = sum(p[0] for p in partials)
    s2 = sum(p[1] for p in partials)
    volume = (2.0 * np.pi / k) ** m
    mean_diff = s1 / n_diff
    if n_diff > 1:
        variance = max(s2 - s1 * s1 / n_diff, 0.0) / (n_diff - 1)
        sem_diff = float(volume * np.sqrt(variance / n_diff))
    else:
        sem_diff = float("nan")
    norm_diff = float(np.sqrt(volume * mean_diff))
    mean_sq_diff = float(volume * mean_diff)

    if sem_warn_fraction is not None:
        for label, sem, mean_sq in (
            ("norm_f", sem_f, mean_sq_f),
            ("norm_diff", sem_diff, mean_sq_diff),
        ):
            if mean_sq > 0 and sem > sem_warn_fraction * mean_sq:
                warnings.warn(
                    f"{label}: SEM {sem:.3e} exceeds {sem_warn_fraction:.1%} "
                    f"of the mean-of-squares estimate {mean_sq:.3e}",
                    stacklevel=2,
                )

    if norm_f == 0.0:
        ratio = 0.0 if norm_diff == 0.0 else float("inf")
    else:
        ratio = norm_diff / norm_f
    return MCResult(
        ratio=float(ratio),
        norm_f=norm_f,
        norm_diff=norm_diff,
        sem_f=sem_f,
        sem_diff=sem_diff,
        n_f=n_f,
        n_diff=n_diff,
        seed=seed,
    )


# ── Node enrichment around a second center ───────────────────────────────────


def enrich_nodes_second_center(nodes, center: GridPoint | None = None) -> list[GridPoint]:
    """Union of a node list with its translate by `center` (default: pi/2 in
    every coordinate), original nodes first, duplicates dropped.

    Translated node sets overlap the span of the originals, so Gram matrices
    over enriched sets are usually rank-deficient; build with a least-squares
    fallback (interpolate_on_nodes(..., allow_dependent=True)).
    """
    nodes = list(nodes)
    if not nodes:
        raise ValidationError("need at least one node to enrich")
    m = nodes[0].m
    if center is None:
        center = GridPoint((1,) * m)
    if center.m != m:
        raise ValidationError(
            f"center has {center.m} coordinates, nodes have {m}"
        )
    out: list[GridPoint] = []
    seen: set[GridPoint] = set()
    for p in nodes:
        if p not in seen:
            seen.add(p)
            out.append(p)
    for p in nodes:
        shifted = GridPoint.from_multiples(
            tuple(r + c for r, c in zip(p.residues, center.residues))
        )
        if shifted not in seen:
            seen.add(shifted)
            out.append(shifted)
    return out
