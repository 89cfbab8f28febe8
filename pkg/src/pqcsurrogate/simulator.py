"""Dense state-vector simulation of parametrized circuits.

Circuits are words of fixed Clifford/phase gates and single-parameter Pauli
rotations exp(-i(theta/2)G) acting on |0...0>.  States live in arrays of shape
(batch, 2, ..., 2) with axis q+1 holding qubit q (qubit 0 is the most
significant bit of the flat index).  Gate application updates amplitudes wire
by wire; there is no gate fusion or circuit rewriting, so the arithmetic per
evaluation is fixed and reproducible.

Helpers never mutate their input arrays; several return views, which is safe
under that discipline.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError, SizeError, ValidationError
from .grid import GridPoint
from .pauli import Observable, PauliString

#: Hard cap on register width; 2^24 amplitudes is the largest dense state allowed.
MAX_QUBITS = 24

#: Expectation values are real up to rounding; larger imaginary parts mean a bug.
IMAG_TOL = 1e-10

_FIXED_1Q_MATRICES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_DIAG_1Q = {
    "S": np.array([1, 1j], dtype=complex),
    "T": np.array([1, np.exp(1j * np.pi / 4)], dtype=complex),
    "Z": np.array([1, -1], dtype=complex),
}


@dataclass(frozen=True)
class FixedGate:
    """A parameter-free gate: H/S/T/X/Y/Z, CNOT, or a custom small unitary."""

    label: str
    wires: tuple[int, ...]
    matrix: np.ndarray | None = field(default=None, compare=False)


@dataclass(frozen=True)
class RotationGate:
    """exp(-i(theta_j/2) G) for a non-identity Pauli word G; param_index is 1-based."""

    generator: PauliString
    param_index: int


Gate = FixedGate | RotationGate


def fixed(label: str, *wires: int) -> FixedGate:
    return FixedGate(label.upper(), tuple(wires))


def cnot(control: int, target: int) -> FixedGate:
    return FixedGate("CNOT", (control, target))


def custom(matrix, *wires: int) -> FixedGate:
    return FixedGate("CUSTOM", tuple(wires), matrix=np.asarray(matrix, dtype=complex))


def rx(n: int, qubit: int, param_index: int) -> RotationGate:
    return RotationGate(PauliString.single(n, qubit, "X"), param_index)


def ry(n: int, qubit: int, param_index: int) -> RotationGate:
    return RotationGate(PauliString.single(n, qubit, "Y"), param_index)


def rz(n: int, qubit: int, param_index: int) -> RotationGate:
    return RotationGate(PauliString.single(n, qubit, "Z"), param_index)


def rp(word, param_index: int) -> RotationGate:
    """Rotation generated by a general Pauli word (string or PauliString)."""
    if isinstance(word, str):
        word = PauliString(word)
    return RotationGate(word, param_index)


class ParametrizedCircuit:
    """n qubits, m parameters, and a gate sequence using each parameter once."""

    def __init__(self, n: int, m: int, gates):
        if not 1 <= n <= MAX_QUBITS:
            raise SizeError(f"qubit count must be in 1..{MAX_QUBITS}, got {n}")
        if m < 0:
            raise ValidationError(f"parameter count must be >= 0, got {m}")
        self.n = n
        self.m = m
        self.gates: tuple[Gate, ...] = tuple(gates)
        seen_params: set[int] = set()
        for gate in self.gates:
            if isinstance(gate, RotationGate):
                self._check_rotation(gate, seen_params)
            elif isinstance(gate, FixedGate):
                self._check_fixed(gate)
            else:
                raise ValidationError(f"unknown gate object {gate!r}")
        if seen_params != set(range(1, m + 1)):
            missing = sorted(set(range(1, m + 1)) - seen_params)
            raise ValidationError(
                f"each parameter index 1..{m} must be used exactly once; missing {missing}"
            )

    def _check_rotation(self, gate: RotationGate, seen: set[int]) -> None:
        if gate.generator.n != self.n:
            raise ValidationError(
                f"rotation word {gate.generator} is {gate.generator.n} wide, circuit has {self.n} qubits"
            )
        if gate.generator.is_identity:
            raise ValidationError("rotation generator must be a non-identity Pauli word")
        j = gate.param_index
        if not 1 <= j <= self.m:
            raise ValidationError(f"parameter index {j} outside 1..{self.m}")
        if j in seen:
            raise ValidationError(f"parameter index {j} used more than once")
        seen.add(j)

    def _check_fixed(self, gate: FixedGate) -> None:
        for w in gate.wires:
            if not 0 <= w < self.n:
                raise ValidationError(f"wire {w} out of range for n={self.n}")
        if len(set(gate.wires)) != len(gate.wires):
            raise ValidationError(f"gate {gate.label} has repeated wires {gate.wires}")
        if gate.label in _FIXED_1Q_MATRICES:
            if len(gate.wires) != 1:
                raise ValidationError(f"{gate.label} acts on exactly one wire")
        elif gate.label == "CNOT":
            if len(gate.wires) != 2:
                raise ValidationError("CNOT acts on exactly two wires")
        elif gate.label == "CUSTOM":
            if gate.matrix is None:
                raise ValidationError("custom gate needs a matrix")
            k = len(gate.wires)
            if k not in (1, 2):
                raise ValidationError("custom gates act on one or two wires")
            dim = 2 ** k
            if gate.matrix.shape != (dim, dim):
                raise ValidationError(
                    f"custom matrix shape {gate.matrix.shape} does not match {k} wires"
                )
            defect = np.max(np.abs(gate.matrix @ gate.matrix.conj().T - np.eye(dim)))
            if defect > 1e-10:
                raise ValidationError(f"custom matrix is not unitary (defect {defect:.3e})")
        else:
            raise ValidationError(f"unknown gate label {gate.label!r}")


# ── Amplitude updates ────────────────────────────────────────────────────────


def _diag_mul(state: np.ndarray, diag: np.ndarray, axis: int) -> np.ndarray:
    shape = [1] * state.ndim
    shape[axis] = 2
    return state * diag.reshape(shape)


def _apply_1q_matrix(state: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(mat, state, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _apply_2q_matrix(state: np.ndarray, mat: np.ndarray, ax1: int, ax2: int) -> np.ndarray:
    tensor = mat.reshape(2, 2, 2, 2)
    out = np.tensordot(tensor, state, axes=([2, 3], [ax1, ax2]))
    return np.moveaxis(out, [0, 1], [ax1, ax2])


def _apply_cnot(state: np.ndarray, c_axis: int, t_axis: int) -> np.ndarray:
    out = state.copy()
    base = [slice(None)] * state.ndim
    for t_bit in (0, 1):
        src = list(base)
        dst = list(base)
        src[c_axis] = 1
        dst[c_axis] = 1
        src[t_axis] = 1 - t_bit
        dst[t_axis] = t_bit
        out[tuple(dst)] = state[tuple(src)]
    return out


def _apply_word(state: np.ndarray, word: PauliString) -> np.ndarray:
    """Apply a Pauli word; axis q+1 carries qubit q (axis 0 is the batch)."""
    _Y_PHASE = np.array([-1j, 1j])
    for q, letter in enumerate(word.ops):
        axis = q + 1
        if letter == "I":
            continue
        if letter == "X":
            state = np.flip(state, axis=axis)
        elif letter == "Y":
            state = _diag_mul(np.flip(state, axis=axis), _Y_PHASE, axis)
        else:  # Z
            state = _diag_mul(state, _DIAG_1Q["Z"], axis)
    return state


def _apply_gate(state: np.ndarray, gate: Gate, thetas: np.ndarray) -> np.ndarray:
    if isinstance(gate, RotationGate):
        angles = thetas[:, gate.param_index - 1]
        n = state.ndim - 1
        bshape = (-1,) + (1,) * n
        cos_half = np.cos(angles / 2.0).reshape(bshape)
        sin_half = np.sin(angles / 2.0).reshape(bshape)
        rotated = _apply_word(state, gate.generator)
        return cos_half * state - 1j * sin_half * rotated

    axes = tuple(w + 1 for w in gate.wires)
    if gate.label == "CNOT":
        return _apply_cnot(state, axes[0], axes[1])
    if gate.label == "CUSTOM":
        if len(axes) == 1:
            return _apply_1q_matrix(state, gate.matrix, axes[0])
        return _apply_2q_matrix(state, gate.matrix, axes[0], axes[1])
    if gate.label in _DIAG_1Q:
        return _diag_mul(state, _DIAG_1Q[gate.label], axes[0])
    if gate.label == "X":
        return np.flip(state, axis=axes[0])
    if gate.label == "Y":
        return _diag_mul(np.flip(state, axis=axes[0]), np.array([-1j, 1j]), axes[0])
    return _apply_1q_matrix(state, _FIXED_1Q_MATRICES[gate.label], axes[0])


# ── Evaluation ───────────────────────────────────────────────────────────────


def _check_thetas(circuit: ParametrizedCircuit, thetas: np.ndarray) -> np.ndarray:
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 2 or thetas.shape[1] != circuit.m:
        raise ValidationError(
            f"expected parameter rows of length {circuit.m}, got shape {thetas.shape}"
        )
    if not np.all(np.isfinite(thetas)):
        raise ValidationError("parameter values must be finite")
    return thetas


def simulate_batch(circuit: ParametrizedCircuit, thetas) -> np.ndarray:
    """State vectors for each parameter row; returns shape (B, 2^n)."""
    thetas = _check_thetas(circuit, thetas)
    batch = thetas.shape[0]
    state = np.zeros((batch,) + (2,) * circuit.n, dtype=complex)
    state[(slice(None),) + (0,) * circuit.n] = 1.0
    for gate in circuit.gates:
        state = _apply_gate(state, gate, thetas)
    return state.reshape(batch, 2 ** circuit.n)


def simulate(circuit: ParametrizedCircuit, theta) -> np.ndarray:
    """The state U(theta)|0...0> as a flat complex vector of length 2^n."""
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1:
        raise ValidationError(f"theta must be a flat vector, got shape {theta.shape}")
    return simulate_batch(circuit, theta[None, :])[0]


def expectation_batch(states: np.ndarray, obs: Observable) -> np.ndarray:
    """<psi|M|psi> for each row of `states` (flat vectors of length 2^n)."""
    batch, dim = states.shape
    n = dim.bit_length() - 1
    if 2 ** n != dim or obs.n != n:
        raise ValidationError(
            f"state dimension {dim} does not match observable on {obs.n} qubits"
        )
    shaped = states.reshape((batch,) + (2,) * n)
    sum_axes = tuple(range(1, n + 1))
    values = np.zeros(batch, dtype=complex)
    for coeff, word in obs.terms:
        applied = _apply_word(shaped, word)
        values += coeff * np.sum(np.conj(shaped) * applied, axis=sum_axes)
    worst = float(np.max(np.abs(values.imag))) if batch else 0.0
    if worst >= IMAG_TOL:
        raise NumericError(
            f"expectation has imaginary residue {worst:.3e} >= {IMAG_TOL:g}"
        )
    return values.real


def expectation(state: np.ndarray, obs: Observable) -> float:
    state = np.asarray(state, dtype=complex)
    return float(expectation_batch(state[None, :], obs)[0])


def f_eval(circuit: ParametrizedCircuit, obs: Observable, theta) -> float:
    """f(theta) = <psi(theta)|M|psi(theta)>."""
    return float(f_eval_many(circuit, obs, np.asarray(theta, dtype=float)[None, :])[0])


def f_eval_many(circuit: ParametrizedCircuit, obs: Observable, thetas) -> np.ndarray:
    """Batched f over rows of `thetas`; the caller is responsible for chunking."""
    if obs.n != circuit.n:
        raise ValidationError(
            f"observable on {obs.n} qubits does not match circuit with {circuit.n}"
        )
    return expectation_batch(simulate_batch(circuit, thetas), obs)


# ── Grid-point cache and oracle ──────────────────────────────────────────────


class EvaluationCache:
    """Memo of total f values keyed by exact lattice points.

    Two usage contracts: exclusive single-threaded access (default) or a
    concurrent phase where workers publish disjoint points through a lock.
    Stored values are exactly what f_eval returns, so either contract yields
    identical results.
    """

    def __init__(self, concurrent: bool = False):
        self._store: dict[GridPoint, float] = {}
        self._lock = threading.Lock() if concurrent else None
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._store)

    def __contains__(self, point: GridPoint) -> bool:
        return point in self._store

    def points(self):
        return self._store.keys()

    def lookup(self, point: GridPoint):
        """Cached value or None; counts a hit when found."""
        if self._lock:
            with self._lock:
                return self._lookup(point)
        return self._lookup(point)

    def _lookup(self, point: GridPoint):
        value = self._store.get(point)
        if value is not None:
            self.hits += 1
        return value

    def publish(self, point: GridPoint, value: float) -> None:
        """Record a freshly computed value; counts a miss."""
        if self._lock:
            with self._lock:
                self._publish(point, value)
        else:
            self._publish(point, value)

    def _publish(self, point: GridPoint, value: float) -> None:
        self._store.setdefault(point, value)
        self.misses += 1

    def stats(self) -> dict:
        return {
            "hits": self.hits,
            "misses": self.misses,
            "distinct_points": len(self._store),
        }


def oracle_eval(
    cache: EvaluationCache | None,
    circuit: ParametrizedCircuit,
    obs: Observable,
    point: GridPoint,
) -> float:
    """f at a lattice point, memoized in `cache` when one is given."""
    if point.m != circuit.m:
        raise ValidationError(
            f"grid point has {point.m} coordinates, circuit has {circuit.m} parameters"
        )
    if cache is not None:
        value = cache.lookup(point)
        if value is not None:
            return value
    value = f_eval(circuit, obs, point.angles())
    if cache is not None:
        cache.publish(point, value)
    return value


class GridOracle:
    """Callable lattice oracle bundling a circuit, observable, and cache."""

    def __init__(
        self,
        circuit: ParametrizedCircuit,
        observable: Observable,
        cache: EvaluationCache | None = None,
        *,
        caching: bool = True,
    ):
        if observable.n != circuit.n:
            raise ValidationError(
                f"observable on {observable.n} qubits does not match circuit with {circuit.n}"
            )
        self.circuit = circuit
        self.observable = observable
        self.cache = (cache if cache is not None else EvaluationCache()) if caching else None

    @property
    def m(self) -> int:
        return self.circuit.m

    @property
    def n(self) -> int:
        return self.circuit.n

    def one_norm(self) -> float:
        return self.observable.one_norm()

    def __call__(self, point: GridPoint) -> float:
        return oracle_eval(self.cache, self.circuit, self.observable, point)

    def prefetch(self, points, workers: int = 1) -> None:
        """Evaluate any missing points up front, optionally in parallel.

        Values are computed by the same single-point routine used everywhere
        and published in deterministic order, so results do not depend on the
        worker count.
        """
        if self.cache is None:
            return
        missing: list[GridPoint] = []
        seen: set[GridPoint] = set()
        for p in points:
            if p not in self.cache and p not in seen:
                seen.add(p)
                missing.append(p)
        if not missing:
            return
        if workers <= 1:
            for p in missing:
                oracle_eval(self.cache, self.circuit, self.observable, p)
            return
        compute = lambda p: f_eval(self.circuit, self.observable, p.angles())
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(compute, missing))
        for p, v in zip(missing, values):
            self.cache.publish(p, v)
