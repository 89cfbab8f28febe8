"""Pauli words and real linear combinations of them.

Observables are stored as sparse lists of (coefficient, word) pairs.  The
1-norm of the coefficient vector is the quantity every error bound in the
package is expressed against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import SizeError, ValidationError

_PAULI_CHARS = "IXYZ"

_PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

#: Qubit cap for dense decomposition (4^n words, 2^n x 2^n matrices).
DENSE_DECOMPOSE_MAX_QUBITS = 6

#: Coefficients below this magnitude are dropped by decompose_dense.
DECOMPOSE_DROP_TOL = 1e-12

#: Allowed Hermiticity defect for dense decomposition input.
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class PauliString:
    """A word over {I, X, Y, Z}, one letter per qubit.

    The matrix of any word is Hermitian with eigenvalues in {-1, +1} (the
    all-identity word has only +1), which is exactly what rotation generators
    and the shift rule require.
    """

    ops: str

    def __post_init__(self) -> None:
        if len(self.ops) == 0:
            raise ValidationError("Pauli word must cover at least one qubit")
        bad = set(self.ops) - set(_PAULI_CHARS)
        if bad:
            raise ValidationError(f"invalid Pauli letters {sorted(bad)!r} in {self.ops!r}")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls("I" * n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """The word acting as `letter` on one qubit and I elsewhere."""
        if not 0 <= qubit < n:
            raise ValidationError(f"qubit {qubit} out of range for n={n}")
        ops = ["I"] * n
        ops[qubit] = letter
        return cls("".join(ops))

    @property
    def n(self) -> int:
        return len(self.ops)

    @property
    def is_identity(self) -> bool:
        return set(self.ops) == {"I"}

    def support(self) -> tuple[int, ...]:
        """Qubits on which the word acts non-trivially."""
        return tuple(q for q, c in enumerate(self.ops) if c != "I")

    def matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix of the word (small n only)."""
        return reduce(np.kron, (_PAULI_MATRICES[c] for c in self.ops))

    def __str__(self) -> str:
        return self.ops


class Observable:
    """A real linear combination sum_t a_t * P_t of Pauli words.

    Terms with equal words are merged at construction; exact-zero merged
    coefficients are dropped.  Term order is first appearance, which keeps
    expectation-value summation deterministic.
    """

    def __init__(self, n: int, terms=()):
        if n < 1:
            raise ValidationError(f"observable needs n >= 1, got {n}")
        self.n = n
        merged: dict[PauliString, float] = {}
        for coeff, word in terms:
            if isinstance(word, str):
                word = PauliString(word)
            if word.n != n:
                raise ValidationError(
                    f"word {word} has {word.n} qubits, observable has {n}"
                )
            merged[word] = merged.get(word, 0.0) + float(coeff)
        self.terms: list[tuple[float, PauliString]] = [
            (a, w) for w, a in merged.items() if a != 0.0
        ]

    def one_norm(self) -> float:
        """Sum of absolute coefficients; every surrogate error bound scales with it."""
        return float(sum(abs(a) for a, _ in self.terms))

    def matrix(self) -> np.ndarray:
        dim = 2 ** self.n
        out = np.zeros((dim, dim), dtype=complex)
        for a, w in self.terms:
            out += a * w.matrix()
        return out

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{a:g}*{w}" for a, w in self.terms) or "0"
        return f"Observable({self.n}, {body})"


def one_norm(obs: Observable) -> float:
    return obs.one_norm()


def decompose_dense(matrix) -> Observable:
    """Expand a dense Hermitian matrix in the Pauli-word basis.

    The coefficient of word P is trace(P @ M) / 2^n, real for Hermitian M.
    Coefficients with magnitude below DECOMPOSE_DROP_TOL are dropped.
    """
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {mat.shape}")
    dim = mat.shape[0]
    n = dim.bit_length() - 1
    if 2 ** n != dim:
        raise ValidationError(f"matrix dimension {dim} is not a power of two")
    if n > DENSE_DECOMPOSE_MAX_QUBITS:
        raise SizeError(
            f"dense decomposition supports at most {DENSE_DECOMPOSE_MAX_QUBITS} "
            f"qubits, got {n}"
        )
    defect = np.max(np.abs(mat - mat.conj().T))
    if defect > HERMITIAN_TOL:
        raise ValidationError(f"matrix is not Hermitian (defect {defect:.3e})")

    terms = []
    for letters in itertools.product(_PAULI_CHARS, repeat=n):
        word = PauliString("".join(letters))
        coeff = np.einsum("ij,ji->", word.matrix(), mat) / dim
        if abs(coeff) >= DECOMPOSE_DROP_TOL:
            terms.append((coeff.real, word))
    return Observable(n, terms)
