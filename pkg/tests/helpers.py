"""Shared test utilities: random problem generators and independent oracles."""

from __future__ import annotations

import itertools

import numpy as np

from pqcsurrogate import (
    Observable,
    ParametrizedCircuit,
    PauliString,
    cnot,
    fixed,
    rp,
    rx,
)

# Central-difference stencils (offset, coefficient); divide by h^order.
_STENCILS = {
    1: ((1, 0.5), (-1, -0.5)),
    2: ((1, 1.0), (0, -2.0), (-1, 1.0)),
    3: ((2, 0.5), (1, -1.0), (-1, 1.0), (-2, -0.5)),
    4: ((2, 1.0), (1, -4.0), (0, 6.0), (-1, -4.0), (-2, 1.0)),
}


def finite_difference_partial(fn, alpha, h: float = 1e-3) -> float:
    """Mixed central finite difference of `fn` at 0 (independent of the shift
    rule); `fn` takes a flat angle vector."""
    m = len(alpha)
    total = 0.0

    def recurse(j: int, offsets: list[int], weight: float) -> None:
        nonlocal total
        if j == m:
            total += weight * fn(h * np.array(offsets, dtype=float))
            return
        a = alpha[j]
        if a == 0:
            recurse(j + 1, offsets + [0], weight)
            return
        for off, coeff in _STENCILS[a]:
            recurse(j + 1, offsets + [off], weight * coeff / h ** a)

    recurse(0, [], 1.0)
    return total


def random_word(rng, n: int, allow_identity: bool = False) -> str:
    while True:
        word = "".join(str(c) for c in rng.choice(list("IXYZ"), size=n))
        if allow_identity or set(word) != {"I"}:
            return word


def random_observable(rng, n: int, max_terms: int = 3) -> Observable:
    count = int(rng.integers(1, max_terms + 1))
    return Observable(
        n, [(float(rng.uniform(-2.0, 2.0)), random_word(rng, n)) for _ in range(count)]
    )


def random_circuit(rng, n: int, m: int) -> ParametrizedCircuit:
    """Rotations through all m parameters with fixed gates sprinkled between."""
    gates = []

    def sprinkle() -> None:
        for _ in range(int(rng.integers(0, 3))):
            kind = int(rng.integers(0, 4))
            if kind == 3 and n >= 2:
                c, t = rng.choice(n, size=2, replace=False)
                gates.append(cnot(int(c), int(t)))
            else:
                gates.append(fixed("HST"[kind % 3], int(rng.integers(0, n))))

    sprinkle()
    for j in range(1, m + 1):
        gates.append(rp(random_word(rng, n), j))
        sprinkle()
    return ParametrizedCircuit(n, m, gates)


def cosine_circuit():
    """One RX against Z: f(theta) = cos(theta)."""
    circuit = ParametrizedCircuit(1, 1, [rx(1, 0, 1)])
    return circuit, Observable(1, [(1.0, "Z")])


def cosine_product_circuit(m: int):
    """Independent RX per qubit against the all-Z word: f = prod_j cos(theta_j)."""
    circuit = ParametrizedCircuit(m, m, [rx(m, q, q + 1) for q in range(m)])
    return circuit, Observable(m, [(1.0, PauliString("Z" * m))])


def random_trig_poly(rng, m: int):
    """A random element of the span of prod_j {1, cos z_j, sin z_j}."""
    combos = list(itertools.product((0, 1, 2), repeat=m))
    amps = rng.normal(size=len(combos))

    def g(theta) -> float:
        theta = np.asarray(theta, dtype=float)
        total = 0.0
        for amp, combo in zip(amps, combos):
            value = amp
            for j, c in enumerate(combo):
                if c == 1:
                    value *= np.cos(theta[j])
                elif c == 2:
                    value *= np.sin(theta[j])
            total += value
        return float(total)

    return g


def sample_l1_ball(rng, m: int, radius: float, count: int) -> np.ndarray:
    """Random points with 1-norm at most `radius` (rows of shape (count, m))."""
    expo = rng.exponential(size=(count, m))
    simplex = expo / expo.sum(axis=1, keepdims=True)
    signs = rng.choice((-1.0, 1.0), size=(count, m))
    radii = radius * rng.uniform(size=(count, 1)) ** (1.0 / m)
    return signs * simplex * radii
