"""Text, JSON, and CSV formats.

Circuits and observables travel as small line-oriented text files; surrogates
as JSON documents tagged with a format kind; scan and Monte-Carlo results as
CSV.  Floats are written with 17 significant digits so that a written value
reloads to the identical double.
"""

from __future__ import annotations

import csv
import json
from typing import Iterable

import numpy as np

from .errors import ValidationError
from .experiments import MCResult, ScanRow
from .grid import GridPoint
from .kernel import KernelSurrogate
from .pauli import Observable, PauliString
from .simulator import FixedGate, ParametrizedCircuit, RotationGate, cnot, fixed, rp
from .taylor import TaylorSurrogate

_SINGLE_QUBIT_LABELS = ("H", "S", "T", "X", "Y", "Z")


def fmt17(x: float) -> str:
    """Shortest-safe float text: 17 significant digits round-trip exactly."""
    return format(float(x), ".17g")


# ── Observable text format ───────────────────────────────────────────────────


def parse_observable_text(text: str) -> Observable:
    """One `<coeff> <word>` pair per line; '#' comments and blanks ignored."""
    terms: list[tuple[float, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(f"observable line {lineno}: expected '<coeff> <word>', got {raw!r}")
        try:
            coeff = float(parts[0])
        except ValueError as exc:
            raise ValidationError(f"observable line {lineno}: bad coefficient {parts[0]!r}") from exc
        terms.append((coeff, parts[1]))
    if not terms:
        raise ValidationError("observable text contains no terms")
    n = len(terms[0][1])
    for _, word in terms:
        if len(word) != n:
            raise ValidationError(
                f"observable words must share one length, got {len(word)} and {n}"
            )
    return Observable(n, terms)


def format_observable_text(obs: Observable) -> str:
    lines = [f"{fmt17(a)} {w}" for a, w in obs.terms]
    return "\n".join(lines) + "\n"


# ── Circuit text format ──────────────────────────────────────────────────────


def parse_circuit_text(text: str) -> ParametrizedCircuit:
    """Header `qubits n params m`, then one gate per line.

    Gate lines: `H q` (likewise S/T/X/Y/Z), `CNOT c t`, `RX q j` / `RY q j` /
    `RZ q j`, and `RP <word> j` for a general Pauli-word rotation; j is the
    1-based parameter index.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise ValidationError("circuit text is empty")
    header_no, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "qubits" or parts[2] != "params":
        raise ValidationError(
            f"circuit line {header_no}: expected header 'qubits n params m', got {header!r}"
        )
    try:
        n, m = int(parts[1]), int(parts[3])
    except ValueError as exc:
        raise ValidationError(f"circuit line {header_no}: bad header numbers") from exc

    gates = []
    for lineno, line in lines[1:]:
        tokens = line.split()
        op = tokens[0].upper()
        try:
            if op in _SINGLE_QUBIT_LABELS and len(tokens) == 2:
                gates.append(fixed(op, int(tokens[1])))
            elif op == "CNOT" and len(tokens) == 3:
                gates.append(cnot(int(tokens[1]), int(tokens[2])))
            elif op in ("RX", "RY", "RZ") and len(tokens) == 3:
                qubit, j = int(tokens[1]), int(tokens[2])
                word = PauliString.single(n, qubit, op[1])
                gates.append(rp(word, j))
            elif op == "RP" and len(tokens) == 3:
                gates.append(rp(tokens[1].upper(), int(tokens[2])))
            else:
                raise ValidationError(f"circuit line {lineno}: cannot parse {line!r}")
        except ValueError as exc:
            raise ValidationError(f"circuit line {lineno}: bad integer in {line!r}") from exc
    return ParametrizedCircuit(n, m, gates)


def format_circuit_text(circuit: ParametrizedCircuit) -> str:
    lines = [f"qubits {circuit.n} params {circuit.m}"]
    for gate in circuit.gates:
        if isinstance(gate, RotationGate):
            word = gate.generator
            support = word.support()
            if len(support) == 1 and word.ops[support[0]] in "XYZ":
                lines.append(f"R{word.ops[support[0]]} {support[0]} {gate.param_index}")
            else:
                lines.append(f"RP {word.ops} {gate.param_index}")
        elif isinstance(gate, FixedGate):
            if gate.label == "CUSTOM":
                raise ValidationError("custom-matrix gates have no text form")
            lines.append(gate.label + " " + " ".join(str(w) for w in gate.wires))
    return "\n".join(lines) + "\n"


# ── Surrogate JSON ───────────────────────────────────────────────────────────

TAYLOR_KIND = "taylor-v1"
KERNEL_KIND = "kernel-v1"


def surrogate_to_json(surrogate) -> str:
    if isinstance(surrogate, TaylorSurrogate):
        doc = {
            "kind": TAYLOR_KIND,
            "m": surrogate.m,
            "L": surrogate.order,
            "one_norm": surrogate.obs_one_norm,
            "coeffs": [
                {"alpha": list(alpha), "value": value}
                for alpha, value in surrogate.coeffs.items()
            ],
        }
    elif isinstance(surrogate, KernelSurrogate):
        doc = {
            "kind": KERNEL_KIND,
            "m": surrogate.m,
            "L": surrogate.order,
            "scaling": surrogate.scaling,
            "nodes": [list(p.residues) for p in surrogate.nodes],
            "eta": [float(v) for v in surrogate.eta],
        }
    else:
        raise ValidationError(f"cannot serialize object of type {type(surrogate).__name__}")
    return json.dumps(doc, indent=2) + "\n"


def surrogate_from_json(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"surrogate file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("surrogate JSON must be an object with a 'kind' field")
    kind = doc["kind"]
    try:
        if kind == TAYLOR_KIND:
            coeffs = {
                tuple(int(a) for a in entry["alpha"]): float(entry["value"])
                for entry in doc["coeffs"]
            }
            return TaylorSurrogate(
                m=int(doc["m"]),
                order=int(doc["L"]),
                coeffs=coeffs,
                obs_one_norm=float(doc["one_norm"]),
            )
        if kind == KERNEL_KIND:
            scaling = doc.get("scaling", "ktilde")
            if scaling not in ("ktilde", "k"):
                raise ValidationError(f"unknown kernel scaling {scaling!r}")
            return KernelSurrogate(
                m=int(doc["m"]),
                order=int(doc["L"]),
                nodes=tuple(
                    GridPoint(tuple(int(r) for r in res)) for res in doc["nodes"]
                ),
                eta=np.array([float(v) for v in doc["eta"]]),
                scaling=scaling,
            )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"surrogate JSON is missing or mistypes a field: {exc}") from exc
    raise ValidationError(f"unknown surrogate kind {kind!r}")


def save_surrogate(surrogate, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(surrogate_to_json(surrogate))


def load_surrogate(path):
    with open(path, "r", encoding="utf-8") as fh:
        return surrogate_from_json(fh.read())


# ── CSV ──────────────────────────────────────────────────────────────────────

SCAN_CSV_HEADER = ["t", "f", "f_tilde", "abs_diff", "bound"]
MC_CSV_HEADER = [
    "method", "L", "k", "N_f", "N_diff", "seed",
    "norm_f", "sem_f", "norm_diff", "sem_diff", "ratio",
]


def write_scan_csv(rows: Iterable[ScanRow], path) -> None:
    """Curve-scan CSV: t,f,f_tilde,abs_diff,bound (bound empty when absent)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCAN_CSV_HEADER)
        for row in rows:
            writer.writerow([
                fmt17(row.t),
                fmt17(row.f),
                fmt17(row.f_tilde),
                fmt17(row.abs_diff),
                "" if row.bound is None else fmt17(row.bound),
            ])


def write_mc_csv(rows: Iterable[tuple[str, int, int, MCResult]], path) -> None:
    """Monte-Carlo CSV; each entry is (method, L, k, result)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(MC_CSV_HEADER)
        for method, order, k, res in rows:
            writer.writerow([
                method, order, k, res.n_f, res.n_diff, res.seed,
                fmt17(res.norm_f), fmt17(res.sem_f),
                fmt17(res.norm_diff), fmt17(res.sem_diff),
                fmt17(res.ratio),
            ])
