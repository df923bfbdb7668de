"""Gate-level model of the threshold search circuit.

The preparation operator maps |0..0> to a uniform superposition over
assignments with the value register holding (E(x) - y) mod 2^q2 in two's
complement: Hadamards on every qubit, phase rotations on the value register
driven by the objective coefficients, then an inverse Fourier transform on
the value register. The sign oracle is a Z on the value register's most
significant qubit. Amplification composes oracle, inverse preparation,
reflection about the all-zeros state, and preparation.

Qubit i < q1 carries variable bit i of the assignment; qubits q1..q1+q2-1
carry the value register from most to least significant bit. Rotation
angles are stored as integer units of 2*pi/2^q2.

Compilation has no width limit; simulation guards the total qubit count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import pi, sqrt

import numpy as np

from .errors import ParameterError, ResourceLimitError
from .qubo import QuboProblem

MAX_SIM_QUBITS = 24
MAX_DENSE_FOURIER = 12
_INV_SQRT2 = 1.0 / sqrt(2.0)

KIND_H = "h"
KIND_R = "r"
KIND_CR = "cr"
KIND_CCR = "ccr"
KIND_Z = "z"
KIND_IQFT = "iqft"
KIND_QFT = "qft"
KIND_DIFFUSION = "diffusion"

_COUNT_LABEL = {
    KIND_H: "H",
    KIND_R: "R",
    KIND_CR: "1-CR",
    KIND_CCR: "2-CR",
    KIND_Z: "Z",
    KIND_IQFT: "IQFT",
    KIND_QFT: "QFT",
    KIND_DIFFUSION: "DIFFUSION",
}


@dataclass(frozen=True)
class Gate:
    """One operation; `units` is the phase angle in units of 2*pi/2^q2."""

    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    units: int = 0

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "targets": list(self.targets),
            "controls": list(self.controls),
            "units": self.units,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Gate":
        return cls(
            kind=doc["kind"],
            targets=tuple(doc["targets"]),
            controls=tuple(doc.get("controls", ())),
            units=int(doc.get("units", 0)),
        )


@dataclass(frozen=True)
class GateList:
    """An ordered gate sequence over q1 variable and q2 value qubits."""

    q1: int
    q2: int
    gates: tuple[Gate, ...]

    @property
    def n_qubits(self) -> int:
        return self.q1 + self.q2

    def counts(self) -> dict[str, int]:
        tally: dict[str, int] = {}
        for gate in self.gates:
            label = _COUNT_LABEL.get(gate.kind, gate.kind)
            tally[label] = tally.get(label, 0) + 1
        return tally

    def inverted(self) -> "GateList":
        mod = 1 << self.q2
        out = []
        for gate in reversed(self.gates):
            if gate.kind in (KIND_R, KIND_CR, KIND_CCR):
                out.append(
                    Gate(gate.kind, gate.targets, gate.controls, (-gate.units) % mod)
                )
            elif gate.kind == KIND_IQFT:
                out.append(Gate(KIND_QFT, gate.targets))
            elif gate.kind == KIND_QFT:
                out.append(Gate(KIND_IQFT, gate.targets))
            else:
                # h, z, diffusion are self-inverse
                out.append(gate)
        return GateList(self.q1, self.q2, tuple(out))

    def to_json(self) -> dict:
        return {
            "q1": self.q1,
            "q2": self.q2,
            "gates": [gate.to_json() for gate in self.gates],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GateList":
        return cls(
            q1=int(doc["q1"]),
            q2=int(doc["q2"]),
            gates=tuple(Gate.from_json(g) for g in doc["gates"]),
        )


def compile_state_prep(qubo: QuboProblem, y: int) -> GateList:
    """Gate sequence preparing the threshold-shifted value encoding.

    Rotations for zero coefficients are omitted; every surviving
    coefficient contributes one rotation per value qubit.
    """
    q1, q2 = qubo.q1, qubo.q2
    mod = 1 << q2
    gates: list[Gate] = [Gate(KIND_H, (q,)) for q in range(q1 + q2)]

    def rotations(kind: str, controls: tuple[int, ...], coeff: int) -> None:
        for j in range(q2):
            units = (coeff << (q2 - 1 - j)) % mod
            gates.append(Gate(kind, (q1 + j,), controls, units))

    for r in range(q1):
        row = qubo.coefficients[r]
        for rp in range(r + 1, q1):
            coeff = row[rp - r]
            if coeff:
                rotations(KIND_CCR, (r, rp), coeff)
    for r in range(q1):
        coeff = qubo.coefficients[r][0]
        if coeff:
            rotations(KIND_CR, (r,), coeff)
    shift = qubo.constant - y
    if shift:
        rotations(KIND_R, (), shift)
    gates.append(Gate(KIND_IQFT, tuple(range(q1, q1 + q2))))
    return GateList(q1, q2, tuple(gates))


def state_prep_gate_counts(qubo: QuboProblem, y: int) -> dict[str, int]:
    """Closed-form gate tally for the preparation operator."""
    q1, q2 = qubo.q1, qubo.q2
    offdiag = sum(
        1
        for r in range(q1)
        for rp in range(r + 1, q1)
        if qubo.coefficients[r][rp - r]
    )
    diag = sum(1 for r in range(q1) if qubo.coefficients[r][0])
    const = 1 if qubo.constant - y else 0
    return {
        "H": q1 + q2,
        "R": q2 * const,
        "1-CR": q2 * diag,
        "2-CR": q2 * offdiag,
        "IQFT": 1,
    }


@lru_cache(maxsize=8)
def _fourier_matrix(k: int, sign: int) -> np.ndarray:
    size = 1 << k
    idx = np.arange(size)
    return np.exp(sign * 2j * pi * np.outer(idx, idx) / size) / sqrt(size)


def _apply_fourier(state: np.ndarray, targets: tuple[int, ...], sign: int) -> np.ndarray:
    n = state.ndim
    k = len(targets)
    if targets != tuple(range(n - k, n)):
        raise ParameterError("Fourier gates must act on the trailing qubits")
    if k > MAX_DENSE_FOURIER:
        raise ResourceLimitError(f"Fourier width {k} exceeds the dense limit")
    shape = state.shape
    flat = state.reshape(-1, 1 << k)
    # value register is most-significant-bit first, so the flattened axis
    # index equals the encoded integer
    out = flat @ _fourier_matrix(k, sign)
    return out.reshape(shape)


def _phase_index(n: int, qubits: tuple[int, ...]) -> tuple:
    idx: list = [slice(None)] * n
    for q in qubits:
        idx[q] = 1
    return tuple(idx)


def zero_state(n_qubits: int) -> np.ndarray:
    state = np.zeros((2,) * n_qubits, dtype=np.complex128)
    state[(0,) * n_qubits] = 1.0
    return state


def apply(
    circuit: GateList,
    state: np.ndarray | None = None,
    width_guard: bool = True,
    check_norm: bool = False,
) -> np.ndarray:
    """Run the gate sequence on `state` (default |0..0>) and return it."""
    n = circuit.n_qubits
    if width_guard and n > MAX_SIM_QUBITS:
        raise ResourceLimitError(
            f"{n} qubits exceed the simulation guard of {MAX_SIM_QUBITS}"
        )
    if state is None:
        state = zero_state(n)
    elif state.shape != (2,) * n:
        raise ParameterError("state shape does not match the qubit count")
    mod = 1 << circuit.q2
    for gate in circuit.gates:
        if gate.kind == KIND_H:
            view = np.moveaxis(state, gate.targets[0], 0)
            a0 = view[0].copy()
            view[0] = (a0 + view[1]) * _INV_SQRT2
            view[1] = (a0 - view[1]) * _INV_SQRT2
        elif gate.kind in (KIND_R, KIND_CR, KIND_CCR):
            phase = np.exp(2j * pi * gate.units / mod)
            state[_phase_index(n, gate.controls + gate.targets)] *= phase
        elif gate.kind == KIND_Z:
            state[_phase_index(n, gate.targets)] *= -1.0
        elif gate.kind == KIND_IQFT:
            state = _apply_fourier(state, gate.targets, -1)
        elif gate.kind == KIND_QFT:
            state = _apply_fourier(state, gate.targets, 1)
        elif gate.kind == KIND_DIFFUSION:
            state *= -1.0
            state[(0,) * n] *= -1.0
        else:
            raise ParameterError(f"unknown gate kind {gate.kind!r}")
    if check_norm:
        norm = float(np.vdot(state, state).real)
        if abs(norm - 1.0) > 1e-9:
            raise RuntimeError(f"state norm drifted to {norm}")
    return state


def oracle_gates(q1: int, q2: int) -> GateList:
    """Sign flip on negative encoded values: Z on the value register MSB."""
    return GateList(q1, q2, (Gate(KIND_Z, (q1,)),))


def diffusion_gates(q1: int, q2: int) -> GateList:
    """Reflection about the all-zeros basis state on every qubit."""
    return GateList(q1, q2, (Gate(KIND_DIFFUSION, tuple(range(q1 + q2))),))


def grover_iterate(
    prep: GateList,
    iterations: int,
    width_guard: bool = True,
) -> np.ndarray:
    """Prepare, amplify `iterations` times, and return the statevector."""
    if iterations < 0:
        raise ParameterError("iteration count must be >= 0")
    oracle = oracle_gates(prep.q1, prep.q2)
    inverse = prep.inverted()
    diffusion = diffusion_gates(prep.q1, prep.q2)
    state = apply(prep, None, width_guard)
    for _ in range(iterations):
        state = apply(oracle, state, width_guard)
        state = apply(inverse, state, width_guard)
        state = apply(diffusion, state, width_guard)
        state = apply(prep, state, width_guard)
    return state


def bit_reversed_indices(k: int) -> np.ndarray:
    """Index permutation between axis order and assignment bit masks."""
    out = np.zeros(1 << k, dtype=np.int64)
    for i in range(1 << k):
        rev = 0
        v = i
        for _ in range(k):
            rev = (rev << 1) | (v & 1)
            v >>= 1
        out[i] = rev
    return out


def measurement_distribution(state: np.ndarray, q1: int) -> np.ndarray:
    """Probability of each assignment mask after measuring the variables.

    Axis i of the state is qubit i, which carries assignment bit i; the
    flattened axis order is therefore bit-reversed relative to masks.
    """
    probs = np.abs(state.reshape(1 << q1, -1)) ** 2
    by_axis_order = probs.sum(axis=1)
    out = np.empty_like(by_axis_order)
    out[bit_reversed_indices(q1)] = by_axis_order
    return out


def value_register_distribution(state: np.ndarray, q1: int) -> np.ndarray:
    """Probability of each encoded value after measuring the value register."""
    probs = np.abs(state.reshape(1 << q1, -1)) ** 2
    return probs.sum(axis=0)
