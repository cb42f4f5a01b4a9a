"""Circuit intermediate representation, native-basis decomposition, slicing.

The native gate set of the hardware is {RX, RZ, H, CZ}. Everything else
supported at the front end (Paulis, S/T and daggers, RY, CX, SWAP) rewrites
into it; MEASURE and BARRIER pass through decomposition untouched and are
handled by the scheduler (MEASURE optionally timed, BARRIER a pure layering
fence).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

NATIVE_KINDS: frozenset["GateKind"]


class GateKind(Enum):
    # native
    RX = "rx"
    RZ = "rz"
    H = "h"
    CZ = "cz"
    # extended, rewritten by decompose()
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RY = "ry"
    CX = "cx"
    SWAP = "swap"
    # non-unitary / structural
    MEASURE = "measure"
    BARRIER = "barrier"

    @property
    def n_qubits(self) -> int | None:
        """Operand count; None for BARRIER (variadic)."""
        if self in (GateKind.CZ, GateKind.CX, GateKind.SWAP):
            return 2
        if self is GateKind.BARRIER:
            return None
        return 1

    @property
    def takes_angle(self) -> bool:
        return self in (GateKind.RX, GateKind.RY, GateKind.RZ)

    @property
    def is_native(self) -> bool:
        return self in NATIVE_KINDS


NATIVE_KINDS = frozenset({GateKind.RX, GateKind.RZ, GateKind.H, GateKind.CZ})

#: Kinds allowed to survive decomposition (native plus pass-throughs).
SCHEDULABLE_BASIS = NATIVE_KINDS | {GateKind.MEASURE, GateKind.BARRIER}


@dataclass(frozen=True)
class Gate:
    """One gate application: kind, operand qubits, optional angle (radians).

    BARRIER may span any number of distinct qubits; every other kind has a
    fixed operand count.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(self.qubits))
        expected = self.kind.n_qubits
        if expected is None:
            if len(self.qubits) < 1:
                raise ValueError("BARRIER needs at least one qubit")
        elif len(self.qubits) != expected:
            raise ValueError(
                f"{self.kind.name} takes {expected} qubit(s), got {self.qubits}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate operands in {self.kind.name}{self.qubits}")
        if self.kind.takes_angle:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind.name} needs a finite angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind.name} takes no angle")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind.n_qubits == 2


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``num_qubits`` virtual qubits."""

    num_qubits: int
    gates: tuple[Gate, ...]
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be >= 1, got {self.num_qubits}")
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(
                        f"qubit {q} out of range for {self.num_qubits}-qubit circuit"
                    )

    @property
    def is_native(self) -> bool:
        return all(g.kind in SCHEDULABLE_BASIS for g in self.gates)


@dataclass(frozen=True)
class SlicedCircuit:
    """A native circuit cut into ASAP layers of qubit-disjoint gates.

    ``layers[l]`` holds indices into ``circuit.gates``; concatenating the
    layers is a permutation of the gate list preserving per-qubit order.
    """

    circuit: Circuit
    layers: tuple[tuple[int, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.layers)


# Decomposition identities. Each entry maps an extended gate to its
# time-ordered native replacement; all verified against unitary_of up to
# global phase.
def _rewrite(g: Gate) -> list[Gate] | None:
    k, q, a = g.kind, g.qubits, g.angle
    pi = math.pi
    if k is GateKind.X:
        return [Gate(GateKind.RX, q, pi)]
    if k is GateKind.Y:
        return _rewrite_ry(q[0], pi)
    if k is GateKind.Z:
        return [Gate(GateKind.RZ, q, pi)]
    if k is GateKind.S:
        return [Gate(GateKind.RZ, q, pi / 2)]
    if k is GateKind.SDG:
        return [Gate(GateKind.RZ, q, -pi / 2)]
    if k is GateKind.T:
        return [Gate(GateKind.RZ, q, pi / 4)]
    if k is GateKind.TDG:
        return [Gate(GateKind.RZ, q, -pi / 4)]
    if k is GateKind.RY:
        return _rewrite_ry(q[0], a)
    if k is GateKind.CX:
        return _rewrite_cx(q[0], q[1])
    if k is GateKind.SWAP:
        return [
            Gate(GateKind.CX, (q[0], q[1])),
            Gate(GateKind.CX, (q[1], q[0])),
            Gate(GateKind.CX, (q[0], q[1])),
        ]
    return None


def _rewrite_ry(q: int, theta: float) -> list[Gate]:
    # RY(theta) = RZ(pi/2) RX(theta) RZ(-pi/2) as a matrix product, i.e.
    # RZ(-pi/2) is applied first in time.
    return [
        Gate(GateKind.RZ, (q,), -math.pi / 2),
        Gate(GateKind.RX, (q,), theta),
        Gate(GateKind.RZ, (q,), math.pi / 2),
    ]


def _rewrite_cx(control: int, target: int) -> list[Gate]:
    return [
        Gate(GateKind.H, (target,)),
        Gate(GateKind.CZ, (control, target)),
        Gate(GateKind.H, (target,)),
    ]


def decompose(c: Circuit) -> Circuit:
    """Rewrite every extended gate into {RX, RZ, H, CZ}.

    MEASURE and BARRIER pass through. Per-qubit gate order is preserved; no
    cancellation or optimization is attempted.
    """
    gates: list[Gate] = []
    for g in c.gates:
        pending = [g]
        while pending:
            cur = pending.pop(0)
            if cur.kind in SCHEDULABLE_BASIS:
                gates.append(cur)
                continue
            replacement = _rewrite(cur)
            if replacement is None:
                raise ValueError(f"no decomposition for {cur.kind.name}")
            pending = replacement + pending
    return Circuit(c.num_qubits, tuple(gates), c.name)


def slice_circuit(c: Circuit) -> SlicedCircuit:
    """Cut a native circuit into ASAP layers.

    Every gate lands in the earliest layer consistent with its operand
    dependencies. BARRIER joins its operands' frontiers into one fence and
    occupies a layer slot like any gate (the scheduler skips it).
    """
    if not c.is_native:
        raise ValueError("slice_circuit needs a native-basis circuit")
    level = [0] * c.num_qubits
    layers: list[list[int]] = []
    for idx, g in enumerate(c.gates):
        layer = max(level[q] for q in g.qubits)
        while len(layers) <= layer:
            layers.append([])
        layers[layer].append(idx)
        for q in g.qubits:
            level[q] = layer + 1
    return SlicedCircuit(c, tuple(tuple(layer) for layer in layers))


# Standard gate matrices for the 1-2 qubit unitary oracle. Qubit 0 is the
# most significant bit of the basis-state index.
def _matrix_1q(g: Gate) -> np.ndarray:
    k, a = g.kind, g.angle
    if k is GateKind.H:
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
    if k is GateKind.X:
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if k is GateKind.Y:
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    if k is GateKind.Z:
        return np.array([[1, 0], [0, -1]], dtype=complex)
    if k is GateKind.S:
        return np.array([[1, 0], [0, 1j]], dtype=complex)
    if k is GateKind.SDG:
        return np.array([[1, 0], [0, -1j]], dtype=complex)
    if k is GateKind.T:
        return np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex)
    if k is GateKind.TDG:
        return np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex)
    if k is GateKind.RX:
        c, s = math.cos(a / 2), math.sin(a / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if k is GateKind.RY:
        c, s = math.cos(a / 2), math.sin(a / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if k is GateKind.RZ:
        return np.array(
            [[np.exp(-1j * a / 2), 0], [0, np.exp(1j * a / 2)]], dtype=complex
        )
    raise ValueError(f"{k.name} has no unitary")


def _matrix_2q(g: Gate) -> np.ndarray:
    k = g.kind
    if k is GateKind.CZ:
        return np.diag([1, 1, 1, -1]).astype(complex)
    if k is GateKind.SWAP:
        m = np.eye(4, dtype=complex)
        m[[1, 2]] = m[[2, 1]]
        return m
    if k is GateKind.CX:
        control, target = g.qubits
        m = np.zeros((4, 4), dtype=complex)
        for basis in range(4):
            bits = [(basis >> 1) & 1, basis & 1]
            if bits[control]:
                bits[target] ^= 1
            m[(bits[0] << 1) | bits[1], basis] = 1
        return m
    raise ValueError(f"{k.name} has no unitary")


def unitary_of(gates: list[Gate] | tuple[Gate, ...], n: int) -> np.ndarray:
    """Ordered product of the standard unitaries of ``gates`` on n <= 2 qubits.

    Gates apply in list order (first gate acts first). MEASURE/BARRIER are
    rejected. Qubit 0 is the most significant index bit.
    """
    if n not in (1, 2):
        raise ValueError(f"unitary_of supports n in (1, 2), got {n}")
    dim = 2**n
    u = np.eye(dim, dtype=complex)
    eye = np.eye(2, dtype=complex)
    for g in gates:
        if g.kind in (GateKind.MEASURE, GateKind.BARRIER):
            raise ValueError(f"{g.kind.name} is not unitary")
        for q in g.qubits:
            if q >= n:
                raise ValueError(f"operand {q} out of range for n={n}")
        if g.is_two_qubit:
            m = _matrix_2q(g)
        else:
            m1 = _matrix_1q(g)
            if n == 1:
                m = m1
            else:
                m = np.kron(m1, eye) if g.qubits[0] == 0 else np.kron(eye, m1)
        u = m @ u
    return u


def phase_aligned_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max-norm distance between two matrices after global-phase alignment."""
    flat_a, flat_b = a.ravel(), b.ravel()
    k = int(np.argmax(np.abs(flat_a)))
    if abs(flat_a[k]) < 1e-14 or abs(flat_b[k]) < 1e-14:
        return float(np.max(np.abs(a - b)))
    phase = flat_b[k] / flat_a[k]
    phase /= abs(phase)
    return float(np.max(np.abs(a * phase - b)))
