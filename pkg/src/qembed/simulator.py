"""Dense statevector and density-matrix simulation of a small gate set.

Conventions, fixed once for the whole package:

* Basis indices are big-endian: qubit 0 is the most significant bit of
  the index, so |q0 q1 ... q_{n-1}> has index sum(q_i * 2**(n-1-i)).
* Rotations use the generator-halved form RX(a) = exp(-i a X/2),
  RY(a) = exp(-i a Y/2) and ZZ(a) = exp(-i a Z(x)Z/2); ZZ is diagonal
  with entries exp(-i a/2) where the two bits agree and exp(+i a/2)
  where they differ.

Simulation is dense; MAX_QUBITS caps register width at 12.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

MAX_QUBITS = 12

_NORM_TOL = 1e-10
_HERM_TOL = 1e-10
_TRACE_TOL = 1e-10
_PSD_TOL = 1e-10


class Gate(enum.Enum):
    RX = "rx"
    RY = "ry"
    ZZ = "zz"
    H = "h"
    CSWAP = "cswap"


_GATE_ARITY = {Gate.RX: 1, Gate.RY: 1, Gate.H: 1, Gate.ZZ: 2, Gate.CSWAP: 3}
_GATE_HAS_ANGLE = {Gate.RX: True, Gate.RY: True, Gate.ZZ: True, Gate.H: False, Gate.CSWAP: False}


@dataclass(frozen=True)
class GateOp:
    """A single gate application: kind, target qubits, optional angle."""

    kind: Gate
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        arity = _GATE_ARITY[self.kind]
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind.value} takes {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate target qubits in {self.kind.value}{self.qubits}")
        if _GATE_HAS_ANGLE[self.kind]:
            if self.angle is None:
                raise ValueError(f"{self.kind.value} requires an angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind.value} takes no angle")


@dataclass(frozen=True)
class Circuit:
    """An ordered gate sequence on a fixed-width register."""

    n_qubits: int
    ops: tuple[GateOp, ...] = ()

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            if any(q < 0 or q >= self.n_qubits for q in op.qubits):
                raise ValueError(f"qubit index out of range in {op} for {self.n_qubits} qubits")


@dataclass(frozen=True)
class StateVector:
    """A normalized pure state on n_qubits qubits."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (2**self.n_qubits,):
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} qubits, got {amps.shape}"
            )
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValueError(f"state not normalized: sum |a|^2 = {norm_sq!r}")


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, PSD, unit-trace operator on n_qubits qubits."""

    n_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        mat = np.ascontiguousarray(self.entries, dtype=np.complex128)
        object.__setattr__(self, "entries", mat)
        dim = 2**self.n_qubits
        if mat.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > _HERM_TOL:
            raise ValueError("matrix is not Hermitian")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ValueError(f"trace must be 1, got {tr!r}")
        if float(np.min(np.linalg.eigvalsh(mat))) < -_PSD_TOL:
            raise ValueError("matrix has a negative eigenvalue")


def zero_state(n_qubits: int) -> StateVector:
    """|0...0> on n_qubits qubits."""
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def basis_state(n_qubits: int, index: int) -> StateVector:
    """The computational basis state with the given big-endian index."""
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


def gate_matrix(op: GateOp) -> np.ndarray:
    """Dense unitary of a single gate (2x2, 4x4 or 8x8)."""
    if op.kind is Gate.RX:
        c, s = math.cos(0.5 * op.angle), math.sin(0.5 * op.angle)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if op.kind is Gate.RY:
        c, s = math.cos(0.5 * op.angle), math.sin(0.5 * op.angle)
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if op.kind is Gate.ZZ:
        e = np.exp(-0.5j * op.angle)
        return np.diag([e, e.conjugate(), e.conjugate(), e]).astype(np.complex128)
    if op.kind is Gate.H:
        return np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2.0)
    # CSWAP: control is the first qubit; |101> <-> |110>
    mat = np.eye(8, dtype=np.complex128)
    mat[[5, 6]] = mat[[6, 5]]
    return mat


def apply_ops_inplace(amps: np.ndarray, n_qubits: int, ops: Iterable[GateOp]) -> None:
    """Apply gates in order to a raw amplitude buffer (mutates it)."""
    for op in ops:
        kind = op.kind
        if kind is Gate.RX:
            _kernels.rx(amps, n_qubits, op.qubits[0], op.angle)
        elif kind is Gate.RY:
            _kernels.ry(amps, n_qubits, op.qubits[0], op.angle)
        elif kind is Gate.ZZ:
            _kernels.zz(amps, n_qubits, op.qubits[0], op.qubits[1], op.angle)
        elif kind is Gate.H:
            _kernels.h(amps, n_qubits, op.qubits[0])
        else:
            _kernels.cswap(amps, n_qubits, op.qubits[0], op.qubits[1], op.qubits[2])


def apply(circuit: Circuit, state: StateVector) -> StateVector:
    """Run the circuit on the state and return the new state."""
    if circuit.n_qubits != state.n_qubits:
        raise ValueError(
            f"circuit acts on {circuit.n_qubits} qubits but state has {state.n_qubits}"
        )
    amps = state.amplitudes.copy()
    apply_ops_inplace(amps, circuit.n_qubits, circuit.ops)
    return StateVector(circuit.n_qubits, amps)


def adjoint(circuit: Circuit) -> Circuit:
    """Inverse circuit: reversed order, rotation angles negated."""
    inv = []
    for op in reversed(circuit.ops):
        if _GATE_HAS_ANGLE[op.kind]:
            inv.append(GateOp(op.kind, op.qubits, -op.angle))
        else:
            inv.append(op)
    return Circuit(circuit.n_qubits, tuple(inv))


def density_from_states(states: Sequence[StateVector]) -> DensityMatrix:
    """Uniform mixture (1/M) sum_i |psi_i><psi_i| of the given pure states."""
    if len(states) == 0:
        raise ValueError("need at least one state")
    n = states[0].n_qubits
    if any(s.n_qubits != n for s in states):
        raise ValueError("all states must have the same qubit count")
    dim = 2**n
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for s in states:
        mat += np.outer(s.amplitudes, s.amplitudes.conj())
    mat /= len(states)
    return DensityMatrix(n, mat)


def qubit_z_probability(state: StateVector, qubit: int) -> float:
    """Probability of measuring the qubit in |0>, marginalized over the rest."""
    if not 0 <= qubit < state.n_qubits:
        raise ValueError(f"qubit {qubit} out of range for {state.n_qubits} qubits")
    probs = np.abs(state.amplitudes) ** 2
    view = probs.reshape((2,) * state.n_qubits)
    p0 = float(np.take(view, 0, axis=qubit).sum())
    return min(max(p0, 0.0), 1.0)


def sample_qubit_z(
    state: StateVector,
    qubit: int,
    shots: int,
    seed: int | np.random.Generator | None,
) -> tuple[int, int]:
    """Sample a single-qubit Z measurement; returns (n0, n1) with n0+n1=shots."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p0 = qubit_z_probability(state, qubit)
    rng = np.random.default_rng(seed)
    n0 = int(rng.binomial(shots, p0))
    return n0, shots - n0
