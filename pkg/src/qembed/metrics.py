"""Distances and overlap estimators between embedded states and ensembles.

Exact quantities come straight from the statevectors / density matrices;
the SWAP and inversion tests are the shot-based routes to the same
overlaps.  Distance conventions:

    hs_distance(rho, sigma)    = tr((rho-sigma)^2)        in [0, 2]
    trace_distance(rho, sigma) = (1/2) tr|rho-sigma|      in [0, 1]

Note hs_distance carries no square root; it is the squared
Frobenius/Hilbert-Schmidt norm of rho-sigma.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embedding import EmbeddingSpec, build_circuit, embed
from .simulator import (
    DensityMatrix,
    Gate,
    GateOp,
    StateVector,
    adjoint,
    apply,
    apply_ops_inplace,
    qubit_z_probability,
)

EIG_CUTOFF = 1e-10  # numerical-rank threshold used everywhere ranks matter


@dataclass(frozen=True)
class OverlapEstimate:
    """A fidelity estimate in [0, 1]; shots == 0 means exact (stderr 0)."""

    value: float
    shots: int
    stderr: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"overlap must lie in [0, 1], got {self.value}")
        if self.stderr < 0.0:
            raise ValueError("stderr must be >= 0")
        if self.shots == 0 and self.stderr != 0.0:
            raise ValueError("exact estimates carry stderr 0")


def _check_same_qubits(psi: StateVector, phi: StateVector) -> None:
    if psi.n_qubits != phi.n_qubits:
        raise ValueError(f"qubit counts differ: {psi.n_qubits} vs {phi.n_qubits}")


def overlap_exact(psi: StateVector, phi: StateVector) -> float:
    """|<psi|phi>|^2."""
    _check_same_qubits(psi, phi)
    val = abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2
    return min(max(float(val), 0.0), 1.0)


def swap_test(
    psi: StateVector,
    phi: StateVector,
    shots: int,
    seed: int | np.random.Generator | None,
) -> OverlapEstimate:
    """Ancilla-based overlap estimate on 2n+1 qubits.

    The circuit is H(ancilla), a controlled SWAP per qubit pair, H(ancilla);
    the ancilla-0 probability is (1 + F)/2, so F_hat = 2 n0/shots - 1,
    clamped to [0, 1].  The reported stderr is the binomial error of the
    ancilla counts propagated through that map, 2*sqrt(p0(1-p0)/shots).
    """
    _check_same_qubits(psi, phi)
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    state = swap_test_statevector(psi, phi)
    p0 = qubit_z_probability(state, 0)
    rng = np.random.default_rng(seed)
    n0 = int(rng.binomial(shots, p0))
    p_hat = n0 / shots
    f_hat = min(max(2.0 * p_hat - 1.0, 0.0), 1.0)
    stderr = 2.0 * float(np.sqrt(p_hat * (1.0 - p_hat) / shots))
    return OverlapEstimate(f_hat, shots, stderr)


def swap_test_statevector(psi: StateVector, phi: StateVector) -> StateVector:
    """Exact post-circuit state of the SWAP test; ancilla is qubit 0."""
    _check_same_qubits(psi, phi)
    n = psi.n_qubits
    total = 2 * n + 1
    amps = np.kron(
        np.array([1.0, 0.0], dtype=np.complex128),
        np.kron(psi.amplitudes, phi.amplitudes),
    )
    ops = [GateOp(Gate.H, (0,))]
    ops += [GateOp(Gate.CSWAP, (0, 1 + i, 1 + n + i)) for i in range(n)]
    ops.append(GateOp(Gate.H, (0,)))
    apply_ops_inplace(amps, total, ops)
    return StateVector(total, amps)


def inversion_test(
    spec: EmbeddingSpec,
    theta: np.ndarray,
    x: np.ndarray,
    x_prime: np.ndarray,
    shots: int,
    seed: int | np.random.Generator | None = None,
) -> OverlapEstimate:
    """Overlap of two embedded inputs via Phi(x')^dagger Phi(x) |0...0>.

    The all-zeros outcome occurs with probability |<x'|x>|^2, so its
    empirical frequency estimates the overlap with stderr
    sqrt(F_hat(1-F_hat)/shots).  shots == 0 returns the exact value.
    """
    if shots < 0:
        raise ValueError(f"shots must be >= 0, got {shots}")
    state = apply(adjoint(build_circuit(spec, theta, x_prime)), embed(spec, theta, x))
    p = min(max(float(abs(state.amplitudes[0]) ** 2), 0.0), 1.0)
    if shots == 0:
        return OverlapEstimate(p, 0, 0.0)
    rng = np.random.default_rng(seed)
    hits = int(rng.binomial(shots, p))
    f_hat = hits / shots
    stderr = float(np.sqrt(f_hat * (1.0 - f_hat) / shots))
    return OverlapEstimate(f_hat, shots, stderr)


def sampled_overlap(
    psi: StateVector,
    phi: StateVector,
    shots: int,
    rng: np.random.Generator,
) -> float:
    """Shot-noise model of an inversion test between two prepared states.

    Counting the all-zeros outcome of the inversion circuit is a
    Bernoulli(|<psi|phi>|^2) experiment, so the estimate is binomial.
    """
    p = overlap_exact(psi, phi)
    return int(rng.binomial(shots, p)) / shots


def hs_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """tr((rho-sigma)^2), the squared HS norm of the difference."""
    if rho.n_qubits != sigma.n_qubits:
        raise ValueError("dimension mismatch")
    diff = rho.entries - sigma.entries
    # Hermitian diff: tr(diff^2) equals the squared Frobenius norm.
    return float(np.sum(np.abs(diff) ** 2))


def hs_distance_from_overlaps(
    states_a: Sequence[StateVector],
    states_b: Sequence[StateVector],
    shots: int = 0,
    seed: int | np.random.Generator | None = None,
) -> float:
    """HS distance assembled from pairwise overlaps.

    tr rho^2, tr sigma^2 and tr rho sigma are averages of |<.|.>|^2 over
    ordered same-class and cross-class pairs.  With shots > 0 every
    overlap is estimated from its own shot batch; with shots == 0 the
    result equals hs_distance of the assembled density matrices.
    """
    if len(states_a) == 0 or len(states_b) == 0:
        raise ValueError("both classes must be nonempty")
    rng = np.random.default_rng(seed)

    def term(left, right):
        total = 0.0
        for s in left:
            for t in right:
                if shots == 0:
                    total += overlap_exact(s, t)
                else:
                    total += sampled_overlap(s, t, shots, rng)
        return total / (len(left) * len(right))

    return term(states_a, states_a) + term(states_b, states_b) - 2.0 * term(states_a, states_b)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(1/2) sum |eigenvalues of rho - sigma|."""
    if rho.n_qubits != sigma.n_qubits:
        raise ValueError("dimension mismatch")
    eigs = np.linalg.eigvalsh(rho.entries - sigma.entries)
    return float(0.5 * np.sum(np.abs(eigs)))


def purity(rho: DensityMatrix) -> float:
    """tr rho^2; 1 for pure states, 2**-n for the maximally mixed state."""
    return float(np.sum(np.abs(rho.entries) ** 2))


def numerical_rank(rho: DensityMatrix) -> int:
    """Number of eigenvalues above EIG_CUTOFF."""
    return int(np.sum(np.linalg.eigvalsh(rho.entries) > EIG_CUTOFF))


def _swap_operator(dim: int) -> np.ndarray:
    s = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for i in range(dim):
        for j in range(dim):
            s[i * dim + j, j * dim + i] = 1.0
    return s


def _partial_swap(eta: np.ndarray, aux: np.ndarray, delta: float) -> np.ndarray:
    """tr_env[ e^{-i delta S} (eta (x) aux) e^{+i delta S} ] for swap S."""
    dim = eta.shape[0]
    s = _swap_operator(dim)
    u = np.cos(delta) * np.eye(dim * dim, dtype=np.complex128) - 1j * np.sin(delta) * s
    big = u @ np.kron(eta, aux) @ u.conj().T
    return big.reshape(dim, dim, dim, dim).trace(axis1=1, axis2=3)


def dme_trotter_step(
    eta: DensityMatrix,
    rho: DensityMatrix,
    sigma: DensityMatrix,
    delta: float,
) -> DensityMatrix:
    """One density-matrix-exponentiation step toward e^{-i delta (rho-sigma)}.

    Two partial swaps: forward by delta with a fresh copy of rho, then
    backward with a copy of sigma.  The result approximates conjugation
    of eta by e^{-i delta (rho-sigma)} up to O(delta^2).
    """
    if not (eta.n_qubits == rho.n_qubits == sigma.n_qubits):
        raise ValueError("dimension mismatch")
    if abs(delta) > 1.0:
        raise ValueError(f"|delta| must be <= 1, got {delta}")
    step1 = _partial_swap(eta.entries, rho.entries, delta)
    step2 = _partial_swap(step1, sigma.entries, -delta)
    # Re-hermitize rounding noise so the invariants hold exactly.
    step2 = 0.5 * (step2 + step2.conj().T)
    return DensityMatrix(eta.n_qubits, step2)
