"""Fidelity and Helstrom classifiers over class ensembles.

Score conventions: class A carries label +1 and is described by rho,
class B carries label -1 and is described by sigma.

    fidelity         <x| rho - sigma |x>
    helstrom-global  <x| P+ - P- |x> with P+/- projecting onto the
                     strictly positive / negative eigenspaces of rho-sigma
    helstrom-pairwise  mean over (a, b) pairs of the sign-only score of
                       |a><a| - |b><b|

All three land in [-1, 1]; thresholding at tau (default 0, ties to +1)
turns a score into a label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .metrics import purity, sampled_overlap
from .simulator import DensityMatrix, StateVector, density_from_states

EIG_SIGN_TOL = 1e-12  # eigenvalues within this of 0 join neither projector


@dataclass(frozen=True)
class ClassEnsembles:
    """Embedded training states of both classes and their density matrices."""

    states_a: tuple[StateVector, ...]
    states_b: tuple[StateVector, ...]
    rho: DensityMatrix
    sigma: DensityMatrix

    def __post_init__(self):
        object.__setattr__(self, "states_a", tuple(self.states_a))
        object.__setattr__(self, "states_b", tuple(self.states_b))
        if not self.states_a or not self.states_b:
            raise ValueError("both classes must be nonempty")
        n = self.states_a[0].n_qubits
        if any(s.n_qubits != n for s in self.states_a + self.states_b):
            raise ValueError("all states must share one qubit count")
        if self.rho.n_qubits != n or self.sigma.n_qubits != n:
            raise ValueError("density matrices must match the states' qubit count")
        for mat, states in ((self.rho, self.states_a), (self.sigma, self.states_b)):
            if np.max(np.abs(mat.entries - density_from_states(states).entries)) > 1e-10:
                raise ValueError("density matrix does not match its states")

    @classmethod
    def from_states(
        cls, states_a: Sequence[StateVector], states_b: Sequence[StateVector]
    ) -> "ClassEnsembles":
        return cls(
            tuple(states_a),
            tuple(states_b),
            density_from_states(states_a),
            density_from_states(states_b),
        )

    @property
    def n_qubits(self) -> int:
        return self.states_a[0].n_qubits


@dataclass(frozen=True)
class Prediction:
    score: float
    label: int
    threshold: float = 0.0

    def __post_init__(self):
        if self.label not in (-1, 1):
            raise ValueError(f"label must be +1 or -1, got {self.label}")
        if (self.score >= self.threshold) != (self.label == 1):
            raise ValueError("label inconsistent with the threshold rule")


def _check_input(x_state: StateVector, ensembles: ClassEnsembles) -> None:
    if x_state.n_qubits != ensembles.n_qubits:
        raise ValueError(
            f"input has {x_state.n_qubits} qubits, ensembles have {ensembles.n_qubits}"
        )


def fidelity_score(
    x_state: StateVector,
    ensembles: ClassEnsembles,
    shots: int = 0,
    seed: int | np.random.Generator | None = None,
) -> float:
    """Mean overlap with class A states minus mean overlap with class B.

    Equals <x|rho - sigma|x>.  With shots > 0 every overlap is estimated
    from its own shot batch, as the SWAP / inversion tests would.
    """
    _check_input(x_state, ensembles)
    x = x_state.amplitudes
    if shots == 0:
        pa = float(np.mean([abs(np.vdot(a.amplitudes, x)) ** 2 for a in ensembles.states_a]))
        pb = float(np.mean([abs(np.vdot(b.amplitudes, x)) ** 2 for b in ensembles.states_b]))
    else:
        rng = np.random.default_rng(seed)
        pa = float(np.mean([sampled_overlap(a, x_state, shots, rng) for a in ensembles.states_a]))
        pb = float(np.mean([sampled_overlap(b, x_state, shots, rng) for b in ensembles.states_b]))
    return pa - pb


def helstrom_global_score(x_state: StateVector, ensembles: ClassEnsembles) -> float:
    """<x| P+ - P- |x> from the eigendecomposition of rho - sigma."""
    _check_input(x_state, ensembles)
    eigvals, eigvecs = np.linalg.eigh(ensembles.rho.entries - ensembles.sigma.entries)
    weights = np.abs(eigvecs.conj().T @ x_state.amplitudes) ** 2
    pos = float(np.sum(weights[eigvals > EIG_SIGN_TOL]))
    neg = float(np.sum(weights[eigvals < -EIG_SIGN_TOL]))
    return pos - neg


def _pair_sign_score(a: np.ndarray, b: np.ndarray, x: np.ndarray) -> float:
    """Sign-only score of m = |a><a| - |b><b| for one pure pair.

    m is rank <= 2 and traceless, so it is diagonalized inside
    span{a, b}; work in that 2-d basis for numerical robustness.
    """
    c = np.vdot(a, b)
    overlap = min(abs(c) ** 2, 1.0)
    if 1.0 - abs(c) <= 1e-12:
        return 0.0  # identical states up to phase: m = 0
    s = float(np.sqrt(1.0 - overlap))
    e2 = (b - c * a) / s
    # In the {a, e2} basis: a = (1, 0), b = (c, s).
    m2 = np.array([[1.0 - overlap, -c * s], [-np.conj(c) * s, -(s * s)]], dtype=np.complex128)
    eigvals, eigvecs = np.linalg.eigh(m2)  # ascending: (-lam, +lam)
    t = np.array([np.vdot(a, x), np.vdot(e2, x)])
    weights = np.abs(eigvecs.conj().T @ t) ** 2
    return float(weights[1] - weights[0])


def helstrom_pairwise_score(x_state: StateVector, ensembles: ClassEnsembles) -> float:
    """Average of per-pair sign scores over all (a, b) training pairs."""
    _check_input(x_state, ensembles)
    x = x_state.amplitudes
    total = 0.0
    for a in ensembles.states_a:
        for b in ensembles.states_b:
            total += _pair_sign_score(a.amplitudes, b.amplitudes, x)
    return total / (len(ensembles.states_a) * len(ensembles.states_b))


def predict(score: float, threshold: float = 0.0) -> Prediction:
    """Threshold rule: label +1 iff score >= threshold."""
    return Prediction(score, 1 if score >= threshold else -1, threshold)


def empirical_risk(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Linear-loss risk -E[f(x) y] under the uniform class ensembles.

    Scores are averaged per class (each class weighted as its ensemble,
    not by sample count), which makes the risk of the fidelity
    classifier on its own training set equal -hs_distance(rho, sigma)
    and that of the global Helstrom classifier -2*trace_distance.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1 or scores.size < 1:
        raise ValueError("scores and labels must be equal-length nonempty vectors")
    if not np.all(np.isin(labels, (-1, 1))):
        raise ValueError("labels must be +1 or -1")
    pos = labels == 1
    if not pos.any() or pos.all():
        raise ValueError("both labels must be present")
    return -(float(np.mean(scores[pos])) - float(np.mean(scores[~pos])))


def required_shots(ensembles: ClassEnsembles) -> int:
    """Smallest S with sqrt(p(1-p)/S) < p - q for p = tr rho^2, q = tr rho sigma."""
    p = purity(ensembles.rho)
    q = float(np.real(np.trace(ensembles.rho.entries @ ensembles.sigma.entries)))
    if p <= q:
        raise ValueError(
            f"tr rho^2 = {p:.6f} <= tr rho sigma = {q:.6f}: embedding does not separate the classes"
        )
    return int(np.ceil(p * (1.0 - p) / (p - q) ** 2)) + 1
