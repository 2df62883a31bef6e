"""Embedding training: metric costs, gradients, optimizers, train loop.

The Hilbert-Schmidt cost is 1 - hs_distance/2 and the trace cost is
1 - trace_distance; both live in [0, 1] and shrink as the class
ensembles separate.  Hilbert-Schmidt gradients use the exact two-point
parameter-shift rule; the trace cost (and any shot-noisy cost) falls
back to central finite differences.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingSpec, embed_batch, init_params, param_count
from .metrics import trace_distance
from .simulator import DensityMatrix, StateVector

SHOT_MODE_FD_STEP = 0.1  # finite-difference step large enough to clear shot noise


class CostKind(enum.Enum):
    HILBERT_SCHMIDT = "hilbert-schmidt"
    TRACE_DISTANCE = "trace"


class OptimizerKind(enum.Enum):
    RMSPROP = "rmsprop"
    ADAGRAD = "adagrad"
    SGD = "sgd"


@dataclass(frozen=True)
class Dataset:
    """Feature rows plus +1/-1 labels."""

    inputs: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        inputs = np.atleast_2d(np.asarray(self.inputs, dtype=np.float64))
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "labels", labels)
        if inputs.shape[0] != labels.shape[0]:
            raise ValueError("inputs and labels must have the same length")
        if not np.all(np.isin(labels, (-1, 1))):
            raise ValueError("labels must be +1 or -1")
        if not (labels == 1).any() or not (labels == -1).any():
            raise ValueError("both labels must be present")

    @property
    def n_features(self) -> int:
        return self.inputs.shape[1]

    def class_inputs(self, label: int) -> np.ndarray:
        return self.inputs[self.labels == label]


@dataclass(frozen=True)
class TrainConfig:
    spec: EmbeddingSpec
    cost: CostKind = CostKind.HILBERT_SCHMIDT
    optimizer: OptimizerKind = OptimizerKind.RMSPROP
    learning_rate: float = 0.01
    batch_size: int = 2
    steps: int = 100
    seed: int = 0
    shots: int = 0
    init_scale: float = 0.1

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.shots < 0:
            raise ValueError("shots must be >= 0")
        if self.init_scale <= 0:
            raise ValueError("init_scale must be > 0")
        if self.shots > 0 and self.cost is CostKind.TRACE_DISTANCE:
            raise ValueError("the trace cost supports exact mode only (shots must be 0)")


@dataclass(frozen=True)
class TrainResult:
    theta_final: np.ndarray
    cost_history: tuple[tuple[int, float], ...]
    config: TrainConfig


def _mean_sq_gram(left: np.ndarray, right: np.ndarray) -> float:
    return float(np.mean(np.abs(left @ right.conj().T) ** 2))


def _sampled_mean_gram(
    left: np.ndarray, right: np.ndarray, shots: int, rng: np.random.Generator
) -> float:
    probs = np.clip(np.abs(left @ right.conj().T) ** 2, 0.0, 1.0)
    return float(np.mean(rng.binomial(shots, probs) / shots))


def hs_distance_of_batches(
    states_a: np.ndarray,
    states_b: np.ndarray,
    shots: int = 0,
    rng: np.random.Generator | None = None,
) -> float:
    """tr rho^2 + tr sigma^2 - 2 tr rho sigma from stacked state rows."""
    if shots == 0:
        taa = _mean_sq_gram(states_a, states_a)
        tbb = _mean_sq_gram(states_b, states_b)
        tab = _mean_sq_gram(states_a, states_b)
    else:
        rng = np.random.default_rng(rng)
        taa = _sampled_mean_gram(states_a, states_a, shots, rng)
        tbb = _sampled_mean_gram(states_b, states_b, shots, rng)
        tab = _sampled_mean_gram(states_a, states_b, shots, rng)
    return taa + tbb - 2.0 * tab


def _density_of_rows(rows: np.ndarray) -> DensityMatrix:
    mat = (rows.conj().T @ rows) / rows.shape[0]
    mat = 0.5 * (mat + mat.conj().T)
    return DensityMatrix(int(np.log2(rows.shape[1])), mat)


def cost(
    spec: EmbeddingSpec,
    theta: np.ndarray,
    batch_a: np.ndarray,
    batch_b: np.ndarray,
    kind: CostKind = CostKind.HILBERT_SCHMIDT,
    shots: int = 0,
    seed: int | np.random.Generator | None = None,
) -> float:
    """Separation cost of the embedding on two feature batches; in [0, 1]."""
    batch_a = np.atleast_2d(np.asarray(batch_a, dtype=np.float64))
    batch_b = np.atleast_2d(np.asarray(batch_b, dtype=np.float64))
    if batch_a.shape[0] == 0 or batch_b.shape[0] == 0:
        raise ValueError("both batches must be nonempty")
    if kind is CostKind.TRACE_DISTANCE and shots > 0:
        raise ValueError("the trace cost supports exact mode only (shots must be 0)")
    ua = embed_batch(spec, theta, batch_a)
    ub = embed_batch(spec, theta, batch_b)
    if kind is CostKind.HILBERT_SCHMIDT:
        rng = np.random.default_rng(seed) if shots > 0 else None
        return 1.0 - 0.5 * hs_distance_of_batches(ua, ub, shots, rng)
    return 1.0 - trace_distance(_density_of_rows(ua), _density_of_rows(ub))


def gradient_param_shift(
    spec: EmbeddingSpec,
    theta: np.ndarray,
    batch_a: np.ndarray,
    batch_b: np.ndarray,
) -> np.ndarray:
    """Exact gradient of the Hilbert-Schmidt cost via the two-point shift rule.

    Every overlap |<x(theta)|x'(theta)>|^2 is a single-frequency sinusoid
    in each gate angle, so d/d(angle) = (g(+pi/2) - g(-pi/2))/2 per gate
    occurrence; a parameter occurs once in each of the two circuits of an
    overlap.  Same-class Gram terms collapse the two occurrences into one
    shifted-row evaluation by symmetry of |<.|.>|^2.
    """
    theta = np.asarray(theta, dtype=np.float64)
    batch_a = np.atleast_2d(np.asarray(batch_a, dtype=np.float64))
    batch_b = np.atleast_2d(np.asarray(batch_b, dtype=np.float64))
    ua = embed_batch(spec, theta, batch_a)
    ub = embed_batch(spec, theta, batch_b)
    grad = np.zeros(param_count(spec))
    for i in range(theta.size):
        shifted = theta.copy()
        shifted[i] = theta[i] + 0.5 * np.pi
        ua_plus = embed_batch(spec, shifted, batch_a)
        ub_plus = embed_batch(spec, shifted, batch_b)
        shifted[i] = theta[i] - 0.5 * np.pi
        ua_minus = embed_batch(spec, shifted, batch_a)
        ub_minus = embed_batch(spec, shifted, batch_b)

        d_taa = _mean_sq_gram(ua_plus, ua) - _mean_sq_gram(ua_minus, ua)
        d_tbb = _mean_sq_gram(ub_plus, ub) - _mean_sq_gram(ub_minus, ub)
        d_tab = 0.5 * (
            _mean_sq_gram(ua_plus, ub)
            - _mean_sq_gram(ua_minus, ub)
            + _mean_sq_gram(ua, ub_plus)
            - _mean_sq_gram(ua, ub_minus)
        )
        grad[i] = -0.5 * (d_taa + d_tbb - 2.0 * d_tab)
    return grad


def gradient_finite_diff(
    spec: EmbeddingSpec,
    theta: np.ndarray,
    batch_a: np.ndarray,
    batch_b: np.ndarray,
    kind: CostKind = CostKind.HILBERT_SCHMIDT,
    h: float = 1e-4,
    shots: int = 0,
    seed: int | np.random.Generator | None = None,
) -> np.ndarray:
    """Central-difference gradient [C(theta+h e_i) - C(theta-h e_i)] / 2h.

    In shot mode both sides of each difference reuse one substream seed
    (common random numbers), which keeps the estimate usable at h well
    above the noise floor.
    """
    if h <= 0:
        raise ValueError("h must be > 0")
    theta = np.asarray(theta, dtype=np.float64)
    seeds = None
    if shots > 0:
        seeds = np.random.SeedSequence(
            np.random.default_rng(seed).integers(2**63)
        ).spawn(theta.size)
    grad = np.zeros(theta.size)
    for i in range(theta.size):
        shifted = theta.copy()
        shifted[i] = theta[i] + h
        up_seed = np.random.default_rng(seeds[i]) if seeds is not None else None
        c_up = cost(spec, shifted, batch_a, batch_b, kind, shots, up_seed)
        shifted[i] = theta[i] - h
        dn_seed = np.random.default_rng(seeds[i]) if seeds is not None else None
        c_dn = cost(spec, shifted, batch_a, batch_b, kind, shots, dn_seed)
        grad[i] = (c_up - c_dn) / (2.0 * h)
    return grad


@dataclass(frozen=True)
class OptimizerState:
    kind: OptimizerKind
    accumulator: np.ndarray | None

    @classmethod
    def initial(cls, kind: OptimizerKind, n_params: int) -> "OptimizerState":
        acc = None if kind is OptimizerKind.SGD else np.zeros(n_params)
        return cls(kind, acc)


def optimizer_step(
    state: OptimizerState,
    theta: np.ndarray,
    grad: np.ndarray,
    learning_rate: float,
) -> tuple[np.ndarray, OptimizerState]:
    """One update; returns (new theta, new optimizer state).

    RMSProp: v' = 0.99 v + 0.01 g^2,  theta' = theta - lr g / (sqrt(v') + 1e-8)
    Adagrad: G' = G + g^2,            theta' = theta - lr g / (sqrt(G') + 1e-8)
    SGD:                              theta' = theta - lr g
    """
    theta = np.asarray(theta, dtype=np.float64)
    grad = np.asarray(grad, dtype=np.float64)
    if theta.shape != grad.shape:
        raise ValueError("theta and gradient shapes differ")
    if state.kind is OptimizerKind.SGD:
        return theta - learning_rate * grad, state
    if state.accumulator is None or state.accumulator.shape != theta.shape:
        raise ValueError("optimizer state does not match the parameter vector")
    if state.kind is OptimizerKind.RMSPROP:
        acc = 0.99 * state.accumulator + 0.01 * grad**2
    else:
        acc = state.accumulator + grad**2
    new_theta = theta - learning_rate * grad / (np.sqrt(acc) + 1e-8)
    return new_theta, OptimizerState(state.kind, acc)


def train(dataset: Dataset, config: TrainConfig) -> TrainResult:
    """Stochastic training loop; fully reproducible from config.seed."""
    if dataset.n_features != config.spec.n_features:
        raise ValueError(
            f"dataset has {dataset.n_features} features, spec expects {config.spec.n_features}"
        )
    xa = dataset.class_inputs(1)
    xb = dataset.class_inputs(-1)
    if config.batch_size > min(len(xa), len(xb)):
        raise ValueError(
            f"batch_size {config.batch_size} exceeds the smaller class ({min(len(xa), len(xb))})"
        )

    init_ss, batch_ss, shot_ss = np.random.SeedSequence(config.seed).spawn(3)
    theta = init_params(config.spec, np.random.default_rng(init_ss), config.init_scale)
    batch_rng = np.random.default_rng(batch_ss)
    shot_rng = np.random.default_rng(shot_ss)
    opt_state = OptimizerState.initial(config.optimizer, theta.size)

    history: list[tuple[int, float]] = []
    for step in range(config.steps):
        batch_a = xa[batch_rng.choice(len(xa), size=config.batch_size, replace=False)]
        batch_b = xb[batch_rng.choice(len(xb), size=config.batch_size, replace=False)]
        if config.shots == 0:
            step_cost = cost(config.spec, theta, batch_a, batch_b, config.cost)
            if config.cost is CostKind.HILBERT_SCHMIDT:
                grad = gradient_param_shift(config.spec, theta, batch_a, batch_b)
            else:
                grad = gradient_finite_diff(config.spec, theta, batch_a, batch_b, config.cost)
        else:
            step_cost = cost(
                config.spec, theta, batch_a, batch_b, config.cost, config.shots, shot_rng
            )
            grad = gradient_finite_diff(
                config.spec,
                theta,
                batch_a,
                batch_b,
                config.cost,
                SHOT_MODE_FD_STEP,
                config.shots,
                shot_rng,
            )
        theta, opt_state = optimizer_step(opt_state, theta, grad, config.learning_rate)
        history.append((step, float(step_cost)))
    return TrainResult(theta, tuple(history), config)


def embedded_ensembles(spec: EmbeddingSpec, theta: np.ndarray, dataset: Dataset):
    """Embed a labelled dataset into per-class StateVector lists."""
    n = spec.n_qubits
    rows_a = embed_batch(spec, theta, dataset.class_inputs(1))
    rows_b = embed_batch(spec, theta, dataset.class_inputs(-1))
    states_a = [StateVector(n, row) for row in rows_a]
    states_b = [StateVector(n, row) for row in rows_b]
    return states_a, states_b
