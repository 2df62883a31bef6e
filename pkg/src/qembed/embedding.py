"""Trainable layered feature map x -> |x> = Phi(x, theta)|0...0>.

One layer = feature-encoding RX block, a ZZ entangler chain over
neighbouring qubits, and an RY block on every qubit; the feature block
is repeated once more after the last layer.  Qubits beyond n_features
are latent: they carry ZZ and RY gates but no feature rotation.

Parameter layout (ParamVector): per layer, the n_qubits-1 ZZ chain
angles in qubit order, then the n_qubits RY angles in qubit order;
layers concatenated.  A 1-qubit map has no entanglers, so one RY angle
per layer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .simulator import MAX_QUBITS, Circuit, Gate, GateOp, StateVector


@dataclass(frozen=True)
class EmbeddingSpec:
    n_qubits: int
    n_features: int
    n_layers: int

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        if not 1 <= self.n_features <= self.n_qubits:
            raise ValueError(
                f"n_features must be in [1, n_qubits={self.n_qubits}], got {self.n_features}"
            )
        if self.n_layers < 1:
            raise ValueError(f"n_layers must be >= 1, got {self.n_layers}")


def param_count(spec: EmbeddingSpec) -> int:
    """Number of trainable angles for the given geometry."""
    return spec.n_layers * (2 * spec.n_qubits - 1)


def _check_lengths(spec: EmbeddingSpec, theta: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    theta = np.asarray(theta, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if theta.shape != (param_count(spec),):
        raise ValueError(f"theta must have {param_count(spec)} entries, got {theta.shape}")
    if x.shape != (spec.n_features,):
        raise ValueError(f"x must have {spec.n_features} entries, got {x.shape}")
    if not np.all(np.isfinite(x)) or not np.all(np.isfinite(theta)):
        raise ValueError("theta and x must be finite")
    return theta, x


def build_circuit(spec: EmbeddingSpec, theta: np.ndarray, x: np.ndarray) -> Circuit:
    """Gate sequence of the full embedding circuit."""
    theta, x = _check_lengths(spec, theta, x)
    n = spec.n_qubits
    ops: list[GateOp] = []
    k = 0
    for _ in range(spec.n_layers):
        for q in range(spec.n_features):
            ops.append(GateOp(Gate.RX, (q,), float(x[q])))
        for q in range(n - 1):
            ops.append(GateOp(Gate.ZZ, (q, q + 1), float(theta[k])))
            k += 1
        for q in range(n):
            ops.append(GateOp(Gate.RY, (q,), float(theta[k])))
            k += 1
    for q in range(spec.n_features):
        ops.append(GateOp(Gate.RX, (q,), float(x[q])))
    return Circuit(n, tuple(ops))


def _embed_into(spec: EmbeddingSpec, theta: np.ndarray, x: np.ndarray, amps: np.ndarray) -> None:
    # Hot path: same gate order as build_circuit, without op objects.
    n = spec.n_qubits
    k = 0
    for _ in range(spec.n_layers):
        for q in range(spec.n_features):
            _kernels.rx(amps, n, q, x[q])
        for q in range(n - 1):
            _kernels.zz(amps, n, q, q + 1, theta[k])
            k += 1
        for q in range(n):
            _kernels.ry(amps, n, q, theta[k])
            k += 1
    for q in range(spec.n_features):
        _kernels.rx(amps, n, q, x[q])


def embed(spec: EmbeddingSpec, theta: np.ndarray, x: np.ndarray) -> StateVector:
    """Embedded state Phi(x, theta)|0...0>."""
    theta, x = _check_lengths(spec, theta, x)
    amps = np.zeros(2**spec.n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    _embed_into(spec, theta, x, amps)
    return StateVector(spec.n_qubits, amps)


def embed_batch(spec: EmbeddingSpec, theta: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Embed each row of xs; returns an (len(xs), 2**n_qubits) amplitude matrix."""
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    theta = np.asarray(theta, dtype=np.float64)
    if xs.shape[1] != spec.n_features:
        raise ValueError(f"rows must have {spec.n_features} features, got {xs.shape[1]}")
    if theta.shape != (param_count(spec),):
        raise ValueError(f"theta must have {param_count(spec)} entries, got {theta.shape}")
    out = np.zeros((xs.shape[0], 2**spec.n_qubits), dtype=np.complex128)
    out[:, 0] = 1.0
    for i in range(xs.shape[0]):
        _embed_into(spec, theta, xs[i], out[i])
    return out


def init_params(
    spec: EmbeddingSpec,
    seed: int | np.random.Generator | None,
    scale: float = 0.1,
) -> np.ndarray:
    """Near-identity start: angles drawn i.i.d. from Normal(0, scale^2)."""
    if scale <= 0:
        raise ValueError(f"scale must be > 0, got {scale}")
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, scale, size=param_count(spec))


def save_params(path: str | Path, spec: EmbeddingSpec, theta: np.ndarray) -> None:
    """Write the trained-parameter JSON interchange file."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (param_count(spec),):
        raise ValueError(f"theta must have {param_count(spec)} entries, got {theta.shape}")
    payload = {
        "n_qubits": spec.n_qubits,
        "n_features": spec.n_features,
        "n_layers": spec.n_layers,
        "theta": [float(t) for t in theta],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_params(path: str | Path) -> tuple[EmbeddingSpec, np.ndarray]:
    """Read a trained-parameter JSON file back into (spec, theta)."""
    payload = json.loads(Path(path).read_text())
    required = {"n_qubits", "n_features", "n_layers", "theta"}
    if set(payload) != required:
        raise ValueError(f"parameter file must have exactly the keys {sorted(required)}")
    spec = EmbeddingSpec(payload["n_qubits"], payload["n_features"], payload["n_layers"])
    theta = np.asarray(payload["theta"], dtype=np.float64)
    if theta.shape != (param_count(spec),):
        raise ValueError(
            f"theta length {theta.size} does not match the declared geometry ({param_count(spec)})"
        )
    return spec, theta
