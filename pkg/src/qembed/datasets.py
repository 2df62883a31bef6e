"""Toy dataset generators and the CSV interchange format.

CSV layout: header x1,...,xd,label with label in {-1, +1}.  Floats are
written with repr so a generate/write/read round trip is exact.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .training import Dataset


def gen_moons(n_per_class: int, noise_std: float, seed: int | None) -> Dataset:
    """Two interleaving half circles in the plane.

    Class +1 points are (cos t, sin t) and class -1 points are
    (1 - cos t, 0.5 - sin t) for t uniform in [0, pi], plus isotropic
    Gaussian noise of the given standard deviation.
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")
    if noise_std < 0:
        raise ValueError("noise_std must be >= 0")
    rng = np.random.default_rng(seed)
    t_pos = rng.uniform(0.0, np.pi, n_per_class)
    t_neg = rng.uniform(0.0, np.pi, n_per_class)
    pos = np.column_stack([np.cos(t_pos), np.sin(t_pos)])
    neg = np.column_stack([1.0 - np.cos(t_neg), 0.5 - np.sin(t_neg)])
    inputs = np.vstack([pos, neg])
    if noise_std > 0:
        inputs = inputs + rng.normal(0.0, noise_std, inputs.shape)
    labels = np.concatenate([np.ones(n_per_class, int), -np.ones(n_per_class, int)])
    return Dataset(inputs, labels)


def gen_bands1d(n_per_class: int, seed: int | None) -> Dataset:
    """Non-overlapping but not linearly separable 1-d intervals.

    Class -1 is uniform on [-0.5, 0.5]; class +1 is uniform on
    [-2, -1] union [1, 2], so no single threshold separates the classes.
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")
    rng = np.random.default_rng(seed)
    neg = rng.uniform(-0.5, 0.5, n_per_class)
    mags = rng.uniform(1.0, 2.0, n_per_class)
    signs = rng.choice([-1.0, 1.0], n_per_class)
    pos = mags * signs
    inputs = np.concatenate([pos, neg]).reshape(-1, 1)
    labels = np.concatenate([np.ones(n_per_class, int), -np.ones(n_per_class, int)])
    return Dataset(inputs, labels)


def save_dataset(path: str | Path, dataset: Dataset) -> None:
    d = dataset.n_features
    lines = [",".join([f"x{i + 1}" for i in range(d)] + ["label"])]
    for row, label in zip(dataset.inputs, dataset.labels):
        lines.append(",".join([repr(float(v)) for v in row] + [str(int(label))]))
    Path(path).write_text("\n".join(lines) + "\n")


def load_dataset(path: str | Path) -> Dataset:
    text = Path(path).read_text().strip()
    if not text:
        raise ValueError(f"dataset file {path} is empty")
    lines = text.splitlines()
    header = [c.strip() for c in lines[0].split(",")]
    if header[-1] != "label" or len(header) < 2:
        raise ValueError(f"dataset file {path} must have header x1,...,xd,label")
    d = len(header) - 1
    if header[:-1] != [f"x{i + 1}" for i in range(d)]:
        raise ValueError(f"dataset file {path} has unexpected feature columns {header[:-1]}")
    inputs, labels = [], []
    for ln, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != d + 1:
            raise ValueError(f"{path}:{ln}: expected {d + 1} columns, got {len(cells)}")
        inputs.append([float(c) for c in cells[:-1]])
        label = float(cells[-1])
        if label not in (-1.0, 1.0):
            raise ValueError(f"{path}:{ln}: label must be -1 or 1, got {cells[-1]}")
        labels.append(int(label))
    return Dataset(np.asarray(inputs), np.asarray(labels))


def standardize_features(
    train_inputs: np.ndarray, *apply_to: np.ndarray
) -> tuple[np.ndarray, ...]:
    """Per-feature zero-mean unit-std transform fit on the training split."""
    mean = train_inputs.mean(axis=0)
    std = train_inputs.std(axis=0)
    std = np.where(std < 1e-12, 1.0, std)
    return tuple((arr - mean) / std for arr in apply_to)
