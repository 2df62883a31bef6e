"""Command-line front end: dataset generation, training, evaluation,
decision-boundary export and the device-capacity estimate.

Exit codes: 0 success, 1 user error (bad arguments, files, config),
2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import classifiers, datasets, embedding, metrics, training
from .simulator import MAX_QUBITS, StateVector

CLASSIFIER_NAMES = ("fidelity", "helstrom-global", "helstrom-pairwise")


class UserError(Exception):
    """Invalid input from the user; reported on stderr with exit code 1."""


@dataclass(frozen=True)
class CapacityParams:
    bandwidth_hz: float
    coherence_s: float
    n_qubits: int
    bits_per_sample: int

    def __post_init__(self):
        if self.bandwidth_hz <= 0 or self.coherence_s <= 0:
            raise ValueError("bandwidth and coherence time must be > 0")
        if self.n_qubits < 1 or self.bits_per_sample < 1:
            raise ValueError("qubit and bit counts must be >= 1")


def capacity(params: CapacityParams) -> float:
    """Classical bits loadable within the coherence time: 2 * bandwidth * t * n * b."""
    return 2.0 * params.bandwidth_hz * params.coherence_s * params.n_qubits * params.bits_per_sample


# ---------------------------------------------------------------------------
# run-config files

_CONFIG_KEYS = {
    "n_qubits": (int, None),
    "n_features": (int, None),
    "n_layers": (int, None),
    "dataset": (str, None),
    "output_dir": (str, None),
    "steps": (int, None),
    "cost": (str, "hilbert-schmidt"),
    "optimizer": (str, "rmsprop"),
    "learning_rate": (float, 0.01),
    "batch_size": (int, 2),
    "seed": (int, 0),
    "shots": (int, 0),
    "init_scale": (float, 0.1),
    "classifier": (str, "fidelity"),
    "standardize": (bool, False),
}


def load_run_config(path: str | Path) -> dict:
    """Parse and validate a run-config JSON file; paths resolve against it."""
    path = Path(path)
    if not path.is_file():
        raise UserError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise UserError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UserError(f"config file {path} must hold a JSON object")
    unknown = set(raw) - set(_CONFIG_KEYS)
    if unknown:
        raise UserError(f"unknown config keys in {path}: {sorted(unknown)}")
    cfg = {}
    for key, (typ, default) in _CONFIG_KEYS.items():
        if key in raw:
            value = raw[key]
            if typ is float and isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
            if not isinstance(value, typ) or isinstance(value, bool) != (typ is bool):
                raise UserError(f"config key {key!r} must be of type {typ.__name__}")
            cfg[key] = value
        elif default is None:
            raise UserError(f"config file {path} is missing required key {key!r}")
        else:
            cfg[key] = default
    if cfg["n_qubits"] > MAX_QUBITS:
        raise UserError(f"n_qubits must be <= {MAX_QUBITS} (dense simulator cap)")
    if cfg["classifier"] not in CLASSIFIER_NAMES:
        raise UserError(f"classifier must be one of {CLASSIFIER_NAMES}")
    cfg["dataset"] = (path.parent / cfg["dataset"]).resolve()
    cfg["output_dir"] = (path.parent / cfg["output_dir"]).resolve()
    return cfg


def _parse_cost(name: str) -> training.CostKind:
    for kind in training.CostKind:
        if kind.value == name:
            return kind
    raise UserError(f"cost must be one of {[k.value for k in training.CostKind]}, got {name!r}")


def _parse_optimizer(name: str) -> training.OptimizerKind:
    for kind in training.OptimizerKind:
        if kind.value == name:
            return kind
    raise UserError(
        f"optimizer must be one of {[k.value for k in training.OptimizerKind]}, got {name!r}"
    )


def _load_dataset(path: Path) -> training.Dataset:
    if not Path(path).is_file():
        raise UserError(f"dataset file not found: {path}")
    try:
        return datasets.load_dataset(path)
    except ValueError as exc:
        raise UserError(str(exc)) from exc


def _load_theta(path: str) -> tuple[embedding.EmbeddingSpec, np.ndarray]:
    if not Path(path).is_file():
        raise UserError(f"parameter file not found: {path}")
    try:
        return embedding.load_params(path)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UserError(f"cannot read parameter file {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands

def cmd_gen_data(args: argparse.Namespace) -> int:
    if args.kind == "moons":
        ds = datasets.gen_moons(args.n, args.noise, args.seed)
    else:  # bands1d is 1-d by construction; --noise does not apply
        ds = datasets.gen_bands1d(args.n, args.seed)
    datasets.save_dataset(args.out, ds)
    print(f"wrote {2 * args.n} rows to {args.out}")
    return 0


def cmd_train(config_path: str) -> int:
    cfg = load_run_config(config_path)
    dataset = _load_dataset(cfg["dataset"])
    spec = embedding.EmbeddingSpec(cfg["n_qubits"], cfg["n_features"], cfg["n_layers"])
    if dataset.n_features != spec.n_features:
        raise UserError(
            f"dataset {cfg['dataset']} has {dataset.n_features} features, config expects {spec.n_features}"
        )
    if cfg["standardize"]:
        (inputs,) = datasets.standardize_features(dataset.inputs, dataset.inputs)
        dataset = training.Dataset(inputs, dataset.labels)
    try:
        config = training.TrainConfig(
            spec=spec,
            cost=_parse_cost(cfg["cost"]),
            optimizer=_parse_optimizer(cfg["optimizer"]),
            learning_rate=cfg["learning_rate"],
            batch_size=cfg["batch_size"],
            steps=cfg["steps"],
            seed=cfg["seed"],
            shots=cfg["shots"],
            init_scale=cfg["init_scale"],
        )
        result = training.train(dataset, config)
    except ValueError as exc:
        raise UserError(str(exc)) from exc

    out_dir = Path(cfg["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    embedding.save_params(out_dir / "theta.json", spec, result.theta_final)
    history_lines = ["step,cost"] + [f"{s},{repr(c)}" for s, c in result.cost_history]
    (out_dir / "history.csv").write_text("\n".join(history_lines) + "\n")
    print(f"final cost: {result.cost_history[-1][1]!r}")
    print(f"wrote {out_dir / 'theta.json'} and {out_dir / 'history.csv'}")
    return 0


def _score_states(kind, x_states, ensembles, shots, seed):
    if kind != "fidelity" and shots > 0:
        raise UserError("--shots applies to the fidelity classifier only")
    rng = np.random.default_rng(seed)
    scores = []
    for state in x_states:
        if kind == "fidelity":
            scores.append(classifiers.fidelity_score(state, ensembles, shots, rng))
        elif kind == "helstrom-global":
            scores.append(classifiers.helstrom_global_score(state, ensembles))
        else:
            scores.append(classifiers.helstrom_pairwise_score(state, ensembles))
    return np.asarray(scores)


def cmd_eval(args: argparse.Namespace) -> int:
    spec, theta = _load_theta(args.theta)
    train_ds = _load_dataset(Path(args.train))
    eval_ds = _load_dataset(Path(args.eval))
    for name, ds in (("train", train_ds), ("eval", eval_ds)):
        if ds.n_features != spec.n_features:
            raise UserError(
                f"{name} set has {ds.n_features} features, embedding expects {spec.n_features}"
            )
    train_inputs, eval_inputs = train_ds.inputs, eval_ds.inputs
    if args.standardize:
        train_inputs, eval_inputs = datasets.standardize_features(
            train_ds.inputs, train_ds.inputs, eval_ds.inputs
        )
    states_a, states_b = training.embedded_ensembles(
        spec, theta, training.Dataset(train_inputs, train_ds.labels)
    )
    ensembles = classifiers.ClassEnsembles.from_states(states_a, states_b)
    eval_states = [
        StateVector(spec.n_qubits, row)
        for row in embedding.embed_batch(spec, theta, eval_inputs)
    ]
    scores = _score_states(args.classifier, eval_states, ensembles, args.shots, args.seed)
    predictions = np.array([classifiers.predict(s).label for s in scores])
    accuracy = float(np.mean(predictions == eval_ds.labels))
    risk = classifiers.empirical_risk(scores, eval_ds.labels)
    p_rho = metrics.purity(ensembles.rho)
    p_sigma = metrics.purity(ensembles.sigma)
    cross = float(np.real(np.trace(ensembles.rho.entries @ ensembles.sigma.entries)))

    print(f"classifier: {args.classifier}")
    print(f"accuracy: {accuracy!r}")
    print(f"empirical risk (linear loss): {risk!r}")
    print(f"tr rho^2: {p_rho!r}")
    print(f"tr sigma^2: {p_sigma!r}")
    print(f"tr rho sigma: {cross!r}")

    d = eval_ds.n_features
    header = ",".join([f"x{i + 1}" for i in range(d)] + ["label", "score", "prediction"])
    lines = [header]
    for row, label, score, pred in zip(eval_ds.inputs, eval_ds.labels, scores, predictions):
        cells = [repr(float(v)) for v in row] + [str(int(label)), repr(float(score)), str(int(pred))]
        lines.append(",".join(cells))
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote per-row scores to {args.out}")
    return 0


def cmd_boundary(args: argparse.Namespace) -> int:
    spec, theta = _load_theta(args.theta)
    if spec.n_features != 2:
        raise UserError(
            f"boundary export needs a 2-feature embedding, this one has {spec.n_features}"
        )
    train_ds = _load_dataset(Path(args.train))
    if train_ds.n_features != 2:
        raise UserError(f"training set has {train_ds.n_features} features, expected 2")
    try:
        parts = [p.strip() for p in args.grid.split(",")]
        if len(parts) != 5:
            raise ValueError
        xmin, xmax, ymin, ymax = (float(p) for p in parts[:4])
        steps = int(parts[4])
        if steps < 1 or xmax < xmin or ymax < ymin:
            raise ValueError
    except ValueError:
        raise UserError("--grid must be xmin,xmax,ymin,ymax,steps with steps >= 1") from None

    train_inputs = train_ds.inputs
    if args.standardize:
        (train_inputs,) = datasets.standardize_features(train_ds.inputs, train_ds.inputs)
    states_a, states_b = training.embedded_ensembles(
        spec, theta, training.Dataset(train_inputs, train_ds.labels)
    )
    ensembles = classifiers.ClassEnsembles.from_states(states_a, states_b)

    xs = np.linspace(xmin, xmax, steps)
    ys = np.linspace(ymin, ymax, steps)
    grid = np.array([[x, y] for x in xs for y in ys])
    grid_in = grid
    if args.standardize:
        (grid_in,) = datasets.standardize_features(train_ds.inputs, grid)
    grid_states = [
        StateVector(spec.n_qubits, row)
        for row in embedding.embed_batch(spec, theta, grid_in)
    ]
    scores = _score_states(args.classifier, grid_states, ensembles, 0, None)
    lines = ["x1,x2,score"]
    for (x, y), score in zip(grid, scores):
        lines.append(f"{repr(float(x))},{repr(float(y))},{repr(float(score))}")
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote {len(grid)} grid scores to {args.out}")
    return 0


def cmd_capacity(args: argparse.Namespace) -> int:
    try:
        params = CapacityParams(args.bandwidth_hz, args.coherence_s, args.qubits, args.bits)
    except ValueError as exc:
        raise UserError(str(exc)) from exc
    print(f"embeddable classical bits: {capacity(params)!r}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qembed",
        description="Train quantum embeddings and classify with metric-optimal measurements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", help="generate a toy dataset CSV")
    gen.add_argument("kind", choices=["moons", "bands1d"])
    gen.add_argument("--n", type=int, default=75, help="points per class")
    gen.add_argument("--noise", type=float, default=0.1, help="noise std (moons only)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)

    tr = sub.add_parser("train", help="train an embedding from a JSON config")
    tr.add_argument("--config", required=True)

    ev = sub.add_parser("eval", help="evaluate a trained embedding on a dataset")
    ev.add_argument("--theta", required=True)
    ev.add_argument("--train", required=True, help="training-set CSV (builds the ensembles)")
    ev.add_argument("--eval", required=True, help="evaluation-set CSV")
    ev.add_argument("--classifier", choices=list(CLASSIFIER_NAMES), default="fidelity")
    ev.add_argument("--shots", type=int, default=0)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--standardize", action="store_true")
    ev.add_argument("--out", default="scores.csv")

    bd = sub.add_parser("boundary", help="export classifier scores over a 2-d grid")
    bd.add_argument("--theta", required=True)
    bd.add_argument("--train", required=True)
    bd.add_argument("--classifier", choices=list(CLASSIFIER_NAMES), default="fidelity")
    bd.add_argument(
        "--grid",
        required=True,
        help="xmin,xmax,ymin,ymax,steps (use --grid=-1,1,... for negative bounds)",
    )
    bd.add_argument("--standardize", action="store_true")
    bd.add_argument("--out", default="boundary.csv")

    cap = sub.add_parser("capacity", help="device capacity estimate in classical bits")
    cap.add_argument("--bandwidth-hz", type=float, required=True)
    cap.add_argument("--coherence-s", type=float, required=True)
    cap.add_argument("--qubits", type=int, required=True)
    cap.add_argument("--bits", type=int, required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are user errors here (1).
        return 0 if exc.code == 0 else 1
    try:
        if args.command == "gen-data":
            return cmd_gen_data(args)
        if args.command == "train":
            return cmd_train(args.config)
        if args.command == "eval":
            return cmd_eval(args)
        if args.command == "boundary":
            return cmd_boundary(args)
        return cmd_capacity(args)
    except UserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:  # internal fault: full trace, distinct exit code
        traceback.print_exc()
        return 2


def entry_point() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
