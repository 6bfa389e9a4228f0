"""Command-line entry point.

Subcommands: train, eval, compare, gradcheck, export-qasm, gen-synthetic,
extract-features. A JSON config file (--config) supplies defaults in
snake_case; explicit flags override it. Every command is seeded (--seed,
default 42) and never uses wall-clock entropy.

Exit codes: 0 success, 1 runtime/data error, 2 usage error.
"""
import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import data, gradcheck, metrics, model, qasm
from ._kernels import BACKEND
from .checkpoint import load_checkpoint, save_checkpoint
from .fileio import atomic_write_text
from .model import TrainConfig

DEFAULT_SEED = 42
DEFAULT_DEPTH = 3
DEFAULT_VAL_FRAC = 0.15
DEFAULT_ALPHA = metrics.DEFAULT_ALPHA

# Stream tag for the validation holdout; epoch shuffles use [seed, epoch]
# with epoch < 2**32, so this can never collide.
_VAL_STREAM = 1 << 32

_SEED_MASK = (1 << 64) - 1


class UsageError(Exception):
    pass


@dataclass
class SyntheticSpec:
    n_per_class: int
    separation: float
    noise_sigma: float
    seed: int


@dataclass
class RunConfig:
    epochs: int = 20
    learning_rate: float = 1e-4
    batch_size: int = 32
    depth: int = DEFAULT_DEPTH
    seed: int = DEFAULT_SEED
    model: str = "hybrid"
    features: str = None
    images: str = None
    synthetic: SyntheticSpec = None
    projection_seed: int = 0
    val_frac: float = DEFAULT_VAL_FRAC
    out: str = None

    def train_config(self):
        return TrainConfig(
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            depth=self.depth,
            seed=self.seed,
        )


_CONFIG_KEYS = set(RunConfig.__dataclass_fields__)


def _parse_synthetic(text):
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError(
            f"--synthetic takes N_PER_CLASS,SEPARATION,NOISE_SIGMA,SEED, got {text!r}"
        )
    try:
        return SyntheticSpec(int(parts[0]), float(parts[1]), float(parts[2]), int(parts[3]))
    except ValueError as exc:
        raise UsageError(f"bad --synthetic value {text!r}: {exc}") from exc


def _load_config_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: config must be a JSON object")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"{path}: unknown config keys {sorted(unknown)}")
    if "synthetic" in doc and doc["synthetic"] is not None:
        doc["synthetic"] = SyntheticSpec(**doc["synthetic"])
    return doc


def _build_run_config(args, want_source=True):
    values = {}
    if getattr(args, "config", None):
        values.update(_load_config_file(args.config))
    for key in _CONFIG_KEYS:
        arg = getattr(args, key, None)
        if arg is not None:
            values[key] = arg
    cfg = RunConfig(**values)
    if want_source:
        sources = [s for s in (cfg.features, cfg.images, cfg.synthetic) if s is not None]
        if len(sources) != 1:
            raise UsageError(
                "exactly one data source is required: --features, --images, or --synthetic"
            )
    return cfg


def _load_samples(cfg):
    if cfg.features is not None:
        return data.read_features(cfg.features)
    if cfg.synthetic is not None:
        s = cfg.synthetic
        return data.gen_synthetic(s.n_per_class, s.separation, s.noise_sigma, s.seed)
    return _project_image_dir(cfg.images, cfg.projection_seed)


def _project_image_dir(root, projection_seed):
    projector = data.RandomProjector(projection_seed)
    samples = []
    for label, folder in ((0, "normal"), (1, "demented")):
        directory = os.path.join(root, folder)
        if not os.path.isdir(directory):
            raise FileNotFoundError(f"image directory not found: {directory}")
        for image in data.load_image_dir(directory, label):
            resized = data.resize_bilinear(image, data.IMAGE_SIDE, data.IMAGE_SIDE)
            samples.append(projector.transform(resized))
    return samples


def _holdout(samples, val_frac, seed):
    """Stratified validation carve-out; returns (train, validation)."""
    if val_frac == 0:
        return list(samples), []
    rng = np.random.default_rng([seed & _SEED_MASK, _VAL_STREAM])
    is_val = {}
    for label in (0, 1):
        indices = [i for i, s in enumerate(samples) if s.label == label]
        perm = rng.permutation(len(indices))
        n_val = int(math.floor(val_frac * len(indices) + 0.5))
        for rank, j in enumerate(perm):
            is_val[indices[j]] = rank < n_val
    train = [s for i, s in enumerate(samples) if not is_val[i]]
    val = [s for i, s in enumerate(samples) if is_val[i]]
    return train, val


def _fmt(value):
    return "nan" if value is None else repr(float(value))


def _history_csv(history):
    lines = ["epoch,train_loss,train_acc,val_loss,val_acc"]
    for h in history:
        lines.append(
            f"{h.epoch},{_fmt(h.train_loss)},{_fmt(h.train_acc)},"
            f"{_fmt(h.val_loss)},{_fmt(h.val_acc)}"
        )
    return "\n".join(lines) + "\n"


def cmd_train(args):
    cfg = _build_run_config(args)
    if cfg.out is None:
        raise UsageError("train requires --out DIR")
    if not 0 <= cfg.val_frac < 1:
        raise UsageError(f"--val-frac must be in [0, 1), got {cfg.val_frac}")
    samples = _load_samples(cfg)
    train_samples, val_samples = _holdout(samples, cfg.val_frac, cfg.seed)
    if cfg.model == "hybrid":
        net = model.init_hybrid(cfg.depth, cfg.seed)
    elif cfg.model == "classical":
        net = model.init_classical(cfg.seed)
    else:
        raise UsageError(f"--model must be hybrid or classical, got {cfg.model!r}")
    history = model.train(net, train_samples, cfg.train_config(), val_samples)
    for h in history:
        val_part = ""
        if h.val_loss is not None:
            val_part = f"  val_loss {h.val_loss:.4f}  val_acc {h.val_acc:.3f}"
        print(
            f"epoch {h.epoch:3d}  train_loss {h.train_loss:.4f}  "
            f"train_acc {h.train_acc:.3f}{val_part}"
        )
    os.makedirs(cfg.out, exist_ok=True)
    atomic_write_text(os.path.join(cfg.out, "history.csv"), _history_csv(history))
    save_checkpoint(os.path.join(cfg.out, "checkpoint.json"), net, cfg.train_config())
    print(f"wrote {os.path.join(cfg.out, 'history.csv')}")
    print(f"wrote {os.path.join(cfg.out, 'checkpoint.json')}")
    return 0


def _metrics_lines(cm, report):
    return [
        ("accuracy", report.accuracy),
        ("recall", report.recall),
        ("precision", report.precision),
        ("f1", report.f1),
        ("tp", cm.tp),
        ("tn", cm.tn),
        ("fp", cm.fp),
        ("fn", cm.fn),
        ("degenerate", ",".join(report.degenerate) if report.degenerate else "none"),
    ]


def cmd_eval(args):
    cfg = _build_run_config(args)
    net, _ = load_checkpoint(args.checkpoint)
    samples = _load_samples(cfg)
    predictions, cm = model.evaluate(net, samples)
    report = metrics.metrics(cm)
    doc = metrics.format_report(_metrics_lines(cm, report))
    print(doc, end="")
    if cfg.out is not None:
        os.makedirs(cfg.out, exist_ok=True)
        atomic_write_text(os.path.join(cfg.out, "metrics.txt"), doc)
        lines = ["index,label,prediction,logit0,logit1"]
        for i, (sample, pred) in enumerate(zip(samples, predictions)):
            logits = net.forward(sample.features)
            lines.append(f"{i},{sample.label},{pred},{repr(logits[0])},{repr(logits[1])}")
        atomic_write_text(os.path.join(cfg.out, "predictions.csv"), "\n".join(lines) + "\n")
        print(f"wrote {os.path.join(cfg.out, 'metrics.txt')}")
        print(f"wrote {os.path.join(cfg.out, 'predictions.csv')}")
    return 0


def cmd_compare(args):
    cfg = _build_run_config(args)
    net_a, _ = load_checkpoint(args.checkpoint_a)
    net_b, _ = load_checkpoint(args.checkpoint_b)
    samples = _load_samples(cfg)
    preds_a, _ = model.evaluate(net_a, samples)
    preds_b, _ = model.evaluate(net_b, samples)
    labels = [s.label for s in samples]
    result = metrics.mcnemar(preds_a, preds_b, labels)
    significant = result.p_value < args.alpha
    doc = metrics.format_report(
        [
            ("variant", "corrected-chi-square"),
            ("b", result.b),
            ("c", result.c),
            ("chi_square", result.chi_square),
            ("p_value", result.p_value),
            ("alpha", args.alpha),
            ("significant", str(significant).lower()),
            ("no_discordance", str(result.no_discordance).lower()),
        ]
    )
    print(doc, end="")
    if cfg.out is not None:
        os.makedirs(cfg.out, exist_ok=True)
        atomic_write_text(os.path.join(cfg.out, "mcnemar.txt"), doc)
        print(f"wrote {os.path.join(cfg.out, 'mcnemar.txt')}")
    return 0


def cmd_gradcheck(args):
    results = gradcheck.run_gradcheck(seed=args.seed if args.seed is not None else DEFAULT_SEED)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:11s} max_error {r.max_error:.3e}  tolerance {r.tolerance:.0e}  {status}")
        ok = ok and r.passed
    return 0 if ok else 1


def cmd_export_qasm(args):
    if args.depth < 0:
        raise UsageError(f"--depth must be >= 0, got {args.depth}")
    program = qasm.export_qasm(args.depth, args.angle)
    if args.out:
        atomic_write_text(args.out, program)
        print(f"wrote {args.out}")
    else:
        print(program, end="")
    return 0


def cmd_gen_synthetic(args):
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    samples = data.gen_synthetic(args.n_per_class, args.separation, args.noise_sigma, seed)
    data.write_features(args.out, samples)
    print(f"wrote {len(samples)} samples to {args.out}")
    return 0


def cmd_extract_features(args):
    samples = _project_image_dir(args.images, args.projection_seed)
    data.write_features(args.out, samples)
    print(f"wrote {len(samples)} samples to {args.out}")
    return 0


def _add_source_flags(p):
    p.add_argument("--features", help="feature file (binary VQCF or .csv)")
    p.add_argument("--images", help="image root with normal/ and demented/ subdirectories")
    p.add_argument(
        "--synthetic",
        type=_parse_synthetic,
        metavar="N,SEP,NOISE,SEED",
        help="generate a synthetic dataset in place of a file",
    )
    p.add_argument("--projection-seed", type=int, dest="projection_seed",
                   help="seed of the image->512 random projection (default 0)")
    p.add_argument("--config", help="JSON config file; flags override its values")


def _add_train_flags(p):
    p.add_argument("--epochs", type=int)
    p.add_argument("--lr", type=float, dest="learning_rate")
    p.add_argument("--batch", type=int, dest="batch_size")
    p.add_argument("--depth", type=int)
    p.add_argument("--model", choices=("hybrid", "classical"))
    p.add_argument("--val-frac", type=float, dest="val_frac",
                   help="validation fraction held out of the training data (default 0.15)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="vqcnet",
        description="Hybrid quantum-classical binary classifier "
                    f"(gate kernels: {BACKEND})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model and write history + checkpoint")
    _add_source_flags(p)
    _add_train_flags(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint on a dataset")
    p.add_argument("--checkpoint", required=True)
    _add_source_flags(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory (optional)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="McNemar's test between two checkpoints")
    p.add_argument("--checkpoint-a", required=True, dest="checkpoint_a")
    p.add_argument("--checkpoint-b", required=True, dest="checkpoint_b")
    _add_source_flags(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA,
                   help="significance threshold (default 0.05)")
    p.add_argument("--out", help="output directory (optional)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gradcheck", help="finite-difference gradient verification")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("export-qasm", help="emit the circuit as OpenQASM 2.0")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--angle", type=float, default=math.pi / 2)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_export_qasm)

    p = sub.add_parser("gen-synthetic", help="write a synthetic feature file")
    p.add_argument("--n-per-class", type=int, required=True, dest="n_per_class")
    p.add_argument("--separation", type=float, required=True)
    p.add_argument("--noise-sigma", type=float, required=True, dest="noise_sigma")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_synthetic)

    p = sub.add_parser("extract-features", help="project an image directory to features")
    p.add_argument("--images", required=True)
    p.add_argument("--projection-seed", type=int, default=0, dest="projection_seed")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract_features)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
