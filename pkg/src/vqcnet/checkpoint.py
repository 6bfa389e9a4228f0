"""Model checkpointing as a single JSON document.

Parameter arrays serialize as decimal numbers; Python's float repr is the
shortest round-tripping form, so save -> load reproduces the exact binary
values and evaluation outputs are bitwise identical.
"""
import json
from dataclasses import asdict

import numpy as np

from . import model as model_mod
from .fileio import atomic_write_text
from .model import ClassicalBaseline, HybridModel, TrainConfig
from .nn import LinearLayer

FORMAT_VERSION = 1


def _kind(model):
    if isinstance(model, HybridModel):
        return "hybrid"
    if isinstance(model, ClassicalBaseline):
        return "classical"
    raise ValueError(f"cannot checkpoint object of type {type(model).__name__}")


def save_checkpoint(path, model, config):
    kind = _kind(model)
    doc = {
        "format_version": FORMAT_VERSION,
        "model_kind": kind,
        "config": asdict(config),
    }
    if kind == "hybrid":
        doc["dimensions"] = {
            "in_features": model_mod.IN_FEATURES,
            "hidden": model_mod.HIDDEN,
            "classes": model_mod.NUM_CLASSES,
        }
        doc["depth"] = model.depth
        doc["params"] = {
            "pre_weights": model.pre.weights.tolist(),
            "pre_bias": model.pre.bias.tolist(),
            "vqc_weights": model.vqc_weights.tolist(),
            "post_weights": model.post.weights.tolist(),
            "post_bias": model.post.bias.tolist(),
        }
    else:
        doc["dimensions"] = {
            "in_features": model_mod.IN_FEATURES,
            "classes": model_mod.NUM_CLASSES,
        }
        doc["params"] = {
            "head_weights": model.head.weights.tolist(),
            "head_bias": model.head.bias.tolist(),
        }
    atomic_write_text(path, json.dumps(doc, indent=1) + "\n")


def load_checkpoint(path):
    """Returns (model, TrainConfig)."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint format version {version!r}")
    config = TrainConfig(**doc["config"])
    params = doc["params"]
    kind = doc.get("model_kind")
    if kind == "hybrid":
        model = HybridModel(
            pre=LinearLayer(np.array(params["pre_weights"]), np.array(params["pre_bias"])),
            vqc_weights=np.array(params["vqc_weights"], dtype=np.float64).reshape(
                doc["depth"], model_mod.HIDDEN
            ),
            post=LinearLayer(np.array(params["post_weights"]), np.array(params["post_bias"])),
        )
    elif kind == "classical":
        model = ClassicalBaseline(
            head=LinearLayer(np.array(params["head_weights"]), np.array(params["head_bias"]))
        )
    else:
        raise ValueError(f"{path}: unknown model kind {kind!r}")
    return model, config
