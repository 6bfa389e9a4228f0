"""Finite-difference verification of every analytic gradient path.

Three blocks are checked, each against central differences with step 1e-5:

  circuit     parameter-shift gradients of the variational circuit (1e-5)
  dense       linear-layer and softmax cross-entropy gradients      (1e-6)
  full-model  end-to-end hybrid loss gradient                       (1e-4)

Errors are max-norm differences scaled by max(1, max|finite difference|).
"""
from dataclasses import dataclass

import numpy as np

from . import circuit, nn
from .model import init_hybrid

FD_STEP = 1e-5

TOLERANCES = {"circuit": 1e-5, "dense": 1e-6, "full-model": 1e-4}

_INSTANCES = 10


@dataclass
class BlockResult:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self):
        return self.max_error <= self.tolerance


def _scaled_error(analytic, fd):
    analytic = np.asarray(analytic, dtype=np.float64).reshape(-1)
    fd = np.asarray(fd, dtype=np.float64).reshape(-1)
    scale = max(1.0, float(np.max(np.abs(fd))) if fd.size else 0.0)
    return float(np.max(np.abs(analytic - fd))) / scale if fd.size else 0.0


def _central_diff(fun, x):
    x = np.asarray(x, dtype=np.float64)
    flat = x.reshape(-1)
    grad = np.zeros_like(flat)
    for i in range(flat.size):
        saved = flat[i]
        flat[i] = saved + FD_STEP
        plus = fun(x)
        flat[i] = saved - FD_STEP
        minus = fun(x)
        flat[i] = saved
        grad[i] = (plus - minus) / (2.0 * FD_STEP)
    return grad.reshape(x.shape)


def _check_circuit(rng):
    worst = 0.0
    for _ in range(_INSTANCES):
        depth = int(rng.integers(1, 4))
        features = rng.normal(0.0, 1.0, 4)
        weights = rng.normal(0.0, 1.0, (depth, 4))
        upstream = rng.normal(0.0, 1.0, 4)
        grad_w, grad_f = circuit.vqc_gradient(features, weights, upstream)

        fd_w = _central_diff(lambda w: upstream @ circuit.vqc_forward(features, w), weights.copy())
        fd_f = _central_diff(lambda f: upstream @ circuit.vqc_forward(f, weights), features.copy())
        worst = max(worst, _scaled_error(grad_w, fd_w), _scaled_error(grad_f, fd_f))
    return worst


def _check_dense(rng):
    worst = 0.0
    for _ in range(_INSTANCES):
        in_dim = int(rng.integers(2, 8))
        out_dim = int(rng.integers(2, 6))
        layer = nn.LinearLayer(rng.normal(0.0, 1.0, (out_dim, in_dim)), rng.normal(0.0, 1.0, out_dim))
        x = rng.normal(0.0, 1.0, in_dim)
        upstream = rng.normal(0.0, 1.0, out_dim)
        grad_w, grad_b, grad_x = nn.linear_backward(layer, x, upstream)

        def loss_w(w):
            return float(upstream @ (w @ x + layer.bias))

        def loss_x(xv):
            return float(upstream @ (layer.weights @ xv + layer.bias))

        fd_w = _central_diff(loss_w, layer.weights.copy())
        fd_x = _central_diff(loss_x, x.copy())
        worst = max(worst, _scaled_error(grad_w, fd_w), _scaled_error(grad_x, fd_x))
        worst = max(worst, _scaled_error(grad_b, upstream))

        logits = rng.normal(0.0, 2.0, 2)
        label = int(rng.integers(0, 2))
        analytic = nn.softmax_cross_entropy(logits, label).grad_logits
        fd_logits = _central_diff(
            lambda z: nn.softmax_cross_entropy(z, label).value, logits.copy()
        )
        worst = max(worst, _scaled_error(analytic, fd_logits))
    return worst


def _check_full_model(rng):
    worst = 0.0
    for _ in range(_INSTANCES):
        model = init_hybrid(depth=2, seed=int(rng.integers(0, 2 ** 31)))
        features = rng.normal(0.0, 1.0, 512)
        label = int(rng.integers(0, 2))
        _, _, grads = model.loss_and_gradients(features, label)
        analytic = np.concatenate([g.reshape(-1) for g in grads])

        def loss_only():
            return nn.softmax_cross_entropy(model.forward(features), label).value

        fd_parts = []
        for arr in model.parameters():
            flat = arr.reshape(-1)
            fd = np.zeros_like(flat)
            for i in range(flat.size):
                saved = flat[i]
                flat[i] = saved + FD_STEP
                plus = loss_only()
                flat[i] = saved - FD_STEP
                minus = loss_only()
                flat[i] = saved
                fd[i] = (plus - minus) / (2.0 * FD_STEP)
            fd_parts.append(fd)
        fd_all = np.concatenate(fd_parts)
        worst = max(worst, _scaled_error(analytic, fd_all))
    return worst


def run_gradcheck(seed=42, corrupt=None):
    """Run all three blocks; `corrupt` (a block name) is a test hook that
    perturbs that block's reported error to prove the check can fail."""
    results = []
    checks = (
        ("circuit", _check_circuit),
        ("dense", _check_dense),
        ("full-model", _check_full_model),
    )
    if corrupt is not None and corrupt not in TOLERANCES:
        raise ValueError(f"unknown block {corrupt!r}")
    for name, check in checks:
        rng = np.random.default_rng([seed, len(results)])
        err = check(rng)
        if corrupt == name:
            err += 1e-3
        results.append(BlockResult(name=name, max_error=err, tolerance=TOLERANCES[name]))
    return results
