"""Classical building blocks: linear layers, ReLU, softmax cross-entropy, Adam.

The backward pass is hand-chained for the fixed architectures in this
package; there is no autodiff graph.
"""
import math
from dataclasses import dataclass, field

import numpy as np

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8

# Init scale for trainable weights. A near-zero start keeps the model in the
# analytically known zero-weight regime and, at the pinned learning rate,
# lets the learned signal dominate the random component within 20 epochs.
INIT_SIGMA = 0.01


@dataclass
class LinearLayer:
    """Affine map x -> weights @ x + bias; weights has shape (out_dim, in_dim)."""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weights.ndim != 2:
            raise ValueError(f"weights must be 2-D, got shape {self.weights.shape}")
        if self.bias.shape != (self.weights.shape[0],):
            raise ValueError(
                f"bias shape {self.bias.shape} does not match out_dim {self.weights.shape[0]}"
            )
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise ValueError("layer parameters must be finite")

    @property
    def in_dim(self):
        return self.weights.shape[1]

    @property
    def out_dim(self):
        return self.weights.shape[0]


def init_linear(in_dim, out_dim, rng):
    """Seeded layer init: weights ~ Normal(0, INIT_SIGMA), zero bias."""
    w = rng.normal(0.0, INIT_SIGMA, size=(out_dim, in_dim))
    return LinearLayer(w, np.zeros(out_dim))


def zero_linear(in_dim, out_dim):
    return LinearLayer(np.zeros((out_dim, in_dim)), np.zeros(out_dim))


def _as_input(layer, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (layer.in_dim,):
        raise ValueError(f"input has shape {x.shape}, layer expects ({layer.in_dim},)")
    return x


def linear_forward(layer, x):
    """weights @ x + bias."""
    return layer.weights @ _as_input(layer, x) + layer.bias


def linear_backward(layer, x, upstream):
    """Gradients of upstream . (Wx + b): returns (grad_w, grad_b, grad_x)."""
    x = _as_input(layer, x)
    upstream = np.asarray(upstream, dtype=np.float64)
    if upstream.shape != (layer.out_dim,):
        raise ValueError(f"upstream has shape {upstream.shape}, layer emits ({layer.out_dim},)")
    grad_w = np.outer(upstream, x)
    grad_b = upstream.copy()
    grad_x = layer.weights.T @ upstream
    return grad_w, grad_b, grad_x


def relu(x):
    """Element-wise max(0, x)."""
    return np.maximum(np.asarray(x, dtype=np.float64), 0.0)


def relu_backward(x, upstream):
    """Upstream masked by x > 0; the subgradient at exactly 0 is 0."""
    x = np.asarray(x, dtype=np.float64)
    return np.asarray(upstream, dtype=np.float64) * (x > 0.0)


@dataclass
class LossValue:
    value: float
    grad_logits: np.ndarray


def softmax_cross_entropy(logits, label):
    """Binary softmax cross-entropy with max-subtraction for stability.

    Returns the loss -log(P[label]) and its gradient P - onehot(label).
    """
    z = np.asarray(logits, dtype=np.float64)
    if z.shape != (2,):
        raise ValueError(f"expected 2 logits, got shape {z.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError(f"logits must be finite, got {z}")
    if label not in (0, 1):
        raise ValueError(f"label must be 0 or 1, got {label!r}")
    shifted = z - z.max()
    exps = np.exp(shifted)
    probs = exps / exps.sum()
    grad = probs.copy()
    grad[label] -= 1.0
    return LossValue(float(-math.log(probs[label])), grad)


@dataclass
class AdamState:
    """Per-parameter-array optimizer state; `t` bumps once per step."""

    m: np.ndarray
    v: np.ndarray
    t: int = 0
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    epsilon: float = ADAM_EPSILON

    @classmethod
    def for_param(cls, param):
        shape = np.shape(param)
        return cls(m=np.zeros(shape), v=np.zeros(shape))


def adam_step(params, grads, state, lr):
    """One Adam update with bias correction; returns the new parameter array.

    `state` is updated in place. lr = 0 leaves parameters unchanged (the
    moment accumulators still advance).
    """
    params = np.asarray(params, dtype=np.float64)
    grads = np.asarray(grads, dtype=np.float64)
    if params.shape != grads.shape or params.shape != state.m.shape:
        raise ValueError(
            f"shape mismatch: params {params.shape}, grads {grads.shape}, state {state.m.shape}"
        )
    if lr < 0:
        raise ValueError(f"learning rate must be non-negative, got {lr}")
    state.t += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * grads * grads
    m_hat = state.m / (1.0 - state.beta1 ** state.t)
    v_hat = state.v / (1.0 - state.beta2 ** state.t)
    return params - lr * m_hat / (np.sqrt(v_hat) + state.epsilon)
