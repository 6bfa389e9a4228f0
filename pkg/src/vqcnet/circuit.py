"""The 4-qubit variational circuit that reduces 4 features to 4 expectations.

Pipeline: tanh angle encoding -> embedding (H then RY per qubit) -> `depth`
rotation layers, each four RY gates followed by the fixed CNOT entangler
CNOT(1,2), CNOT(3,4), CNOT(2,3) in circuit order -> per-qubit <Z> readout.

Layer i of the weight matrix is applied i-th (row 0 first). Gradients use
the parameter-shift rule, which is exact for RY generators.
"""
import math

import numpy as np

from . import _kernels
from .statevector import StateVector

NUM_QUBITS = 4
_DIM = 1 << NUM_QUBITS
_HALF_PI = math.pi / 2.0
_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# (control, target) pairs of the entangler, 0-based, in circuit order
_ENTANGLER = ((0, 1), (2, 3), (1, 2))


def _as_vec4(values, name):
    v = np.asarray(values, dtype=np.float64)
    if v.shape != (NUM_QUBITS,):
        raise ValueError(f"{name} must have exactly {NUM_QUBITS} entries, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be finite, got {v}")
    return v


def _as_weights(weights):
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 2 or w.shape[1] != NUM_QUBITS:
        raise ValueError(f"weights must have shape (depth, {NUM_QUBITS}), got {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    return w


# tanh rounds to exactly 1.0 for |f| > ~19; clamp to the largest interior
# double so angles stay strictly inside (-pi/2, pi/2)
_TANH_LIMIT = np.nextafter(1.0, 0.0)


def encode_angles(features):
    """Map 4 features to rotation angles: tanh(f) * pi/2, each in (-pi/2, pi/2)."""
    f = _as_vec4(features, "features")
    return np.clip(np.tanh(f), -_TANH_LIMIT, _TANH_LIMIT) * _HALF_PI


def _embed_inplace(amps, angles, k=_kernels):
    for q in range(NUM_QUBITS):
        k.apply_1q_real(amps, NUM_QUBITS, q, _INV_SQRT2, _INV_SQRT2, _INV_SQRT2, -_INV_SQRT2)
        c = math.cos(angles[q] / 2.0)
        s = math.sin(angles[q] / 2.0)
        k.apply_1q_real(amps, NUM_QUBITS, q, c, -s, s, c)


def _entangle_inplace(amps, k=_kernels):
    for control, target in _ENTANGLER:
        k.apply_cnot(amps, NUM_QUBITS, control, target)


def _layer_inplace(amps, w_row, k=_kernels):
    for q in range(NUM_QUBITS):
        c = math.cos(w_row[q] / 2.0)
        s = math.sin(w_row[q] / 2.0)
        k.apply_1q_real(amps, NUM_QUBITS, q, c, -s, s, c)
    _entangle_inplace(amps, k)


def _run_circuit(angles, weights, k=_kernels):
    """Raw amplitudes after embedding + all rotation layers."""
    amps = np.zeros(_DIM, dtype=np.complex128)
    amps[0] = 1.0
    _embed_inplace(amps, angles, k)
    for row in weights:
        _layer_inplace(amps, row, k)
    return amps


def _expectations(angles, weights, k=_kernels):
    amps = _run_circuit(angles, weights, k)
    return np.array([k.expect_z(amps, NUM_QUBITS, q) for q in range(NUM_QUBITS)])


def embed(angles):
    """Embedding: per qubit k, RY(angle_k) . H applied to |0>."""
    angles = _as_vec4(angles, "angles")
    amps = np.zeros(_DIM, dtype=np.complex128)
    amps[0] = 1.0
    _embed_inplace(amps, angles)
    return StateVector(NUM_QUBITS, amps)


def entangle(state):
    """The fixed entangler: CNOT(1,2), CNOT(3,4), CNOT(2,3) in circuit order."""
    if state.num_qubits != NUM_QUBITS:
        raise ValueError(f"entangler expects a {NUM_QUBITS}-qubit state, got {state.num_qubits}")
    out = state.copy()
    _entangle_inplace(out.amplitudes)
    return out


def variational_layer(state, w_row):
    """One trainable layer: RY(w_k) on each qubit k, then the entangler."""
    if state.num_qubits != NUM_QUBITS:
        raise ValueError(f"layer expects a {NUM_QUBITS}-qubit state, got {state.num_qubits}")
    w_row = _as_vec4(w_row, "layer weights")
    out = state.copy()
    _layer_inplace(out.amplitudes, w_row)
    return out


def vqc_forward(features, weights):
    """Run the full circuit; returns the 4 per-qubit <Z> values in [-1, 1].

    `weights` has shape (depth, 4); depth 0 reduces to the embedding alone.
    """
    weights = _as_weights(weights)
    angles = encode_angles(features)
    return _expectations(angles, weights)


def vqc_gradient(features, weights, upstream):
    """Parameter-shift gradients of L = upstream . expectations.

    Returns (grad_weights, grad_features). Every RY angle theta obeys
    dL/dtheta = [L(theta+pi/2) - L(theta-pi/2)] / 2; feature gradients chain
    through the encoding via d(angle)/d(feature) = (pi/2)(1 - tanh^2 f).
    """
    f = _as_vec4(features, "features")
    weights = _as_weights(weights)
    up = _as_vec4(upstream, "upstream")
    angles = np.tanh(f) * _HALF_PI

    def value(a, w):
        return float(up @ _expectations(a, w))

    grad_w = np.zeros_like(weights)
    for i in range(weights.shape[0]):
        for q in range(NUM_QUBITS):
            shifted = weights.copy()
            shifted[i, q] += _HALF_PI
            plus = value(angles, shifted)
            shifted[i, q] -= math.pi
            minus = value(angles, shifted)
            grad_w[i, q] = (plus - minus) / 2.0

    grad_angles = np.zeros(NUM_QUBITS)
    for q in range(NUM_QUBITS):
        shifted = angles.copy()
        shifted[q] += _HALF_PI
        plus = value(shifted, weights)
        shifted[q] -= math.pi
        minus = value(shifted, weights)
        grad_angles[q] = (plus - minus) / 2.0

    grad_features = grad_angles * _HALF_PI * (1.0 - np.tanh(f) ** 2)
    return grad_w, grad_features
