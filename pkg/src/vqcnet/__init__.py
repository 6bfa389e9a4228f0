"""Hybrid quantum-classical binary classifier.

A trainable 512->4 reduction layer feeds a 4-qubit variational circuit
(simulated on a dense statevector) whose per-qubit Z expectations drive a
4->2 readout head. Includes training, evaluation, McNemar comparison
against a classical baseline, and OpenQASM export.

The statevector gate kernels are compiled (Cython) when available and fall
back to NumPy otherwise; see vqcnet.kernel_backend().
"""
from . import _kernels
from .circuit import encode_angles, embed, entangle, variational_layer, vqc_forward, vqc_gradient
from .data import (
    DatasetSplit,
    ImageRecord,
    Sample,
    gen_synthetic,
    load_image_dir,
    project_features,
    read_features,
    resize_bilinear,
    split,
    write_features,
)
# the metrics() op lives in vqcnet.metrics; re-exporting it here would
# shadow that submodule
from .metrics import ConfusionMatrix, McNemarResult, MetricsReport, confusion, mcnemar
from .model import (
    ClassicalBaseline,
    HybridModel,
    TrainConfig,
    classical_forward,
    evaluate,
    hybrid_backward,
    hybrid_forward,
    init_classical,
    init_hybrid,
    train,
)
from .nn import AdamState, LinearLayer, LossValue, adam_step, linear_backward, linear_forward, relu, softmax_cross_entropy
from .qasm import export_qasm
from .statevector import StateVector, apply_cnot, apply_hadamard, apply_ry, expect_z, new_state

__version__ = "0.1.0"


def kernel_backend():
    """Name of the active gate-kernel backend: 'cython' or 'numpy'."""
    return _kernels.BACKEND
