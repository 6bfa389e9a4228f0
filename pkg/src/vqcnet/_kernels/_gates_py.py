"""NumPy fallback gate kernels.

Same contract as the compiled module: all functions mutate the amplitude
array in place, and `qubit` is 0-based counting from the most significant
bit of the amplitude index.
"""
import numpy as np


def apply_1q_real(amps, num_qubits, qubit, m00, m01, m10, m11):
    """Apply the real 2x2 matrix [[m00,m01],[m10,m11]] to one qubit."""
    stride = 1 << (num_qubits - 1 - qubit)
    view = amps.reshape(-1, 2, stride)
    a = view[:, 0, :].copy()
    b = view[:, 1, :].copy()
    view[:, 0, :] = m00 * a + m01 * b
    view[:, 1, :] = m10 * a + m11 * b


def apply_cnot(amps, num_qubits, control, target):
    """Flip the target bit of every amplitude whose control bit is set."""
    view = amps.reshape([2] * num_qubits)
    lo = [slice(None)] * num_qubits
    hi = [slice(None)] * num_qubits
    lo[control] = 1
    lo[target] = 0
    hi[control] = 1
    hi[target] = 1
    lo, hi = tuple(lo), tuple(hi)
    tmp = view[lo].copy()
    view[lo] = view[hi]
    view[hi] = tmp


def expect_z(amps, num_qubits, qubit):
    """<Z> on one qubit: P(bit 0) - P(bit 1)."""
    stride = 1 << (num_qubits - 1 - qubit)
    probs = (amps.real ** 2 + amps.imag ** 2).reshape(-1, 2, stride)
    return float(probs[:, 0, :].sum() - probs[:, 1, :].sum())
