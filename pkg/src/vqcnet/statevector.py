"""Dense statevector simulation of an n-qubit register.

Supports the three gates the classifier needs (Hadamard, rotation-Y, CNOT)
plus exact Z-basis expectation readout.

Bit-ordering convention (binding for everything downstream): qubits are
numbered 1..n and qubit 1 is the MOST significant bit of the amplitude
index, so |b1 b2 .. bn> lives at index b1*2^(n-1) + ... + bn*2^0.

All operations are pure: they return a fresh StateVector and never mutate
their input, so states are safe to share across threads.
"""
import math

import numpy as np

from . import _kernels

MAX_QUBITS = 24

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class StateVector:
    """2**num_qubits complex amplitudes of an n-qubit register."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits, amplitudes):
        self.num_qubits = num_qubits
        self.amplitudes = amplitudes

    def copy(self):
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm(self):
        a = self.amplitudes
        return float(np.sqrt(np.sum(a.real ** 2 + a.imag ** 2)))

    def probabilities(self):
        a = self.amplitudes
        return a.real ** 2 + a.imag ** 2

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits})"


def new_state(num_qubits):
    """The all-|0> register on `num_qubits` qubits."""
    if not isinstance(num_qubits, (int, np.integer)) or num_qubits < 1:
        raise ValueError(f"num_qubits must be a positive integer, got {num_qubits!r}")
    if num_qubits > MAX_QUBITS:
        raise ValueError(f"num_qubits {num_qubits} exceeds the {MAX_QUBITS}-qubit cap")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(int(num_qubits), amps)


def _check_qubit(state, q, name="qubit"):
    if not isinstance(q, (int, np.integer)) or not 1 <= q <= state.num_qubits:
        raise ValueError(
            f"{name} index {q!r} out of range 1..{state.num_qubits} (qubits are 1-based)"
        )
    return int(q)


def apply_hadamard(state, q):
    """Apply H = (1/sqrt2)[[1,1],[1,-1]] to qubit q."""
    q = _check_qubit(state, q)
    out = state.copy()
    _kernels.apply_1q_real(
        out.amplitudes, out.num_qubits, q - 1,
        _INV_SQRT2, _INV_SQRT2, _INV_SQRT2, -_INV_SQRT2,
    )
    return out


def apply_ry(state, q, theta):
    """Apply RY(theta) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]] to qubit q."""
    q = _check_qubit(state, q)
    if not math.isfinite(theta):
        raise ValueError(f"rotation angle must be finite, got {theta!r}")
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    out = state.copy()
    _kernels.apply_1q_real(out.amplitudes, out.num_qubits, q - 1, c, -s, s, c)
    return out


def apply_cnot(state, control, target):
    """Flip qubit `target` on every amplitude whose `control` bit is 1."""
    control = _check_qubit(state, control, "control")
    target = _check_qubit(state, target, "target")
    if control == target:
        raise ValueError(f"control and target must differ, both are {control}")
    out = state.copy()
    _kernels.apply_cnot(out.amplitudes, out.num_qubits, control - 1, target - 1)
    return out


def expect_z(state, q):
    """Exact <Z> of qubit q: P(bit 0) - P(bit 1), in [-1, 1]."""
    q = _check_qubit(state, q)
    return _kernels.expect_z(state.amplitudes, state.num_qubits, q - 1)
