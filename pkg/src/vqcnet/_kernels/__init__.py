"""Gate kernels: compiled Cython core with a NumPy fallback.

The compiled module is preferred when present; set VQCNET_KERNELS=py (or =cy)
to force a backend. Both expose the same in-place functions:

    apply_1q_real(amps, num_qubits, qubit, m00, m01, m10, m11)
    apply_cnot(amps, num_qubits, control, target)
    expect_z(amps, num_qubits, qubit) -> float

`amps` is a C-contiguous complex128 array of 2**num_qubits amplitudes and
`qubit` is 0-based from the most significant bit of the amplitude index.
"""
import os

from . import _gates_py

_forced = os.environ.get("VQCNET_KERNELS")
if _forced == "py":
    _impl = _gates_py
elif _forced == "cy":
    from . import _gates_cy as _impl
elif _forced:
    raise ImportError(f"unknown VQCNET_KERNELS backend {_forced!r} (use 'py' or 'cy')")
else:
    try:
        from . import _gates_cy as _impl
    except ImportError:
        _impl = _gates_py

BACKEND = "numpy" if _impl is _gates_py else "cython"

apply_1q_real = _impl.apply_1q_real
apply_cnot = _impl.apply_cnot
expect_z = _impl.expect_z


def available_backends():
    """Names of the kernel backends importable in this installation."""
    names = ["numpy"]
    try:
        from . import _gates_cy  # noqa: F401
    except ImportError:
        pass
    else:
        names.append("cython")
    return names


def load_backend(name):
    """Return the kernel module for `name` ('numpy' or 'cython')."""
    if name == "numpy":
        return _gates_py
    if name == "cython":
        from . import _gates_cy
        return _gates_cy
    raise ValueError(f"unknown kernel backend {name!r}")
