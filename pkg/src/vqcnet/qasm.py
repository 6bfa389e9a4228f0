"""OpenQASM 2.0 export of the 4-qubit circuit at a fixed rotation angle.

Qubit k of the 1-based simulator convention maps to wire q[k-1].
"""
import math

_ENTANGLER_LINES = ("cx q[0],q[1];", "cx q[2],q[3];", "cx q[1],q[2];")


def _format_angle(angle):
    if not math.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle!r}")
    if angle == math.pi / 2:
        return "pi/2"
    return f"{angle:.17g}"


def export_qasm(depth, angle=math.pi / 2):
    """Program text: embedding (H + RY per qubit), `depth` rotation layers
    with the CNOT entangler, and a Z-basis measurement of every qubit."""
    if not isinstance(depth, int) or depth < 0:
        raise ValueError(f"depth must be a non-negative integer, got {depth!r}")
    text = _format_angle(angle)
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        "qreg q[4];",
        "creg c[4];",
    ]
    lines += [f"h q[{k}];" for k in range(4)]
    lines += [f"ry({text}) q[{k}];" for k in range(4)]
    for _ in range(depth):
        lines += [f"ry({text}) q[{k}];" for k in range(4)]
        lines += _ENTANGLER_LINES
    lines += [f"measure q[{k}] -> c[{k}];" for k in range(4)]
    return "\n".join(lines) + "\n"
