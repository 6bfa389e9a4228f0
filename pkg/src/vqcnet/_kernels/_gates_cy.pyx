# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate kernels.

Same contract as the NumPy module: all functions mutate the amplitude
array in place, and `qubit` is 0-based counting from the most significant
bit of the amplitude index.
"""


def apply_1q_real(double complex[::1] amps, int num_qubits, int qubit,
                  double m00, double m01, double m10, double m11):
    """Apply the real 2x2 matrix [[m00,m01],[m10,m11]] to one qubit."""
    cdef Py_ssize_t size = (<Py_ssize_t>1) << num_qubits
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << (num_qubits - 1 - qubit)
    cdef Py_ssize_t block = stride << 1
    cdef Py_ssize_t base, off, i0, i1
    cdef double complex a, b
    for base in range(0, size, block):
        for off in range(stride):
            i0 = base + off
            i1 = i0 + stride
            a = amps[i0]
            b = amps[i1]
            amps[i0] = m00 * a + m01 * b
            amps[i1] = m10 * a + m11 * b


def apply_cnot(double complex[::1] amps, int num_qubits, int control, int target):
    """Flip the target bit of every amplitude whose control bit is set."""
    cdef Py_ssize_t size = (<Py_ssize_t>1) << num_qubits
    cdef int shift_c = num_qubits - 1 - control
    cdef int shift_t = num_qubits - 1 - target
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << shift_t
    cdef Py_ssize_t i, j
    cdef double complex tmp
    for i in range(size):
        if ((i >> shift_c) & 1) == 1 and ((i >> shift_t) & 1) == 0:
            j = i | tbit
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp


def expect_z(double complex[::1] amps, int num_qubits, int qubit):
    """<Z> on one qubit: P(bit 0) - P(bit 1)."""
    cdef Py_ssize_t size = (<Py_ssize_t>1) << num_qubits
    cdef int shift = num_qubits - 1 - qubit
    cdef double acc = 0.0
    cdef double p
    cdef Py_ssize_t i
    for i in range(size):
        p = amps[i].real * amps[i].real + amps[i].imag * amps[i].imag
        if (i >> shift) & 1:
            acc -= p
        else:
            acc += p
    return acc
