import math

import numpy as np
import pytest

from vqcnet.statevector import (
    StateVector,
    apply_cnot,
    apply_hadamard,
    apply_ry,
    expect_z,
    new_state,
)

from dense_oracle import marginal_probs, random_product_state, random_state

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def as_state(amps):
    amps = np.asarray(amps, dtype=complex)
    n = int(math.log2(len(amps)))
    return StateVector(n, amps.copy())


def test_new_state_single_qubit():
    s = new_state(1)
    assert np.array_equal(s.amplitudes, np.array([1.0 + 0j, 0.0]))


def test_new_state_four_qubits():
    s = new_state(4)
    assert s.amplitudes.shape == (16,)
    assert s.amplitudes[0] == 1.0
    assert np.all(s.amplitudes[1:] == 0.0)


def test_new_state_zero_qubits_rejected():
    with pytest.raises(ValueError):
        new_state(0)


def test_new_state_qubit_cap():
    with pytest.raises(ValueError):
        new_state(25)


def test_hadamard_on_zero():
    s = apply_hadamard(new_state(1), 1)
    assert np.allclose(s.amplitudes, [INV_SQRT2, INV_SQRT2], atol=1e-15)


def test_hadamard_self_inverse_on_random_state():
    rng = np.random.default_rng(11)
    s = as_state(random_state(3, rng))
    out = apply_hadamard(apply_hadamard(s, 2), 2)
    assert np.allclose(out.amplitudes, s.amplitudes, atol=1e-12)


def test_bell_construction():
    s = apply_cnot(apply_hadamard(new_state(2), 1), 1, 2)
    expected = np.array([INV_SQRT2, 0.0, 0.0, INV_SQRT2])
    assert np.allclose(s.amplitudes, expected, atol=1e-12)


def test_ry_zero_is_identity():
    rng = np.random.default_rng(5)
    s = as_state(random_state(2, rng))
    out = apply_ry(s, 2, 0.0)
    assert np.array_equal(out.amplitudes, s.amplitudes)


def test_ry_pi_flips_zero_to_one():
    s = apply_ry(new_state(1), 1, math.pi)
    assert np.allclose(s.amplitudes, [0.0, 1.0], atol=1e-15)


def test_ry_half_pi_on_zero():
    s = apply_ry(new_state(1), 1, math.pi / 2)
    c = math.cos(math.pi / 4)
    assert np.allclose(s.amplitudes, [c, c], atol=1e-15)


def test_ry_rejects_non_finite_angle():
    s = new_state(1)
    for bad in (math.nan, math.inf, -math.inf):
        with pytest.raises(ValueError):
            apply_ry(s, 1, bad)


def test_cnot_flips_target_when_control_set():
    s = as_state([0.0, 0.0, 1.0, 0.0])  # |10>
    out = apply_cnot(s, 1, 2)
    assert np.array_equal(out.amplitudes, np.array([0, 0, 0, 1], dtype=complex))


def test_cnot_noop_when_control_unset():
    s = new_state(2)
    out = apply_cnot(s, 1, 2)
    assert np.array_equal(out.amplitudes, s.amplitudes)


def test_cnot_control_equals_target_rejected():
    with pytest.raises(ValueError):
        apply_cnot(new_state(2), 1, 1)


def test_qubit_index_out_of_range():
    s = new_state(2)
    for q in (0, 3, -1):
        with pytest.raises(ValueError):
            apply_hadamard(s, q)
    with pytest.raises(ValueError):
        expect_z(s, 5)
    with pytest.raises(ValueError):
        apply_cnot(s, 1, 3)


def test_expect_z_eigenstates():
    assert expect_z(new_state(1), 1) == pytest.approx(1.0, abs=1e-15)
    one = as_state([0.0, 1.0])
    assert expect_z(one, 1) == pytest.approx(-1.0, abs=1e-15)


def test_expect_z_after_ry():
    # closed form: <0| RY(t)^T Z RY(t) |0> = cos(t)
    s = apply_ry(new_state(1), 1, math.pi / 3)
    assert expect_z(s, 1) == pytest.approx(0.5, abs=1e-12)


def test_expect_z_all_plus_one_on_fresh_state():
    s = new_state(5)
    for q in range(1, 6):
        assert expect_z(s, q) == pytest.approx(1.0, abs=1e-15)


def test_operations_do_not_mutate_input():
    rng = np.random.default_rng(3)
    s = as_state(random_state(2, rng))
    before = s.amplitudes.copy()
    apply_hadamard(s, 1)
    apply_ry(s, 2, 0.7)
    apply_cnot(s, 2, 1)
    expect_z(s, 1)
    assert np.array_equal(s.amplitudes, before)


def test_norm_preserved_over_1000_random_gates():
    rng = np.random.default_rng(99)
    s = new_state(6)
    for _ in range(1000):
        kind = rng.integers(0, 3)
        q = int(rng.integers(1, 7))
        if kind == 0:
            s = apply_hadamard(s, q)
        elif kind == 1:
            s = apply_ry(s, q, float(rng.uniform(-math.pi, math.pi)))
        else:
            t = int(rng.integers(1, 7))
            if t == q:
                t = q % 6 + 1
            s = apply_cnot(s, q, t)
    assert abs(s.norm() - 1.0) <= 1e-10


def test_unitarity_identities_on_random_states():
    rng = np.random.default_rng(17)
    for _ in range(20):
        s = as_state(random_state(4, rng))
        hh = apply_hadamard(apply_hadamard(s, 3), 3)
        assert np.allclose(hh.amplitudes, s.amplitudes, atol=1e-12)
        cc = apply_cnot(apply_cnot(s, 2, 4), 2, 4)
        assert np.allclose(cc.amplitudes, s.amplitudes, atol=1e-12)
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        rr = apply_ry(apply_ry(s, 1, theta), 1, -theta)
        assert np.allclose(rr.amplitudes, s.amplitudes, atol=1e-12)


def test_gate_locality_on_product_states():
    # a gate on qubit q leaves every other qubit's marginal unchanged
    rng = np.random.default_rng(23)
    for _ in range(10):
        amps = random_product_state(4, rng)
        s = as_state(amps)
        q = int(rng.integers(1, 5))
        for out in (apply_hadamard(s, q), apply_ry(s, q, float(rng.uniform(-3, 3)))):
            for other in range(1, 5):
                if other == q:
                    continue
                before = marginal_probs(s.amplitudes, other, 4)
                after = marginal_probs(out.amplitudes, other, 4)
                assert np.allclose(before, after, atol=1e-10)
