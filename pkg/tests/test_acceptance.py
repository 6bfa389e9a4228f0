"""Acceptance suite: one test per release criterion, at pinned tolerances.

Each test prints a PASS/FAIL verdict line (visible with `pytest -s` or in
the captured output of failing tests).
"""
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from vqcnet import circuit
from vqcnet.cli import main as cli_main
from vqcnet.data import gen_synthetic, split
from vqcnet.gradcheck import run_gradcheck
from vqcnet.metrics import ConfusionMatrix, mcnemar, metrics
from vqcnet.model import TrainConfig, evaluate, init_hybrid, train, zero_classical
from vqcnet.qasm import export_qasm
from vqcnet.statevector import apply_cnot, apply_hadamard, apply_ry, new_state

from dense_oracle import random_state, vqc_forward_dense
from test_qasm import GOLDEN, gate_census


@contextmanager
def criterion(name):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE FAIL: {name}")
        raise
    print(f"ACCEPTANCE PASS: {name} ({time.monotonic() - start:.1f}s)")


def test_gate_algebra_suite():
    with criterion("gate algebra: unitary identities and norm drift"):
        start = time.monotonic()
        rng = np.random.default_rng(2024)

        from vqcnet.statevector import StateVector

        for _ in range(25):
            s = StateVector(4, random_state(4, rng).astype(np.complex128))
            hh = apply_hadamard(apply_hadamard(s, 2), 2)
            assert np.allclose(hh.amplitudes, s.amplitudes, atol=1e-12)
            cc = apply_cnot(apply_cnot(s, 1, 3), 1, 3)
            assert np.allclose(cc.amplitudes, s.amplitudes, atol=1e-12)
            theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
            rr = apply_ry(apply_ry(s, 4, theta), 4, -theta)
            assert np.allclose(rr.amplitudes, s.amplitudes, atol=1e-12)

        state = new_state(6)
        for _ in range(1000):
            kind = int(rng.integers(0, 3))
            q = int(rng.integers(1, 7))
            if kind == 0:
                state = apply_hadamard(state, q)
            elif kind == 1:
                state = apply_ry(state, q, float(rng.uniform(-math.pi, math.pi)))
            else:
                t = int(rng.integers(1, 7))
                if t == q:
                    t = q % 6 + 1
                state = apply_cnot(state, q, t)
        assert abs(state.norm() - 1.0) <= 1e-10
        assert time.monotonic() - start < 5.0


def test_bell_construction():
    with criterion("Bell state from H then CNOT"):
        state = apply_cnot(apply_hadamard(new_state(2), 1), 1, 2)
        expected = np.array([1 / math.sqrt(2), 0.0, 0.0, 1 / math.sqrt(2)])
        assert np.max(np.abs(state.amplitudes - expected)) <= 1e-12


def test_vqc_oracle_equivalence():
    with criterion("circuit vs dense 16x16 Kronecker oracle, 100 draws"):
        start = time.monotonic()
        rng = np.random.default_rng(77)
        for _ in range(100):
            depth = int(rng.integers(0, 5))
            features = rng.normal(0.0, 2.0, 4)
            weights = rng.uniform(-math.pi, math.pi, (depth, 4))
            fast = circuit.vqc_forward(features, weights)
            dense = vqc_forward_dense(features, weights)
            assert np.max(np.abs(fast - dense)) <= 1e-10
        assert time.monotonic() - start < 10.0


def test_gradient_suite():
    with criterion("gradients vs finite differences (circuit/dense/full)"):
        start = time.monotonic()
        results = {r.name: r for r in run_gradcheck(seed=42)}
        assert results["circuit"].max_error <= 1e-5
        assert results["dense"].max_error <= 1e-6
        assert results["full-model"].max_error <= 1e-4
        assert time.monotonic() - start < 30.0


def test_metrics_golden():
    with criterion("confusion counts reproduce the reported metric rows"):
        hybrid = metrics(ConfusionMatrix(tp=98, fn=2, tn=95, fp=5))
        assert round(hybrid.accuracy, 3) == 0.965
        assert round(hybrid.recall, 3) == 0.980
        assert round(hybrid.precision, 3) == 0.951
        assert round(hybrid.f1, 3) == 0.966
        classical = metrics(ConfusionMatrix(tp=91, fn=9, tn=89, fp=11))
        assert round(classical.accuracy, 3) == 0.900
        assert round(classical.recall, 2) == 0.91
        assert round(classical.precision, 3) == 0.892
        assert round(classical.f1, 3) == 0.901


@pytest.fixture(scope="module")
def synthetic_dataset():
    return gen_synthetic(100, 4.0, 0.5, seed=7)


def test_end_to_end_training(synthetic_dataset):
    with criterion("hybrid training converges on the synthetic dataset"):
        start = time.monotonic()
        config = TrainConfig(epochs=20, learning_rate=1e-4, batch_size=32,
                             depth=3, seed=42)
        model = init_hybrid(depth=3, seed=config.seed)
        history = train(model, synthetic_dataset, config)
        assert len(history) == 20
        assert history[-1].train_acc >= 0.95
        losses = [h.train_loss for h in history]
        windows = [np.mean(losses[i:i + 5]) for i in range(0, 20, 5)]
        for earlier, later in zip(windows, windows[1:]):
            assert later < earlier
        assert time.monotonic() - start < 180.0


def test_comparative_harness(synthetic_dataset):
    with criterion("McNemar: trained hybrid vs zero baseline, plus unit case"):
        parts = split(synthetic_dataset, 0.7, 0.15, seed=7)
        config = TrainConfig(epochs=20, learning_rate=1e-4, batch_size=32,
                             depth=3, seed=42)
        model = init_hybrid(depth=3, seed=config.seed)
        train(model, parts.train, config)
        baseline = zero_classical()
        preds_hybrid, _ = evaluate(model, parts.test)
        preds_baseline, _ = evaluate(baseline, parts.test)
        labels = [s.label for s in parts.test]
        result = mcnemar(preds_hybrid, preds_baseline, labels)
        assert result.p_value < 0.05

        # frozen unit case: b=10, c=2
        preds_a = [0] * 10 + [1] * 2 + [1] * 8
        preds_b = [1] * 10 + [0] * 2 + [1] * 8
        unit = mcnemar(preds_a, preds_b, [1] * 20)
        assert unit.chi_square == pytest.approx(4.0833, abs=1e-3)
        assert unit.p_value == pytest.approx(0.0433, abs=1e-3)


def test_train_cli_determinism(tmp_path):
    with criterion("seeded train runs are bitwise identical"):
        args = ["train", "--synthetic", "20,4.0,0.5,7", "--epochs", "3",
                "--depth", "2", "--seed", "11"]
        assert cli_main(args + ["--out", str(tmp_path / "run1")]) == 0
        assert cli_main(args + ["--out", str(tmp_path / "run2")]) == 0
        for name in ("history.csv", "checkpoint.json"):
            first = (tmp_path / "run1" / name).read_bytes()
            second = (tmp_path / "run2" / name).read_bytes()
            assert first == second


def test_qasm_golden():
    with criterion("QASM export matches the golden file byte for byte"):
        with open(GOLDEN, "rb") as fh:
            golden = fh.read()
        program = export_qasm(3, math.pi / 2)
        assert program.encode("utf-8") == golden
        census = gate_census(program)
        assert census["ry"] == 16
        assert census["cx"] == 9
