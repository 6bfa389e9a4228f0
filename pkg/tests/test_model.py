import numpy as np
import pytest

from vqcnet import circuit, nn
from vqcnet.data import Sample, gen_synthetic
from vqcnet.model import (
    ClassicalBaseline,
    HybridModel,
    TrainConfig,
    classical_forward,
    evaluate,
    hybrid_backward,
    hybrid_forward,
    init_classical,
    init_hybrid,
    num_parameters,
    predict_label,
    train,
    zero_classical,
    zero_hybrid,
)


def make_samples(n, seed=0, scale=1.0):
    rng = np.random.default_rng(seed)
    return [
        Sample(rng.normal(0, scale, 512).astype(np.float32), int(i % 2))
        for i in range(n)
    ]


def test_zero_model_gives_zero_logits():
    model = zero_hybrid(depth=3)
    logits = hybrid_forward(model, np.ones(512))
    assert np.array_equal(logits, np.zeros(2))


def test_forward_shape_and_finiteness():
    rng = np.random.default_rng(21)
    for seed in range(10):
        model = init_hybrid(depth=2, seed=seed)
        logits = hybrid_forward(model, rng.normal(0, 2, 512))
        assert logits.shape == (2,)
        assert np.all(np.isfinite(logits))


def test_forward_matches_manual_composition():
    model = init_hybrid(depth=3, seed=77)
    x = np.random.default_rng(3).normal(0, 1, 512)
    z = nn.linear_forward(model.pre, x)
    expectations = circuit.vqc_forward(z, model.vqc_weights)
    manual = nn.linear_forward(model.post, expectations)
    assert np.array_equal(hybrid_forward(model, x), manual)


def test_forward_rejects_wrong_length():
    model = init_hybrid(depth=1, seed=0)
    with pytest.raises(ValueError):
        hybrid_forward(model, np.zeros(100))


def test_parameter_count():
    for depth in (1, 3, 5):
        model = init_hybrid(depth=depth, seed=0)
        assert num_parameters(model) == 512 * 4 + 4 + depth * 4 + 4 * 2 + 2
    assert num_parameters(init_classical(0)) == 512 * 2 + 2


def test_dimension_validation():
    with pytest.raises(ValueError):
        HybridModel(
            pre=nn.zero_linear(100, 4),
            vqc_weights=np.zeros((1, 4)),
            post=nn.zero_linear(4, 2),
        )
    with pytest.raises(ValueError):
        ClassicalBaseline(head=nn.zero_linear(512, 3))


def test_hybrid_gradient_matches_finite_differences():
    rng = np.random.default_rng(31)
    step = 1e-5
    for seed in (1, 2):
        model = init_hybrid(depth=2, seed=seed)
        x = rng.normal(0, 1, 512)
        label = int(rng.integers(0, 2))
        _, grads = hybrid_backward(model, x, label)
        analytic = np.concatenate([g.reshape(-1) for g in grads])

        def loss_only():
            return nn.softmax_cross_entropy(model.forward(x), label).value

        fd = []
        for arr in model.parameters():
            flat = arr.reshape(-1)
            for i in range(flat.size):
                saved = flat[i]
                flat[i] = saved + step
                plus = loss_only()
                flat[i] = saved - step
                minus = loss_only()
                flat[i] = saved
                fd.append((plus - minus) / (2 * step))
        fd = np.array(fd)
        scale = max(1.0, np.max(np.abs(fd)))
        assert np.max(np.abs(analytic - fd)) / scale <= 1e-4


def test_gradients_vanish_when_prediction_saturated():
    # post bias pushed to +-200: softmax rounds to an exact one-hot
    model = zero_hybrid(depth=1)
    model.post.bias[:] = [200.0, -200.0]
    _, grads = hybrid_backward(model, np.zeros(512), 0)
    for g in grads:
        assert np.max(np.abs(g)) <= 1e-50


def test_pre_gradient_row_zero_when_angle_gradient_zero():
    # depth 0: qubits stay independent, so zeroing the post column for
    # qubit k kills dL/dangle_k and with it the pre-layer row k
    model = HybridModel(
        pre=nn.init_linear(512, 4, np.random.default_rng(5)),
        vqc_weights=np.zeros((0, 4)),
        post=nn.init_linear(4, 2, np.random.default_rng(6)),
    )
    model.post.weights[:, 2] = 0.0
    _, grads = hybrid_backward(model, np.random.default_rng(7).normal(0, 1, 512), 1)
    grad_pre_w = grads[0]
    # row 2 only carries shift-rule rounding residue, many orders below the
    # live rows
    assert np.abs(grad_pre_w[2]).max() <= 1e-18
    assert np.abs(grad_pre_w[[0, 1, 3]]).max() > 1e-6


def test_classical_forward_is_the_head():
    baseline = init_classical(9)
    x = np.random.default_rng(1).normal(0, 1, 512)
    assert np.array_equal(
        classical_forward(baseline, x), nn.linear_forward(baseline.head, x)
    )


def test_classical_gradient_matches_finite_differences():
    rng = np.random.default_rng(41)
    baseline = init_classical(3)
    x = rng.normal(0, 1, 512)
    step = 1e-5
    _, _, grads = baseline.loss_and_gradients(x, 1)
    analytic = np.concatenate([g.reshape(-1) for g in grads])
    fd = []
    for arr in baseline.parameters():
        flat = arr.reshape(-1)
        for i in range(flat.size):
            saved = flat[i]
            flat[i] = saved + step
            plus, _, _ = baseline.loss_and_gradients(x, 1)
            flat[i] = saved - step
            minus, _, _ = baseline.loss_and_gradients(x, 1)
            flat[i] = saved
            fd.append((plus - minus) / (2 * step))
    assert np.max(np.abs(analytic - np.array(fd))) <= 1e-6


def test_predict_label_ties_to_zero():
    assert predict_label(np.array([0.0, 0.0])) == 0
    assert predict_label(np.array([1.5, 1.5])) == 0
    assert predict_label(np.array([0.0, 0.1])) == 1


def test_predict_label_shift_invariant():
    rng = np.random.default_rng(2)
    for _ in range(50):
        logits = rng.normal(0, 1, 2)
        shift = rng.normal(0, 10)
        assert predict_label(logits) == predict_label(logits + shift)


def test_evaluate_always_positive_model():
    baseline = zero_classical()
    baseline.head.bias[:] = [-1.0, 1.0]  # logits (-1, 1) for any input
    samples = make_samples(40)
    preds, cm = evaluate(baseline, samples)
    assert all(p == 1 for p in preds)
    assert cm.tp == 20 and cm.fp == 20 and cm.tn == 0 and cm.fn == 0


def test_evaluate_zero_model_predicts_class_zero():
    preds, cm = evaluate(zero_hybrid(2), make_samples(10))
    assert all(p == 0 for p in preds)
    assert cm.total == 10


def test_evaluate_counts_partition_dataset():
    model = init_hybrid(depth=1, seed=5)
    samples = make_samples(23)
    _, cm = evaluate(model, samples)
    assert cm.total == len(samples)


def test_evaluate_empty_rejected():
    with pytest.raises(ValueError):
        evaluate(zero_hybrid(1), [])


def test_train_empty_rejected():
    with pytest.raises(ValueError):
        train(init_hybrid(1, 0), [], TrainConfig(epochs=1))


def test_train_deterministic_bitwise():
    samples = gen_synthetic(10, 3.0, 0.5, seed=11)
    config = TrainConfig(epochs=2, batch_size=8, depth=1, seed=5)
    histories, finals = [], []
    for _ in range(2):
        model = init_hybrid(depth=1, seed=5)
        history = train(model, samples, config)
        histories.append([(h.train_loss, h.train_acc) for h in history])
        finals.append(np.concatenate([p.reshape(-1) for p in model.parameters()]))
    assert histories[0] == histories[1]
    assert np.array_equal(finals[0], finals[1])


def test_train_history_length_and_epoch_numbers():
    samples = gen_synthetic(5, 2.0, 0.5, seed=1)
    history = train(init_hybrid(1, 0), samples, TrainConfig(epochs=3, depth=1, seed=0))
    assert [h.epoch for h in history] == [1, 2, 3]
    assert all(h.val_loss is None for h in history)


def test_train_zero_learning_rate_constant_loss():
    samples = gen_synthetic(8, 2.0, 0.5, seed=2)
    config = TrainConfig(epochs=3, learning_rate=0.0, depth=1, seed=3)
    history = train(init_hybrid(1, 3), samples, config)
    losses = {h.train_loss for h in history}
    assert len(losses) == 1


def test_train_validation_metrics_reported():
    samples = gen_synthetic(8, 3.0, 0.3, seed=4)
    config = TrainConfig(epochs=2, depth=1, seed=1)
    history = train(init_hybrid(1, 1), samples[:12], config, val_samples=samples[12:])
    for h in history:
        assert h.val_loss is not None and 0.0 <= h.val_acc <= 1.0


def test_train_learns_separable_data():
    samples = gen_synthetic(30, 6.0, 0.2, seed=9)
    config = TrainConfig(epochs=8, depth=2, seed=2)
    model = init_hybrid(depth=2, seed=2)
    history = train(model, samples, config)
    assert history[-1].train_acc >= 0.95
    assert history[-1].train_loss < history[0].train_loss
