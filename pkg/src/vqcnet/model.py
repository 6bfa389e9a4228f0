"""The dressed-circuit classifier, its classical comparator, and training.

Hybrid forward path: 512 features -> linear 512->4 -> tanh angle encoding ->
4-qubit variational circuit -> per-qubit <Z> -> linear 4->2 logits. There is
no activation between the reduction layer and the encoding (tanh already
bounds the angles) and none on the logits.

Training is a pure function of (dataset order, config seed): weight init
draws from default_rng(seed) in declared parameter order, and epoch e is
shuffled by default_rng([seed, e]). Repeated runs agree bitwise.
"""
from dataclasses import dataclass

import numpy as np

from . import circuit, nn
from .metrics import confusion

IN_FEATURES = 512
HIDDEN = 4
NUM_CLASSES = 2

_SEED_MASK = (1 << 64) - 1


@dataclass
class TrainConfig:
    epochs: int = 20
    learning_rate: float = 1e-4
    batch_size: int = 32
    depth: int = 3
    seed: int = 42

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.learning_rate < 0:
            raise ValueError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")


@dataclass
class HybridModel:
    """Reduction layer, variational weights, readout head."""

    pre: nn.LinearLayer        # 512 -> 4
    vqc_weights: np.ndarray    # (depth, 4) radians
    post: nn.LinearLayer       # 4 -> 2

    def __post_init__(self):
        if (self.pre.in_dim, self.pre.out_dim) != (IN_FEATURES, HIDDEN):
            raise ValueError(
                f"pre layer must be {IN_FEATURES}->{HIDDEN}, "
                f"got {self.pre.in_dim}->{self.pre.out_dim}"
            )
        if (self.post.in_dim, self.post.out_dim) != (HIDDEN, NUM_CLASSES):
            raise ValueError(
                f"post layer must be {HIDDEN}->{NUM_CLASSES}, "
                f"got {self.post.in_dim}->{self.post.out_dim}"
            )
        self.vqc_weights = np.asarray(self.vqc_weights, dtype=np.float64)
        if self.vqc_weights.ndim != 2 or self.vqc_weights.shape[1] != HIDDEN:
            raise ValueError(
                f"vqc_weights must have shape (depth, {HIDDEN}), got {self.vqc_weights.shape}"
            )

    @property
    def depth(self):
        return self.vqc_weights.shape[0]

    def parameters(self):
        """Live parameter arrays in declared order: pre, vqc, post."""
        return [self.pre.weights, self.pre.bias, self.vqc_weights,
                self.post.weights, self.post.bias]

    def set_parameters(self, arrays):
        self.pre.weights, self.pre.bias, self.vqc_weights, \
            self.post.weights, self.post.bias = arrays

    def forward(self, features):
        z = nn.linear_forward(self.pre, features)
        expectations = circuit.vqc_forward(z, self.vqc_weights)
        return nn.linear_forward(self.post, expectations)

    def loss_and_gradients(self, features, label):
        """Cross-entropy loss, logits, and gradients in parameters() order."""
        x = np.asarray(features, dtype=np.float64)
        z = nn.linear_forward(self.pre, x)
        expectations = circuit.vqc_forward(z, self.vqc_weights)
        logits = nn.linear_forward(self.post, expectations)
        loss = nn.softmax_cross_entropy(logits, label)
        grad_post_w, grad_post_b, grad_expect = nn.linear_backward(
            self.post, expectations, loss.grad_logits
        )
        grad_vqc, grad_z = circuit.vqc_gradient(z, self.vqc_weights, grad_expect)
        grad_pre_w, grad_pre_b, _ = nn.linear_backward(self.pre, x, grad_z)
        grads = [grad_pre_w, grad_pre_b, grad_vqc, grad_post_w, grad_post_b]
        return loss.value, logits, grads


@dataclass
class ClassicalBaseline:
    """Single 512->2 head; the classical comparator at desk scale."""

    head: nn.LinearLayer

    def __post_init__(self):
        if (self.head.in_dim, self.head.out_dim) != (IN_FEATURES, NUM_CLASSES):
            raise ValueError(
                f"baseline head must be {IN_FEATURES}->{NUM_CLASSES}, "
                f"got {self.head.in_dim}->{self.head.out_dim}"
            )

    def parameters(self):
        return [self.head.weights, self.head.bias]

    def set_parameters(self, arrays):
        self.head.weights, self.head.bias = arrays

    def forward(self, features):
        return nn.linear_forward(self.head, features)

    def loss_and_gradients(self, features, label):
        x = np.asarray(features, dtype=np.float64)
        logits = nn.linear_forward(self.head, x)
        loss = nn.softmax_cross_entropy(logits, label)
        grad_w, grad_b, _ = nn.linear_backward(self.head, x, loss.grad_logits)
        return loss.value, logits, [grad_w, grad_b]


@dataclass
class EpochStats:
    epoch: int
    train_loss: float
    train_acc: float
    val_loss: float = None
    val_acc: float = None


def init_hybrid(depth, seed):
    """Seeded hybrid model; draws in declared order pre, vqc, post."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    rng = np.random.default_rng(seed & _SEED_MASK)
    pre = nn.init_linear(IN_FEATURES, HIDDEN, rng)
    vqc_weights = rng.normal(0.0, nn.INIT_SIGMA, size=(depth, HIDDEN))
    post = nn.init_linear(HIDDEN, NUM_CLASSES, rng)
    return HybridModel(pre=pre, vqc_weights=vqc_weights, post=post)


def init_classical(seed):
    rng = np.random.default_rng(seed & _SEED_MASK)
    return ClassicalBaseline(head=nn.init_linear(IN_FEATURES, NUM_CLASSES, rng))


def zero_hybrid(depth):
    return HybridModel(
        pre=nn.zero_linear(IN_FEATURES, HIDDEN),
        vqc_weights=np.zeros((depth, HIDDEN)),
        post=nn.zero_linear(HIDDEN, NUM_CLASSES),
    )


def zero_classical():
    return ClassicalBaseline(head=nn.zero_linear(IN_FEATURES, NUM_CLASSES))


def num_parameters(model):
    return sum(p.size for p in model.parameters())


def hybrid_forward(model, features):
    """Logits of the dressed circuit; `features` has length 512."""
    return model.forward(features)


def hybrid_backward(model, features, label):
    """(loss, gradients) of the cross-entropy loss for one sample."""
    loss, _, grads = model.loss_and_gradients(features, label)
    return loss, grads


def classical_forward(baseline, features):
    return baseline.forward(features)


def classical_backward(baseline, features, label):
    loss, _, grads = baseline.loss_and_gradients(features, label)
    return loss, grads


def predict_label(logits):
    """Argmax with exact ties resolving to class 0."""
    return 1 if logits[1] > logits[0] else 0


def _mean_loss_and_acc(model, samples):
    total, correct = 0.0, 0
    for s in samples:
        logits = model.forward(s.features)
        total += nn.softmax_cross_entropy(logits, s.label).value
        correct += int(predict_label(logits) == s.label)
    return total / len(samples), correct / len(samples)


def train(model, samples, config, val_samples=None):
    """Run epochs x ceil(N/batch) Adam steps on the mean batch loss.

    Returns one EpochStats per epoch. Train loss/accuracy accumulate over
    the epoch as batches are visited (metrics reflect the parameters each
    batch was scored with); validation metrics use the end-of-epoch model.
    The last partial batch is kept. Gradients accumulate in batch order.
    """
    if not samples:
        raise ValueError("cannot train on an empty dataset")
    states = [nn.AdamState.for_param(p) for p in model.parameters()]
    history = []
    n = len(samples)
    for epoch in range(config.epochs):
        order = np.random.default_rng(
            [config.seed & _SEED_MASK, epoch]
        ).permutation(n)
        # per-sample scores keyed by original index so the epoch totals do
        # not depend on the shuffle order
        sample_loss = np.zeros(n)
        sample_correct = np.zeros(n, dtype=bool)
        for start in range(0, n, config.batch_size):
            # gradients accumulate in ascending sample index
            batch = np.sort(order[start:start + config.batch_size])
            params = model.parameters()
            grad_sums = [np.zeros_like(p) for p in params]
            for i in batch:
                sample = samples[i]
                loss, logits, grads = model.loss_and_gradients(sample.features, sample.label)
                sample_loss[i] = loss
                sample_correct[i] = predict_label(logits) == sample.label
                for acc, g in zip(grad_sums, grads):
                    acc += g
            scale = 1.0 / len(batch)
            updated = [
                nn.adam_step(p, g * scale, st, config.learning_rate)
                for p, g, st in zip(params, grad_sums, states)
            ]
            model.set_parameters(updated)
        stats = EpochStats(
            epoch=epoch + 1,
            train_loss=float(sample_loss.sum() / n),
            train_acc=float(sample_correct.sum() / n),
        )
        if val_samples:
            stats.val_loss, stats.val_acc = _mean_loss_and_acc(model, val_samples)
        history.append(stats)
    return history


def evaluate(model, samples):
    """Predictions plus the confusion matrix (label 1 positive)."""
    if not samples:
        raise ValueError("cannot evaluate on an empty dataset")
    predictions = [predict_label(model.forward(s.features)) for s in samples]
    labels = [s.label for s in samples]
    return predictions, confusion(predictions, labels)
