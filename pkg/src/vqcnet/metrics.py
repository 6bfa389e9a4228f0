"""Confusion-matrix metrics and McNemar's paired significance test.

The positive class is label 1 ("demented") throughout. Metrics whose
denominator is zero come back as 0.0 and are listed in `degenerate` so the
report stays serializable.
"""
import math
from dataclasses import dataclass

DEFAULT_ALPHA = 0.05


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")

    @property
    def total(self):
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    recall: float
    precision: float
    f1: float
    degenerate: tuple = ()


@dataclass(frozen=True)
class McNemarResult:
    """Continuity-corrected chi-square variant (the correction clamps at 0)."""

    b: int  # first model wrong, second right
    c: int  # first model right, second wrong
    chi_square: float
    p_value: float
    no_discordance: bool = False


def _check_binary(values, name):
    for i, v in enumerate(values):
        if v not in (0, 1):
            raise ValueError(f"{name}[{i}] must be 0 or 1, got {v!r}")


def confusion(predictions, labels):
    """Count TP/TN/FP/FN with label 1 as the positive class."""
    if len(predictions) != len(labels):
        raise ValueError(
            f"length mismatch: {len(predictions)} predictions vs {len(labels)} labels"
        )
    if not labels:
        raise ValueError("cannot build a confusion matrix from empty inputs")
    _check_binary(predictions, "predictions")
    _check_binary(labels, "labels")
    tp = tn = fp = fn = 0
    for p, y in zip(predictions, labels):
        if y == 1:
            if p == 1:
                tp += 1
            else:
                fn += 1
        else:
            if p == 1:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, tn=tn, fp=fp, fn=fn)


def metrics(cm):
    """Accuracy, recall, precision, F1 from the confusion counts."""
    if cm.total == 0:
        raise ValueError("confusion matrix has no counts")
    degenerate = []
    accuracy = (cm.tp + cm.tn) / cm.total
    if cm.tp + cm.fn == 0:
        recall = 0.0
        degenerate.append("recall")
    else:
        recall = cm.tp / (cm.tp + cm.fn)
    if cm.tp + cm.fp == 0:
        precision = 0.0
        degenerate.append("precision")
    else:
        precision = cm.tp / (cm.tp + cm.fp)
    if recall + precision == 0.0:
        f1 = 0.0
        degenerate.append("f1")
    else:
        f1 = 2.0 * recall * precision / (recall + precision)
    return MetricsReport(
        accuracy=accuracy,
        recall=recall,
        precision=precision,
        f1=f1,
        degenerate=tuple(degenerate),
    )


def mcnemar(preds_a, preds_b, labels):
    """McNemar's test on the discordant predictions of two classifiers.

    b counts samples A got wrong and B right, c the reverse. The statistic
    is (|b-c|-1)^2 / (b+c) with the continuity term clamped at 0 when
    |b-c| <= 1; the p-value is the chi-square(df=1) survival function,
    computed as erfc(sqrt(chi2/2)).
    """
    if not (len(preds_a) == len(preds_b) == len(labels)):
        raise ValueError(
            f"length mismatch: {len(preds_a)}, {len(preds_b)} predictions vs {len(labels)} labels"
        )
    if not labels:
        raise ValueError("cannot run McNemar's test on empty inputs")
    _check_binary(preds_a, "preds_a")
    _check_binary(preds_b, "preds_b")
    _check_binary(labels, "labels")
    b = c = 0
    for pa, pb, y in zip(preds_a, preds_b, labels):
        a_right = pa == y
        b_right = pb == y
        if not a_right and b_right:
            b += 1
        elif a_right and not b_right:
            c += 1
    if b + c == 0:
        return McNemarResult(b=0, c=0, chi_square=0.0, p_value=1.0, no_discordance=True)
    corrected = max(abs(b - c) - 1, 0)
    chi_square = corrected * corrected / (b + c)
    p_value = math.erfc(math.sqrt(chi_square / 2.0))
    return McNemarResult(b=b, c=c, chi_square=chi_square, p_value=p_value)


def format_report(items):
    """Flat key-value document: one `name value` line per entry.

    Floats are printed with 6 significant digits; other values verbatim.
    """
    lines = []
    for key, value in items:
        if isinstance(value, float):
            lines.append(f"{key} {value:.6g}")
        else:
            lines.append(f"{key} {value}")
    return "\n".join(lines) + "\n"
