"""Confusion counts and the eight derived performance metrics.

Any metric whose denominator is zero is undefined and reported as None,
never as NaN or a silent zero; renderers decide how to display that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DataError


@dataclass(frozen=True)
class Confusion:
    """Binary confusion counts with +1 as the positive class."""

    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        for name in ("tp", "fp", "tn", "fn"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise DataError(f"confusion count {name} must be a non-negative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    def __add__(self, other: "Confusion") -> "Confusion":
        return Confusion(
            self.tp + other.tp, self.fp + other.fp,
            self.tn + other.tn, self.fn + other.fn,
        )

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def tally(decision: int, truth: int) -> "Confusion":  # noqa: N805
        """One-image confusion increment."""
        if truth == 1:
            return Confusion(tp=1) if decision == 1 else Confusion(fn=1)
        return Confusion(fp=1) if decision == 1 else Confusion(tn=1)

    tally = staticmethod(tally)


@dataclass(frozen=True)
class MetricSet:
    """The eight reported metrics; None marks an undefined value.

    ``positive_prevalence`` is the share of ground-truth positives, kept
    alongside accuracy because the two are easy to conflate and verbose
    output reports both.
    """

    tpr: float | None
    tnr: float | None
    ppv: float | None
    npv: float | None
    acc: float | None
    f1_pos: float | None
    f1_neg: float | None
    mcc: float | None
    positive_prevalence: float | None = None

    def as_row(self) -> tuple:
        return (self.tpr, self.tnr, self.ppv, self.npv,
                self.acc, self.f1_pos, self.f1_neg, self.mcc)


METRIC_NAMES = ("tpr", "tnr", "ppv", "npv", "acc", "f1_pos", "f1_neg", "mcc")


def _ratio(num: float, den: float) -> float | None:
    return None if den == 0 else num / den


def _f1(precision: float | None, recall: float | None) -> float | None:
    if precision is None or recall is None:
        return None
    return _ratio(2.0 * precision * recall, precision + recall)


def compute_metrics(c: Confusion) -> MetricSet:
    if c.total == 0:
        raise DataError("cannot compute metrics for an empty confusion")
    tp, fp, tn, fn = float(c.tp), float(c.fp), float(c.tn), float(c.fn)
    tpr = _ratio(tp, tp + fn)
    tnr = _ratio(tn, tn + fp)
    ppv = _ratio(tp, tp + fp)
    npv = _ratio(tn, tn + fn)
    acc = (tp + tn) / c.total
    mcc_den2 = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    mcc = None if mcc_den2 == 0 else (tp * tn - fp * fn) / math.sqrt(mcc_den2)
    return MetricSet(
        tpr=tpr,
        tnr=tnr,
        ppv=ppv,
        npv=npv,
        acc=acc,
        f1_pos=_f1(ppv, tpr),
        f1_neg=_f1(npv, tnr),
        mcc=mcc,
        positive_prevalence=(tp + fn) / c.total,
    )
