"""Regression error metrics and binary skill scores.

Skill scores are computed in exact rational arithmetic (the confusion
counts are integers) and promoted to float only at the end, so identical
matrices always give bit-identical scores.  A score whose denominator is
zero is undefined: it is reported as NaN and named in ``undefined``
rather than being silently clamped to 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import EmptyInput, LengthMismatch, NonBinaryLabel, NonFiniteInput

__all__ = [
    "mae",
    "mse",
    "ConfusionMatrix",
    "confusion",
    "SkillScores",
    "skill_scores",
    "scores_to_dict",
]


def _check_pair(y_true, y_pred) -> tuple[np.ndarray, np.ndarray]:
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(
            f"shapes differ: {y_true.shape} vs {y_pred.shape}"
        )
    if y_true.size == 0:
        raise EmptyInput("no values to score")
    if not (np.isfinite(y_true).all() and np.isfinite(y_pred).all()):
        raise NonFiniteInput("metric inputs contain non-finite values")
    return y_true, y_pred


def mae(y_true, y_pred) -> float:
    y_true, y_pred = _check_pair(y_true, y_pred)
    return float(np.mean(np.abs(y_true - y_pred)))


def mse(y_true, y_pred) -> float:
    y_true, y_pred = _check_pair(y_true, y_pred)
    return float(np.mean((y_true - y_pred) ** 2))


@dataclass(frozen=True)
class ConfusionMatrix:
    """Binary confusion counts; entry (1,1) holds the true positives."""

    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "fn", "tn"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 0:
                raise ValueError(f"{name} must be a non-negative integer")
            object.__setattr__(self, name, int(value))
        if self.total == 0:
            raise EmptyInput("confusion matrix is empty")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def as_rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.tp, self.fp), (self.fn, self.tn))


def confusion(y_true, y_pred) -> ConfusionMatrix:
    """Count agreement between two {0, 1} label vectors."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(f"shapes differ: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise EmptyInput("no labels to compare")
    for name, values in (("y_true", y_true), ("y_pred", y_pred)):
        if not np.isin(values, (0, 1)).all():
            raise NonBinaryLabel(f"{name} contains values other than 0 and 1")
    y_true = y_true.astype(int)
    y_pred = y_pred.astype(int)
    return ConfusionMatrix(
        tp=int(np.sum((y_true == 1) & (y_pred == 1))),
        fp=int(np.sum((y_true == 0) & (y_pred == 1))),
        fn=int(np.sum((y_true == 1) & (y_pred == 0))),
        tn=int(np.sum((y_true == 0) & (y_pred == 0))),
    )


@dataclass(frozen=True)
class SkillScores:
    sensitivity: float
    specificity: float
    accuracy: float
    tss: float
    hss: float
    undefined: tuple[str, ...] = ()


def _ratio(numerator: int, denominator: int) -> Fraction | None:
    if denominator == 0:
        return None
    return Fraction(numerator, denominator)


def skill_scores(cm: ConfusionMatrix) -> SkillScores:
    """Sensitivity, specificity, accuracy, TSS and HSS from the counts.

    TSS = sensitivity + specificity - 1.  HSS uses
    ``2*(tp*tn - fn*fp) / ((tp+fn)*(fn+tn) + (tp+fp)*(fp+tn))``.
    """
    tp, fp, fn, tn = cm.tp, cm.fp, cm.fn, cm.tn
    sens = _ratio(tp, tp + fn)
    spec = _ratio(tn, tn + fp)
    acc = _ratio(tp + tn, cm.total)
    tss = sens + spec - 1 if (sens is not None and spec is not None) else None
    hss_denominator = (tp + fn) * (fn + tn) + (tp + fp) * (fp + tn)
    hss = (
        Fraction(2 * (tp * tn - fn * fp), hss_denominator)
        if hss_denominator != 0
        else None
    )
    named = {
        "sensitivity": sens,
        "specificity": spec,
        "accuracy": acc,
        "tss": tss,
        "hss": hss,
    }
    undefined = tuple(name for name, value in named.items() if value is None)
    as_float = {
        name: (float(value) if value is not None else math.nan)
        for name, value in named.items()
    }
    return SkillScores(undefined=undefined, **as_float)


def scores_to_dict(cm: ConfusionMatrix, scores: SkillScores | None = None) -> dict:
    if scores is None:
        scores = skill_scores(cm)
    return {
        "confusion": [[cm.tp, cm.fp], [cm.fn, cm.tn]],
        "scores": {
            "sensitivity": scores.sensitivity,
            "specificity": scores.specificity,
            "accuracy": scores.accuracy,
            "tss": scores.tss,
            "hss": scores.hss,
        },
        "undefined": list(scores.undefined),
    }
