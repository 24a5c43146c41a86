"""Progressively type-II censored competing-risks data and its log-likelihood.

A sample records m ordered failures out of n units.  At the i-th failure the
time t_i, the failing cause delta_i in {1, 2} and the number R_i of surviving
units withdrawn immediately afterwards are kept.  Accounting requires
n = m + sum(R_i).

With u_i = (t_i / alpha) ** beta and m1 failures from cause 1, the
log-likelihood (combinatorial normalising constant excluded by default) is

    l = m1 * log(lambda1) + (m - m1) * log(lambda2) + m * log(beta)
        + sum(u_i) + (beta - 1) * sum(log(t_i / alpha))
        - (lambda1 + lambda2) * alpha * sum((R_i + 1) * (exp(u_i) - 1))

Cause-1 records contribute their cause-1 density times the cause-2 survival,
and symmetrically for cause 2; which factor carries the density is decided by
the recorded cause label, never by the record's position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .model import ModelParams, _EXP_CLAMP

__all__ = [
    "Cause",
    "Record",
    "ProgressiveSample",
    "log_likelihood",
    "d2_loglik",
]


class Cause(IntEnum):
    CAUSE1 = 1
    CAUSE2 = 2


@dataclass(frozen=True)
class Record:
    """One ordered failure: time, failing cause and units removed after it."""

    time: float
    cause: int
    removed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.time) and self.time > 0.0):
            raise ValueError(f"failure time must be positive and finite, got {self.time!r}")
        if self.cause not in (1, 2):
            raise ValueError(f"cause must be 1 or 2, got {self.cause!r}")
        if not isinstance(self.removed, (int, np.integer)) or isinstance(self.removed, bool):
            raise ValueError(f"removed must be an integer, got {self.removed!r}")
        if self.removed < 0:
            raise ValueError(f"removed must be nonnegative, got {self.removed}")


class ProgressiveSample:
    """Ordered failure records plus the initial cohort size n.

    Validates strict time ordering and the accounting identity
    n = m + sum(removed).  Exposes the records as numpy arrays for the
    likelihood, with cached log-times.
    """

    def __init__(self, records, n):
        records = tuple(
            r if isinstance(r, Record) else Record(*r) for r in records
        )
        if not records:
            raise ValueError("a sample needs at least one failure record")
        times = np.array([r.time for r in records], dtype=float)
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("failure times must be strictly increasing")
        removed = np.array([r.removed for r in records], dtype=np.int64)
        total = len(records) + int(removed.sum())
        if n != total:
            raise ValueError(
                f"accounting mismatch: n={n} but m + sum(removed) = {total}"
            )
        self._records = records
        self.n = int(n)
        self.times = times
        self.causes = np.array([int(r.cause) for r in records], dtype=np.int64)
        self.removed = removed
        self.m = len(records)
        self.m1 = int(np.count_nonzero(self.causes == 1))
        self._log_times = np.log(times)
        self._weights = (removed + 1).astype(float)
        self._log_constant = None

    @property
    def records(self):
        return self._records

    @property
    def log_constant(self):
        """Log of prod_i (n - R_1 - ... - R_{i-1} - i + 1), the number-at-risk
        product entering the progressive censoring normalising constant."""
        if self._log_constant is None:
            at_risk = self.n - np.concatenate(([0], np.cumsum(self.removed[:-1] + 1)))
            if np.any(at_risk <= 0):
                raise ValueError("removal plan exhausts the cohort before the last failure")
            self._log_constant = float(np.sum(np.log(at_risk.astype(float))))
        return self._log_constant

    def __len__(self):
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def __eq__(self, other):
        if not isinstance(other, ProgressiveSample):
            return NotImplemented
        return self.n == other.n and self._records == other._records

    def __repr__(self):
        return (
            f"ProgressiveSample(n={self.n}, m={self.m}, m1={self.m1}, "
            f"sum_removed={int(self.removed.sum())})"
        )


def log_likelihood(params, sample, include_constant=False):
    """Evaluate the log-likelihood of ``params`` on a progressive sample.

    Returns -inf when any exponent (t_i / alpha) ** beta exceeds the overflow
    clamp.  ``include_constant`` adds the log of the number-at-risk product,
    which is parameter-free and therefore irrelevant to posterior shape.
    """
    if not isinstance(params, ModelParams):
        raise TypeError(f"params must be ModelParams, got {type(params).__name__}")
    log_ratio = sample._log_times - math.log(params.alpha)
    with np.errstate(over="ignore"):
        u = np.exp(params.beta * log_ratio)
    if np.max(u) > _EXP_CLAMP:
        return -math.inf
    exposure = float(np.dot(sample._weights, np.expm1(u)))
    m = sample.m
    m1 = sample.m1
    value = (
        m1 * math.log(params.lambda1)
        + (m - m1) * math.log(params.lambda2)
        + m * math.log(params.beta)
        + float(np.sum(u))
        + (params.beta - 1.0) * float(np.sum(log_ratio))
        - (params.lambda1 + params.lambda2) * params.alpha * exposure
    )
    if include_constant:
        value += sample.log_constant
    return value


def d2_loglik(params, sample, which, h=None):
    """Second derivative of the log-likelihood in one parameter.

    The rate parameters enter analytically: d2 = -m1 / lambda1**2 and
    -(m - m1) / lambda2**2.  For alpha and beta a central second difference
    with step h = max(1e-5, 1e-4 * value) is used; the step must keep
    value - 2h positive, and all three stencil evaluations must be finite.
    """
    if which == "lambda1":
        return -sample.m1 / params.lambda1**2
    if which == "lambda2":
        return -(sample.m - sample.m1) / params.lambda2**2
    if which not in ("alpha", "beta"):
        raise ValueError(f"unknown parameter {which!r}")
    value = getattr(params, which)
    if h is None:
        h = max(1e-5, 1e-4 * value)
    if value - 2.0 * h <= 0.0:
        raise ValueError(
            f"difference step {h:g} too large for {which}={value:g}"
        )
    plus = log_likelihood(params.with_value(which, value + h), sample)
    centre = log_likelihood(params, sample)
    minus = log_likelihood(params.with_value(which, value - h), sample)
    if not (math.isfinite(plus) and math.isfinite(centre) and math.isfinite(minus)):
        raise ValueError(
            f"log-likelihood not finite near {which}={value:g}; "
            "second difference undefined"
        )
    return (plus - 2.0 * centre + minus) / (h * h)
