"""One-parameter conditional reference priors and conditional posteriors.

Each parameter gets its own prior, derived from the observed information of
the log-likelihood with the other three parameters held fixed:

    pi(theta | rest) propto sqrt(-d2 l / d theta2).

For the rate parameters the information is m1 / lambda1**2 (respectively
(m - m1) / lambda2**2), so the prior is proportional to 1 / lambda and its
log is -log(lambda) up to an additive constant, which is dropped.  For alpha
and beta no closed form is used; the information comes from the same central
second difference as :func:`mwcr.likelihood.d2_loglik`.

Combined with the likelihood, the rate conditionals are Gamma:

    lambda1 | rest ~ Gamma(shape m1,    rate alpha * sum((R_i+1)(e^{u_i}-1)))
    lambda2 | rest ~ Gamma(shape m-m1,  rate alpha * sum((R_i+1)(e^{u_i}-1)))

which the sampler tests exploit as an analytic oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .likelihood import ProgressiveSample, log_likelihood
from .model import PARAM_NAMES, ModelParams

__all__ = [
    "ConditionalTarget",
    "PriorDegenerateError",
    "NonpositiveInformationError",
    "log_conditional_prior",
    "log_conditional_posterior",
    "check_cause_counts",
]


class PriorDegenerateError(ValueError):
    """The data contain no failures from the cause whose rate is updated."""


class NonpositiveInformationError(ArithmeticError):
    """The observed information is nonpositive or not computable here."""


@dataclass(frozen=True)
class ConditionalTarget:
    """One coordinate's conditional: which parameter moves, the frozen state
    supplying the other three, and the data."""

    which: str
    frozen: ModelParams
    data: ProgressiveSample

    def __post_init__(self):
        if self.which not in PARAM_NAMES:
            raise ValueError(f"unknown parameter {self.which!r}")

    def params_at(self, value):
        return self.frozen.with_value(self.which, value)


def check_cause_counts(data):
    """Raise PriorDegenerateError unless both causes appear in the data."""
    if data.m1 == 0:
        raise PriorDegenerateError(
            "prior degenerate: no cause-1 failures in the data"
        )
    if data.m1 == data.m:
        raise PriorDegenerateError(
            "prior degenerate: no cause-2 failures in the data"
        )


def _check_value(target, value):
    if not (math.isfinite(value) and value > 0.0):
        raise ValueError(
            f"{target.which} must be positive and finite, got {value!r}"
        )
    if target.which == "lambda1" and target.data.m1 == 0:
        raise PriorDegenerateError(
            "prior degenerate: no cause-1 failures in the data"
        )
    if target.which == "lambda2" and target.data.m1 == target.data.m:
        raise PriorDegenerateError(
            "prior degenerate: no cause-2 failures in the data"
        )


def _stencil(target, value):
    """Central-difference stencil of the log-likelihood at ``value``.

    Returns (centre, information).  Raises NonpositiveInformationError when a
    stencil point is not finite or the curvature has the wrong sign; the
    centre value -inf is reported as (``-inf``, None) so callers can treat the
    point as having zero posterior density instead.
    """
    value = float(value)
    h = max(1e-5, 1e-4 * value)
    if value - 2.0 * h <= 0.0:
        raise NonpositiveInformationError(
            f"information not computable: step {h:g} leaves the support "
            f"for {target.which}={value:g}"
        )
    centre = log_likelihood(target.params_at(value), target.data)
    if centre == -math.inf:
        return centre, None
    plus = log_likelihood(target.params_at(value + h), target.data)
    minus = log_likelihood(target.params_at(value - h), target.data)
    if not (math.isfinite(plus) and math.isfinite(minus) and math.isfinite(centre)):
        raise NonpositiveInformationError(
            f"information not computable: log-likelihood not finite near "
            f"{target.which}={value:g}"
        )
    information = -((plus - 2.0 * centre + minus) / (h * h))
    if not (math.isfinite(information) and information > 0.0):
        raise NonpositiveInformationError(
            f"information nonpositive for {target.which}={value:g}: "
            f"{information!r}"
        )
    return centre, information


def log_conditional_prior(target, value):
    """Log of the conditional reference prior at ``value``, constants dropped.

    Rates: -log(value).  Scale and shape: 0.5 * log(information) with the
    information taken from the central second difference of the
    log-likelihood, so the prior depends on the frozen coordinates and the
    data.  Raises PriorDegenerateError when the relevant cause count is zero
    and NonpositiveInformationError when the curvature is unusable.
    """
    _check_value(target, value)
    if target.which in ("lambda1", "lambda2"):
        return -math.log(value)
    centre, information = _stencil(target, value)
    if information is None:
        raise NonpositiveInformationError(
            f"information not computable: log-likelihood is -inf at "
            f"{target.which}={value:g}"
        )
    return 0.5 * math.log(information)


def log_conditional_posterior(target, value):
    """Log of likelihood times conditional prior at ``value``.

    Equals log_likelihood + log_conditional_prior wherever both are defined.
    A point where the likelihood vanishes returns -inf rather than raising,
    so slice proposals into the overflow region are simply rejected.
    """
    _check_value(target, value)
    if target.which in ("lambda1", "lambda2"):
        value_ll = log_likelihood(target.params_at(value), target.data)
        return value_ll - math.log(value)
    centre, information = _stencil(target, value)
    if information is None:
        return -math.inf
    return centre + 0.5 * math.log(information)
