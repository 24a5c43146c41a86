"""Modified Weibull lifetime family and its two-cause competing-risks model.

The single-cause law on t >= 0 has distribution function

    F(t) = 1 - exp(lam * alpha * (1 - exp((t / alpha) ** beta)))

with rate-like parameter ``lam > 0``, time scale ``alpha > 0`` and shape
``beta > 0``.  Differentiating gives the density

    f(t) = lam * beta * (t / alpha) ** (beta - 1) * exp((t / alpha) ** beta)
           * exp(lam * alpha * (1 - exp((t / alpha) ** beta)))

where the chain-rule factor beta/alpha combines with the lam*alpha prefactor
of the exponent to leave lam*beta.

For fixed (alpha, beta) the family is closed under minima: survival functions
multiply, so rates add.  The competing-risks model observes, per subject, the
minimum of two independent lifetimes with rates lambda1 and lambda2 together
with the index of the cause that attained it.  The cause indicator is
independent of the observed time, with P(cause = 1) = lambda1 / (lambda1 +
lambda2).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PARAM_NAMES",
    "RiskParams",
    "ModelParams",
    "cdf",
    "pdf",
    "survival",
    "log_survival",
    "log_pdf",
    "quantile",
    "sample_latent_pair",
]

PARAM_NAMES = ("lambda1", "lambda2", "alpha", "beta")

# exp() overflows near 709; beyond this the survival probability underflows
# to zero anyway, so the exponent is treated as infinite.
_EXP_CLAMP = 700.0


def _check_positive(name, value):
    if not (math.isfinite(value) and value > 0.0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class RiskParams:
    """Parameters of a single modified Weibull lifetime."""

    lam: float
    alpha: float
    beta: float

    def __post_init__(self):
        _check_positive("lam", self.lam)
        _check_positive("alpha", self.alpha)
        _check_positive("beta", self.beta)


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the two-cause model with shared time scale and shape."""

    lambda1: float
    lambda2: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in PARAM_NAMES:
            _check_positive(name, getattr(self, name))

    def risk(self, cause):
        """Single-cause parameters for cause 1 or 2."""
        if cause == 1:
            return RiskParams(self.lambda1, self.alpha, self.beta)
        if cause == 2:
            return RiskParams(self.lambda2, self.alpha, self.beta)
        raise ValueError(f"cause must be 1 or 2, got {cause!r}")

    def pooled(self):
        """Law of the minimum: rates add, scale and shape are shared."""
        return RiskParams(self.lambda1 + self.lambda2, self.alpha, self.beta)

    def with_value(self, name, value):
        if name not in PARAM_NAMES:
            raise ValueError(f"unknown parameter {name!r}")
        return dataclasses.replace(self, **{name: float(value)})

    def as_array(self):
        return np.array([self.lambda1, self.lambda2, self.alpha, self.beta])

    @classmethod
    def from_array(cls, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (4,):
            raise ValueError(f"expected 4 values, got shape {values.shape}")
        return cls(*(float(v) for v in values))


def _exponent(t, p):
    """u = (t / alpha) ** beta, computed in log space."""
    return np.exp(p.beta * (np.log(t) - np.log(p.alpha)))


def _as_times(t, positive=False):
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)):
        raise ValueError("time values must be finite")
    if positive:
        if np.any(t <= 0.0):
            raise ValueError("time values must be positive")
    elif np.any(t < 0.0):
        raise ValueError("time values must be nonnegative")
    return t


def log_survival(t, p):
    """log S(t) = lam * alpha * (1 - exp((t/alpha)**beta)).

    Exponents above the overflow clamp map to -inf (survival underflows).
    Accepts scalars or arrays; t = 0 gives 0.0.
    """
    t = _as_times(t)
    u = np.where(t > 0.0, _exponent(np.where(t > 0.0, t, 1.0), p), 0.0)
    with np.errstate(over="ignore"):
        out = np.where(u > _EXP_CLAMP, -np.inf, -p.lam * p.alpha * np.expm1(u))
    if out.ndim == 0:
        return float(out)
    return out


def survival(t, p):
    """S(t) = exp(lam * alpha * (1 - exp((t/alpha)**beta)))."""
    ls = np.asarray(log_survival(t, p))
    out = np.exp(ls)
    if out.ndim == 0:
        return float(out)
    return out


def cdf(t, p):
    """F(t) = 1 - S(t), evaluated as -expm1(log S) for small-t accuracy."""
    ls = np.asarray(log_survival(t, p))
    out = -np.expm1(ls)
    if out.ndim == 0:
        return float(out)
    return out


def log_pdf(t, p):
    """Log density; requires t > 0.  Returns -inf where the density underflows."""
    t = _as_times(t, positive=True)
    logt_ratio = np.log(t) - np.log(p.alpha)
    u = np.exp(p.beta * logt_ratio)
    with np.errstate(over="ignore", invalid="ignore"):
        body = (
            math.log(p.lam * p.beta)
            + (p.beta - 1.0) * logt_ratio
            + u
            - p.lam * p.alpha * np.expm1(u)
        )
    out = np.where(u > _EXP_CLAMP, -np.inf, body)
    if out.ndim == 0:
        return float(out)
    return out


def pdf(t, p):
    """Density of the single-cause law; requires t > 0.

    As t -> 0+ the density tends to 0 for beta > 1, to lam for beta = 1 and
    to +inf for beta < 1, like a Weibull with the same shape.
    """
    lp = np.asarray(log_pdf(t, p))
    out = np.exp(lp)
    if out.ndim == 0:
        return float(out)
    return out


def quantile(u, p):
    """Inverse CDF: t = alpha * (log1p(-log1p(-u) / (lam * alpha))) ** (1/beta).

    Requires 0 < u < 1 strictly.
    """
    u = np.asarray(u, dtype=float)
    if np.any(~((u > 0.0) & (u < 1.0))):
        raise ValueError("quantile requires probabilities strictly inside (0, 1)")
    inner = np.log1p(-np.log1p(-u) / (p.lam * p.alpha))
    out = p.alpha * np.exp(np.log(inner) / p.beta)
    if out.ndim == 0:
        return float(out)
    return out


def sample_latent_pair(params, rng):
    """Draw one latent lifetime pair and return (observed time, cause).

    The observed time is the smaller lifetime; ties resolve to cause 1.
    ``rng`` is a numpy Generator; exactly two uniforms are consumed, cause-1
    first, so batched generation with ``rng.random((n, 2))`` reproduces a loop
    over this function draw for draw.
    """
    u = rng.random(2)
    x1 = quantile(u[0], params.risk(1))
    x2 = quantile(u[1], params.risk(2))
    if x1 <= x2:
        return x1, 1
    return x2, 2
