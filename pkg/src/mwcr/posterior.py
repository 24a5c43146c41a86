"""Point estimates and highest-posterior-density intervals from chain draws.

The HPD interval at credibility 1 - gamma is the narrowest window of
k = ceil(M * (1 - gamma)) consecutive order statistics; ties in width go to
the leftmost window.  Unimodality of the marginal makes this the HPD set up
to order-statistic resolution.
"""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .model import PARAM_NAMES

__all__ = [
    "DegenerateIntervalWarning",
    "ParameterSummary",
    "PosteriorSummary",
    "bayes_mean",
    "hpd_interval",
    "summarize",
    "to_json_records",
    "format_table",
]


class DegenerateIntervalWarning(UserWarning):
    """The requested window could not be narrower than the whole sample."""


def _as_samples(values):
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise ValueError("need at least one sample")
    if np.any(~np.isfinite(values)):
        raise ValueError("samples must be finite")
    return values


def bayes_mean(values):
    """Posterior mean under squared-error loss: the sample average."""
    return float(_as_samples(values).mean())


def hpd_interval(values, gamma):
    """Narrowest window of ceil(M * (1 - gamma)) consecutive order statistics.

    Returns (lower, upper), both actual sample values.  A window count that
    reaches the whole sample (M * gamma < 1) degenerates to the sample range
    and warns.  The ceiling is taken with a few ulps of slack so that an
    exactly-integer M * (1 - gamma) is not bumped up by float rounding.
    """
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"gamma must lie strictly inside (0, 1), got {gamma!r}")
    x = np.sort(_as_samples(values))
    m = x.size
    k = math.ceil(m * (1.0 - gamma) * (1.0 - 4.0 * sys.float_info.epsilon))
    if m == 1:
        warnings.warn(
            "single draw: interval degenerates to a point",
            DegenerateIntervalWarning,
            stacklevel=2,
        )
        return float(x[0]), float(x[0])
    if k >= m:
        warnings.warn(
            f"window of {k} order statistics spans all {m} draws; "
            "interval degenerates to the sample range",
            DegenerateIntervalWarning,
            stacklevel=2,
        )
        return float(x[0]), float(x[-1])
    widths = x[k - 1 :] - x[: m - k + 1]
    j = int(np.argmin(widths))
    return float(x[j]), float(x[j + k - 1])


@dataclass(frozen=True)
class ParameterSummary:
    name: str
    mean: float
    median: float
    hpd_lower: float
    hpd_upper: float
    gamma: float


@dataclass(frozen=True)
class PosteriorSummary:
    parameters: tuple
    gamma: float

    def __getitem__(self, name):
        for p in self.parameters:
            if p.name == name:
                return p
        raise KeyError(name)


def summarize(chain, gamma=0.05):
    """Mean, median and HPD interval for every model parameter.

    ``chain`` is a sampler Chain or any (draws, 4) array with columns in
    PARAM_NAMES order, so pooled multi-chain draws summarize the same way.
    """
    draws = chain.draws if hasattr(chain, "draws") else np.asarray(chain, dtype=float)
    if draws.ndim != 2 or draws.shape[1] != len(PARAM_NAMES):
        raise ValueError(f"expected draws with {len(PARAM_NAMES)} columns")
    parts = []
    for index, name in enumerate(PARAM_NAMES):
        samples = draws[:, index]
        lower, upper = hpd_interval(samples, gamma)
        parts.append(
            ParameterSummary(
                name=name,
                mean=bayes_mean(samples),
                median=float(np.median(samples)),
                hpd_lower=lower,
                hpd_upper=upper,
                gamma=gamma,
            )
        )
    return PosteriorSummary(parameters=tuple(parts), gamma=gamma)


def to_json_records(summary):
    """One plain dict per parameter, keyed name, mean, median, hpd_lower,
    hpd_upper, gamma."""
    return [asdict(p) for p in summary.parameters]


def format_table(summary):
    """Fixed-width text table of the summary, one row per parameter."""
    header = f"{'parameter':<10} {'mean':>12} {'median':>12} {'hpd_lower':>12} {'hpd_upper':>12}"
    lines = [header, "-" * len(header)]
    for p in summary.parameters:
        lines.append(
            f"{p.name:<10} {p.mean:>12.6g} {p.median:>12.6g} "
            f"{p.hpd_lower:>12.6g} {p.hpd_upper:>12.6g}"
        )
    lines.append(f"credibility {1.0 - summary.gamma:.3g} (gamma = {summary.gamma:g})")
    return "\n".join(lines)
