"""Slice-within-Gibbs sampler for the four-parameter competing-risks model.

Each Gibbs coordinate is updated by univariate slice sampling (step-out then
shrinkage) applied on the log-parameter axis, which keeps proposals positive;
the Jacobian of the transform adds +log(theta) to the target.  The scan order
is deterministic: lambda1, lambda2, alpha, beta.

Randomness comes from ``numpy.random.default_rng`` (PCG64).  A chain is fully
determined by its seed: per iteration the sampler consumes the generator in
update order only, so runs with equal seeds are bit-identical.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .model import PARAM_NAMES, ModelParams
from .prior import (
    ConditionalTarget,
    NonpositiveInformationError,
    check_cause_counts,
    log_conditional_posterior,
)

__all__ = [
    "SliceConfig",
    "SliceDiagnostics",
    "ChainConfig",
    "ChainLengthWarning",
    "Chain",
    "ChainError",
    "slice_step",
    "gibbs_sweep",
    "default_init",
    "run_chain",
]


class ChainError(RuntimeError):
    """A chain aborted mid-run; the message carries the iteration index."""


class ChainLengthWarning(UserWarning):
    """Fewer than 100 retained draws were requested."""


@dataclass(frozen=True)
class SliceConfig:
    """Tuning for one slice update: bracket width on the log axis and the
    step-out / shrinkage iteration caps."""

    width: float = 1.0
    max_stepout: int = 50
    max_shrink: int = 100

    def __post_init__(self):
        if not (math.isfinite(self.width) and self.width > 0.0):
            raise ValueError(f"width must be positive, got {self.width!r}")
        if self.max_stepout < 1 or self.max_shrink < 1:
            raise ValueError("iteration caps must be at least 1")


@dataclass
class SliceDiagnostics:
    """Counters accumulated across slice updates."""

    accepts: int = 0
    stepouts: int = 0
    shrinks: int = 0
    exhausted: int = 0
    info_rejects: int = 0
    stale_skips: int = 0

    def as_dict(self):
        return {
            "accepts": self.accepts,
            "stepouts": self.stepouts,
            "shrinks": self.shrinks,
            "exhausted": self.exhausted,
            "info_rejects": self.info_rejects,
            "stale_skips": self.stale_skips,
        }


def slice_step(log_density, x0, config, rng, diagnostics=None):
    """One univariate slice update on (0, inf) via the log axis.

    ``log_density`` evaluates the target's log density at a positive point
    and may return -inf.  The step transforms to y = log(x), adds the
    Jacobian +y, draws the slice level as g(y0) minus a standard exponential,
    brackets by step-out and samples by shrinkage.  If the shrinkage cap is
    hit the current point is returned unchanged.  A current point with
    non-finite log density is an error: slice sampling needs somewhere to
    stand.
    """
    if diagnostics is None:
        diagnostics = SliceDiagnostics()
    if not (math.isfinite(x0) and x0 > 0.0):
        raise ValueError(f"slice update needs a positive current point, got {x0!r}")

    def g(y):
        value = log_density(math.exp(y))
        if not math.isfinite(value):
            return -math.inf
        return value + y

    y0 = math.log(x0)
    g0 = g(y0)
    if not math.isfinite(g0):
        raise ValueError(
            f"invalid current point: log density not finite at {x0:g}"
        )
    log_u = g0 - rng.standard_exponential()
    left = y0 - config.width * rng.random()
    right = left + config.width
    for _ in range(config.max_stepout):
        if g(left) <= log_u:
            break
        left -= config.width
        diagnostics.stepouts += 1
    for _ in range(config.max_stepout):
        if g(right) <= log_u:
            break
        right += config.width
        diagnostics.stepouts += 1
    for _ in range(config.max_shrink):
        y1 = rng.uniform(left, right)
        if g(y1) > log_u:
            diagnostics.accepts += 1
            return math.exp(y1)
        if y1 < y0:
            left = y1
        else:
            right = y1
        diagnostics.shrinks += 1
    diagnostics.exhausted += 1
    return x0


def _config_map(config):
    if isinstance(config, SliceConfig):
        return {name: config for name in PARAM_NAMES}
    missing = [name for name in PARAM_NAMES if name not in config]
    if missing:
        raise ValueError(f"slice config missing parameters: {missing}")
    return dict(config)


def gibbs_sweep(params, data, config, rng, diagnostics=None):
    """One deterministic scan updating lambda1, lambda2, alpha, beta in turn.

    ``config`` is a SliceConfig shared by all coordinates or a mapping from
    parameter name to SliceConfig.  Proposals where the information is
    nonpositive or not computable count as zero-density rejections rather
    than errors; the per-parameter ``info_rejects`` counter records them.

    The four conditionals come from four different priors and need not be
    consistent with any joint density, so a value accepted under the old
    frozen coordinates can find its own refreshed conditional vanishing
    (information gone nonpositive after the others moved).  Such a coordinate
    is held at its current value for this sweep and counted in
    ``stale_skips``; if every coordinate is stuck the state is truly invalid
    and a ValueError is raised.
    """
    configs = _config_map(config)
    state = params
    moved = 0
    for name in PARAM_NAMES:
        target = ConditionalTarget(name, state, data)
        diag = diagnostics[name] if diagnostics is not None else None

        def log_density(value, _target=target, _diag=diag):
            try:
                return log_conditional_posterior(_target, value)
            except NonpositiveInformationError:
                if _diag is not None:
                    _diag.info_rejects += 1
                return -math.inf

        try:
            new_value = slice_step(
                log_density, getattr(state, name), configs[name], rng, diag
            )
        except ValueError as exc:
            if "invalid current point" not in str(exc):
                raise
            if diag is not None:
                diag.stale_skips += 1
            continue
        moved += 1
        state = state.with_value(name, new_value)
    if moved == 0:
        raise ValueError(
            "no coordinate had a valid conditional at the current state"
        )
    return state


def default_init(data):
    """Moment-flavoured starting point.

    Splits the crude total rate m / (n * mean(t)) between the causes in
    proportion to their failure counts, starts alpha at the mean observed
    time and beta at 1 (constant-ish hazard ratio).
    """
    tbar = float(data.times.mean())
    scale = data.n * tbar
    return ModelParams(
        lambda1=data.m1 / scale,
        lambda2=(data.m - data.m1) / scale,
        alpha=tbar,
        beta=1.0,
    )


@dataclass(frozen=True)
class ChainConfig:
    """Run-length, retention and tuning settings for one chain.

    ``burn_in`` defaults to iterations // 5.  Retained draws are those with
    index >= burn_in, keeping every ``thin``-th starting at burn_in.  ``init``
    None means :func:`default_init` on the data.  ``seed`` feeds
    ``numpy.random.default_rng`` and may be anything that function accepts.
    """

    iterations: int
    burn_in: int | None = None
    thin: int = 1
    seed: object = 0
    init: ModelParams | None = None
    slice: SliceConfig = field(default_factory=SliceConfig)

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.thin < 1:
            raise ValueError(f"thin must be >= 1, got {self.thin}")
        burn = self.resolved_burn_in
        if burn < 0 or burn >= self.iterations:
            raise ValueError(
                f"burn_in must lie in [0, iterations), got {burn}"
            )
        retained = len(range(burn, self.iterations, self.thin))
        if retained < 100:
            warnings.warn(
                f"only {retained} retained draws; posterior summaries want >= 100",
                ChainLengthWarning,
                stacklevel=2,
            )

    @property
    def resolved_burn_in(self):
        return self.iterations // 5 if self.burn_in is None else self.burn_in


@dataclass(frozen=True, eq=False)
class Chain:
    """Retained draws (one row per draw, columns in PARAM_NAMES order),
    per-parameter slice diagnostics and the config that produced them."""

    draws: np.ndarray
    diagnostics: dict
    config: ChainConfig
    rng_algorithm: str = "PCG64"

    def __len__(self):
        return self.draws.shape[0]

    def param(self, name):
        return self.draws[:, PARAM_NAMES.index(name)]

    def state(self, i):
        return ModelParams.from_array(self.draws[i])


def run_chain(config, data):
    """Run one slice-within-Gibbs chain on a progressive sample.

    Fails fast on single-cause data (the rate priors are degenerate).  Any
    mid-run failure is re-raised as ChainError with the iteration index.
    """
    check_cause_counts(data)
    rng = np.random.default_rng(config.seed)
    state = config.init if config.init is not None else default_init(data)
    burn = config.resolved_burn_in
    diagnostics = {name: SliceDiagnostics() for name in PARAM_NAMES}
    kept = []
    for i in range(config.iterations):
        try:
            state = gibbs_sweep(state, data, config.slice, rng, diagnostics)
        except (ValueError, ArithmeticError) as exc:
            raise ChainError(f"chain aborted at iteration {i}: {exc}") from exc
        if i >= burn and (i - burn) % config.thin == 0:
            kept.append(state.as_array())
    draws = np.vstack(kept)
    return Chain(draws=draws, diagnostics=diagnostics, config=config)
