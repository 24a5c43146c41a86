"""Bayesian competing-risks analysis for the modified Weibull lifetime family
under progressive type-II censoring: model, likelihood, per-parameter
reference priors, slice-within-Gibbs sampling, posterior summaries, data
simulation and study-table ingestion."""

__version__ = "0.1.0"

from .model import (
    PARAM_NAMES,
    ModelParams,
    RiskParams,
    cdf,
    log_pdf,
    log_survival,
    pdf,
    quantile,
    sample_latent_pair,
    survival,
)
from .likelihood import (
    Cause,
    ProgressiveSample,
    Record,
    d2_loglik,
    log_likelihood,
)
from .prior import (
    ConditionalTarget,
    NonpositiveInformationError,
    PriorDegenerateError,
    check_cause_counts,
    log_conditional_posterior,
    log_conditional_prior,
)
from .sampler import (
    Chain,
    ChainConfig,
    ChainError,
    ChainLengthWarning,
    SliceConfig,
    SliceDiagnostics,
    default_init,
    gibbs_sweep,
    run_chain,
    slice_step,
)
from .posterior import (
    DegenerateIntervalWarning,
    ParameterSummary,
    PosteriorSummary,
    bayes_mean,
    format_table,
    hpd_interval,
    summarize,
    to_json_records,
)
from .simulate import (
    CauseMode,
    CensoringScheme,
    SimSpec,
    generate,
    scheme_catalog,
)
from .ingest import (
    CauseLabel,
    FollicularRow,
    TiedTimesWarning,
    compute_cause,
    parse_dataset,
    prepare_case1,
    prepare_case2,
    read_dataset,
    write_dataset,
)

__all__ = [
    "__version__",
    "PARAM_NAMES",
    "ModelParams",
    "RiskParams",
    "cdf",
    "pdf",
    "survival",
    "log_survival",
    "log_pdf",
    "quantile",
    "sample_latent_pair",
    "Cause",
    "Record",
    "ProgressiveSample",
    "log_likelihood",
    "d2_loglik",
    "ConditionalTarget",
    "PriorDegenerateError",
    "NonpositiveInformationError",
    "check_cause_counts",
    "log_conditional_prior",
    "log_conditional_posterior",
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
    "DegenerateIntervalWarning",
    "ParameterSummary",
    "PosteriorSummary",
    "bayes_mean",
    "hpd_interval",
    "summarize",
    "to_json_records",
    "format_table",
    "CauseMode",
    "CensoringScheme",
    "SimSpec",
    "generate",
    "scheme_catalog",
    "CauseLabel",
    "FollicularRow",
    "TiedTimesWarning",
    "compute_cause",
    "parse_dataset",
    "prepare_case1",
    "prepare_case2",
    "write_dataset",
    "read_dataset",
]
