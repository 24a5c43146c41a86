"""Shared test oracles: effective sample size, compensated summation,
brute-force HPD scans and the factored likelihood."""

import math
import sys

import numpy as np

from mwcr.model import log_pdf, log_survival


def autocovariance(x):
    x = np.asarray(x, dtype=float)
    n = x.size
    centered = x - x.mean()
    nfft = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(centered, nfft)
    acov = np.fft.irfft(f * np.conjugate(f), nfft)[:n].real / n
    return acov


def ess(x):
    """Effective sample size via Geyer's initial positive sequence."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 4:
        return float(n)
    acov = autocovariance(x)
    if acov[0] <= 0.0:
        return float(n)
    rho = acov / acov[0]
    tau = -1.0
    k = 0
    while k + 1 < n:
        pair = rho[k] + rho[k + 1]
        if pair <= 0.0:
            break
        tau += 2.0 * pair
        k += 2
    tau = max(tau, 1.0)
    return float(n / tau)


def mcse_mean(x):
    """Monte Carlo standard error of the sample mean, autocorrelation-aware."""
    x = np.asarray(x, dtype=float)
    return float(x.std(ddof=1) / math.sqrt(ess(x)))


def kahan_mean(values):
    total = 0.0
    compensation = 0.0
    count = 0
    for v in values:
        y = float(v) - compensation
        t = total + y
        compensation = (t - total) - y
        total = t
        count += 1
    return total / count


def hpd_window_count(m, gamma):
    """The k = ceil(M(1-gamma)) rule with the same ulp slack as the library."""
    return math.ceil(m * (1.0 - gamma) * (1.0 - 4.0 * sys.float_info.epsilon))


def brute_force_hpd(samples, gamma):
    """All-windows scan taking per-window min/max explicitly; O(M*k)."""
    x = sorted(float(v) for v in samples)
    m = len(x)
    k = hpd_window_count(m, gamma)
    if m == 1 or k >= m:
        return x[0], x[-1]
    best = None
    best_width = math.inf
    for j in range(m - k + 1):
        window = x[j : j + k]
        width = max(window) - min(window)
        if width < best_width:
            best_width = width
            best = (min(window), max(window))
    return best


def endpoint_hpd(samples, gamma):
    """Independent re-scan using explicit order-statistic endpoints; O(M)."""
    x = sorted(float(v) for v in samples)
    m = len(x)
    k = hpd_window_count(m, gamma)
    if m == 1 or k >= m:
        return x[0], x[-1]
    best_j = 0
    best_width = x[k - 1] - x[0]
    for j in range(1, m - k + 1):
        width = x[j + k - 1] - x[j]
        if width < best_width:
            best_width = width
            best_j = j
    return x[best_j], x[best_j + k - 1]


def factored_log_likelihood(params, sample, include_constant=False):
    """Product-form log-likelihood: each failure contributes its own cause's
    density, the other cause's survival, and both survivals to the power of
    the removals."""
    total = sample.log_constant if include_constant else 0.0
    for rec in sample.records:
        cause = int(rec.cause)
        own = params.risk(cause)
        other = params.risk(2 if cause == 1 else 1)
        total += log_pdf(rec.time, own) + log_survival(rec.time, other)
        total += rec.removed * (
            log_survival(rec.time, own) + log_survival(rec.time, other)
        )
    return total


def gamma_conditional_rate(params, sample):
    """Rate of the lambda conditionals: alpha * sum((R_i+1)(e^{u_i} - 1))."""
    u = (sample.times / params.alpha) ** params.beta
    return float(params.alpha * np.sum((sample.removed + 1) * np.expm1(u)))
