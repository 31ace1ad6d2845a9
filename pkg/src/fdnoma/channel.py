"""Rician shadowed and exponential power distributions.

Moments, the truncated CDF series expansion, and exact sampling.  The
squared-envelope power X of a Rician shadowed link is parameterised by its
mean power, Rician K factor and shadowing severity m (Nakagami shape of the
line-of-sight amplitude).  `mean_power` is the first moment of X; the
moment formula and the sampler agree on that convention and the test suite
pins it.

All functions are pure; samplers take an explicit numpy Generator so
parallel callers can use independent seeded streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import gauss_2f1

__all__ = [
    "RicianShadowedParams",
    "ExponentialParams",
    "TruncatedCdf",
    "MAX_MOMENT_ORDER",
    "rician_shadowed_moment",
    "exponential_moment",
    "cdf_series_coeff",
    "cdf_truncated",
    "sample_rician_shadowed",
    "sample_exponential",
]

MAX_MOMENT_ORDER = 64

# Divergence heuristic for the truncated alternating series: flag when the
# per-order term magnitude keeps growing this many orders in a row, once
# past the burn-in order.
_GROWTH_RUN = 5
_GROWTH_BURN_IN = 10

# exp() overflows just above this; used to detect hopeless series terms.
_LOG_HUGE = 700.0


@dataclass(frozen=True)
class RicianShadowedParams:
    """One Rician shadowed link: mean power, Rician K factor, shadowing m."""

    mean_power: float
    k_factor: float
    m: float

    def __post_init__(self) -> None:
        if not self.mean_power > 0:
            raise ValueError(f"mean_power must be positive, got {self.mean_power}")
        if not self.k_factor >= 0:
            raise ValueError(f"k_factor must be non-negative, got {self.k_factor}")
        if not self.m > 0:
            raise ValueError(f"shadowing severity m must be positive, got {self.m}")


@dataclass(frozen=True)
class ExponentialParams:
    """Exponentially distributed power (e.g. channel estimation error)."""

    mean_power: float

    def __post_init__(self) -> None:
        if not self.mean_power > 0:
            raise ValueError(f"mean_power must be positive, got {self.mean_power}")


@dataclass(frozen=True)
class TruncatedCdf:
    """Value of a truncated CDF series plus its convergence metadata."""

    value: float
    converged: bool


def _log_rician_shadowed_moment(p: RicianShadowedParams, order: int) -> float:
    pbar, k, m = p.mean_power, p.k_factor, p.m
    hyp = gauss_2f1(1.0 - m, 1.0 + order, 1.0, -k / m)
    return (
        order * (math.log(pbar) - math.log1p(k))
        + math.lgamma(1 + order)
        + (m - 1 - order) * (math.log(m) - math.log(k + m))
        + math.log(hyp)
    )


def rician_shadowed_moment(p: RicianShadowedParams, order: int) -> float:
    """E{X^order} of a Rician shadowed power variable.

    E{X^l} = (P/(1+K))^l Gamma(1+l) (m/(K+m))^(m-1-l) 2F1(1-m, 1+l; 1; -K/m)

    Strictly positive; raises OverflowError when the value exceeds double
    range (extreme order / mean power combinations).
    """
    if order < 0:
        raise ValueError(f"moment order must be non-negative, got {order}")
    if order > MAX_MOMENT_ORDER:
        raise ValueError(
            f"moment order {order} exceeds supported maximum {MAX_MOMENT_ORDER}"
        )
    log_m = _log_rician_shadowed_moment(p, order)
    if log_m > _LOG_HUGE:
        raise OverflowError(
            f"moment of order {order} overflows double precision "
            f"(log value {log_m:.1f})"
        )
    return math.exp(log_m)


def exponential_moment(p: ExponentialParams, order: int) -> float:
    """E{Y^order} = mean^order * order! for exponential Y."""
    if order < 0:
        raise ValueError(f"moment order must be non-negative, got {order}")
    log_m = order * math.log(p.mean_power) + math.lgamma(order + 1)
    if log_m > _LOG_HUGE:
        raise OverflowError(
            f"moment of order {order} overflows double precision "
            f"(log value {log_m:.1f})"
        )
    return math.exp(log_m)


def _alpha_signed_log(
    n: int, p: RicianShadowedParams, gamma: float
) -> tuple[float, float]:
    """CDF expansion coefficient of order n as (sign, log magnitude).

    alpha(n) = sum_{i=0}^{n} (-1)^(n-i) (m/(K+m))^m (m)_i / Gamma(i+1)^2
               * (K/(K+m))^i ((1+K)/P)^(n+1) gamma^(n+1) / ((n-i)! (n+1))

    The alternating inner sum is accumulated with the largest log magnitude
    factored out; signs are carried separately.
    """
    if gamma == 0.0:
        return 0.0, -math.inf
    pbar, k, m = p.mean_power, p.k_factor, p.m
    base = (
        (n + 1) * (math.log1p(k) - math.log(pbar) + math.log(gamma))
        + m * (math.log(m) - math.log(k + m))
        - math.log(n + 1)
    )
    log_k_ratio = math.log(k) - math.log(k + m) if k > 0 else -math.inf
    signed_logs: list[tuple[float, float]] = []
    for i in range(n + 1):
        if k == 0.0 and i > 0:
            break  # (K/(K+m))^i vanishes for i >= 1
        lg = (
            base
            + (math.lgamma(m + i) - math.lgamma(m))
            - 2.0 * math.lgamma(i + 1)
            - math.lgamma(n - i + 1)
        )
        if i > 0:
            lg += i * log_k_ratio
        sign = 1.0 if (n - i) % 2 == 0 else -1.0
        signed_logs.append((sign, lg))
    peak = max(lg for _, lg in signed_logs)
    if peak == -math.inf:
        return 0.0, -math.inf
    acc = math.fsum(sign * math.exp(lg - peak) for sign, lg in signed_logs)
    if acc == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, acc), peak + math.log(abs(acc))


def cdf_series_coeff(n: int, p: RicianShadowedParams, gamma: float) -> float:
    """Order-n coefficient alpha(n) of the truncated CDF expansion.

    May be negative for n >= 1 (the expansion alternates).  gamma = 0
    yields exactly 0.
    """
    if n < 0:
        raise ValueError(f"series order must be non-negative, got {n}")
    if not gamma >= 0 or math.isinf(gamma):
        raise ValueError(f"threshold must be finite and non-negative, got {gamma}")
    sign, log_mag = _alpha_signed_log(n, p, gamma)
    if sign == 0.0:
        return 0.0
    if log_mag > _LOG_HUGE:
        return math.copysign(math.inf, sign)
    return sign * math.exp(log_mag)


def _diverging(magnitudes: list[float]) -> bool:
    """True when |term| grew _GROWTH_RUN consecutive orders past burn-in."""
    run = 0
    for n in range(1, len(magnitudes)):
        if n > _GROWTH_BURN_IN and magnitudes[n] > magnitudes[n - 1]:
            run += 1
            if run >= _GROWTH_RUN:
                return True
        else:
            run = 0
    return False


def cdf_truncated(p: RicianShadowedParams, gamma: float, k_tr: int) -> TruncatedCdf:
    """P(X <= gamma) from the first k_tr + 1 series coefficients.

    The truncated sum is clamped to [0, 1]; the alternating series can
    slightly overshoot before it has converged.  `converged` goes false
    when per-order magnitudes keep growing (threshold far outside the
    expansion's useful range) or a term overflows.
    """
    if not gamma >= 0:
        raise ValueError(f"threshold must be non-negative, got {gamma}")
    if k_tr < 0:
        raise ValueError(f"truncation order must be non-negative, got {k_tr}")
    if gamma == 0.0:
        return TruncatedCdf(0.0, True)
    if math.isinf(gamma):
        return TruncatedCdf(1.0, True)
    terms = []
    converged = True
    for n in range(k_tr + 1):
        sign, log_mag = _alpha_signed_log(n, p, gamma)
        if sign == 0.0:
            terms.append(0.0)
            continue
        if log_mag > _LOG_HUGE:
            converged = False
            terms.append(math.copysign(math.inf, sign))
            continue
        terms.append(sign * math.exp(log_mag))
    total = math.fsum(t for t in terms if math.isfinite(t))
    if _diverging([abs(t) for t in terms]):
        converged = False
    return TruncatedCdf(min(max(total, 0.0), 1.0), converged)


def _check_size(size: int | None, antithetic: bool) -> None:
    if size is not None and size < 0:
        raise ValueError(f"size must be non-negative, got {size}")
    if antithetic:
        if size is None or size % 2 != 0:
            raise ValueError("antithetic sampling requires an even sample count")


def sample_rician_shadowed(
    p: RicianShadowedParams,
    rng: np.random.Generator,
    size: int | None = None,
    antithetic: bool = False,
):
    """Draw Rician shadowed power samples X = |sqrt(G) e^{j theta} + c|^2.

    G ~ Gamma(shape m, scale Omega/m) with Omega = mean_power K/(1+K) is the
    shadowed line-of-sight power, theta ~ U[0, 2 pi), and c is a circular
    complex Gaussian with E|c|^2 = mean_power/(1+K).  With ``antithetic``
    the second half of the batch reuses (G, theta) and mirrors the diffuse
    component, giving negatively correlated pairs with the exact marginal.

    Returns a scalar when size is None, else an ndarray of that length.
    """
    _check_size(size, antithetic)
    n = 1 if size is None else size
    half = n // 2 if antithetic else n
    omega = p.mean_power * p.k_factor / (1.0 + p.k_factor)
    diffuse_power = p.mean_power / (1.0 + p.k_factor)

    if p.k_factor > 0:
        los_amp = np.sqrt(rng.gamma(p.m, omega / p.m, half))
    else:
        los_amp = np.zeros(half)
    theta = rng.uniform(0.0, 2.0 * np.pi, half)
    scale = math.sqrt(diffuse_power / 2.0)
    c = rng.normal(0.0, scale, half) + 1j * rng.normal(0.0, scale, half)
    los = los_amp * np.exp(1j * theta)

    x = np.abs(los + c) ** 2
    if antithetic:
        x = np.concatenate([x, np.abs(los - c) ** 2])
    if size is None:
        return float(x[0])
    return x


def sample_exponential(
    p: ExponentialParams,
    rng: np.random.Generator,
    size: int | None = None,
    antithetic: bool = False,
):
    """Draw exponential power samples with the given mean.

    Antithetic batches pair -mean ln(u) with -mean ln(1-u).
    """
    _check_size(size, antithetic)
    n = 1 if size is None else size
    if antithetic:
        # open interval keeps both log branches finite
        u = rng.uniform(np.nextafter(0.0, 1.0), 1.0, n // 2)
        y = np.concatenate(
            [-p.mean_power * np.log1p(-u), -p.mean_power * np.log(u)]
        )
    else:
        y = rng.exponential(p.mean_power, n)
    if size is None:
        return float(y[0])
    return y
