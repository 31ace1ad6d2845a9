"""Closed-form outage probabilities for every (scheme, node) pair.

Three multiple-access schemes are covered: full-duplex NOMA (uplink and
both downlink users share the spectrum simultaneously), half-duplex NOMA,
and half-duplex OMA.  Rates are tied to a common base rate so the schemes
are compared fairly: the FD rate is a third of the OMA rate and the HD-NOMA
rate is half of it.

The generic evaluator expands the outage probability
P(X0 <= gamma (1 + sum_i X_i)) into a truncated series over CDF expansion
coefficients of the desired link and moment products of the interferers;
the power-domain NOMA interference at a downlink UAV is folded into an
effective threshold gamma* instead, which becomes infinite (certain
outage) when the rate exceeds what the power split can support.

Transmit power is expressed in dB relative to the receiver noise floor, so
SINR denominators carry a unit noise term.  The oscillator phase-noise
strength and the noise floor (both dBm) enter only through their ratio,
which scales the self-interference channel power; the estimation-error
variance scale `epsilon` multiplies the transmit power exactly once to
give the mean of the exponential residual term.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from functools import partial
from typing import Callable, Sequence

from .channel import (
    ExponentialParams,
    RicianShadowedParams,
    TruncatedCdf,
    _LOG_HUGE,
    _alpha_signed_log,
    _diverging,
    cdf_truncated,
    exponential_moment,
    rician_shadowed_moment,
)
from .specfun import compositions, log_multinomial

__all__ = [
    "Scheme",
    "Node",
    "NodeGeometry",
    "FadingSet",
    "LinkBudget",
    "SystemConfig",
    "OutageResult",
    "rate_for",
    "sinr_threshold",
    "noma_effective_threshold",
    "outage_series",
    "outage_fd_gs",
    "outage_fd_uav",
    "outage_hd_gs",
    "outage_hd_uav",
    "outage_oma_gs",
    "outage_oma_uav",
    "evaluate_outage",
]

MomentFn = Callable[[int], float]


class Scheme(enum.Enum):
    FD_NOMA = "fd_noma"
    HD_NOMA = "hd_noma"
    HD_OMA = "hd_oma"


class Node(enum.Enum):
    GS = "gs"
    UAV2 = "uav2"
    UAV3 = "uav3"


@dataclass(frozen=True)
class NodeGeometry:
    """Euclidean distances (km) between the nodes and the pathloss exponent.

    UAV-1 is the uplink transmitter, the ground station serves UAV-2 (near,
    SIC detector) and UAV-3 (far, interference-ignorant detector).
    """

    d_1g: float
    d_g2: float
    d_g3: float
    d_12: float
    d_13: float
    pathloss_exp: float

    def __post_init__(self) -> None:
        for name in ("d_1g", "d_g2", "d_g3", "d_12", "d_13"):
            if not getattr(self, name) > 0:
                raise ValueError(f"distance {name} must be positive")
        if not self.d_g2 < self.d_g3:
            raise ValueError(
                f"downlink ordering requires d_g2 < d_g3, got {self.d_g2} >= {self.d_g3}"
            )
        if not self.pathloss_exp >= 1:
            raise ValueError(f"pathloss_exp must be >= 1, got {self.pathloss_exp}")


@dataclass(frozen=True)
class FadingSet:
    """Unit-mean fading parameters per link; power scaling comes from the
    link budget, never from these."""

    link_1g: RicianShadowedParams
    link_si: RicianShadowedParams
    link_g2: RicianShadowedParams
    link_g3: RicianShadowedParams
    link_12: RicianShadowedParams
    link_13: RicianShadowedParams

    def __post_init__(self) -> None:
        for name in ("link_1g", "link_si", "link_g2", "link_g3", "link_12", "link_13"):
            if getattr(self, name).mean_power != 1.0:
                raise ValueError(f"fading params for {name} must have unit mean_power")


@dataclass(frozen=True)
class LinkBudget:
    """Received mean power of one link: noise-normalised transmit power
    attenuated by distance^pathloss_exp."""

    tx_power: float
    distance_km: float
    pathloss_exp: float

    def mean_power(self) -> float:
        return self.tx_power / self.distance_km**self.pathloss_exp


@dataclass(frozen=True)
class SystemConfig:
    """Full scenario description.

    p_t is the transmit power in dB over the noise floor; phase_noise_power
    and noise_power are absolute levels in dBm whose difference sets the
    residual self-interference power scale.
    """

    p_t: float
    r_oma: float
    a_gs2: float
    beta: float
    phase_noise_power: float
    noise_power: float
    epsilon: float
    k_tr: int
    geometry: NodeGeometry
    fading: FadingSet

    def __post_init__(self) -> None:
        if not 0 < self.a_gs2 < 1:
            raise ValueError(f"power allocation a_gs2 must lie in (0, 1), got {self.a_gs2}")
        if not 0 <= self.beta <= 1:
            raise ValueError(f"residual SIC strength beta must lie in [0, 1], got {self.beta}")
        if not self.epsilon >= 0:
            raise ValueError(f"estimation-error scale epsilon must be >= 0, got {self.epsilon}")
        if self.k_tr < 0:
            raise ValueError(f"truncation order k_tr must be >= 0, got {self.k_tr}")
        if not self.r_oma >= 0:
            raise ValueError(f"base rate r_oma must be >= 0, got {self.r_oma}")

    @property
    def pt_linear(self) -> float:
        return 10.0 ** (self.p_t / 10.0)

    @property
    def si_power_ratio(self) -> float:
        """Phase-noise power over noise power, linear."""
        return 10.0 ** ((self.phase_noise_power - self.noise_power) / 10.0)


@dataclass(frozen=True)
class OutageResult:
    scheme: Scheme
    node: Node
    probability: float
    threshold_used: float
    converged: bool


def rate_for(scheme: Scheme, r_oma: float) -> float:
    """Per-scheme transmission rate from the common base rate."""
    if not r_oma >= 0:
        raise ValueError(f"base rate must be non-negative, got {r_oma}")
    if scheme is Scheme.FD_NOMA:
        return r_oma / 3.0
    if scheme is Scheme.HD_NOMA:
        return r_oma / 2.0
    return r_oma


def sinr_threshold(rate: float) -> float:
    """SINR threshold 2^rate - 1 for outage at the given rate."""
    if not rate >= 0:
        raise ValueError(f"rate must be non-negative, got {rate}")
    return math.expm1(rate * math.log(2.0))


def noma_effective_threshold(gamma: float, alloc: float, residual: float) -> float:
    """Fold the power-domain NOMA split into an effective SINR threshold.

    Returns gamma / (alloc - (1 - alloc) residual gamma), or inf when the
    denominator is non-positive: the rate then exceeds what the allocation
    can ever support and outage is certain.  The interfering share is
    weighted by `residual` (the leftover after SIC at the near user, or 1
    at the interference-ignorant far user).
    """
    if not gamma >= 0:
        raise ValueError(f"threshold must be non-negative, got {gamma}")
    if not 0 < alloc < 1:
        raise ValueError(f"allocation must lie in (0, 1), got {alloc}")
    if not 0 <= residual <= 1:
        raise ValueError(f"residual must lie in [0, 1], got {residual}")
    denom = alloc - (1.0 - alloc) * residual * gamma
    if denom <= 0:
        return math.inf
    return gamma / denom


def outage_series(
    desired: RicianShadowedParams,
    interferer_moments: Sequence[MomentFn],
    gamma: float,
    k_tr: int,
) -> TruncatedCdf:
    """Truncated series for P(X0 <= gamma (1 + sum_j X_j)).

    Each entry of `interferer_moments` maps a non-negative order l to
    E{X_j^l} (orders up to k_tr + 1 are used).  Order n of the series
    combines the CDF expansion coefficient of the desired link with
    moment products over all compositions of n + 1 across the interferer
    slots plus one implicit unit-moment slot for the noise term.

    The sum is clamped to [0, 1]; an infinite threshold short-circuits to
    certain outage.
    """
    if k_tr < 0:
        raise ValueError(f"truncation order must be non-negative, got {k_tr}")
    if not gamma >= 0:
        raise ValueError(f"threshold must be non-negative, got {gamma}")
    if math.isinf(gamma):
        return TruncatedCdf(1.0, True)
    if gamma == 0.0:
        return TruncatedCdf(0.0, True)
    if not interferer_moments:
        return cdf_truncated(desired, gamma, k_tr)

    num_slots = len(interferer_moments) + 1
    log_moments = []
    for fn in interferer_moments:
        col = []
        for order in range(k_tr + 2):
            value = fn(order)
            if value < 0:
                raise ValueError(f"moment of order {order} is negative: {value}")
            col.append(math.log(value) if value > 0 else -math.inf)
        log_moments.append(col)

    terms = []
    converged = True
    for n in range(k_tr + 1):
        sign, log_alpha = _alpha_signed_log(n, desired, gamma)
        if sign == 0.0:
            terms.append(0.0)
            continue
        comp_logs = []
        for comp in compositions(n + 1, num_slots):
            lg = log_multinomial(comp)
            for j in range(len(interferer_moments)):
                lg += log_moments[j][comp.parts[j]]
            comp_logs.append(lg)
        peak = max(comp_logs)
        if peak == -math.inf:
            terms.append(0.0)
            continue
        log_s = peak + math.log(math.fsum(math.exp(x - peak) for x in comp_logs))
        log_term = log_alpha + log_s
        if log_term > _LOG_HUGE:
            converged = False
            terms.append(math.copysign(math.inf, sign))
            continue
        terms.append(sign * math.exp(log_term))

    total = math.fsum(t for t in terms if math.isfinite(t))
    if _diverging([abs(t) for t in terms]):
        converged = False
    return TruncatedCdf(min(max(total, 0.0), 1.0), converged)


def _scaled(unit_params: RicianShadowedParams, mean_power: float) -> RicianShadowedParams:
    return replace(unit_params, mean_power=mean_power)


def _downlink_geometry(cfg: SystemConfig, node: Node):
    geo = cfg.geometry
    if node is Node.UAV2:
        return geo.d_g2, geo.d_12, cfg.fading.link_g2, cfg.fading.link_12, cfg.a_gs2, cfg.beta
    if node is Node.UAV3:
        return geo.d_g3, geo.d_13, cfg.fading.link_g3, cfg.fading.link_13, 1.0 - cfg.a_gs2, 1.0
    raise ValueError(f"downlink evaluation requires UAV2 or UAV3, got {node}")


def _budget(cfg: SystemConfig, distance_km: float) -> float:
    return LinkBudget(cfg.pt_linear, distance_km, cfg.geometry.pathloss_exp).mean_power()


def outage_fd_gs(cfg: SystemConfig) -> OutageResult:
    """FD-NOMA outage at the ground station.

    The uplink signal competes against the two residual self-interference
    components: a Rician shadowed term scaled by the phase-noise/noise
    power ratio and an exponential channel-estimation error term.
    """
    gamma = sinr_threshold(rate_for(Scheme.FD_NOMA, cfg.r_oma))
    desired = _scaled(cfg.fading.link_1g, _budget(cfg, cfg.geometry.d_1g))
    si_fading = _scaled(cfg.fading.link_si, cfg.pt_linear * cfg.si_power_ratio)
    moments: list[MomentFn] = [partial(rician_shadowed_moment, si_fading)]
    if cfg.epsilon > 0:
        est_err = ExponentialParams(cfg.pt_linear * cfg.epsilon)
        moments.append(partial(exponential_moment, est_err))
    result = outage_series(desired, moments, gamma, cfg.k_tr)
    return OutageResult(Scheme.FD_NOMA, Node.GS, result.value, gamma, result.converged)


def outage_fd_uav(cfg: SystemConfig, node: Node) -> OutageResult:
    """FD-NOMA outage at a downlink UAV.

    The NOMA power split is folded into the effective threshold; the
    uplink UAV contributes one Rician shadowed interference term.
    """
    d_gi, d_1i, fading_gi, fading_1i, alloc, residual = _downlink_geometry(cfg, node)
    gamma = sinr_threshold(rate_for(Scheme.FD_NOMA, cfg.r_oma))
    gamma_eff = noma_effective_threshold(gamma, alloc, residual)
    if math.isinf(gamma_eff):
        return OutageResult(Scheme.FD_NOMA, node, 1.0, math.inf, True)
    desired = _scaled(fading_gi, _budget(cfg, d_gi))
    uplink = _scaled(fading_1i, _budget(cfg, d_1i))
    result = outage_series(
        desired, [partial(rician_shadowed_moment, uplink)], gamma_eff, cfg.k_tr
    )
    return OutageResult(Scheme.FD_NOMA, node, result.value, gamma_eff, result.converged)


def outage_hd_gs(cfg: SystemConfig) -> OutageResult:
    """HD-NOMA outage at the ground station: no self-interference."""
    gamma = sinr_threshold(rate_for(Scheme.HD_NOMA, cfg.r_oma))
    desired = _scaled(cfg.fading.link_1g, _budget(cfg, cfg.geometry.d_1g))
    result = cdf_truncated(desired, gamma, cfg.k_tr)
    return OutageResult(Scheme.HD_NOMA, Node.GS, result.value, gamma, result.converged)


def outage_hd_uav(cfg: SystemConfig, node: Node) -> OutageResult:
    """HD-NOMA outage at a downlink UAV: no uplink interference, but the
    NOMA split still applies through the effective threshold."""
    d_gi, _, fading_gi, _, alloc, residual = _downlink_geometry(cfg, node)
    gamma = sinr_threshold(rate_for(Scheme.HD_NOMA, cfg.r_oma))
    gamma_eff = noma_effective_threshold(gamma, alloc, residual)
    if math.isinf(gamma_eff):
        return OutageResult(Scheme.HD_NOMA, node, 1.0, math.inf, True)
    desired = _scaled(fading_gi, _budget(cfg, d_gi))
    result = cdf_truncated(desired, gamma_eff, cfg.k_tr)
    return OutageResult(Scheme.HD_NOMA, node, result.value, gamma_eff, result.converged)


def outage_oma_gs(cfg: SystemConfig) -> OutageResult:
    """HD-OMA outage at the ground station: full rate, no interference."""
    gamma = sinr_threshold(rate_for(Scheme.HD_OMA, cfg.r_oma))
    desired = _scaled(cfg.fading.link_1g, _budget(cfg, cfg.geometry.d_1g))
    result = cdf_truncated(desired, gamma, cfg.k_tr)
    return OutageResult(Scheme.HD_OMA, Node.GS, result.value, gamma, result.converged)


def outage_oma_uav(cfg: SystemConfig, node: Node) -> OutageResult:
    """HD-OMA outage at a downlink UAV: orthogonal resources, so neither a
    NOMA threshold transform nor interference terms apply."""
    d_gi, _, fading_gi, _, _, _ = _downlink_geometry(cfg, node)
    gamma = sinr_threshold(rate_for(Scheme.HD_OMA, cfg.r_oma))
    desired = _scaled(fading_gi, _budget(cfg, d_gi))
    result = cdf_truncated(desired, gamma, cfg.k_tr)
    return OutageResult(Scheme.HD_OMA, node, result.value, gamma, result.converged)


def evaluate_outage(cfg: SystemConfig, scheme: Scheme, node: Node) -> OutageResult:
    """Dispatch to the closed-form evaluator for (scheme, node)."""
    if scheme is Scheme.FD_NOMA:
        return outage_fd_gs(cfg) if node is Node.GS else outage_fd_uav(cfg, node)
    if scheme is Scheme.HD_NOMA:
        return outage_hd_gs(cfg) if node is Node.GS else outage_hd_uav(cfg, node)
    return outage_oma_gs(cfg) if node is Node.GS else outage_oma_uav(cfg, node)
