"""Shared test scaffolding: the reference suburban scenario."""

from fdnoma.channel import RicianShadowedParams
from fdnoma.outage import FadingSet, NodeGeometry, SystemConfig


def unit_link(k: float, m: float) -> RicianShadowedParams:
    return RicianShadowedParams(1.0, k, m)


def suburban(
    pt_db: float = 0.0,
    r_oma: float = 0.2,
    a_gs2: float = 0.5,
    beta: float = 0.1,
    epsilon: float = 0.1,
    k_tr: int = 25,
    d_12: float = 2.0,
    d_13: float = 3.0,
) -> SystemConfig:
    """The reference scenario: K = 10 everywhere, m = 3 on the UAV-2 paths
    and m = 10 elsewhere, noise floor -131 dBm, phase noise -140 dBm."""
    geometry = NodeGeometry(
        d_1g=3.0, d_g2=2.0, d_g3=3.0, d_12=d_12, d_13=d_13, pathloss_exp=2.0
    )
    fading = FadingSet(
        link_1g=unit_link(10.0, 10.0),
        link_si=unit_link(10.0, 10.0),
        link_g2=unit_link(10.0, 3.0),
        link_g3=unit_link(10.0, 10.0),
        link_12=unit_link(10.0, 3.0),
        link_13=unit_link(10.0, 10.0),
    )
    return SystemConfig(
        p_t=pt_db,
        r_oma=r_oma,
        a_gs2=a_gs2,
        beta=beta,
        phase_noise_power=-140.0,
        noise_power=-131.0,
        epsilon=epsilon,
        k_tr=k_tr,
        geometry=geometry,
        fading=fading,
    )
