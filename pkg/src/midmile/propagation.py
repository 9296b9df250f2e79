"""Hata path loss, link budget, coverage radius, and SINR-to-rate mapping.

The suburban Hata variant drives every distance-to-power conversion in the
simulator. Its closed form, for distance d (km), carrier f (MHz), base
antenna height ht (m) and mobile antenna height hr (m):

    PL_urban = 69.55 + 26.16 log10(f) - 13.82 log10(ht) - a(hr)
               + (44.9 - 6.55 log10(ht)) log10(d)
    a(hr)    = (1.1 log10(f) - 0.7) hr - (1.56 log10(f) - 0.8)
    PL_suburban = PL_urban - 2 (log10(f/28))^2 - 5.4

a(hr) is the small/medium-city mobile antenna correction, the appropriate
choice for a rural deployment. All functions here are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import ValidationError
from .model import HATA_FREQ_RANGE_MHZ, RadioParams

# Hata is calibrated for 1..20 km; below 1 km the loss is clamped to its
# 1 km value so that close-in links get finite, conservative rates.
HATA_MIN_KM = 1.0
HATA_MAX_KM = 20.0

THERMAL_NOISE_DBM_HZ = -174.0

# Shannon efficiency ceiling, b/s/Hz. Roughly the 64-QAM peak of the radio
# technology modeled here; documented as a tunable in the README.
SE_CAP_BPS_HZ = 4.8


@dataclass(frozen=True)
class LinkBudget:
    """Derived budget figures for one radio configuration."""

    max_allowed_pl_db: float
    noise_floor_dbm: float


def _mobile_antenna_correction(f_mhz: float, hr_m: float) -> float:
    lf = math.log10(f_mhz)
    return (1.1 * lf - 0.7) * hr_m - (1.56 * lf - 0.8)


def _check_hata_args(d_km: float, f_mhz: float, ht_m: float, hr_m: float) -> None:
    if not HATA_MIN_KM <= d_km <= HATA_MAX_KM:
        raise ValidationError(
            f"distance {d_km} km outside Hata validity range "
            f"[{HATA_MIN_KM}, {HATA_MAX_KM}] km"
        )
    lo, hi = HATA_FREQ_RANGE_MHZ
    if not lo <= f_mhz <= hi:
        raise ValidationError(f"frequency {f_mhz} MHz outside [{lo}, {hi}] MHz")
    if not 30.0 <= ht_m <= 200.0:
        raise ValidationError(f"tx height {ht_m} m outside [30, 200] m")
    if not 1.0 <= hr_m <= 10.0:
        raise ValidationError(f"rx height {hr_m} m outside [1, 10] m")


def _urban_pl(d_km: float, f_mhz: float, ht_m: float, hr_m: float) -> float:
    # Closed form without range checks; callers that extrapolate (coverage
    # bisection, sub-km clamping) use this directly.
    lht = math.log10(ht_m)
    return (
        69.55
        + 26.16 * math.log10(f_mhz)
        - 13.82 * lht
        - _mobile_antenna_correction(f_mhz, hr_m)
        + (44.9 - 6.55 * lht) * math.log10(d_km)
    )


def suburban_correction_db(f_mhz: float) -> float:
    """Offset subtracted from the urban form; 5.4 dB exactly at 28 MHz."""
    x = math.log10(f_mhz / 28.0)
    return 2.0 * x * x + 5.4


def _suburban_pl(d_km: float, f_mhz: float, ht_m: float, hr_m: float) -> float:
    return _urban_pl(d_km, f_mhz, ht_m, hr_m) - suburban_correction_db(f_mhz)


def hata_urban_pl(d_km: float, f_mhz: float, ht_m: float, hr_m: float) -> float:
    """Median urban path loss in dB (base Hata form)."""
    _check_hata_args(d_km, f_mhz, ht_m, hr_m)
    return _urban_pl(d_km, f_mhz, ht_m, hr_m)


def hata_suburban_pl(d_km: float, f_mhz: float, ht_m: float, hr_m: float) -> float:
    """Median suburban path loss in dB."""
    _check_hata_args(d_km, f_mhz, ht_m, hr_m)
    return _suburban_pl(d_km, f_mhz, ht_m, hr_m)


def max_allowed_path_loss_db(radio: RadioParams) -> float:
    """Largest tolerable path loss before rx power falls under sensitivity."""
    return (
        radio.tx_power_dbm
        + radio.tx_gain_db
        + radio.rx_gain_db
        - radio.cable_loss_db
        - radio.noise_figure_db
        - radio.rx_sensitivity_dbm
    )


def noise_floor_dbm(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise plus receiver noise figure over one channel bandwidth."""
    if bandwidth_hz <= 0:
        raise ValidationError("bandwidth must be positive")
    return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


def link_budget(radio: RadioParams, bandwidth_hz: float) -> LinkBudget:
    return LinkBudget(
        max_allowed_pl_db=max_allowed_path_loss_db(radio),
        noise_floor_dbm=noise_floor_dbm(bandwidth_hz, radio.noise_figure_db),
    )


def coverage_radius(radio: RadioParams) -> float:
    """Distance (km) where suburban path loss exhausts the link budget.

    Path loss is strictly increasing in distance, so the root is unique;
    bisection runs to 1 m precision. Radii beyond 20 km extrapolate the
    Hata slope rather than failing, since the formula stays monotone.
    """
    target = max_allowed_path_loss_db(radio)
    f, ht, hr = radio.center_freq_mhz, radio.tx_height_m, radio.rx_height_m
    lo = HATA_MIN_KM
    if _suburban_pl(lo, f, ht, hr) > target:
        raise ValidationError("coverage below Hata validity floor")
    hi = 2.0
    while _suburban_pl(hi, f, ht, hr) < target:
        hi *= 2.0
        if hi > 1e4:
            raise ValidationError("coverage radius exceeds 10,000 km; check inputs")
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        if _suburban_pl(mid, f, ht, hr) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def received_power(radio: RadioParams, d_km: float) -> float:
    """Received power in dBm at distance d_km; loss clamps below 1 km."""
    if d_km < 0:
        raise ValidationError("distance must be non-negative")
    d = max(d_km, HATA_MIN_KM)
    pl = _suburban_pl(d, radio.center_freq_mhz, radio.tx_height_m, radio.rx_height_m)
    return radio.tx_power_dbm + radio.tx_gain_db + radio.rx_gain_db - radio.cable_loss_db - pl


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def sinr_db(
    signal_dbm: float,
    interferer_powers_dbm: Iterable[float],
    noise_floor_dbm: float,
) -> float:
    """Signal to interference-plus-noise ratio, powers summed in milliwatts."""
    denom = dbm_to_mw(noise_floor_dbm)
    for p in interferer_powers_dbm:
        denom += dbm_to_mw(p)
    return 10.0 * math.log10(dbm_to_mw(signal_dbm) / denom)


def link_rate_bps(
    sinr_db: float,
    bandwidth_hz: float,
    se_cap_bps_hz: float = SE_CAP_BPS_HZ,
) -> float:
    """Shannon rate with a spectral-efficiency ceiling.

    Accepts -inf for a zero-signal link (rate 0).
    """
    if bandwidth_hz < 0:
        raise ValidationError("bandwidth must be non-negative")
    if math.isinf(sinr_db) and sinr_db < 0:
        return 0.0
    se = math.log2(1.0 + 10.0 ** (sinr_db / 10.0))
    return bandwidth_hz * min(se, se_cap_bps_hz)
