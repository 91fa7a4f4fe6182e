"""Forward and inverse map between generation rates and detector count rates.

The forward model gives the four per-pulse count probabilities (signal
singles, idler singles, coincidences, accidentals) from the generation
rates, detector efficiencies and dark counts. It is linearized in the
rates, so it holds for per-pulse rates well below 1. The inversion is
exact algebra, no fitting.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import (
    ConfigError,
    DataInconsistencyError,
    ModelValidityError,
    NegativeRateError,
    NegativeRateWarning,
)
from .physics import IDLER, SIGNAL, ChannelSpec, RateTriple


@dataclass(frozen=True)
class CountRecord:
    """Per-pulse observed count probabilities.

    n_s, n_i: singles on the signal and idler arms
    n_co: coincidences (both arms, same pulse)
    n_ac: accidental coincidences (both arms, different pulses)
    """

    n_s: float
    n_i: float
    n_co: float
    n_ac: float

    def __post_init__(self):
        for name in ("n_s", "n_i", "n_co", "n_ac"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be a probability in [0, 1], got {value}")


@dataclass(frozen=True)
class DetectorPair:
    """The two detection arms of a coincidence measurement."""

    signal: ChannelSpec
    idler: ChannelSpec

    def __post_init__(self):
        if self.signal.side != SIGNAL:
            raise ConfigError(f"signal channel has side={self.signal.side!r}")
        if self.idler.side != IDLER:
            raise ConfigError(f"idler channel has side={self.idler.side!r}")


def forward_counts(rates: RateTriple, det: DetectorPair) -> CountRecord:
    """Predict the four per-pulse count probabilities from generation rates.

    N_s  = eta_s (R + R_s) + d_s
    N_i  = eta_i (R + R_i) + d_i
    N_co = eta_s eta_i (R   + R R_s + R R_i + R_s R_i) + cross dark terms
    N_ac = eta_s eta_i (R^2 + R R_s + R R_i + R_s R_i) + cross dark terms

    The dark terms are identical in N_co and N_ac, so
    N_co - N_ac = eta_s eta_i (R - R^2) exactly.
    """
    r, rs, ri = rates.pair_rate, rates.stokes_rate, rates.antistokes_rate
    es, ds = det.signal.efficiency, det.signal.dark_prob
    ei, di = det.idler.efficiency, det.idler.dark_prob

    n_s = es * (r + rs) + ds
    n_i = ei * (r + ri) + di
    cross = rs * ri + r * rs + r * ri
    dark = es * (r + rs) * di + ei * (r + ri) * ds
    n_co = es * ei * (r + cross) + dark
    n_ac = es * ei * (r * r + cross) + dark

    for name, value in (("n_s", n_s), ("n_i", n_i), ("n_co", n_co), ("n_ac", n_ac)):
        if not 0.0 <= value <= 1.0:
            raise ModelValidityError(
                f"{name}={value:.6g} is outside [0, 1]: "
                "rates too large for the linearized count model"
            )
    return CountRecord(n_s=n_s, n_i=n_i, n_co=n_co, n_ac=n_ac)


def invert_counts(counts: CountRecord, det: DetectorPair, lenient: bool = False) -> RateTriple:
    """Recover generation rates from measured count probabilities.

    Exact inversion of the forward model: with
    delta = (n_co - n_ac)/(eta_s eta_i), the pair rate solves
    R^2 - R + delta = 0, taking the physical branch R <= 1/2; the noise
    rates follow by subtraction from the singles.

    Negative recovered noise rates signal mis-calibrated efficiencies or
    dark counts; strict mode (default) raises, ``lenient`` clamps them to
    zero and emits a :class:`NegativeRateWarning`. Negative values within
    rounding noise of zero (|value| <= 1e-12) are zeroed silently in
    either mode.
    """
    es, ds = det.signal.efficiency, det.signal.dark_prob
    ei, di = det.idler.efficiency, det.idler.dark_prob
    if es <= 0.0 or ei <= 0.0:
        raise ConfigError("inversion requires positive detector efficiencies on both arms")

    delta = (counts.n_co - counts.n_ac) / (es * ei)
    if delta < 0.0:
        raise DataInconsistencyError(
            f"accidentals exceed coincidences (n_ac={counts.n_ac:.6g} > n_co={counts.n_co:.6g})"
        )
    if delta > 0.25:
        raise DataInconsistencyError(
            f"coincidence excess exceeds model maximum (delta={delta:.6g} > 1/4)"
        )
    pair = 0.5 * (1.0 - math.sqrt(1.0 - 4.0 * delta))

    noise_floor = 1e-12  # rounding noise, not a physical negative

    def check(field: str, value: float) -> float:
        if value >= 0.0:
            return value
        if value >= -noise_floor:
            return 0.0
        if not lenient:
            raise NegativeRateError(field, value)
        warnings.warn(
            f"clamped negative {field} ({value:.6g}) to zero",
            NegativeRateWarning,
            stacklevel=3,
        )
        return 0.0

    stokes = check("stokes_rate", (counts.n_s - ds) / es - pair)
    antistokes = check("antistokes_rate", (counts.n_i - di) / ei - pair)
    return RateTriple(pair_rate=pair, stokes_rate=stokes, antistokes_rate=antistokes)


def car(counts: CountRecord) -> float:
    """Coincidence-to-accidental ratio n_co/n_ac."""
    if counts.n_ac == 0.0:
        raise ValueError("CAR undefined: accidental rate is zero")
    return counts.n_co / counts.n_ac
