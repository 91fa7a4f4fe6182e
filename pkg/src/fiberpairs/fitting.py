"""Closed-form regression and calibration.

Both fit models are linear in their parameters, so they are solved by
normal equations (2x2 at most), no iterative optimizer. The square-root
law couples the fits back to the physics: its coefficient is predictable
from fiber parameters and temperature, and inverting that prediction
calibrates the Raman gain from a published noise ratio or preparation
efficiency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import RankDeficiencyError
from .physics import ChannelSpec, Environment, FiberSpec, bose_occupation


@dataclass(frozen=True)
class SeriesPoint:
    """One (x, y) sample with an optional positive weight."""

    x: float
    y: float
    weight: float = 1.0

    def __post_init__(self):
        if self.x < 0:
            raise ValueError(f"x must be >= 0, got {self.x}")
        if not self.weight > 0:
            raise ValueError(f"weight must be > 0, got {self.weight}")


@dataclass(frozen=True)
class QuadraticFit:
    """y = s1*x + s2*x^2 (no constant term).

    The linear term is the single-photon (Raman noise) contribution, the
    quadratic term the pair (four-wave mixing) contribution.
    """

    s1: float
    s2: float
    residual_norm: float


@dataclass(frozen=True)
class SqrtFit:
    """y = coeff * sqrt(x)."""

    coeff: float
    residual_norm: float


def _arrays(points: Sequence[SeriesPoint]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = np.array([p.x for p in points], dtype=float)
    y = np.array([p.y for p in points], dtype=float)
    w = np.array([p.weight for p in points], dtype=float)
    return x, y, w


def _rms(residuals: np.ndarray) -> float:
    return float(math.sqrt(np.mean(residuals * residuals)))


def _quadratic_normal_matrix(points: Sequence[SeriesPoint]):
    x, y, w = _arrays(points)
    if len(set(x[x > 0])) < 2:
        raise RankDeficiencyError(
            "quadratic fit needs at least 2 points with distinct positive x"
        )
    s11 = float(np.sum(w * x * x))
    s12 = float(np.sum(w * x * x * x))
    s22 = float(np.sum(w * x * x * x * x))
    det = s11 * s22 - s12 * s12
    if det <= 0.0:
        raise RankDeficiencyError("quadratic fit design matrix is singular")
    return x, y, w, s11, s12, s22, det


def fit_quadratic(points: Sequence[SeriesPoint]) -> QuadraticFit:
    """Weighted least squares for y = s1*x + s2*x^2.

    Exact (to rounding) on noiseless data drawn from the model class.
    Dark counts are assumed subtracted upstream, hence no intercept.
    """
    x, y, w, s11, s12, s22, det = _quadratic_normal_matrix(points)
    b1 = float(np.sum(w * x * y))
    b2 = float(np.sum(w * x * x * y))
    s1 = (b1 * s22 - b2 * s12) / det
    s2 = (s11 * b2 - s12 * b1) / det
    return QuadraticFit(s1=s1, s2=s2, residual_norm=_rms(y - s1 * x - s2 * x * x))


def quadratic_coefficient_errors(points: Sequence[SeriesPoint]) -> tuple[float, float]:
    """Standard errors of (s1, s2) when weights are inverse variances.

    sqrt of the diagonal of the inverse normal matrix; valid when each
    point's weight is 1/sigma_y^2.
    """
    _, _, _, s11, s12, s22, det = _quadratic_normal_matrix(points)
    return (math.sqrt(s22 / det), math.sqrt(s11 / det))


def fit_sqrt(points: Sequence[SeriesPoint]) -> SqrtFit:
    """Weighted least squares for y = coeff*sqrt(x): coeff = sum(w y sqrt(x)) / sum(w x)."""
    x, y, w = _arrays(points)
    denom = float(np.sum(w * x))
    if denom <= 0.0:
        raise RankDeficiencyError("square-root fit needs at least one point with x > 0")
    coeff = float(np.sum(w * y * np.sqrt(x))) / denom
    return SqrtFit(coeff=coeff, residual_norm=_rms(y - coeff * np.sqrt(x)))


def sqrt_law_coefficient(fiber: FiberSpec, channel: ChannelSpec, env: Environment) -> float:
    """Predicted coefficient of the square-root law ratio = coeff*sqrt(R).

    gamma / (g_R * n * sqrt(bandwidth*window)), a constant of the fiber,
    working detune and temperature. Multiplied by sqrt(pair rate) it
    reproduces the pair-to-noise ratio.
    """
    if fiber.raman_gain == 0.0:
        raise ValueError("square-root-law coefficient undefined: fiber.raman_gain is zero")
    n = bose_occupation(channel.detune, env)
    return fiber.gamma / (fiber.raman_gain * n * math.sqrt(channel.acceptance))


def calibrate_raman_gain(
    fiber: FiberSpec,
    channel: ChannelSpec,
    env: Environment,
    coefficient: float | None = None,
    efficiency: float | None = None,
    pair_rate: float | None = None,
) -> float:
    """Back-solve the Raman gain from an observed noise figure.

    Give either the fitted square-root-law ``coefficient``, or a heralded
    preparation ``efficiency`` observed at a known ``pair_rate`` (the
    ratio is then efficiency/(1-efficiency) and the coefficient follows
    as ratio/sqrt(pair_rate)). Returns g_R in W^-1 km^-1; ``fiber`` is
    used only for its nonlinear coefficient, so its own raman_gain may be
    a placeholder.
    """
    if (coefficient is None) == (efficiency is None):
        raise ValueError("give exactly one of coefficient or efficiency")
    if coefficient is None:
        if not 0.0 < efficiency < 1.0:
            raise ValueError(
                f"efficiency must be in (0, 1), got {efficiency}"
                + (" (>= 1 implies zero noise)" if efficiency is not None and efficiency >= 1 else "")
            )
        if pair_rate is None or not pair_rate > 0:
            raise ValueError("calibrating from an efficiency requires pair_rate > 0")
        ratio = efficiency / (1.0 - efficiency)
        coefficient = ratio / math.sqrt(pair_rate)
    if not coefficient > 0:
        raise ValueError(f"observed coefficient must be > 0, got {coefficient}")
    n = bose_occupation(channel.detune, env)
    return fiber.gamma / (coefficient * n * math.sqrt(channel.acceptance))
