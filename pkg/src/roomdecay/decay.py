"""Power response, energy decay curves, and reverberation time.

The power response is a discrete Laplace-type superposition of exponentials
weighted by the damping density. Backward integration turns it (or any
squared impulse response) into an energy decay curve, from which
reverberation times are fitted. Classic diffuse-field formulas are included
for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import DECAY_60DB, DampingDensity
from .room import ShoeboxRoom


class DynamicRangeError(ValueError):
    """The decay curve does not span the requested evaluation range."""


@dataclass(frozen=True)
class DecayCurve:
    """Uniformly sampled energy curve.

    ``kind`` is ``"power_response"`` for instantaneous power over time or
    ``"edc"`` for a backward-integrated (non-increasing) energy decay curve.
    """

    values: np.ndarray
    dt: float
    t0: float = 0.0
    kind: str = "power_response"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("values must be a non-empty 1-D array")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.kind not in ("power_response", "edc"):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if np.any(values < 0):
            raise ValueError("energy samples must be nonnegative")
        if self.kind == "edc" and np.any(np.diff(values) > 0):
            raise ValueError("an EDC must be non-increasing")
        object.__setattr__(self, "values", values)

    @property
    def times(self):
        return self.t0 + self.dt * np.arange(self.values.size)

    def to_db(self, floor: float = 1e-300):
        """Curve in dB relative to its first sample."""
        ref = self.values[0]
        if ref <= 0:
            raise ValueError("cannot normalize a curve starting at zero energy")
        return 10.0 * np.log10(np.maximum(self.values, floor) / ref)


@dataclass(frozen=True)
class RTEstimate:
    """Reverberation time from a linear fit on a dB decay curve."""

    t: float
    fit_range_db: tuple
    fit_residual: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"reverberation time must be positive, got {self.t}")
        upper, lower = self.fit_range_db
        if not upper > lower:
            raise ValueError(f"fit range must satisfy upper > lower, got {self.fit_range_db}")


def sigma_quadrature(density: DampingDensity, n_sigma: int = 200):
    """Midpoint sampling of the density over its support.

    Returns (rates, weights): ``n_sigma`` uniformly spaced decay rates inset
    by half a cell from the support endpoints (which are kinks or zeros of
    the density) and the corresponding integration weights.
    """
    if n_sigma < 2:
        raise ValueError("n_sigma must be at least 2")
    sigma_min, sigma_max = density.support
    step = (sigma_max - sigma_min) / n_sigma
    rates = sigma_min + (np.arange(n_sigma) + 0.5) * step
    weights = np.full(n_sigma, step)
    return rates, weights


def power_response(density: DampingDensity, t_grid, c: float,
                   n_sigma: int = 200) -> DecayCurve:
    """Late-field power response p(c t) as a weighted sum of exponentials.

    ``t_grid`` must be uniformly spaced and increasing. At t = 0 the value
    approximates the integral of the density, i.e. 1/volume.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise ValueError("time grid must not be empty")
    dt = _uniform_spacing(t_grid)
    rates, weights = sigma_quadrature(density, n_sigma)
    amplitudes = weights * density(rates)
    values = np.exp(np.outer(t_grid * c, rates)) @ amplitudes
    return DecayCurve(values=values, dt=dt, t0=float(t_grid[0]), kind="power_response")


def backward_integrate(curve: DecayCurve, tail_energy: float = 0.0) -> DecayCurve:
    """Schroeder backward integration of a power response.

    EDC(t_k) = dt * sum_{j>=k} p(t_j) + tail_energy, where ``tail_energy``
    accounts for energy beyond the end of the grid (see ``analytic_edc`` for
    the exact tail of the exponential-sum response).
    """
    if curve.kind != "power_response":
        raise ValueError("backward integration expects a power_response curve")
    if tail_energy < 0:
        raise ValueError("tail energy must be nonnegative")
    acc = np.cumsum(curve.values[::-1])[::-1] * curve.dt + tail_energy
    return DecayCurve(values=acc, dt=curve.dt, t0=curve.t0, kind="edc")


def analytic_edc(density: DampingDensity, t_grid, c: float,
                 n_sigma: int = 200) -> DecayCurve:
    """EDC of the analytic power response with an exact exponential tail.

    The tail integral from the end of the grid to infinity is evaluated in
    closed form per decay rate, removing truncation bias even for very slow
    decays.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    response = power_response(density, t_grid, c, n_sigma)
    rates, weights = sigma_quadrature(density, n_sigma)
    amplitudes = weights * density(rates)
    t_end = t_grid[-1] + response.dt
    tail = float(np.sum(amplitudes * np.exp(rates * c * t_end) / (-rates * c)))
    return backward_integrate(response, tail_energy=tail)


def rt_from_edc(edc: DecayCurve, upper_db: float = -5.0,
                lower_db: float = -25.0) -> RTEstimate:
    """Reverberation time from a least-squares line on the dB decay curve.

    The fit runs over samples whose level (relative to the first sample)
    lies within [lower_db, upper_db]; the slope is extrapolated to -60 dB.
    Raises ``DynamicRangeError`` when the curve never reaches ``lower_db``.
    """
    if edc.kind != "edc":
        raise ValueError("reverberation time is fitted on an EDC")
    if not upper_db > lower_db:
        raise ValueError(f"fit range must satisfy upper > lower, got ({upper_db}, {lower_db})")
    level = edc.to_db()
    if level.min() > lower_db:
        raise DynamicRangeError(
            f"EDC spans only {level.min():.1f} dB, fit needs {lower_db:.1f} dB")
    mask = (level <= upper_db) & (level >= lower_db)
    if mask.sum() < 2:
        raise DynamicRangeError("fewer than two EDC samples inside the fit range")
    t = edc.times[mask]
    y = level[mask]
    slope, intercept = np.polyfit(t, y, 1)
    if slope >= 0:
        raise DynamicRangeError("EDC does not decay over the fit range")
    residual = float(np.sqrt(np.mean((y - (slope * t + intercept)) ** 2)))
    return RTEstimate(t=-60.0 / slope, fit_range_db=(upper_db, lower_db),
                      fit_residual=residual)


def classic_rt(room: ShoeboxRoom, formula: str) -> float:
    """Sabine, Eyring, or Fitzroy reverberation time prediction in seconds.

    Absorption coefficients are 1 - beta^2 per wall. Fitzroy weights each
    axis pair by its own average absorption.
    """
    alpha = room.absorption
    areas = room.wall_areas
    surface = room.surface_area
    numerator = 0.161 * room.volume

    if formula == "sabine":
        return numerator / float(np.sum(areas * alpha))
    if formula == "eyring":
        mean_alpha = float(np.sum(areas * alpha)) / surface
        if mean_alpha >= 1.0:
            raise ValueError(f"average absorption {mean_alpha:.3f} >= 1 breaks Eyring's formula")
        return numerator / (-surface * math.log(1.0 - mean_alpha))
    if formula == "fitzroy":
        total = 0.0
        for pair, area in ((alpha[0:2], areas[0]), (alpha[2:4], areas[2]), (alpha[4:6], areas[4])):
            mean_alpha = float(np.mean(pair))
            if mean_alpha >= 1.0:
                raise ValueError(
                    f"axis average absorption {mean_alpha:.3f} >= 1 breaks Fitzroy's formula")
            total += -2.0 * area / math.log(1.0 - mean_alpha)
        return numerator / surface**2 * total
    raise ValueError(f"unknown formula {formula!r}; expected sabine, eyring, or fitzroy")


def sigma_to_t60(sigma: float, c: float) -> float:
    """Reverberation time of a pure exponential with decay rate sigma (1/m)."""
    if sigma >= 0:
        raise ValueError(f"decay rate must be negative, got {sigma}")
    return -DECAY_60DB / (sigma * c)


def t60_to_sigma(t60: float, c: float) -> float:
    """Decay rate (1/m) of a pure exponential with the given reverberation time."""
    if t60 <= 0:
        raise ValueError(f"reverberation time must be positive, got {t60}")
    return -DECAY_60DB / (t60 * c)


def default_time_grid(room: ShoeboxRoom, dt: float = 1e-3):
    """Analysis grid from 0 to 1.5x the Eyring reverberation time."""
    t_end = 1.5 * classic_rt(room, "eyring")
    n = max(2, int(np.ceil(t_end / dt)))
    return dt * np.arange(n)


def _uniform_spacing(t_grid):
    if t_grid.size == 1:
        raise ValueError("time grid needs at least two samples")
    steps = np.diff(t_grid)
    dt = float(steps[0])
    if dt <= 0 or not np.allclose(steps, dt, rtol=1e-9, atol=0.0):
        raise ValueError("time grid must be uniformly spaced and increasing")
    return dt
