"""Brute-force validators for the closed-form density.

These deliberately avoid the closed-form code paths: the histogram bins raw
directional decay rates sampled over the sphere, and the smoothed slice
evaluator replaces the Dirac delta by a narrow Gaussian and integrates over
azimuth numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import directional_decay_rate
from .room import ShoeboxRoom, axis_damping


@dataclass(frozen=True)
class Histogram:
    """Binned estimate of the damping density.

    ``masses`` holds the summed sample weights per bin; the weights are
    chosen so the total mass equals 1/volume. ``masses / widths`` estimates
    the density.
    """

    bin_edges: np.ndarray
    masses: np.ndarray
    n_samples: int

    @property
    def centers(self):
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def widths(self):
        return np.diff(self.bin_edges)

    @property
    def density(self):
        return self.masses / self.widths

    @property
    def total_mass(self):
        return float(self.masses.sum())


def fibonacci_directions(n: int):
    """Deterministic, nearly equal-area sample of the unit sphere.

    Returns (theta, phi) arrays: azimuth and polar angle of the spiral
    points.
    """
    i = np.arange(n, dtype=float)
    cos_phi = 1.0 - (2.0 * i + 1.0) / n
    golden = np.pi * (3.0 - np.sqrt(5.0))
    theta = np.mod(i * golden, 2.0 * np.pi)
    phi = np.arccos(np.clip(cos_phi, -1.0, 1.0))
    return theta, phi


def random_directions(n: int, seed: int):
    """Area-uniform random directions from a seeded generator."""
    rng = np.random.default_rng(seed)
    cos_phi = rng.uniform(-1.0, 1.0, size=n)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return theta, np.arccos(cos_phi)


def sphere_histogram(room: ShoeboxRoom, n_bins: int = 100, sampler: str = "fibonacci",
                     n_dirs: int = 1_000_000, seed: int = 0) -> Histogram:
    """Histogram of directional decay rates over the sphere.

    Each direction carries weight 1/(volume * n_dirs), so the histogram mass
    totals 1/volume exactly and ``density`` estimates the omnidirectional
    damping density.
    """
    if sampler == "fibonacci":
        theta, phi = fibonacci_directions(n_dirs)
    elif sampler == "uniform_random":
        theta, phi = random_directions(n_dirs, seed)
    else:
        raise ValueError(f"unknown sampler {sampler!r}")

    damping = axis_damping(room)
    rates = directional_decay_rate(theta, phi, damping)

    sigma_min = -np.sqrt(damping.kx**2 + damping.ky**2 + damping.kz**2)
    sigma_max = max(damping.kx, damping.ky, damping.kz)
    # Guard against rounding pushing a rate a few ulp past the support edge.
    rates = np.clip(rates, sigma_min, sigma_max)

    edges = np.linspace(sigma_min, sigma_max, n_bins + 1)
    counts, _ = np.histogram(rates, bins=edges)
    weight = 1.0 / (room.volume * n_dirs)
    return Histogram(bin_edges=edges, masses=counts * weight, n_samples=n_dirs)


def smoothed_slice_density(room: ShoeboxRoom, phi: float, sigma_grid, epsilon: float,
                           n_theta: int = 20001):
    """Slice density with the Dirac delta replaced by a Gaussian of width epsilon.

    Trapezoidal quadrature over azimuth in the first octant (folded by
    symmetry). Converges to the closed-form slice density as epsilon -> 0
    away from the singular points.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    damping = axis_damping(room)
    sigma_grid = np.atleast_1d(np.asarray(sigma_grid, dtype=float))

    theta = np.linspace(0.0, 0.5 * np.pi, n_theta)
    rates = directional_decay_rate(theta, phi, damping)

    diff = sigma_grid[:, None] - rates[None, :]
    kernel = np.exp(-0.5 * (diff / epsilon) ** 2) / (epsilon * np.sqrt(2.0 * np.pi))
    values = np.trapezoid(kernel, theta, axis=1)
    return values * (8.0 / (4.0 * np.pi * room.volume))
