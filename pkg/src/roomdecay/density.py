"""Closed-form damping density of an absorptive shoebox room.

The density H(sigma) describes how the initial energy of the late sound
field is distributed over exponential decay rates sigma (in 1/m along the
propagation distance). It is supported on a negative interval whose
endpoints, together with five interior kink locations, are simple algebraic
combinations of the per-axis damping coefficients.

Two evaluators are provided: ``slice_density`` for a fixed polar angle
(integrated over azimuth only) and ``omni_density`` for the full sphere.
Both are exact closed forms, not quadratures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .room import AxisDamping, ShoeboxRoom, axis_damping

# -60 dB expressed as a natural-log decay constant: T60 = DECAY_60DB / (|sigma| c).
DECAY_60DB = 6.9078

_HALF_PI = 0.5 * np.pi


def directional_decay_rate(theta, phi, damping: AxisDamping):
    """Decay rate (1/m) of the image-source energy seen from one direction.

    ``theta`` is the azimuth, ``phi`` the polar angle. Broadcasts over array
    inputs. The result always lies between -sqrt(kx^2+ky^2+kz^2) and
    max(kx, ky, kz).
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    sin_phi = np.sin(phi)
    rate = (
        damping.kx * np.abs(np.cos(theta) * sin_phi)
        + damping.ky * np.abs(np.sin(theta) * sin_phi)
        + damping.kz * np.abs(np.cos(phi))
    )
    return float(rate) if rate.ndim == 0 else rate


@dataclass(frozen=True)
class SliceParams:
    """Coefficients of the azimuth-integrated density at a fixed polar angle.

    For phi in [0, pi/2] all four values are <= 0.
    """

    alpha: float
    beta: float
    gamma: float
    phi_offset: float

    @classmethod
    def at(cls, phi: float, damping: AxisDamping) -> "SliceParams":
        return cls(
            alpha=damping.kx * np.sin(phi),
            beta=damping.ky * np.sin(phi),
            gamma=damping.kz * np.cos(phi),
            phi_offset=np.arctan(-damping.ky / damping.kx),
        )


def slice_density(sigma, phi: float, damping: AxisDamping, volume: float):
    """Damping density restricted to a horizontal slice at polar angle phi.

    Evaluates the closed form: an indicator counting how many azimuth roots
    fall into the first octant, divided by the square-root factor from the
    change of variables. The value diverges (integrably) at the lower edge
    of the slice support; evaluation exactly on that edge returns +inf.

    ``phi`` must lie in [0, pi/2]; other octants fold onto this one by
    symmetry.
    """
    if not 0.0 <= phi <= _HALF_PI:
        raise ValueError(f"phi must lie in [0, pi/2], got {phi}")
    p = SliceParams.at(phi, damping)
    sigma = np.asarray(sigma, dtype=float)
    x = sigma - p.gamma
    lower = -np.hypot(p.alpha, p.beta)

    count = np.zeros(x.shape, dtype=float)
    count += ((x >= lower) & (x <= p.beta)).astype(float)
    count += ((x >= lower) & (x <= p.alpha)).astype(float)

    radicand = p.alpha**2 + p.beta**2 - x * x
    out = np.zeros(x.shape, dtype=float)
    inside = count > 0
    singular = inside & (radicand <= 0.0)
    regular = inside & ~singular
    scale = 8.0 / (4.0 * np.pi * volume)
    out[regular] = scale * count[regular] / np.sqrt(radicand[regular])
    out[singular] = np.inf
    return float(out) if out.ndim == 0 else out


def sin_cos_roots(a: float, b: float, c: float):
    """Real roots of a*sin(x) + b*cos(x) - c = 0 on the principal branch.

    Returns an array with 0, 1, or 2 roots. No real root exists when
    a^2 + b^2 < c^2. For b == 0 the equation degenerates to a pure sine.
    """
    norm2 = a * a + b * b
    if norm2 < c * c:
        return np.array([])
    if b == 0.0:
        if a == 0.0:
            return np.array([])
        base = np.arcsin(c / a)
        roots = np.array([base, np.pi - base])
    else:
        acos = np.arccos(np.clip(c / (np.sign(b) * np.sqrt(norm2)), -1.0, 1.0))
        shift = -np.arctan(-a / b)
        roots = np.array([acos + shift, -acos + shift])
    return np.unique(roots)


def special_points(damping: AxisDamping):
    """Decay rates at which the omnidirectional density is non-differentiable.

    Seven values for generic rooms: the three axis coefficients, the three
    negated pairwise norms, and the negated full norm. The outermost two
    bound the support. Coinciding coefficients collapse duplicates, so the
    result can be shorter than seven. Sorted ascending.
    """
    kx, ky, kz = damping.kx, damping.ky, damping.kz
    points = np.array([
        kx,
        ky,
        kz,
        -np.hypot(kx, ky),
        -np.hypot(kx, kz),
        -np.hypot(ky, kz),
        -np.sqrt(kx * kx + ky * ky + kz * kz),
    ])
    return np.unique(points)


def _omni_density_from_damping(sigma, damping: AxisDamping, volume: float):
    """Vectorized closed-form evaluation of the omnidirectional density."""
    kx, ky, kz = damping.kx, damping.ky, damping.kz
    sigma = np.asarray(sigma, dtype=float)
    out = np.zeros(sigma.shape, dtype=float)

    k_norm2 = kx * kx + ky * ky + kz * kz
    sigma_min = -np.sqrt(k_norm2)
    sigma_max = max(kx, ky, kz)
    inside = (sigma > sigma_min) & (sigma < sigma_max)
    if not np.any(inside):
        return float(out) if out.ndim == 0 else out

    s = sigma[inside]
    # Quadratic A u^2 + B u + C in u = cos(phi) under the square root of the
    # slice density; its antiderivative is an arcsine.
    a_quad = -k_norm2
    b_quad = 2.0 * s * kz
    # discriminant = 4 (kx^2+ky^2)(k_norm2 - s^2) > 0 strictly inside the support
    delta = np.sqrt(np.maximum(b_quad * b_quad - 4.0 * a_quad * (kx * kx + ky * ky - s * s), 0.0))
    inv_sqrt_a = 1.0 / np.sqrt(k_norm2)

    def antiderivative(u):
        # Clamping the arcsine argument restricts the antiderivative to the
        # interval where the integrand is real; outside it is constant, which
        # makes differences over clipped limits equal the true integrals.
        arg = np.clip((2.0 * a_quad * u + b_quad) / delta, -1.0, 1.0)
        return -np.arcsin(arg) * inv_sqrt_a

    total = np.zeros(s.shape, dtype=float)
    for a_i, weight in ((-np.hypot(kx, ky), 2.0), (kx, -1.0), (ky, -1.0)):
        r_i = np.hypot(a_i, kz)
        cos_arg = -s / r_i
        has_roots = cos_arg <= 1.0
        half_width = np.arccos(np.clip(cos_arg, -1.0, 1.0))
        center = np.arctan(a_i / kz)
        lo = np.maximum(center - half_width, 0.0)
        hi = np.minimum(center + half_width, _HALF_PI)
        nonempty = has_roots & (lo < hi)
        contribution = antiderivative(np.cos(lo)) - antiderivative(np.cos(hi))
        total += weight * np.where(nonempty, contribution, 0.0)

    out[inside] = np.maximum(total, 0.0) * (8.0 / (4.0 * np.pi * volume))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class DampingDensity:
    """Closed-form omnidirectional damping density of one room.

    Callable on scalar or array decay rates. Integrates to 1/volume over its
    support. ``special_points`` lists the kink locations (support endpoints
    included) so quadrature routines can split integration intervals there.
    """

    damping: AxisDamping
    volume: float

    def __post_init__(self):
        if not self.volume > 0:
            raise ValueError(f"volume must be positive, got {self.volume}")

    @classmethod
    def of_room(cls, room: ShoeboxRoom) -> "DampingDensity":
        return cls(damping=axis_damping(room), volume=room.volume)

    @property
    def support(self):
        """(sigma_min, sigma_max), both negative."""
        k = self.damping
        return (
            -np.sqrt(k.kx**2 + k.ky**2 + k.kz**2),
            max(k.kx, k.ky, k.kz),
        )

    @property
    def special_points(self):
        return special_points(self.damping)

    def __call__(self, sigma):
        return _omni_density_from_damping(sigma, self.damping, self.volume)


def omni_density(sigma, room: ShoeboxRoom):
    """Omnidirectional damping density of ``room`` evaluated at ``sigma``."""
    return DampingDensity.of_room(room)(sigma)


def rt_density(density: DampingDensity, c: float, t60_grid):
    """Damping density transformed to a density over reverberation time.

    Applies the change of variables sigma = -DECAY_60DB / (T c) including
    the Jacobian, so the result integrates to 1/volume over T as well.
    """
    t60_grid = np.asarray(t60_grid, dtype=float)
    if np.any(t60_grid <= 0):
        raise ValueError("reverberation times must be positive")
    sigma = -DECAY_60DB / (t60_grid * c)
    jacobian = DECAY_60DB / (t60_grid**2 * c)
    return density(sigma) * jacobian


def rt_support(density: DampingDensity, c: float):
    """Reverberation-time interval the RT density lives on."""
    sigma_min, sigma_max = density.support
    return (-DECAY_60DB / (sigma_min * c), -DECAY_60DB / (sigma_max * c))
