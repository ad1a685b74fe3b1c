"""Room geometry, wall reflection data, and the per-axis damping coefficients.

Everything downstream (densities, decay curves, synthesis) is parameterized
by a ``ShoeboxRoom`` and the three damping coefficients derived from it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

# Reflection magnitudes are kept strictly inside (EPS, 1 - EPS) so that the
# logarithms in the damping coefficients stay finite.
BETA_EPS = 1e-12

_BETA_NAMES = ("beta_x0", "beta_x1", "beta_y0", "beta_y1", "beta_z0", "beta_z1")


def db_to_linear(db):
    """Convert a reflection magnitude from dB to linear scale (10^(db/20)).

    Positive dB values are rejected: a wall cannot reflect more energy than
    it receives.
    """
    db = np.asarray(db, dtype=float)
    if np.any(db > 0):
        raise ValueError(f"reflection magnitude must be <= 0 dB, got {db}")
    out = 10.0 ** (db / 20.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ShoeboxRoom:
    """Rectangular room with six absorptive walls.

    Attributes
    ----------
    lx, ly, lz : float
        Room dimensions in meters, strictly positive.
    beta : tuple of 6 floats
        Linear reflection magnitudes (x0, x1, y0, y1, z0, z1), each strictly
        inside (0, 1). The pressure sign convention is irrelevant here: all
        energy quantities use products of magnitudes.
    c : float
        Speed of sound in m/s.
    """

    lx: float
    ly: float
    lz: float
    beta: tuple
    c: float = 343.0

    def __post_init__(self):
        for name, value in (("lx", self.lx), ("ly", self.ly), ("lz", self.lz)):
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a positive length, got {value}")
        beta = tuple(float(abs(b)) for b in self.beta)
        if len(beta) != 6:
            raise ValueError(f"expected 6 reflection coefficients, got {len(beta)}")
        for name, b in zip(_BETA_NAMES, beta):
            if not (BETA_EPS < b < 1.0 - BETA_EPS):
                raise ValueError(f"{name} must lie strictly inside (0, 1), got {b}")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError(f"c must be positive, got {self.c}")
        object.__setattr__(self, "beta", beta)

    @property
    def dimensions(self):
        return np.array([self.lx, self.ly, self.lz])

    @property
    def volume(self):
        return self.lx * self.ly * self.lz

    @property
    def surface_area(self):
        """Total interior surface area in m^2."""
        return 2.0 * (self.ly * self.lz + self.lx * self.lz + self.lx * self.ly)

    @property
    def wall_areas(self):
        """Areas of the six walls, ordered like ``beta``."""
        sx = self.ly * self.lz
        sy = self.lx * self.lz
        sz = self.lx * self.ly
        return np.array([sx, sx, sy, sy, sz, sz])

    @property
    def absorption(self):
        """Energy absorption coefficients 1 - beta^2 of the six walls."""
        return 1.0 - np.asarray(self.beta) ** 2

    def permuted(self, order):
        """Room with axes reordered; each dimension keeps its coefficient pair."""
        dims = [self.lx, self.ly, self.lz]
        pairs = [self.beta[0:2], self.beta[2:4], self.beta[4:6]]
        beta = pairs[order[0]] + pairs[order[1]] + pairs[order[2]]
        return ShoeboxRoom(dims[order[0]], dims[order[1]], dims[order[2]], beta, self.c)


@dataclass(frozen=True)
class AxisDamping:
    """Per-axis damping coefficients in 1/m, each strictly negative."""

    kx: float
    ky: float
    kz: float

    def __post_init__(self):
        for name, k in zip(("kx", "ky", "kz"), (self.kx, self.ky, self.kz)):
            if not (k < 0 and math.isfinite(k)):
                raise ValueError(f"{name} must be negative and finite, got {k}")

    def as_array(self):
        return np.array([self.kx, self.ky, self.kz])


def axis_damping(room: ShoeboxRoom) -> AxisDamping:
    """Damping coefficients ln(b0*b1)/L for each axis of the room.

    All three are negative because reflection magnitudes lie in (0, 1);
    smaller coefficients (larger magnitude) mean faster decay along that
    axis.
    """
    b = room.beta
    return AxisDamping(
        kx=math.log(b[0] * b[1]) / room.lx,
        ky=math.log(b[2] * b[3]) / room.ly,
        kz=math.log(b[4] * b[5]) / room.lz,
    )


@dataclass(frozen=True)
class BandedRoom:
    """Room geometry with reflection coefficients given per octave band.

    ``bands`` is a sequence of (center_frequency_hz, six coefficients)
    entries with strictly increasing center frequencies.
    """

    room: ShoeboxRoom
    bands: tuple = field(default_factory=tuple)

    def __post_init__(self):
        bands = []
        last_fc = 0.0
        for fc, beta in self.bands:
            fc = float(fc)
            if fc <= last_fc:
                raise ValueError("band center frequencies must be strictly increasing")
            last_fc = fc
            # Reuse the room validation for each band's coefficient set.
            bands.append((fc, ShoeboxRoom(self.room.lx, self.room.ly, self.room.lz,
                                          tuple(beta), self.room.c).beta))
        if not bands:
            raise ValueError("a banded room needs at least one band")
        object.__setattr__(self, "bands", tuple(bands))

    def band_room(self, index: int) -> ShoeboxRoom:
        """ShoeboxRoom carrying the coefficients of one band."""
        _, beta = self.bands[index]
        return ShoeboxRoom(self.room.lx, self.room.ly, self.room.lz, beta, self.room.c)

    @property
    def center_frequencies(self):
        return np.array([fc for fc, _ in self.bands])


def room_from_dict(spec: dict) -> "ShoeboxRoom | BandedRoom":
    """Build a room from a JSON-style dict.

    Expected shape::

        {"L": [4, 5, 3], "beta_db": [-1, -1, -3, -2, -2, -5], "c": 343}

    Exactly one of ``beta`` (linear) or ``beta_db`` must be present. An
    optional ``bands`` list of ``{"fc": ..., "beta"/"beta_db": [...]}``
    entries yields a ``BandedRoom``.
    """
    if "L" not in spec:
        raise ValueError("room spec is missing required key 'L'")
    dims = spec["L"]
    if len(dims) != 3:
        raise ValueError(f"'L' must have 3 entries, got {len(dims)}")
    c = float(spec.get("c", 343.0))
    beta = _coefficients_from(spec, context="room")
    room = ShoeboxRoom(float(dims[0]), float(dims[1]), float(dims[2]), beta, c)

    if "bands" in spec:
        bands = []
        for i, band in enumerate(spec["bands"]):
            if "fc" not in band:
                raise ValueError(f"band {i} is missing required key 'fc'")
            bands.append((float(band["fc"]), _coefficients_from(band, context=f"band {i}")))
        return BandedRoom(room=room, bands=tuple(bands))
    return room


def _coefficients_from(spec: dict, context: str) -> tuple:
    has_lin = "beta" in spec
    has_db = "beta_db" in spec
    if has_lin == has_db:
        raise ValueError(f"{context} must contain exactly one of 'beta' or 'beta_db'")
    values = spec["beta"] if has_lin else spec["beta_db"]
    if len(values) != 6:
        raise ValueError(f"{context} needs 6 reflection coefficients, got {len(values)}")
    if has_db:
        return tuple(db_to_linear(float(v)) for v in values)
    return tuple(float(v) for v in values)


def room_from_json(path) -> "ShoeboxRoom | BandedRoom":
    """Load a room specification from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return room_from_dict(spec)
