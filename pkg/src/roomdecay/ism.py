"""Image-source reference simulator.

Ground truth for validating the analytic decay model: mirrors the source on
the rectangular reflection lattice and accumulates one attenuated impulse
per image.

Two tracks are produced per run. The pressure track assigns each image an
ideal impulse at the nearest sample; it is what gets written to WAV files
and stitched into hybrid responses. The energy track accumulates squared
amplitudes per sample instead. Energy-domain validation must use the energy
track: once arrivals become dense (thousands of images per sample in the
late field), squaring the binned pressure adds same-sign amplitudes
coherently and inflates the apparent energy by the bin occupancy, which
grows quadratically with distance. Summing squared amplitudes is the exact
Schroeder limit for ideal impulses at distinct arrival times.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .room import ShoeboxRoom

# Images are accumulated in fixed-size blocks so the block partition (and
# with it the floating-point summation order) never depends on memory.
_BLOCK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class ImpulseResponse:
    """Sampled pressure signal."""

    samples: np.ndarray
    fs: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a non-empty 1-D array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if not self.fs > 0:
            raise ValueError(f"fs must be positive, got {self.fs}")
        object.__setattr__(self, "samples", samples)

    @property
    def duration(self):
        return self.samples.size / self.fs

    @property
    def times(self):
        return np.arange(self.samples.size) / self.fs


@dataclass(frozen=True)
class IsmConfig:
    """Image-source run configuration.

    ``source`` and ``receiver`` are room-centered coordinates (the room
    spans [-L/2, L/2] on each axis). ``max_order`` bounds the reflection
    lattice index on every axis; ``None`` selects the smallest order that
    covers the requested duration.
    """

    source: tuple
    receiver: tuple
    fs: float
    duration: float
    max_order: int | None = None

    def __post_init__(self):
        source = tuple(float(v) for v in self.source)
        receiver = tuple(float(v) for v in self.receiver)
        if len(source) != 3 or len(receiver) != 3:
            raise ValueError("source and receiver must be 3-D positions")
        if not self.fs > 0:
            raise ValueError(f"fs must be positive, got {self.fs}")
        if not self.duration > 0:
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.max_order is not None and self.max_order < 0:
            raise ValueError(f"max_order must be nonnegative, got {self.max_order}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "receiver", receiver)

    @property
    def n_samples(self):
        return int(math.ceil(self.duration * self.fs))


@dataclass(frozen=True)
class IsmRun:
    """Pressure and incoherent-energy tracks of one image-source run."""

    rir: ImpulseResponse
    energy: np.ndarray

    @property
    def fs(self):
        return self.rir.fs


def auto_order(room: ShoeboxRoom, duration: float) -> int:
    """Smallest lattice order whose images cover the requested duration."""
    return int(math.ceil(duration * room.c / (2.0 * min(room.lx, room.ly, room.lz)))) + 1


def corner_to_centered(position, room: ShoeboxRoom):
    """Convert a corner-based position (room spans [0, L]) to centered coordinates."""
    half = room.dimensions / 2.0
    return tuple(np.asarray(position, dtype=float) - half)


def _axis_images(length, b0, b1, source, receiver, order, reach):
    """Image offsets (relative to the receiver) and amplitudes along one axis.

    ``source``/``receiver`` are corner-based coordinates in [0, length];
    the wall with coefficient ``b0`` sits at 0, the one with ``b1`` at
    ``length``. Lattice points that cannot arrive within ``reach`` meters
    are dropped up front.
    """
    m_cap = min(order, int(reach / (2.0 * length)) + 1)
    m = np.arange(-m_cap, m_cap + 1, dtype=float)
    offsets = []
    amplitudes = []
    for q in (0.0, 1.0):
        coords = (1.0 - 2.0 * q) * source + 2.0 * m * length
        offsets.append(coords - receiver)
        amplitudes.append(np.power(b0, np.abs(m - q)) * np.power(b1, np.abs(m)))
    return np.concatenate(offsets), np.concatenate(amplitudes)


def _validated_geometry(room: ShoeboxRoom, cfg: IsmConfig):
    half = room.dimensions / 2.0
    src = np.asarray(cfg.source, dtype=float)
    rcv = np.asarray(cfg.receiver, dtype=float)
    for name, pos in (("source", src), ("receiver", rcv)):
        if np.any(np.abs(pos) >= half):
            raise ValueError(f"{name} {tuple(pos)} is not strictly inside the room")
    if np.linalg.norm(src - rcv) < 1e-6:
        raise ValueError("source and receiver coincide; the direct path is singular")
    order = cfg.max_order if cfg.max_order is not None else auto_order(room, cfg.duration)
    coverage = 2.0 * order * min(room.lx, room.ly, room.lz)
    if coverage < cfg.duration * room.c:
        warnings.warn(
            f"max_order {order} covers only {coverage / room.c:.3f} s of the requested "
            f"{cfg.duration:.3f} s; the response tail is truncated",
            stacklevel=3,
        )
    return src + half, rcv + half, order


def _image_axes(room: ShoeboxRoom, cfg: IsmConfig):
    src_c, rcv_c, order = _validated_geometry(room, cfg)
    reach = cfg.n_samples / cfg.fs * room.c
    b = room.beta
    return (
        _axis_images(room.lx, b[0], b[1], src_c[0], rcv_c[0], order, reach),
        _axis_images(room.ly, b[2], b[3], src_c[1], rcv_c[1], order, reach),
        _axis_images(room.lz, b[4], b[5], src_c[2], rcv_c[2], order, reach),
    )


def ism_run(room: ShoeboxRoom, cfg: IsmConfig) -> IsmRun:
    """Run the image-source sum, returning pressure and energy tracks.

    Each image at distance d contributes its product of wall reflection
    magnitudes divided by 4*pi*d at the sample nearest to d/c. The lattice
    is separable per axis, so the triple sum is evaluated as a broadcast
    product of per-axis image lists.
    """
    (dx, ax), (dy, ay), (dz, az) = _image_axes(room, cfg)
    n_samples = cfg.n_samples
    pressure = np.zeros(n_samples)
    energy = np.zeros(n_samples)
    samples_per_meter = cfg.fs / room.c
    block = max(1, _BLOCK_ELEMENTS // max(1, dy.size * dz.size))
    dy2 = (dy * dy)[None, :, None]
    dz2 = (dz * dz)[None, None, :]
    ayz = ay[None, :, None] * az[None, None, :]
    for start in range(0, dx.size, block):
        stop = min(start + block, dx.size)
        d = np.sqrt((dx[start:stop] ** 2)[:, None, None] + dy2 + dz2)
        idx = np.rint(d * samples_per_meter).astype(np.int64)
        keep = idx < n_samples
        idx = idx[keep]
        amplitudes = (ax[start:stop][:, None, None] * ayz)[keep] / (4.0 * np.pi * d[keep])
        pressure += np.bincount(idx, weights=amplitudes, minlength=n_samples)
        energy += np.bincount(idx, weights=amplitudes * amplitudes, minlength=n_samples)
    return IsmRun(rir=ImpulseResponse(samples=pressure, fs=cfg.fs), energy=energy)


def ism_rir(room: ShoeboxRoom, cfg: IsmConfig) -> ImpulseResponse:
    """Pressure impulse response from the image-source lattice."""
    return ism_run(room, cfg).rir


def image_distances(room: ShoeboxRoom, cfg: IsmConfig):
    """Distances of all lattice images reachable within the configured duration.

    Intended for lattice statistics (image counts per spherical shell); the
    array holds one entry per (m, p) combination.
    """
    (dx, _), (dy, _), (dz, _) = _image_axes(room, cfg)
    d2 = dx[:, None, None] ** 2 + (dy * dy)[None, :, None] + (dz * dz)[None, None, :]
    return np.sqrt(d2).ravel()


def short_time_power(rir: ImpulseResponse, window: float = 0.021):
    """Squared pressure smoothed by a moving average of ``window`` seconds."""
    from .decay import DecayCurve

    values = _moving_average(rir.samples * rir.samples, window, rir.fs)
    return DecayCurve(values=values, dt=1.0 / rir.fs, kind="power_response")


def power_from_energy(energy, fs: float, window: float = 0.021):
    """Power response from a per-sample energy track (energy per bin times fs)."""
    from .decay import DecayCurve

    values = _moving_average(np.asarray(energy, dtype=float) * fs, window, fs)
    return DecayCurve(values=values, dt=1.0 / fs, kind="power_response")


def _moving_average(values, window, fs):
    if window <= 0:
        raise ValueError(f"window must be positive, got {window}")
    n = max(1, int(round(window * fs)))
    return np.convolve(values, np.ones(n) / n, mode="same")


def edc_from_rir(rir: ImpulseResponse):
    """Schroeder backward integration of the squared pressure signal.

    Use this for stochastic or hybrid responses. For raw image-source runs
    prefer ``ism_edc``, which integrates the unbiased energy track.
    """
    return edc_from_energy(rir.samples * rir.samples, rir.fs)


def ism_edc(run: IsmRun):
    """Reference EDC of an image-source run (incoherent energy track)."""
    return edc_from_energy(run.energy, run.fs)


def edc_from_energy(energy, fs: float):
    """EDC from per-sample energy values (e.g. trial-averaged tracks)."""
    from .decay import DecayCurve

    energy = np.asarray(energy, dtype=float)
    acc = np.cumsum(energy[::-1])[::-1]
    return DecayCurve(values=acc, dt=1.0 / fs, kind="edc")
