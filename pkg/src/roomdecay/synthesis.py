"""Stochastic late-reverberation synthesis.

A seeded Gaussian noise signal is shaped sample-by-sample with the square
root of the analytic power response; no post-hoc level matching is needed
because every scale factor is already part of the density. Frequency
dependence comes from shaping one shared noise realization per octave band
and summing the bandpassed signals. Hybrid responses stitch an image-source
early part to the stochastic tail with an equal-power crossfade.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import butter, sosfilt

from .decay import classic_rt, power_response
from .density import DampingDensity
from .ism import ImpulseResponse, IsmConfig, ism_rir
from .room import BETA_EPS, BandedRoom, ShoeboxRoom


@dataclass(frozen=True)
class SynthesisConfig:
    """Noise-shaping run configuration.

    ``transition_time`` only matters for hybrid synthesis: it places the
    stitch point between the image-source early part and the stochastic
    tail, faded over ``crossfade`` seconds.
    """

    fs: float
    duration: float
    seed: int
    transition_time: float = 0.0
    crossfade: float = 0.005
    n_sigma: int = 200

    def __post_init__(self):
        if not self.fs > 0:
            raise ValueError(f"fs must be positive, got {self.fs}")
        if not self.duration > 0:
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.transition_time >= self.duration:
            # Allowed: the hybrid then degenerates to a pure image-source run.
            pass
        if self.transition_time < 0:
            raise ValueError(f"transition_time must be nonnegative, got {self.transition_time}")
        if self.crossfade < 0:
            raise ValueError(f"crossfade must be nonnegative, got {self.crossfade}")

    @property
    def n_samples(self):
        return int(math.ceil(self.duration * self.fs))

    @property
    def times(self):
        return np.arange(self.n_samples) / self.fs


def stochastic_rir(room: ShoeboxRoom, cfg: SynthesisConfig) -> ImpulseResponse:
    """Shaped-noise impulse response: unit-variance noise times sqrt(p(ct)).

    The expected per-sample energy equals the analytic power response, so
    decay curves of the synthesized signal match the analytic EDC up to
    noise fluctuation. Identical config and seed give bit-identical output.
    """
    envelope = _envelope(DampingDensity.of_room(room), cfg, room.c)
    noise = np.random.default_rng(cfg.seed).standard_normal(cfg.n_samples)
    return ImpulseResponse(samples=noise * envelope, fs=cfg.fs)


def banded_rir(banded: BandedRoom, cfg: SynthesisConfig) -> ImpulseResponse:
    """Frequency-dependent shaped noise from per-octave-band coefficients.

    One shared noise realization is shaped by each band's envelope, passed
    through the band's octave filter, and the bandpassed signals are summed.
    """
    for fc in banded.center_frequencies:
        _validate_band(fc, cfg.fs)
    noise = np.random.default_rng(cfg.seed).standard_normal(cfg.n_samples)
    total = np.zeros(cfg.n_samples)
    for index in range(len(banded.bands)):
        fc, _ = banded.bands[index]
        density = DampingDensity.of_room(banded.band_room(index))
        shaped = noise * _envelope(density, cfg, banded.room.c)
        total += sosfilt(octave_filter(fc, cfg.fs), shaped)
    return ImpulseResponse(samples=total, fs=cfg.fs)


def rt_to_reflection(target_t60: float, room: ShoeboxRoom):
    """Uniform reflection coefficients realizing a target reverberation time.

    Inverts Eyring's formula for a single absorption coefficient shared by
    all walls and converts it back to a reflection magnitude, clipped to the
    valid open interval for extreme targets.
    """
    if target_t60 <= 0:
        raise ValueError(f"target reverberation time must be positive, got {target_t60}")
    exponent = 0.161 * room.volume / (room.surface_area * target_t60)
    beta = math.exp(-exponent / 2.0)
    beta = min(max(beta, 2.0 * BETA_EPS), 1.0 - 2.0 * BETA_EPS)
    return (beta,) * 6


def banded_room_for_targets(room: ShoeboxRoom, center_frequencies, targets) -> BandedRoom:
    """Banded room whose per-band coefficients aim at the given decay times."""
    if len(center_frequencies) != len(targets):
        raise ValueError("need one target reverberation time per band")
    bands = tuple(
        (fc, rt_to_reflection(t60, room)) for fc, t60 in zip(center_frequencies, targets)
    )
    return BandedRoom(room=room, bands=bands)


def hybrid_rir(room: ShoeboxRoom, ism_cfg: IsmConfig, synth_cfg: SynthesisConfig) -> ImpulseResponse:
    """Image-source early part stitched to a stochastic tail.

    The two components are weighted by an equal-power linear crossfade of
    ``synth_cfg.crossfade`` seconds centered on the transition time. A
    transition at or before zero yields the pure stochastic response; at or
    beyond the synthesis duration, the pure image-source response.
    """
    if ism_cfg.fs != synth_cfg.fs:
        raise ValueError(
            f"sample rates differ: ism {ism_cfg.fs} vs synthesis {synth_cfg.fs}")
    n = synth_cfg.n_samples
    t_tr = synth_cfg.transition_time

    if t_tr >= synth_cfg.duration:
        return _fit_length(ism_rir(room, ism_cfg), n)
    if t_tr <= 0:
        return stochastic_rir(room, synth_cfg)

    needed = min(synth_cfg.duration, t_tr + 0.5 * synth_cfg.crossfade)
    if ism_cfg.duration < needed:
        raise ValueError(
            f"image-source duration {ism_cfg.duration} s does not reach the "
            f"transition at {needed:.3f} s")

    early = _fit_length(ism_rir(room, ism_cfg), n)
    late = stochastic_rir(room, synth_cfg)
    if synth_cfg.crossfade == 0:
        late_power = (synth_cfg.times >= t_tr).astype(float)
    else:
        late_power = np.clip((synth_cfg.times - t_tr) / synth_cfg.crossfade + 0.5, 0.0, 1.0)
    samples = early.samples * np.sqrt(1.0 - late_power) + late.samples * np.sqrt(late_power)
    return ImpulseResponse(samples=samples, fs=synth_cfg.fs)


def octave_filter(fc: float, fs: float):
    """Sixth-order octave bandpass (second-order sections) centered at ``fc``.

    Band edges sit at fc/sqrt(2) and fc*sqrt(2).
    """
    _validate_band(fc, fs)
    return butter(3, [fc / np.sqrt(2.0), fc * np.sqrt(2.0)], btype="bandpass",
                  fs=fs, output="sos")


def octave_band_signal(rir: ImpulseResponse, fc: float) -> ImpulseResponse:
    """Impulse response filtered to one octave band."""
    return ImpulseResponse(samples=sosfilt(octave_filter(fc, rir.fs), rir.samples),
                           fs=rir.fs)


def eyring_decay_time(room: ShoeboxRoom) -> float:
    """Convenience alias used when sizing synthesis durations."""
    return classic_rt(room, "eyring")


def _envelope(density: DampingDensity, cfg: SynthesisConfig, c: float):
    response = power_response(density, cfg.times, c, cfg.n_sigma)
    return np.sqrt(response.values)


def _validate_band(fc: float, fs: float):
    if not 0 < fc < fs / 2:
        raise ValueError(f"band center {fc} Hz outside (0, fs/2)")
    if fc * np.sqrt(2.0) >= fs / 2:
        raise ValueError(
            f"octave band at {fc} Hz exceeds the Nyquist frequency at fs={fs}")


def _fit_length(rir: ImpulseResponse, n: int) -> ImpulseResponse:
    samples = rir.samples
    if samples.size >= n:
        return ImpulseResponse(samples=samples[:n].copy(), fs=rir.fs)
    padded = np.zeros(n)
    padded[: samples.size] = samples
    return ImpulseResponse(samples=padded, fs=rir.fs)
