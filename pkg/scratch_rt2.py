"""Scratch: redo criterion-5/6 checks with the energy track."""
import time
import numpy as np

from roomdecay.room import ShoeboxRoom, db_to_linear
from roomdecay.density import DampingDensity
from roomdecay.decay import DecayCurve, analytic_edc, rt_from_edc, sigma_to_t60
from roomdecay.ism import IsmConfig, ism_run, edc_from_energy, corner_to_centered

def anchored_rt(edc: DecayCurve, t_anchor: float, upper=-5.0, lower=-25.0):
    idx = int(round((t_anchor - edc.t0) / edc.dt))
    tail = DecayCurve(values=edc.values[idx:], dt=edc.dt, t0=edc.times[idx], kind="edc")
    return rt_from_edc(tail, upper, lower)

def draw_pair(rng, room):
    L = room.dimensions
    while True:
        s = rng.uniform(0.3, L - 0.3)
        r = rng.uniform(0.3, L - 0.3)
        if np.linalg.norm(s - r) >= 0.5:
            return corner_to_centered(s, room), corner_to_centered(r, room)

# --- criterion 5: example room, fs 48k, duration 1 s, 3 trials
room = ShoeboxRoom(4, 5, 3, tuple(db_to_linear(d) for d in [-1, -1, -3, -2, -2, -5]))
dens = DampingDensity.of_room(room)
rng = np.random.default_rng(7)
t0 = time.time()
tracks = []
for _ in range(3):
    s, r = draw_pair(rng, room)
    tracks.append(ism_run(room, IsmConfig(source=s, receiver=r, fs=48000.0, duration=1.0)).energy)
edc_i = edc_from_energy(np.mean(tracks, axis=0), 48000.0)
print("3 trials at 48k:", round(time.time() - t0, 2), "s")

grid = np.arange(0.0, 1.0, 1e-3)
edc_a = analytic_edc(dens, grid, room.c, n_sigma=200)

def norm_at(edc, t_ref):
    idx = int(round((t_ref - edc.t0) / edc.dt))
    return 10 * np.log10(edc.values / edc.values[idx]), edc.times

db_i, t_i = norm_at(edc_i, 0.05)
db_a, t_a = norm_at(edc_a, 0.05)
db_i_on_a = np.interp(t_a, t_i, db_i)
mask = (t_a >= 0.05) & (db_i_on_a >= -60)
print("criterion 5 max |dev| (>=50ms, above -60 dB):",
      np.abs(db_i_on_a[mask] - db_a[mask]).max(), "dB")

Ta = anchored_rt(edc_a, 0.05).t
Ti = anchored_rt(edc_i, 0.05).t
print(f"example room anchored T20: an={Ta:.4f} ism={Ti:.4f} rel={(Ta-Ti)/Ti:+.3%}")

# --- criterion 6 sweep
base_db = np.array([-0.161, -0.180, -0.025, -0.181, -0.125, -0.018])
rng = np.random.default_rng(20)
t0 = time.time()
errs = []
for factor in range(1, 22, 2):
    rm = ShoeboxRoom(4, 5, 3, tuple(db_to_linear(base_db * factor)))
    d = DampingDensity.of_room(rm)
    dur = max(0.25, 0.8 * sigma_to_t60(d.support[1], rm.c))
    tracks = []
    for _ in range(3):
        s, r = draw_pair(rng, rm)
        tracks.append(ism_run(rm, IsmConfig(source=s, receiver=r, fs=8000.0,
                                            duration=dur)).energy)
    edc_is = edc_from_energy(np.mean(tracks, axis=0), 8000.0)
    edc_an = analytic_edc(d, np.arange(0.0, dur, 1e-3), rm.c, n_sigma=200)
    Ta = anchored_rt(edc_an, 0.05).t
    Ti = anchored_rt(edc_is, 0.05).t
    rel = (Ta - Ti) / Ti
    errs.append(abs(rel))
    print(f"factor {factor:2d}: dur={dur:.2f}s T_an={Ta:.3f} T_ism={Ti:.3f} rel={rel:+.3%}")
errs = np.array(errs)
print(f"sweep: median={np.median(errs):.3%} max={errs.max():.3%} elapsed={time.time()-t0:.1f}s")
