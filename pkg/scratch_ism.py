"""Scratch: ISM vs analytic EDC for the example room."""
import time
import numpy as np

from roomdecay.room import ShoeboxRoom, db_to_linear
from roomdecay.density import DampingDensity
from roomdecay.decay import analytic_edc, rt_from_edc, classic_rt, sigma_to_t60
from roomdecay.ism import IsmConfig, ism_rir, edc_from_energy, corner_to_centered, auto_order

room = ShoeboxRoom(4, 5, 3, tuple(db_to_linear(d) for d in [-1, -1, -3, -2, -2, -5]))
dens = DampingDensity.of_room(room)
print("classic:", {f: classic_rt(room, f) for f in ("sabine", "eyring", "fitzroy")})
print("T(sigma_max):", sigma_to_t60(dens.support[1], room.c),
      "T(sigma_min):", sigma_to_t60(dens.support[0], room.c))

fs = 48_000.0
duration = 1.0
rng = np.random.default_rng(7)
margin = 0.3

def draw_pos():
    L = room.dimensions
    while True:
        s = rng.uniform(margin, L - margin)
        r = rng.uniform(margin, L - margin)
        if np.linalg.norm(s - r) >= 0.5:
            return corner_to_centered(s, room), corner_to_centered(r, room)

t0 = time.time()
energies = []
for trial in range(3):
    s, r = draw_pos()
    cfg = IsmConfig(source=s, receiver=r, fs=fs, duration=duration)
    h = ism_rir(room, cfg)
    energies.append(h.samples**2)
print("3 ISM trials:", time.time() - t0, "s; auto order:", auto_order(room, duration))

edc_ism = edc_from_energy(np.mean(energies, axis=0), fs)
t_grid = np.arange(0, duration, 1e-3)
edc_an = analytic_edc(dens, t_grid, room.c, n_sigma=200)

# normalize both at 50 ms, compare where ISM curve (re 50ms) is above -60 dB
def norm_at(edc, t_ref):
    idx = int(round((t_ref - edc.t0) / edc.dt))
    return 10*np.log10(edc.values / edc.values[idx]), edc.times

db_i, t_i = norm_at(edc_ism, 0.05)
db_a, t_a = norm_at(edc_an, 0.05)
db_i_on_a = np.interp(t_a, t_i, db_i)
mask = (t_a >= 0.05) & (db_i_on_a >= -60)
dev = db_i_on_a[mask] - db_a[mask]
print(f"EDC agreement after 50 ms above -60 dB: max|dev|={np.abs(dev).max():.3f} dB")

# RT comparison
T_an = rt_from_edc(edc_an).t
T_ism = rt_from_edc(edc_from_energy(np.mean(energies, axis=0), fs)).t
print(f"T20 analytic={T_an:.4f} ISM={T_ism:.4f} rel={(T_an-T_ism)/T_ism:.4%}")

# grid refinement: 200 vs 400
edc_400 = analytic_edc(dens, t_grid, room.c, n_sigma=400)
d200 = edc_an.to_db(); d400 = edc_400.to_db()
m = d200 >= -80
print("EDC n_sigma 200 vs 400 max dB diff (above -80):", np.abs(d200[m]-d400[m]).max())

# p(0) vs 1/V
from roomdecay.decay import power_response
p = power_response(dens, t_grid, room.c, n_sigma=200)
print("p(0) =", p.values[0], "1/V =", 1/room.volume, "rel:", p.values[0]*room.volume - 1)
p2k = power_response(dens, t_grid, room.c, n_sigma=2000)
print("p(0) n=2000 rel:", p2k.values[0]*room.volume - 1)
