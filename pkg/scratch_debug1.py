"""Scratch: where do ISM and analytic EDCs diverge for sweep rooms?"""
import numpy as np

from roomdecay.room import ShoeboxRoom, db_to_linear, axis_damping
from roomdecay.density import DampingDensity, directional_decay_rate
from roomdecay.decay import analytic_edc
from roomdecay.ism import IsmConfig, ism_rir, edc_from_energy, corner_to_centered

base_db = np.array([-0.161, -0.180, -0.025, -0.181, -0.125, -0.018])
factor = 5
beta = tuple(db_to_linear(base_db * factor))
room = ShoeboxRoom(4, 5, 3, beta)
dens = DampingDensity.of_room(room)
k = axis_damping(room)
print("K:", k.kx, k.ky, k.kz, "support:", dens.support)

fs = 8000.0
dur = 1.4
rng = np.random.default_rng(3)
L = room.dimensions
en = []
for _ in range(3):
    while True:
        s = rng.uniform(0.3, L - 0.3)
        r = rng.uniform(0.3, L - 0.3)
        if np.linalg.norm(s - r) >= 0.5:
            break
    h = ism_rir(room, IsmConfig(source=corner_to_centered(s, room),
                                receiver=corner_to_centered(r, room),
                                fs=fs, duration=dur))
    en.append(h.samples ** 2)
edc_i = edc_from_energy(np.mean(en, axis=0), fs)
grid = np.arange(0.0, dur, 1e-3)
edc_a = analytic_edc(dens, grid, room.c, n_sigma=400)

def level_at(edc, t):
    idx = int(round((t - edc.t0) / edc.dt))
    return 10 * np.log10(edc.values[idx] / edc.values[int(round((0.05 - edc.t0) / edc.dt))])

print(" t     ISM(dB)   analytic(dB)")
for t in (0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3):
    print(f"{t:5.2f} {level_at(edc_i, t):9.2f} {level_at(edc_a, t):9.2f}")

# model-free lattice check: exact shell energy profile vs continuum model
# exact: sum over images of (prod beta^exp)^2 / (4 pi d)^2 binned over distance
# model: (shell count 4 pi rho^2/V) * <(prod beta^W)> / (4 pi rho)^2
#      = (1/4 pi V) * <exp(M rho)>  per unit distance
src = np.array([1.2, 2.1, 0.9])   # corner coords
rcv = np.array([2.9, 3.7, 2.2])
N = 140
m = np.arange(-N, N + 1, dtype=float)
def axis(length, b0, b1, S, R):
    offs, amps = [], []
    for q in (0.0, 1.0):
        offs.append((1 - 2 * q) * S + 2 * m * length - R)
        amps.append(b0 ** np.abs(m - q) * b1 ** np.abs(m))
    return np.concatenate(offs), np.concatenate(amps)
dx, ax_ = axis(room.lx, *beta[0:2], src[0], rcv[0])
dy, ay_ = axis(room.ly, *beta[2:4], src[1], rcv[1])
dz, az_ = axis(room.lz, *beta[4:6], src[2], rcv[2])
d = np.sqrt(dx[:, None, None] ** 2 + dy[None, :, None] ** 2 + dz[None, None, :] ** 2).ravel()
e = ((ax_[:, None, None] * ay_[None, :, None] * az_[None, None, :]).ravel() ** 2
     / (4 * np.pi * d) ** 2)
rho_max = 2 * N * min(room.lx, room.ly, room.lz) * 0.9
edges = np.arange(0.0, rho_max, 4.0)
exact, _ = np.histogram(d, bins=edges, weights=e)
exact /= np.diff(edges)

# continuum: (1/4piV) <exp(M rho)> over sphere, MC with many dirs
rngm = np.random.default_rng(0)
cosphi = rngm.uniform(-1, 1, 200000)
theta = rngm.uniform(0, 2 * np.pi, 200000)
M = directional_decay_rate(theta, np.arccos(cosphi), k)
centers = 0.5 * (edges[:-1] + edges[1:])
model = np.array([np.mean(np.exp(M * r)) for r in centers]) / (4 * np.pi * room.volume)

sel = centers > 50
ratio_db = 10 * np.log10(exact[sel] / model[sel])
print("\nrho    exact/model (dB)  [normalized at first shown shell]")
ref = ratio_db[0]
for i in range(0, sel.sum(), 12):
    print(f"{centers[sel][i]:6.0f} {ratio_db[i] - ref:8.3f}")
