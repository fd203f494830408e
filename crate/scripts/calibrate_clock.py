#!/usr/bin/env python3
"""Calibrate the default circadian clock parameters.

The clock's original parameters are unavailable, so the defaults shipped in
`ClockParams::default()` come from this script:

1. `--search SEED` samples log-uniform parameter sets for the packed
   (concentration-scale) ODE and prints sustained, regular oscillators with a
   large amplitude. The shipped base set was found with `--search 7`.
2. Without `--search`, the base set below is rescaled:
   * concentrations by LAMBDA (all totals, Km, J scale up; bimolecular rates down),
   * time so that the period of total clock protein is exactly 1440 min,
   and the initial state is taken on the limit cycle at a CP-total trough.
   Enzyme totals are ENZYME_FRACTION of the substrate minimum along the cycle.

Units after rescaling: concentration (uM), minutes. Requires numpy and scipy.
"""

import argparse

import numpy as np
from scipy.integrate import solve_ivp
from scipy.signal import find_peaks

# found with --search 7 (candidate 1070); rates per hour, TF total 1
BASE = dict(T=1.0, kms=2.205, J=0.4407, kt=1.7269, kdf=1.0289, kdb=0.0399, kif=1.3623, kib=0.0007,
            vM=0.7033, KM=0.1269, vCP=0.8136, KCP=0.0543, vC=1.2678, KC=0.0749, b=0.003)
LAMBDA = 0.1
TARGET = 1440.0
ENZYME_FRACTION = 0.25
SIG = 4


def rhs(t, y, p):
    M, CP, CP2, C = y
    TF = max(p['T'] - C, 0.0)
    tx = p['kms'] * TF**2 / (p['J']**2 + TF**2)
    dim = p['kdf'] * CP**2 - p['kdb'] * CP2
    seq = p['kif'] * CP2 * TF - p['kib'] * C
    return [tx - p['vM'] * M / (p['KM'] + M) - p['b'] * M,
            p['kt'] * M - 2 * dim - p['vCP'] * CP / (p['KCP'] + CP) - p['b'] * CP,
            dim - seq - p['b'] * CP2,
            seq - p['vC'] * C / (p['KC'] + C) - p['b'] * C]


def integrate(p, y0, tend, dt):
    return solve_ivp(rhs, (0, tend), y0, args=(p,), method='LSODA', rtol=1e-9, atol=1e-12,
                     t_eval=np.arange(0, tend, dt))


def cycle(p, y0, tend, dt):
    """Period and post-transient samples of the limit cycle, or None."""
    sol = integrate(p, y0, tend, dt)
    if not sol.success:
        return None
    t, y = sol.t, sol.y
    cpt = y[1] + 2 * y[2] + 2 * y[3]
    half = t >= tend / 2
    amp = np.ptp(cpt[half])
    late = t >= 0.75 * tend
    mid = half & ~late
    if amp < 1e-6 or np.ptp(cpt[late]) < 0.98 * np.ptp(cpt[mid]):
        return None
    pk, _ = find_peaks(cpt[half], prominence=0.3 * amp)
    if len(pk) < 4:
        return None
    per = np.diff(t[half][pk])
    if per.std() > 0.02 * per.mean():
        return None
    return per.mean(), t[half], y[:, half], cpt[half]


def search(seed, n):
    rng = np.random.default_rng(seed)
    lu = lambda a, b: float(np.exp(rng.uniform(np.log(a), np.log(b))))
    for it in range(n):
        p = dict(T=1.0, kms=lu(0.1, 10), J=lu(0.01, 0.5), kt=lu(0.1, 10), kdf=lu(1, 1000), kdb=lu(0.01, 10),
                 kif=lu(1, 1000), kib=lu(1e-4, 0.1), vM=lu(0.05, 5), KM=lu(0.01, 1), vCP=lu(0.05, 5),
                 KCP=lu(0.01, 1), vC=lu(0.01, 2), KC=lu(0.01, 1), b=lu(0.001, 0.1))
        r = cycle(p, [0.1, 0.1, 0.1, 0.0], 2000, 0.1)
        if r is None:
            continue
        per, _, y, cpt = r
        if cpt.max() > 3 * cpt.min() and y[0].max() > 4 * y[0].min():
            print(it, round(per, 3), y.min(axis=1).round(4), {k: round(v, 4) for k, v in p.items()}, flush=True)


def sig(x):
    return float(f'{x:.{SIG}g}')


def calibrate():
    # concentration rescale
    p = dict(BASE)
    for k in ('T', 'kms', 'J', 'vM', 'KM', 'vCP', 'KCP', 'vC', 'KC'):
        p[k] *= LAMBDA
    for k in ('kdf', 'kif'):
        p[k] /= LAMBDA
    per_h, *_ = cycle(p, [0.01, 0.01, 0.01, 0.0], 3000, 0.05)
    # per hour -> per minute with period TARGET
    scale = per_h / TARGET
    for k in p:
        if k not in ('T', 'J', 'KM', 'KCP', 'KC'):
            p[k] *= scale
    p = {k: sig(v) for k, v in p.items()}
    per, t, y, cpt = cycle(p, [0.01, 0.01, 0.01, 0.0], 40 * TARGET, 0.5)
    trough = int(np.argmin(cpt[: int(per / 0.5) + 2]))
    y0 = y[:, trough]
    mins = y.min(axis=1)
    enzymes = {name: sig(ENZYME_FRACTION * mins[i]) for name, i in (('E_M', 0), ('E_CP', 1), ('E_C', 3))}
    print(f'period (rounded parameters): {per:.2f} min')
    print('parameters:', p)
    print('initial state (M, CP, CP2, C):', [sig(v) for v in y0])
    print('cycle minima (M, CP, CP2, C):', mins.round(6).tolist())
    print('cycle maxima (M, CP, CP2, C):', y.max(axis=1).round(6).tolist())
    print('free TF minimum:', round(float((p['T'] - y[3]).min()), 6))
    print('enzyme totals:', enzymes)


if __name__ == '__main__':
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument('--search', type=int, metavar='SEED')
    ap.add_argument('--samples', type=int, default=4000)
    args = ap.parse_args()
    if args.search is not None:
        search(args.search, args.samples)
    else:
        calibrate()
