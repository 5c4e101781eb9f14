"""Time the compiled and NumPy kernels on realistic batches.

    python3 benchmarks/bench_kernels.py [--rows 1000] [--repeat 3]

Profiles come from the 25 Mbps noise-limited cell (roads at 5 km/km^2),
which is what a dimensioning run feeds the quadrature kernel.
"""
import argparse
import timeit
from pathlib import Path

import numpy as np

from plpdim import _kernels_py, load_scenario
from plpdim.congestion import RealizationSet, panels_for

try:
    from plpdim import _kernels as _compiled
except ImportError:
    _compiled = None

SCENARIO = Path(__file__).resolve().parent.parent / "scenarios" / "fig2_tau25.yaml"


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=1000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    sc = load_scenario(SCENARIO, n_realizations=args.rows).scenario
    rs = RealizationSet(sc)
    mu = np.ascontiguousarray(rs.profiles(sc.user_intensity))
    ms = np.arange(0, 161, 8, dtype=np.int64)
    panels = panels_for(mu.max(axis=0), int(ms.max()), sc.quad_tol)
    rng = np.random.default_rng(0)
    r = rng.uniform(0, 0.6, 20)
    radii = np.sort(rng.uniform(0, 0.6, 21))

    cases = {
        f"ccdf_trapezoid ({mu.shape[0]}x{mu.shape[1]} profiles, {ms.size} M, {panels} panels)":
            lambda k: k.ccdf_trapezoid(mu, ms, panels),
        "chord_mass (20 lines, 21 radii) x 1000":
            lambda k: [k.chord_mass(r, radii) for _ in range(1000)],
    }
    print(f"{'kernel':<70} {'numpy s':>10} {'cython s':>10} {'speedup':>8}")
    for name, call in cases.items():
        t_py = best(lambda: call(_kernels_py), args.repeat)
        if _compiled is None:
            print(f"{name:<70} {t_py:>10.4f} {'n/a':>10} {'n/a':>8}")
            continue
        t_c = best(lambda: call(_compiled), args.repeat)
        print(f"{name:<70} {t_py:>10.4f} {t_c:>10.4f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
