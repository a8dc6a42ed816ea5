"""Pointer mean / lambda against the weak value as the coupling shrinks, then a strong-coupling check.

Writes a CSV of (lambda, mean/lambda, deviation) for one scenario observable.
"""
import argparse
import csv
import sys

from ppsim.pps import abl, weak_value
from ppsim.scenarios import get_scenario
from ppsim.weakmeas import MARGIN, PointerConfig, exact_pointer_distribution, pointer_mean


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scenario", default="three_box")
    ap.add_argument("--observable", default="P_C")
    ap.add_argument("--strong", type=float, default=50.0)
    args = ap.parse_args()
    s = get_scenario(args.scenario)
    obs = s.observables[args.observable]
    target = weak_value(s.pps, obs).real
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["lambda", "mean_over_lambda", "deviation"])
    prev = None
    for k in range(8):
        lam = 0.2 / 2**k
        m = pointer_mean(exact_pointer_distribution(s.pps, obs, PointerConfig(lam=lam))) / lam
        dev = abs(m - target)
        w.writerow([lam, f"{m:.10f}", f"{dev:.3e}"])
        if prev is not None:
            print(f"# halving ratio {prev / dev:.3f}", file=sys.stderr)
        prev = dev

    lam = args.strong
    reach = lam * max(abs(a) for a in obs.eigenvalues) + MARGIN
    dist = exact_pointer_distribution(s.pps, obs, PointerConfig(lam=lam, half_width=max(10.0, reach)))
    for a, p in abl(s.pps, obs).entries:
        mass = dist.mass_between(lam * a - 4, lam * a + 4)
        print(f"# strong lambda={lam:g}: eigenvalue {a:g} peak mass {mass:.9f}, ABL {p:.9f}", file=sys.stderr)


if __name__ == "__main__":
    main()
