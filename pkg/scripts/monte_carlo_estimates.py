"""Sampled weak-value estimates for every observable of a scenario at a weak coupling."""
import argparse

from ppsim.pps import weak_value
from ppsim.scenarios import get_scenario
from ppsim.weakmeas import PointerConfig, sample_pointer, weak_value_estimate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("scenario", nargs="?", default="mermin_nonet_a")
    ap.add_argument("--lam", type=float, default=0.05)
    ap.add_argument("--samples", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    s = get_scenario(args.scenario)
    print(f"{'observable':12s} {'weak value':>12s} {'estimate':>10s} {'stderr':>8s} {'z':>6s}")
    for name, obs in s.observables.items():
        cfg = PointerConfig(lam=args.lam)
        est = weak_value_estimate(sample_pointer(s.pps, obs, cfg, args.samples, args.seed), args.lam)
        wv = weak_value(s.pps, obs).real
        print(f"{name:12s} {wv:12.6f} {est.value:10.4f} {est.stderr:8.4f} {(est.value - wv) / est.stderr:6.2f}")


if __name__ == "__main__":
    main()
