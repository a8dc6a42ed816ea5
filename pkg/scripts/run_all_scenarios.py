"""Run every named scenario and print a pass/fail table; write JSON reports to a directory."""
import argparse
from pathlib import Path

from ppsim.scenarios import SCENARIOS, get_scenario, run_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/scenarios"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name in SCENARIOS:
        report = run_scenario(get_scenario(name))
        (args.out / f"{name}.json").write_text(report.to_json() + "\n")
        print(f"{name:16s} {'pass' if report.overall else 'FAIL'}  ({len(report.entries)} checks)")
        for e in report.failures:
            print(f"    {e.kind} {e.target}: expected {e.expected}, got {e.computed:.6g}")


if __name__ == "__main__":
    main()
