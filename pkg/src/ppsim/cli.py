"""Command line entry point.

Exit codes: 0 success, 1 a scenario check failed, 2 usage or parse error,
3 numerical configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import contextuality as ctx
from . import weakmeas as wm
from .scenarios import SCENARIOS, get_scenario, run_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_SEED = 0


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_list(args) -> int:
    for name in SCENARIOS:
        s = get_scenario(name)
        print(f"{name}: {', '.join(s.observables)}")
    print("tables: " + ", ".join(ctx.BUILTIN_TABLES))
    return EXIT_OK


def cmd_scenario(args) -> int:
    if args.name not in SCENARIOS:
        print(f"unknown scenario {args.name!r}; known: {', '.join(SCENARIOS)}", file=sys.stderr)
        return EXIT_USAGE
    report = run_scenario(get_scenario(args.name))
    _emit(report.to_json() + "\n" if args.format == "json" else report.to_csv(), args.output)
    for e in report.failures:
        print(f"FAIL {e.kind} {e.target}: expected {e.expected}, got {e.computed}", file=sys.stderr)
    return EXIT_OK if report.overall else EXIT_FAIL


def _pointer_config(args, eigenvalues) -> wm.PointerConfig:
    half_width = args.grid_halfwidth
    if half_width is None:
        # widen the default window just enough to hold every shifted peak
        reach = abs(args.lam) * max(abs(a) for a in eigenvalues) + wm.MARGIN
        half_width = max(10.0, reach)
    return wm.PointerConfig(lam=args.lam, half_width=half_width, points=args.grid_points)


def cmd_weakmeas(args) -> int:
    if args.scenario not in SCENARIOS:
        print(f"unknown scenario {args.scenario!r}", file=sys.stderr)
        return EXIT_USAGE
    s = get_scenario(args.scenario)
    if args.observable not in s.observables:
        print(
            f"{args.observable!r} is not an observable of {args.scenario}; "
            f"choose from {', '.join(s.observables)}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    if args.samples < 0:
        print("--samples must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    obs = s.observables[args.observable]
    try:
        if args.samples > 0 and args.lam == 0:
            raise wm.GridError("--lambda must be nonzero when sampling")
        cfg = _pointer_config(args, obs.eigenvalues)
        dist = wm.exact_pointer_distribution(s.pps, obs, cfg)
    except wm.GridError as e:
        print(f"numerical configuration error: {e}", file=sys.stderr)
        return EXIT_NUMERIC

    summary = {
        "scenario": args.scenario,
        "observable": args.observable,
        "lambda": args.lam,
        "grid_points": cfg.points,
        "grid_halfwidth": cfg.half_width,
        "post_selection_probability": dist.post_selection_probability,
        "exact_mean": wm.pointer_mean(dist),
    }
    exact_csv = wm.to_csv_text(wm.write_exact_csv, dist)
    sampled_csv = None
    if args.samples > 0:
        samples = wm.sample_pointer(s.pps, obs, cfg, args.samples, args.seed)
        est = wm.weak_value_estimate(samples, args.lam, cfg.spread)
        summary.update(samples=est.n, seed=args.seed, estimate=est.value, stderr=est.stderr)
        sampled_csv = wm.to_csv_text(wm.write_sampled_csv, samples, cfg)

    if args.output:
        out = Path(args.output)
        out.write_text(exact_csv, encoding="utf-8", newline="\n")
        if sampled_csv is not None:
            sampled_path = out.with_name(out.stem + ".sampled" + out.suffix)
            sampled_path.write_text(sampled_csv, encoding="utf-8", newline="\n")
            summary["sampled_csv"] = str(sampled_path)
        summary["exact_csv"] = str(out)
        print(json.dumps(summary, indent=2))
    else:
        sys.stdout.write(exact_csv)
        print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


def cmd_hvt(args) -> int:
    try:
        table = ctx.load_table(args.table)
    except ctx.TableParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ctx.TableError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = ctx.verify_table(table)
    except ctx.TableError as e:
        print(f"table check failed: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    for k, (c, p) in enumerate(zip(report.commutator_residuals, report.product_residuals)):
        print(f"context {table.context_label(k)}  commutator {c:.3e}  product {p:.3e}")
    found = ctx.search_assignments(table)
    total = ctx.count_assignments(table)
    cert = ctx.parity_obstruction(table)
    line = f"{len(found)} assignments / {total}"
    if cert is not None:
        line += f"; certificate: {len(cert)} contexts ({' '.join(map(str, cert))})"
    print(line)
    for a in found[:16]:
        print("  " + " ".join(f"{k}={v:+d}" for k, v in a.items()))
    if len(found) > 16:
        print(f"  ... {len(found) - 16} more")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ppsim", description="Pre/post-selected quantum system simulator")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list scenarios, their observables and built-in tables")

    sc = sub.add_parser("scenario", help="check a named scenario against its expected values")
    sc.add_argument("name")
    sc.add_argument("--format", choices=("json", "csv"), default="json")
    sc.add_argument("--output")

    w = sub.add_parser("weakmeas", help="pointer statistics for one observable of a scenario")
    w.add_argument("scenario")
    w.add_argument("observable")
    w.add_argument("--lambda", dest="lam", type=float, default=0.1)
    w.add_argument("--samples", type=int, default=0)
    w.add_argument("--seed", type=int, default=DEFAULT_SEED)
    w.add_argument("--grid-points", type=int, default=4096)
    w.add_argument("--grid-halfwidth", type=float, default=None)
    w.add_argument("--format", choices=("csv",), default="csv")
    w.add_argument("--output")

    h = sub.add_parser("hvt", help="noncontextual assignment search over a context table")
    h.add_argument("table", help="table file, or one of: " + ", ".join(ctx.BUILTIN_TABLES))
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"list": cmd_list, "scenario": cmd_scenario, "weakmeas": cmd_weakmeas, "hvt": cmd_hvt}
    return handler[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
