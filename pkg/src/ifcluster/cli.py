"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict

from . import bench
from .assign import assign_users, prune_bs
from .dph import dph_cluster
from .dynamic import DEFAULT_THRESHOLD, DynamicClusterer, event_to_dict
from .errors import ClusteringError, ParameterError, StructureError
from .generator import GeneratorConfig, generate
from .io import DataError, load_instance, load_system, read_events, save_instance, write_json
from .metrics import tinf
from .model import validate_if_cluster
from .oracle import DEFAULT_LIMIT, InstanceTooLargeError, brute_force_optimal
from .spectral import EMBEDDINGS, spectral_cluster

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def int_list(text: str) -> tuple[int, ...]:
    """Parse ``"1-20"``, ``"5,10,20"`` or a mix like ``"1-4,20"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if "-" in part:
                lo, hi = part.split("-")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return tuple(out)


def _system_summary(system, W) -> dict:
    report = validate_if_cluster(system, W)
    d = {"system": system.to_dict(), "valid": report.valid}
    if not report.valid:
        d["violations"] = report.to_dict()
    try:
        d["tinf"] = tinf(system, W).total
    except ClusteringError as e:
        d["tinf"] = None
        d["tinf_error"] = str(e)
    return d


def cmd_gen(args) -> int:
    cfg = GeneratorConfig(args.b, args.u, args.side, args.dist_min, args.dist_max, args.alpha, args.seed)
    inst = generate(cfg)
    save_instance(inst, args.output, args.matrix_only)
    return EXIT_OK


def cmd_cluster(args) -> int:
    W = load_instance(args.instance).weights
    out: dict = {"algorithm": args.alg, "M": args.m}
    if args.alg == "dp":
        trace = dph_cluster(W, args.m)
        if args.emit_trace:
            write_json(trace.to_dict(), args.emit_trace)
        result = assign_users(trace.partition, W)
        system = result.system
        if result.isolated_users:
            out["isolated_users"] = list(result.isolated_users)
    else:
        if args.emit_trace:
            raise UsageError("--emit-trace is only available for --alg dp")
        outcome = spectral_cluster(W, args.m, seed=args.seed, embedding=args.embedding)
        if outcome.failed:
            out.update(failure=outcome.failure, detail=outcome.detail)
            write_json(out, args.output)
            return EXIT_OK
        system = outcome.system
    if args.prune:
        if validate_if_cluster(system, W).valid:
            pruned = prune_bs(system, W)
            system = pruned.system
            out["switched_off"] = list(pruned.switched_off)
        else:
            out["prune_skipped"] = "system is not IF-valid"
    out.update(_system_summary(system, W))
    write_json(out, args.output)
    return EXIT_OK


def cmd_eval(args) -> int:
    W = load_instance(args.instance).weights
    system = load_system(args.system)
    try:
        system.check_shape(W.b, W.u)
    except StructureError as e:
        raise DataError(f"{args.system}: {e}") from None
    out = tinf(system, W).to_dict()
    out["validation"] = validate_if_cluster(system, W).to_dict()
    write_json(out, args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    W = load_instance(args.instance).weights
    try:
        result = brute_force_optimal(W, args.m, limit=args.limit)
    except InstanceTooLargeError as e:
        write_json({"refused": str(e), "search_space": e.count, "limit": e.limit}, args.output)
        return EXIT_DATA
    write_json(result.to_dict(), args.output)
    return EXIT_OK


REPLAY_COLUMNS = ("step", "op", "action", "tinf", "tinf_before", "baseline", "u", "moved")


def cmd_replay(args) -> int:
    W = load_instance(args.instance).weights
    state = DynamicClusterer(W, args.m, args.threshold)
    f = sys.stdout if args.output in (None, "-") else open(args.output, "w", newline="")
    try:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPLAY_COLUMNS)
        writer.writerow([0, "init", "global-recluster", repr(state.tinf()), "", repr(state.baseline), state.u, ""])
        for step, ev in enumerate(read_events(args.events), 1):
            try:
                res = state.apply(ev)
            except StructureError as e:
                raise DataError(f"{args.events}: event {step}: {e}") from None
            for msg in res.warnings:
                print(f"step {step}: {msg}", file=sys.stderr)
            writer.writerow([
                step, event_to_dict(ev)["op"], res.action, repr(res.tinf), repr(res.tinf_before),
                repr(res.baseline), state.u, ";".join(map(str, res.moved)),
            ])
    finally:
        if f is not sys.stdout:
            f.close()
    return EXIT_OK


def cmd_bench(args) -> int:
    plan = bench.BenchPlan(
        bs=args.b, us=args.u, Ms=args.m, samples=args.samples, algorithms=tuple(args.alg),
        base_seed=args.seed, jobs=args.jobs, repeats=args.repeats,
    )
    records = bench.run_bench(plan)
    if args.output in (None, "-"):
        kept = bench.write_csv(records, sys.stdout)
    else:
        with open(args.output, "w", newline="") as f:
            kept = bench.write_csv(records, f)
    summary = [asdict(s) for s in bench.summarize(kept)]
    if args.summary:
        write_json(summary, args.summary)
    else:
        json.dump(summary, sys.stderr, indent=2)
        print(file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ifcluster", description="Interference-minimizing base-station/user clustering.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--b", type=int, required=True, help="number of base-stations")
    g.add_argument("--u", type=int, required=True, help="number of users")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--side", type=float, default=1000.0)
    g.add_argument("--dist-min", type=float, default=1.0)
    g.add_argument("--dist-max", type=float, default=200.0)
    g.add_argument("--alpha", type=float, default=2.0)
    g.add_argument("--matrix-only", action="store_true", help="omit coordinates")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("cluster", help="cluster an instance")
    c.add_argument("instance")
    c.add_argument("--alg", choices=bench.ALGORITHMS, default="dp")
    c.add_argument("--m", type=int, required=True, help="number of clusters")
    c.add_argument("--seed", type=int, default=0, help="k-means seed (spectral only)")
    c.add_argument("--embedding", choices=EMBEDDINGS, default="ncut", help="spectral embedding")
    c.add_argument("--prune", action="store_true", help="switch off base-stations that only add interference")
    c.add_argument("--emit-trace", metavar="FILE", help="write the merge trace as JSON (dp only)")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_cluster)

    e = sub.add_parser("eval", help="evaluate tinf of a cluster system")
    e.add_argument("instance")
    e.add_argument("system")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_eval)

    o = sub.add_parser("oracle", help="exhaustive optimum for tiny instances")
    o.add_argument("instance")
    o.add_argument("--m", type=int, required=True)
    o.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="largest search space to accept")
    o.add_argument("-o", "--output")
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("replay", help="replay a JSON-lines event stream")
    r.add_argument("instance")
    r.add_argument("events")
    r.add_argument("--m", type=int, required=True)
    r.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                   help="relative tinf growth that triggers re-clustering")
    r.add_argument("-o", "--output", help="timeline CSV (default stdout)")
    r.set_defaults(func=cmd_replay)

    bp = sub.add_parser("bench", help="run the seeded comparison experiment")
    bp.add_argument("--b", type=int_list, default=(50,), help="base-station counts, e.g. 50,200")
    bp.add_argument("--u", type=int_list, default=(200,), help="user counts")
    bp.add_argument("--m", type=int_list, default=tuple(range(1, 21)), help="cluster counts, e.g. 1-20")
    bp.add_argument("--samples", type=int, default=100)
    bp.add_argument("--alg", nargs="+", choices=bench.ALGORITHMS, default=list(bench.ALGORITHMS))
    bp.add_argument("--seed", type=int, default=0, help="base seed")
    bp.add_argument("--jobs", type=int, default=bench.default_jobs(),
                    help=f"worker processes (default ${bench.JOBS_ENV} or 1)")
    bp.add_argument("--repeats", type=int, default=1, help="timing repeats per run; the median is kept")
    bp.add_argument("-o", "--output", help="records CSV (default stdout)")
    bp.add_argument("--summary", help="summary JSON (default stderr)")
    bp.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # --help or a usage error
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ParameterError) as e:
        print(f"ifcluster {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, StructureError) as e:
        print(f"ifcluster {args.command}: {e}", file=sys.stderr)
        return EXIT_DATA


cli_main = main

if __name__ == "__main__":
    sys.exit(main())
