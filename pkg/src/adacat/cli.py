"""Command-line entry point ``adacat``.

Exit codes for ``run``: 0 when every run converged, 2 when some run hit a
cap or failed, 3 on a configuration error.
"""

import argparse
import logging
import sys
import urllib.request

from . import bench
from .errors import ConfigError, MissingFile, ParseError
from .numkit import Rng
from .problems import gen_quadratic, load_libsvm, save_quadratic

A1A_URL = "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary/a1a"

EXIT_OK, EXIT_CAPS, EXIT_CONFIG = 0, 2, 3


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def cmd_run(args):
    overrides = {} if args.seed is None else {"seed": args.seed}
    try:
        specs = bench.load_config(args.config, overrides)
    except (ConfigError, MissingFile) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.only:
        wanted = [s.strip() for s in args.only.split(",") if s.strip()]
        known = {s.run_id for s in specs}
        missing = [w for w in wanted if w not in known]
        if missing:
            print(f"config error: unknown run ids {missing}", file=sys.stderr)
            return EXIT_CONFIG
        specs = [s for s in specs if s.run_id in wanted]
    results = bench.execute_runs(specs, jobs=args.jobs)
    bench.emit_csv(results, args.out)
    for spec, trace in results:
        last = trace.events[-1] if trace.events else None
        gap = "NA" if last is None else f"{last.gap:.3e}"
        cost = "NA" if last is None else f"{last.grad_equiv:.1f}"
        line = f"{spec.run_id:24s} {trace.terminal_status:10s} gap={gap} grad_equiv={cost}"
        if trace.error:
            line += f"  ({trace.error})"
        print(line)
    return bench.exit_code(results)


def cmd_gen_quadratic(args):
    save_quadratic(gen_quadratic(args.n, Rng(args.seed)), args.out)
    print(f"wrote {args.n}x{args.n} matrix to {args.out}")
    return EXIT_OK


def cmd_fetch_a1a(args):
    with urllib.request.urlopen(args.url, timeout=60) as resp:
        payload = resp.read()
    with open(args.out, "wb") as fh:
        fh.write(payload)
    print(f"wrote {len(payload)} bytes to {args.out}")
    return EXIT_OK


def cmd_validate(args):
    try:
        data = load_libsvm(args.libsvm)
    except ParseError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    labels = sorted(set(data.labels))
    nnz = sum(len(r) for r in data.rows)
    print(f"ok: {len(data)} rows, {data.n_features} features, {nnz} nonzeros, labels {labels}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="adacat", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute the runs of a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output directory for CSV traces")
    p.add_argument("--seed", type=_u64, help="override every run's seed")
    p.add_argument("--only", help="comma-separated run ids")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("gen-quadratic", help="write a random degenerate quadratic")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_quadratic)

    p = sub.add_parser("fetch-a1a", help="download the a1a LIBSVM file (network)")
    p.add_argument("--out", required=True)
    p.add_argument("--url", default=A1A_URL)
    p.set_defaults(func=cmd_fetch_a1a)

    p = sub.add_parser("validate", help="check a LIBSVM file")
    p.add_argument("--libsvm", required=True)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
