"""Command-line entry point.

    hypoineq run <config> [--out DIR] [--seed N] [--jobs K]
    hypoineq list
    hypoineq constant alpha-q --group <id> --norm <id>
    hypoineq constant htype --k <int> --l <int>

Exit codes: 0 all assertions pass, 1 assertion failures (listed), 2 config
or usage errors.
"""

from __future__ import annotations

import argparse
import sys

from . import groups, tm
from .config import ConfigError, load_config
from .report import failing_entries, run_report, write_report
from .suites import list_suites


def _cmd_run(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        config.seed = args.seed
        config.ctx.seed = args.seed
    if args.out is not None:
        config.out_dir = args.out
    report = run_report(config, jobs=args.jobs)
    path = write_report(report, config.out_dir)
    print(f"report: {path}")
    print(f"digest: {report['digest']}")
    for suite, secs in report["timings"].items():
        n = len(report["suites"][suite])
        np_ = sum(e["passed"] for e in report["suites"][suite])
        print(f"  {suite:<12} {np_}/{n} passed  ({secs}s)")
    if report["all_passed"]:
        return 0
    print("failing entries:", file=sys.stderr)
    for suite, eid in failing_entries(report):
        print(f"  {suite}:{eid}", file=sys.stderr)
    return 1


def _cmd_list(_args) -> int:
    for name, desc in list_suites():
        print(f"{name:<12} {desc}")
    return 0


def _cmd_constant(args) -> int:
    if args.which == "alpha-q":
        norm = groups.from_id(args.norm if args.norm else args.group)
        c_q, alpha_q = tm.alpha_q_quadrature(norm)
        print(f"c_Q     = {c_q!r}")
        print(f"alpha_Q = {alpha_q!r}")
        if norm.group.is_heisenberg:
            n = (norm.group.n - 1) // 2
            print(f"htype closed form = {tm.htype_alpha(2 * n, 1)!r}")
            print(f"gluing-normalization closed form = {tm.yang_alpha(n)!r}")
        return 0
    if args.which == "htype":
        print(f"alpha_Q = {tm.htype_alpha(args.k, args.l)!r}")
        return 0
    print("unknown constant", file=sys.stderr)
    return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypoineq",
                                     description="inequality verification suites")
    sub = parser.add_subparsers(dest="command")

    p_run = sub.add_parser("run", help="run suites from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--jobs", type=int, default=1)
    p_run.set_defaults(fn=_cmd_run)

    p_list = sub.add_parser("list", help="list available suites")
    p_list.set_defaults(fn=_cmd_list)

    p_const = sub.add_parser("constant", help="print a sharp constant")
    const_sub = p_const.add_subparsers(dest="which")
    p_aq = const_sub.add_parser("alpha-q")
    p_aq.add_argument("--group", default="R:2:1,1:euclidean")
    p_aq.add_argument("--norm", default=None)
    p_aq.set_defaults(fn=_cmd_constant, which="alpha-q")
    p_ht = const_sub.add_parser("htype")
    p_ht.add_argument("--k", type=int, required=True)
    p_ht.add_argument("--l", type=int, required=True)
    p_ht.set_defaults(fn=_cmd_constant, which="htype")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "fn"):
        parser.print_help()
        return 2
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
