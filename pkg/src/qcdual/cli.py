"""Command-line entry point: ``qcdual <command> [options]``.

Exit status is 0 when every check passes, 2 for configuration errors and
3 when a check or internal invariant fails (the failing trace goes to
stderr).  Budgets can be overridden through ``QCDUAL_BUDGET``,
``QCDUAL_BASIS_BUDGET`` and ``QCDUAL_SCAN_LIMIT``.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import abelian, constructions, topology
from .errors import InvariantViolation, QCDualError
from .parsing import parse_int_list
from .suite import COMMANDS, SuiteConfig, run_suite

EXIT_OK, EXIT_CONFIG, EXIT_INVARIANT = 0, 2, 3

_HELP = {
    "hull": "quasi-convex hull (bipolar) of an element set",
    "polar": "polar of an element set",
    "atlas": "all quasi-convex subsets of a small truncation",
    "witness": "V_m witness against a prefix of an infinite-support character",
    "certify": "continuity certificate for a finitely supported character",
    "discont": "build a discontinuous character along a sequence",
    "compare-top": "compare two topology descriptors at a truncation",
    "verify": "run the full acceptance battery",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcdual", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, help=_HELP[name])
        p.add_argument("--moduli", "--group", dest="moduli", default="geom:base=2",
                       help="moduli spec, e.g. geom:base=2, arith:start=2,step=1, list:4")
        p.add_argument("--depth", type=int, default=None, help="truncation depth N")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--budget", type=int, default=abelian.DEFAULT_BUDGET)
        p.add_argument("--basis-budget", type=int, default=topology.DEFAULT_BASIS_BUDGET)
        p.add_argument("--scan-limit", type=int, default=constructions.DEFAULT_SCAN_LIMIT)
        p.add_argument("-o", "--output", default=None, help="write the report here instead of stdout")
        if name in ("hull", "polar"):
            p.add_argument("--set", dest="element_set", default="",
                           help='elements as "n:k,n:k;..." ("0" is zero)')
        if name in ("witness", "certify"):
            p.add_argument("--chi", required=True, help='character as "n:chi_n,..."')
        if name == "witness":
            p.add_argument("--m", default="1", help="comma-separated m values")
        if name == "discont":
            p.add_argument("--seq", default=None, help="sequence (default e_1..e_depth)")
        if name == "compare-top":
            p.add_argument("--t1", default="uniform-c")
            p.add_argument("--t2", default="product")
        if name == "atlas":
            p.add_argument("--dot", default=None, help="also write the inclusion order as DOT")
    return parser


_DEFAULT_DEPTH = {"discont": 50, "compare-top": 8}
_DEFAULT_SAMPLES = {"discont": 500}


def config_from_args(args) -> SuiteConfig:
    return SuiteConfig(
        command=args.command,
        moduli_spec=args.moduli,
        truncation_depth=args.depth or _DEFAULT_DEPTH.get(args.command, 1),
        m_values=parse_int_list(getattr(args, "m", "1")),
        sample_count=args.samples or _DEFAULT_SAMPLES.get(args.command, 200),
        rng_seed=args.seed,
        budget=args.budget,
        basis_budget=args.basis_budget,
        scan_limit=args.scan_limit,
        output_path=args.output,
        element_set=getattr(args, "element_set", None),
        character=getattr(args, "chi", None),
        sequence=getattr(args, "seq", None),
        tau1=getattr(args, "t1", "uniform-c"),
        tau2=getattr(args, "t2", "product"),
        dot_path=getattr(args, "dot", None),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        report = run_suite(cfg)
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        for check in exc.trace or ():
            print(json.dumps(check.to_json()), file=sys.stderr)
        return EXIT_INVARIANT
    except (QCDualError, ValueError, OSError) as exc:
        print(f"qcdual {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not cfg.output_path:
        sys.stdout.write(report.to_text())
    if not report.ok:
        for case in report.cases:
            if case["status"] == "FAIL":
                print(f"FAIL {case['name']}: {json.dumps(case, sort_keys=True)}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
