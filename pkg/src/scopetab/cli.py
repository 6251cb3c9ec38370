"""Command-line front end for disambiguation, model checks, and proving.

Four subcommands share one input convention: a formula argument is
either inline text or the path of a file holding the same syntax.

    scopetab disambiguate "ur { ... }"
    scopetab prove --calculus tcup "(ur { ... } & p) -> p"
    scopetab check --premise "p -> q" "q" --max-domain 2
    scopetab oracle --suite all

Exit status is 0 for proved / no counterexample / full agreement, 1 for
the settled negative, and 2 for input or configuration errors.  Output
is deterministic: identical inputs and flags give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .models import consequence_u, parse_model, sat_u
from .oracle import (check_tcu_equivalence, check_tcup_equivalence, corpus,
                     run_equivalence_suite, soundness_sweep)
from .prooftree import SearchLimitError, SearchLimits
from .syntax import ParseError, parse_uformula, print_uformula
from .tableaux import CalculusError, prove_tc_sequent
from .tcu import prove_tcu_sequent
from .tcup import prove_tcup_sequent
from .ur import URError, delta

PROVERS = {
    "tc": prove_tc_sequent,
    "tcu": prove_tcu_sequent,
    "tcup": prove_tcup_sequent,
}


def read_source(argument):
    """Inline text, or the contents of the file the text names."""
    if os.path.exists(argument):
        with open(argument, "r", encoding="utf-8") as handle:
            return handle.read()
    return argument


def emit(record, fmt):
    if fmt == "structured":
        print(json.dumps(record, sort_keys=True))
    else:
        print(record["line"])


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_disambiguate(args):
    formula = parse_uformula(read_source(args.formula))
    for index, reading in enumerate(delta(formula)):
        text = print_uformula(reading)
        emit({"index": index, "reading": text, "line": text}, args.format)
    return 0


def cmd_prove(args):
    premises = tuple(parse_uformula(read_source(p)) for p in args.premise)
    conclusion = (parse_uformula(read_source(args.formula))
                  if args.formula is not None else None)
    limits = SearchLimits(gamma_multiplicity=args.gamma, max_depth=args.depth)
    result = PROVERS[args.calculus](premises, conclusion, limits)

    if args.format == "dot":
        print(result.tableau.to_dot())
    elif args.format == "structured":
        summary = {"calculus": result.calculus, "proved": result.proved,
                   "decisive": result.decisive, "gamma": result.gamma_used,
                   "nodes": result.stats["nodes"],
                   "branches": result.stats["branches"]}
        print(json.dumps(summary, sort_keys=True))
        if args.tree:
            for record in result.tableau.records():
                print(json.dumps(record, sort_keys=True))
    else:
        print("%s: %s (gamma=%d, nodes=%d, branches=%d)"
              % (result.calculus, result.description(), result.gamma_used,
                 result.stats["nodes"], result.stats["branches"]))
        if args.tree:
            print(result.tableau.to_text())
    if args.figure:
        from .render import proof_figure
        proof_figure(result, args.figure)
    return 0 if result.proved else 1


def cmd_check(args):
    premises = tuple(parse_uformula(read_source(p)) for p in args.premise)
    conclusion = parse_uformula(read_source(args.formula))
    if args.model is not None:
        model = parse_model(read_source(args.model))
        bad = (all(sat_u(model, p) for p in premises)
               and not sat_u(model, conclusion))
        emit({"counterexample": bad, "domain": sorted(model.domain),
              "line": ("counterexample" if bad else "not a counterexample")},
             args.format)
        return 1 if bad else 0
    verdict = consequence_u(premises, conclusion, max_domain=args.max_domain)
    if verdict.counterexample is None:
        emit({"counterexample": None, "max_domain": args.max_domain,
              "line": "no counterexample up to domain size %d"
                      % args.max_domain}, args.format)
        return 0
    witness = verdict.counterexample
    emit({"counterexample": witness.model.describe(),
          "max_domain": args.max_domain,
          "line": "counterexample: %s" % witness.model.describe()},
         args.format)
    return 1


def cmd_oracle(args):
    entries = corpus()
    status = 0
    reports = {}
    if args.suite in ("tcu", "all"):
        reports["tcu"] = run_equivalence_suite(check_tcu_equivalence, entries)
    if args.suite in ("tcup", "all"):
        reports["tcup"] = run_equivalence_suite(check_tcup_equivalence, entries)
    for name in sorted(reports):
        report = reports[name]
        emit({"suite": name, "checked": report.checked,
              "agreed": report.agreed,
              "disagreements": report.disagreements,
              "undecided": report.undecided,
              "line": "%s: %s" % (name, report.describe())}, args.format)
        if not report.all_agree():
            status = 1

    sweep = None
    if args.suite in ("soundness", "all"):
        prover = prove_tcup_sequent
        sequents = [(name, (), formula, prover((), formula).proved)
                    for name, formula in entries]
        sweep = soundness_sweep(sequents, max_domain=args.max_domain,
                                budget=2048)
        emit({"suite": "soundness", "checked": sweep.checked,
              "violations": sweep.violations,
              "reduced_domain": sorted(sweep.skipped),
              "line": "soundness: %d proved entries, %d violations"
                      % (sweep.checked, len(sweep.violations))}, args.format)
        if not sweep.clean():
            status = 1
    if args.figure:
        from .render import oracle_figure
        oracle_figure(reports, sweep, args.figure)
    return status


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="scopetab",
        description="tableau proving for formulas with scope ambiguity")
    sub = parser.add_subparsers(dest="command", required=True)

    def formats(p, choices=("text", "structured")):
        p.add_argument("--format", choices=choices, default="text")

    p = sub.add_parser("disambiguate",
                       help="print every reading of a formula, sorted")
    p.add_argument("formula", help="formula text or file path")
    formats(p)
    p.set_defaults(handler=cmd_disambiguate)

    p = sub.add_parser("prove", help="run a tableau prover on a sequent")
    p.add_argument("formula", nargs="?", default=None,
                   help="conclusion (omit to saturate premises only)")
    p.add_argument("--premise", action="append", default=[],
                   help="premise formula; repeatable")
    p.add_argument("--calculus", choices=sorted(PROVERS), default="tcup")
    p.add_argument("--gamma", type=int, default=3,
                   help="instantiations per universal per branch")
    p.add_argument("--depth", type=int, default=120,
                   help="nodes along a single branch")
    p.add_argument("--tree", action="store_true",
                   help="print the tableau, not just the outcome")
    p.add_argument("--figure", metavar="PATH",
                   help="render the tableau to an image file")
    formats(p, choices=("text", "structured", "dot"))
    p.set_defaults(handler=cmd_prove)

    p = sub.add_parser("check", help="look for countermodels of a sequent")
    p.add_argument("formula", help="conclusion formula text or file path")
    p.add_argument("--premise", action="append", default=[])
    p.add_argument("--model", metavar="PATH", default=None,
                   help="test one model file instead of searching")
    p.add_argument("--max-domain", type=int, default=3)
    formats(p)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("oracle",
                       help="cross-check the provers on the fixed corpus")
    p.add_argument("--suite", choices=("tcu", "tcup", "soundness", "all"),
                   default="all")
    p.add_argument("--max-domain", type=int, default=3)
    p.add_argument("--figure", metavar="PATH",
                   help="render the summary to an image file")
    formats(p)
    p.set_defaults(handler=cmd_oracle)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "gamma", 1) < 1 or getattr(args, "depth", 1) < 1:
        print("numeric limits must be at least 1", file=sys.stderr)
        return 2
    if getattr(args, "max_domain", 1) < 1:
        print("numeric limits must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.handler(args)
    except (ParseError, URError, CalculusError, SearchLimitError,
            OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
