"""Tableaux with total disambiguation of scope-ambiguous subformulas.

Signed formulas that still contain an underspecified representation get
the u-marked signs ``Tu``/``Fu``.  Classical rules decompose them as
usual; once a branch reaches a UR leaf, the branch splits into one child
per reading, and each child continues as an ordinary proof.  Splits of
this kind rename the branch's free variables apart, since the readings
are independent proof obligations.

On inputs without URs the calculus produces exactly the plain tableau.
"""

from __future__ import annotations

from .prooftree import SearchLimits
from .syntax import URNode, contains_ur
from .tableaux import (CLASS_UR, BranchSpec, CalculusError, ChildSpec,
                       PlainHandler, _prepare, run_prover)
from .ur import delta


class TotalHandler(PlainHandler):
    """Scope rule: branch over every reading of a UR leaf at once."""

    name = "tcu"

    def sign_for(self, base, payload):
        if contains_ur(payload):
            return base + "u"
        return base

    def check_input(self, formula, role):
        return None

    def classify(self, sign, payload, ctx, branch):
        if isinstance(payload, URNode):
            return CLASS_UR
        raise CalculusError("cannot expand %r in total disambiguation"
                            % (payload,))

    def expand(self, engine, branch, item, cls):
        readings = delta(item.payload)
        if not readings:
            raise CalculusError("UR admits no disambiguation")
        rule = "%s:UR" % item.sign
        return [BranchSpec(rule,
                           (ChildSpec(item.sign[0], reading, reading=i),),
                           rename=True)
                for i, reading in enumerate(readings)]

    def formula_ctx(self, ctx, formula):
        return None


def prove_tcu(formula, limits=None):
    """Try to prove a u-formula valid under every disambiguation."""
    return prove_tcu_sequent([], formula, limits)


def prove_tcu_sequent(premises, conclusion, limits=None):
    handler = TotalHandler()
    limits = limits or SearchLimits()
    return run_prover(handler, _prepare(handler, list(premises), conclusion),
                      limits)
