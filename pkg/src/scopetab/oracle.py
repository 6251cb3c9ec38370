"""Independent cross-checks for the disambiguation and proof machinery.

The reading enumerator here is deliberately written against the same
definitions as the main module but with a different algorithm: readings
are generated by building scope trees top-down and checking constraints
as path containment in the built tree, rather than by filtering hole
assignments through descendant sets.  Agreement between the two is a
meaningful regression signal, and the enumerator doubles as the
reference side of the prover equivalence checks: a u-formula is provable
in the scope-aware calculi exactly when every one of its readings is
provable in the plain calculus.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .models import consequence_u, signature
from .prooftree import SearchLimits
from .syntax import (And, Atom, Exists, ForAll, Hole, Implies, Not, Or,
                     URNode, parse_uformula, print_uformula)
from .tableaux import prove_tc
from .tcu import prove_tcu
from .tcup import prove_tcup
from .ur import hole_key

# ---------------------------------------------------------------------------
# reference reading enumeration
# ---------------------------------------------------------------------------


def _entry_holes(formula):
    if isinstance(formula, Hole):
        return [formula.index]
    if isinstance(formula, Not):
        return _entry_holes(formula.body)
    if isinstance(formula, (And, Or, Implies)):
        return _entry_holes(formula.left) + _entry_holes(formula.right)
    if isinstance(formula, (ForAll, Exists)):
        return _entry_holes(formula.body)
    return []


def _below_map(ur):
    """Reflexive-transitive scope order from constraints and structure."""
    edges = set(ur.given)
    for label, formula in ur.entries:
        for hole in _entry_holes(formula):
            edges.add((hole_key(hole), label))
    elements = set(ur.labels) | set(ur.holes)
    for a, b in edges:
        elements.add(a)
        elements.add(b)
    below = {k: {k} for k in elements}
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            merged = below[b] | below[a]
            if merged != below[b]:
                below[b] = merged
                changed = True
    return below


def _joinable_label_pairs(ur):
    """Label pairs that share a unique greatest common lower bound."""
    below = _below_map(ur)
    labels = ur.labels
    out = []
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            common = below[a] & below[b]
            maximal = [k for k in common
                       if not any(k != m and k in below[m] for m in common)]
            if len(maximal) == 1:
                out.append((a, b))
    return out


def brute_force_readings(ur):
    """All readings of a UR, enumerated by building scope trees.

    A tree is grown top-down from a worklist of open holes: pick a
    material label for the first open hole, open that label's holes
    beneath it, repeat until every label is placed.  Each complete tree
    is kept if the declared constraints hold as path containment in the
    tree and every joinable label pair ends up on one branch.
    """
    lhf = ur.lhf
    material = frozenset(ur.pluggable_labels())
    joinable = _joinable_label_pairs(ur)
    results = {}

    def walk(open_holes, remaining, paths, filled):
        if not open_holes:
            if not remaining:
                yield paths, filled
            return
        (key, position), rest = open_holes[0], open_holes[1:]
        for label in sorted(remaining):
            grown = rest + [(hole_key(h), position + (h,))
                            for h in _entry_holes(lhf[label])]
            yield from walk(grown, remaining - {label},
                            dict(paths, **{key: position, label: position}),
                            dict(filled, **{key: label}))

    def inside(a, b, paths):
        """a's subtree lies within b's: b's path is a prefix of a's."""
        pa, pb = paths[a], paths[b]
        return len(pa) >= len(pb) and pa[:len(pb)] == pb

    def admissible(paths, filled):
        for raw_a, raw_b in ur.given:
            a, b = _region(raw_a, ur), _region(raw_b, ur)
            if a not in paths or b not in paths:
                return False
            if not inside(a, b, paths):
                return False
        for raw_a, raw_b in joinable:
            a, b = _region(raw_a, ur), _region(raw_b, ur)
            if not (inside(a, b, paths) or inside(b, a, paths)):
                return False
        return True

    def expand(formula, filled):
        if isinstance(formula, Hole):
            return expand(lhf[filled[hole_key(formula.index)]], filled)
        if isinstance(formula, Atom):
            return formula
        if isinstance(formula, Not):
            return Not(expand(formula.body, filled))
        if isinstance(formula, (And, Or, Implies)):
            return type(formula)(expand(formula.left, filled),
                                 expand(formula.right, filled))
        return type(formula)(formula.var, expand(formula.body, filled))

    first = [(hole_key(ur.top_hole), ())]
    for paths, filled in walk(first, material, {}, {}):
        if not admissible(paths, filled):
            continue
        reading = expand(Hole(ur.top_hole), filled)
        results[print_uformula(reading)] = reading
    return [results[k] for k in sorted(results)]


def _region(element, ur):
    """Fold bare-hole labels onto the hole they merely name."""
    if not element.startswith("#") and isinstance(ur.lhf[element], Hole):
        return hole_key(ur.lhf[element].index)
    return element


def delta_brute(formula):
    """Readings of a u-formula, using the reference UR enumerator."""
    if isinstance(formula, URNode):
        return brute_force_readings(formula.ur)
    if isinstance(formula, Atom):
        return [formula]
    if isinstance(formula, Not):
        return _unique([Not(d) for d in delta_brute(formula.body)])
    if isinstance(formula, (And, Or, Implies)):
        return _unique([type(formula)(a, b)
                        for a in delta_brute(formula.left)
                        for b in delta_brute(formula.right)])
    if isinstance(formula, (ForAll, Exists)):
        return _unique([type(formula)(formula.var, d)
                        for d in delta_brute(formula.body)])
    raise ValueError("cannot disambiguate %r" % (formula,))


def _unique(readings):
    seen = {}
    for reading in readings:
        seen.setdefault(print_uformula(reading), reading)
    return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# prover equivalence checks
# ---------------------------------------------------------------------------

@dataclass
class EquivalenceCheck:
    name: str
    formula: str
    scoped_proved: bool       # the scope-aware calculus on the u-formula
    reading_count: int
    readings_proved: bool     # plain calculus on every reading
    decisive: bool            # both sides settled within the limits
    def agree(self):
        return self.scoped_proved == self.readings_proved


def _check_equivalence(name, formula, scoped_prover, limits):
    scoped = scoped_prover(formula, limits)
    readings = delta_brute(formula)
    all_proved = True
    all_decisive = scoped.decisive or scoped.proved
    for reading in readings:
        result = prove_tc(reading, limits)
        if not result.proved:
            all_proved = False
            if not result.decisive:
                all_decisive = False
    return EquivalenceCheck(name, print_uformula(formula), scoped.proved,
                        len(readings), all_proved, all_decisive)


def check_tcu_equivalence(formula, limits=None, name="formula"):
    """Total-disambiguation calculus vs. per-reading plain proving."""
    return _check_equivalence(name, formula, prove_tcu,
                              limits or SearchLimits())


def check_tcup_equivalence(formula, limits=None, name="formula"):
    """Partial-disambiguation calculus vs. per-reading plain proving."""
    return _check_equivalence(name, formula, prove_tcup,
                              limits or SearchLimits())


@dataclass
class OracleReport:
    checked: int = 0
    agreed: int = 0
    disagreements: list = field(default_factory=list)
    undecided: list = field(default_factory=list)

    def all_agree(self):
        return not self.disagreements

    def describe(self):
        return ("%d/%d agree, %d undecided within limits"
                % (self.agreed, self.checked, len(self.undecided)))


def run_equivalence_suite(checker, entries=None, limits=None):
    """Run an equivalence check over the corpus; report agreement."""
    report = OracleReport()
    for name, formula in entries if entries is not None else corpus():
        check = checker(formula, limits, name=name)
        report.checked += 1
        if check.agree():
            report.agreed += 1
        else:
            report.disagreements.append(name)
        if not check.decisive:
            report.undecided.append(name)
    return report


# ---------------------------------------------------------------------------
# soundness sweep
# ---------------------------------------------------------------------------

def _model_space(formulas, size):
    preds, consts = signature(formulas)
    cells = sum(size ** arity for arity in preds.values())
    return (2 ** cells) * (size ** len(consts))


def sweep_domain(formulas, budget=40000):
    """Largest domain size (<= 3) whose model count stays within budget."""
    best = 0
    for size in (1, 2, 3):
        if _model_space(formulas, size) > budget:
            break
        best = size
    return max(best, 1)


@dataclass
class SoundnessReport:
    checked: int = 0
    violations: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def clean(self):
        return not self.violations


def soundness_sweep(sequents, max_domain=3, budget=40000):
    """Verify that proved sequents have no small countermodels.

    ``sequents`` holds (name, premises, conclusion, proved) tuples; only
    the proved ones are checked, each up to the largest domain size
    whose model space fits the budget.
    """
    report = SoundnessReport()
    for name, premises, conclusion, proved in sequents:
        if not proved:
            continue
        formulas = list(premises) + [conclusion]
        domain = min(max_domain, sweep_domain(formulas, budget))
        verdict = consequence_u(premises, conclusion, max_domain=domain)
        report.checked += 1
        if verdict.counterexample is not None:
            report.violations.append(name)
        if domain < max_domain:
            report.skipped.append((name, domain))
    return report


# ---------------------------------------------------------------------------
# the corpus
# ---------------------------------------------------------------------------

UR_TWO_SCOPE = """ur { l0: #0 ; l1: forall x. (man(x) -> #1) ;
    l2: exists y. (woman(y) & #2) ; l3: love(x,y) ;
    constraints { l1 <= #0 ; l2 <= #0 ; l3 <= #1 ; l3 <= #2 } }"""

UR_NEGATED_SCOPE = """ur { l0: #0 ; l1: forall x. (boy(x) -> #1) ; l2: ~(#2) ;
    l3: exists y. (movie(y) & #3) ; l4: see(x,y) ;
    constraints { l1 <= #0 ; l2 <= #0 ; l3 <= #0 ;
                  l4 <= #1 ; l4 <= #2 ; l4 <= #3 } }"""

UR_EVERY_BOY_SLEPT_NOT = """ur { l0: #0 ; l1: forall x. (boy(x) -> #1) ;
    l2: ~(#2) ; l3: sleep(x) ;
    constraints { l1 <= #0 ; l2 <= #0 ; l3 <= #1 ; l3 <= #2 } }"""

UR_JOHN_SLEPT_NOT = """ur { l0: #0 ; l1: ~(#1) ; l2: sleep(john) ;
    constraints { l1 <= #0 ; l2 <= #1 } }"""

UR_RESTRICTOR = """ur { l0: #0 ; l1: forall x. ((man(x) & #1) -> #2) ;
    l2: exists z. (car(z) & #3) ; l3: exists y. (bike(y) & #4) ;
    l4: ~(#5) ; l5: have(x,z) ; l6: ride(x,y) ;
    constraints { l1 <= #0 ; l4 <= #1 ; l2 <= #1 ; l5 <= #3 ; l5 <= #5 ;
                  l6 <= #4 ; l3 <= #0 } }"""

UR_PROPOSITIONAL = """ur { l0: #0 ; l1: #1 -> #2 ; l2: p ; l3: q ;
    constraints { l1 <= #0 ; l2 <= l1 ; l3 <= l1 } }"""

WEAK_READING = "forall x. (man(x) -> exists y. (woman(y) & love(x,y)))"
STRONG_READING = "exists y. (woman(y) & forall x. (man(x) -> love(x,y)))"


def paper_entries():
    """Named golden u-formulas with known provability status."""
    a = UR_PROPOSITIONAL
    entries = [
        ("two-scope-to-weak", "(%s) -> (%s)" % (UR_TWO_SCOPE, WEAK_READING)),
        ("two-scope-to-strong", "(%s) -> (%s)" % (UR_TWO_SCOPE, STRONG_READING)),
        ("strong-to-two-scope", "(%s) -> (%s)" % (STRONG_READING, UR_TWO_SCOPE)),
        ("two-scope-reflexivity", "(%s) -> (%s)" % (UR_TWO_SCOPE, UR_TWO_SCOPE)),
        ("ambiguous-weakening-right", "((%s) & b) -> b" % a),
        ("ambiguous-weakening-left", "((%s) & b) -> (%s)" % (a, a)),
        ("boy-slept-not-instance",
         "((%s) & boy(john)) -> (%s)"
         % (UR_EVERY_BOY_SLEPT_NOT, UR_JOHN_SLEPT_NOT)),
        ("two-scope-to-either",
         "(%s) -> ((%s) | (%s))" % (UR_TWO_SCOPE, WEAK_READING, STRONG_READING)),
        ("negated-scope-weakening",
         "((%s) & boy(john)) -> boy(john)" % UR_NEGATED_SCOPE),
        ("restrictor-weakening",
         "((%s) & rains) -> rains" % UR_RESTRICTOR),
        ("propositional-identity", "(%s) -> ((p -> q) | (q -> p))" % a),
    ]
    return [(name, parse_uformula(text)) for name, text in entries]


_FORCES = ("forall", "exists", "negation")
_NOUNS = ("man", "woman", "boy", "movie", "car", "judge")


def _random_ur(rng, scope_count):
    """A scope-chain UR: quantifier/negation labels over one matrix atom."""
    picks = [rng.choice(_FORCES) for _ in range(scope_count)]
    if all(p == "negation" for p in picks):
        picks[rng.randrange(scope_count)] = rng.choice(("forall", "exists"))
    binders = []
    entries = ["l0: #0"]
    constraints = ["l%d <= #0" % (i + 1) for i in range(scope_count)]
    for i, force in enumerate(picks):
        label = "l%d" % (i + 1)
        hole = "#%d" % (i + 1)
        if force == "negation":
            entries.append("%s: ~(%s)" % (label, hole))
        else:
            var = "x%d" % len(binders)
            binders.append(var)
            noun = rng.choice(_NOUNS)
            if force == "forall":
                entries.append("%s: forall %s. (%s(%s) -> %s)"
                               % (label, var, noun, var, hole))
            else:
                entries.append("%s: exists %s. (%s(%s) & %s)"
                               % (label, var, noun, var, hole))
    matrix = "l%d" % (scope_count + 1)
    args = ", ".join(binders) if binders else ""
    body = "rel(%s)" % args if args else "rel0"
    entries.append("%s: %s" % (matrix, body))
    constraints += ["%s <= #%d" % (matrix, i + 1) for i in range(scope_count)]
    return "ur { %s ; constraints { %s } }" % (" ; ".join(entries),
                                               " ; ".join(constraints))


def _wrap(rng, ur_text, readings):
    """Embed a UR in a u-formula with known-by-construction status.

    Wide wrappers blow up the search space — reflexivity over n readings
    checks n*n product disambiguations — so anything beyond two readings
    is confined to the guard form, which stays cheap at any width.
    """
    kinds = [0, 1, 2, 3] if len(readings) <= 2 else [3]
    kind = rng.choice(kinds)
    if kind == 0:       # valid: the UR entails the join of its readings
        target = " | ".join("(%s)" % print_uformula(d) for d in readings)
        return "(%s) -> (%s)" % (ur_text, target)
    if kind == 1:       # valid: the meet of the readings entails the UR
        source = " & ".join("(%s)" % print_uformula(d) for d in readings)
        return "(%s) -> (%s)" % (source, ur_text)
    if kind == 2:       # invalid whenever the readings differ
        return "(%s) -> (%s)" % (ur_text, ur_text)
    return "((%s) & guard) -> guard" % ur_text      # valid without plugging


def generated_entries(count=40, seed=8601):
    """Seeded random corpus entries; every UR keeps at most 16 readings."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        scope_count = rng.choice((2, 2, 3))
        ur_text = _random_ur(rng, scope_count)
        ur_formula = parse_uformula(ur_text)
        readings = brute_force_readings(ur_formula.ur)
        if not readings or len(readings) > 16:
            continue
        text = _wrap(rng, ur_text, readings)
        out.append(("generated-%02d" % len(out), parse_uformula(text)))
    return out


def corpus():
    """The fixed regression corpus: paper-derived plus generated entries."""
    return paper_entries() + generated_entries()
