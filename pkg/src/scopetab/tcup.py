"""Tableaux with partial disambiguation inside underspecified formulas.

Instead of branching over every reading at once, this calculus walks
into a UR hole by hole.  Signed hole goals (``Tu:#i`` / ``Fu:#i``) track
which UR instance they belong to, what has been committed so far, and
which constraints were added along the way.  Four scope rules apply, in
order of preference:

* commit (``up``): the hole has exactly one possible filler, so the
  filler's formula is materialized and classical rules continue;
* quantifier preference (``forall``/``exists``): a definite special
  quantifier can be given wide scope, branching over all fillers with
  the designated quantifier first;
* negation resolution (``pi``): an indefinite special quantifier is
  ordered relative to a negative context, splitting the readings into
  two refinement branches without materializing anything;
* local total disambiguation (``UR``): branch over the remaining
  readings below the hole.

Branches produced by scope rules are independent proof obligations, so
their free variables are renamed apart.  Plain formulas never receive
u-signs; on UR-free inputs the calculus is the plain tableau.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .prooftree import SearchLimits
from .syntax import (And, Exists, ForAll, Hole, Implies, Not, Or, URNode,
                     Var, contains_hole, print_uformula, substitute)
from .tableaux import (CLASS_UR, BranchSpec, CalculusError, ChildSpec,
                       PlainHandler, _prepare, run_prover)
from .unification import apply_subst
from .ur import (UR, URError, close_constraints, hole_key, instantiations,
                 join_pairs, plug)

CLASS_COMMIT = CLASS_UR        # interface rules and unique-filler commits
CLASS_PREFER = CLASS_UR + 1    # definite wide-scope quantifier
CLASS_RESOLVE = CLASS_UR + 2   # partial negation resolution
CLASS_TOTAL = CLASS_UR + 3     # local total disambiguation


# ---------------------------------------------------------------------------
# polarity and shape analysis
# ---------------------------------------------------------------------------

def polarity(formula, hole):
    """Sign of the context a hole occurs in: 'positive', 'negative', or None.

    Negation and implication antecedents flip the sign; conjunction,
    disjunction, implication consequents, and quantifiers preserve it.
    """
    def walk(f, sign):
        if isinstance(f, Hole):
            return sign if f.index == hole else None
        if isinstance(f, Not):
            return walk(f.body, -sign)
        if isinstance(f, Implies):
            left = walk(f.left, -sign)
            if left is not None:
                return left
            return walk(f.right, sign)
        if isinstance(f, (And, Or)):
            left = walk(f.left, sign)
            if left is not None:
                return left
            return walk(f.right, sign)
        if isinstance(f, (ForAll, Exists)):
            return walk(f.body, sign)
        return None

    out = walk(formula, 1)
    if out is None:
        return None
    return "positive" if out > 0 else "negative"


def is_negative_context(formula, hole):
    return polarity(formula, hole) == "negative"


def negative_holes(formula):
    """Holes of a formula that sit in a negative context, in index order."""
    out = []

    def walk(f):
        if isinstance(f, Hole):
            if is_negative_context(formula, f.index):
                out.append(f.index)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (And, Or, Implies)):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, (ForAll, Exists)):
            walk(f.body)

    walk(formula)
    return out


def is_special(formula):
    """Shape tag of a wide-scope-capable quantified h-formula, else None.

    The recognized shapes are ``forall x. (chi -> #h)``,
    ``forall x. ((chi & #h) -> psi)``, and ``exists x. (chi & #h)``,
    with the remaining material hole-free.
    """
    if isinstance(formula, ForAll) and isinstance(formula.body, Implies):
        left, right = formula.body.left, formula.body.right
        if isinstance(right, Hole) and not contains_hole(left):
            return "forall-scope"
        if (isinstance(left, And) and isinstance(left.right, Hole)
                and not contains_hole(left.left)
                and not contains_hole(right)):
            return "forall-restrictor"
    if isinstance(formula, Exists) and isinstance(formula.body, And):
        left, right = formula.body.left, formula.body.right
        if isinstance(right, Hole) and not contains_hole(left):
            return "exists-scope"
    return None


def special_hole(formula):
    """The designated hole of a special formula."""
    tag = is_special(formula)
    if tag == "forall-scope":
        return formula.body.right.index
    if tag == "forall-restrictor":
        return formula.body.left.right.index
    if tag == "exists-scope":
        return formula.body.right.index
    raise URError("formula %s is not special" % print_uformula(formula))


def special_force(formula):
    tag = is_special(formula)
    if tag is None:
        return None
    return "forall" if tag.startswith("forall") else "exists"


# ---------------------------------------------------------------------------
# definiteness and negation resolution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DefinitenessReport:
    label: str
    hole: int
    definite: bool
    witnesses: tuple    # (witness label, witness hole) pairs still unordered


def _label_hole(ur, label, hole):
    formula = ur.lhf[label]
    holes = sorted(set(_holes_of(formula)))
    if hole is None:
        if len(holes) != 1:
            raise URError("label %s needs an explicit hole" % label)
        return holes[0]
    if hole not in holes:
        raise URError("label %s has no hole #%d" % (label, hole))
    return hole


def _holes_of(formula):
    if isinstance(formula, Hole):
        return [formula.index]
    if isinstance(formula, Not):
        return _holes_of(formula.body)
    if isinstance(formula, (And, Or, Implies)):
        return _holes_of(formula.left) + _holes_of(formula.right)
    if isinstance(formula, (ForAll, Exists)):
        return _holes_of(formula.body)
    return []


def _unordered_witnesses(ur, label, hole, pairs):
    """Negative-context holes whose order against ``hole`` is still open."""
    out = []
    hk = hole_key(hole)
    elements = _order_elements(ur)
    for other in ur.labels:
        if other == label:
            continue
        formula = ur.lhf[other]
        for neg in negative_holes(formula):
            nk = hole_key(neg)
            if join_pairs(elements, pairs, hk, nk) is None:
                continue
            if (label, nk) in pairs or (other, hk) in pairs:
                continue
            out.append((other, neg))
    return out


def _order_elements(ur):
    return ur.labels + tuple(sorted(ur.holes))


def definiteness(ur, label, hole=None):
    """Report whether a labeled h-formula's scope is settled (report form).

    A label is definite when, for every hole of another h-formula that
    sits in a negative context and shares a join with the label's hole,
    the constraint set already orders the two.
    """
    hole = _label_hole(ur, label, hole)
    witnesses = tuple(_unordered_witnesses(ur, label, hole, ur.constraints))
    return DefinitenessReport(label, hole, not witnesses, witnesses)


def is_definite(ur, label, hole=None):
    formula = ur.lhf[label]
    if not _holes_of(formula):
        return True
    return definiteness(ur, label, hole).definite


def negation_resolve(ur, label, witness=None):
    """Split a UR on the order of an indefinite label and a negative context.

    Returns ``(left, right)``: the left UR constrains the negative
    context inside the label's hole (the label takes wide scope), the
    right UR constrains the label inside the negative-context hole.
    The two readings sets partition the original's.
    """
    report = definiteness(ur, label)
    if report.definite:
        raise URError("label %s is already definite" % label)
    if witness is None:
        witness = _maximal_witness(ur.constraints, report.witnesses)
    else:
        matches = [w for w in report.witnesses if w[0] == witness]
        if not matches:
            raise URError("label %s is not an open negative context for %s"
                          % (witness, label))
        witness = matches[0]
    witness_label, witness_hole = witness
    left = ur.with_constraints(((witness_label, hole_key(report.hole)),))
    right = ur.with_constraints(((label, hole_key(witness_hole)),))
    return left, right


def _maximal_witness(pairs, witnesses):
    """Pick a witness maximal in the scope order; ties go by label order."""
    best = None
    for candidate in sorted(witnesses):
        dominated = any(other != candidate
                        and (candidate[0], other[0]) in pairs
                        for other in witnesses)
        if not dominated:
            best = candidate
            break
    return best if best is not None else sorted(witnesses)[0]


# ---------------------------------------------------------------------------
# per-branch UR state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class URState:
    ur: UR
    extra: tuple = ()          # constraint pairs added by resolution steps
    commitments: tuple = ()    # (hole, label) fillers fixed so far

    def with_extra(self, pair):
        extra = tuple(sorted(set(self.extra) | {pair}))
        return URState(self.ur, extra, self.commitments)

    def commit(self, hole, label):
        marks = tuple(sorted(set(self.commitments) | {(hole, label)}))
        return URState(self.ur, self.extra, marks)

    def commit_all(self, inst):
        marks = set(self.commitments)
        marks.update((int(h[1:]), l) for h, l in inst.assignment)
        return URState(self.ur, self.extra, tuple(sorted(marks)))

    def refined(self):
        return self.ur.with_constraints(self.extra)

    def describe(self):
        parts = ["#%d:=%s" % (h, l) for h, l in self.commitments]
        parts += ["%s<=%s" % (a, b) for a, b in self.extra]
        return "; ".join(parts) if parts else "open"


@lru_cache(maxsize=4096)
def survivors(state):
    """Instantiations of the refined UR consistent with the commitments."""
    try:
        refined = state.refined()
    except URError:
        return ()
    out = []
    for inst in instantiations(refined):
        if all(inst.get(h) == l for h, l in state.commitments):
            out.append(inst)
    return tuple(out)


def candidates(state, hole):
    """Labels some surviving instantiation plugs directly into ``hole``."""
    return sorted({inst.get(hole) for inst in survivors(state)})


@lru_cache(maxsize=4096)
def decision_pairs(state):
    """Scope facts derivable from constraints plus commitments.

    Committed fillers are folded in as constraints, and two propagation
    steps run to a fixpoint: material inside a committed hole is inside
    its filler, and material strictly inside a single-holed label is
    inside that label's hole.
    """
    ur = state.refined()
    elements = _order_elements(ur)
    pairs = set(ur.constraints)
    pairs.update((l, hole_key(h)) for h, l in state.commitments)
    single_hole = {}
    for label in ur.labels:
        holes = set(_holes_of(ur.lhf[label]))
        if len(holes) == 1:
            single_hole[label] = hole_key(holes.pop())
    fillers = {hole_key(h): l for h, l in state.commitments}
    while True:
        pairs = set(close_constraints(tuple(pairs), elements))
        fresh = set()
        for a, b in pairs:
            if a == b:
                continue
            if b in single_hole and a != single_hole[b]:
                fresh.add((a, single_hole[b]))
            if b in fillers and a != fillers[b]:
                fresh.add((a, fillers[b]))
        if fresh <= pairs:
            return frozenset(pairs)
        pairs |= fresh


def state_definite(state, label, hole=None):
    """Definiteness against everything the branch has settled so far."""
    formula = state.ur.lhf[label]
    if not _holes_of(formula):
        return True
    hole = _label_hole(state.ur, label, hole)
    return not _unordered_witnesses(state.ur, label, hole,
                                    decision_pairs(state))


# ---------------------------------------------------------------------------
# goal payloads and contexts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HoleGoal:
    """A hole whose filler the branch still has to settle."""
    instance: int
    hole: int
    pending: tuple     # (variable name, term) pairs, applied in order

    def __str__(self):
        return "#%d" % self.hole

    def rename(self, mapping):
        pending = tuple((name, apply_subst(term, mapping))
                        for name, term in self.pending)
        return HoleGoal(self.instance, self.hole, pending)

    def free_vars(self):
        return _term_vars(self.pending)


@dataclass(frozen=True)
class HoleCtx:
    """Rides along with formulas that still contain holes."""
    instance: int
    pending: tuple

    def substituted(self, name, term):
        return HoleCtx(self.instance, self.pending + ((name, term),))

    def rename(self, mapping):
        pending = tuple((name, apply_subst(term, mapping))
                        for name, term in self.pending)
        return HoleCtx(self.instance, pending)

    def pending_vars(self):
        return [Var(name) for name in sorted(_term_vars(self.pending))]

    def free_vars(self):
        return _term_vars(self.pending)


def _term_vars(pending):
    names = set()

    def walk(term):
        if isinstance(term, Var):
            names.add(term.name)
        elif hasattr(term, "args"):
            for arg in term.args:
                walk(arg)

    for _, term in pending:
        walk(term)
    return names


def _materialize(formula, pending):
    for name, term in pending:
        formula = substitute(formula, name, term)
    return formula


# ---------------------------------------------------------------------------
# the handler
# ---------------------------------------------------------------------------

class PartialHandler(PlainHandler):
    name = "tcup"

    def sign_for(self, base, payload):
        if isinstance(payload, HoleGoal):
            return base + "u"
        return base

    def check_input(self, formula, role):
        return None

    def formula_ctx(self, ctx, formula):
        if ctx is not None and contains_hole(formula):
            return ctx
        return None

    def classify(self, sign, payload, ctx, branch):
        if isinstance(payload, (URNode, Hole)):
            return CLASS_COMMIT
        if isinstance(payload, HoleGoal):
            state = branch.ur_instances[payload.instance]
            found = candidates(state, payload.hole)
            if len(found) <= 1:
                return CLASS_COMMIT
            base = sign[0]
            if self._designated(state, found, base) is not None:
                return CLASS_PREFER
            if self._resolvable(state, found, base) is not None:
                return CLASS_RESOLVE
            return CLASS_TOTAL
        raise CalculusError("cannot classify %r" % (payload,))

    def expand(self, engine, branch, item, cls):
        payload = item.payload
        if isinstance(payload, URNode):
            return self._interface(engine, item)
        if isinstance(payload, Hole):
            return self._resign(item)
        return self._scope_step(engine, branch, item)

    # -- interface rules ---------------------------------------------------

    def _interface(self, engine, item):
        ur = item.payload.ur
        instance = engine.fresh_instance()
        state = URState(ur)
        goal = HoleGoal(instance, ur.top_hole, ())
        child = ChildSpec(item.sign + "u", goal, ctx=None, instance=instance,
                          state_note=state.describe())
        return [BranchSpec("%s:UR" % item.sign, (child,),
                           instance_state=((instance, state),))]

    def _resign(self, item):
        ctx = item.ctx
        if ctx is None:
            raise CalculusError("hole #%d outside any UR" % item.payload.index)
        goal = HoleGoal(ctx.instance, item.payload.index, ctx.pending)
        child = ChildSpec(item.sign + "u", goal, ctx=None,
                          instance=ctx.instance)
        return [BranchSpec("%s:h" % item.sign, (child,))]

    # -- scope rules ---------------------------------------------------------

    def _scope_step(self, engine, branch, item):
        goal = item.payload
        state = branch.ur_instances[goal.instance]
        alive = survivors(state)
        if not alive:
            raise CalculusError("UR admits no disambiguation")
        found = candidates(state, goal.hole)
        base = item.sign[0]
        if len(found) == 1:
            return self._commit(state, goal, item, found[0])
        designated = self._designated(state, found, base)
        if designated is not None:
            return self._prefer(state, goal, item, found, designated)
        resolution = self._resolvable(state, found, base)
        if resolution is not None:
            return self._resolve(state, goal, item, resolution)
        return self._total(state, goal, item, alive)

    def _commit(self, state, goal, item, label):
        new_state = state.commit(goal.hole, label)
        material = _materialize(state.ur.lhf[label], goal.pending)
        ctx = (HoleCtx(goal.instance, goal.pending)
               if contains_hole(material) else None)
        child = ChildSpec(item.sign[0], material, ctx=ctx,
                          instance=goal.instance,
                          state_note=new_state.describe())
        return [BranchSpec("%s:up" % item.sign, (child,),
                           instance_state=((goal.instance, new_state),))]

    def _designated(self, state, found, base):
        force = "forall" if base == "T" else "exists"
        for label in found:
            formula = state.ur.lhf[label]
            if special_force(formula) != force:
                continue
            if state_definite(state, label, special_hole(formula)):
                return label
        return None

    def _prefer(self, state, goal, item, found, designated):
        rule = "%s:%s" % (item.sign,
                          "forall" if item.sign[0] == "T" else "exists")
        order = [designated] + [l for l in found if l != designated]
        specs = []
        for label in order:
            new_state = state.commit(goal.hole, label)
            if not survivors(new_state):
                continue
            material = _materialize(state.ur.lhf[label], goal.pending)
            ctx = (HoleCtx(goal.instance, goal.pending)
                   if contains_hole(material) else None)
            child = ChildSpec(item.sign[0], material, ctx=ctx,
                              instance=goal.instance,
                              state_note=new_state.describe())
            specs.append(BranchSpec(rule, (child,),
                                    instance_state=((goal.instance,
                                                     new_state),),
                                    rename=True))
        return specs

    def _resolvable(self, state, found, base):
        """First indefinite special quantifier that splits the readings."""
        force = "forall" if base == "T" else "exists"
        for label in found:
            formula = state.ur.lhf[label]
            if special_force(formula) != force:
                continue
            hole = special_hole(formula)
            if state_definite(state, label, hole):
                continue
            open_pairs = _unordered_witnesses(state.ur, label, hole,
                                              decision_pairs(state))
            if not open_pairs:
                continue
            witness_label, witness_hole = _maximal_witness(
                decision_pairs(state), open_pairs)
            left = state.with_extra((witness_label, hole_key(hole)))
            right = state.with_extra((label, hole_key(witness_hole)))
            total = len(survivors(state))
            kept = len(survivors(left)) + len(survivors(right))
            if not survivors(left) or not survivors(right) or kept != total:
                continue
            return left, right
        return None

    def _resolve(self, state, goal, item, resolution):
        left, right = resolution
        rule = "%s:pi" % item.sign
        specs = []
        for side in (left, right):
            child = ChildSpec(item.sign, HoleGoal(goal.instance, goal.hole,
                                                  goal.pending),
                              instance=goal.instance,
                              state_note=side.describe())
            specs.append(BranchSpec(rule, (child,),
                                    instance_state=((goal.instance, side),),
                                    rename=True))
        return specs

    def _total(self, state, goal, item, alive):
        rule = "%s:UR" % item.sign
        readings = []
        for inst in alive:
            material = _materialize(plug(state.refined(), inst, goal.hole),
                                    goal.pending)
            readings.append((print_uformula(material), material, inst))
        readings.sort(key=lambda entry: (entry[0], str(entry[2])))
        specs = []
        for i, (_, material, inst) in enumerate(readings):
            new_state = state.commit_all(inst)
            child = ChildSpec(item.sign[0], material, ctx=None, reading=i,
                              instance=goal.instance,
                              state_note=new_state.describe())
            specs.append(BranchSpec(rule, (child,),
                                    instance_state=((goal.instance,
                                                     new_state),),
                                    rename=True))
        return specs


def prove_tcup(formula, limits=None):
    """Try to prove a u-formula valid, postponing disambiguation."""
    return prove_tcup_sequent([], formula, limits)


def prove_tcup_sequent(premises, conclusion, limits=None):
    handler = PartialHandler()
    limits = limits or SearchLimits()
    return run_prover(handler, _prepare(handler, list(premises), conclusion),
                      limits)
