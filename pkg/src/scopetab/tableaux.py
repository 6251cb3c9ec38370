"""Free-variable tableaux for classical first-order logic.

The prover works in two phases.  The expansion phase decomposes signed
formulas under fixed bounds: every universal quantifier is instantiated
with fresh variables up to a multiplicity, existential witnesses get
Skolem terms over the free variables in scope, and a branch stops early
when it contains a syntactically identical T/F atom pair.  The closure
phase then searches for one substitution that closes every branch at
once, trying atom pairs per branch and backtracking on conflicts.  The
whole search is wrapped in iterative deepening over the multiplicity.

Scope-ambiguous inputs are handled by plug-in handlers (see the total
and partial disambiguation modules); this module provides the handler
for plain formulas and the shared machinery.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .prooftree import Closure, Node, ProofResult, SearchLimits, Tableau
from .syntax import (And, Atom, Const, Exists, ForAll, Func, Hole, Implies,
                     Not, Or, URNode, Var, contains_hole, contains_ur,
                     free_variables, substitute)
from .unification import apply_subst, subst_formula, unify_atoms

# priority classes for the expansion agenda
CLASS_ALPHA = 0   # non-branching decompositions and existential witnesses
CLASS_BETA = 1    # branching decompositions
CLASS_GAMMA = 2   # universal instantiations (repeatable)
CLASS_UR = 3      # handler-specific scope rules start here


class CalculusError(ValueError):
    """Raised when an input does not belong to the selected calculus."""


def flip(base):
    return "F" if base == "T" else "T"


def base_sign(sign):
    return sign[0]


# ---------------------------------------------------------------------------
# agenda items and branches
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Item:
    """A branch-local view of a node still awaiting expansion.

    The payload may differ from the node's displayed payload: when a
    branch split renames free variables, the node keeps its original
    form and the item carries the renamed copy.
    """
    sign: str
    payload: object
    node_id: int
    ctx: object = None        # handler context for hole-carrying payloads
    gamma_key: int = 0        # identity for per-branch multiplicity counts

    def rename(self, subst):
        payload = self.payload
        ctx = self.ctx
        if isinstance(payload, (Atom, Hole, URNode, Not, And, Or, Implies,
                                ForAll, Exists)):
            payload = subst_formula(payload, subst)
        elif hasattr(payload, "rename"):
            payload = payload.rename(subst)
        if ctx is not None and hasattr(ctx, "rename"):
            ctx = ctx.rename(subst)
        return Item(self.sign, payload, self.node_id, ctx, self.gamma_key)


class Branch:
    def __init__(self, branch_id, leaf):
        self.id = branch_id
        self.leaf = leaf                # node id the branch grows from
        self.agenda = []                # heap of (class, seq, Item)
        self.atoms = []                 # (sign, Atom, node_id) in order
        self.gamma_counts = {}
        self.ur_instances = {}          # instance id -> handler state
        self.closed_pair = None         # (t_node, f_node) syntactic close
        self.gamma_capped = False
        self.truncated = False
        self.length = 0

    def clone(self, branch_id):
        twin = Branch(branch_id, self.leaf)
        twin.agenda = list(self.agenda)
        twin.atoms = list(self.atoms)
        twin.gamma_counts = dict(self.gamma_counts)
        twin.ur_instances = dict(self.ur_instances)
        twin.gamma_capped = self.gamma_capped
        twin.length = self.length
        return twin

    def free_vars(self):
        names = set()
        for _, atom, _ in self.atoms:
            names.update(free_variables(atom))
        for _, _, item in self.agenda:
            payload = item.payload
            if isinstance(payload, (Atom, Hole, URNode, Not, And, Or,
                                    Implies, ForAll, Exists)):
                names.update(free_variables(payload))
            elif hasattr(payload, "free_vars"):
                names.update(payload.free_vars())
            if item.ctx is not None and hasattr(item.ctx, "free_vars"):
                names.update(item.ctx.free_vars())
        return names


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

class PlainHandler:
    """Classical calculus: no scope rules, no u-signs."""

    name = "tc"

    def sign_for(self, base, payload):
        return base

    def check_input(self, formula, role):
        if contains_ur(formula) or contains_hole(formula):
            raise CalculusError(
                "%s is scope-ambiguous: URs require tcu/tcup" % role)

    def classify(self, sign, payload, ctx, branch):
        raise CalculusError("unexpected payload %r in plain tableaux" % (payload,))

    def expand(self, engine, branch, item, cls):
        raise CalculusError("unexpected payload in plain tableaux")

    def formula_ctx(self, ctx, formula):
        return None


@dataclass(frozen=True)
class ChildSpec:
    sign: str
    payload: object
    ctx: object = None
    reading: int = None
    instance: int = None
    state_note: str = None


@dataclass(frozen=True)
class BranchSpec:
    rule: str
    children: tuple           # tuple of ChildSpec, stacked on one branch
    instance_state: tuple = ()  # (instance_id, new_state) updates
    rename: bool = False      # give the branch its own free variables


# ---------------------------------------------------------------------------
# the engine
# ---------------------------------------------------------------------------

class Engine:
    def __init__(self, handler, limits, multiplicity):
        self.handler = handler
        self.limits = limits
        self.multiplicity = multiplicity
        self.tableau = Tableau()
        self.next_node = 1
        self.next_seq = 1
        self.next_var = 1
        self.next_skolem = 1
        self.next_branch = 1
        self.next_instance = 1
        self.finished = []
        self.rule_counts = {}   # nodes produced, by rule
        self.app_counts = {}    # rule applications

    # -- fresh symbols ----------------------------------------------------

    def fresh_var(self):
        name = "X%d" % self.next_var
        self.next_var += 1
        return Var(name)

    def skolem_term(self, args):
        name = "sk%d" % self.next_skolem
        self.next_skolem += 1
        if not args:
            return Const(name)
        return Func(name, tuple(args))

    def fresh_instance(self):
        out = self.next_instance
        self.next_instance += 1
        return out

    # -- tree and agenda bookkeeping ---------------------------------------

    def new_branch(self, leaf):
        branch = Branch(self.next_branch, leaf)
        self.next_branch += 1
        return branch

    def attach(self, branch, sign, payload, rule, reading=None,
               instance=None, state_note=None):
        node = Node(self.next_node, branch.leaf, sign, payload, rule,
                    reading=reading, instance=instance, state_note=state_note)
        self.next_node += 1
        self.tableau.add(node)
        self.rule_counts[rule] = self.rule_counts.get(rule, 0) + 1
        branch.leaf = node.id
        branch.length += 1
        if isinstance(payload, Atom):
            self.note_atom(branch, sign, payload, node.id)
        return node

    def note_atom(self, branch, sign, atom, node_id):
        if branch.closed_pair is None:
            want = flip(base_sign(sign))
            for other_sign, other, other_id in branch.atoms:
                if base_sign(other_sign) == want and other == atom:
                    pair = ((node_id, other_id) if base_sign(sign) == "T"
                            else (other_id, node_id))
                    branch.closed_pair = pair
                    break
        branch.atoms.append((sign, atom, node_id))

    def enqueue(self, branch, item):
        cls = self.classify(item, branch)
        if cls is None:
            return
        heapq.heappush(branch.agenda, (cls, self.next_seq, item))
        self.next_seq += 1

    def classify(self, item, branch):
        payload = item.payload
        sign = base_sign(item.sign)
        if isinstance(payload, Atom):
            return None
        if isinstance(payload, Not):
            return CLASS_ALPHA
        if isinstance(payload, And):
            return CLASS_ALPHA if sign == "T" else CLASS_BETA
        if isinstance(payload, Or):
            return CLASS_BETA if sign == "T" else CLASS_ALPHA
        if isinstance(payload, Implies):
            return CLASS_BETA if sign == "T" else CLASS_ALPHA
        if isinstance(payload, ForAll):
            return CLASS_GAMMA if sign == "T" else CLASS_ALPHA
        if isinstance(payload, Exists):
            return CLASS_ALPHA if sign == "T" else CLASS_GAMMA
        return self.handler.classify(item.sign, payload, item.ctx, branch)

    def spawn(self, branch, sign, payload, ctx, rule, reading=None,
              instance=None, state_note=None):
        """Attach a node and queue the matching agenda item."""
        shown = self.handler.sign_for(sign, payload) if len(sign) == 1 else sign
        node = self.attach(branch, shown, payload, rule, reading=reading,
                           instance=instance, state_note=state_note)
        item = Item(shown, payload, node.id, ctx, gamma_key=node.id)
        self.enqueue(branch, item)
        return node

    # -- expansion ---------------------------------------------------------

    def run(self, initial):
        """Expand from ``initial`` (sign, formula) pairs; return branches."""
        first = self.new_branch(0)
        for sign, formula in initial:
            rule = "premise" if sign == "T" else "goal"
            ctx = self.handler.formula_ctx(None, formula)
            self.spawn(first, sign, formula, ctx, rule)
        stack = [first]
        while stack:
            branch = stack.pop()
            grown = self.saturate(branch)
            stack.extend(reversed(grown))
        return self.finished

    def saturate(self, branch):
        while True:
            if branch.closed_pair is not None or not branch.agenda:
                self.finished.append(branch)
                return []
            if (branch.length >= self.limits.max_depth
                    or self.tableau.node_count() >= self.limits.max_nodes):
                branch.truncated = True
                self.finished.append(branch)
                return []
            cls, _, item = heapq.heappop(branch.agenda)
            if cls >= CLASS_UR:
                specs = self.handler.expand(self, branch, item, cls)
                grown = self.apply_specs(branch, item, specs)
            else:
                grown = self.step(branch, item)
            if grown is not None:
                return grown

    def step(self, branch, item):
        """Apply one classical rule; return new branches on a split."""
        payload = item.payload
        sign = base_sign(item.sign)
        ctx = item.ctx
        if isinstance(payload, Not):
            spec = BranchSpec("%s:not" % sign,
                              (self.child(flip(sign), payload.body, ctx),))
            return self.apply_specs(branch, item, [spec])
        if isinstance(payload, And):
            return self.binary(branch, item, "and", payload,
                               tee=(sign == "T"),
                               left_sign=sign, right_sign=sign)
        if isinstance(payload, Or):
            return self.binary(branch, item, "or", payload,
                               tee=(sign == "F"),
                               left_sign=sign, right_sign=sign)
        if isinstance(payload, Implies):
            return self.binary(branch, item, "imp", payload,
                               tee=(sign == "F"),
                               left_sign=flip(sign), right_sign=sign)
        if isinstance(payload, ForAll):
            if sign == "T":
                return self.gamma(branch, item, payload.var, payload.body)
            return self.delta(branch, item, payload.var, payload.body)
        if isinstance(payload, Exists):
            if sign == "T":
                return self.delta(branch, item, payload.var, payload.body)
            return self.gamma(branch, item, payload.var, payload.body)
        raise CalculusError("cannot expand %r" % (payload,))

    def child(self, sign, formula, ctx, reading=None):
        return ChildSpec(sign, formula,
                         self.handler.formula_ctx(ctx, formula),
                         reading=reading)

    def binary(self, branch, item, tag, payload, tee, left_sign, right_sign):
        sign = base_sign(item.sign)
        rule = "%s:%s" % (sign, tag)
        left = self.child(left_sign, payload.left, item.ctx)
        right = self.child(right_sign, payload.right, item.ctx)
        if tee:
            return self.apply_specs(branch, item, [BranchSpec(rule, (left, right))])
        return self.apply_specs(branch, item,
                                [BranchSpec(rule, (left,)),
                                 BranchSpec(rule, (right,))])

    def gamma(self, branch, item, var, body):
        sign = base_sign(item.sign)
        rule = "%s:%s" % (sign, "forall" if sign == "T" else "exists")
        self.count_application(rule)
        fresh = self.fresh_var()
        produced = substitute(body, var, fresh)
        ctx = item.ctx
        if ctx is not None and hasattr(ctx, "substituted"):
            ctx = ctx.substituted(var, fresh)
        count = branch.gamma_counts.get(item.gamma_key, 0) + 1
        branch.gamma_counts[item.gamma_key] = count
        node = self.attach(branch, self.handler.sign_for(sign, produced),
                           produced, rule)
        self.enqueue(branch, Item(node.sign, produced, node.id, ctx,
                                  gamma_key=node.id))
        if count < self.multiplicity:
            self.enqueue(branch, Item(item.sign, item.payload, item.node_id,
                                      item.ctx, gamma_key=item.gamma_key))
        else:
            branch.gamma_capped = True
        return None

    def delta(self, branch, item, var, body):
        sign = base_sign(item.sign)
        rule = "%s:%s" % (sign, "exists" if sign == "T" else "forall")
        self.count_application(rule)
        names = sorted(free_variables(item.payload))
        args = [Var(n) for n in names]
        ctx = item.ctx
        if ctx is not None and contains_hole(item.payload):
            for extra in ctx.pending_vars():
                if extra.name not in names:
                    args.append(extra)
                    names.append(extra.name)
        witness = self.skolem_term(args)
        produced = substitute(body, var, witness)
        if ctx is not None and hasattr(ctx, "substituted"):
            ctx = ctx.substituted(var, witness)
        node = self.attach(branch, self.handler.sign_for(sign, produced),
                           produced, rule)
        self.enqueue(branch, Item(node.sign, produced, node.id, ctx,
                                  gamma_key=node.id))
        return None

    def count_application(self, rule):
        self.app_counts[rule] = self.app_counts.get(rule, 0) + 1

    def apply_specs(self, branch, item, specs):
        """Grow ``branch`` along ``specs``; split and clone when several."""
        self.count_application(specs[0].rule)
        if len(specs) == 1:
            self.grow(branch, specs[0])
            return None
        out = []
        for spec in specs:
            twin = branch.clone(self.next_branch)
            self.next_branch += 1
            self.grow(twin, spec)
            out.append(twin)
        return out

    def grow(self, branch, spec):
        for instance, state in spec.instance_state:
            branch.ur_instances[instance] = state
        mapping = {}
        if spec.rename:
            for name in sorted(branch.free_vars()):
                mapping[name] = self.fresh_var()
        if mapping:
            self.rename_branch(branch, mapping)
        for child in spec.children:
            payload = child.payload
            ctx = child.ctx
            if mapping:
                payload = self.rename_payload(payload, mapping)
                if ctx is not None and hasattr(ctx, "rename"):
                    ctx = ctx.rename(mapping)
            sign = child.sign
            if len(sign) == 1:
                sign = self.handler.sign_for(sign, payload)
            node = self.attach(branch, sign, payload, spec.rule,
                               reading=child.reading,
                               instance=child.instance,
                               state_note=child.state_note)
            self.enqueue(branch, Item(sign, payload, node.id, ctx,
                                      gamma_key=node.id))

    def rename_payload(self, payload, mapping):
        if isinstance(payload, (Atom, Hole, URNode, Not, And, Or, Implies,
                                ForAll, Exists)):
            return subst_formula(payload, mapping)
        if hasattr(payload, "rename"):
            return payload.rename(mapping)
        return payload

    def rename_branch(self, branch, mapping):
        """Refresh a cloned branch's free variables.

        Split-off branches are independent sub-proofs, so their variable
        instantiations must not be entangled with the sibling's.  The
        tree nodes keep their original display; only the branch views
        (pending atoms and agenda) are renamed.
        """
        branch.atoms = [(s, subst_formula(a, mapping), i)
                        for s, a, i in branch.atoms]
        branch.agenda = [(c, q, it.rename(mapping))
                         for c, q, it in branch.agenda]
        heapq.heapify(branch.agenda)


# ---------------------------------------------------------------------------
# closure search
# ---------------------------------------------------------------------------

CLOSURE_BUDGET = 200000   # unification attempts per closure search

CAPPED = object()         # closure search ran out of budget


def close_branches(branches, budget=CLOSURE_BUDGET):
    """Find one substitution closing all branches.

    Returns ``(closures, substitution)`` on success, ``None`` when no
    closure exists, and the ``CAPPED`` sentinel when the search budget
    ran out before the question was settled.

    Branches already closed syntactically need no work.  For the rest,
    candidate (T-atom, F-atom) pairs are tried under one shared
    substitution with backtracking; branches with the fewest candidates
    go first, and a branch with no individually unifiable pair rules
    out closure immediately.
    """
    closures = []
    pending = []
    probes = 0
    for branch in branches:
        if branch.closed_pair is not None:
            closures.append(Closure(branch.id, *branch.closed_pair))
            continue
        pairs = []
        atoms = branch.atoms
        for i, (sign1, atom1, id1) in enumerate(atoms):
            for sign2, atom2, id2 in atoms[i + 1:]:
                if base_sign(sign1) == base_sign(sign2):
                    continue
                probes += 1
                if probes > budget:
                    return CAPPED
                if unify_atoms(atom1, atom2, {}) is None:
                    continue
                if base_sign(sign1) == "T":
                    pairs.append((atom1, atom2, id1, id2))
                else:
                    pairs.append((atom2, atom1, id2, id1))
        if not pairs:
            return None
        pending.append((branch, pairs))
    pending.sort(key=lambda entry: len(entry[1]))

    picked = []
    spent = [0]

    def attempt(index, subst):
        if index == len(pending):
            return subst
        branch, pairs = pending[index]
        for t_atom, f_atom, t_id, f_id in pairs:
            spent[0] += 1
            if spent[0] > budget:
                raise _Budget()
            mgu = unify_atoms(t_atom, f_atom, subst)
            if mgu is None:
                continue
            picked.append(Closure(branch.id, t_id, f_id))
            final = attempt(index + 1, mgu)
            if final is not None:
                return final
            picked.pop()
        return None

    try:
        final = attempt(0, {})
    except _Budget:
        return CAPPED
    if final is None:
        return None
    return closures + picked, final


class _Budget(Exception):
    pass


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def run_prover(handler, initial, limits):
    """Iterative deepening over the universal multiplicity."""
    last = None
    for mult in range(1, limits.gamma_multiplicity + 1):
        engine = Engine(handler, limits, mult)
        branches = engine.run(initial)
        outcome = close_branches(branches)
        bounded = any(b.gamma_capped or b.truncated
                      for b in branches
                      if b.closed_pair is None)
        stats = {
            "nodes": engine.tableau.node_count(),
            "branches": len(branches),
            "rules": dict(sorted(engine.rule_counts.items())),
            "applications": dict(sorted(engine.app_counts.items())),
        }
        if outcome is CAPPED:
            return ProofResult(False, handler.name, engine.tableau, limits,
                               mult, False, stats)
        if outcome is not None:
            closures, subst = outcome
            engine.tableau.closures = closures
            engine.tableau.substitution = {
                k: str(apply_subst(v, subst)) for k, v in subst.items()}
            return ProofResult(True, handler.name, engine.tableau, limits,
                               mult, True, stats)
        last = ProofResult(False, handler.name, engine.tableau, limits,
                           mult, not bounded, stats)
        if last.decisive:
            break
    return last


def _prepare(handler, premises, conclusion):
    initial = []
    for i, premise in enumerate(premises):
        handler.check_input(premise, "premise %d" % (i + 1))
        initial.append(("T", premise))
    if conclusion is not None:
        handler.check_input(conclusion, "conclusion")
        initial.append(("F", conclusion))
    if not initial:
        raise CalculusError("nothing to prove")
    return initial


def prove_tc(formula, limits=None):
    """Try to prove a plain formula valid."""
    return prove_tc_sequent([], formula, limits)


def prove_tc_sequent(premises, conclusion, limits=None):
    handler = PlainHandler()
    limits = limits or SearchLimits()
    return run_prover(handler, _prepare(handler, list(premises), conclusion),
                      limits)
