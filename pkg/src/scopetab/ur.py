"""Underspecified representations of quantifier scope.

A UR packages the scope-neutral material of a sentence: labeled h-formulas,
a set of holes, and a partial order saying which pieces must end up inside
which.  Labels name the h-formulas; holes mark the positions into which
labeled material can be plugged.  An element ``k <= k'`` of the constraint
set reads "k must be a subexpression of k'".

Constraint elements are written as strings: label names as given (``l1``)
and holes as ``#<index>`` (``#0``).  The constraint set is kept closed under
reflexivity and transitivity and is checked for antisymmetry; the implicit
containment of a hole in the formula it occurs in is part of the order.

Total disambiguation enumerates instantiations: bijections between the
assignable holes (those occurring in some h-formula, plus the top hole) and
the pluggable labels (those whose h-formula is not itself a bare hole).  An
instantiation must (a) plug into a finite tree reaching all material,
(b) satisfy every constraint in that tree, and (c) order every pair of
labels whose join is defined.
"""

from __future__ import annotations

import functools
import itertools
import warnings
from dataclasses import dataclass

from .syntax import (Atom, BINARY, Hole, Not, QUANTIFIERS, URNode,
                     contains_ur, print_uformula)


class URError(Exception):
    """Malformed underspecified representation."""


class ConstraintCycleError(URError):
    """Antisymmetry violation: two distinct elements below each other."""


class URWarning(UserWarning):
    pass


def hole_key(index):
    return "#%d" % index


def _is_hole_key(element):
    return element.startswith("#")


# ==== constraint closure ====================================================


def close_constraints(pairs, elements=()):
    """Least reflexive-transitive superset of ``pairs``.

    ``elements`` adds carrier members that appear in no pair (they still get
    their reflexive pair).  Raises ConstraintCycleError when the closure
    would relate two distinct elements in both directions.
    """
    carrier = set(elements)
    for a, b in pairs:
        carrier.add(a)
        carrier.add(b)
    below = {e: {e} for e in carrier}  # below[b]: all a with a <= b
    for a, b in pairs:
        below[b].add(a)
    changed = True
    while changed:
        changed = False
        for b in carrier:
            extra = set()
            for a in below[b]:
                extra |= below[a]
            if not extra <= below[b]:
                below[b] |= extra
                changed = True
    closed = set()
    for b in carrier:
        for a in below[b]:
            if a != b and b in below[a]:
                raise ConstraintCycleError(
                    "constraint cycle between %s and %s" % tuple(sorted((a, b))))
            closed.add((a, b))
    return frozenset(closed)


# ==== the UR proper =========================================================


def _collect_holes(formula, acc):
    if isinstance(formula, Hole):
        acc.append(formula.index)
    elif isinstance(formula, Atom):
        pass
    elif isinstance(formula, Not):
        _collect_holes(formula.body, acc)
    elif isinstance(formula, BINARY):
        _collect_holes(formula.left, acc)
        _collect_holes(formula.right, acc)
    elif isinstance(formula, QUANTIFIERS):
        _collect_holes(formula.body, acc)
    elif isinstance(formula, URNode):
        raise URError("UR inside an h-formula")
    else:
        raise TypeError("not a formula: %r" % (formula,))


def _binders(formula, acc):
    if isinstance(formula, QUANTIFIERS):
        acc.append(formula.var)
        _binders(formula.body, acc)
    elif isinstance(formula, Not):
        _binders(formula.body, acc)
    elif isinstance(formula, BINARY):
        _binders(formula.left, acc)
        _binders(formula.right, acc)


@dataclass(frozen=True)
class UR:
    """Labeled h-formulas + holes + scope constraints, with a top hole."""

    entries: tuple          # ((label, h-formula), ...) in declaration order
    given: tuple            # constraint pairs as declared
    holes: frozenset        # hole keys, including declared-but-unused ones
    constraints: frozenset  # closed constraint set over labels and holes
    top_hole: int

    @classmethod
    def build(cls, entries, constraints, declared_holes=()):
        entries = tuple((label, formula) for label, formula in entries)
        given = tuple((str(a), str(b)) for a, b in constraints)

        labels = [label for label, _ in entries]
        if len(set(labels)) != len(labels):
            dup = sorted({l for l in labels if labels.count(l) > 1})
            raise URError("duplicate label %s" % ", ".join(dup))

        occurring = []
        structural = []
        for label, formula in entries:
            if contains_ur(formula):
                raise URError("label %s embeds a UR" % label)
            found = []
            _collect_holes(formula, found)
            for index in found:
                if index in occurring or found.count(index) > 1:
                    raise URError("hole #%d occurs more than once" % index)
                structural.append((hole_key(index), label))
            occurring.extend(found)

        mentioned = set()
        for a, b in given:
            for element in (a, b):
                if _is_hole_key(element):
                    if not element[1:].isdigit():
                        raise URError("bad hole %s" % element)
                    mentioned.add(element)
                elif element not in labels:
                    raise URError("constraint references undeclared label %s" % element)

        occurring_keys = {hole_key(i) for i in occurring}
        carrier = set(labels) | occurring_keys | mentioned
        closed = close_constraints(tuple(given) + tuple(structural), carrier)

        top = cls._find_top(labels, dict(entries), carrier, closed)

        unused = sorted((mentioned | set(declared_holes)) - occurring_keys - {hole_key(top)})
        if unused:
            warnings.warn("unused hole%s %s" % ("s" if len(unused) > 1 else "",
                                                ", ".join(unused)), URWarning)

        holes = frozenset(occurring_keys | mentioned | set(declared_holes) | {hole_key(top)})
        return cls(entries, given, holes, closed, top)

    @staticmethod
    def _find_top(labels, lhf, carrier, closed):
        maximal = [e for e in sorted(carrier)
                   if not any(a == e and b != e for a, b in closed)]
        tops = []
        for element in maximal:
            if _is_hole_key(element):
                tops.append(int(element[1:]))
            elif isinstance(lhf[element], Hole):
                tops.append(lhf[element].index)
            else:
                raise URError("h-formula %s is unconstrained" % element)
        if len(tops) != 1:
            raise URError("UR must have a unique top hole, found %d" % len(tops))
        return tops[0]

    # -- basic views ---------------------------------------------------

    @property
    def lhf(self):
        return dict(self.entries)

    @property
    def labels(self):
        return tuple(label for label, _ in self.entries)

    def pluggable_labels(self):
        """Labels carrying material, i.e. whose formula is not a bare hole."""
        return tuple(label for label, formula in self.entries
                     if not isinstance(formula, Hole))

    def assignable_holes(self):
        """Hole keys an instantiation must fill, sorted by index."""
        occurring = []
        for _, formula in self.entries:
            _collect_holes(formula, occurring)
        keys = {hole_key(i) for i in occurring} | {hole_key(self.top_hole)}
        return tuple(sorted(keys, key=lambda k: int(k[1:])))

    def bound_names(self):
        acc = []
        for _, formula in self.entries:
            _binders(formula, acc)
        return tuple(dict.fromkeys(acc))

    def map_formulas(self, fn):
        return UR.build([(label, fn(formula)) for label, formula in self.entries],
                        self.given,
                        declared_holes=tuple(self.holes))

    def with_constraints(self, extra):
        """Same UR with additional constraint pairs (re-closed)."""
        return UR.build(self.entries, tuple(self.given) + tuple(extra),
                        declared_holes=tuple(self.holes))

    def block_text(self):
        parts = ["%s: %s" % (label, print_uformula(formula))
                 for label, formula in self.entries]
        if self.given:
            pairs = " ; ".join("%s <= %s" % pair for pair in self.given)
            parts.append("constraints { %s }" % pairs)
        return "ur { %s }" % " ; ".join(parts)

    def __str__(self):
        return self.block_text()


# ==== joins ================================================================


def join_pairs(elements, pairs, a, b):
    """Greatest common lower bound of two elements in a scope order.

    Returns None both when no common lower bound exists and when the
    maximal common lower bounds are not unique.
    """
    below_a = {x for x, y in pairs if y == a}
    below_b = {x for x, y in pairs if y == b}
    common = below_a & below_b
    maximal = [k for k in common
               if not any(k != m and (k, m) in pairs for m in common)]
    if len(maximal) == 1:
        return maximal[0]
    return None


def join(ur, a, b):
    """Greatest common lower bound of two UR elements, or None."""
    return join_pairs(ur.labels + tuple(sorted(ur.holes)),
                      ur.constraints, a, b)


@functools.lru_cache(maxsize=None)
def _ordered_label_pairs(ur):
    """Label pairs whose join is defined and which must hence be ordered."""
    out = []
    labels = ur.labels
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            if join(ur, a, b) is not None:
                out.append((a, b))
    return tuple(out)


# ==== instantiations ========================================================


@dataclass(frozen=True)
class Instantiation:
    """Bijection from assignable holes to pluggable labels."""

    assignment: tuple  # ((hole key, label), ...) sorted by hole index

    def get(self, hole):
        key = hole if isinstance(hole, str) else hole_key(hole)
        for h, label in self.assignment:
            if h == key:
                return label
        raise KeyError(key)

    def as_dict(self):
        return dict(self.assignment)

    def __str__(self):
        return "{%s}" % "; ".join("%s:=%s" % pair for pair in self.assignment)


def _descendants(ur, assignment):
    """element -> set of elements strictly inside it, or None on a cycle."""
    lhf = ur.lhf
    memo = {}
    in_progress = set()

    def of_label(label):
        if label in memo:
            return memo[label]
        if label in in_progress:
            return None
        in_progress.add(label)
        acc = set()
        found = []
        _collect_holes(lhf[label], found)
        for index in found:
            key = hole_key(index)
            acc.add(key)
            sub = of_hole(key)
            if sub is None:
                return None
            acc |= sub
        in_progress.discard(label)
        memo[label] = acc
        return acc

    def of_hole(key):
        mkey = "hole:" + key
        if mkey in memo:
            return memo[mkey]
        if key not in assignment:
            memo[mkey] = set()
            return memo[mkey]
        label = assignment[key]
        acc = {label}
        sub = of_label(label)
        if sub is None:
            return None
        acc |= sub
        memo[mkey] = acc
        return acc

    desc = {}
    for label, formula in ur.entries:
        d = of_label(label)
        if d is None:
            return None
        desc[label] = d
    for key in ur.holes:
        d = of_hole(key)
        if d is None:
            return None
        desc[key] = d
    return desc


def _satisfies(ur, assignment):
    desc = _descendants(ur, assignment)
    if desc is None:  # cyclic plugging
        return False

    # all material must be reachable from the top hole
    top = hole_key(ur.top_hole)
    reached = desc[top]
    for label in ur.pluggable_labels():
        if label not in reached:
            return False
    for key in assignment:
        if key != top and key not in reached:
            return False

    # (b) every constraint holds as subtree containment; constraints on
    # inert (unassigned, non-occurring) holes are vacuous
    for a, b in ur.constraints:
        if a == b:
            continue
        if _is_hole_key(a) and a not in assignment:
            continue
        if _is_hole_key(b) and b not in assignment:
            continue
        if a not in desc[b]:
            return False

    # (c) labels with a defined join must end up comparable
    rewritten = set()
    for a, b in ur.constraints:
        ra = assignment.get(a, a) if _is_hole_key(a) else a
        rb = assignment.get(b, b) if _is_hole_key(b) else b
        rewritten.add((ra, rb))
    try:
        closed = close_constraints(rewritten)
    except ConstraintCycleError:
        return False
    for a, b in _ordered_label_pairs(ur):
        if (a, b) not in closed and (b, a) not in closed:
            return False
    return True


@functools.lru_cache(maxsize=None)
def instantiations(ur):
    """All admissible instantiations, lexicographic by hole then label."""
    holes = ur.assignable_holes()
    labels = tuple(sorted(ur.pluggable_labels()))
    if len(holes) != len(labels):
        return ()
    out = []
    for perm in itertools.permutations(labels):
        assignment = dict(zip(holes, perm))
        if _satisfies(ur, assignment):
            out.append(Instantiation(tuple(zip(holes, perm))))
    return tuple(out)


# ==== plugging and total disambiguation =====================================


def plug(ur, inst, hole=None):
    """Expand the material at ``hole`` (default: top) into a plain formula.

    Plugging is literal: quantified variables of one label capture free
    occurrences in the material plugged below it, which is the point.
    """
    lhf = ur.lhf
    assignment = inst.as_dict()
    start = hole_key(ur.top_hole if hole is None else hole)

    def expand(formula):
        if isinstance(formula, Hole):
            return expand(lhf[assignment[hole_key(formula.index)]])
        if isinstance(formula, Atom):
            return formula
        if isinstance(formula, Not):
            return Not(expand(formula.body))
        if isinstance(formula, BINARY):
            return type(formula)(expand(formula.left), expand(formula.right))
        if isinstance(formula, QUANTIFIERS):
            return type(formula)(formula.var, expand(formula.body))
        raise TypeError("not an h-formula: %r" % (formula,))

    return expand(Hole(int(start[1:])))


def _sorted_unique(formulas):
    seen = {}
    for f in formulas:
        seen.setdefault(print_uformula(f), f)
    return tuple(seen[key] for key in sorted(seen))


def delta(formula):
    """Total disambiguations of a u-formula, sorted by printed form."""
    if isinstance(formula, Atom):
        return (formula,)
    if isinstance(formula, Hole):
        raise URError("bare hole outside a UR")
    if isinstance(formula, URNode):
        ur = formula.ur
        return _sorted_unique(plug(ur, inst) for inst in instantiations(ur))
    if isinstance(formula, Not):
        return _sorted_unique(Not(d) for d in delta(formula.body))
    if isinstance(formula, BINARY):
        cls = type(formula)
        lefts = delta(formula.left)
        rights = delta(formula.right)
        return _sorted_unique(cls(a, b) for a in lefts for b in rights)
    if isinstance(formula, QUANTIFIERS):
        cls = type(formula)
        return _sorted_unique(cls(formula.var, d) for d in delta(formula.body))
    raise TypeError("not a formula: %r" % (formula,))
