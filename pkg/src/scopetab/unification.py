"""Syntactic first-order unification over tableau terms.

Tableau variables are Var terms introduced by quantifier rules; skolem
applications are Func terms.  Substitutions are plain dicts kept idempotent:
bound values never mention bound variables.
"""

from __future__ import annotations

from .syntax import Atom, Const, Func, Var


def resolve(term, subst):
    """Follow bindings until the head of ``term`` is not a bound variable."""
    while isinstance(term, Var) and term.name in subst:
        term = subst[term.name]
    return term


def apply_subst(term, subst):
    term = resolve(term, subst)
    if isinstance(term, Func):
        return Func(term.name, tuple(apply_subst(a, subst) for a in term.args))
    return term


def _occurs(name, term, subst):
    term = resolve(term, subst)
    if isinstance(term, Var):
        return term.name == name
    if isinstance(term, Func):
        return any(_occurs(name, a, subst) for a in term.args)
    return False


def unify(left, right, subst):
    """Most general unifier extending ``subst``, or None.

    The input substitution is never mutated; on success a new dict is
    returned whose extra bindings are fully resolved against it.
    """
    stack = [(left, right)]
    out = dict(subst)
    while stack:
        a, b = stack.pop()
        a = resolve(a, out)
        b = resolve(b, out)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a.name, b, out):
                return None
            out[a.name] = apply_subst(b, out)
            # keep idempotency: fold the new binding into existing values
            out = {k: (apply_subst(v, out) if k != a.name else v)
                   for k, v in out.items()}
        elif isinstance(b, Var):
            stack.append((b, a))
        elif isinstance(a, Const) and isinstance(b, Const):
            return None  # distinct constants
        elif isinstance(a, Func) and isinstance(b, Func):
            if a.name != b.name or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))
        else:
            return None
    return out


def unify_atoms(left, right, subst):
    """Unify two atomic formulas under ``subst``; None when impossible."""
    if not isinstance(left, Atom) or not isinstance(right, Atom):
        return None
    if left.pred != right.pred or len(left.args) != len(right.args):
        return None
    out = dict(subst)
    for a, b in zip(left.args, right.args):
        out = unify(a, b, out)
        if out is None:
            return None
    return out


def subst_formula(formula, subst):
    """Apply a substitution to every term of a hole-free formula."""
    from .syntax import BINARY, Hole, Not, QUANTIFIERS, URNode

    if isinstance(formula, Atom):
        return Atom(formula.pred, tuple(apply_subst(a, subst) for a in formula.args))
    if isinstance(formula, (Hole, URNode)):
        return formula
    if isinstance(formula, Not):
        return Not(subst_formula(formula.body, subst))
    if isinstance(formula, BINARY):
        return type(formula)(subst_formula(formula.left, subst),
                             subst_formula(formula.right, subst))
    if isinstance(formula, QUANTIFIERS):
        return type(formula)(formula.var, subst_formula(formula.body, subst))
    raise TypeError("not a formula: %r" % (formula,))
