"""Finite models and the satisfaction/falsification pair for u-formulas.

Classical evaluation is the usual Tarskian recursion.  For ambiguous
formulas two relations are defined side by side: ``sat_u`` (the formula
holds on every total disambiguation of each embedded UR) and ``fals_u``
(it fails on every one).  Falsification is primitive, not the complement
of satisfaction: an ambiguous formula whose readings disagree on a model
is neither satisfied nor falsified there.

Consequence for u-formulas quantifies over reading combinations: premises
entail a conclusion when every choice of premise readings classically
entails every conclusion reading.  ``consequence_u`` searches for a
countermodel over all interpretations up to a domain size bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import syntax
from .syntax import (And, Atom, BINARY, Const, Exists, ForAll, Func, Hole,
                     Implies, Not, Or, ParseError, QUANTIFIERS, URNode, Var,
                     contains_ur)
from .ur import delta


class ModelError(Exception):
    pass


@dataclass(frozen=True)
class FiniteModel:
    domain: tuple                 # individual names, non-empty
    predicates: tuple             # ((name, frozenset of argument tuples), ...)
    constants: tuple = ()         # ((name, individual), ...)

    @classmethod
    def build(cls, domain, predicates, constants=()):
        domain = tuple(domain)
        if not domain:
            raise ModelError("domain must be non-empty")
        preds = []
        for name in sorted(predicates):
            rows = frozenset(tuple(row) for row in predicates[name])
            for row in rows:
                for element in row:
                    if element not in domain:
                        raise ModelError("%s mentions %s outside the domain"
                                         % (name, element))
            preds.append((name, rows))
        consts = []
        for name in sorted(constants):
            value = constants[name]
            if value not in domain:
                raise ModelError("constant %s maps outside the domain" % name)
            consts.append((name, value))
        return cls(domain, tuple(preds), tuple(consts))

    def extension(self, pred):
        for name, rows in self.predicates:
            if name == pred:
                return rows
        raise ModelError("unknown predicate %s" % pred)

    def constant(self, name):
        for cname, value in self.constants:
            if cname == name:
                return value
        raise ModelError("unknown constant %s" % name)

    def describe(self):
        parts = ["domain = {%s}" % ", ".join(self.domain)]
        for name, rows in self.predicates:
            cells = []
            for row in sorted(rows):
                if len(row) == 1:
                    cells.append(row[0])
                else:
                    cells.append("(%s)" % ",".join(row))
            parts.append("%s = {%s}" % (name, ", ".join(cells)))
        for name, value in self.constants:
            parts.append("%s = %s" % (name, value))
        return "model { %s }" % "; ".join(parts)

    def __str__(self):
        return self.describe()


# ==== model text format =====================================================


def parse_model(text):
    """Parse ``model { domain = {a, b}; p = {a}; r = {(a,b)}; c = a }``.

    Zero-ary predicates are written ``p = true`` or ``p = false``; a bare
    individual on the right-hand side declares a constant.
    """
    tokens = syntax.tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]]

    def advance():
        tok = tokens[pos[0]]
        pos[0] += 1
        return tok

    def expect(kind):
        tok = advance()
        if tok.kind != kind:
            raise ParseError("expected %r, found %r" % (kind, tok.text or "end"),
                             tok.line, tok.column)
        return tok

    def name_tok():
        tok = expect("name")
        return tok

    head = name_tok()
    if head.text != "model":
        raise ParseError("model file must start with 'model'", head.line, head.column)
    expect("{")
    domain = None
    predicates = {}
    constants = {}
    while peek().kind != "}":
        key = name_tok()
        expect("=")
        if peek().kind == "{":
            advance()
            rows = []
            while peek().kind != "}":
                if peek().kind == "(":
                    advance()
                    row = [name_tok().text]
                    while peek().kind == ",":
                        advance()
                        row.append(name_tok().text)
                    expect(")")
                    rows.append(tuple(row))
                else:
                    rows.append((name_tok().text,))
                if peek().kind == ",":
                    advance()
                else:
                    break
            expect("}")
            if key.text == "domain":
                domain = tuple(r[0] for r in rows)
            else:
                predicates[key.text] = rows
        else:
            value = name_tok()
            if value.text == "true":
                predicates[key.text] = [()]
            elif value.text == "false":
                predicates[key.text] = []
            else:
                constants[key.text] = value.text
        if peek().kind == ";":
            advance()
    expect("}")
    end = peek()
    if end.kind != "end":
        raise ParseError("trailing input %r" % end.text, end.line, end.column)
    if domain is None:
        raise ParseError("model lacks a domain", head.line, head.column)
    try:
        return FiniteModel.build(domain, predicates, constants)
    except ModelError as exc:
        raise ParseError(str(exc), head.line, head.column) from exc


# ==== classical evaluation ==================================================


def _eval_term(model, term, env):
    if isinstance(term, Var):
        if term.name not in env:
            raise ModelError("unbound variable %s" % term.name)
        return env[term.name]
    if isinstance(term, Const):
        return model.constant(term.name)
    raise ModelError("function terms have no interpretation here: %s" % (term,))


def eval_classical(model, formula, env=None):
    """Truth of a plain first-order formula in a finite model."""
    env = {} if env is None else env
    if isinstance(formula, Atom):
        row = tuple(_eval_term(model, t, env) for t in formula.args)
        return row in model.extension(formula.pred)
    if isinstance(formula, Not):
        return not eval_classical(model, formula.body, env)
    if isinstance(formula, And):
        return (eval_classical(model, formula.left, env)
                and eval_classical(model, formula.right, env))
    if isinstance(formula, Or):
        return (eval_classical(model, formula.left, env)
                or eval_classical(model, formula.right, env))
    if isinstance(formula, Implies):
        return (not eval_classical(model, formula.left, env)
                or eval_classical(model, formula.right, env))
    if isinstance(formula, ForAll):
        return all(eval_classical(model, formula.body, {**env, formula.var: d})
                   for d in model.domain)
    if isinstance(formula, Exists):
        return any(eval_classical(model, formula.body, {**env, formula.var: d})
                   for d in model.domain)
    if isinstance(formula, (Hole, URNode)):
        raise ModelError("classical evaluation needs a plain formula")
    raise TypeError("not a formula: %r" % (formula,))


# ==== satisfaction and falsification for u-formulas ========================


def sat_u(model, formula, env=None):
    env = {} if env is None else env
    if not contains_ur(formula):
        return eval_classical(model, formula, env)
    if isinstance(formula, URNode):
        return all(eval_classical(model, d, env) for d in delta(formula))
    if isinstance(formula, Not):
        return fals_u(model, formula.body, env)
    if isinstance(formula, And):
        return sat_u(model, formula.left, env) and sat_u(model, formula.right, env)
    if isinstance(formula, Or):
        return sat_u(model, formula.left, env) or sat_u(model, formula.right, env)
    if isinstance(formula, Implies):
        return fals_u(model, formula.left, env) or sat_u(model, formula.right, env)
    if isinstance(formula, ForAll):
        return all(sat_u(model, formula.body, {**env, formula.var: d})
                   for d in model.domain)
    if isinstance(formula, Exists):
        return any(sat_u(model, formula.body, {**env, formula.var: d})
                   for d in model.domain)
    raise TypeError("not a u-formula: %r" % (formula,))


def fals_u(model, formula, env=None):
    """Primitive falsification, the dual of sat_u.

    On unambiguous formulas it coincides with classical falsity; on a UR it
    requires every total disambiguation to fail.
    """
    env = {} if env is None else env
    if not contains_ur(formula):
        return not eval_classical(model, formula, env)
    if isinstance(formula, URNode):
        return all(not eval_classical(model, d, env) for d in delta(formula))
    if isinstance(formula, Not):
        return sat_u(model, formula.body, env)
    if isinstance(formula, And):
        return fals_u(model, formula.left, env) or fals_u(model, formula.right, env)
    if isinstance(formula, Or):
        return fals_u(model, formula.left, env) and fals_u(model, formula.right, env)
    if isinstance(formula, Implies):
        return sat_u(model, formula.left, env) and fals_u(model, formula.right, env)
    if isinstance(formula, ForAll):
        return any(fals_u(model, formula.body, {**env, formula.var: d})
                   for d in model.domain)
    if isinstance(formula, Exists):
        return all(fals_u(model, formula.body, {**env, formula.var: d})
                   for d in model.domain)
    raise TypeError("not a u-formula: %r" % (formula,))


# ==== signatures and model enumeration ======================================


def signature(formulas):
    """(predicate -> arity, sorted constant names) over plain formulas."""
    preds = {}
    consts = []

    def walk_term(term):
        if isinstance(term, Const):
            if term.name not in consts:
                consts.append(term.name)
        elif isinstance(term, Func):
            raise ModelError("function terms are outside the model search space")

    def walk(formula):
        if isinstance(formula, Atom):
            arity = len(formula.args)
            if preds.setdefault(formula.pred, arity) != arity:
                raise ModelError("predicate %s used with two arities" % formula.pred)
            for t in formula.args:
                walk_term(t)
        elif isinstance(formula, Not):
            walk(formula.body)
        elif isinstance(formula, BINARY):
            walk(formula.left)
            walk(formula.right)
        elif isinstance(formula, QUANTIFIERS):
            walk(formula.body)
        elif isinstance(formula, URNode):
            for _, body in formula.ur.entries:
                walk(body)
        elif isinstance(formula, Hole):
            pass
        else:
            raise TypeError("not a formula: %r" % (formula,))

    for f in formulas:
        walk(f)
    return dict(sorted(preds.items())), sorted(consts)


_ELEMENTS = "abcdefghij"


def enumerate_models(preds, consts, max_domain):
    """All models over the signature with domain size <= max_domain.

    Deterministic order: domain size ascending, then constant maps, then
    predicate extensions as ascending bitmasks per sorted predicate name.
    """
    pred_names = sorted(preds)
    for size in range(1, max_domain + 1):
        domain = tuple(_ELEMENTS[:size])
        tuple_spaces = {
            name: sorted(itertools.product(domain, repeat=preds[name]))
            for name in pred_names
        }
        const_choices = itertools.product(domain, repeat=len(consts))
        for const_map in const_choices:
            constants = dict(zip(consts, const_map))
            masks = itertools.product(
                *(range(2 ** len(tuple_spaces[name])) for name in pred_names))
            for mask_row in masks:
                predicates = {}
                for name, mask in zip(pred_names, mask_row):
                    space = tuple_spaces[name]
                    predicates[name] = [space[i] for i in range(len(space))
                                        if mask >> i & 1]
                yield FiniteModel.build(domain, predicates, constants)


@dataclass(frozen=True)
class Counterexample:
    model: FiniteModel
    premise_readings: tuple
    conclusion_reading: object


@dataclass(frozen=True)
class ConsequenceVerdict:
    valid_up_to: bool
    max_domain: int
    counterexample: object = None

    def describe(self):
        if self.valid_up_to:
            return "no-counterexample-up-to-%d" % self.max_domain
        return "counterexample"


def consequence_u(premises, conclusion, max_domain=3, max_models=None):
    """Search for a model plus reading combination refuting the consequence.

    Returns the first counterexample in enumeration order, or a verdict
    that none exists up to the domain bound.  ``max_models`` caps the
    number of interpretations inspected (ModelError when exhausted).
    """
    premises = tuple(premises)
    preds, consts = signature(premises + (conclusion,))
    premise_deltas = [delta(p) for p in premises]
    conclusion_delta = delta(conclusion)
    seen = 0
    for model in enumerate_models(preds, consts, max_domain):
        seen += 1
        if max_models is not None and seen > max_models:
            raise ModelError("model cap %d exceeded" % max_models)
        for combo in itertools.product(*premise_deltas):
            if not all(eval_classical(model, d) for d in combo):
                continue
            for d_conc in conclusion_delta:
                if not eval_classical(model, d_conc):
                    counter = Counterexample(model, tuple(combo), d_conc)
                    return ConsequenceVerdict(False, max_domain, counter)
    return ConsequenceVerdict(True, max_domain)
