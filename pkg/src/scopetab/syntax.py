"""Abstract syntax and concrete grammar for first-order formulas with holes.

Three layers of formulas share one constructor family:

* plain formulas: no holes, no embedded scope descriptions,
* h-formulas: may contain numbered holes (``#0``, ``#1``, ...) standing for
  yet-unfilled subformula positions,
* u-formulas: hole-free, but may contain embedded underspecified
  representations (``ur { ... }`` blocks) as leaves.

The concrete grammar is ASCII only::

    formula := 'forall' VAR '.' formula | 'exists' VAR '.' formula
             | formula '->' formula            (right associative, lowest)
             | formula '|' formula
             | formula '&' formula             (binds tighter than '|')
             | '~' formula
             | NAME | NAME '(' term, ... ')'
             | '#' NAT                         (holes, UR blocks only)
             | 'ur' '{' ... '}'
             | '(' formula ')'

Quantifiers scope as far to the right as possible.  A term name counts as a
variable when some enclosing quantifier binds it (within a UR block: when any
label of the block binds it), otherwise as a constant.
"""

from __future__ import annotations

from dataclasses import dataclass


class ParseError(Exception):
    """Raised on malformed input; carries a 1-based line/column position."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = "%s (line %d, column %d)" % (message, line, column)
        super().__init__(message)
        self.line = line
        self.column = column


# ==== terms =================================================================


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Func:
    """Function application.  Only generated internally (skolem terms)."""

    name: str
    args: tuple

    def __str__(self):
        if not self.args:
            return self.name
        return "%s(%s)" % (self.name, ",".join(str(a) for a in self.args))


# ==== formulas ==============================================================


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class Hole:
    index: int


@dataclass(frozen=True)
class URNode:
    """Leaf wrapping an underspecified representation (see scopetab.ur)."""

    ur: object


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class ForAll:
    var: str
    body: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


BINARY = (And, Or, Implies)
QUANTIFIERS = (ForAll, Exists)


def contains_hole(formula):
    if isinstance(formula, Hole):
        return True
    if isinstance(formula, (Atom, URNode)):
        return False
    if isinstance(formula, Not):
        return contains_hole(formula.body)
    if isinstance(formula, BINARY):
        return contains_hole(formula.left) or contains_hole(formula.right)
    if isinstance(formula, QUANTIFIERS):
        return contains_hole(formula.body)
    raise TypeError("not a formula: %r" % (formula,))


def contains_ur(formula):
    if isinstance(formula, URNode):
        return True
    if isinstance(formula, (Atom, Hole)):
        return False
    if isinstance(formula, Not):
        return contains_ur(formula.body)
    if isinstance(formula, BINARY):
        return contains_ur(formula.left) or contains_ur(formula.right)
    if isinstance(formula, QUANTIFIERS):
        return contains_ur(formula.body)
    raise TypeError("not a formula: %r" % (formula,))


def is_plain(formula):
    """True for formulas with neither holes nor embedded URs."""
    return not contains_hole(formula) and not contains_ur(formula)


# ==== free variables and substitution =======================================


def _term_vars(term, acc):
    if isinstance(term, Var):
        if term.name not in acc:
            acc.append(term.name)
    elif isinstance(term, Func):
        for a in term.args:
            _term_vars(a, acc)


def free_variables(formula):
    """Free variable names in order of first occurrence."""
    acc = []
    _collect_free(formula, (), acc)
    return acc


def _collect_free(formula, bound, acc):
    if isinstance(formula, Atom):
        for t in formula.args:
            tmp = []
            _term_vars(t, tmp)
            for name in tmp:
                if name not in bound and name not in acc:
                    acc.append(name)
    elif isinstance(formula, Hole):
        pass
    elif isinstance(formula, URNode):
        # free = free in some label formula and bound by no label of the block
        block_bound = bound + tuple(formula.ur.bound_names())
        for _, body in formula.ur.entries:
            _collect_free(body, block_bound, acc)
    elif isinstance(formula, Not):
        _collect_free(formula.body, bound, acc)
    elif isinstance(formula, BINARY):
        _collect_free(formula.left, bound, acc)
        _collect_free(formula.right, bound, acc)
    elif isinstance(formula, QUANTIFIERS):
        _collect_free(formula.body, bound + (formula.var,), acc)
    else:
        raise TypeError("not a formula: %r" % (formula,))


def _subst_term(term, var, value):
    if isinstance(term, Var):
        return value if term.name == var else term
    if isinstance(term, Func):
        return Func(term.name, tuple(_subst_term(a, var, value) for a in term.args))
    return term


def _fresh_name(base, taken):
    i = 1
    while "%s%d" % (base, i) in taken:
        i += 1
    return "%s%d" % (base, i)


def _all_names(formula, acc):
    if isinstance(formula, Atom):
        for t in formula.args:
            _term_vars(t, acc)
    elif isinstance(formula, (Hole,)):
        pass
    elif isinstance(formula, URNode):
        for _, body in formula.ur.entries:
            _all_names(body, acc)
    elif isinstance(formula, Not):
        _all_names(formula.body, acc)
    elif isinstance(formula, BINARY):
        _all_names(formula.left, acc)
        _all_names(formula.right, acc)
    elif isinstance(formula, QUANTIFIERS):
        if formula.var not in acc:
            acc.append(formula.var)
        _all_names(formula.body, acc)


def substitute(formula, var, term):
    """Capture-avoiding substitution of ``term`` for free ``var``.

    Binders are renamed (``y`` -> ``y1``, ``y2``, ...) when they would
    capture a variable of ``term``.  Holes are untouched: whatever fills a
    hole later is substituted separately by the machinery that fills it.

    Substitution distributes over the labels of an embedded UR; it refuses
    (raises ValueError) when a label of the block binds a variable of
    ``term``, since renaming one label's binder would silently break the
    cross-label variable sharing URs rely on.
    """
    term_names = []
    _term_vars(term, term_names)

    if isinstance(formula, Atom):
        return Atom(formula.pred, tuple(_subst_term(a, var, term) for a in formula.args))
    if isinstance(formula, Hole):
        return formula
    if isinstance(formula, URNode):
        bound = formula.ur.bound_names()
        if var in bound:
            return formula
        clash = sorted(set(term_names) & set(bound))
        if clash:
            raise ValueError(
                "substitution into UR would capture %s" % ", ".join(clash))
        return URNode(formula.ur.map_formulas(lambda f: substitute(f, var, term)))
    if isinstance(formula, Not):
        return Not(substitute(formula.body, var, term))
    if isinstance(formula, BINARY):
        return type(formula)(substitute(formula.left, var, term),
                             substitute(formula.right, var, term))
    if isinstance(formula, QUANTIFIERS):
        if formula.var == var:
            return formula
        if formula.var in term_names and var in free_variables(formula.body):
            taken = []
            _all_names(formula.body, taken)
            taken = set(taken) | set(term_names) | {var}
            fresh = _fresh_name(formula.var, taken)
            body = substitute(formula.body, formula.var, Var(fresh))
            return type(formula)(fresh, substitute(body, var, term))
        return type(formula)(formula.var, substitute(formula.body, var, term))
    raise TypeError("not a formula: %r" % (formula,))


# ==== printing ==============================================================

# precedence: -> < | < & < prefix operators
_PREC_IMP, _PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3, 4


def _prec(formula):
    if isinstance(formula, Implies):
        return _PREC_IMP
    if isinstance(formula, Or):
        return _PREC_OR
    if isinstance(formula, And):
        return _PREC_AND
    return _PREC_UNARY


def print_uformula(formula):
    """Render a formula in the concrete grammar (parse . print == id)."""
    return _print(formula)


def _wrap(child, min_prec):
    text = _print(child)
    if _prec(child) < min_prec:
        return "(" + text + ")"
    return text


def _right_exposed_quantifier(formula):
    """A quantifier on the rightmost spine grabs everything that follows,
    so such a formula needs parentheses whenever text continues after it."""
    if isinstance(formula, (ForAll, Exists)):
        return True
    if isinstance(formula, Not):
        return _right_exposed_quantifier(formula.body)
    if isinstance(formula, BINARY):
        return _right_exposed_quantifier(formula.right)
    return False


def _wrap_left(child, min_prec):
    text = _print(child)
    if _prec(child) < min_prec or _right_exposed_quantifier(child):
        return "(" + text + ")"
    return text


def _print(formula):
    if isinstance(formula, Atom):
        if not formula.args:
            return formula.pred
        return "%s(%s)" % (formula.pred, ",".join(str(a) for a in formula.args))
    if isinstance(formula, Hole):
        return "#%d" % formula.index
    if isinstance(formula, URNode):
        return formula.ur.block_text()
    if isinstance(formula, Not):
        body = _print(formula.body)
        if isinstance(formula.body, BINARY):
            body = "(" + body + ")"
        return "~" + body
    if isinstance(formula, Implies):
        # right associative: parenthesise a nested implication on the left
        return "%s -> %s" % (_wrap_left(formula.left, _PREC_IMP + 1),
                             _wrap(formula.right, _PREC_IMP))
    if isinstance(formula, Or):
        return "%s | %s" % (_wrap_left(formula.left, _PREC_OR),
                            _wrap(formula.right, _PREC_OR + 1))
    if isinstance(formula, And):
        return "%s & %s" % (_wrap_left(formula.left, _PREC_AND),
                            _wrap(formula.right, _PREC_AND + 1))
    if isinstance(formula, (ForAll, Exists)):
        word = "forall" if isinstance(formula, ForAll) else "exists"
        body = _print(formula.body)
        if isinstance(formula.body, BINARY):
            body = "(" + body + ")"
        return "%s %s. %s" % (word, formula.var, body)
    raise TypeError("not a formula: %r" % (formula,))


# ==== lexer =================================================================

_PUNCT = ("->", "<=", "(", ")", "{", "}", ",", ".", ";", ":", "=", "~", "&", "|", "#")

_KEYWORDS = ("forall", "exists", "ur", "constraints", "model", "domain")


@dataclass
class Token:
    kind: str  # 'name', 'nat', punctuation text, or 'end'
    text: str
    line: int
    column: int


def tokenize(text):
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        matched = None
        for p in _PUNCT:
            if text.startswith(p, i):
                matched = p
                break
        if matched:
            tokens.append(Token(matched, matched, line, col))
            i += len(matched)
            col += len(matched)
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("nat", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError("unexpected character %r" % c, line, col)
    tokens.append(Token("end", "", line, col))
    return tokens


# ==== parser ================================================================


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok.kind != kind:
            raise ParseError("expected %r, found %r" % (kind, tok.text or "end of input"),
                             tok.line, tok.column)
        return tok

    def at_keyword(self, word):
        tok = self.peek()
        return tok.kind == "name" and tok.text == word

    def error(self, message):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.column)

    # -- formulas ------------------------------------------------------

    def formula(self, in_ur):
        left = self.disjunction(in_ur)
        if self.peek().kind == "->":
            self.next()
            return Implies(left, self.formula(in_ur))
        return left

    def disjunction(self, in_ur):
        left = self.conjunction(in_ur)
        while self.peek().kind == "|":
            self.next()
            left = Or(left, self.conjunction(in_ur))
        return left

    def conjunction(self, in_ur):
        left = self.unary(in_ur)
        while self.peek().kind == "&":
            self.next()
            left = And(left, self.unary(in_ur))
        return left

    def unary(self, in_ur):
        tok = self.peek()
        if tok.kind == "~":
            self.next()
            return Not(self.unary(in_ur))
        if self.at_keyword("forall") or self.at_keyword("exists"):
            word = self.next().text
            var = self.expect("name")
            if var.text in _KEYWORDS:
                raise ParseError("keyword %r cannot be a variable" % var.text,
                                 var.line, var.column)
            self.expect(".")
            body = self.formula(in_ur)
            cls = ForAll if word == "forall" else Exists
            return cls(var.text, body)
        return self.primary(in_ur)

    def primary(self, in_ur):
        tok = self.peek()
        if tok.kind == "(":
            self.next()
            inner = self.formula(in_ur)
            self.expect(")")
            return inner
        if tok.kind == "#":
            if not in_ur:
                raise ParseError("holes are only allowed inside ur blocks",
                                 tok.line, tok.column)
            self.next()
            nat = self.expect("nat")
            return Hole(int(nat.text))
        if tok.kind == "name":
            if tok.text == "ur" and self.tokens[self.pos + 1].kind == "{":
                return self.ur_block()
            if tok.text in ("forall", "exists"):
                self.error("misplaced quantifier")
            self.next()
            if self.peek().kind == "(":
                self.next()
                args = [self.term()]
                while self.peek().kind == ",":
                    self.next()
                    args.append(self.term())
                self.expect(")")
                return Atom(tok.text, tuple(args))
            return Atom(tok.text)
        self.error("expected a formula")

    def term(self):
        tok = self.expect("name")
        if tok.text in _KEYWORDS:
            raise ParseError("keyword %r cannot be a term" % tok.text,
                             tok.line, tok.column)
        # names resolve to Var/Const in a later pass; start as Var
        return Var(tok.text)

    # -- UR blocks -----------------------------------------------------

    def ur_block(self):
        from . import ur as ur_mod

        self.next()  # 'ur'
        self.expect("{")
        entries = []
        constraints = []
        while True:
            if self.at_keyword("constraints"):
                self.next()
                self.expect("{")
                while not self.peek().kind == "}":
                    left = self.constraint_element()
                    self.expect("<=")
                    right = self.constraint_element()
                    constraints.append((left, right))
                    if self.peek().kind == ";":
                        self.next()
                    else:
                        break
                self.expect("}")
                if self.peek().kind == ";":
                    self.next()
                break
            if self.peek().kind == "}":
                break
            label = self.expect("name")
            self.expect(":")
            body = self.formula(in_ur=True)
            entries.append((label.text, body, label.line, label.column))
            if self.peek().kind == ";":
                self.next()
            else:
                break
        self.expect("}")
        try:
            built = ur_mod.UR.build([(name, body) for name, body, _, _ in entries],
                                    constraints)
        except ur_mod.URError as exc:
            tok = self.peek()
            raise ParseError(str(exc), tok.line, tok.column) from exc
        return URNode(built)

    def constraint_element(self):
        tok = self.next()
        if tok.kind == "name":
            return tok.text
        if tok.kind == "#":
            nat = self.expect("nat")
            return "#" + nat.text
        raise ParseError("expected a label or hole", tok.line, tok.column)


# ==== name resolution =======================================================


def _resolve_term(term, bound):
    if isinstance(term, Var) and term.name not in bound:
        return Const(term.name)
    return term


def _resolve(formula, bound):
    if isinstance(formula, Atom):
        return Atom(formula.pred, tuple(_resolve_term(a, bound) for a in formula.args))
    if isinstance(formula, Hole):
        return formula
    if isinstance(formula, URNode):
        block_bound = bound | set(formula.ur.bound_names())
        return URNode(formula.ur.map_formulas(lambda f: _resolve(f, block_bound)))
    if isinstance(formula, Not):
        return Not(_resolve(formula.body, bound))
    if isinstance(formula, BINARY):
        return type(formula)(_resolve(formula.left, bound), _resolve(formula.right, bound))
    if isinstance(formula, QUANTIFIERS):
        return type(formula)(formula.var, _resolve(formula.body, bound | {formula.var}))
    raise TypeError("not a formula: %r" % (formula,))


def parse_uformula(text):
    """Parse the concrete grammar into a formula AST.

    Raises ParseError on syntax errors, holes outside UR blocks, duplicate
    labels or hole occurrences, and constraints over undeclared labels.
    """
    parser = _Parser(text)
    raw = parser.formula(in_ur=False)
    end = parser.peek()
    if end.kind != "end":
        raise ParseError("trailing input %r" % end.text, end.line, end.column)
    resolved = _resolve(raw, frozenset())
    if contains_hole(resolved):
        raise ParseError("top-level formula must not contain bare holes")
    return resolved
