"""Tableau trees, search limits, and proof results with exports.

A tableau is a tree of signed nodes.  Signs are ``T``/``F`` for settled
formulas and ``Tu``/``Fu`` for nodes still carrying scope ambiguity.  Each
node records the rule that produced it and its parent, so a proof can be
replayed or exported as indented text, as flat records, or as DOT.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import (And, Atom, Exists, ForAll, Hole, Implies, Not, Or,
                     URNode, print_uformula)

_FORMULA_TYPES = (Atom, Hole, URNode, Not, And, Or, Implies, ForAll, Exists)


class SearchLimitError(ValueError):
    pass


@dataclass(frozen=True)
class SearchLimits:
    gamma_multiplicity: int = 3   # re-instantiations per universal per branch
    max_depth: int = 120          # nodes along a single branch
    max_nodes: int = 50000        # nodes in the whole tableau

    def __post_init__(self):
        if self.gamma_multiplicity < 1:
            raise SearchLimitError("gamma multiplicity must be at least 1")
        if self.max_depth < 1:
            raise SearchLimitError("depth bound must be at least 1")
        if self.max_nodes < 1:
            raise SearchLimitError("node bound must be at least 1")


def payload_text(payload):
    if isinstance(payload, _FORMULA_TYPES):
        return print_uformula(payload)
    return str(payload)


@dataclass
class Node:
    id: int
    parent: int          # 0 for the first root
    sign: str            # 'T' | 'F' | 'Tu' | 'Fu'
    payload: object      # formula or hole goal
    rule: str            # producing rule; 'premise' / 'goal' at the roots
    children: list = field(default_factory=list)
    reading: int = None      # disambiguation index for UR-branch children
    instance: int = None     # UR instance the node talks about
    state_note: str = None   # UR refinement state at this node


@dataclass
class Closure:
    branch: int
    t_node: int
    f_node: int


class Tableau:
    def __init__(self):
        self.nodes = {}
        self.roots = []
        self.closures = []
        self.substitution = {}

    def add(self, node):
        self.nodes[node.id] = node
        if node.parent == 0:
            self.roots.append(node.id)
        else:
            self.nodes[node.parent].children.append(node.id)

    def node_count(self):
        return len(self.nodes)

    def rule_count(self, rule):
        return sum(1 for n in self.nodes.values() if n.rule == rule)

    def path_rules(self, node_id):
        """Rules along the path from the root down to ``node_id``."""
        out = []
        while node_id:
            node = self.nodes[node_id]
            out.append(node.rule)
            node_id = node.parent
        return list(reversed(out))

    # -- exports ---------------------------------------------------------

    def to_text(self):
        lines = []
        closed_at = {}
        for c in self.closures:
            closed_at.setdefault(c.branch, c)

        def walk(node_id, depth):
            node = self.nodes[node_id]
            note = ""
            if node.reading is not None:
                note += "  [reading %d]" % node.reading
            if node.state_note:
                note += "  {%s}" % node.state_note
            lines.append("%s(%d) %s: %s   <%s>%s"
                         % ("  " * depth, node.id, node.sign,
                            payload_text(node.payload), node.rule, note))
            kids = node.children
            for kid in kids:
                walk(kid, depth + (1 if len(kids) > 1 else 0))

        for root in self.roots:
            walk(root, 0)
        if self.closures:
            lines.append("closed:")
            for c in self.closures:
                lines.append("  branch %d by (%d, %d)" % (c.branch, c.t_node, c.f_node))
        if self.substitution:
            pairs = ", ".join("%s:=%s" % (k, v)
                              for k, v in sorted(self.substitution.items()))
            lines.append("substitution: {%s}" % pairs)
        return "\n".join(lines)

    def records(self):
        out = []
        for node_id in sorted(self.nodes):
            node = self.nodes[node_id]
            record = {
                "id": node.id,
                "parent": node.parent,
                "sign": node.sign,
                "formula": payload_text(node.payload),
                "rule": node.rule,
            }
            if node.reading is not None:
                record["reading"] = node.reading
            if node.instance is not None:
                record["instance"] = node.instance
            if node.state_note:
                record["ur_state"] = node.state_note
            out.append(record)
        return out

    def to_dot(self):
        def escape(text):
            return text.replace("\\", "\\\\").replace('"', '\\"')

        lines = ["digraph tableau {", "  node [shape=box, fontname=monospace];"]
        for node_id in sorted(self.nodes):
            node = self.nodes[node_id]
            label = "%s: %s\\n<%s>" % (node.sign,
                                       escape(payload_text(node.payload)),
                                       escape(node.rule))
            lines.append('  n%d [label="%s"];' % (node.id, label))
        for node_id in sorted(self.nodes):
            node = self.nodes[node_id]
            for kid in node.children:
                lines.append("  n%d -> n%d;" % (node.id, kid))
        for c in self.closures:
            lines.append('  n%d -> n%d [style=dashed, color=red, label="close"];'
                         % (c.t_node, c.f_node))
        lines.append("}")
        return "\n".join(lines)


@dataclass
class ProofResult:
    proved: bool
    calculus: str
    tableau: Tableau
    limits: SearchLimits
    gamma_used: int          # multiplicity level of the reported tableau
    decisive: bool           # False when a bound may have hidden a proof
    stats: dict

    def description(self):
        return "proved" if self.proved else "not-proved-within-limits"
