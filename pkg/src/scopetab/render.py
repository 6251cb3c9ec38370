"""Matplotlib rendering of proof trees and oracle summaries.

Figures are drawn with the Agg backend so rendering works headless; the
functions here take a target path and write a bitmap, nothing is shown
interactively.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .prooftree import payload_text  # noqa: E402

_BOX = dict(boxstyle="round,pad=0.25", facecolor="#f4f6fa", edgecolor="#5a6b8a")
_CLOSED_BOX = dict(boxstyle="round,pad=0.25", facecolor="#fbeaea",
                   edgecolor="#b44")


def _layout(tableau):
    """x by leaf order, y by depth; parents centered over children."""
    nodes = tableau.nodes
    position = {}
    next_leaf = [0.0]

    def depth_of(nid):
        d = 0
        node = nodes[nid]
        while node.parent in nodes:
            node = nodes[node.parent]
            d += 1
        return d

    def place(nid):
        node = nodes[nid]
        kids = [k for k in node.children if k in nodes]
        if not kids:
            x = next_leaf[0]
            next_leaf[0] += 1.0
        else:
            x = sum(place(k) for k in kids) / len(kids)
        position[nid] = (x, -float(depth_of(nid)))
        return position[nid][0]

    for root in tableau.roots:
        place(root)
    return position


def _label(node, width=46):
    text = "%s: %s" % (node.sign, payload_text(node.payload))
    if len(text) > width:
        text = text[:width - 1] + "…"
    return "%s\n%s" % (text, node.rule)


def proof_figure(result, path):
    """Draw one ProofResult's tableau and save it to ``path``."""
    tableau = result.tableau
    position = _layout(tableau)
    closed_ids = set()
    for closure in tableau.closures:
        closed_ids.add(closure.t_node)
        closed_ids.add(closure.f_node)

    width = max(6.0, 1.7 * (max(x for x, _ in position.values()) + 1))
    height = max(4.0, 0.9 * (1 - min(y for _, y in position.values())))
    fig, ax = plt.subplots(figsize=(min(width, 28.0), min(height, 18.0)))
    ax.axis("off")

    for node in tableau.nodes.values():
        if node.parent in position:
            x0, y0 = position[node.parent]
            x1, y1 = position[node.id]
            ax.plot([x0, x1], [y0, y1], color="#9aa7bd", lw=1.0, zorder=1)
    for closure in tableau.closures:
        if closure.t_node in position and closure.f_node in position:
            (x0, y0), (x1, y1) = (position[closure.t_node],
                                  position[closure.f_node])
            ax.plot([x0, x1], [y0, y1], color="#b44", lw=1.0, ls="--",
                    zorder=1)
    for nid, (x, y) in sorted(position.items()):
        node = tableau.nodes[nid]
        box = _CLOSED_BOX if nid in closed_ids else _BOX
        ax.annotate("(%d) %s" % (nid, _label(node)), (x, y), ha="center",
                    va="center", fontsize=7, bbox=box, zorder=2)

    ax.set_title("%s: %s  (nodes=%d, branches=%d)"
                 % (result.calculus, result.description(),
                    result.stats["nodes"], result.stats["branches"]),
                 fontsize=10)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def oracle_figure(equivalence, soundness, path):
    """Summarize oracle runs as a bar chart and save it to ``path``.

    ``equivalence`` maps suite names to OracleReports; ``soundness`` may
    be None when the sweep was not requested.
    """
    labels, agreed, rest = [], [], []
    for name in sorted(equivalence):
        report = equivalence[name]
        labels.append(name)
        agreed.append(report.agreed)
        rest.append(report.checked - report.agreed)
    if soundness is not None:
        labels.append("soundness")
        agreed.append(soundness.checked - len(soundness.violations))
        rest.append(len(soundness.violations))

    fig, ax = plt.subplots(figsize=(7.0, 0.7 * len(labels) + 2.0))
    spots = range(len(labels))
    ax.barh(spots, agreed, color="#4a7f4a", label="agreeing / sound")
    ax.barh(spots, rest, left=agreed, color="#b44",
            label="disagreeing / violating")
    ax.set_yticks(list(spots))
    ax.set_yticklabels(labels)
    ax.invert_yaxis()
    ax.set_xlabel("checks")
    ax.legend(loc="lower right", fontsize=8)
    for i, (good, bad) in enumerate(zip(agreed, rest)):
        ax.text(good + bad + 0.3, i, "%d/%d" % (good, good + bad),
                va="center", fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
