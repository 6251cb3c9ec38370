"""Tests for the classical free-variable tableau engine."""

import pytest

from scopetab.prooftree import SearchLimitError, SearchLimits
from scopetab.syntax import Atom, Const, parse_uformula
from scopetab.tableaux import (CAPPED, Branch, CalculusError, close_branches,
                               prove_tc, prove_tc_sequent)

TWO_SCOPE = """ur { l0: #0 ; l1: forall x. (man(x) -> #1) ;
  l2: exists y. (woman(y) & #2) ; l3: love(x,y) ;
  constraints { l1 <= #0 ; l2 <= #0 ; l3 <= #1 ; l3 <= #2 } }"""


def proved(text, limits=None):
    return prove_tc(parse_uformula(text), limits)


# ---------------------------------------------------------------------------
# propositional base
# ---------------------------------------------------------------------------

def test_excluded_middle():
    result = proved("p | ~p")
    assert result.proved and result.decisive
    assert result.tableau.node_count() == 4
    assert result.stats["applications"] == {"F:not": 1, "F:or": 1}


def test_modus_ponens_shape():
    result = proved("((p -> q) & p) -> q")
    assert result.proved
    assert result.stats["branches"] == 2


def test_propositional_non_theorem_is_decisive():
    result = proved("p -> q")
    assert not result.proved
    assert result.decisive          # no universal rules, nothing was capped


def test_contradiction_refuted():
    result = proved("~(p & ~p)")
    assert result.proved


# ---------------------------------------------------------------------------
# quantifiers
# ---------------------------------------------------------------------------

def test_syllogism():
    result = proved(
        "(forall x. (man(x) -> mortal(x)) & man(socrates)) -> mortal(socrates)")
    assert result.proved and result.gamma_used == 1


def test_exists_forall_entails_forall_exists():
    result = proved(
        "(exists y. forall x. love(x,y)) -> forall x. exists y. love(x,y)")
    assert result.proved


def test_forall_exists_does_not_entail_exists_forall():
    result = proved(
        "(forall x. exists y. love(x,y)) -> exists y. forall x. love(x,y)")
    assert not result.proved
    assert not result.decisive      # the multiplicity cap hides nothing here,
                                    # but the engine cannot know that


def test_drinker_formula():
    assert proved("exists x. (drinks(x) -> forall y. drinks(y))").proved


def test_iterative_deepening_reports_the_level_used():
    result = proved("exists x. forall y. (drinks(x) -> drinks(y))")
    assert result.proved
    assert result.gamma_used == 2


def test_sequent_form():
    premises = [parse_uformula("forall x. (man(x) -> mortal(x))"),
                parse_uformula("man(socrates)")]
    result = prove_tc_sequent(premises, parse_uformula("mortal(socrates)"))
    assert result.proved
    assert result.calculus == "tc"


def test_premise_only_saturation_is_not_a_proof():
    result = prove_tc_sequent([parse_uformula("p -> q")], None)
    assert not result.proved


def test_empty_sequent_rejected():
    with pytest.raises(CalculusError):
        prove_tc_sequent([], None)


# ---------------------------------------------------------------------------
# input checks and limits
# ---------------------------------------------------------------------------

def test_plain_calculus_rejects_scope_ambiguity():
    with pytest.raises(CalculusError) as err:
        prove_tc(parse_uformula(TWO_SCOPE))
    assert "conclusion is scope-ambiguous" in str(err.value)
    with pytest.raises(CalculusError) as err:
        prove_tc_sequent([parse_uformula(TWO_SCOPE)], parse_uformula("p"))
    assert "premise 1 is scope-ambiguous" in str(err.value)


def test_limit_validation():
    with pytest.raises(SearchLimitError):
        SearchLimits(gamma_multiplicity=0)
    with pytest.raises(SearchLimitError):
        SearchLimits(max_depth=0)
    with pytest.raises(SearchLimitError):
        SearchLimits(max_nodes=0)


def test_depth_truncation_is_indecisive():
    result = proved(
        "(forall x. (p(x) -> q(x)) & forall x. p(x)) -> forall x. q(x)",
        SearchLimits(max_depth=3))
    assert not result.proved
    assert not result.decisive


def test_node_budget_truncation_is_indecisive():
    result = proved(
        "(forall x. exists y. love(x,y)) -> exists y. forall x. love(x,y)",
        SearchLimits(max_nodes=5))
    assert not result.proved
    assert not result.decisive


# ---------------------------------------------------------------------------
# closure search
# ---------------------------------------------------------------------------

def _branch(branch_id, atoms):
    branch = Branch(branch_id, 0)
    branch.atoms = atoms
    return branch


def test_close_simple_complementary_pair():
    branch = _branch(0, [("T", Atom("p", ()), 1), ("F", Atom("p", ()), 2)])
    closures, subst = close_branches([branch])
    assert len(closures) == 1
    assert (closures[0].t_node, closures[0].f_node) == (1, 2)
    assert subst == {}


def test_close_impossible_when_no_pair_unifies():
    branch = _branch(0, [("T", Atom("r", (Const("a"),)), 1),
                         ("F", Atom("r", (Const("b"),)), 2)])
    assert close_branches([branch]) is None


def test_close_shares_one_substitution_across_branches():
    # branch 0 could close with X1 := a or X1 := b; branch 1 forces b
    from scopetab.syntax import Var
    b0 = _branch(0, [("T", Atom("q", (Var("X1"),)), 1),
                     ("F", Atom("q", (Const("a"),)), 2),
                     ("F", Atom("q", (Const("b"),)), 3)])
    b1 = _branch(1, [("T", Atom("r", (Var("X1"),)), 4),
                     ("F", Atom("r", (Const("b"),)), 5)])
    closures, subst = close_branches([b0, b1])
    assert len(closures) == 2
    assert subst["X1"] == Const("b")


def test_close_budget_capping():
    atoms = [("T", Atom("r", (Const(chr(97 + i)),)), i) for i in range(10)]
    atoms += [("F", Atom("r", (Const(chr(97 + i)),)), 100 + i)
              for i in range(10)]
    assert close_branches([_branch(0, atoms)], budget=3) is CAPPED


def test_syntactically_closed_branches_need_no_work():
    branch = _branch(0, [])
    branch.closed_pair = (7, 9)
    closures, subst = close_branches([branch])
    assert (closures[0].t_node, closures[0].f_node) == (7, 9)


# ---------------------------------------------------------------------------
# proof objects
# ---------------------------------------------------------------------------

def test_result_statistics_and_description():
    result = proved("((p -> q) & p) -> q")
    assert set(result.stats) == {"nodes", "branches", "rules", "applications"}
    assert result.description() == "proved"
    assert proved("p -> q").description() == "not-proved-within-limits"


def test_tableau_records_and_exports():
    result = proved("((p -> q) & p) -> q")
    records = result.tableau.records()
    assert records[0] == {"id": 1, "parent": 0, "sign": "F",
                          "formula": "(p -> q) & p -> q", "rule": "goal"}
    assert {r["rule"] for r in records} >= {"F:imp", "T:and", "T:imp"}
    text = result.tableau.to_text()
    assert "closed:" in text
    dot = result.tableau.to_dot()
    assert dot.startswith("digraph tableau {") and dot.endswith("}")
    assert 'style=dashed, color=red, label="close"' in dot


def test_closure_substitution_is_recorded():
    result = proved(
        "(forall x. (man(x) -> mortal(x)) & man(socrates)) -> mortal(socrates)")
    assert "socrates" in set(result.tableau.substitution.values())


def test_path_rules_and_rule_count():
    result = proved("p | ~p")
    tableau = result.tableau
    leaf = max(tableau.nodes)
    assert tableau.path_rules(leaf)[0] == "goal"
    assert tableau.rule_count("F:or") == 2     # both children of the one split


def test_runs_are_deterministic():
    first = proved("(forall x. (p(x) -> q(x)) & exists x. p(x)) -> exists x. q(x)")
    second = proved("(forall x. (p(x) -> q(x)) & exists x. p(x)) -> exists x. q(x)")
    assert first.proved == second.proved
    assert first.tableau.records() == second.tableau.records()
    assert first.tableau.to_dot() == second.tableau.to_dot()
