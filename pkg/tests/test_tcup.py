"""Tests for the calculus that reasons inside underspecified representations."""

import pytest

from scopetab.prooftree import SearchLimits
from scopetab.syntax import (And, Atom, ForAll, Hole, Implies, Not, URNode,
                             Var, parse_uformula, print_uformula)
from scopetab.tableaux import prove_tc
from scopetab.tcup import (URState, candidates, decision_pairs, definiteness,
                           is_definite, is_special, negation_resolve,
                           negative_holes, polarity, prove_tcup,
                           prove_tcup_sequent, special_force, special_hole,
                           state_definite, survivors)
from scopetab.ur import URError, delta

TWO_SCOPE = """ur { l0: #0 ; l1: forall x. (man(x) -> #1) ;
  l2: exists y. (woman(y) & #2) ; l3: love(x,y) ;
  constraints { l1 <= #0 ; l2 <= #0 ; l3 <= #1 ; l3 <= #2 } }"""
WEAK = "forall x. (man(x) -> exists y. (woman(y) & love(x,y)))"
STRONG = "exists y. (woman(y) & forall x. (man(x) -> love(x,y)))"
PROPOSITIONAL = """ur { l0: #0 ; l1: #1 -> #2 ; l2: p ; l3: q ;
    constraints { l1 <= #0 ; l2 <= l1 ; l3 <= l1 } }"""

# "every boy didn't see a movie": negation scoped against both quantifiers
NEGATED = """ur { l0: #0 ; l1: forall x. (boy(x) -> #1) ; l2: ~#2 ;
  l3: exists y. (movie(y) & #3) ; l4: see(x,y) ;
  constraints { l1 <= #0 ; l2 <= #0 ; l3 <= #0 ;
                l4 <= #1 ; l4 <= #2 ; l4 <= #3 } }"""


def negated_ur():
    return parse_uformula(NEGATED).ur


def two_scope_ur():
    return parse_uformula(TWO_SCOPE).ur


# ---------------------------------------------------------------------------
# hole polarity
# ---------------------------------------------------------------------------

def test_polarity_of_contexts():
    p, q = Atom("p", ()), Atom("q", ())
    assert polarity(Not(Hole(1)), 1) == "negative"
    assert polarity(Implies(Hole(1), p), 1) == "negative"
    assert polarity(Implies(p, Hole(1)), 1) == "positive"
    assert polarity(Not(Not(Hole(2))), 2) == "positive"
    assert polarity(Implies(Implies(Hole(3), p), q), 3) == "positive"
    assert polarity(And(p, Hole(4)), 4) == "positive"
    assert polarity(And(p, q), 4) is None


def test_negative_holes_in_index_order():
    ur = negated_ur()
    assert {l: negative_holes(f) for l, f in ur.lhf.items()} == \
        {"l0": [], "l1": [], "l2": [2], "l3": [], "l4": []}


# ---------------------------------------------------------------------------
# special shapes
# ---------------------------------------------------------------------------

def test_special_shape_tags():
    ur = negated_ur()
    assert is_special(ur.lhf["l1"]) == "forall-scope"
    assert is_special(ur.lhf["l3"]) == "exists-scope"
    assert is_special(ur.lhf["l0"]) is None          # a bare hole
    assert is_special(ur.lhf["l2"]) is None          # a negation


def test_special_restrictor_shape():
    shape = ForAll("x", Implies(And(Atom("man", (Var("x"),)), Hole(1)),
                                Atom("sleep", (Var("x"),))))
    assert is_special(shape) == "forall-restrictor"
    assert special_hole(shape) == 1
    assert special_force(shape) == "forall"


def test_special_holes_and_forces():
    ur = negated_ur()
    assert special_hole(ur.lhf["l1"]) == 1
    assert special_hole(ur.lhf["l3"]) == 3
    assert special_force(ur.lhf["l1"]) == "forall"
    assert special_force(ur.lhf["l3"]) == "exists"
    with pytest.raises(URError):
        special_hole(ur.lhf["l2"])


def test_two_holed_material_is_not_special():
    shape = ForAll("x", Implies(And(Atom("man", (Var("x"),)), Hole(1)),
                                Hole(2)))
    assert is_special(shape) is None


# ---------------------------------------------------------------------------
# definiteness
# ---------------------------------------------------------------------------

def test_definiteness_against_the_negation():
    ur = negated_ur()
    report = definiteness(ur, "l1")
    assert not report.definite
    assert report.hole == 1
    assert report.witnesses == (("l2", 2),)
    assert definiteness(ur, "l2").definite
    report3 = definiteness(ur, "l3")
    assert not report3.definite and report3.witnesses == (("l2", 2),)


def test_unambiguous_scope_order_is_definite():
    ur = two_scope_ur()
    # no negative context exists, so every label's scope is settled
    assert definiteness(ur, "l1").definite
    assert definiteness(ur, "l2").definite


def test_definiteness_needs_a_hole_to_talk_about():
    ur = negated_ur()
    with pytest.raises(URError) as err:
        definiteness(ur, "l4")       # see(x,y) has no hole
    assert "needs an explicit hole" in str(err.value)
    assert is_definite(ur, "l4")     # but hole-free material is trivially fixed


def test_multi_holed_labels_need_the_hole_spelled_out():
    ur = parse_uformula("""ur { l0: #0 ; l1: #1 -> #2 ; l2: p ; l3: q ;
        constraints { l1 <= #0 ; l2 <= l1 ; l3 <= l1 } }""").ur
    with pytest.raises(URError):
        definiteness(ur, "l1")
    # without any negative context around, each hole's order is settled
    assert definiteness(ur, "l1", 1).definite
    assert definiteness(ur, "l1", 2).definite


# ---------------------------------------------------------------------------
# negation resolution
# ---------------------------------------------------------------------------

def test_resolve_splits_on_the_scope_order():
    ur = negated_ur()
    left, right = negation_resolve(ur, "l1")
    assert sorted(set(left.given) - set(ur.given)) == [("l2", "#1")]
    assert sorted(set(right.given) - set(ur.given)) == [("l1", "#2")]
    assert definiteness(left, "l1").definite


def test_resolve_partitions_the_readings():
    ur = negated_ur()
    left, right = negation_resolve(ur, "l1")
    parent = {print_uformula(d) for d in delta(URNode(ur))}
    left_set = {print_uformula(d) for d in delta(URNode(left))}
    right_set = {print_uformula(d) for d in delta(URNode(right))}
    assert len(parent) == 6
    assert len(left_set) == 3 and len(right_set) == 3
    assert left_set | right_set == parent
    assert not left_set & right_set


def test_left_branch_readings():
    ur = negated_ur()
    left, _ = negation_resolve(ur, "l1")
    assert [print_uformula(d) for d in delta(URNode(left))] == [
        "exists y. (movie(y) & forall x. (boy(x) -> ~see(x,y)))",
        "forall x. (boy(x) -> exists y. (movie(y) & ~see(x,y)))",
        "forall x. (boy(x) -> ~exists y. (movie(y) & see(x,y)))",
    ]


def test_resolve_rejects_definite_labels():
    with pytest.raises(URError) as err:
        negation_resolve(negated_ur(), "l2")
    assert "already definite" in str(err.value)


def test_resolve_checks_the_witness():
    with pytest.raises(URError):
        negation_resolve(negated_ur(), "l1", witness="l9")


# ---------------------------------------------------------------------------
# shared instantiation state
# ---------------------------------------------------------------------------

def test_state_tracks_survivors_and_candidates():
    state = URState(two_scope_ur())
    assert len(survivors(state)) == 2
    assert candidates(state, 0) == ["l1", "l2"]
    assert state.describe() == "open"


def test_commit_narrows_the_state():
    state = URState(two_scope_ur()).commit(0, "l1")
    assert len(survivors(state)) == 1
    assert candidates(state, 1) == ["l2"]
    assert state.describe() == "#0:=l1"


def test_extra_constraints_narrow_the_state():
    state = URState(two_scope_ur()).with_extra(("l2", "#1"))
    assert len(survivors(state)) == 1
    assert survivors(state)[0].get(0) == "l1"


def test_commitments_feed_the_decision_order():
    open_state = URState(two_scope_ur())
    committed = open_state.commit(0, "l1")
    gained = sorted(set(decision_pairs(committed)) - set(decision_pairs(open_state)))
    assert gained == [("#2", "#1"), ("#2", "l1"), ("l2", "#1"), ("l2", "l1")]
    assert state_definite(committed, "l1")


def test_contradictory_state_has_no_survivors():
    state = URState(two_scope_ur()).commit(0, "l1").commit(0, "l2")
    assert survivors(state) == ()


# ---------------------------------------------------------------------------
# proving
# ---------------------------------------------------------------------------

def test_ambiguous_premise_entails_weak_reading():
    result = prove_tcup(parse_uformula("(%s) -> (%s)" % (TWO_SCOPE, WEAK)))
    assert result.proved and result.decisive and result.gamma_used == 1
    apps = result.stats["applications"]
    # the proof works inside the representation: interface, preference,
    # and commitment rules fire, the total split never does
    assert apps["T:UR"] == 2 and apps["Tu:forall"] == 2
    assert "Tu:UR" not in apps and "Fu:UR" not in apps


def test_strong_reading_entails_ambiguous_conclusion():
    result = prove_tcup(parse_uformula("(%s) -> (%s)" % (STRONG, TWO_SCOPE)))
    assert result.proved and result.gamma_used == 1
    apps = result.stats["applications"]
    assert apps["F:UR"] == 2 and apps["Fu:exists"] == 2
    assert "Tu:UR" not in apps and "Fu:UR" not in apps


def test_reflexivity_is_not_provable():
    result = prove_tcup(parse_uformula("(%s) -> (%s)" % (TWO_SCOPE, TWO_SCOPE)))
    assert not result.proved


def test_unused_ambiguity_is_never_expanded():
    result = prove_tcup(parse_uformula("((%s) & b) -> b" % PROPOSITIONAL))
    assert result.proved and result.decisive
    assert result.tableau.node_count() == 5
    assert result.stats["applications"] == {"F:imp": 1, "T:and": 1}


def test_non_special_material_falls_back_to_the_total_split():
    result = prove_tcup(parse_uformula("((%s) & b) -> (%s)"
                                       % (PROPOSITIONAL, PROPOSITIONAL)))
    assert not result.proved
    assert result.decisive
    apps = result.stats["applications"]
    assert apps["Tu:UR"] == 4 and apps["Fu:UR"] == 2


def test_plain_formulas_produce_the_plain_tableau():
    text = "((p -> q) & p) -> q"
    partial = prove_tcup(parse_uformula(text))
    plain = prove_tc(parse_uformula(text))
    assert partial.proved
    assert partial.tableau.node_count() == plain.tableau.node_count()


def test_saturation_trace_on_the_negated_scope_premise():
    result = prove_tcup_sequent([parse_uformula(NEGATED)], None,
                                SearchLimits(gamma_multiplicity=1))
    assert not result.proved
    records = result.tableau.records()
    assert records[0]["rule"] == "premise" and records[0]["sign"] == "T"
    # the interface rule opens a shared instance...
    assert records[1]["rule"] == "T:UR"
    assert records[1]["ur_state"] == "open" and records[1]["instance"] == 1
    # ...negation resolution splits on the indefinite universal...
    assert records[2]["rule"] == "Tu:pi" and records[2]["ur_state"] == "l2<=#1"
    assert records[3]["rule"] == "Tu:pi" and records[3]["ur_state"] == "l1<=#2"
    # ...then the preference rules commit the top hole on each side...
    assert records[4] == {"id": 5, "parent": 3, "sign": "T",
                          "formula": "forall x. (boy(x) -> #1)",
                          "rule": "Tu:forall", "instance": 1,
                          "ur_state": "#0:=l1; l2<=#1"}
    assert records[5]["rule"] == "Tu:forall"
    assert records[5]["formula"] == "exists y. (movie(y) & #3)"
    assert records[5]["ur_state"] == "#0:=l3; l2<=#1"
    # ...and classical rules take over on the exposed material
    assert records[6]["rule"] == "T:forall"
    assert records[6]["formula"] == "boy(X1) -> #1"
    assert records[7] == {"id": 8, "parent": 7, "sign": "F",
                          "formula": "boy(X1)", "rule": "T:imp"}
