"""Tests for the independent reading enumerator and the cross-check suites."""

from scopetab.oracle import (UR_NEGATED_SCOPE, UR_PROPOSITIONAL, UR_RESTRICTOR,
                             UR_TWO_SCOPE, STRONG_READING, WEAK_READING,
                             brute_force_readings, check_tcu_equivalence,
                             check_tcup_equivalence, corpus, delta_brute,
                             generated_entries, paper_entries,
                             run_equivalence_suite, soundness_sweep,
                             sweep_domain)
from scopetab.syntax import parse_uformula, print_uformula
from scopetab.ur import delta, join


def readings_of(text):
    return [print_uformula(d) for d in brute_force_readings(parse_uformula(text).ur)]


# ---------------------------------------------------------------------------
# the reference enumerator
# ---------------------------------------------------------------------------

def test_two_scope_readings():
    assert readings_of(UR_TWO_SCOPE) == [STRONG_READING, WEAK_READING]


def test_propositional_readings():
    assert readings_of(UR_PROPOSITIONAL) == ["p -> q", "q -> p"]


def test_negated_scope_has_six_readings():
    out = readings_of(UR_NEGATED_SCOPE)
    assert len(out) == 6
    assert "~forall x. (boy(x) -> exists y. (movie(y) & see(x,y)))" in out


def test_restrictor_readings():
    # the negated car-quantifier may sit in the restrictor or take scope
    # above it, and the bike-quantifier floats independently
    assert readings_of(UR_RESTRICTOR) == [
        "exists y. (bike(y) & forall x. ((man(x) & exists z. (car(z) & ~have(x,z))) -> ride(x,y)))",
        "exists y. (bike(y) & forall x. ((man(x) & ~exists z. (car(z) & have(x,z))) -> ride(x,y)))",
        "forall x. ((man(x) & exists z. (car(z) & ~have(x,z))) -> exists y. (bike(y) & ride(x,y)))",
        "forall x. ((man(x) & ~exists z. (car(z) & have(x,z))) -> exists y. (bike(y) & ride(x,y)))",
    ]


def test_restrictor_joins():
    ur = parse_uformula(UR_RESTRICTOR).ur
    assert join(ur, "l2", "l3") is None     # the two existentials never nest
    assert join(ur, "l1", "l4") == "l4"     # the negation sits inside l1


def test_delta_brute_on_plain_formulas():
    f = parse_uformula("p -> q")
    assert delta_brute(f) == [f]


def test_delta_brute_distributes():
    texts = [print_uformula(d)
             for d in delta_brute(parse_uformula("(%s) -> p" % UR_TWO_SCOPE))]
    assert texts == ["(%s) -> p" % STRONG_READING, "(%s) -> p" % WEAK_READING]


def test_enumerators_agree_on_the_whole_corpus():
    for name, formula in corpus():
        fast = [print_uformula(d) for d in delta(formula)]
        slow = [print_uformula(d) for d in delta_brute(formula)]
        assert fast == slow, name


# ---------------------------------------------------------------------------
# equivalence checks
# ---------------------------------------------------------------------------

def test_equivalence_check_on_a_provable_entry():
    f = parse_uformula("(%s) -> (%s)" % (UR_TWO_SCOPE, WEAK_READING))
    for checker in (check_tcu_equivalence, check_tcup_equivalence):
        check = checker(f, name="two-scope-to-weak")
        assert check.scoped_proved and check.readings_proved
        assert check.reading_count == 2
        assert check.agree() and check.decisive


def test_equivalence_check_on_reflexivity_is_agreed_but_open():
    f = parse_uformula("(%s) -> (%s)" % (UR_TWO_SCOPE, UR_TWO_SCOPE))
    check = check_tcu_equivalence(f)
    assert not check.scoped_proved and not check.readings_proved
    assert check.agree()
    assert not check.decisive       # the gamma cap keeps the verdict open


def test_equivalence_suite_over_the_corpus():
    tcu_report = run_equivalence_suite(check_tcu_equivalence)
    tcup_report = run_equivalence_suite(check_tcup_equivalence)
    for report in (tcu_report, tcup_report):
        assert report.checked == len(corpus())
        assert report.all_agree()
        assert report.agreed == report.checked
        assert len(report.undecided) == 11
    assert tcu_report.describe() == "51/51 agree, 11 undecided within limits"


# ---------------------------------------------------------------------------
# the corpus itself
# ---------------------------------------------------------------------------

def test_paper_entry_names():
    assert [name for name, _ in paper_entries()] == [
        "two-scope-to-weak", "two-scope-to-strong", "strong-to-two-scope",
        "two-scope-reflexivity", "ambiguous-weakening-right",
        "ambiguous-weakening-left", "boy-slept-not-instance",
        "two-scope-to-either", "negated-scope-weakening",
        "restrictor-weakening", "propositional-identity"]


def test_corpus_size_and_reading_bounds():
    entries = corpus()
    assert len(entries) >= 50
    for name, formula in entries:
        count = len(delta_brute(formula))
        assert 1 <= count <= 256, name   # wrappers may square a UR's readings


def test_generated_entries_are_reproducible():
    first = [(n, print_uformula(f)) for n, f in generated_entries(8)]
    second = [(n, print_uformula(f)) for n, f in generated_entries(8)]
    assert first == second
    assert len({text for _, text in first}) == 8


# ---------------------------------------------------------------------------
# soundness sweeping
# ---------------------------------------------------------------------------

def test_sweep_checks_only_claimed_proofs():
    p_implies_p = parse_uformula("p -> p")
    p_implies_q = parse_uformula("p -> q")
    report = soundness_sweep([("fine", (), p_implies_p, True),
                              ("unproved", (), p_implies_q, False)])
    assert report.checked == 1
    assert report.clean() and report.skipped == []


def test_sweep_flags_unsound_claims():
    bogus = parse_uformula("p -> q")
    report = soundness_sweep([("bogus", (), bogus, True)])
    assert report.violations == ["bogus"]
    assert not report.clean()


def test_sweep_reports_reduced_domains():
    wide = parse_uformula(
        "love(a,b) | r1(a,b) | r2(a,b) | r3(a,b) | ~love(a,b)")
    report = soundness_sweep([("wide", (), wide, True)], budget=2)
    assert report.clean()
    assert report.skipped == [("wide", 1)]


def test_sweep_domain_tracks_the_model_space():
    two = parse_uformula(UR_TWO_SCOPE)
    assert sweep_domain([two]) == 3
    assert sweep_domain([two], budget=1000) == 2
    assert sweep_domain([two], budget=2) == 1
