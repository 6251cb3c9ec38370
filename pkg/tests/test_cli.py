"""Tests for the command-line interface."""

import json

import pytest

from scopetab.cli import main

TWO_SCOPE = ("ur { l0: #0 ; l1: forall x. (man(x) -> #1) ; "
             "l2: exists y. (woman(y) & #2) ; l3: love(x,y) ; "
             "constraints { l1 <= #0 ; l2 <= #0 ; l3 <= #1 ; l3 <= #2 } }")
WEAK = "forall x. (man(x) -> exists y. (woman(y) & love(x,y)))"
STRONG = "exists y. (woman(y) & forall x. (man(x) -> love(x,y)))"


# ---------------------------------------------------------------------------
# disambiguate
# ---------------------------------------------------------------------------

def test_disambiguate_lists_readings_sorted(capsys):
    assert main(["disambiguate", TWO_SCOPE]) == 0
    out = capsys.readouterr().out
    assert out == "%s\n%s\n" % (STRONG, WEAK)


def test_disambiguate_structured(capsys):
    assert main(["disambiguate", "--format", "structured", TWO_SCOPE]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    records = [json.loads(line) for line in lines]
    assert records[0] == {"index": 0, "reading": STRONG, "line": STRONG}
    assert records[1]["index"] == 1


def test_formula_argument_may_be_a_file(tmp_path, capsys):
    path = tmp_path / "two_scope.ur"
    path.write_text(TWO_SCOPE, encoding="utf-8")
    assert main(["disambiguate", str(path)]) == 0
    assert capsys.readouterr().out.count("\n") == 2


# ---------------------------------------------------------------------------
# prove
# ---------------------------------------------------------------------------

def test_prove_tautology(capsys):
    assert main(["prove", "--calculus", "tc", "p | ~p"]) == 0
    assert capsys.readouterr().out == "tc: proved (gamma=1, nodes=4, branches=1)\n"


def test_prove_defaults_to_the_partial_calculus(capsys):
    assert main(["prove", "p -> q"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("tcup: not-proved-within-limits")


def test_prove_with_premises(capsys):
    assert main(["prove", "--premise", TWO_SCOPE, WEAK]) == 0
    assert capsys.readouterr().out.startswith("tcup: proved")


def test_prove_structured_with_tree(capsys):
    assert main(["prove", "--format", "structured", "--tree",
                 "--calculus", "tc", "p | ~p"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    summary = json.loads(lines[0])
    assert summary == {"calculus": "tc", "proved": True, "decisive": True,
                       "gamma": 1, "nodes": 4, "branches": 1}
    nodes = [json.loads(line) for line in lines[1:]]
    assert [n["id"] for n in nodes] == [1, 2, 3, 4]


def test_prove_dot_output(capsys):
    assert main(["prove", "--format", "dot", "--calculus", "tc", "p -> p"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph tableau {")
    assert "close" in out


def test_prove_tree_text(capsys):
    assert main(["prove", "--tree", "--calculus", "tc", "p -> p"]) == 0
    out = capsys.readouterr().out
    assert "(1) F: p -> p   <goal>" in out
    assert "closed:" in out


def test_prove_rejects_ambiguity_in_the_plain_calculus(capsys):
    assert main(["prove", "--calculus", "tc", TWO_SCOPE]) == 2
    err = capsys.readouterr().err
    assert "error: conclusion is scope-ambiguous" in err


def test_prove_validates_limits(capsys):
    assert main(["prove", "--gamma", "0", "p -> p"]) == 2
    assert "at least 1" in capsys.readouterr().err


def test_prove_output_is_deterministic(capsys):
    args = ["prove", "--format", "structured", "--tree", "--premise",
            TWO_SCOPE, WEAK]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first


def test_prove_figure(tmp_path, capsys):
    target = tmp_path / "proof.png"
    assert main(["prove", "--calculus", "tc", "--figure", str(target),
                 "p | ~p"]) == 0
    capsys.readouterr()
    assert target.stat().st_size > 0


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def test_check_finds_the_reflexivity_counterexample(capsys):
    assert main(["check", "--premise", TWO_SCOPE, TWO_SCOPE,
                 "--max-domain", "2"]) == 1
    out = capsys.readouterr().out
    assert out == ("counterexample: model { domain = {a}; love = {}; "
                   "man = {}; woman = {} }\n")


def test_check_passes_valid_sequents(capsys):
    assert main(["check", "--premise", "forall x. (man(x) -> mortal(x))",
                 "--premise", "man(socrates)", "mortal(socrates)"]) == 0
    assert capsys.readouterr().out == "no counterexample up to domain size 3\n"


def test_check_against_a_model_file(tmp_path, capsys):
    model = tmp_path / "gap.model"
    model.write_text("model { domain = {a}; p = true; q = false }",
                     encoding="utf-8")
    amb = ("ur { l0: #0 ; l1: #1 -> #2 ; l2: p ; l3: q ; "
           "constraints { l1 <= #0 ; l2 <= l1 ; l3 <= l1 } }")
    # the model satisfies p but not the ambiguous conclusion
    assert main(["check", "--premise", "p", amb,
                 "--model", str(model)]) == 1
    assert capsys.readouterr().out == "counterexample\n"
    # with q as the premise the premise itself already fails
    assert main(["check", "--premise", "q", amb,
                 "--model", str(model)]) == 0
    assert capsys.readouterr().out == "not a counterexample\n"


def test_check_structured(capsys):
    assert main(["check", "--format", "structured",
                 "--premise", TWO_SCOPE, TWO_SCOPE, "--max-domain", "2"]) == 1
    record = json.loads(capsys.readouterr().out)
    assert record["max_domain"] == 2
    assert record["counterexample"].startswith("model { domain = {a};")


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

def test_oracle_equivalence_suites(capsys):
    assert main(["oracle", "--suite", "tcu"]) == 0
    assert capsys.readouterr().out == \
        "tcu: 51/51 agree, 11 undecided within limits\n"
    assert main(["oracle", "--suite", "tcup"]) == 0
    assert capsys.readouterr().out == \
        "tcup: 51/51 agree, 11 undecided within limits\n"


def test_oracle_soundness_suite(capsys):
    assert main(["oracle", "--suite", "soundness"]) == 0
    out = capsys.readouterr().out
    assert out == "soundness: 39 proved entries, 0 violations\n"


def test_oracle_structured(capsys):
    assert main(["oracle", "--suite", "tcu", "--format", "structured"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["checked"] == 51 and record["agreed"] == 51
    assert record["disagreements"] == []


# ---------------------------------------------------------------------------
# error handling
# ---------------------------------------------------------------------------

def test_parse_errors_exit_with_two(capsys):
    assert main(["disambiguate", "p -> "]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_unknown_command_is_an_argparse_error():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
