"""Tableau deduction for first-order formulas with quantifier scope ambiguity.

The package parses formulas that may embed underspecified scope
representations (label/hole constraint graphs), enumerates their
readings, evaluates them over finite models, and proves them in three
calculi: a classical free-variable tableau prover, one that totally
disambiguates every ambiguous node, and one that keeps ambiguity alive
and commits to scope decisions only when forced.
"""

from .models import (ConsequenceVerdict, Counterexample, FiniteModel,
                     ModelError, consequence_u, enumerate_models,
                     eval_classical, fals_u, parse_model, sat_u, signature)
from .oracle import (OracleReport, SoundnessReport, EquivalenceCheck,
                     brute_force_readings, check_tcu_equivalence, check_tcup_equivalence,
                     corpus, delta_brute, run_equivalence_suite,
                     soundness_sweep)
from .prooftree import (Closure, Node, ProofResult, SearchLimitError,
                        SearchLimits, Tableau)
from .syntax import (And, Atom, Const, Exists, ForAll, Func, Hole, Implies,
                     Not, Or, ParseError, URNode, Var, contains_hole,
                     contains_ur, free_variables, parse_uformula,
                     print_uformula, substitute)
from .tableaux import CalculusError, prove_tc, prove_tc_sequent
from .tcu import prove_tcu, prove_tcu_sequent
from .tcup import (DefinitenessReport, HoleGoal, URState, definiteness,
                   is_definite, negation_resolve, polarity, prove_tcup,
                   prove_tcup_sequent)
from .unification import unify, unify_atoms
from .ur import (UR, ConstraintCycleError, Instantiation, URError, URWarning,
                 close_constraints, delta, instantiations, join, plug)

__all__ = [
    "And", "Atom", "CalculusError", "Closure", "ConsequenceVerdict",
    "Const", "ConstraintCycleError", "Counterexample", "DefinitenessReport",
    "Exists", "FiniteModel", "ForAll", "Func", "Hole", "HoleGoal", "Implies",
    "Instantiation", "ModelError", "Node", "Not", "Or", "OracleReport",
    "ParseError", "ProofResult", "SearchLimitError", "SearchLimits",
    "SoundnessReport", "Tableau", "EquivalenceCheck", "UR", "URError", "URNode",
    "URState", "URWarning", "Var", "brute_force_readings", "check_tcu_equivalence",
    "check_tcup_equivalence", "close_constraints", "consequence_u", "contains_hole",
    "contains_ur", "corpus", "definiteness", "delta", "delta_brute",
    "enumerate_models", "eval_classical", "fals_u", "free_variables",
    "instantiations", "is_definite", "join", "negation_resolve",
    "parse_model", "parse_uformula", "plug", "polarity", "print_uformula",
    "prove_tc", "prove_tc_sequent", "prove_tcu", "prove_tcu_sequent",
    "prove_tcup", "prove_tcup_sequent", "run_equivalence_suite", "sat_u",
    "signature", "soundness_sweep", "substitute", "unify", "unify_atoms",
]

__version__ = "0.1.0"
