"""Finite algebra workbench: congruences, relational lemmas and term conditions."""

from .algebra import (DEFAULT_BUDGET, AlgebraError, AlgebraFormatError, App, BudgetExceeded,
                      FiniteAlgebra, OperationTable, Var, eval_term, generate_subpower,
                      load_algebra, parse_term, product_algebra)
from .congruences import (Congruence, CongLattice, congruence_generated, congruence_lattice,
                          is_distributive, is_modular, permutability)
from .lemmas import LemmaKind, check_lemma, check_majority_inequality, relational_inequality
from .properties import (check_DD, check_EEo_commute, check_PP, check_PPoPPo,
                         check_difunctional_all, check_positive_reflexive_are_equivalences,
                         check_reflexive_symmetric, is_difunctional)
from .relations import (BinRel, RelClass, compose, converse, enumerate_relations, is_compatible,
                        is_positive_setlevel)
from .terms import (find_lipparini_rs, find_majority, find_maltsev, find_pixley,
                    find_quaternary_pq, find_quaternary_pqx, solve_identity_system)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BUDGET", "AlgebraError", "AlgebraFormatError", "App", "BudgetExceeded",
    "FiniteAlgebra", "OperationTable", "Var", "eval_term", "generate_subpower", "load_algebra",
    "parse_term", "product_algebra", "Congruence", "CongLattice", "congruence_generated",
    "congruence_lattice", "is_distributive", "is_modular", "permutability", "check_DD",
    "LemmaKind", "check_lemma", "check_majority_inequality", "relational_inequality",
    "check_EEo_commute", "check_PP", "check_PPoPPo", "check_difunctional_all",
    "check_positive_reflexive_are_equivalences", "check_reflexive_symmetric", "is_difunctional",
    "BinRel", "RelClass", "compose", "converse", "enumerate_relations", "is_compatible",
    "is_positive_setlevel", "find_lipparini_rs", "find_majority", "find_maltsev", "find_pixley",
    "find_quaternary_pq", "find_quaternary_pqx", "solve_identity_system",
]
