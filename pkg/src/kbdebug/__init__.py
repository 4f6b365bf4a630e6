"""Interactive debugger for propositional knowledge bases."""

from .dpi import (
    DPI,
    Diagnosis,
    KnowledgeBase,
    TestCase,
    is_admissible,
    is_diagnosis,
    is_kb_valid,
    parse_dpi,
    solution_kb,
)
from .conflict import NO_CONFLICT, find_minimal_conflict
from .formulas import Formula, parse_formula, render, syntactic_profile
from .hstree import hs, non_interactive_debug
from .interactive import ScriptedOracle, SessionParams, SessionState, run_session
from .probability import (
    formula_fault_probs,
    get_mode,
    p_nodes,
    posterior_diag_probs,
    prior_diag_probs,
    uniform_formula_probs,
)
from .query import generate_query_pool, get_entailments, min_q, q_partition, select_best_query
from .reasoner import entails, is_consistent

__all__ = [
    "DPI",
    "Diagnosis",
    "Formula",
    "KnowledgeBase",
    "NO_CONFLICT",
    "ScriptedOracle",
    "SessionParams",
    "SessionState",
    "TestCase",
    "entails",
    "find_minimal_conflict",
    "formula_fault_probs",
    "generate_query_pool",
    "get_entailments",
    "get_mode",
    "hs",
    "is_admissible",
    "is_consistent",
    "is_diagnosis",
    "is_kb_valid",
    "min_q",
    "non_interactive_debug",
    "p_nodes",
    "parse_dpi",
    "parse_formula",
    "posterior_diag_probs",
    "prior_diag_probs",
    "q_partition",
    "render",
    "run_session",
    "select_best_query",
    "solution_kb",
    "syntactic_profile",
    "uniform_formula_probs",
]
