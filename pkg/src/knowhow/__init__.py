"""Model checking, soundness fuzzing and proof checking for the logic of
distributed knowledge (K), coalition strategies (S) and know-how (H)."""

from .axioms import AXIOMS, SCHEMAS, instantiate_schema, is_tautology
from .formula import And, Bot, Howto, Implies, Know, Not, Or, Strat, Var, format_formula, parse_formula
from .model import EpistemicTransitionSystem, load_model, validate_model
from .semantics import Verdict, check, check_validity, extension

__all__ = [
    "AXIOMS",
    "SCHEMAS",
    "And",
    "Bot",
    "EpistemicTransitionSystem",
    "Howto",
    "Implies",
    "Know",
    "Not",
    "Or",
    "Strat",
    "Var",
    "Verdict",
    "check",
    "check_validity",
    "extension",
    "format_formula",
    "instantiate_schema",
    "is_tautology",
    "load_model",
    "parse_formula",
    "validate_model",
]
