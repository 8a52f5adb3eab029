"""Axiom schemas of the K/S/H system and a propositional tautology checker."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping

from .formula import (
    And,
    Bot,
    Formula,
    Howto,
    Implies,
    Know,
    Modal,
    Not,
    Or,
    Strat,
    Var,
    format_coalition,
)

EMPTY: frozenset[str] = frozenset()


class SchemaError(ValueError):
    pass


class TautologyLimitError(ValueError):
    pass


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    formula_slots: tuple[str, ...]
    coalition_slots: tuple[str, ...]
    side_condition: str  # "none" | "subset" | "disjoint"
    template: Callable[..., Formula]

    @property
    def arity(self) -> tuple[int, int]:
        return len(self.formula_slots), len(self.coalition_slots)


@dataclass(frozen=True)
class SchemaInstance:
    schema: AxiomSchema
    formulas: Mapping[str, Formula]
    coalitions: Mapping[str, frozenset[str]]
    result: Formula


def _truth(phi, psi, C, D):
    return Implies(Know(C, phi), phi)


def _neg_introspection(phi, psi, C, D):
    return Implies(Not(Know(C, phi)), Know(C, Not(Know(C, phi))))


def _distributivity(phi, psi, C, D):
    return Implies(Know(C, Implies(phi, psi)), Implies(Know(C, phi), Know(C, psi)))


def _monotonicity(phi, psi, C, D):
    return Implies(Know(C, phi), Know(D, phi))


def _cooperation(phi, psi, C, D):
    return Implies(Strat(C, Implies(phi, psi)), Implies(Strat(D, phi), Strat(C | D, psi)))


def _strategic_neg_introspection(phi, psi, C, D):
    return Implies(Not(Howto(C, phi)), Know(C, Not(Howto(C, phi))))


def _epistemic_cooperation(phi, psi, C, D):
    return Implies(Howto(C, Implies(phi, psi)), Implies(Howto(D, phi), Howto(C | D, psi)))


def _strategic_truth(phi, psi, C, D):
    return Implies(Howto(C, phi), Strat(C, phi))


def _epistemic_determinicity(phi, psi, C, D):
    return Implies(Howto(C, Implies(phi, psi)), Implies(Know(C, Strat(EMPTY, phi)), Howto(C, psi)))


def _empty_coalition(phi, psi, C, D):
    return Implies(Know(EMPTY, phi), Howto(EMPTY, phi))


def _nontermination(phi, psi, C, D):
    return Not(Strat(C, Bot()))


def _tautology(phi, psi, C, D):
    return phi


def _slots(spec) -> tuple[str, ...]:
    return (spec,) if isinstance(spec, str) else tuple(spec)


def _schema(name, fslots, cslots, cond, template):
    return AxiomSchema(name, _slots(fslots), _slots(cslots), cond, template)


# The eleven modal axioms, in their canonical order.
AXIOMS: tuple[AxiomSchema, ...] = (
    _schema("Truth", "phi", "C", "none", _truth),
    _schema("NegativeIntrospection", "phi", "C", "none", _neg_introspection),
    _schema("Distributivity", ("phi", "psi"), "C", "none", _distributivity),
    _schema("Monotonicity", "phi", ("C", "D"), "subset", _monotonicity),
    _schema("Cooperation", ("phi", "psi"), ("C", "D"), "disjoint", _cooperation),
    _schema("StrategicNegativeIntrospection", "phi", "C", "none", _strategic_neg_introspection),
    _schema("EpistemicCooperation", ("phi", "psi"), ("C", "D"), "disjoint", _epistemic_cooperation),
    _schema("StrategicTruth", "phi", "C", "none", _strategic_truth),
    _schema("EpistemicDeterminicity", ("phi", "psi"), "C", "none", _epistemic_determinicity),
    _schema("EmptyCoalition", "phi", (), "none", _empty_coalition),
    _schema("Nontermination", (), "C", "none", _nontermination),
)
PROPOSITIONAL_TAUTOLOGY = _schema("PropositionalTautology", "phi", (), "none", _tautology)
SCHEMAS: dict[str, AxiomSchema] = {s.name: s for s in AXIOMS + (PROPOSITIONAL_TAUTOLOGY,)}


def get_schema(name: str) -> AxiomSchema:
    try:
        return SCHEMAS[name]
    except KeyError:
        raise SchemaError(f"unknown axiom schema {name!r}") from None


def instantiate_schema(
    schema: AxiomSchema | str,
    phi: Formula | None = None,
    psi: Formula | None = None,
    C: frozenset[str] | None = None,
    D: frozenset[str] | None = None,
    *,
    tautology_limit: int = 16,
) -> SchemaInstance:
    """Substitute bindings into ``schema``, enforcing its side condition.

    Slots the schema does not use must be left as ``None``.
    """
    if isinstance(schema, str):
        schema = get_schema(schema)
    given_f = {"phi": phi, "psi": psi}
    given_c = {"C": None if C is None else frozenset(C), "D": None if D is None else frozenset(D)}
    for slot, val in list(given_f.items()) + list(given_c.items()):
        needed = slot in schema.formula_slots or slot in schema.coalition_slots
        if needed and val is None:
            raise SchemaError(f"{schema.name}: missing slot {slot}")
        if not needed and val is not None:
            raise SchemaError(f"{schema.name}: unexpected slot {slot}")

    c, d = given_c["C"], given_c["D"]
    if schema.side_condition == "subset" and not c <= d:
        raise SchemaError(
            f"{schema.name}: C must be a subset of D; {format_coalition(c - d)} not in D"
        )
    if schema.side_condition == "disjoint" and c & d:
        raise SchemaError(
            f"{schema.name}: C and D must be disjoint; disjointness violated by {format_coalition(c & d)}"
        )
    if schema.name == "PropositionalTautology" and not is_tautology(phi, limit=tautology_limit):
        raise SchemaError(f"{schema.name}: formula is not a propositional tautology")

    result = schema.template(phi, psi, c, d)
    return SchemaInstance(
        schema,
        {k: v for k, v in given_f.items() if v is not None},
        {k: v for k, v in given_c.items() if v is not None},
        result,
    )


def _atoms(f: Formula, out: dict[Formula, int]) -> None:
    if isinstance(f, (Var,) + Modal):
        out.setdefault(f, len(out))
    elif isinstance(f, Bot):
        pass
    elif isinstance(f, Not):
        _atoms(f.sub, out)
    else:
        _atoms(f.left, out)
        _atoms(f.right, out)


def _truth_value(f: Formula, val: dict[Formula, bool]) -> bool:
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        return not _truth_value(f.sub, val)
    if isinstance(f, Implies):
        return (not _truth_value(f.left, val)) or _truth_value(f.right, val)
    if isinstance(f, And):
        return _truth_value(f.left, val) and _truth_value(f.right, val)
    if isinstance(f, Or):
        return _truth_value(f.left, val) or _truth_value(f.right, val)
    return val[f]


def is_tautology(f: Formula, limit: int = 16) -> bool:
    """Truth-table check treating variables and maximal modal subformulas as atoms.

    Syntactically equal subformulas share an atom.  Raises
    :class:`TautologyLimitError` when more than ``limit`` atoms appear.
    """
    index: dict[Formula, int] = {}
    _atoms(f, index)
    atoms = list(index)
    if len(atoms) > limit:
        raise TautologyLimitError(f"{len(atoms)} atoms exceed the limit of {limit}")
    for bits in itertools.product((False, True), repeat=len(atoms)):
        if not _truth_value(f, dict(zip(atoms, bits))):
            return False
    return True
