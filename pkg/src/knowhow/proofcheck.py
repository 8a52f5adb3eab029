"""Checker for numbered Hilbert derivations.

Proof files look like::

    theorem lemma3_a_ab
    1. p -> p  by Axiom(PropositionalTautology; phi=p -> p)
    2. H{b} (p -> p)  by necH {b} 1
    3. H{b} (p -> p) -> H{a} p -> H{a,b} p  by Axiom(EpistemicCooperation; phi=p; psi=p; C={b}; D={a})
    4. H{a} p -> H{a,b} p  by mp 2,3
    qed

``mp i,j`` needs line ``j`` to be exactly ``line_i -> this``.  ``thm name`` cites a
previously accepted hypothesis-free theorem.  A header ``theorem name [hyp: f; g]``
declares hypotheses; lines that depend on them may only be combined by modus
ponens, never necessitated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Union

from .axioms import SCHEMAS, SchemaError, TautologyLimitError, instantiate_schema
from .formula import (
    Formula,
    FormulaSyntaxError,
    Howto,
    Implies,
    Know,
    format_coalition,
    format_formula,
    parse_coalition,
    parse_formula,
)


class ProofSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class AxiomStep:
    schema: str
    formulas: dict = field(default_factory=dict)  # "phi"/"psi" -> Formula
    coalitions: dict = field(default_factory=dict)  # "C"/"D" -> frozenset


@dataclass(frozen=True)
class Hypothesis:
    pass


@dataclass(frozen=True)
class ModusPonens:
    minor: int  # the antecedent line
    major: int  # the implication line


@dataclass(frozen=True)
class NecK:
    premise: int
    coalition: frozenset[str]


@dataclass(frozen=True)
class NecH:
    premise: int
    coalition: frozenset[str]


@dataclass(frozen=True)
class TheoremRef:
    name: str


Justification = Union[AxiomStep, Hypothesis, ModusPonens, NecK, NecH, TheoremRef]


@dataclass(frozen=True)
class ProofLine:
    index: int
    formula: Formula
    justification: Justification


@dataclass
class Derivation:
    name: str
    lines: list[ProofLine]
    hypotheses: list[Formula] = field(default_factory=list)

    @property
    def conclusion(self) -> Formula | None:
        return self.lines[-1].formula if self.lines else None


@dataclass(frozen=True)
class ProofResult:
    name: str
    accepted: bool
    line: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.accepted


class TheoremDB:
    """Append-only store of accepted hypothesis-free theorems."""

    def __init__(self) -> None:
        self._theorems: dict[str, Formula] = {}

    def __contains__(self, name: str) -> bool:
        return name in self._theorems

    def __getitem__(self, name: str) -> Formula:
        return self._theorems[name]

    def __len__(self) -> int:
        return len(self._theorems)

    def names(self) -> list[str]:
        return list(self._theorems)

    def add(self, d: Derivation, result: ProofResult) -> None:
        if not result.accepted:
            raise ValueError(f"{d.name}: only accepted derivations can be stored")
        if d.hypotheses:
            raise ValueError(f"{d.name}: derivations with hypotheses are not theorems")
        self._theorems[d.name] = d.conclusion


def _line_error(d: Derivation, line: ProofLine, reason: str) -> ProofResult:
    return ProofResult(d.name, False, line.index, reason)


def check_proof(
    d: Derivation,
    db: TheoremDB | None = None,
    *,
    schemas: Iterable[str] | None = None,
) -> ProofResult:
    """Check every line of ``d``; reject at the first badly justified line.

    ``schemas`` restricts which axiom schemas may be cited (all by default).
    """
    db = db if db is not None else TheoremDB()
    allowed = set(SCHEMAS) if schemas is None else set(schemas)
    if not d.lines:
        return ProofResult(d.name, False, None, "empty derivation")

    formulas: dict[int, Formula] = {}
    dependent: dict[int, bool] = {}
    for line in d.lines:
        j = line.justification
        if line.index in formulas:
            return _line_error(d, line, f"duplicate line number {line.index}")
        cited = [c for c in _citations(j)]
        for c in cited:
            if c >= line.index:
                return _line_error(d, line, f"cites line {c}, which is not earlier")
            if c not in formulas:
                return _line_error(d, line, f"cites missing line {c}")
        f = line.formula
        dep = False

        if isinstance(j, AxiomStep):
            if j.schema not in allowed:
                return _line_error(d, line, f"axiom schema {j.schema} is not available")
            try:
                inst = instantiate_schema(
                    j.schema,
                    j.formulas.get("phi"),
                    j.formulas.get("psi"),
                    j.coalitions.get("C"),
                    j.coalitions.get("D"),
                )
            except (SchemaError, TautologyLimitError) as exc:
                return _line_error(d, line, f"bad instance: {exc}")
            if inst.result != f:
                return _line_error(
                    d, line, f"bad instance: {j.schema} yields {format_formula(inst.result)}"
                )
        elif isinstance(j, Hypothesis):
            if f not in d.hypotheses:
                return _line_error(d, line, "not among the declared hypotheses")
            dep = True
        elif isinstance(j, ModusPonens):
            minor, major = formulas[j.minor], formulas[j.major]
            if major != Implies(minor, f):
                return _line_error(
                    d, line, f"mismatched modus ponens: line {j.major} is not line {j.minor} -> this line"
                )
            dep = dependent[j.minor] or dependent[j.major]
        elif isinstance(j, (NecK, NecH)):
            rule = "necK" if isinstance(j, NecK) else "necH"
            if dependent[j.premise]:
                return _line_error(
                    d, line, f"illegal {rule}: line {j.premise} depends on hypotheses"
                )
            wrap = Know if isinstance(j, NecK) else Howto
            if f != wrap(j.coalition, formulas[j.premise]):
                return _line_error(
                    d, line, f"{rule} {format_coalition(j.coalition)} {j.premise} does not yield this line"
                )
        elif isinstance(j, TheoremRef):
            if j.name not in db:
                return _line_error(d, line, f"unknown theorem {j.name!r}")
            if db[j.name] != f:
                return _line_error(d, line, f"theorem {j.name} states {format_formula(db[j.name])}")
        else:
            return _line_error(d, line, f"unknown justification {j!r}")
        formulas[line.index] = f
        dependent[line.index] = dep
    return ProofResult(d.name, True)


def _citations(j: Justification) -> list[int]:
    if isinstance(j, ModusPonens):
        return [j.minor, j.major]
    if isinstance(j, (NecK, NecH)):
        return [j.premise]
    return []


# --- proof files -------------------------------------------------------------

_HEADER_RE = re.compile(r"^theorem\s+([A-Za-z][A-Za-z0-9_]*)\s*(?:\[\s*hyp\s*:(.*)\])?\s*$")
_LINE_RE = re.compile(
    r"^(\d+)\.\s+(.*?)\s+by\s+"
    r"(Axiom\(.*\)|hyp|mp\s+\d+\s*,\s*\d+|nec[KH]\s*\{[^}]*\}\s*\d+|thm\s+[A-Za-z][A-Za-z0-9_]*)\s*$"
)


def _parse_justification(text: str, lineno: int) -> Justification:
    if text == "hyp":
        return Hypothesis()
    if text.startswith("mp"):
        i, j = (int(x) for x in text[2:].split(","))
        return ModusPonens(i, j)
    if text.startswith("nec"):
        kind = text[3]
        m = re.match(r"nec[KH]\s*(\{[^}]*\})\s*(\d+)$", text)
        c = parse_coalition(m.group(1))
        return (NecK if kind == "K" else NecH)(int(m.group(2)), c)
    if text.startswith("thm"):
        return TheoremRef(text[3:].strip())
    body = text[len("Axiom(") : -1]
    parts = [p.strip() for p in body.split(";")]
    name, bindings = parts[0], parts[1:]
    if name not in SCHEMAS:
        raise ProofSyntaxError(f"unknown axiom schema {name!r}", lineno)
    formulas, coalitions = {}, {}
    for b in bindings:
        if "=" not in b:
            raise ProofSyntaxError(f"bad binding {b!r}", lineno)
        key, val = (x.strip() for x in b.split("=", 1))
        if key in ("phi", "psi"):
            formulas[key] = parse_formula(val)
        elif key in ("C", "D"):
            coalitions[key] = parse_coalition(val)
        else:
            raise ProofSyntaxError(f"unknown slot {key!r}", lineno)
    return AxiomStep(name, formulas, coalitions)


def parse_proofs(text: str) -> list[Derivation]:
    """Parse every ``theorem ... qed`` block in ``text``."""
    out: list[Derivation] = []
    current: Derivation | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if current is None:
                m = _HEADER_RE.match(line)
                if not m:
                    raise ProofSyntaxError(f"expected 'theorem <name>', got {line!r}", lineno)
                hyps = [parse_formula(h) for h in (m.group(2) or "").split(";") if h.strip()]
                current = Derivation(m.group(1), [], hyps)
            elif line == "qed":
                out.append(current)
                current = None
            else:
                m = _LINE_RE.match(line)
                if not m:
                    raise ProofSyntaxError(f"cannot parse proof line {line!r}", lineno)
                current.lines.append(
                    ProofLine(int(m.group(1)), parse_formula(m.group(2)), _parse_justification(m.group(3), lineno))
                )
        except FormulaSyntaxError as exc:
            raise ProofSyntaxError(f"formula error: {exc}", lineno) from exc
    if current is not None:
        raise ProofSyntaxError(f"theorem {current.name} lacks 'qed'")
    return out


def format_derivation(d: Derivation) -> str:
    head = f"theorem {d.name}"
    if d.hypotheses:
        head += " [hyp: " + "; ".join(format_formula(h) for h in d.hypotheses) + "]"
    lines = [head]
    for ln in d.lines:
        lines.append(f"{ln.index}. {format_formula(ln.formula)}  by {_format_justification(ln.justification)}")
    lines.append("qed")
    return "\n".join(lines) + "\n"


def _format_justification(j: Justification) -> str:
    if isinstance(j, Hypothesis):
        return "hyp"
    if isinstance(j, ModusPonens):
        return f"mp {j.minor},{j.major}"
    if isinstance(j, NecK):
        return f"necK {format_coalition(j.coalition)} {j.premise}"
    if isinstance(j, NecH):
        return f"necH {format_coalition(j.coalition)} {j.premise}"
    if isinstance(j, TheoremRef):
        return f"thm {j.name}"
    parts = [j.schema]
    parts += [f"{k}={format_formula(j.formulas[k])}" for k in ("phi", "psi") if k in j.formulas]
    parts += [f"{k}={format_coalition(j.coalitions[k])}" for k in ("C", "D") if k in j.coalitions]
    return "Axiom(" + "; ".join(parts) + ")"


# --- bundled corpus ----------------------------------------------------------

CORPUS_FILES = ("lemma1.hpf", "lemma2.hpf", "lemma3.hpf", "lemma4.hpf", "lemma5.hpf")


def load_corpus() -> list[Derivation]:
    """Bundled ground derivations, in dependency order."""
    pkg = resources.files("knowhow") / "data" / "proofs"
    out: list[Derivation] = []
    for name in CORPUS_FILES:
        out.extend(parse_proofs((pkg / name).read_text(encoding="utf-8")))
    return out


def check_corpus(
    derivations: Iterable[Derivation] | None = None,
    db: TheoremDB | None = None,
    *,
    schemas: Iterable[str] | None = None,
) -> list[ProofResult]:
    """Check derivations in order, storing each accepted theorem for later citation."""
    derivations = load_corpus() if derivations is None else list(derivations)
    db = db if db is not None else TheoremDB()
    report = []
    for d in derivations:
        res = check_proof(d, db, schemas=schemas)
        if res.accepted and not d.hypotheses:
            db.add(d, res)
        report.append(res)
    return report
