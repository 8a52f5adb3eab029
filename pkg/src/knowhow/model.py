"""Finite epistemic transition systems: data types, file format, validation.

A model file is line oriented, ``#`` starts a comment::

    agents: a b
    votes: C D
    states: u w w1
    indist a: {u,w}          # omitted states are singletons
    label p: w
    trans u [a=C,b=C] -> w1  # [] matches every profile
    trans u [a=D] -> w

The mechanism is presented as wildcard patterns: a full vote profile matches a
pattern when it agrees with the pattern's constraint on every constrained agent.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .formula import IDENT_RE, format_coalition

StrategyProfile = Mapping[str, str]


class ModelError(ValueError):
    """Base class for everything that can go wrong with a model."""


class ModelSyntaxError(ModelError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.reason = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnknownReferenceError(ModelError):
    pass


class ModelValidationError(ModelError):
    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


@dataclass(frozen=True)
class Violation:
    kind: str  # "totality" | "partition" | "reference"
    message: str
    state: str | None = None
    agent: str | None = None
    profile: tuple[tuple[str, str], ...] | None = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class TransitionPattern:
    source: str
    constraint: tuple[tuple[str, str], ...]  # sorted (agent, vote) pairs
    target: str

    def matches(self, profile: Mapping[str, str]) -> bool:
        return all(profile.get(a) == v for a, v in self.constraint)

    def __str__(self) -> str:
        inner = ",".join(f"{a}={v}" for a, v in self.constraint)
        return f"trans {self.source} [{inner}] -> {self.target}"


def profile_key(profile: Mapping[str, str]) -> tuple[tuple[str, str], ...]:
    return tuple(sorted(profile.items()))


def format_profile(profile: Mapping[str, str]) -> str:
    return ",".join(f"{a}={v}" for a, v in sorted(profile.items()))


@dataclass
class EpistemicTransitionSystem:
    agents: tuple[str, ...]
    votes: tuple[str, ...]
    states: tuple[str, ...]
    indist: dict[str, tuple[frozenset[str], ...]]
    transitions: tuple[TransitionPattern, ...]
    valuation: dict[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.agents = tuple(sorted(self.agents))
        self.votes = tuple(sorted(self.votes))
        self.states = tuple(self.states)
        self.indist = dict(self.indist)
        self._state_set = frozenset(self.states)
        self._all_states = frozenset(self.states)
        self._block_of: dict[str, dict[str, frozenset[str]]] = {}
        for a in self.agents:
            blocks = self.indist.get(a, ())
            covered = frozenset().union(*blocks) if blocks else frozenset()
            blocks = tuple(blocks) + tuple(frozenset([s]) for s in self.states if s not in covered)
            self.indist[a] = blocks
            self._block_of[a] = {s: b for b in blocks for s in b}
        self._outcomes: dict[str, dict[tuple, frozenset[str]]] | None = None
        self._succ_cache: dict[tuple, frozenset[str]] = {}
        self._class_cache: dict[tuple, frozenset[str]] = {}

    # --- lookups -------------------------------------------------------------

    def require_state(self, w: str) -> None:
        if w not in self._state_set:
            raise UnknownReferenceError(f"unknown state {w!r}")

    def require_agents(self, agents: Iterable[str]) -> None:
        unknown = sorted(set(agents) - set(self.agents))
        if unknown:
            raise UnknownReferenceError(f"undeclared agent(s): {', '.join(unknown)}")

    def label(self, var: str) -> frozenset[str]:
        return self.valuation.get(var, frozenset())

    def full_profiles(self) -> Iterator[dict[str, str]]:
        return profiles(self.agents, self.votes)

    def _full_outcomes(self) -> dict[str, dict[tuple, frozenset[str]]]:
        if self._outcomes is None:
            by_source: dict[str, list[TransitionPattern]] = {s: [] for s in self.states}
            for t in self.transitions:
                by_source.setdefault(t.source, []).append(t)
            out: dict[str, dict[tuple, frozenset[str]]] = {}
            for s in self.states:
                table = {}
                for prof in self.full_profiles():
                    table[profile_key(prof)] = frozenset(
                        t.target for t in by_source[s] if t.matches(prof)
                    )
                out[s] = table
            self._outcomes = out
        return self._outcomes

    # --- queries -------------------------------------------------------------

    def indist_class(self, coalition: Iterable[str], w: str) -> frozenset[str]:
        """States every member of ``coalition`` confuses with ``w``."""
        c = frozenset(coalition)
        key = (c, w)
        hit = self._class_cache.get(key)
        if hit is not None:
            return hit
        self.require_state(w)
        self.require_agents(c)
        cls = self._all_states
        for a in c:
            cls = cls & self._block_of[a][w]
        self._class_cache[key] = cls
        return cls

    def successors(self, w: str, profile: StrategyProfile) -> frozenset[str]:
        """States reachable from ``w`` by some full profile extending ``profile``."""
        pk = profile_key(profile)
        key = (w, pk)
        hit = self._succ_cache.get(key)
        if hit is not None:
            return hit
        self.require_state(w)
        self.require_agents(profile)
        bad_votes = sorted({v for v in profile.values()} - set(self.votes))
        if bad_votes:
            raise UnknownReferenceError(f"undeclared vote(s): {', '.join(bad_votes)}")
        result: set[str] = set()
        for full, targets in self._full_outcomes()[w].items():
            fd = dict(full)
            if all(fd[a] == v for a, v in pk):
                result |= targets
        out = frozenset(result)
        self._succ_cache[key] = out
        return out

    # --- export --------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "agents": list(self.agents),
            "votes": list(self.votes),
            "states": list(self.states),
            "indist": {
                a: [sorted(b, key=self.states.index) for b in self.indist[a] if len(b) > 1]
                for a in self.agents
            },
            "transitions": [
                {"source": t.source, "constraint": dict(t.constraint), "target": t.target}
                for t in self.transitions
            ],
            "valuation": {p: sorted(ws, key=self.states.index) for p, ws in sorted(self.valuation.items())},
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def to_source(self) -> str:
        lines = [
            "agents: " + " ".join(self.agents),
            "votes: " + " ".join(self.votes),
            "states: " + " ".join(self.states),
        ]
        for a, blocks in self.to_dict()["indist"].items():
            if blocks:
                lines.append(f"indist {a}: " + " ".join(format_coalition(b) for b in blocks))
        for p, ws in self.to_dict()["valuation"].items():
            lines.append(f"label {p}: " + " ".join(ws))
        lines.extend(str(t) for t in self.transitions)
        return "\n".join(lines) + "\n"


def profiles(agents: Iterable[str], votes: Iterable[str]) -> Iterator[dict[str, str]]:
    """All assignments of ``votes`` to ``agents``, in lexicographic order."""
    ag = sorted(agents)
    vs = sorted(votes)
    for combo in itertools.product(vs, repeat=len(ag)):
        yield dict(zip(ag, combo))


def from_dict(data: Mapping) -> EpistemicTransitionSystem:
    m = EpistemicTransitionSystem(
        agents=tuple(data["agents"]),
        votes=tuple(data["votes"]),
        states=tuple(data["states"]),
        indist={a: tuple(frozenset(b) for b in blocks) for a, blocks in data.get("indist", {}).items()},
        transitions=tuple(
            TransitionPattern(t["source"], tuple(sorted(t["constraint"].items())), t["target"])
            for t in data["transitions"]
        ),
        valuation={p: frozenset(ws) for p, ws in data.get("valuation", {}).items()},
    )
    return m


def validate_model(m: EpistemicTransitionSystem) -> list[Violation]:
    """Return every broken invariant of ``m``; an empty list means the model is valid."""
    out: list[Violation] = []
    states = set(m.states)
    agents = set(m.agents)
    votes = set(m.votes)
    if not m.agents:
        out.append(Violation("reference", "no agents declared"))
    if not m.votes:
        out.append(Violation("reference", "no votes declared"))
    if not m.states:
        out.append(Violation("reference", "no states declared"))

    for a, blocks in m.indist.items():
        if a not in agents:
            out.append(Violation("reference", f"indist for undeclared agent {a!r}", agent=a))
            continue
        seen: dict[str, int] = {}
        for i, b in enumerate(blocks):
            if not b:
                out.append(Violation("partition", f"agent {a}: empty block", agent=a))
            for s in sorted(b):
                if s not in states:
                    out.append(Violation("reference", f"agent {a}: undeclared state {s!r} in block", state=s, agent=a))
                if s in seen and seen[s] != i:
                    out.append(Violation("partition", f"agent {a}: state {s} lies in overlapping blocks", state=s, agent=a))
                seen[s] = i
        missing = sorted(states - set(seen))
        for s in missing:
            out.append(Violation("partition", f"agent {a}: state {s} not covered", state=s, agent=a))

    for p, ws in m.valuation.items():
        for s in sorted(set(ws) - states):
            out.append(Violation("reference", f"label {p}: undeclared state {s!r}", state=s))

    ref_ok = True
    for t in m.transitions:
        for s in (t.source, t.target):
            if s not in states:
                ref_ok = False
                out.append(Violation("reference", f"{t}: undeclared state {s!r}", state=s))
        for a, v in t.constraint:
            if a not in agents:
                ref_ok = False
                out.append(Violation("reference", f"{t}: undeclared agent {a!r}", agent=a))
            if v not in votes:
                ref_ok = False
                out.append(Violation("reference", f"{t}: undeclared vote {v!r}"))

    if ref_ok and m.agents and m.votes:
        by_source: dict[str, list[TransitionPattern]] = {s: [] for s in m.states}
        for t in m.transitions:
            by_source[t.source].append(t)
        for s in m.states:
            for prof in m.full_profiles():
                if not any(t.matches(prof) for t in by_source[s]):
                    out.append(
                        Violation(
                            "totality",
                            f"state {s} has no transition for profile [{format_profile(prof)}]",
                            state=s,
                            profile=profile_key(prof),
                        )
                    )
    return out


# --- loader ------------------------------------------------------------------

_DECL_RE = re.compile(r"^(agents|votes|states)\s*:\s*(.*)$")
_INDIST_RE = re.compile(r"^indist\s+(\S+)\s*:\s*(.*)$")
_LABEL_RE = re.compile(r"^label\s+(\S+)\s*:\s*(.*)$")
_TRANS_RE = re.compile(r"^trans\s+(\S+)\s*\[([^\]]*)\]\s*->\s*(\S+)$")
_BLOCK_RE = re.compile(r"\{([^{}]*)\}")


def _idents(text: str, what: str, lineno: int) -> list[str]:
    names = text.split()
    for n in names:
        if not IDENT_RE.fullmatch(n):
            raise ModelSyntaxError(f"bad {what} name {n!r}", lineno)
    if len(set(names)) != len(names):
        dup = sorted({n for n in names if names.count(n) > 1})
        raise ModelSyntaxError(f"duplicate {what}: {', '.join(dup)}", lineno)
    return names


def load_model(text: str) -> EpistemicTransitionSystem:
    """Parse and validate a model file.

    Raises :class:`ModelSyntaxError` for malformed lines, undeclared names or
    duplicate declarations, and :class:`ModelValidationError` when the parsed
    model breaks totality or partition invariants.
    """
    decls: dict[str, list[str]] = {}
    indist: dict[str, tuple[frozenset[str], ...]] = {}
    valuation: dict[str, frozenset[str]] = {}
    raw_trans: list[tuple[int, str, str, str]] = []
    raw_indist: list[tuple[int, str, str]] = []
    raw_labels: list[tuple[int, str, str]] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _DECL_RE.match(line):
            key = m.group(1)
            if key in decls:
                raise ModelSyntaxError(f"duplicate '{key}' declaration", lineno)
            decls[key] = _idents(m.group(2), key[:-1], lineno)
        elif m := _INDIST_RE.match(line):
            raw_indist.append((lineno, m.group(1), m.group(2)))
        elif m := _LABEL_RE.match(line):
            raw_labels.append((lineno, m.group(1), m.group(2)))
        elif m := _TRANS_RE.match(line):
            raw_trans.append((lineno, m.group(1), m.group(2), m.group(3)))
        else:
            raise ModelSyntaxError(f"cannot parse {line!r}", lineno)

    for key in ("agents", "votes", "states"):
        if key not in decls:
            raise ModelSyntaxError(f"missing '{key}:' declaration")
        if not decls[key]:
            raise ModelSyntaxError(f"'{key}:' declares nothing")
    agents, votes, states = set(decls["agents"]), set(decls["votes"]), set(decls["states"])

    def need_state(s: str, lineno: int) -> str:
        if s not in states:
            raise ModelSyntaxError(f"undeclared state {s!r}", lineno)
        return s

    for lineno, a, rest in raw_indist:
        if a not in agents:
            raise ModelSyntaxError(f"undeclared agent {a!r}", lineno)
        if a in indist:
            raise ModelSyntaxError(f"duplicate 'indist {a}' line", lineno)
        if _BLOCK_RE.sub("", rest).strip():
            raise ModelSyntaxError(f"malformed partition blocks {rest!r}", lineno)
        blocks = []
        for body in _BLOCK_RE.findall(rest):
            members = [x.strip() for x in body.split(",") if x.strip()]
            if len(set(members)) != len(members):
                raise ModelSyntaxError("duplicate state inside a block", lineno)
            blocks.append(frozenset(need_state(s, lineno) for s in members))
        indist[a] = tuple(blocks)

    for lineno, p, rest in raw_labels:
        if not IDENT_RE.fullmatch(p) or p in ("true", "false"):
            raise ModelSyntaxError(f"bad variable name {p!r}", lineno)
        if p in valuation:
            raise ModelSyntaxError(f"duplicate 'label {p}' line", lineno)
        valuation[p] = frozenset(need_state(s, lineno) for s in rest.split())

    transitions = []
    for lineno, src, body, dst in raw_trans:
        constraint: dict[str, str] = {}
        for item in filter(None, (x.strip() for x in body.split(","))):
            if "=" not in item:
                raise ModelSyntaxError(f"bad constraint {item!r}", lineno)
            a, v = (x.strip() for x in item.split("=", 1))
            if a not in agents:
                raise ModelSyntaxError(f"undeclared agent {a!r}", lineno)
            if v not in votes:
                raise ModelSyntaxError(f"undeclared vote {v!r}", lineno)
            if a in constraint:
                raise ModelSyntaxError(f"agent {a!r} constrained twice", lineno)
            constraint[a] = v
        transitions.append(
            TransitionPattern(need_state(src, lineno), tuple(sorted(constraint.items())), need_state(dst, lineno))
        )

    m = EpistemicTransitionSystem(
        agents=tuple(decls["agents"]),
        votes=tuple(decls["votes"]),
        states=tuple(decls["states"]),
        indist=indist,
        transitions=tuple(transitions),
        valuation=valuation,
    )
    violations = validate_model(m)
    if violations:
        raise ModelValidationError(violations)
    return m


def load_model_file(path) -> EpistemicTransitionSystem:
    with open(path, encoding="utf-8") as fh:
        return load_model(fh.read())


def indist_class(m: EpistemicTransitionSystem, coalition: Iterable[str], w: str) -> frozenset[str]:
    return m.indist_class(coalition, w)


def successors(m: EpistemicTransitionSystem, w: str, profile: StrategyProfile) -> frozenset[str]:
    return m.successors(w, profile)
