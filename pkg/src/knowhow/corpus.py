"""Bundled example systems T1-T8 and the table of truth claims made about them."""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .formula import Formula, parse_formula
from .model import EpistemicTransitionSystem, load_model
from .semantics import check

FIXTURE_IDS = tuple(f"T{i}" for i in range(1, 9))


@dataclass(frozen=True)
class Fixture:
    id: str
    model_source: str
    provenance_notes: tuple[str, ...]
    added_elements: tuple[str, ...]

    def model(self) -> EpistemicTransitionSystem:
        return load_model(self.model_source)


@dataclass(frozen=True)
class Claim:
    fixture: str
    state: str
    formula_text: str
    expected: bool
    citation: str

    @property
    def formula(self) -> Formula:
        return parse_formula(self.formula_text)


@dataclass(frozen=True)
class ClaimResult:
    claim: Claim
    actual: bool | None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.actual == self.claim.expected


def _fixture_dir(directory: str | Path | None):
    if directory is None:
        return resources.files("knowhow") / "data" / "fixtures"
    return Path(directory)


def _split_comment(raw: str) -> tuple[str, str]:
    body, _, comment = raw.partition("#")
    return body.strip(), comment.strip()


def parse_fixture(fixture_id: str, source: str) -> Fixture:
    notes, added = [], []
    for raw in source.splitlines():
        body, comment = _split_comment(raw)
        if not comment:
            continue
        if comment.startswith("added:"):
            added.append(f"{body}  ({comment[len('added:'):].strip()})" if body else comment)
        elif body:
            notes.append(f"{body}  ({comment})")
    return Fixture(fixture_id, source, tuple(notes), tuple(added))


def load_fixture(fixture_id: str, directory: str | Path | None = None) -> Fixture:
    path = _fixture_dir(directory) / f"{fixture_id}.ets"
    return parse_fixture(fixture_id, path.read_text(encoding="utf-8"))


def load_fixtures(directory: str | Path | None = None) -> dict[str, Fixture]:
    d = _fixture_dir(directory)
    ids = sorted(
        (p.name[:-4] for p in d.iterdir() if p.name.endswith(".ets")),
        key=lambda s: (len(s), s),
    )
    return {i: load_fixture(i, directory) for i in ids}


_CLAIM_RE = re.compile(r"^(\S+)\s+(\S+)\s+(\".*\")\s+(true|false)$")


def parse_claims(text: str) -> list[Claim]:
    claims = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body, comment = _split_comment(raw)
        if not body:
            continue
        m = _CLAIM_RE.match(body)
        if not m:
            raise ValueError(f"claims line {lineno}: cannot parse {body!r}")
        (formula_text,) = shlex.split(m.group(3))
        claims.append(Claim(m.group(1), m.group(2), formula_text, m.group(4) == "true", comment))
    return claims


def load_claims(directory: str | Path | None = None) -> list[Claim]:
    return parse_claims((_fixture_dir(directory) / "claims.txt").read_text(encoding="utf-8"))


def assert_claims(directory: str | Path | None = None) -> list[ClaimResult]:
    """Evaluate every claim row; errors are reported per row rather than raised."""
    fixtures = load_fixtures(directory)
    models: dict[str, EpistemicTransitionSystem] = {}
    out = []
    for c in load_claims(directory):
        try:
            if c.fixture not in models:
                models[c.fixture] = fixtures[c.fixture].model()
            v = check(models[c.fixture], c.state, c.formula)
            out.append(ClaimResult(c, v.holds))
        except (KeyError, ValueError) as exc:
            out.append(ClaimResult(c, None, f"{type(exc).__name__}: {exc}"))
    return out
