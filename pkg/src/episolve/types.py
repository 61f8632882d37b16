from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import NamedTuple

from episolve.errors import UnknownSymbol, ValidationError


class Lit(NamedTuple):
    atom: str
    positive: bool = True

    def negate(self) -> Lit:
        return Lit(self.atom, not self.positive)

    def __str__(self) -> str:
        return self.atom if self.positive else f"!{self.atom}"


def parse_lit(text: str) -> Lit:
    stripped = text.strip()
    if stripped.startswith(("!", "~", "¬")):
        return Lit(stripped[1:].strip(), positive=False)
    return Lit(stripped)


def render_lits(lits: Iterable[Lit], order: Iterable[str] | None = None) -> list[str]:
    """Render literals in AP order (atom name order when none is given)."""
    by_atom = {lit.atom: lit for lit in lits}
    atoms = list(order) if order is not None else sorted(by_atom)
    return [str(by_atom[atom]) for atom in atoms if atom in by_atom]


def first_clash(lits: Iterable[Lit]) -> str | None:
    seen: dict[str, bool] = {}
    for lit in lits:
        previous = seen.setdefault(lit.atom, lit.positive)
        if previous != lit.positive:
            return lit.atom
    return None


@dataclass(frozen=True)
class Issue:
    code: str
    message: str
    agent: str | None = None
    subject: str | None = None

    def render(self) -> str:
        where = [
            part
            for part in (
                f"agent={self.agent}" if self.agent else None,
                f"at={self.subject}" if self.subject else None,
            )
            if part
        ]
        suffix = f" ({', '.join(where)})" if where else ""
        return f"[{self.code}] {self.message}{suffix}"


RESERVED_NAMES = frozenset({"K", "E", "C", "true", "false"})


def reserved_name_issues(kind: str, names: Iterable[str]) -> list[Issue]:
    """Agent and atom names the formula grammar reads as keywords."""
    return [
        Issue("name-reserved", f"{kind} name is a formula keyword", subject=name)
        for name in names
        if name in RESERVED_NAMES
    ]


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...] = ()
    warnings: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def merged(self, other: ValidationReport) -> ValidationReport:
        return ValidationReport(
            issues=self.issues + other.issues,
            warnings=self.warnings + other.warnings,
        )

    def raise_for_issues(self, subject: str = "input") -> None:
        if self.issues:
            raise ValidationError(self, subject=subject)

    def as_dict(self) -> dict[str, object]:
        return {
            "ok": self.ok,
            "issues": [issue.render() for issue in self.issues],
            "warnings": [issue.render() for issue in self.warnings],
        }


@dataclass(frozen=True)
class AgentSet:
    agents: tuple[str, ...]

    def __post_init__(self) -> None:
        issues: list[Issue] = []
        if not self.agents:
            issues.append(Issue("agents-empty", "agent set must be nonempty"))
        duplicates = sorted({a for a in self.agents if self.agents.count(a) > 1})
        issues.extend(
            Issue("agents-duplicate", "agent listed more than once", agent=a)
            for a in duplicates
        )
        if issues:
            raise ValidationError(ValidationReport(tuple(issues)), subject="agent set")

    @classmethod
    def of(cls, *agents: str) -> AgentSet:
        return cls(tuple(agents))

    def __iter__(self) -> Iterator[str]:
        return iter(self.agents)

    def __len__(self) -> int:
        return len(self.agents)

    def __contains__(self, agent: object) -> bool:
        return agent in self.agents

    def index(self, agent: str) -> int:
        try:
            return self.agents.index(agent)
        except ValueError:
            raise UnknownSymbol("agent", agent) from None

    def require(self, agents: Iterable[str]) -> tuple[str, ...]:
        """Return the given agents in canonical order, rejecting unknown ones."""
        wanted = set(agents)
        for agent in sorted(wanted):
            if agent not in self.agents:
                raise UnknownSymbol("agent", agent)
        return tuple(a for a in self.agents if a in wanted)
