"""Epistemic formula AST.

``str()`` renders the text grammar accepted by :func:`episolve.parsing.parse_formula`,
so rendered formulas parse back to equal trees.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class Not:
    body: Formula

    def __str__(self) -> str:
        return f"!{self.body}"


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Knows:
    agent: str
    body: Formula

    def __str__(self) -> str:
        return f"K {self.agent} {self.body}"


@dataclass(frozen=True)
class Everybody:
    group: tuple[str, ...]
    body: Formula

    def __str__(self) -> str:
        return f"E {{{','.join(self.group)}}} {self.body}"


@dataclass(frozen=True)
class Common:
    group: tuple[str, ...]
    body: Formula

    def __str__(self) -> str:
        return f"C {{{','.join(self.group)}}} {self.body}"


@dataclass(frozen=True)
class Box:
    action: str
    body: Formula

    def __str__(self) -> str:
        return f"[{self.action}] {self.body}"


Formula = Atom | Top | Not | And | Knows | Everybody | Common | Box


def falsum() -> Formula:
    return Not(Top())


def disj(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def implies(left: Formula, right: Formula) -> Formula:
    return Not(And(left, Not(right)))


def group(agents: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(agents)))


def children(formula: Formula) -> tuple[Formula, ...]:
    match formula:
        case Atom() | Top():
            return ()
        case And(left, right):
            return (left, right)
        case Not(body) | Knows(_, body) | Everybody(_, body) | Common(_, body) | Box(_, body):
            return (body,)
        case _:
            raise TypeError(f"not a formula: {formula!r}")


def walk(formula: Formula) -> Iterator[Formula]:
    yield formula
    for child in children(formula):
        yield from walk(child)


def atoms(formula: Formula) -> set[str]:
    return {f.name for f in walk(formula) if isinstance(f, Atom)}


def agents(formula: Formula) -> set[str]:
    found: set[str] = set()
    for f in walk(formula):
        match f:
            case Knows(agent, _):
                found.add(agent)
            case Everybody(members, _) | Common(members, _):
                found.update(members)
    return found


def actions(formula: Formula) -> set[str]:
    return {f.action for f in walk(formula) if isinstance(f, Box)}


def modal_depth(formula: Formula) -> int:
    inner = max((modal_depth(c) for c in children(formula)), default=0)
    if isinstance(formula, Knows | Everybody | Common | Box):
        return inner + 1
    return inner


def is_positive(formula: Formula) -> bool:
    """Literals, conjunctions and K/E/C of positive formulas.

    Truth of these is inherited backwards along model morphisms; ``K a !K b p``
    is the standard formula for which that fails.
    """
    match formula:
        case Atom() | Top() | Not(Atom()):
            return True
        case And(left, right):
            return is_positive(left) and is_positive(right)
        case Knows(_, body) | Everybody(_, body) | Common(_, body):
            return is_positive(body)
        case _:
            return False
