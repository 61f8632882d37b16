from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from episolve.types import ValidationReport


class EpisolveError(Exception):
    def __init__(self, user_message: str) -> None:
        super().__init__(user_message)
        self.user_message = user_message


class ValidationError(EpisolveError):
    def __init__(self, report: ValidationReport, *, subject: str = "input") -> None:
        lines = [f"{subject} is invalid:"]
        lines.extend(f"- {issue.render()}" for issue in report.issues)
        super().__init__("\n".join(lines))
        self.report = report


class AgentMismatch(EpisolveError):
    pass


class InconsistentValuation(EpisolveError):
    def __init__(self, left: str, right: str, atom: str) -> None:
        super().__init__(
            f"Valuations of {left!r} and {right!r} disagree on atom {atom!r}."
        )
        self.left = left
        self.right = right
        self.atom = atom


class NotProper(EpisolveError):
    def __init__(self, first: str, second: str) -> None:
        super().__init__(
            f"Frame is not proper: states {first!r} and {second!r} are "
            "indistinguishable to every agent."
        )
        self.states = (first, second)


class NotAgentLocal(EpisolveError):
    def __init__(self, agent: str, first: str, second: str) -> None:
        super().__init__(
            f"Literals owned by {agent!r} differ between {first!r} and "
            f"{second!r}, which {agent!r} cannot distinguish."
        )
        self.agent = agent
        self.states = (first, second)


class MissingOwnership(EpisolveError):
    pass


class MorphismError(EpisolveError):
    pass


class UnknownSymbol(EpisolveError):
    def __init__(self, kind: str, name: str) -> None:
        super().__init__(f"Unknown {kind}: {name!r}.")
        self.kind = kind
        self.name = name


class EmptyProduct(EpisolveError):
    pass


class DimensionTooHigh(EpisolveError):
    def __init__(self, dim: int) -> None:
        super().__init__(
            f"Homology is computed up to dimension 2; complex has dimension {dim}."
        )
        self.dim = dim


class FormulaSyntaxError(EpisolveError):
    def __init__(self, message: str, *, position: int) -> None:
        super().__init__(f"{message} (column {position + 1})")
        self.position = position


class SchemaError(EpisolveError):
    def __init__(self, message: str, *, location: str = "") -> None:
        where = f" at {location}" if location else ""
        super().__init__(f"{message}{where}")
        self.location = location


class CommonKnowledgeMismatch(EpisolveError):
    pass


class EmptyGroup(EpisolveError):
    def __init__(self, operation: str) -> None:
        super().__init__(f"{operation} needs a nonempty group of agents.")
        self.operation = operation
