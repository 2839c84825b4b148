"""Exception taxonomy and the diagnostic record used by validation."""

from __future__ import annotations

from dataclasses import dataclass


class GameError(Exception):
    """Base class for every rulegrid error."""


class InvalidDimensions(GameError):
    pass


class OutOfBounds(GameError):
    pass


class LockedCell(GameError):
    pass


class InvalidDefinition(GameError):
    """Raised when a definition fails validation; carries the diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(f"{d.code} {d.location}: {d.message}" for d in self.diagnostics)
        super().__init__(lines or "invalid definition")


class WrongState(GameError):
    pass


class GameFull(GameError):
    pass


class OutOfOrder(GameError):
    pass


class CorruptSnapshot(GameError):
    pass


class UnknownRule(GameError):
    pass


class MissingContext(GameError):
    pass


class SemanticsError(GameError):
    pass


class InvalidParams(GameError):
    pass


class InvalidGivens(GameError):
    pass


class InvalidValue(GameError):
    pass


class NotFound(GameError):
    pass


class AuthError(GameError):
    pass


class IoError(GameError):
    pass


class Rejected(GameError):
    """A request that reached the engine but was refused; carries a stable code."""

    def __init__(self, code: str, reason: str):
        self.code = code
        self.reason = reason
        super().__init__(reason)


def error_code(exc: GameError) -> str:
    """Stable snake_case code for an error class (WrongState -> wrong_state)."""
    name = type(exc).__name__
    out = [name[0].lower()]
    for ch in name[1:]:
        if ch.isupper():
            out.append("_")
            out.append(ch.lower())
        else:
            out.append(ch)
    return "".join(out)


# Stable diagnostic codes, usable in tests and tooling.
E_PARSE = "E_PARSE"
E_UNKNOWN_CONDITION = "E_UNKNOWN_CONDITION"
E_UNKNOWN_ACTION = "E_UNKNOWN_ACTION"
E_UNKNOWN_RULE = "E_UNKNOWN_RULE"
E_CYCLE = "E_CYCLE"
E_OUT_OF_BOUNDS = "E_OUT_OF_BOUNDS"
E_PLAYER_BOUNDS = "E_PLAYER_BOUNDS"
E_SEMANTICS = "E_SEMANTICS"
E_REGION_TILING = "E_REGION_TILING"


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding: a stable code, a message, and a document path."""

    code: str
    message: str
    location: str = ""

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "location": self.location}
