"""
Exception hierarchy for the ATL model checker.

Every error a user can cause derives from ATLError; the CLI turns these into
exit code 2 and the service into HTTP 400.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple


class ATLError(Exception):
    """Base error carrying a machine-readable kind and an optional location."""

    # Reported kind; subclasses without their own KIND report their class name
    KIND = None

    def __init__(self, message, location=None):
        super().__init__(message)
        self.message = message
        self.location = location

    @property
    def kind(self):
        return type(self).__dict__.get('KIND') or type(self).__name__

    def to_dict(self):
        return {
            'kind': self.kind,
            'message': self.message,
            'location': self.location,
        }


# Structures

@dataclass(frozen=True)
class Diagnostic:
    """One violated well-formedness rule of a game structure."""
    code: str
    message: str
    player: Optional[str] = None
    state: Optional[str] = None
    vector: Optional[Tuple[str, ...]] = None

    def to_dict(self):
        return {
            'code': self.code,
            'message': self.message,
            'player': self.player,
            'state': self.state,
            'vector': list(self.vector) if self.vector is not None else None,
        }


class StructureError(ATLError):
    """Raised by validation with every diagnostic found."""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0].message if self.diagnostics else 'invalid structure'
        more = len(self.diagnostics) - 1
        message = first if more <= 0 else f"{first} (and {more} more)"
        super().__init__(message)

    @property
    def kind(self):
        return self.diagnostics[0].code if self.diagnostics else 'StructureError'

    def to_dict(self):
        data = super().to_dict()
        data['diagnostics'] = [d.to_dict() for d in self.diagnostics]
        return data


class UnknownState(ATLError, LookupError):
    pass


class UnknownPlayer(ATLError, LookupError):
    pass


class UnknownProposition(ATLError, LookupError):
    pass


class UnknownMoveVector(ATLError, LookupError):
    pass


# Formulas

class FormulaSyntaxError(ATLError):
    """A formula does not belong to the ATL formula language."""

    KIND = 'SyntaxError'

    def __init__(self, message, offset=None, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        if self.expected:
            message = f"{message}; expected one of: {', '.join(self.expected)}"
        super().__init__(message, location=None if offset is None else f"offset {offset}")

    def to_dict(self):
        data = super().to_dict()
        data['offset'] = self.offset
        data['expected'] = list(self.expected)
        return data


class UnexpectedCharacter(FormulaSyntaxError):
    pass


class UnknownCoalitionSyntax(FormulaSyntaxError):
    pass


class NestingTooDeep(FormulaSyntaxError):
    pass


# Pre kernel

class FingerprintMismatch(ATLError):
    pass


# Documents

class ModelParseError(ATLError):
    """The model or formula document could not be read or decoded."""

    KIND = 'ParseError'


class SchemaError(ATLError):

    def __init__(self, message, path):
        self.path = path
        super().__init__(message, location=path)


# Tic-Tac-Toe

class InvalidBoard(ATLError):
    pass


class NotComputersTurn(ATLError):
    pass


class GameOver(ATLError):
    pass


# Benchmarks

class InvalidGeneratorSpec(ATLError):
    pass
