"""Exception hierarchy shared by every mathbridge module.

Each concrete error class is named after the failure it reports, so callers
can catch narrowly (``except ArityMismatch``) or broadly by module family
(``except SortError``).
"""

from __future__ import annotations


class MathBridgeError(Exception):
    """Base class. ``position`` is an optional (line, col) pair, 1-based."""

    def __init__(self, message: str = "", position: tuple[int, int] | None = None):
        super().__init__(message)
        self.message = message
        self.position = position

    @property
    def kind(self) -> str:
        return type(self).__name__

    def render(self, filename: str = "<input>") -> str:
        if self.position is not None:
            line, col = self.position
            return f"{filename}:{line}:{col}: {self.kind}: {self}"
        return f"{filename}: {self.kind}: {self}"


# core-ast


class CoreError(MathBridgeError):
    pass


class DuplicateBindingName(CoreError):
    pass


class MalformedTerm(CoreError):
    pass


# parsing (exit code 2 in the cli)


class ParseError(MathBridgeError):
    pass


class XmlSyntax(ParseError):
    pass


class UnknownElement(ParseError):
    pass


class EmptyApplication(ParseError):
    pass


class MissingBvar(ParseError):
    pass


class BadInteger(ParseError):
    pass


class DuplicateBoundVariable(ParseError):
    pass


class PopcornSyntax(ParseError):
    pass


class UnknownInfix(ParseError):
    pass


class UnboundSugar(ParseError):
    pass


class UnbalancedParen(ParseError):
    pass


class BadToken(ParseError):
    pass


class DuplicateLetName(ParseError):
    pass


class UnknownSymbol(ParseError):
    pass


class Arity(ParseError):
    pass


class BadSignatureXml(ParseError):
    pass


class UnknownStsCombinator(ParseError):
    pass


class BadInterpretation(ParseError):
    pass


class BadConfig(ParseError):
    pass


# printing


class PrintError(MathBridgeError):
    pass


class Unprintable(PrintError):
    pass


class UnsortedBinder(PrintError):
    pass


class UnloweredExtension(PrintError):
    pass


class InvalidModel(MathBridgeError):
    pass


# translation (exit code 3)


class TranslationError(MathBridgeError):
    pass


class UnmappedBinder(TranslationError):
    pass


class UnsortableVariable(TranslationError):
    pass


class UnmappedSymbol(TranslationError):
    pass


class IrreversibleMangling(TranslationError):
    pass


class UntranslatableLiteral(TranslationError):
    pass


# extensions (exit code 4)


class ExtensionError(MathBridgeError):
    pass


class MultiVarNotSupported(ExtensionError):
    pass


class NotExistsUnique(ExtensionError):
    pass


class NotAMaxForm(ExtensionError):
    pass


class ConditionMissing(ExtensionError):
    pass


class NotArgmaxForm(ExtensionError):
    pass


class UnsortedGoal(ExtensionError):
    pass


# sorts (exit code 5)


class SortError(MathBridgeError):
    def __init__(self, message: str = "", path: tuple[int, ...] = (), position=None):
        super().__init__(message, position)
        self.path = path

    def __str__(self) -> str:
        where = "/".join(str(i) for i in self.path) or "root"
        return f"{self.message} (at {where})"


class UnknownSymbolSort(SortError):
    pass


class ArityMismatch(SortError):
    pass


class SortMismatch(SortError):
    def __init__(self, message: str = "", path: tuple[int, ...] = (), expected=None, found=None):
        super().__init__(message, path)
        self.expected = expected
        self.found = found


class UnsortedFreeVariable(SortError):
    pass


# oracle (exit code 6)


class OracleError(MathBridgeError):
    pass


class InfiniteDomain(OracleError):
    pass


class NonBooleanQuantifierBody(OracleError):
    pass


class EmptyMax(OracleError):
    pass


class NoGoalBeforeGetValue(OracleError):
    pass


class BoundExceeded(OracleError):
    pass


class EvaluationError(OracleError):
    pass
