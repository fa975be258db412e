"""Exceptions raised by the walk engine, builders and experiments.

All of them are ``ValueError`` subclasses so callers that only care about
"bad input" can keep catching ``ValueError``.
"""


class WalkError(ValueError):
    """Base class for lingwalk errors."""


class InvalidDimensionError(WalkError):
    """A coin or graph was asked for a non-positive or mismatched dimension."""


class GraphStructureError(WalkError):
    """Port bindings do not form a perfect matching on port-ends."""


class NonUnitaryError(WalkError):
    """A coin table failed the unitarity gate."""


class StateShapeError(WalkError):
    """A state vector does not match the graph's port-end count."""


class InvalidRegionError(WalkError):
    """A region names a vertex the graph does not have."""


class NoTargetError(WalkError):
    """The language has no word of the requested length."""


class EmptyInputError(WalkError):
    """A walk was requested for the empty word."""


class UnsupportedLanguageError(WalkError):
    """No builder exists for this language in this input mode."""


class EncodeError(WalkError):
    """An input cannot be placed on a walk (length or mode mismatch)."""


class NormalizationError(EncodeError):
    """A quantum word position does not carry weight alpha."""


class CapacityError(EncodeError):
    """The input is longer than the walk's input rail."""


class NotInvertibleError(WalkError):
    """A walk without a reject region cannot be complemented."""


class UndefinedMarginError(WalkError):
    """A cut-point needs records from both classes."""


class SweepBudgetError(WalkError):
    """An exhaustive sweep was asked for more strings than the budget allows."""


class CsvFormatError(WalkError):
    """A results CSV is empty or malformed."""
