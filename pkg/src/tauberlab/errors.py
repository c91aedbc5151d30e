"""Exception types shared by the table builders, series engine and CLI."""


class TauberlabError(Exception):
    """Base class for all library errors."""


class CapacityError(TauberlabError):
    """A requested table size or truncation length exceeds its configured cap."""


class InvalidSetError(TauberlabError, ValueError):
    """A part set is empty, has repeats or non-positive entries, or has gcd > 1."""


class HypothesisError(TauberlabError, ValueError):
    """An operation was called outside the hypotheses of the result it evaluates."""


class DomainError(TauberlabError, ValueError):
    """An evaluation point lies outside the domain of an envelope or series."""


class ShapeError(TauberlabError, ValueError):
    """Two tables that must be combined index-wise do not cover the same range."""


class GuardError(TauberlabError):
    """An exponential-time oracle was asked for an input beyond its guard."""
