"""
Exception hierarchy for chi-lt.

Builders and generators raise these directly; the CLI maps them onto exit codes.
"""
from typing import Optional


class LtalError(Exception):
    """Base class for every error raised by chi-lt."""
    pass


class InvalidParameterError(LtalError, ValueError):
    """Raised when a builder, generator or setting receives an out-of-range parameter."""
    pass


class UnknownVertexError(LtalError, KeyError):
    """Raised when a vertex id or role tag does not exist in the graph."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class NotBijectionError(LtalError):
    """Raised when a labeling is not a bijection onto the required label range."""
    pass


class InadmissibleGraphError(LtalError):
    """Raised when a graph has an isolated vertex or a K2 component."""
    pass


class CompositionPreconditionError(LtalError):
    """Raised when compose_total is called outside its hypotheses."""

    def __init__(self, clause: str, message: str):
        super().__init__(f"{clause}: {message}")
        self.clause = clause


class ExtensionSpecError(LtalError):
    """Raised when a pendant extension is requested with an inconsistent width or block count."""
    pass


class NotCoveredError(LtalError):
    """Raised when no extension case covers the requested role and parameters."""
    pass


class SolverError(LtalError):
    """Raised when the solver produces a witness that fails independent verification."""

    def __init__(self, message: str, witness: Optional[dict] = None):
        super().__init__(message)
        self.witness = witness
