"""Exception hierarchy shared by the engine modules."""


class DeltaError(Exception):
    """Base class for every error raised by the engine."""


class NotNegativeDefinite(DeltaError):
    """A Gram submatrix that should be negative definite is not."""


class PseudoeffectivityViolated(DeltaError):
    """A Zariski coefficient came out negative."""


class IrrationalThreshold(DeltaError):
    """A chamber wall or volume root is not a rational number."""


class RangeError(DeltaError, ValueError):
    """An argument lies outside the domain of a piecewise function."""


class NotNef(DeltaError):
    """A class assumed nef pairs negatively with a modeled curve."""


class DegenerateBound(DeltaError):
    """A nef class gives no upper bound for the threshold."""


class ParseError(DeltaError, ValueError):
    """A scenario or case document could not be parsed."""

    def __init__(self, message, field=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.field = field
        self.line = line


class ValidationError(DeltaError, ValueError):
    """A parsed document violates a data invariant."""


class UnknownCase(DeltaError, KeyError):
    """No built-in case or scenario carries the requested id."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class IncompleteSweep(DeltaError):
    """The volume sweep stopped before the volume reached zero."""
