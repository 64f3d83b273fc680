"""
Exception hierarchy shared by every detvan module.

Structural and domain errors are caller mistakes and are raised. Results that
are merely outside what the toolkit can compute (a chart that does not reduce,
a family that is not quadratic, an assembly configuration without a closed
form) are returned as values, see ``detmodel.NotReducible`` and
``abelian.Unsupported``.
"""


class DetvanError(Exception):
    """Base class for all detvan errors."""


class StructuralError(DetvanError, ValueError):
    """Variable lists, names or shapes do not fit together."""


class ParseError(StructuralError):
    """Syntax error in a polynomial expression or model file.

    Attributes:
        offset: byte offset into the expression source, if known
        row: matrix row of the offending entry (model files only)
        column: matrix column of the offending entry (model files only)
    """

    def __init__(self, message, offset=None, row=None, column=None):
        self.offset = offset
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column}")
        if offset is not None:
            location.append(f"offset {offset}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class DomainError(DetvanError, ValueError):
    """A mathematical precondition does not hold (zero polynomial, unit germ, ...)."""


class ResourceLimitError(DetvanError, RuntimeError):
    """A degree budget or reseed cap was exhausted. Never a wrong answer."""


class ReseedRequired(DetvanError):
    """A seeded generic choice turned out not to be generic; try the next attempt."""

    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)
