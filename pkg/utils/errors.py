# utils/errors.py


class AlgebraError(ValueError):
    """Base class for every error raised by the algebra toolkit"""


class DimensionMismatchError(AlgebraError):
    """Operands have incompatible shapes"""


class NotInvertibleError(AlgebraError):
    """Matrix or series has no inverse over the truncated ring"""


class SpecInconsistencyError(AlgebraError):
    """Algebra data contradicts itself (bad pairing, unstable bootstrap)"""


class TranscriptionError(SpecInconsistencyError):
    """Hard-coded tables fail the axiom checks"""


class SpecParseError(AlgebraError):
    """Spec file could not be parsed"""

    def __init__(self, message: str, line_no: int = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class ExpressionError(AlgebraError):
    """Polynomial expression is malformed or uses undeclared names"""


class GradingError(AlgebraError):
    """Coefficient cannot be placed at an integral power of q"""


class BootstrapOrderError(AlgebraError):
    """Requested deformation order needs invariants that are not known"""


class PolygonUnreliableError(AlgebraError):
    """Truncation hides a point that could lie below the Newton polygon"""


class UsageError(AlgebraError):
    """Command-line options are out of range"""
