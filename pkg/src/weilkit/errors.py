"""Exception hierarchy.

Every error carries a ``code`` naming it in structured reports, plus a
``details`` dict that ends up verbatim in JSON output.
"""


class WeilkitError(ValueError):
    code = "WeilkitError"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        from .numbers import jsonable

        return {"name": self.code, "message": str(self), "details": jsonable(self.details)}


# weil_core
class ParseError(WeilkitError):
    """Malformed presentation or expression text."""

    code = "SyntaxError"


class UndeclaredGenerator(WeilkitError):
    """A relation mentions an unknown generator."""

    code = "UndeclaredGenerator"


class AugmentationMismatch(WeilkitError):
    """A relation does not vanish under the augmentation."""

    code = "AugmentationMismatch"


class NotWeil(WeilkitError):
    """Some generator is not nilpotent in the quotient."""

    code = "NotWeil"


class NormalFormDivergence(WeilkitError):
    """Completion exceeded the total-degree cap."""

    code = "NormalFormDivergence"


class AlgebraMismatch(WeilkitError):
    """Operands live in different algebras."""

    code = "AlgebraMismatch"


class NotInvertible(WeilkitError):
    """Element has zero augmentation."""

    code = "NotInvertible"



# spec_duality
class InvalidPoint(WeilkitError):
    """Assignment is not an augmented algebra map into the carrier."""

    code = "InvalidPoint"


# jet_engine
class DivisionByInfinitesimal(WeilkitError):
    """Denominator has zero augmentation."""

    code = "DivisionByInfinitesimal"


class ExactModeUnsupportedPrimitive(WeilkitError):
    """Transcendental primitive used in exact mode."""

    code = "ExactModeUnsupportedPrimitive"


class UndeclaredVariable(WeilkitError):
    """Expression uses a variable that is not an input."""

    code = "UndeclaredVariable"


class PointNotOnLocus(WeilkitError):
    """Base point violates a constraint."""

    code = "PointNotOnLocus"


class NotTangent(WeilkitError):
    """Direction is not in the Jacobian kernel."""

    code = "NotTangent"


class LiftFailed(WeilkitError):
    """Order-by-order lift was inconsistent or not unique."""

    code = "LiftFailed"



# microlinear
class SquareNotRPushout(WeilkitError):
    """Battery given a square that is not certified."""

    code = "SquareNotRPushout"


class SquareNotCommuting(WeilkitError):
    """The two composite morphisms disagree."""

    code = "SquareNotCommuting"



# orbifold_lab
class DeterminantNotOne(WeilkitError):
    """Matrix is not in SL2(Z)."""

    code = "DeterminantNotOne"


class NotInUpperHalfPlane(WeilkitError):
    """Point has non-positive imaginary part."""

    code = "NotInUpperHalfPlane"


class DegenerateBasis(WeilkitError):
    """Lattice basis vectors are linearly dependent."""

    code = "DegenerateBasis"


class NotSameLattice(WeilkitError):
    """Bases generate different lattices."""

    code = "NotSameLattice"


class OrientationMismatch(WeilkitError):
    """Bases have opposite orientation."""

    code = "OrientationMismatch"


class PointNotInCarrier(WeilkitError):
    """Point is outside the scene's carrier."""

    code = "PointNotInCarrier"


class NotAGroup(WeilkitError):
    """Element list fails closure or inverses."""

    code = "NotAGroup"


class InvariantViolation(WeilkitError):
    """Association fails totality or functionality."""

    code = "InvariantViolation"



# cli
class UsageError(WeilkitError):
    """Bad command line."""

    code = "UsageError"


class IoFailure(WeilkitError):
    """Could not read or write a file."""

    code = "IoFailure"
