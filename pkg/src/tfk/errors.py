"""Exception types shared by all tfk modules."""


class TfkError(Exception):
    """Base class for all library errors."""


# --- exact geometry kernel ---

class EmptyInput(TfkError):
    pass


class MixedDimensions(TfkError):
    pass


class ZeroVolume(TfkError):
    pass


class ZeroNormal(TfkError):
    pass


class ZeroVector(TfkError):
    pass


class NotFullDimensional(TfkError):
    pass


# --- divisorial polytopes ---

class EmptyPieces(TfkError):
    pass


class OutsideDomain(TfkError):
    pass


class GenericPointNotAllowed(TfkError):
    pass


class InvalidDivpol(TfkError):
    pass


class NotFano(TfkError):
    pass


# --- polyhedral divisors ---

class OutsideDualCone(TfkError):
    pass


class MismatchedTails(TfkError):
    pass


# --- degenerations ---

class UnknownPoint(TfkError):
    pass


class InteriorPointMismatch(TfkError):
    pass


class NonNormalFiber(TfkError):
    pass


# --- Futaki machinery ---

class PrecisionLoss(TfkError):
    pass


class NonConvergence(TfkError):
    pass


class TooManyLatticePoints(TfkError):
    pass


# --- symmetry search ---

class DuplicateSourcePoints(TfkError):
    pass


# --- CLI / documents ---

class InputSyntaxError(TfkError):
    """Input document is not well-formed text/JSON."""


class SchemaError(TfkError):
    """Input document is well-formed but violates the schema."""


class NonRationalNumber(TfkError):
    pass


class StageDependencyError(TfkError):
    pass


class UnknownCatalogEntry(TfkError):
    pass


class UnsupportedDimension(TfkError):
    pass
