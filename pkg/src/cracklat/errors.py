"""Exception hierarchy shared across cracklat."""


class CracklatError(Exception):
    """Base class for every error raised by this package."""


class ZeroVectorError(CracklatError, ValueError):
    pass


class DimensionMismatch(CracklatError, ValueError):
    pass


class UnboundedError(CracklatError):
    """Raised when an inequality system describes an unbounded set.

    ``certificate`` is a recession direction (or line) of the set.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class EmptyPolytopeError(CracklatError):
    """Raised for infeasible inequality systems.

    ``certificate`` is a Farkas vector y >= 0 with y.A = 0 and y.c > 0.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class OriginNotInteriorError(CracklatError, ValueError):
    pass


class NotFanoError(CracklatError, ValueError):
    pass


class NotReflexiveError(CracklatError, ValueError):
    pass


class NonPointedConeError(CracklatError, ValueError):
    pass


class FanError(CracklatError, ValueError):
    """Invalid fan data, or an operation whose fan preconditions fail."""


class UnsupportedShapeError(CracklatError):
    pass


class ScaffoldingError(CracklatError):
    """A scaffolding failed validation.

    ``code`` names the failed check (``NotNef``, ``HullMismatch``,
    ``StrutNotContained``, ``UniqueVertexCover``, ...) and ``witness`` carries
    the offending vertex or strut index.
    """

    def __init__(self, code, message, witness=None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.witness = witness


class CayleyStructureError(CracklatError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ModelError(CracklatError):
    """Internal inconsistency in an ambient model."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class TheoremViolation(CracklatError):
    """Two independent routes to the smooth-ambient verdict disagree.

    This always indicates an implementation bug; ``certificates`` holds the
    evidence of both routes.
    """

    def __init__(self, message, certificates=None):
        super().__init__(message)
        self.certificates = {} if certificates is None else certificates


class LemmaViolation(TheoremViolation):
    pass


class PalpParseError(CracklatError, ValueError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
