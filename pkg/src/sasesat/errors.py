"""Exception hierarchy shared by the toolkit."""


class SasePlanError(Exception):
    """Base class for every error raised by this package."""


class SasParseError(SasePlanError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class UnsupportedFeatureError(SasParseError):
    """Axioms, derived variables and conditional effects are rejected."""


class SasValidationError(SasePlanError):
    pass


class ApplicabilityError(SasePlanError):
    pass


class AllocationError(SasePlanError):
    pass


class DimacsError(SasePlanError):
    pass


class SolverOutputError(SasePlanError):
    pass


class IntegrityError(SasePlanError):
    """A solver reported a model that falsifies the instance."""


class EncodingError(SasePlanError):
    pass


class UnsatisfiableEncoding(EncodingError):
    """Raised when an encoder can tell statically that the instance has no model."""


class OracleOverflow(SasePlanError):
    pass


class SolverUnknownError(SasePlanError):
    pass
