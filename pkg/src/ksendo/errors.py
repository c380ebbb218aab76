"""Exception hierarchy shared by every stage of the pipeline."""


class KsendoError(Exception):
    """Base class; ``payload`` carries machine-readable details for reports."""

    exit_code = 70

    def __init__(self, message, **payload):
        super().__init__(message)
        self.payload = payload

    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self), **self.payload}


class ValidationError(KsendoError, ValueError):
    exit_code = 3


class DomainError(KsendoError, ZeroDivisionError):
    exit_code = 70


class InconsistentTower(KsendoError):
    exit_code = 5


class VerificationFailure(KsendoError):
    exit_code = 6


class AccountingError(KsendoError):
    exit_code = 4


class NonIntegralMultiplicity(KsendoError):
    exit_code = 4


class InconsistentScalars(KsendoError):
    exit_code = 4


class NonScalarProduct(KsendoError):
    exit_code = 4


class SizeLimit(KsendoError):
    exit_code = 3


class UnsupportedCenter(KsendoError):
    exit_code = 3
