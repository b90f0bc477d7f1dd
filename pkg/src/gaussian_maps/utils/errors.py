class GaussianMapsError(ValueError):
    """Base class for user-facing errors. `details` is merged into structured diagnostics."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class PolySyntaxError(GaussianMapsError):
    def __init__(self, message: str, *, offset: int):
        super().__init__(f"{message} at offset {offset}", offset=offset)
        self.offset = offset


class CurveModelError(GaussianMapsError):
    pass


class ConfigFileError(GaussianMapsError):
    """A curve config file is missing or malformed; `path` names it."""

    def __init__(self, message: str, *, path: str):
        super().__init__(message, path=path)
        self.path = path


class FiberRamifiedError(GaussianMapsError):
    """The fiber of x over 0 meets the ramification; `shift` is the smallest t >= 0 with f(t) != 0."""

    def __init__(self, message: str, *, shift: int):
        super().__init__(message, shift=shift)
        self.shift = shift


class DependentSectionsError(GaussianMapsError):
    pass


class NotInI2Error(GaussianMapsError):
    pass


class NotAdjointError(GaussianMapsError):
    pass


class PlaceClassError(GaussianMapsError):
    pass


class PrimeDivisorError(GaussianMapsError):
    def __init__(self, message: str, *, prime: int):
        super().__init__(message, prime=prime)
        self.prime = prime


class InternalCheckError(RuntimeError):
    """An internal cross-check failed; this is a bug, never a user error."""
