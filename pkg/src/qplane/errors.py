"""Exception types raised by the library."""


class QPlaneError(Exception):
    pass


class OrderMismatchError(QPlaneError, ValueError):
    """Operands live in cyclotomic fields (or algebras) of different order."""


class CyclotomicZeroDivisionError(QPlaneError, ZeroDivisionError):
    pass


class ParseError(QPlaneError, ValueError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position} in {text!r}"
        super().__init__(message)


class NonHomogeneousError(QPlaneError, ValueError):
    pass


class WindowEscapeError(QPlaneError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"result escapes window at index {index}")


class PunctureError(QPlaneError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"action touches puncture index {index}")


class ConventionViolation(QPlaneError, ValueError):
    """A sample hits a vanishing weight excluded by the nonvanishing convention."""

    def __init__(self, weight, message: str = ""):
        self.weight = weight
        super().__init__(message or f"weight {weight} vanishes")


class DegenerateSampleError(QPlaneError, ValueError):
    pass


class UnsupportedScaleError(QPlaneError):
    pass
