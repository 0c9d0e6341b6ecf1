"""Exception hierarchy shared by all modules."""


class ExpSumError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(ExpSumError, ValueError):
    pass


class DegenerateSum(InvalidInput):
    pass


class NearZeroDivide(ExpSumError, ArithmeticError):
    def __init__(self, z, message=None):
        self.z = z
        super().__init__(message or f"f vanishes numerically at z={z!r}")


class ZeroOnPath(ExpSumError):
    def __init__(self, z, a=None, b=None):
        self.z = z
        self.a = a
        self.b = b
        super().__init__(f"zero of f within tolerance of the path at z={z!r}")


class NoConvergence(ExpSumError):
    pass


class PerturbationExhausted(ExpSumError):
    pass


class ZeroAtAnchor(ExpSumError):
    pass


class InvalidRadius(InvalidInput):
    pass


class NotCommensurable(ExpSumError):
    pass
