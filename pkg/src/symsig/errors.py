class SymsigError(Exception):
    pass


class RingMismatch(SymsigError):
    pass


class UnsupportedRing(SymsigError):
    pass


class DimensionMismatch(SymsigError):
    pass


class NotAChainComplex(SymsigError):
    pass


class NotAChainMap(SymsigError):
    pass


class BoundaryMismatch(SymsigError):
    pass


class StructureMismatch(SymsigError):
    pass


class NotSplittable(SymsigError):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class NotLagrangian(SymsigError):
    pass


class NotAutomorphism(SymsigError):
    pass


class NotIsometry(SymsigError):
    pass


class NeedsHalf(SymsigError):
    pass


class SkewNotSigned(SymsigError):
    pass


class DegenerateEvaluation(SymsigError):
    pass


class NotFree(SymsigError):
    pass


class UnknownFixture(SymsigError):
    pass


class ParseError(SymsigError):
    pass


class StepFailure(SymsigError):
    def __init__(self, step, message):
        super().__init__(f"step {step!r}: {message}")
        self.step = step
