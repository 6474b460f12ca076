"""Exception hierarchy shared by every module."""


class SecIdxError(Exception):
    """Base class for all errors raised by secidx."""


class DimensionMismatch(SecIdxError, ValueError):
    pass


class NotObservable(SecIdxError, ValueError):
    pass


class EmptySubset(SecIdxError, ValueError):
    pass


class IndexOutOfRange(SecIdxError, IndexError):
    pass


class WindowOutOfRange(SecIdxError, IndexError):
    pass


class HorizonTooShort(SecIdxError, ValueError):
    pass


class NotDiagonalizable(SecIdxError, ValueError):
    pass


class MethodDisagreement(SecIdxError, RuntimeError):
    """Two security-index methods returned different values.

    ``values`` maps method name to the delta it produced.
    """

    def __init__(self, values):
        self.values = dict(values)
        detail = ", ".join(f"{k}={v}" for k, v in self.values.items())
        super().__init__(f"security index methods disagree: {detail}")


class TooManySensors(SecIdxError, ValueError):
    pass


class WideMatrix(SecIdxError, ValueError):
    pass


class NotSquare(SecIdxError, ValueError):
    pass


class InvalidKernelRep(SecIdxError, ValueError):
    pass


class InvalidWeight(SecIdxError, ValueError):
    pass


class NoConsistentSupport(SecIdxError, RuntimeError):
    pass


class AmbiguousCorrection(SecIdxError, RuntimeError):
    pass


class InsufficientObservability(SecIdxError, ValueError):
    pass
