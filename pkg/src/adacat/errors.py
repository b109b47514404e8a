"""Exception types raised across the package."""


class AdacatError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(AdacatError, ValueError):
    pass


class IndexOutOfRange(AdacatError, IndexError):
    pass


class NonPositiveDefinite(AdacatError, ArithmeticError):
    pass


class NoConvergence(AdacatError, ArithmeticError):
    pass


class NoSignChange(AdacatError, ArithmeticError):
    """Line search could not bracket a minimizer (direction unbounded below)."""


class MissingBlockSolver(AdacatError, TypeError):
    pass


class DoublingCapExceeded(AdacatError, ArithmeticError):
    pass


class CapExceeded(AdacatError):
    """A solver ran out of iteration units; ``run`` holds the partial result."""

    def __init__(self, run, cap):
        super().__init__(f"unit cap {cap} reached before the stop predicate fired")
        self.run = run
        self.cap = cap


class InnerCapExceeded(AdacatError):
    def __init__(self, L, t, cap):
        super().__init__(
            f"inner solver exceeded {cap} units without meeting the "
            f"acceptance condition (L={L:.6g}, attempt t={t})"
        )
        self.L = L
        self.t = t
        self.cap = cap


class ParseError(AdacatError, ValueError):
    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class MappedLabelError(AdacatError, ValueError):
    pass


class ConfigError(AdacatError, ValueError):
    def __init__(self, field, reason):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


class MissingFile(AdacatError, FileNotFoundError):
    pass
