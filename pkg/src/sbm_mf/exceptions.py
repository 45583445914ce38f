"""Exception hierarchy shared by every module of the package."""


class SBMError(Exception):
    """Base class for all errors raised by sbm_mf."""


class InputError(SBMError, ValueError):
    """Arguments violate a precondition (shape, count, range)."""


class DomainError(SBMError, ValueError):
    """A function was evaluated outside its mathematical domain."""


class DivergenceError(SBMError, ArithmeticError):
    """A divergence is infinite (support of p not contained in support of q)."""


class NumericalError(SBMError, ArithmeticError):
    """A numerical routine produced a non-finite value or failed to converge."""


class RegimeError(SBMError, ValueError):
    """Parameters lie outside the regime where the convergence theory applies."""


class ParseError(SBMError, ValueError):
    """A graph or label file is malformed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateSeparationError(SBMError, ArithmeticError):
    """Within- and cross-community evidence coincide (t == 0), so lambda is undefined."""

    def __init__(self, message="t == 0: separation is degenerate", iteration=None):
        self.iteration = iteration
        if iteration is not None:
            message = f"{message} (iteration {iteration})"
        super().__init__(message)


class DegeneratePartitionError(SBMError, ArithmeticError):
    """A community became empty during an iterative procedure."""

    def __init__(self, message="a community is empty", iteration=None):
        self.iteration = iteration
        if iteration is not None:
            message = f"{message} (iteration {iteration})"
        super().__init__(message)
