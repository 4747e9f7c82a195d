"""Exception hierarchy.

Every error derives from ``ClausiusError`` and from the closest builtin, so
callers can catch either.
"""


class ClausiusError(Exception):
    pass


class InvalidDimensionError(ClausiusError, ValueError):
    pass


class InvalidParameterError(ClausiusError, ValueError):
    pass


class HermiticityError(ClausiusError, ValueError):
    pass


class InvalidStateError(ClausiusError, ValueError):
    pass


class NumericalFailure(ClausiusError, ArithmeticError):
    """Quadrature or finite-difference refinement did not converge."""


class IntegrationFailure(NumericalFailure):
    """ODE integration drifted out of its trace / positivity budget."""

    def __init__(self, message, step=None, t=None, trace_drift=None, min_eigenvalue=None):
        super().__init__(message)
        self.step = step
        self.t = t
        self.trace_drift = trace_drift
        self.min_eigenvalue = min_eigenvalue


class ModelInconsistencyError(ClausiusError, ValueError):
    """A closed-form density matrix failed a physical check (e.g. positivity)."""

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class PostulateViolation(ClausiusError, AssertionError):
    def __init__(self, postulate, margin, counterexample=None):
        super().__init__(f"{postulate} violated (margin {margin:.3e})")
        self.postulate = postulate
        self.margin = margin
        self.counterexample = counterexample


class NoCrossoverError(ClausiusError, ValueError):
    pass
