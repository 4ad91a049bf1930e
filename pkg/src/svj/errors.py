"""Exception types shared across the package.

The CLI maps these onto exit codes: ParamError -> 2, NumericalError
(and subclasses) -> 3. Library code raises, it never calls sys.exit.
"""


class ParamError(ValueError):
    """Invalid model/contract parameters or a malformed params file."""


class DomainError(ParamError):
    """Inputs outside the domain of a closed-form expression.

    Raised e.g. by the BS derivative operators when y*sqrt(tau) is
    degenerate and the expression has no finite limit.
    """


class NumericalError(ArithmeticError):
    """A numerical routine failed to reach its target accuracy."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge within its subdivision budget."""


class SeriesTruncationError(NumericalError):
    """Poisson series needs more terms than the hard cap allows."""


class BracketError(NumericalError):
    """Root bracketing failed (e.g. price outside no-arbitrage bounds)."""
