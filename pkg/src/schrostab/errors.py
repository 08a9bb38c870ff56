"""Shared exception types.

ValueError is used for domain/precondition violations throughout the
package; NumericalError marks computations that started from valid inputs
but failed to converge or hit near-singular arithmetic.
"""


class NumericalError(RuntimeError):
    """A numerical procedure failed to converge or lost well-posedness."""
