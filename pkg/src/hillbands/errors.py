"""Exception types shared across the toolkit."""


class HillbandsError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(HillbandsError):
    """Invalid or inconsistent run configuration."""


class ValidationFailed(HillbandsError):
    """Fourier coefficient data violates its contract.

    Carries the full violation list so callers can report every offender.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NonRealValue(HillbandsError):
    """A quantity that must be real came out with a large imaginary part."""


class ScheduleInfeasible(HillbandsError):
    """Requested scale count overflows double precision.

    ``largest_feasible`` is the largest scale index that still fits.
    """

    def __init__(self, requested, largest_feasible, reason=""):
        self.requested = requested
        self.largest_feasible = largest_feasible
        msg = f"scale {requested} infeasible (largest feasible s={largest_feasible})"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class BudgetExhausted(HillbandsError):
    """The coupling budget eps_s dropped to zero or below."""


class ExcludedK(HillbandsError):
    """Momentum falls inside an excluded resonance interval.

    Signals the caller to route this k to the resonant pipeline. Carries the
    blocking mode and interval.
    """

    def __init__(self, k, scale, blocker, interval):
        self.k = k
        self.scale = scale
        self.blocker = blocker
        self.interval = interval
        super().__init__(
            f"k={k} excluded at scale {scale} by mode {blocker} "
            f"interval ({interval[0]}, {interval[1]})"
        )


class NotProper(HillbandsError):
    """Subtraction system violates the proper-system conditions."""


class SingularBlock(HillbandsError):
    """A block that must be inverted is numerically singular.

    ``smallest_singular_value`` and ``block`` identify the offender.
    """

    def __init__(self, block, smallest_singular_value):
        self.block = block
        self.smallest_singular_value = smallest_singular_value
        super().__init__(
            f"singular block {block}: smallest singular value "
            f"{smallest_singular_value:.3e}"
        )


class NoConvergence(HillbandsError):
    """Fixed-point iteration did not reach tolerance."""

    def __init__(self, iterations, last_residual):
        self.iterations = iterations
        self.last_residual = last_residual
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(last residual {last_residual:.3e})"
        )


class RootCountMismatch(HillbandsError):
    """Root finder saw a number of sign changes different from the expected two."""

    def __init__(self, expected, found, locations=()):
        self.expected = expected
        self.found = found
        self.locations = tuple(locations)
        super().__init__(f"expected {expected} roots, found {found} at {list(locations)}")


class OrderingFailed(HillbandsError):
    """The pair-resonance ordering hypothesis failed on the bracket grid."""


class AdmissibilityFailed(HillbandsError):
    """A continued-fraction-function admissibility condition failed.

    Names the violated condition and the grid point.
    """

    def __init__(self, condition, point, detail=""):
        self.condition = condition
        self.point = point
        msg = f"admissibility condition {condition} failed at {point}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class HypothesisFailed(HillbandsError):
    """A named hypothesis of a multi-scale step or branch lemma failed."""

    def __init__(self, item, detail=""):
        self.item = item
        msg = f"hypothesis ({item}) failed"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class PreconditionFailed(HillbandsError):
    """An operation was called outside its stated precondition."""


class IntegratorFailure(HillbandsError):
    """The ODE integrator failed to meet its tolerance."""


class OffDiagonalDecayError(HillbandsError):
    """Assembled matrix violates the off-diagonal decay bound."""
