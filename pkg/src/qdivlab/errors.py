"""Error taxonomy. Every message names the violated invariant and the measured value."""


class QdivlabError(Exception):
    """Base class for all qdivlab errors."""


# =============================================================================
# Input errors (bad states, parameters, files)
# =============================================================================


class InputError(QdivlabError, ValueError):
    """An argument violates a documented precondition."""


class NotSquare(InputError):
    pass


class NotHermitian(InputError):
    pass


class NotPSD(InputError):
    pass


class BadTrace(InputError):
    pass


class BlochOutOfBall(InputError):
    pass


class NegativeProbability(InputError):
    pass


class BadNormalization(InputError):
    pass


class InvalidDistribution(InputError):
    pass


class BadRank(InputError):
    pass


class BadFactorization(InputError):
    pass


class BadIndexSet(InputError):
    pass


class MismatchedBlocks(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class OutOfRange(InputError):
    pass


class BadPromise(InputError):
    pass


class RegimeViolation(InputError):
    """Promise parameters outside the regime a polarization schedule supports."""


class UnsupportedFormat(InputError):
    pass


class BadStateFile(InputError):
    pass


class ConfigError(InputError):
    pass


class IncompleteMeasurement(InputError):
    """Effects do not sum to the identity (or a basis is not orthonormal)."""


# =============================================================================
# Numerical errors (support and spectrum problems found during evaluation)
# =============================================================================


class NumericalError(QdivlabError, ArithmeticError):
    """A computation hit a support or spectrum condition it cannot continue past."""


class SingularOnSupport(NumericalError):
    pass


class NegativeEigenvalue(NumericalError):
    pass


class SupportViolation(NumericalError):
    """supp(rho) not contained in supp(sigma); the relative entropy is +inf."""


class SupportInconsistency(NumericalError):
    pass


class DegeneratePair(NumericalError):
    pass


class BisectionFailure(NumericalError):
    pass


# =============================================================================
# Capacity, schedule and fixture errors
# =============================================================================


class DimensionOverflow(QdivlabError):
    """Requested Hilbert-space dimension exceeds the configured cap."""

    def __init__(self, requested: int, cap: int, what: str = "state"):
        self.requested = requested
        self.cap = cap
        super().__init__(f"{what} dimension {requested} exceeds cap {cap}")


class ScheduleViolation(QdivlabError):
    """A polarization schedule check failed under strict mode."""


class FixtureFailure(QdivlabError):
    """A reproduced counterexample relation did not hold."""

    def __init__(self, relation: str, values: dict[str, float]):
        self.relation = relation
        self.values = values
        shown = ", ".join(f"{k}={v:.12g}" for k, v in values.items())
        super().__init__(f"fixture relation failed: {relation} ({shown})")
