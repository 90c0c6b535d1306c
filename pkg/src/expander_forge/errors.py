"""Exception types shared across the package."""


class ExpanderForgeError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(ExpanderForgeError):
    """Operands live in GF(2)^t spaces of different dimension t."""


class CertificationExhausted(ExpanderForgeError):
    """Generator sampling could not produce a sum-distinct set within budget."""


class ResourceLimit(ExpanderForgeError):
    """An enumeration or matrix would exceed the configured budget."""


class MultiplicityViolation(ExpanderForgeError):
    """A canonical hyperedge was not produced exactly r! times."""


class NonRegular(ExpanderForgeError):
    """A graph expected to be regular has vertices of differing degree."""


class DegreeMismatch(ExpanderForgeError):
    """A counted degree does not match the closed-form value."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IsomorphismFailure(ExpanderForgeError):
    """The prefix graph and its sumset model disagree."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BoundViolated(ExpanderForgeError):
    """A discrepancy inequality failed; includes the full instance."""

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance


class NoDisjointIntermediate(ExpanderForgeError):
    """Not enough spare generators to route a walk through a fresh tuple."""


class NoDecomposition(ExpanderForgeError):
    """A target vector is not a sum of two distinct generators."""


class NoConvergence(ExpanderForgeError):
    """Iterative eigensolver failed to converge (estimate still returned)."""
