"""Exception types for invofactor.

Every failure mode that a caller can sensibly react to gets its own class.
InternalInvariantError carries the violated identity as a string plus enough
context to reproduce; it signals a bug (or a genuinely impossible input that
slipped past validation), never a user error.
"""


class InvofactorError(Exception):
    """Base class for all package errors."""


class InputError(InvofactorError):
    """Malformed or inconsistent user input (bad field, bad matrix, bad JSON)."""


class FieldConstructionError(InputError):
    """Field parameters are not a prime power / tower request is unsupported."""


class NotInGroupError(InputError):
    """The supplied matrix is not a similitude of the given form."""


class SingularMatrixError(InvofactorError):
    """A matrix expected to be invertible is singular."""


class DegenerateFormError(InputError):
    """The supplied bilinear/sesquilinear form matrix is degenerate."""


class BudgetExceededError(InvofactorError):
    """An enumeration or survey exceeded its configured work budget."""


class VerificationError(InvofactorError):
    """A certificate failed one of its defining identities.

    Attributes:
        check: short name of the failed identity.
        context: dict of serialized offending objects.
    """

    def __init__(self, check, context=None):
        self.check = check
        self.context = dict(context or {})
        super().__init__(f"certificate check failed: {check}")


class InternalInvariantError(InvofactorError):
    """A constructed object violated an identity the construction guarantees.

    Attributes:
        identity: the violated identity, as a human-readable equation string.
        context: dict of serialized offending objects.
    """

    def __init__(self, identity, context=None):
        self.identity = identity
        self.context = dict(context or {})
        super().__init__(f"internal invariant violated: {identity}")


class DetRefinementError(InvofactorError):
    """No det-refined factorization exists (or was found) for this element.

    For orthogonal similitudes whose minimal polynomial on some primary
    component is (T^2 - beta)^e with e odd and beta a non-square, every
    admissible first factor has determinant +1 on that component, and if no
    other component has odd dimension the global sign cannot be corrected.
    This error carries the offending block transcript so the obstruction is
    auditable.

    Attributes:
        reason: short description.
        context: dict with the offending block data.
    """

    def __init__(self, reason, context=None):
        self.reason = reason
        self.context = dict(context or {})
        super().__init__(f"det-refined factorization unavailable: {reason}")
