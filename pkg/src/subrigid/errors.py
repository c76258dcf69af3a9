"""Exception types shared across the package."""


class RejectedInput(ValueError):
    """Input outside the engine's domain (malformed spec, wrong alphabet, ...).

    The CLI maps this family to exit code 2; the HTTP service maps it to 422.
    """


class NotPrimitiveError(RejectedInput):
    """The substitution (or directive-sequence tail) is not primitive."""


class PeriodicInputError(RejectedInput):
    """The subshift is periodic; rigidity rates are only studied for aperiodic systems."""


class ExactModeUnavailable(RejectedInput):
    """Exact arithmetic was requested for an input it does not cover.

    Exact mode requires an integer Perron-Frobenius eigenvalue, i.e. constant
    length; directive sequences additionally need constant length at every level.
    """
