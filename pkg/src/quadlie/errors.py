"""Shared exception types.

Two kinds matter to callers: inputs that break a documented invariant or
precondition (ValidationError) and requests outside the implemented scope,
such as a degree bound or an honestly undecidable question (CapabilityError).
The CLI maps them to exit codes 1 and 2.
"""


class ValidationError(ValueError):
    pass


class CapabilityError(RuntimeError):
    pass
