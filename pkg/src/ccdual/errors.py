"""Exception types shared by every module.

Each error carries a short ``code`` used by the command line front end to
emit its ``ERROR <code> <subject>`` line.
"""


class DualityError(Exception):
    code = "error"

    def __init__(self, subject, detail=None):
        self.subject = subject
        self.detail = detail
        msg = subject if detail is None else f"{subject}: {detail}"
        super().__init__(msg)


class ValidationError(DualityError):
    """A structure violates one of its defining invariants."""

    code = "validation"


class DimensionError(DualityError):
    """Masks, tuples or chains do not belong to the structure they are used with."""

    code = "dimension"


class PreconditionError(DualityError):
    code = "precondition"


class ResourceError(DualityError):
    """An enumeration ran past its configured cap."""

    code = "resource"

    def __init__(self, cap_name, cap, reached=None):
        self.cap_name = cap_name
        self.cap = cap
        self.reached = reached
        detail = f"cap {cap} exceeded"
        if reached is not None:
            detail += f" (reached {reached})"
        super().__init__(cap_name, detail)


class ParseError(DualityError):
    code = "parse"


class CheckFailed(DualityError):
    """A certificate reported at least one failed case."""

    code = "check"
