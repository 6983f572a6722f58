from app.exceptions.hoharmonic_error import HoharmonicError


class PoleAtNonpositiveInteger(HoharmonicError):
    code = "pole_at_nonpositive_integer"


class IndeterminateAfterLimit(HoharmonicError):
    code = "indeterminate_after_limit"


class NotRegular(HoharmonicError):
    code = "not_regular"
