from app.exceptions.hoharmonic_error import HoharmonicError


class UsageError(HoharmonicError):
    code = "usage_error"
