from app.exceptions.hoharmonic_error import HoharmonicError


class DegreeCapExceeded(HoharmonicError):
    code = "degree_cap_exceeded"
