from app.exceptions.hoharmonic_error import HoharmonicError


class UnknownFamily(HoharmonicError):
    code = "unknown_family"


class RankOutOfRange(HoharmonicError):
    code = "rank_out_of_range"


class NotARoot(HoharmonicError):
    code = "not_a_root"


class WeylGroupTooLarge(HoharmonicError):
    code = "weyl_group_too_large"
