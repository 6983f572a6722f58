from app.exceptions.hoharmonic_error import HoharmonicError


class MC1Violated(HoharmonicError):
    """The candidate system is not contained in Σ ∪ 2Σ."""

    code = "mc1_violated"


class RegularityViolated(HoharmonicError):
    code = "regularity_violated"


class ParameterOutOfRange(HoharmonicError):
    code = "parameter_out_of_range"
