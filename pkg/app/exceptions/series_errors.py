from app.exceptions.hoharmonic_error import HoharmonicError


class ResonantParameter(HoharmonicError):
    code = "resonant_parameter"


class HeightOverflow(HoharmonicError):
    code = "height_overflow"


class OutsideNegativeChamber(HoharmonicError):
    code = "outside_negative_chamber"


class TailNotConverged(HoharmonicError):
    """The series tail estimate exceeded the tolerance.

    The estimate extrapolates the last two height shells geometrically; it is a
    heuristic, not a bound.
    """

    code = "tail_not_converged"


class TooCloseToWallOrOrigin(HoharmonicError):
    code = "too_close_to_wall_or_origin"


class StepTooLarge(HoharmonicError):
    code = "step_too_large"
