from app.exceptions.hoharmonic_error import HoharmonicError
from app.exceptions.root_system_errors import (
    NotARoot,
    RankOutOfRange,
    UnknownFamily,
    WeylGroupTooLarge,
)
from app.exceptions.series_errors import (
    HeightOverflow,
    OutsideNegativeChamber,
    ResonantParameter,
    StepTooLarge,
    TailNotConverged,
    TooCloseToWallOrOrigin,
)
from app.exceptions.c_function_errors import (
    IndeterminateAfterLimit,
    NotRegular,
    PoleAtNonpositiveInteger,
)
from app.exceptions.matching_errors import (
    MC1Violated,
    ParameterOutOfRange,
    RegularityViolated,
)
from app.exceptions.dunkl_errors import DegreeCapExceeded
from app.exceptions.transform_errors import NonnegativityViolated
from app.exceptions.usage_error import UsageError


__all__ = [
    "DegreeCapExceeded",
    "HeightOverflow",
    "HoharmonicError",
    "IndeterminateAfterLimit",
    "MC1Violated",
    "NonnegativityViolated",
    "NotARoot",
    "NotRegular",
    "OutsideNegativeChamber",
    "ParameterOutOfRange",
    "PoleAtNonpositiveInteger",
    "RankOutOfRange",
    "RegularityViolated",
    "ResonantParameter",
    "StepTooLarge",
    "TailNotConverged",
    "TooCloseToWallOrOrigin",
    "UnknownFamily",
    "UsageError",
    "WeylGroupTooLarge",
]
