from app.models.root_system import RootSystem
from app.models.multiplicity import MultiplicityFunction
from app.models.cone import ConePoint
from app.models.spectral import SpectralParameter
from app.models.weyl import WeylElement
from app.models.series import SeriesCoefficients, TruncationPolicy
from app.models.cosh_factor import CoshFactor, CoshTerm
from app.models.sampled import SampledFunction, WeightKind, WeightSpec
from app.models.polynomial import PolynomialRing
from app.models.ktype import MatchedCandidate, SmallKTypeEntry

__all__ = [
    "RootSystem",
    "MultiplicityFunction",
    "ConePoint",
    "SpectralParameter",
    "WeylElement",
    "SeriesCoefficients",
    "TruncationPolicy",
    "CoshFactor",
    "CoshTerm",
    "SampledFunction",
    "WeightKind",
    "WeightSpec",
    "PolynomialRing",
    "MatchedCandidate",
    "SmallKTypeEntry",
]
