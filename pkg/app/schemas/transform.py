from typing import Dict, List, Optional

from pydantic import BaseModel, field_serializer

from app.utils.formatting import format_complex


class SpectrumSample(BaseModel):
    xi: List[float]
    """Real coordinates of λ = iVξ."""

    value: complex

    @field_serializer("value")
    def serialize_value(self, value: complex) -> str:
        return format_complex(value)


class TransformResult(BaseModel):
    """Output of `transform forward`: ℱf or f̂ on a spectral grid."""

    system: str
    k: Dict[str, str]
    transform: str
    """"hypergeometric" or "spherical"."""

    ktype: Optional[str] = None
    prefactor: Optional[float] = None
    """2^e, or the weight-ratio constant when Σ^π ⊄ Σ ∪ 2Σ."""

    bump_width: float
    samples: List[SpectrumSample]


class RoundtripReport(BaseModel):
    """Forward-then-inverse error and the Plancherel comparison for one bump."""

    system: str
    k: Dict[str, str]
    bump_width: float
    grid_points: int
    spectral_radius: float
    spectral_points: int
    max_error: float
    relative_error: float
    plancherel_lhs: float
    plancherel_rhs: float
    plancherel_mismatch: float
    excluded_points: int = 0
    """Cartan nodes inside the wall margin, left out of the rank-two cubature."""
