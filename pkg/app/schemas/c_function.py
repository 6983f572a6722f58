from typing import List, Optional

from pydantic import BaseModel, ConfigDict, field_serializer

from app.utils.formatting import format_complex


class PoleFlag(BaseModel):
    """A Gamma argument that hit a nonpositive integer."""

    root: List[str]
    side: str
    """"numerator" for Γ(λ(α^∨) + ½k_{α/2}), "denominator" for the shifted one."""

    argument: int
    """The nonpositive integer −n reached."""


class CFunctionValue(BaseModel):
    """Value of c̃ or c with its pole bookkeeping."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: complex
    pole_flags: List[PoleFlag] = []
    limit_used: bool = False
    order: int = 0
    """Net order in ε along the limiting path: > 0 is a zero, < 0 a pole."""

    @field_serializer("value")
    def serialize_value(self, value: complex) -> str:
        return format_complex(value)

    @property
    def is_pole(self) -> bool:
        return self.order < 0

    @property
    def is_zero(self) -> bool:
        return self.order > 0


class RegularityReport(BaseModel):
    system: str
    k: dict
    regular: bool
    c_tilde_at_rho: CFunctionValue
    gram_regular: Optional[bool] = None
    """Gram-matrix certificate at the requested degree, when computed."""

    degree: Optional[int] = None
