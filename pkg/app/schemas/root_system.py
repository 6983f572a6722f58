from typing import Dict, List, Optional

from pydantic import BaseModel

from app.schemas.validation import ValidationReport


class RootSystemReport(ValidationReport):
    """Root-system axiom check for an arbitrary finite set of vectors."""

    rank: int
    """Rank of the span of the vectors."""

    size: int
    """Number of distinct vectors checked."""


class OrbitView(BaseModel):
    label: str
    size: int
    norm2: str
    """Squared length (α, α) as an exact rational string."""


class RootSystemView(BaseModel):
    """Serialized form of a root system, emitted by `roots show`."""

    name: str
    family: str
    rank: int
    ambient_dim: int
    gram: List[List[str]]
    simple_roots: List[List[str]]
    positive_roots: List[List[str]]
    orbits: List[OrbitView]
    reduced: bool
    weyl_order: Optional[int] = None
    rho: Optional[List[str]] = None
    cartan_matrix: List[List[str]]
    extra: Dict[str, str] = {}
