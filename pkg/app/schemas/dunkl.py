from typing import List

from pydantic import BaseModel


class GramBlock(BaseModel):
    """The pairing on homogeneous polynomials of one degree."""

    degree: int
    monomials: List[List[int]]
    matrix: List[List[str]]
    determinant: str
    symmetric: bool


class GramReport(BaseModel):
    system: str
    k: dict
    degree: int
    blocks: List[GramBlock]
    regular: bool
    """True iff every block is non-degenerate; a certificate only up to `degree`."""
