from typing import Dict, List, Optional

from pydantic import BaseModel

from app.models.ktype import MatchedCandidate, SmallKTypeEntry
from app.schemas.validation import ValidationStep
from app.utils.exact import format_rational, format_vector


class RootValue(BaseModel):
    root: List[str]
    k: str


class MatchedPairView(BaseModel):
    """A (Σ^π, k^π) candidate as emitted by `match solve` and `ktypes list`."""

    valid: bool
    """True iff Σ^π is a root system with W(Σ^π) = W and both equation families hold."""

    failure_reason: Optional[str] = None
    branch_tags: Dict[str, str]
    """Solver branch per orbit label of Σ∖2Σ, e.g. {"short": "(2)+"}."""

    irrational: bool = False
    """Some k^π value is an irrational square root."""

    roots: List[List[str]]
    """Positive roots of Σ^π, or the proposed vectors when they fail the axioms.

    Always the roots listed in `k_by_root`: Σ^π is the support of k^π, and a
    root with k^π = 0 appears only when its zero-extension is itself a valid
    candidate.
    """

    k_by_root: List[RootValue]
    k_pi: Optional[Dict[str, str]] = None
    checks: List[ValidationStep] = []

    @classmethod
    def from_candidate(cls, candidate: MatchedCandidate) -> "MatchedPairView":
        if candidate.system_pi is not None:
            roots = [format_vector(r) for r in candidate.system_pi.positive_roots]
        else:
            roots = [format_vector(r) for r, _ in candidate.k_by_root if _positive(r)]
        return cls(
            valid=candidate.valid,
            failure_reason=candidate.failure_reason,
            branch_tags=dict(candidate.branch_tags),
            irrational=candidate.irrational,
            roots=roots,
            k_by_root=[
                RootValue(root=format_vector(r), k=format_rational(v))
                for r, v in candidate.k_by_root
                if _positive(r)
            ],
            k_pi=candidate.k_pi.serialize() if candidate.k_pi is not None else None,
            checks=list(candidate.checks),
        )


class SmallKTypeView(BaseModel):
    """Serialized catalog record."""

    group_label: str
    parameters: Dict[str, str]
    ktype_name: str
    system: str
    positive_roots: List[List[str]]
    m: Dict[str, str]
    kappa: Dict[str, str]
    cosh_factor: str
    source: str
    has_nontrivial: bool
    note: Optional[str] = None
    matched: List[MatchedPairView]

    @classmethod
    def from_entry(cls, entry: SmallKTypeEntry) -> "SmallKTypeView":
        return cls(
            group_label=entry.group_label,
            parameters={
                k: v if isinstance(v, str) else format_rational(v)
                for k, v in entry.parameters.items()
            },
            ktype_name=entry.ktype_name,
            system=entry.system.name,
            positive_roots=[format_vector(r) for r in entry.system.positive_roots],
            m=entry.m.serialize(),
            kappa=entry.kappa.serialize(),
            cosh_factor=entry.cosh_factor,
            source=entry.source,
            has_nontrivial=entry.has_nontrivial,
            note=entry.note,
            matched=[MatchedPairView.from_candidate(c) for c in entry.matched],
        )


def _positive(root) -> bool:
    for x in root:
        if x != 0:
            return x > 0
    return False


class KTypeFilter(BaseModel):
    """Selection passed to the catalog; unset parameters are swept over defaults."""

    family: Optional[str] = None
    """A group key ("so(p,q)"), a family kind ("hermitian") or a stem ("so")."""

    p: Optional[int] = None
    q: Optional[int] = None
    r: Optional[int] = None
    s: Optional[int] = None
    n: Optional[int] = None
    nu: Optional[str] = None
    """Rational character parameter of Hermitian families, e.g. "3/2"."""

    case: Optional[str] = None
    """so(p,q) case, "i" or "ii"."""

    include_trivial: bool = False

    def given(self) -> Dict[str, object]:
        values = self.model_dump(exclude={"family", "include_trivial"})
        return {name: value for name, value in values.items() if value is not None}
