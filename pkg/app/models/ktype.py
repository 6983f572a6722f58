from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.exceptions import ParameterOutOfRange
from app.models.multiplicity import MultiplicityFunction
from app.models.root_system import RootSystem


@dataclass(frozen=True, eq=False)
class MatchedCandidate:
    """A candidate (Σ^π, k^π) produced by the matching solver.

    `system_pi` is None when the candidate vectors do not form a root system;
    `k_by_root` then still records the proposed values.
    """

    system_pi: Optional[RootSystem]
    k_pi: Optional[MultiplicityFunction]
    k_by_root: Tuple[Tuple[Tuple, object], ...]
    branch_tags: Dict[str, str]
    valid: bool
    failure_reason: Optional[str] = None
    irrational: bool = False
    checks: List = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class SmallKTypeEntry:
    """One small K-type: group data (Σ, m, κ^π) and its matched pairs."""

    group_label: str
    parameters: Dict[str, object]
    ktype_name: str
    system: RootSystem
    m: MultiplicityFunction
    kappa: MultiplicityFunction
    matched: List[MatchedCandidate]
    cosh_factor: str = "1"
    source: str = ""
    has_nontrivial: bool = True
    note: Optional[str] = None

    @property
    def valid_pairs(self) -> List[MatchedCandidate]:
        return [c for c in self.matched if c.valid]

    def pair(self, index: int = 0) -> MatchedCandidate:
        pairs = self.valid_pairs
        if not pairs:
            raise ParameterOutOfRange(
                f"{self.group_label} {self.ktype_name} has no valid (Σ^π, k^π) pair",
                details={"group": self.group_label, "ktype": self.ktype_name},
            )
        return pairs[index]
