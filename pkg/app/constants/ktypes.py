from enum import Enum
from fractions import Fraction


class FamilyKind(str, Enum):
    """How the catalog generates the small K-types of a group family."""

    SP_P1 = "sp(p,1)"
    SO_2R1 = "so(2r,1)"
    SO_PQ = "so(p,q)"
    HERMITIAN = "hermitian"
    F4 = "F4-family"
    SPLIT = "split"
    G2 = "G2"
    TRIVIAL_ONLY = "trivial-only"
    """Groups whose only small K-type is the trivial one."""


# key -> (kind, group parameters, K-type parameters)
GROUP_FAMILIES = {
    "sp(p,1)": (FamilyKind.SP_P1, ("p",), ("n",)),
    "so(2r,1)": (FamilyKind.SO_2R1, ("r",), ("s",)),
    "so(p,q)": (FamilyKind.SO_PQ, ("p", "q"), ("case",)),
    "su(p,q)": (FamilyKind.HERMITIAN, ("p", "q"), ("nu",)),
    "sp(n,R)": (FamilyKind.HERMITIAN, ("n",), ("nu",)),
    "so*(2n)": (FamilyKind.HERMITIAN, ("n",), ("nu",)),
    "so(p,2)": (FamilyKind.HERMITIAN, ("p",), ("nu",)),
    "e6(-14)": (FamilyKind.HERMITIAN, (), ("nu",)),
    "e7(-25)": (FamilyKind.HERMITIAN, (), ("nu",)),
    "f4(4)": (FamilyKind.F4, (), ()),
    "e6(2)": (FamilyKind.F4, (), ()),
    "e7(-5)": (FamilyKind.F4, (), ()),
    "e8(-24)": (FamilyKind.F4, (), ()),
    "sl(p,R)": (FamilyKind.SPLIT, ("p",), ()),
    "so(p,p)": (FamilyKind.SPLIT, ("p",), ()),
    "e6(6)": (FamilyKind.SPLIT, (), ()),
    "e7(7)": (FamilyKind.SPLIT, (), ()),
    "e8(8)": (FamilyKind.SPLIT, (), ()),
    "G2": (FamilyKind.G2, (), ()),
    "sl(p,C)": (FamilyKind.TRIVIAL_ONLY, ("p",), ()),
    "sl(p,H)": (FamilyKind.TRIVIAL_ONLY, ("p",), ()),
    "sp(p,q)": (FamilyKind.TRIVIAL_ONLY, ("p", "q"), ()),
    "so(2r+1,1)": (FamilyKind.TRIVIAL_ONLY, ("r",), ()),
    "e6(-26)": (FamilyKind.TRIVIAL_ONLY, (), ()),
    "f4(-20)": (FamilyKind.TRIVIAL_ONLY, (), ()),
}

# Values swept for parameters the filter leaves open.
DEFAULT_SWEEPS = {
    "sp(p,1)": {"p": (1, 2, 3), "n": (1, 2, 3)},
    "so(2r,1)": {"r": (2, 3), "s": (0, 1, 2)},
    "so(p,q)": {"p": (5, 6, 7), "q": (3,), "case": ("i", "ii")},
    "su(p,q)": {"p": (2, 3), "q": (1, 2), "nu": (Fraction(1, 2), Fraction(1))},
    "sp(n,R)": {"n": (2, 3), "nu": (Fraction(1, 2), Fraction(1))},
    "so*(2n)": {"n": (3, 4), "nu": (Fraction(1, 2), Fraction(1))},
    "so(p,2)": {"p": (3, 4, 5), "nu": (Fraction(1, 2), Fraction(1))},
    "e6(-14)": {"nu": (Fraction(1, 2), Fraction(1))},
    "e7(-25)": {"nu": (Fraction(1, 2), Fraction(1))},
    "sl(p,R)": {"p": (3, 4, 5)},
    "so(p,p)": {"p": (4,)},
    "sl(p,C)": {"p": (2, 3)},
    "sl(p,H)": {"p": (2, 3)},
    "sp(p,q)": {"p": (2, 3), "q": (2,)},
    "so(2r+1,1)": {"r": (1, 2)},
}

# m on the short roots of F4; long roots have m = 1.
F4_SHORT_MULTIPLICITY = {"f4(4)": 1, "e6(2)": 2, "e7(-5)": 4, "e8(-24)": 8}

SPLIT_EXCEPTIONAL_RANK = {"e6(6)": 6, "e7(7)": 7, "e8(8)": 8}

SPLIT_EXCEPTIONAL_KTYPES = {
    "e6(6)": "8-dim standard representation of Sp(4)",
    "e7(7)": "8-dim standard representation of SU(8) / its contragredient",
    "e8(8)": "16-dim standard representation of SO(16) pulled back to Spin(16)",
}

G2_KAPPA = {
    "π_1 = σ∘pr_1": {"short": Fraction(-1, 4), "long": Fraction(-1, 4)},
    "π_2 = σ∘pr_2": {"short": Fraction(-9, 4), "long": Fraction(-1, 4)},
}

CASE_NAMES = ("i", "ii")
