from enum import Enum


class OrbitLabel(str, Enum):
    """
    Names of root orbits used to key multiplicity functions.

    Orbits are ordered by root length. For BC systems `short` is e_i,
    `medium` is e_i ± e_j and `double` is 2e_i.
    """

    SHORT = "short"
    """Shortest orbit of a system with two or more root lengths"""

    MEDIUM = "medium"
    """Middle orbit (non-reduced systems or three lengths)"""

    LONG = "long"
    """Longest orbit; the only label of a single-length reduced system"""

    DOUBLE = "double"
    """Roots 2α whose half α is also a root"""


# Orbit names by number of distinct lengths among the non-doubled orbits.
REDUCED_LABELS = {
    1: (OrbitLabel.LONG,),
    2: (OrbitLabel.SHORT, OrbitLabel.LONG),
    3: (OrbitLabel.SHORT, OrbitLabel.MEDIUM, OrbitLabel.LONG),
}
NON_REDUCED_LABELS = {
    1: (OrbitLabel.SHORT,),
    2: (OrbitLabel.SHORT, OrbitLabel.MEDIUM),
    3: (OrbitLabel.SHORT, OrbitLabel.MEDIUM, OrbitLabel.LONG),
}

# Suffix for further orbits sharing a length, e.g. "long#2" in A1 x A1.
DUPLICATE_SUFFIX = "#"

FAMILIES = ("A", "B", "C", "BC", "D", "E", "F", "G")

# |W| by family, used to refuse enumeration before it starts.
WEYL_ORDERS = {
    ("E", 6): 51_840,
    ("E", 7): 2_903_040,
    ("E", 8): 696_729_600,
    ("F", 4): 1_152,
    ("G", 2): 12,
}
