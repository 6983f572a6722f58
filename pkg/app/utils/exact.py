"""Exact rational helpers shared by the combinatorial modules."""

import math
from fractions import Fraction
from numbers import Number
from typing import Iterable, List, Sequence, Tuple, Union

import sympy

Vector = Tuple[Fraction, ...]
Matrix = Tuple[Tuple[Fraction, ...], ...]
Scalar = Union[int, Fraction, float, complex]


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, sympy rationals and decimal strings exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, sympy.Basic):
        value = sympy.nsimplify(value)
        if not value.is_Rational:
            raise ValueError(f"{value} is not rational")
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        # decimal repr keeps 0.1 as 1/10 instead of the binary expansion
        return Fraction(repr(value))
    raise TypeError(f"cannot convert {value!r} to a Fraction")


def try_fraction(value) -> Scalar:
    """Return an exact Fraction when the value is rational, else the value."""
    if isinstance(value, complex):
        if value.imag == 0:
            return try_fraction(value.real)
        return value
    try:
        return to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        return value


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def vector(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vector(row) for row in rows)


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence) -> tuple:
    return tuple(c * a for a in u)


def neg(u: Sequence) -> tuple:
    return tuple(-a for a in u)


def bilinear(u: Sequence, gram: Matrix, v: Sequence):
    """uᵀ·G·v without leaving exact arithmetic when the inputs are exact."""
    total = 0
    for i, ui in enumerate(u):
        if ui == 0:
            continue
        row = gram[i]
        total += ui * sum(row[j] * vj for j, vj in enumerate(v) if vj != 0)
    return total


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def to_sympy(m: Sequence[Sequence]) -> sympy.Matrix:
    return sympy.Matrix(
        [[sympy.Rational(to_fraction(x).numerator, to_fraction(x).denominator) for x in row] for row in m]
    )


def from_sympy(m: sympy.Matrix) -> Matrix:
    return tuple(
        tuple(Fraction(int(m[i, j].p), int(m[i, j].q)) for j in range(m.cols))
        for i in range(m.rows)
    )


def inverse(m: Sequence[Sequence]) -> Matrix:
    return from_sympy(to_sympy(m).inv())


def rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    return to_sympy(vectors).rank()


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    cols = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def is_integer(value) -> bool:
    if isinstance(value, Fraction):
        return value.denominator == 1
    if isinstance(value, int):
        return True
    return False


def primitive_direction(v: Sequence[Fraction]) -> Vector:
    """Scale a nonzero rational vector to its primitive integer direction up to sign."""
    denominators = 1
    for x in v:
        denominators = denominators * x.denominator // _gcd(denominators, x.denominator)
    ints = [int(x * denominators) for x in v]
    g = 0
    for x in ints:
        g = _gcd(g, abs(x))
    ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(Fraction(x) for x in ints)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def as_number(value) -> Number:
    """Collapse sympy numbers to Python numbers for numeric code."""
    if isinstance(value, sympy.Basic):
        value = sympy.nsimplify(value)
        if value.is_Rational:
            return Fraction(int(value.p), int(value.q))
        return complex(value)
    return value


def format_rational(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, sympy.Basic):
        return str(value)
    return repr(value)


def format_vector(v: Sequence) -> List[str]:
    return [format_rational(x) for x in v]


def values_equal(a, b) -> bool:
    """Exact comparison for rationals and sympy numbers; 1e-12 for floats."""
    if is_exact(a) and is_exact(b):
        return Fraction(a) == Fraction(b)
    if isinstance(a, (float, complex)) or isinstance(b, (float, complex)):
        return abs(complex(a) - complex(b)) < 1e-12
    return sympy.simplify(sympy.sympify(a) - sympy.sympify(b)) == 0


def exact_sqrt(value: Fraction) -> Tuple[Union[Fraction, sympy.Basic], bool]:
    """
    √value for value ≥ 0, with a flag telling whether the root is rational.

    Rational roots come back as Fractions, the rest as sympy surds.
    """
    value = Fraction(value)
    if value < 0:
        raise ValueError(f"negative radicand {value}")
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd), True
    return sympy.sqrt(sympy.Rational(num, den)), False