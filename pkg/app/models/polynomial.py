from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement
from typing import List, Tuple

import sympy
from sympy import Poly


@dataclass(frozen=True)
class PolynomialRing:
    """ℚ[x0, …, x{n-1}] in dual coordinates of the Cartan space."""

    n: int

    @cached_property
    def gens(self) -> Tuple[sympy.Symbol, ...]:
        return sympy.symbols(f"x0:{self.n}")

    def poly(self, expr) -> Poly:
        return Poly(expr, *self.gens, domain="QQ")

    def zero(self) -> Poly:
        return self.poly(0)

    def one(self) -> Poly:
        return self.poly(1)

    def linear(self, coefficients) -> Poly:
        """The linear form x ↦ Σ c_i x_i."""
        return self.poly(sum(to_rational(c) * x for c, x in zip(coefficients, self.gens)))

    def monomial(self, exponents: Tuple[int, ...]) -> Poly:
        return Poly.from_dict({tuple(exponents): 1}, *self.gens, domain="QQ")

    def exponents(self, degree: int) -> List[Tuple[int, ...]]:
        """Exponent vectors of total degree `degree`, in descending lex order."""
        result = []
        for combo in combinations_with_replacement(range(self.n), degree):
            exps = [0] * self.n
            for i in combo:
                exps[i] += 1
            result.append(tuple(exps))
        return sorted(result, reverse=True)

    def homogeneous_part(self, p: Poly, degree: int) -> Poly:
        terms = {m: c for m, c in p.terms() if sum(m) == degree}
        return Poly.from_dict(terms or {(0,) * self.n: 0}, *self.gens, domain="QQ")

    def truncate(self, p: Poly, degree: int) -> Poly:
        terms = {m: c for m, c in p.terms() if sum(m) <= degree}
        return Poly.from_dict(terms or {(0,) * self.n: 0}, *self.gens, domain="QQ")


def to_rational(value) -> sympy.Rational:
    """Exact sympy rational from an int, Fraction or decimal float."""
    if isinstance(value, float):
        return sympy.Rational(repr(value))
    return sympy.Rational(sympy.sympify(value))
