import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy import Poly

from app.config import Settings, get_settings
from app.exceptions import DegreeCapExceeded
from app.models.multiplicity import MultiplicityFunction
from app.models.polynomial import PolynomialRing, to_rational
from app.models.root_system import RootSystem
from app.schemas.dunkl import GramBlock, GramReport
from app.services.root_system_service import RootSystemService
from app.utils.exact import vector

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def bernoulli_plus(n: int) -> sympy.Rational:
    """B_n with B_1 = +½, the coefficients of t/(1 − e^{−t}) = Σ B_n tⁿ/n!."""
    if n == 1:
        return sympy.Rational(1, 2)
    return sympy.Rational(sympy.bernoulli(n))


class DunklService:
    """Dunkl and Cherednik operators on ℚ[𝔞] and the pairing (·,·)_k."""

    def __init__(
        self,
        settings: Optional[Settings] = None,
        root_service: Optional[RootSystemService] = None,
    ):
        self.settings = settings or get_settings()
        self.root_service = root_service or RootSystemService(self.settings)

    def ring(self, system: RootSystem) -> PolynomialRing:
        return PolynomialRing(system.ambient_dim)

    def reflect(self, system: RootSystem, root, p: Poly) -> Poly:
        """(r_α p)(x) = p(x − α(x)·2Gα/(α,α))."""
        ring = self.ring(system)
        alpha = ring.linear(root).as_expr()
        coroot_image = [
            to_rational(c)
            for c in (
                sum(system.gram[i][j] * root[j] for j in range(system.ambient_dim))
                * 2
                / system.norm2(root)
                for i in range(system.ambient_dim)
            )
        ]
        substitution = {x: x - c * alpha for x, c in zip(ring.gens, coroot_image)}
        return ring.poly(p.as_expr().xreplace(substitution))

    def _difference_quotients(
        self, system: RootSystem, k: MultiplicityFunction, point, p: Poly
    ) -> List[Tuple[sympy.Rational, Poly, Poly]]:
        """(k_α α(H), (1 − r_α)p / α, α) for the positive roots that contribute."""
        ring = self.ring(system)
        h = vector(point)
        result = []
        for root in system.positive_roots:
            k_alpha = k.at(root)
            if k_alpha == 0:
                continue
            alpha_h = sum(a * b for a, b in zip(root, h))
            if alpha_h == 0:
                continue
            alpha = ring.linear(root)
            quotient = (p - self.reflect(system, root, p)).exquo(alpha)
            result.append((to_rational(k_alpha) * to_rational(alpha_h), quotient, alpha))
        return result

    def _derivative(self, system: RootSystem, point, p: Poly) -> Poly:
        ring = self.ring(system)
        result = ring.zero()
        for c, x in zip(vector(point), ring.gens):
            if c != 0:
                result += p.diff(x) * to_rational(c)
        return result

    def dunkl_apply(
        self, system: RootSystem, k: MultiplicityFunction, point: Sequence, p: Poly
    ) -> Poly:
        """T̄_k(H)p = ∂(H)p + Σ_{α>0} k_α α(H) (p − r_α p)/α, exactly."""
        result = self._derivative(system, point, p)
        for weight, quotient, _ in self._difference_quotients(system, k, point, p):
            result += quotient * weight
        return result

    def cherednik_apply(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        point: Sequence,
        p: Poly,
        degree_cap: int,
    ) -> Poly:
        """
        T_k(H)p = ∂(H)p + Σ k_α α(H)(1 − e^{−α})⁻¹(1 − r_α)p − ρ(k)(H)p on S_{≤d}.

        (1 − e^{−α})⁻¹(1 − r_α)p is expanded as Σ_n (B_n/n!) αⁿ · (1 − r_α)p/α and
        the result is truncated at degree d.

        Raises:
            DegreeCapExceeded: If deg p > d
        """
        ring = self.ring(system)
        if not p.is_zero and p.total_degree() > degree_cap:
            raise DegreeCapExceeded(
                f"deg p = {p.total_degree()} exceeds the cap {degree_cap}",
                details={"degree": p.total_degree(), "cap": degree_cap},
            )
        result = self._derivative(system, point, p)
        for weight, quotient, alpha in self._difference_quotients(system, k, point, p):
            if quotient.is_zero:
                continue
            power = ring.one()
            for n in range(degree_cap - quotient.total_degree() + 1):
                coefficient = bernoulli_plus(n) / sympy.factorial(n)
                if coefficient != 0:
                    result += power * quotient * (weight * coefficient)
                power = power * alpha
        rho = self.root_service.rho_weighted(system, k)
        rho_h = sum(a * b for a, b in zip(rho, vector(point)))
        if rho_h != 0:
            result -= p * to_rational(rho_h)
        return ring.truncate(result, degree_cap)

    def _epsilon(self, system: RootSystem, i: int) -> Tuple:
        """ε_i = G e_i, the element of 𝔞 dual to the coordinate x_i."""
        return tuple(system.gram[j][i] for j in range(system.ambient_dim))

    def pairing_gram(
        self, system: RootSystem, k: MultiplicityFunction, degree: int
    ) -> List[Tuple[List[Tuple[int, ...]], sympy.Matrix]]:
        """
        Blocks of (x^β, x^γ)_k = (T̄_k(ε)^β x^γ)(0) for each degree ≤ d.

        Blocks of different degree are orthogonal, so only these are stored.

        Rows are built recursively: T̄(ε)^β = T̄(ε)^{β − e_i} T̄(ε_i) with i the
        first nonzero index of β, so each row only needs the previous degree.
        """
        ring = self.ring(system)
        n = system.ambient_dim
        rows: Dict[Tuple[int, ...], Dict[Tuple[int, ...], sympy.Rational]] = {
            (0,) * n: {(0,) * n: sympy.Integer(1)}
        }
        blocks = [([(0,) * n], sympy.Matrix([[1]]))]
        for d in range(1, degree + 1):
            # action of each T̄(ε_i) from degree d to degree d − 1
            actions = []
            for i in range(n):
                images = {}
                for gamma in ring.exponents(d):
                    image = self.dunkl_apply(system, k, self._epsilon(system, i), ring.monomial(gamma))
                    images[gamma] = dict(image.terms()) if not image.is_zero else {}
                actions.append(images)
            new_rows = {}
            for beta in ring.exponents(d):
                i = next(j for j, b in enumerate(beta) if b)
                previous = tuple(b - (1 if j == i else 0) for j, b in enumerate(beta))
                previous_row = rows[previous]
                row = {}
                for gamma, image in actions[i].items():
                    value = sum(
                        (coefficient * previous_row.get(mono, 0) for mono, coefficient in image.items()),
                        sympy.Integer(0),
                    )
                    row[gamma] = value
                new_rows[beta] = row
            rows = new_rows
            monomials = ring.exponents(d)
            blocks.append(
                (
                    monomials,
                    sympy.Matrix(
                        [[rows[beta].get(gamma, 0) for gamma in monomials] for beta in monomials]
                    ),
                )
            )
        return blocks

    def regular_by_gram(
        self, system: RootSystem, k: MultiplicityFunction, degree: int
    ) -> bool:
        """
        True iff (·,·)_k is non-degenerate on every degree ≤ d.

        A False is conclusive; a True only certifies the degrees checked.
        """
        for d, (_, block) in enumerate(self.pairing_gram(system, k, degree)):
            if block.det(method="bareiss") == 0:
                logger.debug(f"Pairing degenerates in degree {d} for k = {k.signature}")
                return False
        return True

    def gram_report(
        self, system: RootSystem, k: MultiplicityFunction, degree: int
    ) -> GramReport:
        blocks = []
        regular = True
        for d, (monomials, block) in enumerate(self.pairing_gram(system, k, degree)):
            det = block.det(method="bareiss")
            regular = regular and det != 0
            blocks.append(
                GramBlock(
                    degree=d,
                    monomials=[list(m) for m in monomials],
                    matrix=[[str(block[i, j]) for j in range(block.cols)] for i in range(block.rows)],
                    determinant=str(det),
                    symmetric=block == block.T,
                )
            )
        return GramReport(
            system=system.name,
            k=k.serialize(),
            degree=degree,
            blocks=blocks,
            regular=regular,
        )
