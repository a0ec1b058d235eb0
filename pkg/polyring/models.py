from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing, ring

from coxeter.models import CoxeterSystem, Kind

# Exact polynomial in x_1..x_n (and y for the affine realization); deg x_i = 2.
MultiPoly = PolyElement
# Element of the localization Q = Frac(R).
Fraction = FracElement


@dataclass(frozen=True)
class Realization:
    """The gl_n realization of S_n, or its affine extension with the null root y.

    s_i swaps x_i and x_{i+1}; s_0 sends x_1 to x_n + y and x_n to x_1 - y.
    Simple roots are a_i = x_i - x_{i+1} and a_0 = x_n - x_1 + y.
    """

    system: CoxeterSystem
    ring: PolyRing

    @property
    def rank(self) -> int:
        return self.system.rank

    @property
    def field(self) -> FracField:
        return self.ring.to_field()

    def x(self, i: int) -> MultiPoly:
        return self.ring.gens[i - 1]

    @property
    def y(self) -> MultiPoly:
        if not self.system.is_affine:
            return self.ring.zero
        return self.ring.gens[-1]

    def root(self, s: int) -> MultiPoly:
        n = self.rank
        if s == 0:
            return self.x(n) - self.x(1) + self.y
        return self.x(s) - self.x(s + 1)

    def rho(self, s: int) -> MultiPoly:
        """A linear form with d_s(rho) = 1."""
        return self.x(self.rank) if s == 0 else self.x(s)

    def images(self, target: PolyRing, s: int) -> List[Tuple[MultiPoly, MultiPoly]]:
        """Substitution pairs realizing s on a ring with the same generators."""
        gens = target.gens
        n = self.rank
        if s == 0:
            y = gens[n]
            return [(gens[0], gens[n - 1] + y), (gens[n - 1], gens[0] - y)]
        return [(gens[s - 1], gens[s]), (gens[s], gens[s - 1])]

    def mod_p_ring(self, p: int) -> PolyRing:
        return ring(self.ring.symbols, GF(p), grevlex)[0]

    def rational_ring(self) -> PolyRing:
        return ring(self.ring.symbols, QQ, grevlex)[0]


def symbol_names(system: CoxeterSystem) -> List[str]:
    names = [f"x{i}" for i in range(1, system.rank + 1)]
    if system.kind == Kind.AFFINE:
        names.append("y")
    return names


@lru_cache(maxsize=None)
def realization_for(system: CoxeterSystem) -> Realization:
    return Realization(system, ring(symbol_names(system), ZZ, grevlex)[0])


@dataclass(frozen=True)
class DualBases:
    """Bases of R^J over R^I with d_I^J(b_k b*_l) = delta_kl."""

    basis: Tuple[MultiPoly, ...]
    dual: Tuple[MultiPoly, ...]

    @property
    def coproduct(self) -> Tuple[Tuple[MultiPoly, MultiPoly], ...]:
        return tuple(zip(self.basis, self.dual))
