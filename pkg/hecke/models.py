from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from coxeter.models import CoxeterElement, CoxeterSystem
from exceptions import InvalidInputError


class LaurentPoly:
    """Immutable element of Z[v, v^-1], stored as exponent -> coefficient."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Optional[Dict[int, int]] = None):
        self._coeffs: Dict[int, int] = {k: c for k, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def monomial(cls, coeff: int = 1, exponent: int = 0) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def v(cls, exponent: int = 1) -> "LaurentPoly":
        return cls({exponent: 1})

    @classmethod
    def from_pairs(cls, pairs: Iterable[Iterable[int]]) -> "LaurentPoly":
        out: Dict[int, int] = {}
        for coeff, exponent in pairs:
            out[exponent] = out.get(exponent, 0) + coeff
        return cls(out)

    @staticmethod
    def coerce(other: Union["LaurentPoly", int]) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other})
        raise TypeError(f"Cannot treat {other!r} as a Laurent polynomial")

    def items(self) -> Iterator[Tuple[int, int]]:
        return iter(sorted(self._coeffs.items()))

    def coefficient(self, exponent: int) -> int:
        return self._coeffs.get(exponent, 0)

    def to_pairs(self) -> List[List[int]]:
        return [[c, k] for k, c in self.items()]

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def degree(self) -> int:
        return max(self._coeffs) if self._coeffs else 0

    @property
    def min_degree(self) -> int:
        return min(self._coeffs) if self._coeffs else 0

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self._coeffs.values())

    def bar(self) -> "LaurentPoly":
        return LaurentPoly({-k: c for k, c in self._coeffs.items()})

    def is_bar_invariant(self) -> bool:
        return self == self.bar()

    def evaluate_at_one(self) -> int:
        return sum(self._coeffs.values())

    def __add__(self, other):
        other = LaurentPoly.coerce(other)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        other = LaurentPoly.coerce(other)
        out: Dict[int, int] = {}
        for k1, c1 in self._coeffs.items():
            for k2, c2 in other._coeffs.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent < 0:
            raise InvalidInputError("Negative powers are only defined for monomials")
        out = LaurentPoly.monomial(1, 0)
        for _ in range(exponent):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.monomial(other, 0)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._coeffs.items())))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for k, c in sorted(self._coeffs.items(), reverse=True):
            base = "" if k == 0 else ("v" if k == 1 else f"v^{k}")
            if not base:
                parts.append(str(c))
            elif c == 1:
                parts.append(base)
            elif c == -1:
                parts.append(f"-{base}")
            else:
                parts.append(f"{c}{base}")
        return " + ".join(parts).replace("+ -", "- ")


class HeckeElement:
    """Finitely supported combination of standard basis vectors T_w."""

    __slots__ = ("system", "_support")

    def __init__(self, system: CoxeterSystem, support: Optional[Dict[CoxeterElement, LaurentPoly]] = None):
        self.system = system
        self._support: Dict[CoxeterElement, LaurentPoly] = {}
        for w, c in (support or {}).items():
            c = LaurentPoly.coerce(c)
            if w.system != system:
                raise InvalidInputError("Support element lies in a different Coxeter system")
            if c:
                self._support[w] = c

    @classmethod
    def standard(cls, w: CoxeterElement, coeff: Union[LaurentPoly, int] = 1) -> "HeckeElement":
        return cls(w.system, {w: LaurentPoly.coerce(coeff)})

    @classmethod
    def zero(cls, system: CoxeterSystem) -> "HeckeElement":
        return cls(system)

    def coefficient(self, w: CoxeterElement) -> LaurentPoly:
        return self._support.get(w, LaurentPoly())

    def items(self) -> List[Tuple[CoxeterElement, LaurentPoly]]:
        return sorted(self._support.items(), key=lambda item: item[0])

    def support(self) -> List[CoxeterElement]:
        return sorted(self._support)

    @property
    def is_zero(self) -> bool:
        return not self._support

    def _check(self, other: "HeckeElement") -> None:
        if other.system != self.system:
            raise InvalidInputError("Hecke elements belong to different Coxeter systems")

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        out = dict(self._support)
        for w, c in other._support.items():
            out[w] = out.get(w, LaurentPoly()) + c
        return HeckeElement(self.system, out)

    def __neg__(self) -> "HeckeElement":
        return HeckeElement(self.system, {w: -c for w, c in self._support.items()})

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def scale(self, coeff: Union[LaurentPoly, int]) -> "HeckeElement":
        coeff = LaurentPoly.coerce(coeff)
        return HeckeElement(self.system, {w: c * coeff for w, c in self._support.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.system == other.system and self._support == other._support

    def __hash__(self) -> int:
        return hash((self.system, tuple(self.items())))

    def __repr__(self) -> str:
        if not self._support:
            return "HeckeElement(0)"
        body = " + ".join(f"({c})T[{w}]" for w, c in self.items())
        return f"HeckeElement({body})"
