from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from coxeter.models import CoxeterElement, CoxeterSystem, Kind, ParabolicSubset
from exceptions import ConstraintError, InvalidInputError
from fock.models import Multicharge, Multipartition


def block_parabolic(heights: Sequence[int]) -> ParabolicSubset:
    """Every finite simple reflection of the affine group on sum(heights) except the ones joining two blocks."""
    boundaries, total = set(), 0
    for m in heights[:-1]:
        total += m
        boundaries.add(total)
    system = CoxeterSystem(Kind.AFFINE, sum(heights))
    return system.parabolic(s for s in range(1, system.rank) if s not in boundaries)


@dataclass(frozen=True)
class MultiplicityQuery:
    """One decomposition number [Delta(lam) : L(mu)].

    ``charges`` are the residues r_0..r_{l-1} mod e and ``heights`` the
    m-vector of the virtual multipartitions. ``p`` None asks for the
    characteristic-zero value.
    """

    lam: Multipartition
    mu: Multipartition
    e: int
    charges: Tuple[int, ...]
    heights: Tuple[int, ...]
    p: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "charges", tuple(int(r) for r in self.charges))
        object.__setattr__(self, "heights", tuple(int(m) for m in self.heights))
        level = self.lam.level
        if self.mu.level != level or len(self.charges) != level or len(self.heights) != level:
            raise InvalidInputError(
                f"Level mismatch: lam {self.lam.level}, mu {self.mu.level}, "
                f"charges {len(self.charges)}, heights {len(self.heights)}"
            )
        if self.lam.size != self.mu.size:
            raise InvalidInputError(f"{self.lam} and {self.mu} have different sizes")
        if self.e < 2:
            raise InvalidInputError(f"e must be at least 2, got {self.e}")
        for i, m in enumerate(self.heights):
            if (m + self.charges[level - 1 - i]) % self.e:
                raise ConstraintError(f"m_{i}={m} is not congruent to -r_{level - 1 - i} mod {self.e}")
            if m <= self.n:
                raise ConstraintError(f"m_{i}={m} must exceed n={self.n}")
        if sum(self.heights) < 2:
            raise ConstraintError(f"Heights {self.heights} are too small to carry an affine action")

    @property
    def n(self) -> int:
        return self.lam.size

    @property
    def level(self) -> int:
        return self.lam.level

    @property
    def charge(self) -> Multicharge:
        return Multicharge(self.charges, self.e)

    @property
    def system(self) -> CoxeterSystem:
        return CoxeterSystem(Kind.AFFINE, sum(self.heights))

    @property
    def J(self) -> ParabolicSubset:
        return block_parabolic(self.heights)

    @property
    def conditional(self) -> bool:
        """True when the answer relies on m_0 - m_1 >> ... >> n, for which no effective bound is known."""
        return self.level > 1

    @property
    def mode(self) -> str:
        return "rational" if self.p is None else f"p={self.p}"


@dataclass(frozen=True)
class MultiplicityResult:
    """``value`` is None when the Hecke quotient kills L(mu)."""

    query: MultiplicityQuery
    value: Optional[int]
    orbits_match: bool
    alpha: Optional[CoxeterElement] = None
    beta: Optional[CoxeterElement] = None

    @property
    def conditional(self) -> bool:
        return self.query.conditional

    @property
    def defined(self) -> bool:
        return self.value is not None
