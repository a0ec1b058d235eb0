from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from coxeter.models import CoxeterSystem, Kind, ParabolicSubset
from exceptions import InvalidInputError
from polyring.models import MultiPoly, realization_for


@dataclass(frozen=True)
class ZeroWeight:
    """The formal zero that Littelmann operators return when they have nothing to act on."""

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return "0"


ZERO = ZeroWeight()


@dataclass(frozen=True)
class Weight:
    entries: Tuple[int, ...]
    e: int

    kind = Kind.FINITE

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(a) for a in self.entries))
        if self.e < 2:
            raise InvalidInputError(f"e must be at least 2, got {self.e}")
        if not self.entries:
            raise InvalidInputError("A weight needs at least one entry")
        if any(a > b for a, b in zip(self.entries, self.entries[1:])):
            raise InvalidInputError(f"{self.entries} is not weakly increasing")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def system(self) -> CoxeterSystem:
        return CoxeterSystem(self.kind, self.n)

    def __getitem__(self, i: int) -> int:
        """1-based entry, matching the index of x_i."""
        return self.entries[i - 1]

    def replace(self, entries) -> "Weight":
        return type(self)(tuple(entries), self.e)

    def __str__(self) -> str:
        if all(0 <= a <= 9 for a in self.entries):
            return "(" + "".join(str(a) for a in self.entries) + ")"
        return "(" + ",".join(str(a) for a in self.entries) + ")"


@dataclass(frozen=True)
class FiniteWeight(Weight):
    """An element of Lambda_{n,e}: 1 <= l_1 <= ... <= l_n <= e."""

    kind = Kind.FINITE

    def __post_init__(self):
        super().__post_init__()
        if self.entries[0] < 1 or self.entries[-1] > self.e:
            raise InvalidInputError(f"{self.entries} has entries outside 1..{self.e}")


@dataclass(frozen=True)
class AffineWeight(Weight):
    """Orbit representative: l_1 <= ... <= l_n <= l_1 + e."""

    kind = Kind.AFFINE

    def __post_init__(self):
        super().__post_init__()
        if self.n < 2:
            raise InvalidInputError("Affine weights need n >= 2")
        if self.entries[-1] > self.entries[0] + self.e:
            raise InvalidInputError(f"{self.entries} is not in the fundamental domain for e={self.e}")


def weight_class(kind: Kind):
    return AffineWeight if Kind(kind) == Kind.AFFINE else FiniteWeight


@dataclass(frozen=True)
class FString:
    """A maximal F_j-string with the stabilizer of each term."""

    color: int
    weights: Tuple[Weight, ...]
    stabilizers: Tuple[ParabolicSubset, ...]

    @property
    def start(self) -> Weight:
        return self.weights[0]

    @property
    def finish(self) -> Weight:
        return self.weights[-1]

    def __len__(self) -> int:
        return len(self.weights) - 1


@dataclass(frozen=True)
class DotFamily:
    """Dot polynomials f_{l -> F_j l} on Lambda_{n,e} or its affine version.

    If F_j moves index k from d to d + 1, with d = j' + r e and 1 <= j' <= e,
    the value is x_k + shift, plus r y when ``monodromy`` is set. Thick dots
    add up the single steps.
    """

    kind: Kind
    n: int
    e: int
    shift: Optional[MultiPoly] = None
    monodromy: bool = True

    @property
    def system(self) -> CoxeterSystem:
        return CoxeterSystem(self.kind, self.n)

    @property
    def z(self) -> MultiPoly:
        ring = realization_for(self.system).ring
        return ring.zero if self.shift is None else self.shift

    def step(self, index: int, value: int) -> MultiPoly:
        """The polynomial of a single step moving ``index`` from ``value`` to ``value + 1``."""
        real = realization_for(self.system)
        out = real.x(index) + self.z
        if self.kind == Kind.AFFINE and self.monodromy:
            r = (value - ((value - 1) % self.e + 1)) // self.e
            out = out + r * real.y
        return out


@dataclass(frozen=True)
class PropertyFailure:
    name: str
    witness: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.name} at {self.witness}: {self.detail}" if self.detail else f"{self.name} at {self.witness}"


@dataclass
class PropertyReport:
    """Outcome of an exhaustive property check; ``checked`` counts instances per property."""

    checked: Dict[str, int] = field(default_factory=dict)
    failures: List[PropertyFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def count(self, name: str) -> None:
        self.checked[name] = self.checked.get(name, 0) + 1

    def fail(self, name: str, witness: str, detail: str = "") -> None:
        self.failures.append(PropertyFailure(name, witness, detail))

    def failed(self, name: str) -> List[PropertyFailure]:
        return [f for f in self.failures if f.name == name]


class CrossingKind(str, Enum):
    SAME = "same"
    ADJACENT = "adjacent"
    DISTANT = "distant"
    FUNKY = "funky"


class SingularGenerator(str, Enum):
    CLOCKWISE = "clockwise"
    COUNTERCLOCKWISE = "counterclockwise"
    UPWARD_CROSSING = "upward_crossing"
    SIDEWAYS_CROSSING = "sideways_crossing"


# Degree of an interior crossing of two strands, by how their colors relate.
CROSSING_DEGREES = {
    CrossingKind.SAME: -2,
    CrossingKind.ADJACENT: 1,
    CrossingKind.DISTANT: 0,
    CrossingKind.FUNKY: 2,
}


@dataclass(frozen=True)
class CrossingDegree:
    kind: CrossingKind
    degree: int
    zero_map: bool = False
