from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

from coxeter.models import CoxeterElement, ParabolicSubset
from exceptions import InvalidInputError

Partition = Tuple[int, ...]
Word = Tuple[int, ...]


class Box(NamedTuple):
    """A box of a multipartition; row and column are 1-based."""

    row: int
    col: int
    comp: int

    def __str__(self) -> str:
        return f"({self.row},{self.col},{self.comp})"


class BoxOrder(str, Enum):
    """How boxes of one residue are lined up before signatures are read.

    SCHUR reads component 0 first and each component right to left.
    NEGATIVE_LEVEL reads in decreasing box order: b < b' when b has the
    larger content, or the same content and the smaller component.
    """

    SCHUR = "schur"
    NEGATIVE_LEVEL = "negative-level"


class SignatureMode(str, Enum):
    NORMAL = "normal"
    DUAL = "dual"


class CrystalOp(str, Enum):
    E = "e"
    F = "f"
    E_DUAL = "e*"
    F_DUAL = "f*"

    @property
    def mode(self) -> SignatureMode:
        return SignatureMode.DUAL if self in (CrystalOp.E_DUAL, CrystalOp.F_DUAL) else SignatureMode.NORMAL

    @property
    def adds(self) -> bool:
        return self in (CrystalOp.F, CrystalOp.F_DUAL)


class FockOp(str, Enum):
    E = "e"
    F = "f"


class OrderKind(str, Enum):
    BOXWISE = "boxwise"
    CUMULATIVE = "cumulative"


def _clean(parts: Sequence[int]) -> Partition:
    parts = tuple(int(p) for p in parts)
    if any(p < 0 for p in parts):
        raise InvalidInputError(f"Partition {parts} has a negative part")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise InvalidInputError(f"Partition {parts} is not weakly decreasing")
    return tuple(p for p in parts if p)


def transpose(parts: Partition) -> Partition:
    return tuple(sum(1 for p in parts if p > c) for c in range(parts[0])) if parts else ()


@dataclass(frozen=True, order=True)
class Multipartition:
    components: Tuple[Partition, ...]

    def __post_init__(self):
        if not self.components:
            raise InvalidInputError("A multipartition needs at least one component")
        object.__setattr__(self, "components", tuple(_clean(c) for c in self.components))

    @classmethod
    def empty(cls, level: int) -> "Multipartition":
        return cls(((),) * level)

    @classmethod
    def parse(cls, text: str) -> "Multipartition":
        """Read ``2,2|3,1,1,1``; an empty component is written as nothing between bars."""
        try:
            return cls(tuple(
                tuple(int(p) for p in chunk.split(",") if p.strip()) for chunk in text.strip().split("|")
            ))
        except ValueError as e:
            raise InvalidInputError(f"Cannot read multipartition {text!r}: {e}") from e

    @property
    def level(self) -> int:
        return len(self.components)

    @property
    def size(self) -> int:
        return sum(sum(c) for c in self.components)

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, comp: int) -> Partition:
        return self.components[comp]

    def boxes(self) -> Iterator[Box]:
        for comp, parts in enumerate(self.components):
            for row, length in enumerate(parts, start=1):
                for col in range(1, length + 1):
                    yield Box(row, col, comp)

    def box_set(self) -> frozenset:
        return frozenset(self.boxes())

    def addable(self) -> List[Box]:
        out = []
        for comp, parts in enumerate(self.components):
            padded = parts + (0,)
            for row, length in enumerate(padded, start=1):
                if row == 1 or padded[row - 2] > length:
                    out.append(Box(row, length + 1, comp))
        return out

    def removable(self) -> List[Box]:
        out = []
        for comp, parts in enumerate(self.components):
            for row, length in enumerate(parts, start=1):
                if row == len(parts) or parts[row] < length:
                    out.append(Box(row, length, comp))
        return out

    def add(self, box: Box) -> "Multipartition":
        if box not in self.addable():
            raise InvalidInputError(f"Box {box} is not addable to {self}")
        return self._with_row(box.comp, box.row, box.col)

    def remove(self, box: Box) -> "Multipartition":
        if box not in self.removable():
            raise InvalidInputError(f"Box {box} is not removable from {self}")
        return self._with_row(box.comp, box.row, box.col - 1)

    def _with_row(self, comp: int, row: int, length: int) -> "Multipartition":
        parts = list(self.components[comp]) + [0]
        parts[row - 1] = length
        components = list(self.components)
        components[comp] = tuple(parts)
        return Multipartition(tuple(components))

    def __str__(self) -> str:
        return "|".join(",".join(str(p) for p in c) for c in self.components)


@dataclass(frozen=True)
class Multicharge:
    """Lifted charges s_0..s_{l-1} together with e.

    A box in row x and column y of component i has content x - y + s_i;
    its residue is the content mod e.
    """

    values: Tuple[int, ...]
    e: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(s) for s in self.values))
        if self.e < 2:
            raise InvalidInputError(f"e must be at least 2, got {self.e}")
        if not self.values:
            raise InvalidInputError("A multicharge needs at least one entry")

    @classmethod
    def parse(cls, text: str, e: int) -> "Multicharge":
        try:
            return cls(tuple(int(s) for s in text.split(",")), e)
        except ValueError as e_:
            raise InvalidInputError(f"Cannot read charges {text!r}: {e_}") from e_

    @property
    def level(self) -> int:
        return len(self.values)

    def content(self, box: Box) -> int:
        return box.row - box.col + self.values[box.comp]

    def residue(self, box: Box) -> int:
        return self.content(box) % self.e

    def check(self, lam: Multipartition) -> Multipartition:
        if lam.level != self.level:
            raise InvalidInputError(f"{lam} has {lam.level} components but the charge has {self.level}")
        return lam

    def star(self) -> "Multicharge":
        return Multicharge(tuple(-s for s in reversed(self.values)), self.e)

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.values) + f"; e={self.e})"


@dataclass(frozen=True)
class Signature:
    """The i-signature of a multipartition.

    ``boxes`` lists the addable (+) and removable (-) i-boxes in decreasing
    order. ``surviving`` indexes the entries left after cancellation and
    ``pairs`` holds the (minus, plus) index pairs erased together.
    """

    residue: int
    mode: SignatureMode
    boxes: Tuple[Tuple[str, Box], ...]
    surviving: Tuple[int, ...]
    pairs: Tuple[Tuple[int, int], ...]

    @property
    def raw(self) -> str:
        return "".join(sign for sign, _ in self.boxes)

    @property
    def reduced(self) -> str:
        return "".join(self.boxes[k][0] for k in self.surviving)

    def surviving_boxes(self, sign: str) -> List[Box]:
        return [self.boxes[k][1] for k in self.surviving if self.boxes[k][0] == sign]

    def __str__(self) -> str:
        return f"{self.raw} -> {self.reduced or '()'}"


@dataclass(frozen=True)
class MarkedPair:
    residue: int
    minus: Box
    plus: Box


@dataclass(frozen=True)
class Companions:
    """Companions of w.lambda, tied to the reduced expression they were built from."""

    word: Word
    element: Multipartition
    members: Tuple[Multipartition, ...]

    def __iter__(self) -> Iterator[Multipartition]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item: Multipartition) -> bool:
        return item in self.members


@dataclass(frozen=True)
class Witness:
    """A word w = C_{a,m} with its two images w.lambda and w*.mu."""

    a: int
    m: int
    word: Word
    left: Multipartition
    right: Multipartition
    companions: Optional[Tuple[Multipartition, ...]] = None


@dataclass(frozen=True)
class VirtualMultipartition:
    """Components padded to fixed heights m_0..m_{l-1}, with their X(J) coordinates."""

    rows: Tuple[Partition, ...]
    heights: Tuple[int, ...]

    def coordinates(self) -> Tuple[int, ...]:
        out: List[int] = []
        for parts, m in zip(self.rows, self.heights):
            out.extend(parts[k - 1] - k + 1 + m for k in range(1, m + 1))
        return tuple(out)

    def to_multipartition(self) -> Multipartition:
        return Multipartition(self.rows)


@dataclass(frozen=True)
class Classification:
    """Where a multipartition lands in the affine Weyl group picture.

    ``x`` is the X(J) vector, ``orbit`` its fundamental-domain representative,
    ``stabilizer`` the parabolic fixing it and ``coset`` the minimal a with x = a.orbit.
    """

    x: Tuple[int, ...]
    orbit: Tuple[int, ...]
    stabilizer: ParabolicSubset
    coset: CoxeterElement
    blocks: Tuple[int, ...] = field(default=())


@dataclass(frozen=True)
class WedgeVector:
    """A pure wedge v_{i_1} ^ ... ^ v_{i_m} per block, indices strictly increasing."""

    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(int(i) for i in b) for b in self.blocks))
        for block in self.blocks:
            if any(a >= b for a, b in zip(block, block[1:])):
                raise InvalidInputError(f"Wedge indices {block} are not strictly increasing")

    def __str__(self) -> str:
        return " (x) ".join("^".join(f"v{i}" for i in block) for block in self.blocks)
