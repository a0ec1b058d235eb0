from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Optional, Tuple, FrozenSet, Iterable, List

from exceptions import InvalidInputError, NonFinitaryError


class Kind(str, Enum):
    FINITE = "finite"
    AFFINE = "affine"


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    DOUBLE = "double"


@dataclass(frozen=True)
class CoxeterSystem:
    """Type A Coxeter system: S_n (finite) or the affine group on n strands.

    Elements are stored as windows [w(1), ..., w(n)] of periodic permutations
    with w(i + n) = w(i) + n. Finite elements are the windows that permute
    1..n, so both kinds share one code path. Generators are integers:
    s_1..s_{n-1}, plus s_0 in the affine kind.
    """

    kind: Kind
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.rank < 1 or (self.kind == Kind.AFFINE and self.rank < 2):
            raise InvalidInputError(f"Rank {self.rank} is too small for kind {self.kind.value}")

    @property
    def is_affine(self) -> bool:
        return self.kind == Kind.AFFINE

    @property
    def generators(self) -> Tuple[int, ...]:
        start = 0 if self.is_affine else 1
        return tuple(range(start, self.rank))

    def check_generator(self, s: int) -> int:
        if s not in self.generators:
            raise InvalidInputError(f"s{s} is not a generator of {self}")
        return s

    def adjacent(self, s: int, t: int) -> bool:
        if s == t:
            return False
        if self.is_affine:
            return (s - t) % self.rank in (1, self.rank - 1)
        return abs(s - t) == 1

    def m(self, s: int, t: int) -> Optional[int]:
        """Coxeter matrix entry; None stands for infinity."""
        if s == t:
            return 1
        if self.is_affine and self.rank == 2:
            return None
        return 3 if self.adjacent(s, t) else 2

    def identity(self) -> "CoxeterElement":
        return CoxeterElement(self, tuple(range(1, self.rank + 1)))

    def generator(self, s: int) -> "CoxeterElement":
        return self.identity().right_multiply(self.check_generator(s))

    def from_word(self, word: Iterable[int]) -> "CoxeterElement":
        w = self.identity()
        for s in word:
            w = w.right_multiply(self.check_generator(s))
        return w

    def parabolic(self, members: Iterable[int]) -> "ParabolicSubset":
        return ParabolicSubset(self, frozenset(self.check_generator(s) for s in members))

    def __str__(self) -> str:
        prefix = "~A" if self.is_affine else "A"
        return f"{prefix}{self.rank - 1} (n={self.rank})"


@dataclass(frozen=True)
class CoxeterElement:
    system: CoxeterSystem
    window: Tuple[int, ...]

    def value(self, i: int) -> int:
        """w(i) for any integer i, using periodicity."""
        n = self.system.rank
        q, r = divmod(i - 1, n)
        return self.window[r] + q * n

    def right_multiply(self, s: int) -> "CoxeterElement":
        w = list(self.window)
        n = self.system.rank
        if s == 0:
            w[0], w[n - 1] = self.window[n - 1] - n, self.window[0] + n
        else:
            w[s - 1], w[s] = w[s], w[s - 1]
        return CoxeterElement(self.system, tuple(w))

    def left_multiply(self, s: int) -> "CoxeterElement":
        n = self.system.rank

        def shift(v: int) -> int:
            if (v - s) % n == 0:
                return v + 1
            if (v - s - 1) % n == 0:
                return v - 1
            return v

        return CoxeterElement(self.system, tuple(shift(v) for v in self.window))

    def __mul__(self, other: "CoxeterElement") -> "CoxeterElement":
        if other.system != self.system:
            raise InvalidInputError("Cannot multiply elements of different Coxeter systems")
        return CoxeterElement(self.system, tuple(self.value(v) for v in other.window))

    def inverse(self) -> "CoxeterElement":
        n = self.system.rank
        inv = [0] * n
        for i, v in enumerate(self.window, start=1):
            q, r = divmod(v - 1, n)
            inv[r] = i - q * n
        return CoxeterElement(self.system, tuple(inv))

    @cached_property
    def length(self) -> int:
        n = self.system.rank
        w = self.window
        return sum(abs((w[j] - w[i]) // n) for i in range(n) for j in range(i + 1, n))

    def has_right_descent(self, s: int) -> bool:
        if s == 0:
            return self.window[-1] - self.system.rank > self.window[0]
        return self.window[s - 1] > self.window[s]

    def has_left_descent(self, s: int) -> bool:
        return self.inverse().has_right_descent(s)

    @cached_property
    def right_descents(self) -> FrozenSet[int]:
        return frozenset(s for s in self.system.generators if self.has_right_descent(s))

    @cached_property
    def left_descents(self) -> FrozenSet[int]:
        return self.inverse().right_descents

    @cached_property
    def word(self) -> Tuple[int, ...]:
        """Shortlex-minimal reduced word, read left to right."""
        letters: List[int] = []
        w = self
        while True:
            descents = w.left_descents
            if not descents:
                return tuple(letters)
            s = min(descents)
            letters.append(s)
            w = w.left_multiply(s)

    @property
    def is_identity(self) -> bool:
        return self.window == tuple(range(1, self.system.rank + 1))

    def __lt__(self, other: "CoxeterElement") -> bool:
        return (self.length, self.word) < (other.length, other.word)

    def __str__(self) -> str:
        return "".join(f"s{s}" for s in self.word) or "e"

    def __repr__(self) -> str:
        return f"CoxeterElement({self.word})"


@dataclass(frozen=True)
class ParabolicSubset:
    system: CoxeterSystem
    members: FrozenSet[int]

    @property
    def is_finitary(self) -> bool:
        return not self.system.is_affine or set(self.members) != set(self.system.generators)

    def require_finitary(self) -> "ParabolicSubset":
        if not self.is_finitary:
            raise NonFinitaryError(f"Parabolic subset {sorted(self.members)} generates an infinite group")
        return self

    def __contains__(self, s: int) -> bool:
        return s in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __le__(self, other: "ParabolicSubset") -> bool:
        return self.members <= other.members

    def __and__(self, other: "ParabolicSubset") -> "ParabolicSubset":
        return ParabolicSubset(self.system, self.members & other.members)

    def __or__(self, other: "ParabolicSubset") -> "ParabolicSubset":
        return ParabolicSubset(self.system, self.members | other.members)

    def __sub__(self, other: "ParabolicSubset") -> "ParabolicSubset":
        return ParabolicSubset(self.system, self.members - other.members)

    def __str__(self) -> str:
        return "{" + ",".join(f"s{s}" for s in sorted(self.members)) + "}"


@dataclass(frozen=True)
class Coset:
    side: Side
    parabolics: Tuple[ParabolicSubset, ...]
    representative: CoxeterElement
