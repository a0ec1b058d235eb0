from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from coxeter.models import CoxeterElement, CoxeterSystem
from exceptions import ConsistencyError, InvalidInputError
from hecke.models import HeckeElement, LaurentPoly
from polyring.models import Fraction, MultiPoly, realization_for
from polyring.tools import act

Bits = Tuple[int, ...]
Word = Tuple[int, ...]


class Decoration(str, Enum):
    U0 = "U0"
    U1 = "U1"
    D0 = "D0"
    D1 = "D1"


def end_of(system: CoxeterSystem, word: Sequence[int], bits: Sequence[int]) -> CoxeterElement:
    """Product of the letters of ``word`` picked out by ``bits``."""
    return system.from_word([s for s, b in zip(word, bits) if b])


@dataclass(frozen=True)
class BSWord:
    """An object of the diagrammatic category: a sequence of simple reflections."""

    system: CoxeterSystem
    letters: Word

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.system.check_generator(s) for s in self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    @property
    def is_reduced(self) -> bool:
        return self.system.from_word(self.letters).length == len(self.letters)

    def __str__(self) -> str:
        return "".join(f"s{s}" for s in self.letters) or "()"


@dataclass(frozen=True)
class Subexpression:
    word: BSWord
    bits: Bits
    decorations: Tuple[Decoration, ...]
    target: CoxeterElement
    defect: int

    @property
    def is_all_ones(self) -> bool:
        return all(self.bits)

    def __str__(self) -> str:
        return "".join(d.value for d in self.decorations) or "()"


@dataclass(frozen=True)
class LocalizedModule:
    """BS(w) tensored with the fraction field, split into standard summands.

    The summand of a subexpression e is Q_{end(e)}, with coordinate
    p_e(f_0 (x) f_1 (x) ... (x) f_k) = f_0 x_1(f_1) ... x_k(f_k), where x_i is
    the product of the first i letters picked out by e.
    """

    word: BSWord

    @property
    def system(self) -> CoxeterSystem:
        return self.word.system

    @cached_property
    def basis(self) -> List[Bits]:
        k = len(self.word)
        return [tuple((n >> (k - 1 - i)) & 1 for i in range(k)) for n in range(2 ** k)]

    def end(self, bits: Bits) -> CoxeterElement:
        return end_of(self.system, self.word.letters, bits)

    def prefixes(self, bits: Bits) -> List[CoxeterElement]:
        """x_1, ..., x_k for the subexpression ``bits``."""
        out = []
        x = self.system.identity()
        for s, b in zip(self.word.letters, bits):
            if b:
                x = x.right_multiply(s)
            out.append(x)
        return out

    def euler(self, bits: Bits) -> MultiPoly:
        """Product of x_k(a_{s_k}) over the letters; relates a morphism to its flip."""
        real = realization_for(self.system)
        out = real.ring.one
        for x, s in zip(self.prefixes(bits), self.word.letters):
            out *= act(x, real.root(s))
        return out

    def standard_coordinates(self, tensor: Sequence[MultiPoly]) -> Dict[Bits, MultiPoly]:
        """Coordinates p_e of a pure tensor f_0 (x) ... (x) f_k."""
        if len(tensor) != len(self.word) + 1:
            raise InvalidInputError(f"A pure tensor in BS({self.word}) has {len(self.word) + 1} factors")
        out = {}
        for bits in self.basis:
            value = tensor[0]
            for x, f in zip(self.prefixes(bits), tensor[1:]):
                value = value * act(x, f)
            out[bits] = value
        return out


@dataclass
class MorphismMatrix:
    """Localized matrix M[f, e] of a morphism BS(source) -> BS(target).

    p_f after the morphism equals the sum over e of M[f, e] p_e. Entries vanish
    unless f and e end at the same element.
    """

    source: BSWord
    target: BSWord
    entries: Dict[Tuple[Bits, Bits], Fraction] = field(default_factory=dict)
    degree: int = 0

    @property
    def system(self) -> CoxeterSystem:
        return self.source.system

    def entry(self, f: Bits, e: Bits) -> Fraction:
        value = self.entries.get((f, e))
        if value is None:
            return realization_for(self.system).field.zero
        return value

    def row(self, f: Bits) -> Dict[Bits, Fraction]:
        return {e: c for (g, e), c in self.entries.items() if g == f}

    def column(self, e: Bits) -> Dict[Bits, Fraction]:
        return {f: c for (f, g), c in self.entries.items() if g == e}

    def compose(self, other: "MorphismMatrix") -> "MorphismMatrix":
        """self after other."""
        if other.target.letters != self.source.letters:
            raise InvalidInputError(f"Cannot compose BS({other.target}) with BS({self.source})")
        by_row: Dict[Bits, List[Tuple[Bits, Fraction]]] = {}
        for (g, e), c in other.entries.items():
            by_row.setdefault(g, []).append((e, c))
        out: Dict[Tuple[Bits, Bits], Fraction] = {}
        for (f, g), a in self.entries.items():
            for e, b in by_row.get(g, ()):
                out[(f, e)] = out.get((f, e), 0) + a * b
        out = {key: value for key, value in out.items() if value}
        return MorphismMatrix(other.source, self.target, out, self.degree + other.degree)

    def check_block_structure(self) -> None:
        for (f, e) in self.entries:
            if end_of(self.system, self.target.letters, f) != end_of(self.system, self.source.letters, e):
                raise ConsistencyError(f"Entry ({f}, {e}) connects different standard summands")


@dataclass
class GramForm:
    """Light-leaf intersection form of x in BS(w), rows and columns indexed by leaves."""

    element: CoxeterElement
    word: BSWord
    leaves: List[Subexpression]
    matrix: List[List[MultiPoly]]

    @property
    def defects(self) -> List[int]:
        return [leaf.defect for leaf in self.leaves]

    @property
    def size(self) -> int:
        return len(self.leaves)

    def entry(self, i: int, j: int) -> MultiPoly:
        return self.matrix[i][j]

    def constant_block(self, d: int) -> List[List[int]]:
        """Integer matrix pairing leaves of defect d with leaves of defect -d."""
        rows = [i for i, leaf in enumerate(self.leaves) if leaf.defect == d]
        cols = [j for j, leaf in enumerate(self.leaves) if leaf.defect == -d]
        return [[int(self.matrix[i][j].LC) if self.matrix[i][j] else 0 for j in cols] for i in rows]


@dataclass
class PCanonicalEntry:
    element: CoxeterElement
    prime: Optional[int]
    expansion: HeckeElement
    provenance: Dict[CoxeterElement, LaurentPoly] = field(default_factory=dict)

    def coefficient(self, x: CoxeterElement) -> LaurentPoly:
        return self.expansion.coefficient(x)

    @property
    def mode(self) -> str:
        return "rational" if self.prime is None else f"p={self.prime}"
