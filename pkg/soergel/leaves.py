"""Light leaves in localized form.

A light leaf is stored as the list of local steps it is built from. Each step is
a generator (dot, merge, braid vertex) placed at some position of the current
word, with identities on both sides. Rows of the full matrix are obtained by
pulling a row vector back through the steps, last step first.
"""
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from coxeter.models import CoxeterElement, CoxeterSystem
from exceptions import ConsistencyError, InvalidInputError
from polyring.models import Fraction, MultiPoly, realization_for
from polyring.tools import act_fraction, demazure
from soergel.models import (
    Bits, BSWord, Decoration, LocalizedModule, MorphismMatrix, Subexpression, Word, end_of,
)

Row = Dict[Bits, Fraction]


@dataclass(frozen=True)
class Step:
    """A local morphism applied at ``position`` of ``before``, giving ``after``."""

    position: int
    local: MorphismMatrix
    before: Word
    after: Word


def _field(system: CoxeterSystem):
    return realization_for(system).field


def subexpressions(system: CoxeterSystem, word: Sequence[int],
                   target: Optional[CoxeterElement] = None) -> List[Subexpression]:
    """All 2^k decorated subexpressions of ``word``, optionally only those ending at ``target``."""
    bs = BSWord(system, tuple(word))
    out = []
    for bits in product((0, 1), repeat=len(bs)):
        x = system.identity()
        decorations = []
        defect = 0
        for s, b in zip(bs.letters, bits):
            up = not x.has_right_descent(s)
            if up:
                decorations.append(Decoration.U1 if b else Decoration.U0)
                defect += 0 if b else 1
            else:
                decorations.append(Decoration.D1 if b else Decoration.D0)
                defect -= 0 if b else 1
            if b:
                x = x.right_multiply(s)
        if target is None or x == target:
            out.append(Subexpression(bs, bits, tuple(decorations), x, defect))
    return out


def end_dot(system: CoxeterSystem, s: int) -> MorphismMatrix:
    """B_s -> R, f (x) g -> fg; degree +1."""
    field = _field(system)
    return MorphismMatrix(BSWord(system, (s,)), BSWord(system, ()), {((), (0,)): field.one}, 1)


def start_dot(system: CoxeterSystem, s: int) -> MorphismMatrix:
    field = _field(system)
    alpha = field(realization_for(system).root(system.check_generator(s)))
    return MorphismMatrix(BSWord(system, ()), BSWord(system, (s,)), {((0,), ()): alpha}, 1)


def merge(system: CoxeterSystem, s: int) -> MorphismMatrix:
    """B_s B_s -> B_s, f (x) g (x) h -> f d_s(g) (x) h; degree -1."""
    field = _field(system)
    inv = field.one / field(realization_for(system).root(system.check_generator(s)))
    entries = {
        ((0,), (0, 0)): inv, ((0,), (1, 1)): -inv,
        ((1,), (0, 1)): inv, ((1,), (1, 0)): -inv,
    }
    return MorphismMatrix(BSWord(system, (s, s)), BSWord(system, (s,)), entries, -1)


def split(system: CoxeterSystem, s: int) -> MorphismMatrix:
    field = _field(system)
    entries = {((a, b), ((a + b) % 2,)): field.one for a in (0, 1) for b in (0, 1)}
    return MorphismMatrix(BSWord(system, (s,)), BSWord(system, (s, s)), entries, -1)


def _cap(system: CoxeterSystem, s: int) -> MorphismMatrix:
    # end dot after merge
    return end_dot(system, s).compose(merge(system, s))


def _right_action(system: CoxeterSystem, letters: Word, bits: Bits, f: MultiPoly) -> Dict[Bits, MultiPoly]:
    """(1 (x) g_1 (x) ... (x) g_k) f in the left basis of BS(letters), where g_i = rho_i when bit i is set."""
    real = realization_for(system)
    if not letters:
        return {(): f}
    s = letters[-1]
    h = real.rho(s) * f if bits[-1] else f
    upper = demazure(system, s, h)
    lower = h - upper * real.rho(s)
    out: Dict[Bits, MultiPoly] = {}
    for part, bit in ((lower, 0), (upper, 1)):
        if not part:
            continue
        for g, c in _right_action(system, letters[:-1], bits[:-1], part).items():
            out[g + (bit,)] = out.get(g + (bit,), real.ring.zero) + c
    return {g: c for g, c in out.items() if c}


def _left_basis_coordinates(word: BSWord) -> Dict[Bits, Dict[Bits, MultiPoly]]:
    """Standard coordinates of each left basis tensor 1 (x) g_1 (x) ... (x) g_k."""
    real = realization_for(word.system)
    module = LocalizedModule(word)
    out = {}
    for bits in module.basis:
        tensor = [real.ring.one] + [real.rho(s) if b else real.ring.one for s, b in zip(word.letters, bits)]
        out[bits] = module.standard_coordinates(tensor)
    return out


def _monomials(ngens: int, degree: int) -> List[Tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(ngens), degree):
        exps = [0] * ngens
        for g in combo:
            exps[g] += 1
        out.append(tuple(exps))
    return out


def _degree_zero_maps(source: BSWord, target: BSWord, s: int, t: int) -> Dict[Tuple[Bits, Bits], MultiPoly]:
    """The degree-0 bimodule map BS(source) -> BS(target) in left bases, unique up to a scalar.

    Unknowns are the coefficients of A[F, E], homogeneous of degree |E| - |F|, where
    the map sends the basis tensor of E to the sum over F of A[F, E] times that of F.
    The constraints say the map commutes with the right action of a_s and a_t.
    """
    system = source.system
    real = realization_for(system)
    ring = real.ring
    sources, targets = LocalizedModule(source).basis, LocalizedModule(target).basis
    unknowns = [(F, E, m) for F in targets for E in sources if sum(E) >= sum(F)
                for m in _monomials(ring.ngens, sum(E) - sum(F))]

    equations: Dict[tuple, Dict[int, int]] = {}

    def collect(key, poly, k, sign):
        for monom, c in poly.items():
            row = equations.setdefault(key + (monom,), {})
            row[k] = row.get(k, 0) + sign * int(c)

    # Linear forms fixed by s and t already commute past every tensor sign.
    for z_index, z in enumerate((real.root(s), real.root(t))):
        on_source = {E: _right_action(system, source.letters, E, z) for E in sources}
        on_target = {F: _right_action(system, target.letters, F, z) for F in targets}
        for k, (F, G, m) in enumerate(unknowns):
            x = ring.from_dict({m: 1})
            for E in sources:
                c = on_source[E].get(G)
                if c:
                    collect((z_index, F, E), x * c, k, 1)
            for H, c in on_target[F].items():
                collect((z_index, H, G), x * c, k, -1)

    rows = [{k: QQ(c) for k, c in row.items() if c} for row in equations.values()]
    rows = [row for row in rows if row]
    matrix = DomainMatrix(dict(enumerate(rows)), (len(rows), len(unknowns)), QQ)
    solutions = matrix.nullspace().to_list()
    if len(solutions) != 1:
        raise ConsistencyError(
            f"Degree-0 maps BS({source}) -> BS({target}) span dimension {len(solutions)}, expected 1"
        )
    vector = solutions[0]
    scale = math.lcm(*(int(QQ.denom(a)) for a in vector))
    out: Dict[Tuple[Bits, Bits], MultiPoly] = {}
    for (F, E, m), a in zip(unknowns, vector):
        if a:
            out[(F, E)] = out.get((F, E), ring.zero) + ring.from_dict({m: int(QQ.numer(a * scale))})
    logger.debug(f"Braid solve BS({source}) -> BS({target}): {len(rows)} equations, {len(unknowns)} unknowns")
    return out


def _localize(source: BSWord, target: BSWord,
              maps: Dict[Tuple[Bits, Bits], MultiPoly]) -> Dict[Tuple[Bits, Bits], Fraction]:
    """Localized matrix M with M P = P' A, P and P' the coordinates of the left basis tensors."""
    field = _field(source.system)
    domain = field.to_domain()
    module, target_module = LocalizedModule(source), LocalizedModule(target)
    coords, target_coords = _left_basis_coordinates(source), _left_basis_coordinates(target)
    entries = {}
    for f in target_module.basis:
        image = {E: field(sum((target_coords[F][f] * a for (F, G), a in maps.items() if G == E), field.ring.zero))
                 for E in module.basis}
        block = [e for e in module.basis if module.end(e) == target_module.end(f)]
        values = None
        for columns in combinations(module.basis, len(block)):
            square = DomainMatrix([[field(coords[E][e]) for e in block] for E in columns], (len(block),) * 2, domain)
            if square.det():
                rhs = DomainMatrix([[image[E]] for E in columns], (len(block), 1), domain)
                values = [row[0] for row in square.lu_solve(rhs).to_list()]
                break
        if values is None:
            raise ConsistencyError(f"Standard coordinates of BS({source}) are degenerate")
        for E in module.basis:
            if sum((c * field(coords[E][e]) for c, e in zip(values, block)), field.zero) != image[E]:
                raise ConsistencyError(f"Row {f} of the braid vertex leaves its standard summand")
        entries.update({(f, e): c for c, e in zip(values, block) if c})
    return entries


@lru_cache(maxsize=None)
def braid_morphism(system: CoxeterSystem, s: int, t: int) -> MorphismMatrix:
    """The degree-0 vertex BS(s t s ...) -> BS(t s t ...) with m(s, t) letters each side.

    Solved for as the one-dimensional space of degree-0 bimodule maps, then
    normalized so that the entry on the top standard summand is 1.
    """
    m = system.m(system.check_generator(s), system.check_generator(t))
    if m not in (2, 3):
        raise InvalidInputError(f"No braid vertex for s{s}, s{t} (m = {m})")
    source = BSWord(system, tuple(s if k % 2 == 0 else t for k in range(m)))
    target = BSWord(system, tuple(t if k % 2 == 0 else s for k in range(m)))
    entries = _localize(source, target, _degree_zero_maps(source, target, s, t))
    top = (1,) * m
    scalar = entries.get((top, top))
    if not scalar:
        raise ConsistencyError(f"Braid vertex for s{s}, s{t} vanishes on the top summand")
    vertex = MorphismMatrix(source, target, {key: value / scalar for key, value in entries.items()}, 0)
    vertex.check_block_structure()
    return vertex


def braid_moves(system: CoxeterSystem, word: Word) -> List[Tuple[int, Word, Word]]:
    """(position, new word, local source) for every braid move applicable to ``word``."""
    out = []
    for i in range(len(word) - 1):
        s, t = word[i], word[i + 1]
        if s == t:
            continue
        m = system.m(s, t)
        if m == 2:
            out.append((i, word[:i] + (t, s) + word[i + 2:], (s, t)))
        elif m == 3 and i + 2 < len(word) and word[i + 2] == s:
            out.append((i, word[:i] + (t, s, t) + word[i + 3:], (s, t, s)))
    return out


@lru_cache(maxsize=None)
def rex_path(system: CoxeterSystem, source: Word, target: Word) -> Tuple[Step, ...]:
    """Braid-move steps turning one reduced word into another, found breadth first."""
    if source == target:
        return ()
    if system.from_word(source) != system.from_word(target):
        raise InvalidInputError(f"{source} and {target} are not words for the same element")
    previous: Dict[Word, Tuple[Word, int, Word]] = {source: (source, -1, ())}
    queue = deque([source])
    while queue:
        word = queue.popleft()
        if word == target:
            break
        for position, nxt, local in braid_moves(system, word):
            if nxt not in previous:
                previous[nxt] = (word, position, local)
                queue.append(nxt)
    if target not in previous:
        raise InvalidInputError(f"No braid path from {source} to {target}; is the word reduced?")
    steps = []
    word = target
    while word != source:
        before, position, local = previous[word]
        vertex = braid_morphism(system, local[0], local[1])
        steps.append(Step(position, vertex, before, word))
        word = before
    steps.reverse()
    return tuple(steps)


@lru_cache(maxsize=None)
def leaf_steps(system: CoxeterSystem, word: Word, bits: Bits) -> Tuple[Tuple[Step, ...], Word]:
    """The steps of the light leaf of ``bits`` and the reduced word it lands on.

    Each stage keeps a reduced word for the running product followed by the
    unprocessed letters. Down steps first move the reduced word to one ending
    in the current letter, then merge. The final word is the canonical word.
    """
    steps: List[Step] = []
    current: Word = ()
    x = system.identity()
    for k, (s, b) in enumerate(zip(word, bits)):
        rest = word[k + 1:]
        if not x.has_right_descent(s):
            if b:
                current = current + (s,)
            else:
                full = current + (s,) + rest
                steps.append(Step(len(current), end_dot(system, s), full, current + rest))
        else:
            y = x.right_multiply(s)
            moved = y.word + (s,)
            for step in rex_path(system, current, moved):
                steps.append(Step(step.position, step.local, step.before + (s,) + rest, step.after + (s,) + rest))
            full = moved + (s,) + rest
            if b:
                steps.append(Step(len(y.word), _cap(system, s), full, y.word + rest))
                current = y.word
            else:
                steps.append(Step(len(y.word), merge(system, s), full, moved + rest))
                current = moved
        if b:
            x = x.right_multiply(s)
    for step in rex_path(system, current, x.word):
        steps.append(step)
    return tuple(steps), x.word


def pull_back(system: CoxeterSystem, row: Row, step: Step) -> Row:
    """Row vector over subexpressions of ``step.after`` to one over ``step.before``."""
    local = step.local
    width = len(local.target)
    by_target: Dict[Bits, List[Tuple[Bits, Fraction]]] = {}
    for (f, e), c in local.entries.items():
        by_target.setdefault(f, []).append((e, c))
    out: Row = {}
    for bits, c in row.items():
        prefix = bits[:step.position]
        middle = bits[step.position:step.position + width]
        suffix = bits[step.position + width:]
        twist = end_of(system, step.after[:step.position], prefix)
        for source_bits, m in by_target.get(middle, ()):
            key = prefix + source_bits + suffix
            value = c * (m if twist.is_identity else act_fraction(twist, m))
            out[key] = out[key] + value if key in out else value
    return {k: v for k, v in out.items() if v}


def pull_back_all(system: CoxeterSystem, row: Row, steps: Sequence[Step]) -> Row:
    for step in reversed(steps):
        row = pull_back(system, row, step)
    return row


def _check_subexpression(system: CoxeterSystem, word: Sequence[int], bits: Sequence[int]) -> Tuple[Word, Bits]:
    word, bits = tuple(system.check_generator(s) for s in word), tuple(int(b) for b in bits)
    if len(word) != len(bits) or any(b not in (0, 1) for b in bits):
        raise InvalidInputError(f"{bits} is not a 0/1 subexpression of {word}")
    return word, bits


def top_row(system: CoxeterSystem, word: Sequence[int], bits: Sequence[int]) -> Row:
    """Row of the light leaf at the all-ones subexpression of its target word."""
    word, bits = _check_subexpression(system, word, bits)
    steps, target = leaf_steps(system, word, bits)
    return pull_back_all(system, {(1,) * len(target): _field(system).one}, steps)


def light_leaf(system: CoxeterSystem, word: Sequence[int], bits: Sequence[int]) -> MorphismMatrix:
    """Full localized matrix of the light leaf from BS(word) to BS(rex(x))."""
    word, bits = _check_subexpression(system, word, bits)
    steps, target = leaf_steps(system, word, bits)
    field = _field(system)
    entries = {}
    for f in LocalizedModule(BSWord(system, target)).basis:
        for e, c in pull_back_all(system, {f: field.one}, steps).items():
            entries[(f, e)] = c
    degree = defect_of(system, word, bits)
    return MorphismMatrix(BSWord(system, word), BSWord(system, target), entries, degree)


def defect_of(system: CoxeterSystem, word: Word, bits: Bits) -> int:
    x = system.identity()
    defect = 0
    for s, b in zip(word, bits):
        if not b:
            defect += -1 if x.has_right_descent(s) else 1
        else:
            x = x.right_multiply(s)
    return defect


def rex_move(system: CoxeterSystem, source: Sequence[int], target: Sequence[int]) -> MorphismMatrix:
    """Composite of braid vertices along a braid-move path."""
    source, target = tuple(source), tuple(target)
    steps = rex_path(system, source, target)
    field = _field(system)
    entries = {}
    for f in LocalizedModule(BSWord(system, target)).basis:
        for e, c in pull_back_all(system, {f: field.one}, steps).items():
            entries[(f, e)] = c
    return MorphismMatrix(BSWord(system, source), BSWord(system, target), entries, 0)


def kernel_check(system: CoxeterSystem, word: Sequence[int]) -> List[Tuple[Bits, Bits]]:
    """Light leaves with a U0 on a reduced word that fail to vanish on the top summand.

    Returns the offending (leaf, source entry) pairs; an empty list means the check passed.
    """
    bs = BSWord(system, tuple(word))
    if not bs.is_reduced:
        raise InvalidInputError(f"{bs} is not reduced")
    top = (1,) * len(bs)
    failures = []
    for sub in subexpressions(system, bs.letters):
        if Decoration.U0 not in sub.decorations:
            continue
        column = light_leaf(system, bs.letters, sub.bits).column(top)
        if column:
            failures.append((sub.bits, top))
    logger.debug(f"Kernel check on {bs}: {len(failures)} failures")
    return failures
