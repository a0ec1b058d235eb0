import threading
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger
from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from coxeter.models import CoxeterElement, CoxeterSystem, Side
from coxeter.tools import coset_minimal, enumerate_up_to_length
from exceptions import ConsistencyError, IntegralityError, InvalidInputError
from hecke.models import HeckeElement, LaurentPoly
from hecke.tools import bar, bs_character
from polyring.models import Fraction, MultiPoly, realization_for
from polyring.tools import act, graded_degree
from soergel.leaves import (
    Row, Step, braid_morphism, kernel_check, leaf_steps, light_leaf, pull_back_all, rex_move,
    subexpressions, top_row,
)
from soergel.models import BSWord, Bits, Decoration, GramForm, LocalizedModule, PCanonicalEntry, Subexpression

__all__ = [
    "braid_morphism", "constant_block_multiplicity", "coset_transport", "double_leaves_count",
    "graded_gram_multiplicity", "intersection_form", "kernel_check", "light_leaf", "local_elimination",
    "p_canonical", "p_canonical_table", "pair_leaves", "rex_move", "subexpressions", "top_row",
    "unit_pivot_certificate",
]

_pcanonical_cache: Dict[Tuple[CoxeterElement, Optional[int]], PCanonicalEntry] = {}
_cache_lock = threading.RLock()


@lru_cache(maxsize=None)
def _euler(system: CoxeterSystem, word: Tuple[int, ...], bits: Bits) -> MultiPoly:
    return LocalizedModule(BSWord(system, word)).euler(bits)


def _as_polynomial(q: Fraction, what: str) -> MultiPoly:
    if q.denom != 1:
        raise IntegralityError(f"{what} has denominator {q.denom}")
    return q.numer


def _check_degree(value: MultiPoly, expected: int, what: str) -> None:
    if not value:
        return
    degrees = {sum(m) for m in value.itermonoms()}
    if len(degrees) != 1 or graded_degree(value) != expected:
        raise ConsistencyError(f"{what} = {value} is not homogeneous of degree {expected}")


def _pair_rows(system: CoxeterSystem, word: Tuple[int, ...], target: Tuple[int, ...],
               row_f: Row, row_e: Row) -> Fraction:
    top = (1,) * len(target)
    total = realization_for(system).field.zero
    for g, c in row_f.items():
        other = row_e.get(g)
        if other is not None:
            total += c * other * _euler(system, word, g)
    return total / _euler(system, target, top)


def pair_leaves(system: CoxeterSystem, word: Sequence[int], f_bits: Sequence[int],
                e_bits: Sequence[int]) -> MultiPoly:
    """Scalar by which the double leaf of (f, e) acts on the top summand of its target.

    Args:
        system: The Coxeter system
        word: Letters of the Bott-Samelson object
        f_bits: Subexpression of the upper leaf
        e_bits: Subexpression of the lower leaf, ending at the same element

    Returns:
        A polynomial of degree defect(f) + defect(e)
    """
    word = tuple(word)
    f = [s for s in subexpressions(system, word) if s.bits == tuple(f_bits)][0]
    e = [s for s in subexpressions(system, word) if s.bits == tuple(e_bits)][0]
    if f.target != e.target:
        raise InvalidInputError(f"Leaves {f} and {e} end at different elements")
    target = f.target.word
    value = _as_polynomial(
        _pair_rows(system, word, target, top_row(system, word, f.bits), top_row(system, word, e.bits)),
        f"Pairing of {f} and {e}",
    )
    _check_degree(value, f.defect + e.defect, f"Pairing of {f} and {e}")
    return value


def intersection_form(system: CoxeterSystem, x: CoxeterElement, word: Sequence[int],
                      local: bool = False) -> GramForm:
    """Light-leaf Gram matrix of x in BS(word).

    With ``local`` only the entries of total degree zero are computed; the rest
    are left at zero since they cannot contribute to multiplicities.
    """
    word = tuple(word)
    ring = realization_for(system).ring
    leaves = sorted(subexpressions(system, word, x), key=lambda leaf: (leaf.defect, leaf.bits))
    defects = {leaf.defect for leaf in leaves}
    needed = [leaf for leaf in leaves if not local or -leaf.defect in defects]
    rows = {leaf.bits: top_row(system, word, leaf.bits) for leaf in needed}
    target = x.word
    size = len(leaves)
    matrix = [[ring.zero] * size for _ in range(size)]
    for i, f in enumerate(leaves):
        for j in range(i, size):
            e = leaves[j]
            if local and f.defect + e.defect != 0:
                continue
            if f.bits not in rows or e.bits not in rows:
                continue
            what = f"Gram entry ({f}, {e}) of {x} in {BSWord(system, word)}"
            value = _as_polynomial(_pair_rows(system, word, target, rows[f.bits], rows[e.bits]), what)
            _check_degree(value, f.defect + e.defect, what)
            matrix[i][j] = matrix[j][i] = value
    logger.debug(f"Gram form of {x} in {BSWord(system, word)}: {size} leaves")
    return GramForm(x, BSWord(system, word), leaves, matrix)


def _domain(p: Optional[int]):
    if p is None:
        return QQ
    if not isprime(p):
        raise InvalidInputError(f"{p} is not prime")
    return GF(p)


def _coefficient_ring(form: GramForm, p: Optional[int]):
    real = realization_for(form.element.system)
    if p is None:
        return real.rational_ring()
    _domain(p)
    return real.mod_p_ring(p)


def _truncate(f: MultiPoly, order: int) -> MultiPoly:
    return f.ring.from_dict({m: c for m, c in f.items() if 2 * sum(m) <= order})


def _series_inverse(u: MultiPoly, order: int) -> MultiPoly:
    """Inverse of a power series with unit constant term, up to degree ``order``."""
    local = u.ring
    scalar = local.domain.revert(u[local.zero_monom])
    tail = u.mul_ground(scalar) - local.one
    out = power = local.one
    for _ in range(order // 2):
        power = _truncate(-power * tail, order)
        if not power:
            break
        out += power
    return out.mul_ground(scalar)


def local_elimination(form: GramForm, p: Optional[int] = None) -> LaurentPoly:
    """Graded elimination of the intersection form over truncated power series.

    Pivots are entries with defect sum 0 whose constant term is a unit mod p (any
    nonzero rational when p is None); each contributes v^(defect of its row).
    Series are cut off above twice the largest |defect|.
    """
    local = _coefficient_ring(form, p)
    zero = local.zero_monom
    order = 2 * max((abs(d) for d in form.defects), default=0)
    defects = form.defects
    rows = {i: [_truncate(a.set_ring(local), order) for a in row] for i, row in enumerate(form.matrix)}
    columns = list(range(form.size))
    out: Dict[int, int] = {}
    while True:
        pivot = next(((i, j) for i in sorted(rows) for j in columns
                      if defects[i] + defects[j] == 0 and rows[i][j].get(zero)), None)
        if pivot is None:
            break
        i, j = pivot
        inverse = _series_inverse(rows[i][j], order)
        pivot_row = rows.pop(i)
        columns.remove(j)
        for r in list(rows):
            row = rows[r]
            if not row[j]:
                continue
            factor = _truncate(row[j] * inverse, order)
            rows[r] = [a - _truncate(factor * pivot_row[c], order) if c in columns else a
                       for c, a in enumerate(row)]
        out[defects[i]] = out.get(defects[i], 0) + 1
        logger.debug(f"Pivot ({i}, {j}) of {form.element} in defect {defects[i]}")
    return LaurentPoly(out)


def constant_block_multiplicity(form: GramForm, p: Optional[int] = None) -> LaurentPoly:
    """In degree d, the rank over F_p (or Q) of the constant pairing of defect d with defect -d leaves.

    On a homogeneous form this agrees with the local elimination.
    """
    domain = _domain(p)
    out: Dict[int, int] = {}
    for d in sorted(set(form.defects)):
        block = form.constant_block(d)
        if not block or not block[0]:
            continue
        shape = (len(block), len(block[0]))
        matrix = DomainMatrix([[domain.convert(a) for a in row] for row in block], shape, domain)
        rank = matrix.rank()
        if rank:
            out[d] = rank
    return LaurentPoly(out)


def graded_gram_multiplicity(form: GramForm, p: Optional[int] = None) -> LaurentPoly:
    """Graded multiplicity of B_x in BS(w) from the local intersection form.

    Runs the local elimination and checks it against the constant block ranks.
    """
    result = local_elimination(form, p)
    expected = constant_block_multiplicity(form, p)
    if result != expected:
        raise ConsistencyError(f"Elimination gives {result} for {form.element}, block ranks give {expected}")
    return result


def unit_pivot_certificate(form: GramForm) -> bool:
    """True when every degree-zero block eliminates over Z using only pivots 1 and -1.

    Such a form has the same multiplicities in every characteristic.
    """
    for d in sorted(set(form.defects)):
        block = [list(row) for row in form.constant_block(d)]
        while block and block[0]:
            pivot = next(((i, j) for i, row in enumerate(block) for j, a in enumerate(row) if a in (1, -1)), None)
            if pivot is None:
                break
            i, j = pivot
            u = block[i][j]
            for r, row in enumerate(block):
                if r != i and row[j]:
                    factor = row[j] * u
                    block[r] = [a - factor * b for a, b in zip(row, block[i])]
            block = [row[:j] + row[j + 1:] for r, row in enumerate(block) if r != i]
        if any(a for row in block for a in row):
            logger.debug(f"No unit pivot in defect {d} block of {form.element}")
            return False
    return True


def double_leaves_count(system: CoxeterSystem, u: Sequence[int], w: Sequence[int]) -> LaurentPoly:
    """Sum over pairs of light leaves with a common target of v^(defect sum)."""
    def by_target(word):
        out: Dict[CoxeterElement, LaurentPoly] = {}
        for sub in subexpressions(system, word):
            out[sub.target] = out.get(sub.target, LaurentPoly()) + LaurentPoly.v(sub.defect)
        return out

    lower, upper = by_target(w), by_target(u)
    total = LaurentPoly()
    for x, c in lower.items():
        if x in upper:
            total = total + c * upper[x]
    return total


def p_canonical(system: CoxeterSystem, w: CoxeterElement, p: Optional[int] = None) -> PCanonicalEntry:
    """The p-canonical basis element of w; p None gives the Kazhdan-Lusztig element.

    Expands the character of BS(rex(w)) and strips off the lower summands, whose
    multiplicities come from the local intersection forms.
    """
    key = (w, p)
    with _cache_lock:
        cached = _pcanonical_cache.get(key)
    if cached is not None:
        return cached
    _domain(p)
    word = w.word
    character = bs_character(system, word)
    result = character
    provenance: Dict[CoxeterElement, LaurentPoly] = {}
    for x in character.support():
        if x == w:
            continue
        m = graded_gram_multiplicity(intersection_form(system, x, word, local=True), p)
        if m.is_zero:
            continue
        provenance[x] = m
        result = result - p_canonical(system, x, p).expansion.scale(m)
    top = graded_gram_multiplicity(intersection_form(system, w, word), p)
    if top != 1 or result.coefficient(w) != 1:
        raise ConsistencyError(f"Top multiplicity of {w} is {top}, coefficient {result.coefficient(w)}")
    for x, c in result.items():
        if not c.is_nonnegative():
            raise ConsistencyError(f"Negative coefficient {c} at {x} in the p-canonical element of {w} ({p})")
    if bar(result) != result:
        raise ConsistencyError(f"p-canonical element of {w} ({p}) is not bar invariant")
    entry = PCanonicalEntry(w, p, result, provenance)
    logger.debug(f"p-canonical {w} mode {entry.mode}: {len(result.support())} terms, {len(provenance)} corrections")
    with _cache_lock:
        _pcanonical_cache[key] = entry
    return entry


def p_canonical_table(system: CoxeterSystem, p: Optional[int], max_length: int) -> List[PCanonicalEntry]:
    return [p_canonical(system, w, p) for w in enumerate_up_to_length(system, max_length)]


def clear_cache() -> None:
    with _cache_lock:
        _pcanonical_cache.clear()


def _shifted(steps: Sequence[Step], prefix: Tuple[int, ...], side: Side) -> List[Step]:
    if side == Side.RIGHT:
        return [Step(s.position + len(prefix), s.local, prefix + s.before, prefix + s.after) for s in steps]
    return [Step(s.position, s.local, s.before + prefix, s.after + prefix) for s in steps]


def coset_transport(system: CoxeterSystem, x_min: CoxeterElement, I: Sequence[int], word: Sequence[int],
                    u: CoxeterElement, side: Side = Side.RIGHT) -> Tuple[GramForm, GramForm]:
    """Gram form of u in BS(word) and of its transport along a minimal coset representative.

    With ``side`` RIGHT the coset is x_min W_I and leaves become id(rex(x_min)) (x) LL;
    with LEFT it is W_I x_min and leaves become LL (x) id(rex(x_min)). Entries of the
    transported form are those of the original twisted by x_min, resp. unchanged.

    Returns:
        (original form, transported form)
    """
    side = Side(side)
    if side == Side.DOUBLE:
        raise InvalidInputError("Transport is defined for one-sided cosets")
    members = set(I)
    word = tuple(word)
    if not set(word) <= members or not set(u.word) <= members:
        raise InvalidInputError(f"{word} and {u} must lie in the parabolic {sorted(members)}")
    if coset_minimal(x_min, members, side).representative != x_min:
        raise InvalidInputError(f"{x_min} is not minimal in its coset")
    original = intersection_form(system, u, word)
    px = x_min.word
    ones = (1,) * len(px)
    if side == Side.RIGHT:
        full_word, element = px + word, x_min * u
        target = px + u.word
    else:
        full_word, element = word + px, u * x_min
        target = u.word + px
    field = realization_for(system).field
    rows = {}
    leaves: List[Subexpression] = []
    bs = BSWord(system, full_word)
    for leaf in original.leaves:
        steps, _ = leaf_steps(system, word, leaf.bits)
        bits = ones + leaf.bits if side == Side.RIGHT else leaf.bits + ones
        extra = (Decoration.U1,) * len(px)
        decorations = extra + leaf.decorations if side == Side.RIGHT else leaf.decorations + extra
        leaves.append(Subexpression(bs, bits, decorations, element, leaf.defect))
        rows[bits] = pull_back_all(system, {(1,) * len(target): field.one}, _shifted(steps, px, side))
    ring = realization_for(system).ring
    size = len(leaves)
    matrix = [[ring.zero] * size for _ in range(size)]
    for i, f in enumerate(leaves):
        for j, e in enumerate(leaves):
            value = _pair_rows(system, full_word, target, rows[f.bits], rows[e.bits])
            matrix[i][j] = _as_polynomial(value, f"Transported Gram entry ({f}, {e})")
    return original, GramForm(element, bs, leaves, matrix)


def twisted_form(form: GramForm, x: CoxeterElement) -> List[List[MultiPoly]]:
    return [[act(x, value) for value in row] for row in form.matrix]
