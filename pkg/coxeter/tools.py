from collections import deque
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from loguru import logger

from coxeter.models import Coset, CoxeterElement, CoxeterSystem, ParabolicSubset, Side
from exceptions import InvalidInputError


def _as_parabolic(system: CoxeterSystem, members: Iterable[int]) -> ParabolicSubset:
    if isinstance(members, ParabolicSubset):
        return members
    return system.parabolic(members)


def from_word(system: CoxeterSystem, word: Iterable[int]) -> CoxeterElement:
    return system.from_word(word)


def inverse(w: CoxeterElement) -> CoxeterElement:
    return w.inverse()


def multiply(a: CoxeterElement, b: CoxeterElement) -> CoxeterElement:
    """Product ab in canonical form."""
    return a * b


def descents(w: CoxeterElement, side: Side = Side.RIGHT) -> FrozenSet[int]:
    return w.left_descents if Side(side) == Side.LEFT else w.right_descents


def act_on_weight(w: CoxeterElement, weight: Sequence[int], e: int) -> Tuple[int, ...]:
    """Apply w to an integer vector, letters of the word right to left.

    s_i swaps entries i and i+1; s_0 sends (l_1, ..., l_n) to
    (l_n - e, l_2, ..., l_{n-1}, l_1 + e).
    """
    n = w.system.rank
    if len(weight) != n:
        raise InvalidInputError(f"Weight {tuple(weight)} does not have {n} entries")
    x = list(weight)
    for s in reversed(w.word):
        if s == 0:
            x[0], x[n - 1] = x[n - 1] - e, x[0] + e
        else:
            x[s - 1], x[s] = x[s], x[s - 1]
    return tuple(x)


@lru_cache(maxsize=None)
def bruhat_leq(a: CoxeterElement, b: CoxeterElement) -> bool:
    """Standard Bruhat order, decided by the lifting property."""
    if a.system != b.system:
        raise InvalidInputError("Cannot compare elements of different Coxeter systems")
    if a.length > b.length:
        return False
    if a.length == b.length:
        return a == b
    if a.is_identity:
        return True
    s = min(b.right_descents)
    if a.has_right_descent(s):
        return bruhat_leq(a.right_multiply(s), b.right_multiply(s))
    return bruhat_leq(a, b.right_multiply(s))


def bruhat_leq_inverse(a: CoxeterElement, b: CoxeterElement) -> bool:
    """The reversed order, in which the identity is the maximum."""
    return bruhat_leq(b, a)


def coset_minimal(w: CoxeterElement, I: Iterable[int], side: Side = Side.LEFT,
                  J: Optional[Iterable[int]] = None) -> Coset:
    """Minimal-length representative of W_I w, w W_I, or W_I w W_J.

    Args:
        w: Any element of the coset
        I: Parabolic acting on the left (left and double cosets) or the right (right cosets)
        side: Which coset space
        J: Right parabolic, only for double cosets
    """
    system = w.system
    side = Side(side)
    left = _as_parabolic(system, I).require_finitary()
    right = _as_parabolic(system, J if J is not None else ()).require_finitary()
    if side == Side.RIGHT:
        left, right = system.parabolic(()), left
    x = w
    changed = True
    while changed:
        changed = False
        for s in left:
            if x.has_left_descent(s):
                x, changed = x.left_multiply(s), True
        for s in right:
            if x.has_right_descent(s):
                x, changed = x.right_multiply(s), True
    if side == Side.LEFT:
        parabolics: Tuple[ParabolicSubset, ...] = (left,)
    elif side == Side.RIGHT:
        parabolics = (right,)
    else:
        parabolics = (left, right)
    return Coset(side, parabolics, x)


def double_coset_minimal(w: CoxeterElement, I: Iterable[int], J: Iterable[int]) -> CoxeterElement:
    return coset_minimal(w, I, Side.DOUBLE, J).representative


def coset_members(coset: Coset) -> List[CoxeterElement]:
    rep = coset.representative
    if coset.side == Side.LEFT:
        return sorted(u * rep for u in parabolic_elements(coset.parabolics[0]))
    if coset.side == Side.RIGHT:
        return sorted(rep * u for u in parabolic_elements(coset.parabolics[0]))
    left = parabolic_elements(coset.parabolics[0])
    right = parabolic_elements(coset.parabolics[1])
    return sorted({u * rep * v for u in left for v in right})


def longest_element(system: CoxeterSystem, I: Iterable[int]) -> CoxeterElement:
    parabolic = _as_parabolic(system, I).require_finitary()
    w = system.identity()
    grown = True
    while grown:
        grown = False
        for s in parabolic:
            if not w.has_right_descent(s):
                w, grown = w.right_multiply(s), True
    return w


def relative_longest(system: CoxeterSystem, I: Iterable[int], J: Iterable[int]) -> CoxeterElement:
    """w_I^J = w_I w_J^{-1}, so that w_I^J w_J = w_I with lengths adding."""
    big = _as_parabolic(system, I)
    small = _as_parabolic(system, J)
    if not small <= big:
        raise InvalidInputError(f"{small} is not contained in {big}")
    return longest_element(system, big) * longest_element(system, small).inverse()


def parabolic_elements(I: ParabolicSubset) -> List[CoxeterElement]:
    I.require_finitary()
    seen = {I.system.identity()}
    frontier = [I.system.identity()]
    while frontier:
        nxt = []
        for w in frontier:
            for s in I:
                ws = w.right_multiply(s)
                if ws not in seen:
                    seen.add(ws)
                    nxt.append(ws)
        frontier = nxt
    return sorted(seen)


def enumerate_up_to_length(system: CoxeterSystem, max_length: int) -> Iterator[CoxeterElement]:
    """Every element of length at most max_length, by length then word."""
    level = [system.identity()]
    for length in range(max_length + 1):
        yield from sorted(level)
        if length == max_length:
            break
        nxt: Set[CoxeterElement] = set()
        for w in level:
            for s in system.generators:
                if not w.has_right_descent(s):
                    nxt.add(w.right_multiply(s))
        logger.debug(f"{system}: {len(nxt)} elements of length {length + 1}")
        level = list(nxt)


@lru_cache(maxsize=None)
def reduced_words(w: CoxeterElement) -> Tuple[Tuple[int, ...], ...]:
    if w.is_identity:
        return ((),)
    words = set()
    for s in w.right_descents:
        for word in reduced_words(w.right_multiply(s)):
            words.add(word + (s,))
    return tuple(sorted(words))


def reflections_up_to(system: CoxeterSystem, max_length: int) -> List[CoxeterElement]:
    """Reflections w s w^{-1} with l(w) <= max_length."""
    found = set()
    for w in enumerate_up_to_length(system, max_length):
        for s in system.generators:
            found.add(w.right_multiply(s) * w.inverse())
    return sorted(found)


def weight_orbit_representative(system: CoxeterSystem, x: Sequence[int], e: int) -> Tuple[int, ...]:
    return walk_to_fundamental(system, x, e)[0]


def walk_to_fundamental(system: CoxeterSystem, x: Sequence[int], e: int
                        ) -> Tuple[Tuple[int, ...], CoxeterElement, ParabolicSubset]:
    """Move x into the fundamental domain by simple reflections.

    Returns:
        (x_I, a, I) with x = a . x_I, I the stabilizer of x_I and a minimal in a W_I.
    """
    n = system.rank
    if len(x) != n:
        raise InvalidInputError(f"Weight {tuple(x)} does not have {n} entries")
    y = list(x)
    letters: List[int] = []
    while True:
        i = next((i for i in range(1, n) if y[i - 1] > y[i]), None)
        if i is not None:
            y[i - 1], y[i] = y[i], y[i - 1]
            letters.append(i)
            continue
        if system.is_affine and y[-1] - y[0] > e:
            y[0], y[-1] = y[-1] - e, y[0] + e
            letters.append(0)
            continue
        break
    rep = tuple(y)
    stabilizer = stabilizer_of(system, rep, e)
    a = coset_minimal(system.from_word(letters), stabilizer, Side.RIGHT).representative
    return rep, a, stabilizer


def stabilizer_of(system: CoxeterSystem, x: Sequence[int], e: int) -> ParabolicSubset:
    """Simple reflections fixing a fundamental-domain vector."""
    n = system.rank
    members = {i for i in range(1, n) if x[i - 1] == x[i]}
    if system.is_affine and x[-1] == x[0] + e:
        members.add(0)
    return system.parabolic(members)
