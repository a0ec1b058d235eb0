"""Crystal and dual-crystal operators on multipartitions, and what is built on them.

Operators return ``None`` for the formal zero.
"""
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from loguru import logger

from coxeter.models import CoxeterSystem, Kind
from exceptions import InvalidInputError
from fock.models import (
    BoxOrder, Companions, CrystalOp, MarkedPair, Multicharge, Multipartition, OrderKind, Signature,
    SignatureMode, Witness, Word,
)
from fock.partitions import (
    addable_of_residue, enumerate_multipartitions, in_family, order_leq, order_less, removable_of_residue,
)

# ============= SIGNATURES =============


def reduce_signs(signs: Sequence[str], mode: SignatureMode) -> Tuple[Tuple[int, ...], Tuple[Tuple[int, int], ...]]:
    """Cancel adjacent -+ (normal) or +- (dual) pairs until none are left.

    Returns:
        (surviving indices, cancelled (minus, plus) index pairs).
    """
    opener = "-" if SignatureMode(mode) == SignatureMode.NORMAL else "+"
    stack: List[int] = []
    surviving: List[int] = []
    pairs: List[Tuple[int, int]] = []
    for k, sign in enumerate(signs):
        if sign not in "+-":
            raise InvalidInputError(f"Unexpected signature entry {sign!r}")
        if sign == opener:
            stack.append(k)
        elif stack:
            j = stack.pop()
            pairs.append((j, k) if opener == "-" else (k, j))
        else:
            surviving.append(k)
    return tuple(sorted(surviving + stack)), tuple(sorted(pairs))


def _order_key(order: BoxOrder, charge: Multicharge):
    if BoxOrder(order) == BoxOrder.SCHUR:
        return lambda b: (b.comp, charge.content(b))
    return lambda b: (charge.content(b), -b.comp)


def signature(lam: Multipartition, i: int, charge: Multicharge, order: BoxOrder,
              mode: SignatureMode = SignatureMode.NORMAL) -> Signature:
    """The i-signature of ``lam``: addable (+) and removable (-) i-boxes in decreasing order."""
    i %= charge.e
    signed = [("+", b) for b in addable_of_residue(lam, i, charge)]
    signed += [("-", b) for b in removable_of_residue(lam, i, charge)]
    key = _order_key(order, charge)
    signed.sort(key=lambda sb: key(sb[1]))
    surviving, pairs = reduce_signs([s for s, _ in signed], mode)
    return Signature(i, SignatureMode(mode), tuple(signed), surviving, pairs)


# ============= CRYSTAL OPERATORS =============


def crystal(op: CrystalOp, lam: Multipartition, i: int, charge: Multicharge,
            order: BoxOrder) -> Optional[Multipartition]:
    """Apply one of e~_i, f~_i, e~*_i, f~*_i; None stands for zero.

    f~ adds the rightmost surviving +, e~ removes the leftmost surviving -.
    The dual operators read the dual reduction from the other end.
    """
    op = CrystalOp(op)
    sig = signature(lam, i, charge, order, op.mode)
    candidates = sig.surviving_boxes("+" if op.adds else "-")
    if not candidates:
        return None
    take_last = op in (CrystalOp.F, CrystalOp.E_DUAL)
    box = candidates[-1] if take_last else candidates[0]
    return lam.add(box) if op.adds else lam.remove(box)


def epsilon(lam: Multipartition, i: int, charge: Multicharge, order: BoxOrder,
            mode: SignatureMode = SignatureMode.NORMAL) -> int:
    return signature(lam, i, charge, order, mode).reduced.count("-")


def phi(lam: Multipartition, i: int, charge: Multicharge, order: BoxOrder,
        mode: SignatureMode = SignatureMode.NORMAL) -> int:
    return signature(lam, i, charge, order, mode).reduced.count("+")


def is_singular(lam: Multipartition, charge: Multicharge, order: BoxOrder) -> bool:
    return all(crystal(CrystalOp.E, lam, i, charge, order) is None for i in range(charge.e))


def is_cosingular(lam: Multipartition, charge: Multicharge, order: BoxOrder) -> bool:
    return all(crystal(CrystalOp.E_DUAL, lam, i, charge, order) is None for i in range(charge.e))


def to_highest_weight(lam: Multipartition, charge: Multicharge, order: BoxOrder) -> Tuple[Multipartition, Word]:
    """Raise with e~_i until nothing moves; returns the singular element and the residues used."""
    raised: List[int] = []
    while True:
        for i in range(charge.e):
            up = crystal(CrystalOp.E, lam, i, charge, order)
            if up is not None:
                lam = up
                raised.append(i)
                break
        else:
            return lam, tuple(raised)


@lru_cache(maxsize=None)
def crystal_closure(charge: Multicharge, order: BoxOrder, max_size: int) -> FrozenSet[Multipartition]:
    """Everything reached from the empty multipartition by f~_i, up to ``max_size`` boxes."""
    layer = {Multipartition.empty(charge.level)}
    found = set(layer)
    for _ in range(max_size):
        layer = {mu for lam in layer for i in range(charge.e)
                 if (mu := crystal(CrystalOp.F, lam, i, charge, order)) is not None}
        found |= layer
    return frozenset(found)


# ============= WEYL GROUP ACTION =============


def sigma(i: int, lam: Multipartition, charge: Multicharge, order: BoxOrder,
          mode: SignatureMode = SignatureMode.NORMAL) -> Multipartition:
    """f~_i^d lam with d maximal; needs e~_i lam = 0 (dual operators when ``mode`` is dual)."""
    dual = SignatureMode(mode) == SignatureMode.DUAL
    raise_op, lower_op = (CrystalOp.E_DUAL, CrystalOp.F_DUAL) if dual else (CrystalOp.E, CrystalOp.F)
    if crystal(raise_op, lam, i, charge, order) is not None:
        raise InvalidInputError(f"sigma_{i % charge.e} needs {raise_op.value}_{i % charge.e} to vanish on {lam}")
    while True:
        nxt = crystal(lower_op, lam, i, charge, order)
        if nxt is None:
            return lam
        lam = nxt


def sigma_dual(i: int, mu: Multipartition, charge: Multicharge, order: BoxOrder) -> Multipartition:
    return sigma(i, mu, charge, order, SignatureMode.DUAL)


def apply_word(word: Sequence[int], lam: Multipartition, charge: Multicharge, order: BoxOrder,
               mode: SignatureMode = SignatureMode.NORMAL) -> Multipartition:
    """w.lam for w = sigma_{i_k} ... sigma_{i_1}; the rightmost letter acts first."""
    for i in reversed(tuple(word)):
        lam = sigma(i, lam, charge, order, mode)
    return lam


def apply_word_dual(word: Sequence[int], mu: Multipartition, charge: Multicharge, order: BoxOrder) -> Multipartition:
    return apply_word(word, mu, charge, order, SignatureMode.DUAL)


def c_word(a: int, m: int, e: int) -> Word:
    """C_{a,m} = sigma_{a+1-m} ... sigma_{a-1} sigma_a as residues mod e."""
    return tuple((a + 1 - m + k) % e for k in range(m))


# ============= MARKED PAIRS AND COMPANIONS =============


def marked_pairs(lam: Multipartition, i: int, charge: Multicharge, order: BoxOrder) -> List[MarkedPair]:
    sig = signature(lam, i, charge, order, SignatureMode.NORMAL)
    return [MarkedPair(sig.residue, sig.boxes[m][1], sig.boxes[p][1]) for m, p in sig.pairs]


def lambda_bracket(lam: Multipartition, pair: MarkedPair) -> Multipartition:
    """Move the box of the - in ``pair`` to the position of its +."""
    return lam.remove(pair.minus).add(pair.plus)


def _check_reduced(word: Sequence[int], e: int) -> Word:
    word = tuple(int(i) % e for i in word)
    if CoxeterSystem(Kind.AFFINE, e).from_word(word).length != len(word):
        raise InvalidInputError(f"{word} is not a reduced expression in the affine group on {e} strands")
    return word


def base_companions(lam: Multipartition, charge: Multicharge, order: BoxOrder) -> Set[Multipartition]:
    out: Set[Multipartition] = set()
    for mu in enumerate_multipartitions(lam.size, lam.level):
        if not order_less(mu, lam, charge, OrderKind.BOXWISE) or not is_singular(mu, charge, order):
            continue
        if any(in_family(mu, lam, i, charge) for i in range(charge.e)):
            continue
        out.add(mu)
    for i in range(charge.e):
        out.update(lambda_bracket(lam, p) for p in marked_pairs(lam, i, charge, order))
    return out


def companion_step(members: Set[Multipartition], xi: Multipartition, i: int, charge: Multicharge,
                   order: BoxOrder) -> Tuple[Multipartition, Set[Multipartition]]:
    """Companions of sigma_i xi from the companions of xi."""
    image = sigma(i, xi, charge, order)
    out: Set[Multipartition] = set()
    for bar in members:
        if crystal(CrystalOp.E, bar, i, charge, order) is None and not in_family(bar, xi, i, charge):
            out.add(sigma(i, bar, charge, order))
    out.update(lambda_bracket(image, p) for p in marked_pairs(image, i, charge, order))
    return image, out


def companions(lam: Multipartition, word: Sequence[int], charge: Multicharge, order: BoxOrder) -> Companions:
    """Companions of w.lam built along the given reduced expression of w.

    Different reduced expressions may give different sets, so the word is
    kept with the result.
    """
    if not is_singular(charge.check(lam), charge, order):
        raise InvalidInputError(f"{lam} is not singular")
    word = _check_reduced(word, charge.e)
    members = base_companions(lam, charge, order)
    xi = lam
    for i in reversed(word):
        xi, members = companion_step(members, xi, i, charge, order)
    return Companions(word, xi, tuple(sorted(members)))


# ============= FAITHFULNESS CONDITIONS =============


def default_radius(lam: Multipartition, charge: Multicharge) -> int:
    spread = max(charge.values) - min(charge.values)
    return charge.e * (spread + lam.size + 1) + lam.size


def _check_pair(lam: Multipartition, mu: Multipartition, charge: Multicharge, order: BoxOrder) -> None:
    charge.check(lam)
    charge.check(mu)
    if lam.size != mu.size:
        raise InvalidInputError(f"{lam} and {mu} have different sizes")
    if not is_singular(lam, charge, order):
        raise InvalidInputError(f"{lam} is not singular")
    if not is_cosingular(mu, charge, order):
        raise InvalidInputError(f"{mu} is not cosingular")


def check_C(lam: Multipartition, mu: Multipartition, charge: Multicharge, order: BoxOrder,
            max_length: Optional[int] = None) -> Optional[Witness]:
    """Look for w = C_{a,m} with w.lam not <= w*.mu.

    Args:
        lam: A singular multipartition.
        mu: A cosingular multipartition of the same size.
        charge: Lifted charges.
        order: Box order used by the signatures.
        max_length: Largest m tried; defaults to ``default_radius``.

    Returns:
        The first witness found, or None.
    """
    _check_pair(lam, mu, charge, order)
    if not order_leq(lam, mu, charge):
        return Witness(0, 0, (), lam, mu)
    radius = default_radius(lam, charge) if max_length is None else max_length
    states: Dict[int, Tuple[Multipartition, Multipartition]] = {a: (lam, mu) for a in range(charge.e)}
    for m in range(1, radius + 1):
        for a in list(states):
            letter = (a + 1 - m) % charge.e
            left, right = states[a]
            try:
                left = sigma(letter, left, charge, order)
                right = sigma_dual(letter, right, charge, order)
            except InvalidInputError as e:
                logger.debug(f"Dropping a={a} at m={m}: {e}")
                del states[a]
                continue
            if not order_leq(left, right, charge):
                logger.debug(f"C_{{{a},{m}}} separates {lam} and {mu}")
                return Witness(a, m, c_word(a, m, charge.e), left, right)
            states[a] = (left, right)
    return None


def check_Ctilde(lam: Multipartition, mu: Multipartition, charge: Multicharge, order: BoxOrder,
                 max_length: Optional[int] = None) -> Optional[Witness]:
    """Look for w = C_{a,m} such that no companion of w.lam is <= w*.mu.

    Companions are built along the word C_{a,m} itself and compared in the
    boxwise order; an empty companion set satisfies the condition.
    """
    _check_pair(lam, mu, charge, order)

    def separated(members: Set[Multipartition], right: Multipartition) -> bool:
        return not any(order_leq(xi, right, charge) for xi in members)

    base = base_companions(lam, charge, order)
    if separated(base, mu):
        return Witness(0, 0, (), lam, mu, tuple(sorted(base)))
    radius = default_radius(lam, charge) if max_length is None else max_length
    states = {a: (lam, mu, base) for a in range(charge.e)}
    for m in range(1, radius + 1):
        for a in list(states):
            letter = (a + 1 - m) % charge.e
            left, right, members = states[a]
            try:
                left, members = companion_step(members, left, letter, charge, order)
                right = sigma_dual(letter, right, charge, order)
            except InvalidInputError as e:
                logger.debug(f"Dropping a={a} at m={m}: {e}")
                del states[a]
                continue
            if separated(members, right):
                return Witness(a, m, c_word(a, m, charge.e), left, right, tuple(sorted(members)))
            states[a] = (left, right, members)
    return None
