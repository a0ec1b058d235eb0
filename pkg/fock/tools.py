from collections import deque
from typing import Optional, Sequence, Tuple

from loguru import logger

from coxeter.models import CoxeterSystem, Kind
from coxeter.tools import walk_to_fundamental
from exceptions import ConstraintError, InvalidInputError
from fock.crystal import (
    apply_word, apply_word_dual, base_companions, c_word, check_C, check_Ctilde, companion_step, companions,
    crystal, crystal_closure, default_radius, epsilon, is_cosingular, is_singular, lambda_bracket, marked_pairs,
    phi, reduce_signs, sigma, sigma_dual, signature, to_highest_weight,
)
from fock.models import Classification, Multicharge, Multipartition, VirtualMultipartition
from fock.partitions import (
    addable_of_residue, charge_star, content, enumerate_multipartitions, enumerate_partitions, fock_apply,
    fock_commutator, in_family, lambda_star, order_leq, order_less, removable_of_residue, residue,
    residue_counts,
)
from fock.wedge import fock_to_wedge, wedge_apply, wedge_to_fock

__all__ = [
    "addable_of_residue", "apply_word", "apply_word_dual", "base_companions", "c_word", "charge_star",
    "check_C", "check_Ctilde", "classify", "companion_step", "companions", "content", "crystal",
    "crystal_closure", "default_radius", "enumerate_multipartitions", "enumerate_partitions", "epsilon",
    "fock_apply", "fock_commutator", "fock_to_wedge", "heights_charge", "in_family", "is_cosingular",
    "is_singular", "lambda_bracket", "lambda_star", "marked_pairs", "order_leq", "order_less", "phi",
    "reduce_signs", "removable_of_residue", "residue", "residue_counts", "sigma", "sigma_dual",
    "signature", "to_highest_weight", "to_virtual", "wedge_apply", "wedge_to_fock", "xj_leq", "xj_plus",
]


# ============= VIRTUAL MULTIPARTITIONS =============


def to_virtual(lam: Multipartition, heights: Sequence[int], n: Optional[int] = None) -> VirtualMultipartition:
    """Pad component i of ``lam`` to ``heights[i]`` rows.

    Args:
        lam: The multipartition.
        heights: m_0..m_{l-1}; each must exceed n.
        n: Size bound; defaults to |lam|.

    Returns:
        The virtual multipartition, whose coordinates are x_k = lam_k - k + 1 + m_i per block.
    """
    heights = tuple(int(m) for m in heights)
    n = lam.size if n is None else n
    if len(heights) != lam.level:
        raise InvalidInputError(f"Need {lam.level} heights, got {len(heights)}")
    if lam.size > n:
        raise InvalidInputError(f"{lam} has more than {n} boxes")
    small = [m for m in heights if m <= n]
    if small:
        raise ConstraintError(f"Heights {heights} must all exceed n={n}")
    rows = tuple(parts + (0,) * (m - len(parts)) for parts, m in zip(lam.components, heights))
    return VirtualMultipartition(rows, heights)


def heights_charge(heights: Sequence[int], e: int) -> Multicharge:
    """The charge s_i = -m_i; its i-boxes are the moves of the wedge operators at index i."""
    return Multicharge(tuple(-int(m) for m in heights), e)


def xj_plus(x: Sequence[int], heights: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Sort each block decreasingly; None when a block repeats an entry."""
    out = []
    start = 0
    for m in heights:
        block = sorted(x[start:start + m], reverse=True)
        if len(set(block)) != len(block):
            return None
        out.extend(block)
        start += m
    return tuple(out)


def xj_leq(x: Sequence[int], y: Sequence[int], heights: Sequence[int], e: int,
           max_depth: Optional[int] = None) -> bool:
    """Decide x <= y in X(J) by searching chains of positive reflections.

    A step uses eps_l - eps_k + n delta, positive when n > 0 or n = 0 and
    l < k. It replaces x_l by x_k + ne and x_k by x_l - ne, needs
    x_k + ne - x_l > 0 and is followed by the block sort. Every step only
    spreads the entries, so intermediate vectors stay inside [min y, max y].
    """
    heights = tuple(heights)
    start, goal = xj_plus(x, heights), xj_plus(y, heights)
    if start is None or goal is None:
        raise InvalidInputError(f"{tuple(x)} or {tuple(y)} does not lie in X(J)")
    if start == goal:
        return True
    if sum(start) != sum(goal) or sorted(v % e for v in start) != sorted(v % e for v in goal):
        return False
    lo, hi = min(goal), max(goal)
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        z, depth = queue.popleft()
        if max_depth is not None and depth >= max_depth:
            continue
        for l in range(len(z)):
            for k in range(len(z)):
                if l == k:
                    continue
                n = 0 if l < k else 1
                while z[k] + n * e <= hi:
                    high, low = z[k] + n * e, z[l] - n * e
                    if low < lo:
                        break
                    if high - z[l] > 0:
                        w = list(z)
                        w[l], w[k] = high, low
                        nxt = xj_plus(w, heights)
                        if nxt == goal:
                            return True
                        if nxt is not None and nxt not in seen:
                            seen.add(nxt)
                            queue.append((nxt, depth + 1))
                    n += 1
    logger.debug(f"No reflection chain from {start} to {goal} ({len(seen)} states)")
    return False


def classify(lam: Multipartition, heights: Sequence[int], e: int,
             n: Optional[int] = None) -> Classification:
    """Place ``lam`` in the affine Weyl group orbit picture.

    Returns:
        The X(J) vector, its orbit representative, the stabilizer I of the
        representative and the minimal a with x = a . representative.
    """
    virtual = to_virtual(lam, heights, n)
    x = virtual.coordinates()
    system = CoxeterSystem(Kind.AFFINE, len(x))
    rep, a, stabilizer = walk_to_fundamental(system, x, e)
    return Classification(x, rep, stabilizer, a, virtual.heights)
