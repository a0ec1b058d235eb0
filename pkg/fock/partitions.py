import itertools
from collections import Counter
from functools import lru_cache
from typing import Dict, List, Tuple

from sympy.utilities.iterables import partitions as _sympy_partitions

from exceptions import InvalidInputError
from fock.models import Box, FockOp, Multicharge, Multipartition, OrderKind, Partition, transpose


def residue(box: Box, charge: Multicharge) -> int:
    return charge.residue(box)


def content(box: Box, charge: Multicharge) -> int:
    return charge.content(box)


def addable_of_residue(lam: Multipartition, i: int, charge: Multicharge) -> List[Box]:
    return [b for b in charge.check(lam).addable() if charge.residue(b) == i % charge.e]


def removable_of_residue(lam: Multipartition, i: int, charge: Multicharge) -> List[Box]:
    return [b for b in charge.check(lam).removable() if charge.residue(b) == i % charge.e]


def fock_apply(op: FockOp, lam: Multipartition, j: int, charge: Multicharge) -> List[Multipartition]:
    """All multipartitions reached from ``lam`` by removing (e_j) or adding (f_j) one j-box."""
    if FockOp(op) == FockOp.F:
        return [lam.add(b) for b in addable_of_residue(lam, j, charge)]
    return [lam.remove(b) for b in removable_of_residue(lam, j, charge)]


def fock_commutator(lam: Multipartition, i: int, charge: Multicharge) -> Counter:
    """(e_i f_i - f_i e_i)|lam> as a Counter of multipartitions."""
    out: Counter = Counter()
    for mu in fock_apply(FockOp.F, lam, i, charge):
        out.update(fock_apply(FockOp.E, mu, i, charge))
    for mu in fock_apply(FockOp.E, lam, i, charge):
        out.subtract(fock_apply(FockOp.F, mu, i, charge))
    return Counter({k: c for k, c in out.items() if c})


def residue_counts(lam: Multipartition, charge: Multicharge) -> Tuple[int, ...]:
    counts = [0] * charge.e
    for b in charge.check(lam).boxes():
        counts[charge.residue(b)] += 1
    return tuple(counts)


def in_family(lam: Multipartition, mu: Multipartition, i: int, charge: Multicharge) -> bool:
    """True when lam and mu differ only in boxes of residue i."""
    return all(charge.residue(b) == i % charge.e for b in lam.box_set() ^ mu.box_set())


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> Tuple[Partition, ...]:
    if n < 0:
        raise InvalidInputError(f"Cannot enumerate partitions of {n}")
    if n == 0:
        return ((),)
    out = []
    for p in _sympy_partitions(n):
        out.append(tuple(sorted((k for k, c in p.items() for _ in range(c)), reverse=True)))
    return tuple(sorted(out, reverse=True))


@lru_cache(maxsize=None)
def enumerate_multipartitions(n: int, level: int) -> Tuple[Multipartition, ...]:
    """All l-multipartitions of n, in a fixed order."""
    if level < 1:
        raise InvalidInputError(f"Level must be positive, got {level}")
    out = []
    for sizes in itertools.product(range(n + 1), repeat=level):
        if sum(sizes) != n:
            continue
        for parts in itertools.product(*(enumerate_partitions(k) for k in sizes)):
            out.append(Multipartition(parts))
    return tuple(sorted(out, key=lambda m: ([-k for k in map(sum, m.components)], m.components)))


def _boxwise_keys(lam: Multipartition, charge: Multicharge) -> Dict[int, List[Tuple[int, int]]]:
    keys: Dict[int, List[Tuple[int, int]]] = {}
    for b in lam.boxes():
        keys.setdefault(charge.residue(b), []).append((-charge.content(b), b.comp))
    return {r: sorted(k) for r, k in keys.items()}


def _cumulative_sums(lam: Multipartition, height: int) -> List[int]:
    sums, total = [], 0
    for parts in lam.components:
        padded = parts + (0,) * (height - len(parts))
        for p in padded:
            total += p
            sums.append(total)
    return sums


def order_leq(lam: Multipartition, mu: Multipartition, charge: Multicharge,
              order: OrderKind = OrderKind.BOXWISE) -> bool:
    """lam <= mu in the boxwise or the cumulative order.

    The boxwise order pairs the i-boxes of lam and mu, each sorted by
    (-content, component), and asks that every box of lam sit below its
    partner; a box further right is larger. For a total preorder on keys
    the sorted pairing is a perfect matching whenever one exists.
    """
    charge.check(lam)
    charge.check(mu)
    if lam.size != mu.size:
        return False
    if OrderKind(order) == OrderKind.CUMULATIVE:
        height = max((len(c) for c in lam.components + mu.components), default=0)
        return all(a <= b for a, b in zip(_cumulative_sums(lam, height), _cumulative_sums(mu, height)))
    left, right = _boxwise_keys(lam, charge), _boxwise_keys(mu, charge)
    if {r: len(k) for r, k in left.items()} != {r: len(k) for r, k in right.items()}:
        return False
    return all(a <= b for r in left for a, b in zip(left[r], right[r]))


def order_less(lam: Multipartition, mu: Multipartition, charge: Multicharge,
               order: OrderKind = OrderKind.BOXWISE) -> bool:
    return lam != mu and order_leq(lam, mu, charge, order)


def lambda_star(lam: Multipartition) -> Multipartition:
    """Reverse the components and transpose each one."""
    return Multipartition(tuple(transpose(c) for c in reversed(lam.components)))


def charge_star(charge: Multicharge) -> Multicharge:
    return charge.star()
