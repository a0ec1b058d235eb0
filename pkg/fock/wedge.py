from collections import Counter
from typing import Sequence, Tuple

from exceptions import ConstraintError, InvalidInputError
from fock.models import FockOp, Multipartition, WedgeVector


def fock_to_wedge(lam: Multipartition, heights: Sequence[int]) -> WedgeVector:
    """Send |lam> to v_{1-m-lam_1} ^ v_{2-m-lam_2} ^ ... ^ v_0 in each block of height m."""
    heights = tuple(int(m) for m in heights)
    if len(heights) != lam.level:
        raise InvalidInputError(f"Need {lam.level} heights, got {len(heights)}")
    blocks = []
    for parts, m in zip(lam.components, heights):
        if len(parts) >= m:
            raise ConstraintError(f"Height {m} leaves no room below {parts}")
        padded = parts + (0,) * (m - len(parts))
        blocks.append(tuple(k - m - padded[k - 1] for k in range(1, m + 1)))
    return WedgeVector(tuple(blocks))


def wedge_to_fock(vec: WedgeVector) -> Multipartition:
    """Inverse of ``fock_to_wedge``: lam_k = k - m - i_k."""
    components = []
    for block in vec.blocks:
        m = len(block)
        if block and block[-1] != 0:
            raise InvalidInputError(f"{vec} does not end in v_0 in every block")
        components.append(tuple(k - m - i for k, i in enumerate(block, start=1)))
    return Multipartition(tuple(components))


def _move(block: Tuple[int, ...], j: int, e: int, step: int, truncate: bool) -> Counter:
    out: Counter = Counter()
    for pos, index in enumerate(block):
        target = index + step
        if (index if step > 0 else target) % e != j % e:
            continue
        if truncate and pos == len(block) - 1 and index == 0 and target == 1:
            continue
        if target in block:
            continue
        out[block[:pos] + (target,) + block[pos + 1:]] += 1
    return out


def wedge_apply(op: FockOp, vec: WedgeVector, j: int, e: int, truncated: bool = False) -> Counter:
    """Act by f_j (v_{i} -> v_{i-1} when i-1 = j mod e) or e_j (v_i -> v_{i+1} when i = j mod e).

    Each block is acted on in turn. Moving one index by one never reorders
    the wedge, so every coefficient is +1 or a collision gives 0. With
    ``truncated`` the e_0 term lifting a final v_0 to v_1 is dropped.

    Returns:
        A Counter mapping WedgeVector to its coefficient.
    """
    step = -1 if FockOp(op) == FockOp.F else 1
    out: Counter = Counter()
    for b, block in enumerate(vec.blocks):
        for moved, coeff in _move(block, j, e, step, truncated and step > 0).items():
            out[WedgeVector(vec.blocks[:b] + (moved,) + vec.blocks[b + 1:])] += coeff
    return out
