import threading
from typing import Dict, Sequence

from loguru import logger

from coxeter.models import CoxeterElement, CoxeterSystem
from hecke.models import HeckeElement, LaurentPoly

V = LaurentPoly.v(1)
V_INV = LaurentPoly.v(-1)

_bar_cache: Dict[CoxeterElement, HeckeElement] = {}
_kl_cache: Dict[CoxeterElement, HeckeElement] = {}
_cache_lock = threading.RLock()


def standard(w: CoxeterElement) -> HeckeElement:
    return HeckeElement.standard(w)


def right_multiply_generator(a: HeckeElement, s: int) -> HeckeElement:
    """a * T_s under T_x T_s = T_xs (xs > x), T_xs + (v^-1 - v) T_x (xs < x)."""
    out: Dict[CoxeterElement, LaurentPoly] = {}
    for x, c in a.items():
        xs = x.right_multiply(s)
        out[xs] = out.get(xs, LaurentPoly()) + c
        if xs.length < x.length:
            out[x] = out.get(x, LaurentPoly()) + c * (V_INV - V)
    return HeckeElement(a.system, out)


def left_multiply_generator(s: int, a: HeckeElement) -> HeckeElement:
    out: Dict[CoxeterElement, LaurentPoly] = {}
    for x, c in a.items():
        sx = x.left_multiply(s)
        out[sx] = out.get(sx, LaurentPoly()) + c
        if sx.length < x.length:
            out[x] = out.get(x, LaurentPoly()) + c * (V_INV - V)
    return HeckeElement(a.system, out)


def mul_standard(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    """Product in the standard basis."""
    result = HeckeElement.zero(a.system)
    for y, c in b.items():
        term = a
        for s in y.word:
            term = right_multiply_generator(term, s)
        result = result + term.scale(c)
    return result


def _bar_standard(w: CoxeterElement) -> HeckeElement:
    with _cache_lock:
        cached = _bar_cache.get(w)
    if cached is not None:
        return cached
    if w.is_identity:
        value = HeckeElement.standard(w)
    else:
        s = w.word[-1]
        prefix = _bar_standard(w.right_multiply(s))
        # bar(T_s) = T_s^{-1} = T_s + (v - v^-1)
        value = right_multiply_generator(prefix, s) + prefix.scale(V - V_INV)
    with _cache_lock:
        _bar_cache[w] = value
    return value


def bar(a: HeckeElement) -> HeckeElement:
    result = HeckeElement.zero(a.system)
    for w, c in a.items():
        result = result + _bar_standard(w).scale(c.bar())
    return result


def anti_involution(a: HeckeElement) -> HeckeElement:
    """T_w -> T_{w^-1}; sends b_w to b_{w^-1}."""
    return HeckeElement(a.system, {w.inverse(): c for w, c in a.items()})


def generator_kl(system: CoxeterSystem, s: int) -> HeckeElement:
    return HeckeElement(system, {system.generator(s): LaurentPoly.v(0), system.identity(): V})


def _symmetric_nonpositive_part(p: LaurentPoly) -> LaurentPoly:
    low = LaurentPoly({k: c for k, c in p.items() if k <= 0})
    return low + low.bar() - p.coefficient(0)


def kl_basis(w: CoxeterElement) -> HeckeElement:
    """Kazhdan-Lusztig basis element b_w, memoized per element."""
    with _cache_lock:
        cached = _kl_cache.get(w)
    if cached is not None:
        return cached
    if w.is_identity:
        value = HeckeElement.standard(w)
    else:
        s = w.word[-1]
        x = w.right_multiply(s)
        bx = kl_basis(x)
        value = right_multiply_generator(bx, s) + bx.scale(V)
        while True:
            offenders = [y for y, c in value.items() if y != w and c.min_degree <= 0]
            if not offenders:
                break
            y = max(offenders)
            gamma = _symmetric_nonpositive_part(value.coefficient(y))
            value = value - kl_basis(y).scale(gamma)
        logger.debug(f"b_{w} has {len(value.support())} standard terms")
    with _cache_lock:
        _kl_cache[w] = value
    return value


def kl_polynomials(w: CoxeterElement) -> Dict[CoxeterElement, LaurentPoly]:
    """x -> h_{x,w}, the standard coefficients of b_w."""
    return dict(kl_basis(w).items())


def kl_expand(a: HeckeElement) -> Dict[CoxeterElement, LaurentPoly]:
    """Coefficients c_x with a = sum c_x b_x."""
    remaining = a
    out: Dict[CoxeterElement, LaurentPoly] = {}
    while not remaining.is_zero:
        y = max(remaining.support())
        c = remaining.coefficient(y)
        out[y] = out.get(y, LaurentPoly()) + c
        remaining = remaining - kl_basis(y).scale(c)
    return out


def bs_character(system: CoxeterSystem, word: Sequence[int]) -> HeckeElement:
    """Product b_{s_1} ... b_{s_k} in the standard basis."""
    result = HeckeElement.standard(system.identity())
    for s in word:
        system.check_generator(s)
        result = right_multiply_generator(result, s) + result.scale(V)
    return result


def standard_pairing(a: HeckeElement, b: HeckeElement) -> LaurentPoly:
    """Sum over x of a_x b_x; on Bott-Samelson characters this is the graded double-leaf count.

    Standard elements are orthonormal, so (b_s, b_s) = 1 + v^2 rather than v + v^-1:
    exponents count leaf defects, which are nonnegative on BS(s).
    """
    total = LaurentPoly()
    for x, c in a.items():
        total = total + c * b.coefficient(x)
    return total


def delta_times_bs(w: CoxeterElement, s: int) -> HeckeElement:
    """T_w b_s: T_ws + v T_w if ws > w, else T_ws + v^-1 T_w."""
    return right_multiply_generator(HeckeElement.standard(w), s) + HeckeElement.standard(w, V)


def evaluate_at_one(p: LaurentPoly) -> int:
    return p.evaluate_at_one()


def quantum_integer(n: int) -> LaurentPoly:
    """[n] = v^{n-1} + v^{n-3} + ... + v^{1-n}."""
    if n < 0:
        return -quantum_integer(-n)
    return LaurentPoly({n - 1 - 2 * k: 1 for k in range(n)})


def quantum_binomial(a: int, b: int) -> LaurentPoly:
    if b < 0 or b > a:
        return LaurentPoly()
    if b == 0 or b == a:
        return LaurentPoly.monomial(1, 0)
    return LaurentPoly.v(-b) * quantum_binomial(a - 1, b) + LaurentPoly.v(a - b) * quantum_binomial(a - 1, b - 1)


def clear_caches() -> None:
    with _cache_lock:
        _bar_cache.clear()
        _kl_cache.clear()


def is_bar_invariant(a: HeckeElement) -> bool:
    return bar(a) == a

