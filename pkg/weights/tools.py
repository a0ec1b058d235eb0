from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from loguru import logger

from coxeter.models import CoxeterSystem, Kind, ParabolicSubset
from coxeter.tools import longest_element, stabilizer_of
from exceptions import ConsistencyError, InvalidInputError
from polyring.models import MultiPoly, realization_for
from polyring.tools import act_generator, demazure, frobenius_trace, is_invariant, positive_roots, symmetric
from weights.models import (
    CROSSING_DEGREES, ZERO, AffineWeight, CrossingDegree, CrossingKind, DotFamily, FiniteWeight, FString,
    PropertyReport, SingularGenerator, Weight, ZeroWeight, weight_class,
)

MaybeWeight = Union[Weight, ZeroWeight]


# ============= WEIGHTS AND LITTELMANN OPERATORS =============

def make_weight(entries: Sequence[int], e: int, kind: Kind = Kind.FINITE) -> Weight:
    return weight_class(kind)(tuple(entries), e)


def counts(lam: FiniteWeight) -> Tuple[int, ...]:
    """(r_1, ..., r_e) with r_j the number of entries equal to j."""
    return tuple(lam.entries.count(j) for j in range(1, lam.e + 1))


def from_counts(r: Sequence[int]) -> FiniteWeight:
    if any(c < 0 for c in r) or not sum(r):
        raise InvalidInputError(f"{tuple(r)} is not a nonzero vector of counts")
    return FiniteWeight(tuple(j for j, c in enumerate(r, start=1) for _ in range(c)), len(r))


def sequence(lam: FiniteWeight) -> Tuple[int, ...]:
    """0 = k_0 <= k_1 <= ... <= k_e = n with k_j = r_1 + ... + r_j."""
    out = [0]
    for c in counts(lam):
        out.append(out[-1] + c)
    return tuple(out)


def from_sequence(k: Sequence[int]) -> FiniteWeight:
    if not k or k[0] != 0 or any(a > b for a, b in zip(k, k[1:])):
        raise InvalidInputError(f"{tuple(k)} is not a weakly increasing sequence from 0")
    return from_counts([b - a for a, b in zip(k, k[1:])])


def enumerate_weights(n: int, e: int, kind: Kind = Kind.FINITE,
                      first_entries: Optional[Iterable[int]] = None) -> Iterator[Weight]:
    """All of Lambda_{n,e}, or the affine representatives whose first entry lies in ``first_entries``.

    The affine default window is -e <= l_1 <= e.
    """
    kind = Kind(kind)
    if kind == Kind.FINITE:
        for entries in combinations_with_replacement(range(1, e + 1), n):
            yield FiniteWeight(entries, e)
        return
    window = range(-e, e + 1) if first_entries is None else first_entries
    for first in window:
        for rest in combinations_with_replacement(range(first, first + e + 1), n - 1):
            yield AffineWeight((first,) + rest, e)


def _single_step(lam: Weight, j: int, up: bool) -> Tuple[MaybeWeight, Optional[int]]:
    """Apply F_j (``up``) or E_j once; also return the 1-based index that moved."""
    entries = lam.entries
    if lam.kind == Kind.FINITE:
        if not 1 <= j <= lam.e - 1:
            raise InvalidInputError(f"Color {j} is not in 1..{lam.e - 1}")
        if up:
            positions = [i for i, a in enumerate(entries, start=1) if a == j]
            index = positions[-1] if positions else None
        else:
            positions = [i for i, a in enumerate(entries, start=1) if a == j + 1]
            index = positions[0] if positions else None
        if index is None:
            return ZERO, None
        moved = list(entries)
        moved[index - 1] += 1 if up else -1
        return lam.replace(moved), index
    residue = j % lam.e
    source = residue if up else (residue + 1) % lam.e
    found = []
    for i, a in enumerate(entries, start=1):
        if a % lam.e != source:
            continue
        moved = list(entries)
        moved[i - 1] += 1 if up else -1
        if all(p <= q for p, q in zip(moved, moved[1:])) and moved[-1] <= moved[0] + lam.e:
            found.append((lam.replace(moved), i))
    if len(found) > 1:
        raise ConsistencyError(f"Operator {'F' if up else 'E'}_{j} is ambiguous on {lam}")
    return found[0] if found else (ZERO, None)


def littelmann_F(lam: MaybeWeight, j: int, k: int = 1) -> MaybeWeight:
    """F_j^{(k)}: in the finite case, k copies of j become j + 1.

    Args:
        lam: A weight or the formal zero
        j: Color, 1..e-1 for finite weights and a residue mod e for affine ones
        k: Number of steps

    Returns:
        The new weight, or the formal zero
    """
    if k < 0:
        raise InvalidInputError(f"Divided power {k} is negative")
    for _ in range(k):
        if not lam:
            return ZERO
        lam, _ = _single_step(lam, j, True)
    return lam


def littelmann_E(lam: MaybeWeight, j: int, k: int = 1) -> MaybeWeight:
    if k < 0:
        raise InvalidInputError(f"Divided power {k} is negative")
    for _ in range(k):
        if not lam:
            return ZERO
        lam, _ = _single_step(lam, j, False)
    return lam


def moved_indices(lam: Weight, j: int, k: int = 1) -> List[Tuple[int, int]]:
    """(index, old value) for each single step of F_j^{(k)} on ``lam``."""
    out = []
    current: MaybeWeight = lam
    for _ in range(k):
        if not current:
            raise InvalidInputError(f"F_{j}^({k}) kills {lam}")
        nxt, index = _single_step(current, j, True)
        if not nxt:
            raise InvalidInputError(f"F_{j}^({k}) kills {lam}")
        out.append((index, current[index]))
        current = nxt
    return out


def stabilizer(lam: Weight) -> ParabolicSubset:
    return stabilizer_of(lam.system, lam.entries, lam.e)


def _on_common_string(lam: Weight, mu: Weight, j: int) -> bool:
    for a, b in ((lam, mu), (mu, lam)):
        current: MaybeWeight = a
        while current:
            if current == b:
                return True
            current = littelmann_F(current, j)
    return False


def stabilizer_pair(lam: Weight, mu: Weight, j: int) -> ParabolicSubset:
    """I(l, mu) = I(l) & I(mu) for two weights on a common F_j-string."""
    if not _on_common_string(lam, mu, j):
        raise InvalidInputError(f"{lam} and {mu} are not on a common F_{j}-string")
    return stabilizer(lam) & stabilizer(mu)


def f_string(lam: Weight, j: int) -> FString:
    start = lam
    while True:
        previous = littelmann_E(start, j)
        if not previous:
            break
        start = previous
    weights = [start]
    while True:
        nxt = littelmann_F(weights[-1], j)
        if not nxt:
            break
        weights.append(nxt)
    return FString(j, tuple(weights), tuple(stabilizer(w) for w in weights))


def colors(e: int, kind: Kind) -> Tuple[int, ...]:
    return tuple(range(e)) if Kind(kind) == Kind.AFFINE else tuple(range(1, e))


# ============= DOT POLYNOMIALS =============

def standard_family(n: int, e: int, kind: Kind = Kind.FINITE) -> DotFamily:
    return DotFamily(Kind(kind), n, e)


def corrupted_family(n: int, e: int) -> DotFamily:
    """The affine family with the r y terms dropped; it has no monodromy."""
    return DotFamily(Kind.AFFINE, n, e, monodromy=False)


def dot_poly(lam: Weight, j: int, family: Optional[DotFamily] = None, k: int = 1) -> MultiPoly:
    """f_{l -> F_j^{(k)} l}: the sum over the single steps of x_index (+ r y) + z.

    Args:
        lam: Source weight
        j: Color
        family: Dot family; the standard one for the weight's kind when omitted
        k: Thickness of the strand

    Returns:
        The dot polynomial in the realization of the weight's Coxeter system
    """
    family = family or standard_family(lam.n, lam.e, lam.kind)
    if (family.kind, family.n, family.e) != (lam.kind, lam.n, lam.e):
        raise InvalidInputError(f"Family for {family.kind.value} n={family.n} e={family.e} does not apply to {lam}")
    total = realization_for(family.system).ring.zero
    for index, value in moved_indices(lam, j, k):
        total += family.step(index, value)
    return total


def regenerate_family(lam: Weight, j: int, value: MultiPoly) -> DotFamily:
    """The unique family taking ``value`` on the edge l -> F_j l.

    Raises:
        InvalidInputError: When ``value`` is not x_k + r y + z with z invariant under the whole group
    """
    (index, old), = moved_indices(lam, j, 1)
    unshifted = DotFamily(lam.kind, lam.n, lam.e)
    z = value - unshifted.step(index, old)
    system = unshifted.system
    if not is_invariant(system, z, system.generators):
        raise InvalidInputError(f"{value} does not extend to a dot family: {z} is not invariant")
    return DotFamily(lam.kind, lam.n, lam.e, shift=z or None)


# ============= PROPERTY VERIFIER =============

def _edges(weights: List[Weight], cols: Sequence[int]):
    for lam in weights:
        for j in cols:
            mu = littelmann_F(lam, j)
            if mu:
                yield lam, j, mu


def _delta0(family: DotFamily, i: int) -> MultiPoly:
    real = realization_for(family.system)
    if family.kind == Kind.AFFINE and i % family.e == 0:
        return real.y
    return real.ring.zero


def _mu_two_sided(system: CoxeterSystem, L: ParabolicSubset, t: int, u: int) -> MultiPoly:
    """Product of the positive roots of Ltu lying in neither Lt nor Lu."""
    big = set(L.members) | {t, u}
    lt = set(positive_roots(system, set(L.members) | {t}))
    lu = set(positive_roots(system, set(L.members) | {u}))
    out = realization_for(system).ring.one
    for root in positive_roots(system, big):
        if root not in lt and root not in lu:
            out *= root
    return out


def verify_dot_properties(family: DotFamily, first_entries: Optional[Iterable[int]] = None) -> PropertyReport:
    """Check a dot family against every condition a functor from the 2-category imposes.

    Runs over all of Lambda_{n,e} (finite) or the affine representatives in the
    window. Each failure carries the weights it was found at.
    """
    n, e, kind = family.n, family.e, family.kind
    system = family.system
    real = realization_for(system)
    weights = list(enumerate_weights(n, e, kind, first_entries))
    cols = colors(e, kind)
    report = PropertyReport()

    def f(a: Weight, j: int, k: int = 1) -> MultiPoly:
        return dot_poly(a, j, family, k)

    for lam in weights:
        for j in cols:
            string = f_string(lam, j)
            position = string.weights.index(lam)
            for k in range(1, len(string) - position + 1):
                mu = string.weights[position + k]
                report.count("invariance")
                common = stabilizer(lam) & stabilizer(mu)
                if not is_invariant(system, f(lam, j, k), common.members):
                    report.fail("invariance", f"{lam} -> {mu}", f"not invariant under {common}")
                for a in range(1, k):
                    report.count("additivity")
                    nu = string.weights[position + a]
                    if f(lam, j, k) != f(lam, j, a) + f(nu, j, k - a):
                        report.fail("additivity", f"{lam} -> {nu} -> {mu}")

    for lam, j, nu in _edges(weights, cols):
        mu = littelmann_F(nu, j)
        if not mu:
            continue
        outside = (stabilizer(lam) & stabilizer(mu)) - stabilizer(nu)
        if len(outside) != 1:
            continue
        t, = outside
        report.count("dual_basis")
        first, second = f(lam, j), f(nu, j)
        if act_generator(system, t, first) != second:
            report.fail("dual_basis", f"{lam} -> {nu} -> {mu}", f"s{t} does not swap the two dots")
        if demazure(system, t, second) != 1 or demazure(system, t, first) != -1:
            report.fail("dual_basis", f"{lam} -> {nu} -> {mu}", f"d_s{t} values are not 1 and -1")

    for lam, i, mu in _edges(weights, cols):
        for j in cols:
            if j == i:
                continue
            nu = littelmann_F(lam, j)
            rho = littelmann_F(mu, j)
            if not nu or not rho or littelmann_F(nu, i) != rho:
                continue
            report.count("locality")
            if f(lam, i) != f(nu, i) or f(lam, j) != f(mu, j):
                report.fail("locality", f"{lam}, {mu}, {nu}, {rho}")

    for lam, i, mu in _edges(weights, cols):
        j = (i + 1) % e if kind == Kind.AFFINE else i + 1
        if j not in cols or littelmann_F(lam, j):
            continue
        nu = littelmann_F(mu, j)
        if not nu:
            continue
        (first_index, _), = moved_indices(lam, i)
        (second_index, _), = moved_indices(mu, j)
        if first_index != second_index:
            continue
        report.count("repeated_index")
        if f(lam, i) - f(mu, j) + _delta0(family, i) != 0:
            report.fail("repeated_index", f"{lam} -> {mu} -> {nu}",
                        f"{f(lam, i)} and {f(mu, j)} differ by more than the allowed y term")

    # e = 2 crossings are funky and follow a different rule
    crossing_edges = [] if kind == Kind.AFFINE and e == 2 else list(_edges(weights, cols))
    for lam, i, mu in crossing_edges:
        j = (i + 1) % e if kind == Kind.AFFINE else i + 1
        if j not in cols:
            continue
        nu = littelmann_F(lam, j)
        rho = littelmann_F(mu, j)
        if not nu or not rho or littelmann_F(nu, i) != rho:
            continue
        s_lam, s_mu, s_nu, s_rho = (stabilizer(w) for w in (lam, mu, nu, rho))
        ts = (s_rho & s_mu) - s_lam
        us = (s_lam & s_mu) - s_rho
        if len(ts) != 1 or len(us) != 1 or ts == us:
            continue
        (t,), (u,) = ts, us
        L = s_lam & s_mu & s_nu & s_rho
        if not system.parabolic(set(L.members) | {t, u}).is_finitary:
            continue
        report.count("double_crossing")
        expected = f(nu, i) - f(lam, j) + _delta0(family, i)
        if _mu_two_sided(system, L, t, u) != expected:
            report.fail("double_crossing", f"{lam}, {mu}, {nu}, {rho}", f"t=s{t}, u=s{u}")

    if kind == Kind.AFFINE:
        window = sorted({w.entries[0] for w in weights})
        for m in window:
            if m + e not in window:
                continue
            report.count("monodromy")
            if _constant_shift(family, m + e) - _constant_shift(family, m) != real.y:
                report.fail("monodromy", f"({m}^{n}) and ({m + e}^{n})", "z_(m+e) - z_m is not y")
    logger.debug(f"Dot family check {kind.value} n={n} e={e}: {report.checked}, {len(report.failures)} failures")
    return report


def _constant_shift(family: DotFamily, m: int) -> MultiPoly:
    """z_m, where f on (m, ..., m) -> F_m (m, ..., m) is x_n + z_m."""
    nu = AffineWeight((m,) * family.n, family.e)
    return dot_poly(nu, m % family.e, family) - realization_for(family.system).x(family.n)


# ============= BUBBLES =============

@lru_cache(maxsize=None)
def bubble_system(a: int, b: int) -> CoxeterSystem:
    """S_{a+b+1}, with x_1..x_a the y-strands, x_{a+1} the dot f and the rest the z-strands."""
    return CoxeterSystem(Kind.FINITE, a + b + 1)


def bubble_variables(a: int, b: int) -> Tuple[List[MultiPoly], MultiPoly, List[MultiPoly]]:
    gens = realization_for(bubble_system(a, b)).ring.gens
    return list(gens[:a]), gens[a], list(gens[a + 1:])


def bubble(m: int, a: int, b: int, mode: str = "pi") -> MultiPoly:
    """Closed form of a dotted bubble between a y-strands and b z-strands.

    pi_m = (-1)^(m+b) sum_{p+q=m+b-a} (-1)^p h_p(y, f) e_q(z);
    xi_m = (-1)^(m-b) sum_{p+q=m+a-b} (-1)^p h_p(z) e_q(y, f).
    """
    if a < 0 or b < 0:
        raise InvalidInputError("Strand counts must be nonnegative")
    ys, dot, zs = bubble_variables(a, b)
    base = realization_for(bubble_system(a, b)).ring
    if mode == "pi":
        left, right, degree, sign = ys + [dot], zs, m + b - a, (-1) ** ((m + b) % 2)
    elif mode == "xi":
        left, right, degree, sign = zs, ys + [dot], m + a - b, (-1) ** ((m - b) % 2)
    else:
        raise InvalidInputError(f"Unknown bubble mode {mode!r}")
    total = base.zero
    for p in range(degree + 1):
        term = symmetric("h", p, left, base) * symmetric("e", degree - p, right, base)
        total += term if p % 2 == 0 else -term
    return sign * total


def bubble_by_trace(m: int, a: int, b: int, mode: str = "pi") -> MultiPoly:
    """The same bubbles evaluated with Frobenius traces instead of the closed form."""
    system = bubble_system(a, b)
    ys, dot, zs = bubble_variables(a, b)
    if mode == "pi":
        if m < 0:
            raise InvalidInputError("The trace form of pi needs m >= 0")
        poly = dot ** m
        for z in zs:
            poly *= dot - z
        return frobenius_trace(system, range(1, a + 1), range(1, a), poly)
    if mode == "xi":
        if m < 2 or b < 1:
            raise InvalidInputError("The trace form of xi needs m >= 2 and b >= 1")
        first = zs[0]
        poly = first ** (m - 2)
        for x in ys + [dot]:
            poly *= x - first
        start = a + 2
        return -frobenius_trace(system, range(start, a + b + 1), range(start + 1, a + b + 1), poly)
    raise InvalidInputError(f"Unknown bubble mode {mode!r}")


def grassmannian_check(a: int, b: int, window: int = 6) -> List[int]:
    """Degrees j in 0..window where sum pi_m' xi_m'' over m' + m'' = j is not delta_j0.

    The sum runs over m' >= a - b and m'' >= b - a. An empty list means the relation holds.
    """
    base = realization_for(bubble_system(a, b)).ring
    bad = []
    for j in range(window + 1):
        total = base.zero
        for m1 in range(a - b, j - (b - a) + 1):
            total += bubble(m1, a, b, "pi") * bubble(j - m1, a, b, "xi")
        if total != (1 if j == 0 else 0):
            bad.append(j)
    return bad


# ============= DEGREES =============

def crossing_kind(i: int, j: int, e: int, kind: Kind = Kind.FINITE) -> CrossingKind:
    if i == j:
        return CrossingKind.SAME
    if Kind(kind) == Kind.AFFINE:
        if e == 2:
            return CrossingKind.FUNKY
        return CrossingKind.ADJACENT if (i - j) % e in (1, e - 1) else CrossingKind.DISTANT
    return CrossingKind.ADJACENT if abs(i - j) == 1 else CrossingKind.DISTANT


def crossing_degree(kind: Optional[CrossingKind] = None, weight: Optional[Weight] = None,
                    i: Optional[int] = None, j: Optional[int] = None) -> CrossingDegree:
    """Degree of the crossing F_i F_j 1_l -> F_j F_i 1_l.

    With a weight and colors the kind is inferred when not given, and the map is
    flagged as zero when one of the weights it passes through is the formal zero.
    """
    zero_map = False
    if weight is not None:
        if i is None or j is None:
            raise InvalidInputError("Colors are required together with a weight")
        if kind is None:
            kind = crossing_kind(i, j, weight.e, weight.kind)
        zero_map = not (littelmann_F(littelmann_F(weight, j), i) and littelmann_F(littelmann_F(weight, i), j))
    if kind is None:
        raise InvalidInputError("Either a crossing kind or a weight with colors is required")
    kind = CrossingKind(kind)
    return CrossingDegree(kind, CROSSING_DEGREES[kind], zero_map)


def _ell(system: CoxeterSystem, members: Iterable[int]) -> int:
    return longest_element(system, members).length


def singular_generator_degree(system: CoxeterSystem, generator: SingularGenerator, I: Iterable[int] = (),
                              J: Iterable[int] = (), K: Iterable[int] = (), L: Iterable[int] = ()) -> int:
    """Degree of a cup, cap or crossing in the singular calculus.

    Cups and caps separate L from J = Ls; the sideways crossing has regions
    L inside J and K inside I.
    """
    I, J, K, L = (frozenset(X) for X in (I, J, K, L))
    generator = SingularGenerator(generator)
    if generator == SingularGenerator.UPWARD_CROSSING:
        return 0
    if generator in (SingularGenerator.CLOCKWISE, SingularGenerator.COUNTERCLOCKWISE):
        if not L < J:
            raise InvalidInputError(f"{sorted(L)} must be a proper subset of {sorted(J)}")
        sign = 1 if generator == SingularGenerator.CLOCKWISE else -1
        return sign * (_ell(system, J) - _ell(system, L))
    if not (L <= J <= I and L <= K <= I):
        raise InvalidInputError("A sideways crossing needs L inside J and K, both inside I")
    return _ell(system, I) + _ell(system, L) - _ell(system, J) - _ell(system, K)
