from functools import lru_cache
from itertools import product
from typing import Iterable, List, Sequence, Tuple

from loguru import logger
from sympy import isprime
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grevlex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import ring

from coxeter.models import CoxeterElement, CoxeterSystem, Kind
from coxeter.tools import longest_element, parabolic_elements, relative_longest
from exceptions import ConsistencyError, InvalidInputError
from polyring.models import DualBases, Fraction, MultiPoly, Realization, realization_for


def realization(system: CoxeterSystem) -> Realization:
    return realization_for(system)


def fraction_field(real: Realization):
    """The localization Q = Frac(R)."""
    return real.field


def graded_degree(f: MultiPoly) -> int:
    """Degree with deg x_i = deg y = 2; zero for the zero polynomial."""
    if not f:
        return 0
    return 2 * max(sum(m) for m in f.itermonoms())


def act_generator(system: CoxeterSystem, s: int, f: MultiPoly) -> MultiPoly:
    return f.compose(realization_for(system).images(f.ring, s))


def act(w: CoxeterElement, f: MultiPoly) -> MultiPoly:
    """w(f), letters of the canonical word applied right to left."""
    for s in reversed(w.word):
        f = act_generator(w.system, s, f)
    return f


def act_fraction(w: CoxeterElement, q: Fraction) -> Fraction:
    return q.field.new(act(w, q.numer), act(w, q.denom))


def demazure(system: CoxeterSystem, s: int, f: MultiPoly) -> MultiPoly:
    """d_s(f) = (f - s f) / a_s."""
    real = realization_for(system)
    root = real.root(system.check_generator(s))
    if root.ring != f.ring:
        root = root.set_ring(f.ring)
    try:
        return (f - act_generator(system, s, f)).exquo(root)
    except ExactQuotientFailed:
        raise ConsistencyError(f"Demazure quotient by the root of s{s} is not exact for {f}")


def demazure_word(system: CoxeterSystem, word: Sequence[int], f: MultiPoly) -> MultiPoly:
    """d_{s_1} ... d_{s_k}(f) for a reduced word (s_1, ..., s_k)."""
    if system.from_word(word).length != len(word):
        raise InvalidInputError(f"Word {tuple(word)} is not reduced")
    for s in reversed(word):
        f = demazure(system, s, f)
    return f


def is_invariant(system: CoxeterSystem, f: MultiPoly, I: Iterable[int]) -> bool:
    return all(act_generator(system, s, f) == f for s in I)


def frobenius_trace(system: CoxeterSystem, I: Iterable[int], J: Iterable[int], f: MultiPoly) -> MultiPoly:
    """The trace d_I^J = d_{w_I w_J} from R^J to R^I."""
    I, J = list(I), list(J)
    if not set(J) <= set(I):
        raise InvalidInputError(f"{sorted(J)} is not contained in {sorted(I)}")
    if not is_invariant(system, f, J):
        raise InvalidInputError(f"{f} is not invariant under {sorted(J)}")
    return demazure_word(system, relative_longest(system, I, J).word, f)


def positive_roots(system: CoxeterSystem, I: Iterable[int]) -> List[MultiPoly]:
    """Positive roots of W_I, read off a reduced word of w_I."""
    real = realization_for(system)
    word = longest_element(system, I).word
    roots = []
    for k, s in enumerate(word):
        roots.append(act(system.from_word(word[:k]), real.root(s)))
    return roots


def mu_invariant(system: CoxeterSystem, I: Iterable[int], J: Iterable[int] = ()) -> MultiPoly:
    """Product of the positive roots of I that are not roots of J."""
    real = realization_for(system)
    excluded = set(positive_roots(system, J))
    out = real.ring.one
    for root in positive_roots(system, I):
        if root not in excluded:
            out *= root
    return out


def dual_bases(system: CoxeterSystem, s: int) -> DualBases:
    """{rho, 1} and {1, -s(rho)}, dual for d_s."""
    real = realization_for(system)
    rho = real.rho(system.check_generator(s))
    return DualBases((rho, real.ring.one), (real.ring.one, -act_generator(system, s, rho)))


def coproduct(system: CoxeterSystem, s: int) -> Tuple[Tuple[MultiPoly, MultiPoly], ...]:
    return dual_bases(system, s).coproduct


def multiply_out(terms: Iterable[Tuple[MultiPoly, MultiPoly]]) -> MultiPoly:
    """p_e(f (x) g) = fg."""
    terms = list(terms)
    return sum((f * g for f, g in terms[1:]), terms[0][0] * terms[0][1])


def multiply_twisted(system: CoxeterSystem, s: int, terms: Iterable[Tuple[MultiPoly, MultiPoly]]) -> MultiPoly:
    """p_s(f (x) g) = f s(g)."""
    terms = list(terms)
    out = terms[0][0] * act_generator(system, s, terms[0][1])
    for f, g in terms[1:]:
        out += f * act_generator(system, s, g)
    return out


def components(system: CoxeterSystem, I: Iterable[int]) -> List[List[int]]:
    """Connected components of I in the Dynkin diagram, each in chain order."""
    members = set(I)
    n = system.rank
    out = []
    seen = set()
    for s in sorted(members):
        if s in seen:
            continue
        start = s
        while (start - 1) % n in members and system.adjacent(start, (start - 1) % n) and (start - 1) % n != s:
            start = (start - 1) % n
        chain = [start]
        seen.add(start)
        nxt = (start + 1) % n
        while nxt in members and nxt not in seen and system.adjacent(chain[-1], nxt):
            chain.append(nxt)
            seen.add(nxt)
            nxt = (nxt + 1) % n
        out.append(chain)
    return out


def chain_variables(system: CoxeterSystem, chain: Sequence[int]) -> List[MultiPoly]:
    """Linear forms permuted by the symmetric group generated by a chain of generators."""
    real = realization_for(system)
    n = system.rank
    first = chain[0]
    variables = [real.x(n if first == 0 else first)]
    wrapped = False
    for g in chain:
        if g == 0:
            wrapped = True
            q = 1
        else:
            q = g + 1
        variables.append(real.x(q) - real.y if wrapped else real.x(q))
    return variables


def artin_basis(system: CoxeterSystem, I: Iterable[int]) -> List[MultiPoly]:
    """Monomial basis of R over R^I in the chain variables of each component."""
    real = realization_for(system)
    factors = []
    for chain in components(system, I):
        z = chain_variables(system, chain)
        k = len(z)
        monomials = []
        for exps in product(*[range(k - i) for i in range(k)]):
            m = real.ring.one
            for var, a in zip(z, exps):
                m *= var ** a
            monomials.append(m)
        factors.append(monomials)
    basis = []
    for combo in product(*factors):
        m = real.ring.one
        for f in combo:
            m *= f
        basis.append(m)
    return basis


def _independent(system: CoxeterSystem, elements: Sequence[MultiPoly], conjugates: Sequence[CoxeterElement]) -> bool:
    """Linear independence over Frac(R^I), read off the matrix of W_I-images."""
    domain = realization_for(system).ring.to_domain()
    rows = {tuple(act(w, c) for c in elements) for w in conjugates}
    matrix = DomainMatrix([list(row) for row in rows], (len(rows), len(elements)), domain)
    return matrix.rank() == len(elements)


def _normalize_sign(f: MultiPoly) -> MultiPoly:
    return -f if f.LC < 0 else f


@lru_cache(maxsize=None)
def _parabolic_dual_bases(system: CoxeterSystem, I: Tuple[int, ...], J: Tuple[int, ...]) -> DualBases:
    real = realization_for(system)
    conjugates = parabolic_elements(system.parabolic(I))
    target = len(conjugates) // len(parabolic_elements(system.parabolic(J)))
    top_j = longest_element(system, J).word
    candidates = {_normalize_sign(c) for c in (demazure_word(system, top_j, m) for m in artin_basis(system, I)) if c}
    domain = real.ring.to_domain()

    # Greedy by degree; the Gram matrix is only meaningful once the basis is complete.
    chosen: List[MultiPoly] = []
    for c in sorted(candidates, key=lambda c: (graded_degree(c), str(c))):
        if _independent(system, chosen + [c], conjugates):
            chosen.append(c)
        if len(chosen) == target:
            break
    if len(chosen) != target:
        raise ConsistencyError(f"Found {len(chosen)} of {target} basis elements for R^{list(J)} over R^{list(I)}")
    gram = [[frobenius_trace(system, I, J, b * c) for c in chosen] for b in chosen]
    matrix = DomainMatrix(gram, (target, target), domain)
    det = matrix.det()
    if det not in (real.ring.one, -real.ring.one):
        raise ConsistencyError(f"Gram determinant {det} is not a unit")
    inverse, den = matrix.inv_den()
    rows = inverse.to_list()
    dual = []
    for col in range(target):
        b = real.ring.zero
        for row_index in range(target):
            try:
                b += rows[row_index][col].exquo(den) * chosen[row_index]
            except ExactQuotientFailed:
                raise ConsistencyError("Inverse Gram matrix has a non-polynomial entry")
        dual.append(b)
    logger.debug(f"Dual bases for R^{list(J)} over R^{list(I)}: {chosen}")
    return DualBases(tuple(chosen), tuple(dual))


def dual_bases_parabolic(system: CoxeterSystem, I: Iterable[int], J: Iterable[int]) -> DualBases:
    """Dual bases of R^J over R^I for the trace d_I^J, J contained in I."""
    I, J = tuple(sorted(set(I))), tuple(sorted(set(J)))
    if not set(J) <= set(I):
        raise InvalidInputError(f"{list(J)} is not contained in {list(I)}")
    system.parabolic(I).require_finitary()
    return _parabolic_dual_bases(system, I, J)


def coproduct_parabolic(system: CoxeterSystem, I: Iterable[int], J: Iterable[int]) -> Tuple[Tuple[MultiPoly, MultiPoly], ...]:
    return dual_bases_parabolic(system, I, J).coproduct


def symmetric(kind: str, degree: int, variables: Sequence[MultiPoly], base=None) -> MultiPoly:
    """Complete (kind "h") or elementary (kind "e") symmetric polynomial."""
    if base is None:
        if not variables:
            raise InvalidInputError("A ring is required when there are no variables")
        base = variables[0].ring
    if kind not in ("h", "e"):
        raise InvalidInputError(f"Unknown symmetric function kind {kind!r}")
    if degree < 0:
        return base.zero
    # table[d] holds the value on the variables seen so far
    table = [base.one] + [base.zero] * degree
    for var in variables:
        if kind == "h":
            for d in range(1, degree + 1):
                table[d] = table[d] + var * table[d - 1]
        else:
            for d in range(degree, 0, -1):
                table[d] = table[d] + var * table[d - 1]
    return table[degree]


def reduce_mod_p(f: MultiPoly, p: int) -> MultiPoly:
    if not isprime(p):
        raise InvalidInputError(f"{p} is not prime")
    return f.set_ring(ring(f.ring.symbols, GF(p), grevlex)[0])


def specialize_finite(f: MultiPoly) -> MultiPoly:
    """Set y = 0 and land in the finite realization."""
    names = [str(s) for s in f.ring.symbols]
    if "y" not in names:
        return f
    finite = realization_for(CoxeterSystem(Kind.FINITE, len(names) - 1))
    y = f.ring.gens[names.index("y")]
    return f.evaluate(y, 0).set_ring(finite.ring)

