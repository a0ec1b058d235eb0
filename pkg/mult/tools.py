from typing import Dict, Iterable, Optional, Sequence, Tuple

from loguru import logger

from coxeter.models import CoxeterElement, ParabolicSubset, Side
from coxeter.tools import coset_minimal, longest_element, parabolic_elements
from exceptions import InvalidInputError
from fock.crystal import crystal_closure
from fock.models import BoxOrder, Classification, Multipartition
from fock.partitions import enumerate_multipartitions, lambda_star
from fock.tools import classify
from mult.models import MultiplicityQuery, MultiplicityResult, block_parabolic
from soergel.tools import p_canonical


def pkl_at_one(y: CoxeterElement, w: CoxeterElement, p: Optional[int] = None) -> int:
    """
    Coefficient of the standard basis element of y in the p-canonical element of w, at v = 1.

    Args:
        y: The lower element.
        w: The element whose p-canonical basis element is expanded.
        p: A prime, or None for the Kazhdan-Lusztig basis.

    Returns:
        A nonnegative integer.
    """
    if y.system != w.system:
        raise InvalidInputError("Elements of different Coxeter systems")
    return p_canonical(w.system, w, p).coefficient(y).evaluate_at_one()


def parabolic_pkl(beta: CoxeterElement, alpha: CoxeterElement, J: Iterable[int], p: Optional[int] = None) -> int:
    """
    Alternating sum over W_J of p-canonical coefficients at v = 1.

    Args:
        beta: The label whose p-canonical element is expanded.
        alpha: The label translated by W_J.
        J: A finitary parabolic subset.
        p: A prime, or None.

    Returns:
        The sum of (-1)^l(u) times the coefficient of u.alpha in the p-canonical element of beta.

    W_J acts on the left, u * alpha, since labels are double cosets W_J a W_I (see coset_label).
    Inverting every label turns this into the right action alpha^-1 * u^-1.
    """
    if beta.system != alpha.system:
        raise InvalidInputError("Labels live in different Coxeter systems")
    parabolic = J if isinstance(J, ParabolicSubset) else alpha.system.parabolic(J)
    total = 0
    for u in parabolic_elements(parabolic.require_finitary()):
        value = pkl_at_one(u * alpha, beta, p)
        total += -value if u.length % 2 else value
    return total


def coset_label(c: Classification, J: ParabolicSubset) -> CoxeterElement:
    """Longest element of r W_I, where r is the minimal element of W_J a and of its W_I-coset."""
    system = c.coset.system
    left = coset_minimal(c.coset, J, Side.LEFT).representative
    right = coset_minimal(left, c.stabilizer, Side.RIGHT).representative
    return right * longest_element(system, c.stabilizer)


def tilting_multiplicity(beta: CoxeterElement, alpha: CoxeterElement, J: Iterable[int],
                         p: Optional[int] = None) -> int:
    """[T(beta) : Delta(alpha)] at negative level; the same alternating sum as ``parabolic_pkl``."""
    value = parabolic_pkl(beta, alpha, J, p)
    logger.debug(f"[T({beta}):Delta({alpha})] = {value}")
    return value


def label(lam: Multipartition, heights: Sequence[int], e: int,
          n: Optional[int] = None) -> Tuple[Tuple[int, ...], CoxeterElement]:
    """Orbit and coset label of lam*, the pair the parabolic sum consumes."""
    c = classify(lambda_star(lam), heights, e, n)
    return c.orbit, coset_label(c, block_parabolic(heights))


def schur_decomposition_number(q: MultiplicityQuery) -> MultiplicityResult:
    """
    [Delta(lam) : L(mu)] for the cyclotomic Schur algebra.

    Args:
        q: The query; its constructor has already checked the m-vector.

    Returns:
        A result whose value is 0 when lam* and mu* lie in different orbits.
    """
    if q.conditional:
        logger.warning(f"{q.mode} multiplicity for {q.lam}, {q.mu} assumes a large enough m-vector {q.heights}")
    left_orbit, alpha = label(q.lam, q.heights, q.e, q.n)
    right_orbit, beta = label(q.mu, q.heights, q.e, q.n)
    if left_orbit != right_orbit:
        logger.debug(f"{q.lam} and {q.mu} lie in different orbits")
        return MultiplicityResult(q, 0, False)
    value = tilting_multiplicity(beta, alpha, q.J, q.p)
    logger.debug(f"[{q.lam}:{q.mu}] ({q.mode}) = {value} via alpha={alpha}, beta={beta}")
    return MultiplicityResult(q, value, True, alpha, beta)


def hecke_decomposition_number(q: MultiplicityQuery, order: BoxOrder = BoxOrder.SCHUR) -> MultiplicityResult:
    """
    [S(lam) : D(mu)] for the cyclotomic Hecke algebra, S the dual Specht module.

    Args:
        q: The query.
        order: Box order of the crystal that decides which simples survive.

    Returns:
        The Schur value when mu lies in the crystal of the empty multipartition, otherwise a result with value None.
    """
    if q.mu not in crystal_closure(q.charge, order, q.n):
        logger.debug(f"{q.mu} is not in the crystal component of the empty multipartition")
        left = classify(lambda_star(q.lam), q.heights, q.e, q.n)
        right = classify(lambda_star(q.mu), q.heights, q.e, q.n)
        return MultiplicityResult(q, None, left.orbit == right.orbit)
    return schur_decomposition_number(q)


def decomposition_matrix(n: int, e: int, charges: Sequence[int], heights: Sequence[int], p: Optional[int] = None,
                         hecke: bool = False) -> Dict[Tuple[Multipartition, Multipartition], MultiplicityResult]:
    """
    Every decomposition number over the multipartitions of n.

    Args:
        n: Number of boxes.
        e: Quantum characteristic.
        charges: Residues r_0..r_{l-1}.
        heights: The m-vector.
        p: A prime, or None.
        hecke: Use the Hecke quotient instead of the Schur algebra.

    Returns:
        A mapping (lam, mu) -> result; rows are lam, columns mu.
    """
    compute = hecke_decomposition_number if hecke else schur_decomposition_number
    shapes = enumerate_multipartitions(n, len(charges))
    logger.info(f"Decomposition matrix for n={n}, e={e}: {len(shapes)} multipartitions")
    return {
        (lam, mu): compute(MultiplicityQuery(lam, mu, e, tuple(charges), tuple(heights), p))
        for lam in shapes for mu in shapes
    }
