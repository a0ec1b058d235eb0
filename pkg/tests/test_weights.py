import pytest

from coxeter.models import CoxeterSystem, Kind
from exceptions import InvalidInputError
from polyring.models import realization_for
from weights.models import ZERO, AffineWeight, CrossingKind, DotFamily, FiniteWeight, SingularGenerator
from weights.tools import (
    bubble, bubble_by_trace, colors, corrupted_family, counts, crossing_degree, dot_poly, enumerate_weights,
    f_string, from_counts, from_sequence, grassmannian_check, littelmann_E, littelmann_F, regenerate_family,
    sequence, singular_generator_degree, stabilizer, stabilizer_pair, standard_family, verify_dot_properties,
)


def _members(subset):
    return set(subset.members)


def test_finite_operators():
    lam = FiniteWeight((1, 2, 2, 3, 3), 3)
    assert littelmann_F(lam, 2).entries == (1, 2, 3, 3, 3)
    assert littelmann_F(lam, 2, 2).entries == (1, 3, 3, 3, 3)
    assert littelmann_F(lam, 2, 3) is ZERO
    assert littelmann_E(littelmann_F(lam, 2), 2) == lam
    assert littelmann_E(FiniteWeight((1, 1, 1), 3), 1) is ZERO
    with pytest.raises(InvalidInputError):
        littelmann_F(lam, 3)


def test_weight_validation():
    with pytest.raises(InvalidInputError):
        FiniteWeight((2, 1), 3)
    with pytest.raises(InvalidInputError):
        FiniteWeight((1, 4), 3)
    with pytest.raises(InvalidInputError):
        AffineWeight((0, 4), 3)
    assert str(FiniteWeight((1, 2, 2), 3)) == "(122)"
    assert str(AffineWeight((-1, 0), 2)) == "(-1,0)"


def test_affine_f0_chain():
    string = f_string(AffineWeight((0, 0, 0, 2, 3, 3), 3), 0)
    assert [w.entries for w in string.weights] == [
        (0, 0, 0, 2, 3, 3), (0, 0, 1, 2, 3, 3), (0, 1, 1, 2, 3, 3),
        (1, 1, 1, 2, 3, 3), (1, 1, 1, 2, 3, 4), (1, 1, 1, 2, 4, 4),
    ]
    assert [_members(s) for s in string.stabilizers] == [
        {5, 0, 1, 2}, {5, 0, 1}, {5, 0, 2}, {5, 1, 2}, {0, 1, 2}, {5, 0, 1, 2},
    ]
    assert len(string) == 5


def test_stabilizers():
    assert _members(stabilizer(FiniteWeight((1, 1, 1, 2, 3), 3))) == {1, 2}
    string = f_string(FiniteWeight((1, 2, 2, 3, 3), 3), 2)
    assert string.start.entries == (1, 2, 2, 2, 2)
    assert string.finish.entries == (1, 3, 3, 3, 3)
    assert [_members(s) for s in string.stabilizers] == [{2, 3, 4}, {2, 3}, {2, 4}, {3, 4}, {2, 3, 4}]
    lam, mu = string.weights[1], string.weights[3]
    assert _members(stabilizer_pair(lam, mu, 2)) == {3}
    assert stabilizer_pair(lam, lam, 2) == stabilizer(lam)
    with pytest.raises(InvalidInputError):
        stabilizer_pair(lam, FiniteWeight((1, 1, 1, 1, 1), 3), 2)


@pytest.mark.parametrize("n,e", [(3, 3), (4, 3), (5, 4), (6, 2)])
def test_string_stabilizer_pattern(n, e):
    for lam in enumerate_weights(n, e):
        for j in colors(e, Kind.FINITE):
            string = f_string(lam, j)
            sizes = [len(s) for s in string.stabilizers]
            assert sizes[-1] == sizes[0]
            assert all(size == sizes[0] - 1 for size in sizes[1:-1])


def test_counts_and_sequences():
    lam = FiniteWeight((1, 2, 2, 3, 3), 4)
    assert counts(lam) == (1, 2, 2, 0)
    assert sequence(lam) == (0, 1, 3, 5, 5)
    for mu in enumerate_weights(4, 3):
        assert from_counts(counts(mu)) == mu
        assert from_sequence(sequence(mu)) == mu
    with pytest.raises(InvalidInputError):
        from_sequence((0, 2, 1))


def test_finite_dot_polynomials():
    real = realization_for(CoxeterSystem(Kind.FINITE, 7))
    assert dot_poly(FiniteWeight((1, 2, 2, 2, 2, 3, 4), 4), 2, k=2) == real.x(4) + real.x(5)
    real = realization_for(CoxeterSystem(Kind.FINITE, 5))
    assert dot_poly(FiniteWeight((1, 1, 1, 2, 3), 3), 1) == real.x(3)
    with pytest.raises(InvalidInputError):
        dot_poly(FiniteWeight((1, 1, 1, 2, 3), 3), 1, k=4)


def test_affine_dot_polynomials():
    real = realization_for(CoxeterSystem(Kind.AFFINE, 2))
    assert dot_poly(AffineWeight((2, 4), 3), 1) == real.x(2) + real.y
    assert dot_poly(AffineWeight((0, 1), 3), 0) == real.x(1) - real.y
    assert dot_poly(AffineWeight((1, 3), 3), 0) == real.x(2)


@pytest.mark.parametrize("n,e", [(2, 2), (2, 3), (3, 3), (3, 4), (4, 2), (4, 4)])
def test_standard_finite_family_passes(n, e):
    report = verify_dot_properties(standard_family(n, e))
    assert report.passed, [str(f) for f in report.failures]
    assert report.checked.get("invariance")


@pytest.mark.parametrize("n,e", [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)])
def test_standard_affine_family_passes(n, e):
    report = verify_dot_properties(standard_family(n, e, Kind.AFFINE))
    assert report.passed, [str(f) for f in report.failures]
    assert report.checked["monodromy"] > 0
    assert report.checked["repeated_index"] > 0


def test_shifted_families_pass():
    finite = CoxeterSystem(Kind.FINITE, 3)
    real = realization_for(finite)
    shift = real.x(1) + real.x(2) + real.x(3)
    assert verify_dot_properties(DotFamily(Kind.FINITE, 3, 3, shift=shift)).passed
    real = realization_for(CoxeterSystem(Kind.AFFINE, 3))
    assert verify_dot_properties(DotFamily(Kind.AFFINE, 3, 3, shift=2 * real.y)).passed


def test_corrupted_family_fails():
    report = verify_dot_properties(corrupted_family(2, 3))
    assert not report.passed
    assert report.failed("repeated_index")
    assert report.failed("monodromy")


def test_families_are_determined_by_one_value():
    lam = FiniteWeight((1, 1, 2, 3), 3)
    real = realization_for(lam.system)
    assert regenerate_family(lam, 1, dot_poly(lam, 1)) == standard_family(4, 3)
    total = real.x(1) + real.x(2) + real.x(3) + real.x(4)
    shifted = regenerate_family(lam, 1, dot_poly(lam, 1) + total)
    assert shifted.shift == total
    mu = FiniteWeight((1, 2, 2, 2), 3)
    assert dot_poly(mu, 2, shifted) == dot_poly(mu, 2) + total
    with pytest.raises(InvalidInputError):
        regenerate_family(lam, 1, dot_poly(lam, 1) + real.x(1))
    affine = AffineWeight((0, 2), 3)
    assert regenerate_family(affine, 0, dot_poly(affine, 0)) == standard_family(2, 3, Kind.AFFINE)


@pytest.mark.parametrize("a,b", [(0, 1), (1, 0), (1, 1), (2, 1), (1, 2), (3, 2)])
def test_degenerate_bubbles(a, b):
    assert bubble(a - b, a, b, "pi") == (-1) ** a
    assert bubble(b - a, a, b, "xi") == (-1) ** a
    assert bubble(a - b - 1, a, b, "pi") == 0
    assert bubble(b - a - 1, a, b, "xi") == 0


@pytest.mark.parametrize("a,b", [(0, 1), (1, 0), (1, 1), (2, 1), (1, 2), (2, 2)])
def test_bubbles_match_traces(a, b):
    for m in range(4):
        assert bubble(m, a, b, "pi") == bubble_by_trace(m, a, b, "pi")
    if b:
        for m in range(2, 5):
            assert bubble(m, a, b, "xi") == bubble_by_trace(m, a, b, "xi")


def test_bubble_errors():
    with pytest.raises(InvalidInputError):
        bubble(0, 1, 1, "rho")
    with pytest.raises(InvalidInputError):
        bubble_by_trace(1, 1, 1, "xi")


@pytest.mark.parametrize("a,b", [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])
def test_grassmannian_relation(a, b):
    assert grassmannian_check(a, b, window=4) == []


def test_crossing_degrees():
    assert crossing_degree(CrossingKind.SAME).degree == -2
    assert crossing_degree(CrossingKind.DISTANT).degree == 0
    lam = FiniteWeight((1, 2, 2, 3, 3), 4)
    adjacent = crossing_degree(weight=lam, i=1, j=2)
    assert (adjacent.kind, adjacent.degree, adjacent.zero_map) == (CrossingKind.ADJACENT, 1, False)
    killed = crossing_degree(weight=FiniteWeight((1, 1, 1, 1), 3), i=2, j=1)
    assert killed.zero_map
    funky = crossing_degree(weight=AffineWeight((0, 1), 2), i=0, j=1)
    assert (funky.kind, funky.degree) == (CrossingKind.FUNKY, 2)
    affine = crossing_degree(weight=AffineWeight((0, 1, 2), 3), i=0, j=2)
    assert affine.kind == CrossingKind.ADJACENT
    assert crossing_degree(weight=FiniteWeight((1, 2, 3, 4), 4), i=1, j=3).degree == 0
    with pytest.raises(InvalidInputError):
        crossing_degree()


def test_singular_generator_degrees():
    S3 = CoxeterSystem(Kind.FINITE, 3)
    assert singular_generator_degree(S3, SingularGenerator.CLOCKWISE, J={1}, L=set()) == 1
    assert singular_generator_degree(S3, SingularGenerator.COUNTERCLOCKWISE, J={1, 2}, L={1}) == -2
    assert singular_generator_degree(S3, SingularGenerator.UPWARD_CROSSING) == 0
    assert singular_generator_degree(S3, SingularGenerator.SIDEWAYS_CROSSING, I={1, 2}, J={1}, K={2}) == 1
    with pytest.raises(InvalidInputError):
        singular_generator_degree(S3, SingularGenerator.CLOCKWISE, J={1}, L={1})
