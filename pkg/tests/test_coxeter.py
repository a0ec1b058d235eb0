import itertools

import pytest

from coxeter.models import CoxeterSystem, Kind, Side
from coxeter.tools import (
    act_on_weight, bruhat_leq, bruhat_leq_inverse, coset_members, coset_minimal,
    double_coset_minimal, enumerate_up_to_length, longest_element, multiply,
    parabolic_elements, reduced_words, reflections_up_to, relative_longest,
    stabilizer_of, walk_to_fundamental, weight_orbit_representative,
)
from exceptions import NonFinitaryError

S3 = CoxeterSystem(Kind.FINITE, 3)
S4 = CoxeterSystem(Kind.FINITE, 4)
A1 = CoxeterSystem(Kind.AFFINE, 2)
A2 = CoxeterSystem(Kind.AFFINE, 3)


def _generic_point(system):
    return tuple(7 * i * i + 3 for i in range(system.rank))


def test_multiply_small_examples():
    s1 = S3.generator(1)
    s2 = S3.generator(2)
    assert multiply(s1, s1).is_identity
    assert multiply(s1, s2).word == (1, 2)
    assert multiply(s1, s2).length == 2


def test_affine_braid_relation_holds():
    assert A2.from_word([0, 1, 0]) == A2.from_word([1, 0, 1])
    assert A1.from_word([0, 1, 0]) != A1.from_word([1, 0, 1])


@pytest.mark.parametrize("system", [S4, A2])
def test_multiplication_matches_letter_action(system):
    elements = list(enumerate_up_to_length(system, 3))
    x = _generic_point(system)
    for a, b in itertools.product(elements, repeat=2):
        ab = multiply(a, b)
        assert ab == system.from_word(a.word + b.word)
        assert act_on_weight(ab, x, 11) == act_on_weight(a, act_on_weight(b, x, 11), 11)
        assert ab.length <= a.length + b.length


def test_multiplication_is_associative():
    elements = list(enumerate_up_to_length(A2, 2))
    for a, b, c in itertools.product(elements, repeat=3):
        assert (a * b) * c == a * (b * c)


@pytest.mark.parametrize("system", [S4, A1, A2])
def test_canonical_words_are_reduced_and_shortlex_minimal(system):
    for w in enumerate_up_to_length(system, 4):
        assert len(w.word) == w.length
        assert w.word == min(reduced_words(w))
        assert w.inverse().inverse() == w
        assert (w * w.inverse()).is_identity


def test_act_on_weight_examples():
    assert act_on_weight(A1.generator(0), (0, 0), 2) == (-2, 2)
    assert act_on_weight(A2.identity(), (4, 1, 9), 3) == (4, 1, 9)


def test_orbit_representative_is_stable_under_the_action():
    for w in enumerate_up_to_length(A2, 4):
        moved = act_on_weight(w, (0, 0, 2), 3)
        assert weight_orbit_representative(A2, moved, 3) == (0, 0, 2)


def test_bruhat_examples_in_s3():
    s1, s2 = S3.generator(1), S3.generator(2)
    assert bruhat_leq(s1, s1 * s2)
    assert not bruhat_leq(s1, s2)
    top = longest_element(S3, [1, 2])
    assert sum(1 for w in enumerate_up_to_length(S3, 3) if bruhat_leq(w, top)) == 6
    assert all(bruhat_leq(S3.identity(), w) for w in enumerate_up_to_length(S3, 3))
    assert bruhat_leq_inverse(top, S3.identity())


def _reflection_chain_leq(u, w, reflections):
    frontier = {u}
    seen = {u}
    while frontier:
        if w in frontier:
            return True
        nxt = set()
        for x in frontier:
            for t in reflections:
                y = x * t
                if x.length < y.length <= w.length and y not in seen:
                    seen.add(y)
                    nxt.add(y)
        frontier = nxt
    return False


@pytest.mark.parametrize("system,max_length", [(S4, 6), (A1, 5), (A2, 3)])
def test_bruhat_matches_reflection_chains(system, max_length):
    elements = list(enumerate_up_to_length(system, max_length))
    reflections = reflections_up_to(system, max_length)
    for u, w in itertools.product(elements, repeat=2):
        assert bruhat_leq(u, w) == _reflection_chain_leq(u, w, reflections)


@pytest.mark.parametrize("system,max_length", [(S4, 6), (A1, 6)])
def test_cosets_are_bruhat_intervals(system, max_length):
    elements = list(enumerate_up_to_length(system, max_length))
    for size in range(len(system.generators)):
        for I in itertools.combinations(system.generators, size):
            for side in (Side.LEFT, Side.RIGHT):
                for w in elements:
                    coset = coset_minimal(w, I, side)
                    members = coset_members(coset)
                    top = members[-1]
                    if top.length > max_length:
                        continue
                    assert members[0] == coset.representative
                    interval = [z for z in elements
                                if bruhat_leq(coset.representative, z) and bruhat_leq(z, top)]
                    assert sorted(interval) == members


def test_coset_minimal_examples():
    assert coset_minimal(S3.generator(1), [1], Side.LEFT).representative.is_identity
    reps = {coset_minimal(w, [1], Side.RIGHT).representative for w in enumerate_up_to_length(S3, 3)}
    assert len(reps) == 3
    for w in enumerate_up_to_length(S4, 6):
        rep = double_coset_minimal(w, [1], [3])
        coset = coset_minimal(w, [1], Side.DOUBLE, [3])
        assert all(bruhat_leq(rep, z) for z in coset_members(coset))


def test_longest_elements():
    assert longest_element(S3, [1]) == S3.generator(1)
    assert longest_element(S3, [1, 2]).length == 3
    assert longest_element(S4, [1, 2, 3]).length == 6
    assert relative_longest(S3, [1, 2], [1]).length == 2
    assert relative_longest(S3, [1, 2], [1]) * S3.generator(1) == longest_element(S3, [1, 2])
    with pytest.raises(NonFinitaryError):
        longest_element(A1, [0, 1])
    assert len(parabolic_elements(A2.parabolic([0, 2]))) == 6


def test_enumeration_counts():
    assert list(enumerate_up_to_length(S3, 0)) == [S3.identity()]
    assert len(list(enumerate_up_to_length(S3, 3))) == 6
    affine = list(enumerate_up_to_length(A1, 4))
    assert len(affine) == 9
    assert [w.length for w in affine] == sorted(w.length for w in affine)
    assert len(set(affine)) == len(affine)


def test_coxeter_matrix():
    assert A1.m(0, 1) is None
    assert A2.m(0, 2) == 3
    assert S4.m(1, 3) == 2
    assert S4.m(2, 3) == 3


def test_walk_to_fundamental():
    rep, a, I = walk_to_fundamental(A2, (5, 2, 1), 2)
    assert rep == (2, 3, 3)
    assert I.members == frozenset({2})
    assert a == A2.from_word([1, 2, 1, 0, 1])
    assert act_on_weight(a, rep, 2) == (5, 2, 1)
    assert not a.has_right_descent(2)


def test_stabilizers():
    assert stabilizer_of(CoxeterSystem(Kind.FINITE, 5), (1, 1, 1, 2, 3), 3).members == frozenset({1, 2})
    affine = CoxeterSystem(Kind.AFFINE, 6)
    assert stabilizer_of(affine, (0, 0, 0, 2, 3, 3), 3).members == frozenset({5, 0, 1, 2})
    for w in enumerate_up_to_length(A2, 3):
        rep = (0, 0, 2)
        fixes = act_on_weight(w, rep, 3) == rep
        in_parabolic = set(w.word) <= stabilizer_of(A2, rep, 3).members
        assert fixes == in_parabolic
