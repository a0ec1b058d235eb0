import itertools

import pytest

from coxeter.models import CoxeterSystem, Kind, Side
from coxeter.tools import enumerate_up_to_length
from exceptions import ConsistencyError, InvalidInputError
from hecke.models import LaurentPoly
from hecke.tools import bs_character, kl_basis, kl_expand, standard_pairing
from polyring.models import realization_for
from polyring.tools import act, demazure, mu_invariant
from soergel.leaves import braid_morphism, end_dot, merge, split, start_dot
from soergel.models import BSWord, GramForm, LocalizedModule
from soergel.tools import (
    constant_block_multiplicity, coset_transport, double_leaves_count, graded_gram_multiplicity,
    intersection_form, kernel_check, light_leaf, local_elimination, p_canonical, pair_leaves, rex_move,
    subexpressions, twisted_form, unit_pivot_certificate,
)

S2 = CoxeterSystem(Kind.FINITE, 2)
S3 = CoxeterSystem(Kind.FINITE, 3)
S4 = CoxeterSystem(Kind.FINITE, 4)
A1 = CoxeterSystem(Kind.AFFINE, 2)
A2 = CoxeterSystem(Kind.AFFINE, 3)

v = LaurentPoly.v(1)
v_inv = LaurentPoly.v(-1)


def _words(system, max_length):
    for length in range(max_length + 1):
        yield from itertools.product(system.generators, repeat=length)


def _apply(matrix, coordinates):
    """Coordinates of the image of a pure tensor, from the localized matrix."""
    field = realization_for(matrix.system).field
    out = {}
    for (f, e), c in matrix.entries.items():
        out[f] = out.get(f, field.zero) + c * field(coordinates[e])
    return out


def test_subexpression_enumeration():
    subs = subexpressions(S3, [1, 2, 1])
    assert len(subs) == 8
    top = [s for s in subs if s.target == S3.from_word([1, 2, 1])]
    assert len(top) == 1 and top[0].is_all_ones and top[0].defect == 0
    by_target = {}
    for sub in subexpressions(S2, [1, 1]):
        by_target.setdefault(str(sub.target), set()).add(sub.defect)
    assert by_target == {"e": {2, 0}, "s1": {1, -1}}


def test_defects_match_hecke_characters():
    for word in _words(S3, 4):
        character = bs_character(S3, word)
        counts = {}
        for sub in subexpressions(S3, word):
            counts[sub.target] = counts.get(sub.target, LaurentPoly()) + LaurentPoly.v(sub.defect)
        assert counts == dict(character.items())


def test_generators_against_tensors():
    real = realization_for(S2)
    x1, x2 = real.ring.gens
    samples = [real.ring.one, x1, x2 ** 2, x1 * x2 + 3 * x1 ** 3]
    one_letter = LocalizedModule(BSWord(S2, (1,)))
    two_letters = LocalizedModule(BSWord(S2, (1, 1)))
    empty = LocalizedModule(BSWord(S2, ()))
    field = real.field
    for f, g, h in itertools.product(samples, repeat=3):
        source = two_letters.standard_coordinates((f, g, h))
        image = one_letter.standard_coordinates((f * demazure(S2, 1, g), h))
        computed = _apply(merge(S2, 1), source)
        assert all(computed.get(c, field.zero) == field(image[c]) for c in one_letter.basis)
        split_image = two_letters.standard_coordinates((f, real.ring.one, g))
        computed = _apply(split(S2, 1), one_letter.standard_coordinates((f, g)))
        assert all(computed[c] == field(split_image[c]) for c in two_letters.basis)
        computed = _apply(end_dot(S2, 1), one_letter.standard_coordinates((f, g)))
        assert computed[()] == field(empty.standard_coordinates((f * g,))[()])


def test_start_dot_is_the_flip_of_the_end_dot():
    field = realization_for(S3).field
    alpha = field(realization_for(S3).root(2))
    assert start_dot(S3, 2).entries == {((0,), ()): alpha}
    assert end_dot(S3, 2).entries == {((), (0,)): field.one}


def test_distant_braid_vertex_is_invertible():
    there = braid_morphism(S4, 1, 3)
    back = braid_morphism(S4, 3, 1)
    there.check_block_structure()
    composite = back.compose(there)
    field = realization_for(S4).field
    assert composite.entries == {(e, e): field.one for e in LocalizedModule(BSWord(S4, (1, 3))).basis}


def test_six_valent_vertex():
    vertex = braid_morphism(S3, 1, 2)
    vertex.check_block_structure()
    field = realization_for(S3).field
    top = (1, 1, 1)
    assert vertex.entry(top, top) == field.one
    composite = braid_morphism(S3, 2, 1).compose(vertex)
    assert composite.column(top) == {top: field.one}
    assert composite.degree == 0
    with pytest.raises(InvalidInputError):
        braid_morphism(A1, 0, 1)


@pytest.mark.parametrize("system,s,t", [(S3, 1, 2), (S3, 2, 1), (S4, 1, 3), (S4, 3, 2), (A2, 0, 1)])
def test_braid_vertex_matches_closed_formula(system, s, t):
    vertex = braid_morphism(system, s, t)
    field = realization_for(system).field
    mu = mu_invariant(system, [s, t])
    source, target = LocalizedModule(vertex.source), LocalizedModule(vertex.target)
    for e in source.basis:
        x = source.end(e)
        closed = field.new(act(x, mu), source.euler(e))
        for f in target.basis:
            assert vertex.entry(f, e) == (closed if target.end(f) == x else field.zero)


def test_rex_move_between_reduced_words():
    move = rex_move(S3, [2, 1, 2], [1, 2, 1])
    assert move.entries == braid_morphism(S3, 2, 1).entries
    identity = rex_move(S3, [1, 2], [1, 2])
    field = realization_for(S3).field
    assert identity.entries == {(e, e): field.one for e in LocalizedModule(BSWord(S3, (1, 2))).basis}
    with pytest.raises(InvalidInputError):
        rex_move(S3, [1, 2], [2, 1])


def test_light_leaf_examples():
    field = realization_for(S2).field
    identity = light_leaf(S2, [1], [1])
    assert identity.entries == {((0,), (0,)): field.one, ((1,), (1,)): field.one}
    dot = light_leaf(S2, [1], [0])
    assert dot.entries == {((), (0,)): field.one}
    assert dot.degree == 1
    trivalent = light_leaf(S2, [1, 1], [1, 0])
    assert trivalent.entries == merge(S2, 1).entries
    assert trivalent.degree == -1


def test_pairing_examples():
    alpha = realization_for(S2).root(1)
    assert pair_leaves(S2, [1], [1], [1]) == 1
    assert pair_leaves(S2, [1], [0], [0]) == alpha
    form = intersection_form(S2, S2.generator(1), [1, 1])
    assert [leaf.bits for leaf in form.leaves] == [(1, 0), (0, 1)]
    assert form.matrix == [[0, 1], [1, alpha]]
    form = intersection_form(S2, S2.identity(), [1, 1])
    assert [leaf.bits for leaf in form.leaves] == [(1, 1), (0, 0)]
    assert form.matrix == [[0, alpha], [alpha, alpha ** 2]]
    with pytest.raises(InvalidInputError):
        pair_leaves(S2, [1, 1], [1, 0], [0, 0])


def test_small_multiplicities():
    for p in (None, 2, 3):
        assert graded_gram_multiplicity(intersection_form(S2, S2.identity(), [1]), p).is_zero
        assert graded_gram_multiplicity(intersection_form(S2, S2.generator(1), [1]), p) == 1
        assert graded_gram_multiplicity(intersection_form(S2, S2.generator(1), [1, 1]), p) == v + v_inv
        assert graded_gram_multiplicity(intersection_form(S2, S2.identity(), [1, 1]), p).is_zero


def test_gram_forms_are_symmetric_and_graded():
    w = S3.from_word([1, 2, 1])
    for x in enumerate_up_to_length(S3, 3):
        form = intersection_form(S3, x, [1, 2, 1, 2])
        for i in range(form.size):
            for j in range(form.size):
                assert form.entry(i, j) == form.entry(j, i)
    assert intersection_form(S3, w, [1, 2]).size == 0


def test_rational_multiplicities_match_kl_expansion():
    for word in _words(S3, 4):
        expansion = kl_expand(bs_character(S3, word))
        for x in bs_character(S3, word).support():
            m = graded_gram_multiplicity(intersection_form(S3, x, word, local=True))
            assert m == expansion.get(x, LaurentPoly())


@pytest.mark.parametrize("system", [S3, S4])
def test_local_elimination_matches_block_ranks(system):
    if system == S3:
        words = list(_words(S3, 4))
    else:
        words = [w.word for w in enumerate_up_to_length(S4, 4)] + [(1, 2, 1, 2), (2, 1, 3, 2, 2)]
    for word in words:
        for x in bs_character(system, word).support():
            form = intersection_form(system, x, word, local=True)
            for p in (None, 2, 3):
                assert local_elimination(form, p) == constant_block_multiplicity(form, p)


def test_local_elimination_inverts_series_pivots():
    alpha = realization_for(S2).root(1)
    form = intersection_form(S2, S2.generator(1), [1, 1])
    shifted = GramForm(form.element, form.word, form.leaves, [[alpha, 1 + alpha], [1 + alpha, alpha]])
    assert local_elimination(shifted) == v + v_inv
    top = intersection_form(S2, S2.generator(1), [1])
    skewed = GramForm(top.element, top.word, top.leaves, [[2 + alpha]])
    assert local_elimination(skewed) == 1
    assert local_elimination(skewed, 2).is_zero
    with pytest.raises(ConsistencyError):
        graded_gram_multiplicity(skewed, 2)


@pytest.mark.parametrize("system,max_length", [(S3, 3), (A1, 5)])
def test_rational_p_canonical_is_kazhdan_lusztig(system, max_length):
    for w in enumerate_up_to_length(system, max_length):
        assert p_canonical(system, w).expansion == kl_basis(w)


@pytest.mark.parametrize("p", [2, 3])
def test_type_a2_has_no_torsion(p):
    for w in enumerate_up_to_length(S3, 3):
        entry = p_canonical(S3, w, p)
        assert entry.expansion == kl_basis(w)
        assert entry.provenance == p_canonical(S3, w).provenance
        for x in entry.expansion.support():
            assert unit_pivot_certificate(intersection_form(S3, x, w.word))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_affine_p_canonical_properties(p):
    for w in enumerate_up_to_length(A1, 5):
        entry = p_canonical(A1, w, p)
        assert entry.coefficient(w) == 1
        assert all(c.is_nonnegative() for _, c in entry.expansion.items())
        assert entry.mode == f"p={p}"


def test_p_canonical_rejects_non_primes():
    with pytest.raises(InvalidInputError):
        p_canonical(S3, S3.generator(1), 4)


def test_hom_formula():
    for system in (S3, A1):
        words = list(_words(system, 3))
        for u, w in itertools.product(words, repeat=2):
            if len(u) + len(w) > 6:
                continue
            expected = standard_pairing(bs_character(system, u), bs_character(system, w))
            assert double_leaves_count(system, u, w) == expected


def test_leaves_with_dots_vanish_on_the_top_summand():
    for w in enumerate_up_to_length(S3, 3):
        assert kernel_check(S3, w.word) == []
    with pytest.raises(InvalidInputError):
        kernel_check(S3, [1, 1])


def test_coset_transport():
    s1, s2 = S3.generator(1), S3.generator(2)
    original, transported = coset_transport(S3, s1, [2], [2, 2], s2, Side.RIGHT)
    assert transported.matrix == twisted_form(original, s1)
    assert transported.element == s1 * s2
    assert graded_gram_multiplicity(transported) == graded_gram_multiplicity(original)
    original, transported = coset_transport(S3, s1, [2], [2, 2], s2, Side.LEFT)
    assert transported.matrix == original.matrix
    e = S3.identity()
    original, transported = coset_transport(S3, e, [2], [2], s2)
    assert transported.matrix == original.matrix
    with pytest.raises(InvalidInputError):
        coset_transport(S3, s2, [2], [2, 2], s2)
