import itertools

import pytest

from coxeter.models import CoxeterSystem, Kind
from coxeter.tools import bruhat_leq, enumerate_up_to_length, longest_element
from hecke.models import HeckeElement, LaurentPoly
from hecke.tools import (
    anti_involution, bar, bs_character, delta_times_bs, generator_kl, kl_basis,
    kl_expand, kl_polynomials, mul_standard, quantum_binomial, quantum_integer,
    standard, standard_pairing,
)

S2 = CoxeterSystem(Kind.FINITE, 2)
S3 = CoxeterSystem(Kind.FINITE, 3)
S4 = CoxeterSystem(Kind.FINITE, 4)
A1 = CoxeterSystem(Kind.AFFINE, 2)

v = LaurentPoly.v(1)
v_inv = LaurentPoly.v(-1)


def test_laurent_arithmetic():
    p = v + 2 - v_inv
    assert str(p) == "v + 2 - v^-1"
    assert p.bar() == v_inv + 2 - v
    assert (p * p).coefficient(0) == 4 - 2
    assert LaurentPoly.from_pairs(p.to_pairs()) == p
    assert p.evaluate_at_one() == 2
    assert (v + v_inv).is_bar_invariant()


def test_quadratic_relation():
    s = S2.generator(1)
    assert mul_standard(standard(s), standard(s)) == \
        standard(S2.identity()) + HeckeElement.standard(s, v_inv - v)


def test_identity_is_a_unit():
    a = standard(S3.from_word([1, 2])) + HeckeElement.standard(S3.generator(2), v * v)
    assert mul_standard(standard(S3.identity()), a) == a
    assert mul_standard(a, standard(S3.identity())) == a


def test_b_s_squared():
    bs = generator_kl(S2, 1)
    assert mul_standard(bs, bs) == bs.scale(v + v_inv)


def test_associativity_on_generators():
    gens = [standard(S4.generator(s)) for s in S4.generators]
    for a, b, c in itertools.product(gens, repeat=3):
        assert mul_standard(mul_standard(a, b), c) == mul_standard(a, mul_standard(b, c))


def test_bar_involution():
    s = S3.generator(1)
    assert bar(standard(S3.identity())) == standard(S3.identity())
    assert bar(standard(s)) == standard(s) + HeckeElement.standard(S3.identity(), v - v_inv)
    assert bar(generator_kl(S3, 1)) == generator_kl(S3, 1)
    for w in enumerate_up_to_length(S4, 6):
        a = standard(w).scale(v + 3) + standard(S4.identity()).scale(v_inv)
        assert bar(bar(a)) == a


def test_bar_is_multiplicative():
    elements = list(enumerate_up_to_length(S3, 3))
    for x, y in itertools.product(elements, repeat=2):
        lhs = bar(mul_standard(standard(x), standard(y)))
        rhs = mul_standard(bar(standard(x)), bar(standard(y)))
        assert lhs == rhs


def test_small_kl_basis_elements():
    s = S3.generator(1)
    assert kl_basis(S3.identity()) == standard(S3.identity())
    assert kl_basis(s) == standard(s) + HeckeElement.standard(S3.identity(), v)
    w0 = longest_element(S3, [1, 2])
    expected = HeckeElement(S3, {w: LaurentPoly.v(3 - w.length) for w in enumerate_up_to_length(S3, 3)})
    assert kl_basis(w0) == expected


@pytest.mark.parametrize("system,max_length", [(S4, 6), (A1, 6)])
def test_kl_basis_properties(system, max_length):
    for w in enumerate_up_to_length(system, max_length):
        b = kl_basis(w)
        assert bar(b) == b
        assert b.coefficient(w) == 1
        for x, h in kl_polynomials(w).items():
            assert bruhat_leq(x, w)
            if x != w:
                assert h.min_degree >= 1
        assert anti_involution(b) == kl_basis(w.inverse())


def test_infinite_dihedral_kl_polynomials_are_trivial():
    for w in enumerate_up_to_length(A1, 6):
        for x, h in kl_polynomials(w).items():
            assert h == LaurentPoly.v(w.length - x.length)


def test_bs_character_examples():
    s = S3.generator(1)
    assert bs_character(S3, [1]) == kl_basis(s)
    assert bs_character(S3, [1, 1]) == kl_basis(s).scale(v + v_inv)
    assert bs_character(S3, [1, 2, 1]).coefficient(S3.identity()) == v ** 3 + v


def test_kl_expand_examples():
    s = S3.generator(1)
    sts = S3.from_word([1, 2, 1])
    assert kl_expand(kl_basis(sts)) == {sts: LaurentPoly.v(0)}
    assert kl_expand(bs_character(S3, [1, 1])) == {s: v + v_inv}
    assert kl_expand(bs_character(S3, [1, 2, 1])) == {sts: LaurentPoly.v(0), s: LaurentPoly.v(0)}


def test_char_zero_positivity():
    for length in range(7):
        for word in itertools.product(S4.generators, repeat=length):
            character = bs_character(S4, word)
            assert all(c.is_nonnegative() for _, c in character.items())
            expansion = kl_expand(character)
            assert all(c.is_nonnegative() for c in expansion.values())


def test_standard_pairing():
    e = S3.identity()
    assert standard_pairing(standard(e), standard(e)) == 1
    b = generator_kl(S3, 1)
    assert standard_pairing(b, b) == 1 + v * v
    assert standard_pairing(bs_character(S3, [1, 1]), bs_character(S3, [1])) == v_inv + 2 * v + v ** 3


def test_standard_filtration_shadow():
    for w in enumerate_up_to_length(S4, 6):
        for s in S4.generators:
            product = mul_standard(standard(w), generator_kl(S4, s))
            assert delta_times_bs(w, s) == product
            ws = w.right_multiply(s)
            shift = v if ws.length > w.length else v_inv
            assert product == standard(ws) + HeckeElement.standard(w, shift)


def test_quantum_numbers():
    assert quantum_integer(2) == v + v_inv
    assert quantum_integer(0).is_zero
    assert quantum_binomial(4, 2) == LaurentPoly({-4: 1, -2: 1, 0: 2, 2: 1, 4: 1})
    for a in range(1, 6):
        for b in range(a + 1):
            assert quantum_binomial(a, b).is_bar_invariant()
            assert quantum_binomial(a, b) == quantum_binomial(a, a - b)
            assert quantum_binomial(a, b).evaluate_at_one() == len(list(itertools.combinations(range(a), b)))
        assert quantum_binomial(a, 1) == quantum_integer(a)
    # b_s^3 = [2]^2 b_s
    b = generator_kl(S2, 1)
    assert mul_standard(mul_standard(b, b), b) == b.scale(quantum_integer(2) ** 2)
