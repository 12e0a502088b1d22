import random

import pytest

from uhecke.exactalg import LPoly, RFunc, parse
from uhecke.hecke import (HeckeElement, HeckeStructureError, block_indicator, eigenspace,
                          eigenvector, expected_eigenvector, idempotent, kappa_generator,
                          kappa_value, t_mul)
from uhecke.weyl import SignedPermutation, enumerate_group, generator, generators

q = LPoly.var("q")
E1 = SignedPermutation.identity(1)
W1 = generator(1, "C")


def T(w, c=1):
    return HeckeElement.basis(w, c)


def test_quadratic_relations():
    assert t_mul(W1, W1) == T(W1, q - 1) + T(E1, q)
    a1 = generator(2, "A1")
    e2 = SignedPermutation.identity(2)
    assert t_mul(a1, a1) == T(a1, q ** 2 - 1) + T(e2, q ** 2)


def test_length_additive_product():
    w, a = generator(2, "C"), generator(2, "A1")
    assert t_mul(w, a) == T(w * a)


def test_identity_is_unit():
    a = T(W1, q) + T(E1, 3)
    assert HeckeElement.one(1) * a == a


def test_minus_section_squares():
    f = T(E1) - T(W1, q ** -1)
    assert f * f == f.scale(1 + q ** -1)


def test_full_sum_times_generator():
    total = T(E1) + T(W1)
    assert total * T(W1) == total.scale(q)


def test_kappa_examples():
    assert kappa_value("+", T(W1)) == RFunc(q)
    assert kappa_value("-", T(W1)) == RFunc.const(-1)
    assert kappa_value("+", T(generator(2, "C") * generator(2, "A1"))) == RFunc(q ** 3)


def test_block_indicator():
    assert block_indicator(1, 0) == T(E1)
    assert block_indicator(1, 1) == T(W1)
    assert len(block_indicator(2, 1).coeffs) == 4
    with pytest.raises(ValueError):
        block_indicator(2, 3)


def test_eigenvector_small_cases():
    assert eigenvector(1, "-") == T(E1) - T(W1, q ** -1)
    f = eigenvector(2, "-")
    weights = [f.coeff(SignedPermutation(w)) for w in [(1, 2), (-1, 2), (-1, -2)]]
    assert weights == [RFunc.const(1), RFunc(-q ** -1), RFunc(q ** -2)]
    assert eigenvector(2, "+") == expected_eigenvector(2, "+")


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("eps", ["+", "-"])
def test_eigenspace_is_a_line(r, eps):
    space = eigenspace(r, eps)
    assert len(space) == 1
    f = eigenvector(r, eps)
    for s in generators(r):
        assert f * T(generator(r, s)) == f.scale(kappa_generator(eps, s))


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("eps", ["+", "-"])
def test_idempotent(r, eps):
    e = idempotent(r, eps)
    assert e * e == e


def test_idempotent_rank_one_text():
    assert idempotent(1, "-").to_text() == "(q/(1 + q)) T[1] + (-1/(1 + q)) T[-1]"
    assert idempotent(1, "+") == (T(E1) + T(W1)).scale(RFunc(LPoly.const(1), 1 + q))


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("eps", ["+", "-"])
def test_kappa_multiplicative(r, eps):
    elems = [w for w, _ in enumerate_group(r)]
    for u in elems:
        for v in elems:
            assert kappa_value(eps, t_mul(u, v)) == kappa_value(eps, T(u)) * kappa_value(eps, T(v))


def test_associativity_random():
    rng = random.Random(0)
    elems = [w for w, _ in enumerate_group(3)]
    for _ in range(200):
        u, v, w = (T(rng.choice(elems)) for _ in range(3))
        assert (u * v) * w == u * (v * w)


def test_plus_character_is_index():
    for w, word in enumerate_group(3):
        k = word.count("C") + 2 * (len(word) - word.count("C"))
        assert kappa_value("+", T(w)) == RFunc(q ** k)


def test_rank_mismatch():
    with pytest.raises(ValueError):
        T(E1) * T(SignedPermutation.identity(2))
