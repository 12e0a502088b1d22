from fractions import Fraction

import pytest

from uhecke import doubling as dbl
from uhecke.exactalg import Factored, LPoly, RFunc, parse, shift_s
from uhecke.satake import HermitianSpaceDesc

q = LPoly.var("q")
X2 = LPoly.var("X", 2)


def ctx(r, eps, c=0):
    return dbl.DoublingContext(r, eps, c)


def test_satake_params_parsing():
    s = dbl.satake_params(["0", "1/2", "-3/2"])
    assert s.to_json() == ["1", "q", "q^-3"]
    with pytest.raises(ValueError):
        dbl.satake_params(["1/3"])


def test_classify():
    assert dbl.classify(dbl.satake_params(["0"]), "+") == "unramified"
    assert dbl.classify(dbl.satake_params(["0", "1/2"]), "-") == "almost_unramified"
    assert dbl.classify(dbl.satake_params(["0", "1"]), "-") == "neither"


def test_lfactor_rank_one_half():
    assert dbl.l_factor(ctx(1, "-"), dbl.satake_params(["1/2"])).to_text() == "1/(1 - q^-1 X^2)"


def test_lfactor_trivial_plus():
    assert dbl.l_factor(ctx(1, "+"), dbl.satake_params(["0"])) == Factored.of(1 - X2, -2)


def test_lfactor_wrong_length():
    with pytest.raises(ValueError):
        dbl.l_factor(ctx(2, "-"), dbl.satake_params(["0"]))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_epsilon_minus(r):
    sigma = dbl.satake_params(["0"] * (r - 1) + ["1/2"])
    e = dbl.epsilon_factor(ctx(r, "-"), sigma)
    assert e == Factored(LPoly.monomial({"q": 1, "X": 2}, -1))
    assert shift_s(e.to_rfunc(), 0, Fraction(1, 2)) == RFunc.const(-1)


def test_epsilon_hypothesis():
    with pytest.raises(dbl.HypothesisError):
        dbl.epsilon_factor(ctx(1, "-"), dbl.satake_params(["0"]))
    assert dbl.epsilon_factor(ctx(1, "+"), dbl.satake_params(["0"])) == Factored(LPoly.const(1))


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_gk_ratio(r):
    ratio = dbl.gk_constant(ctx(r, "-"), "product") / dbl.gk_constant(ctx(r, "+"), "product")
    assert ratio == Factored((-q) ** (-r)) * dbl.zeta_F(2, 2 * r) / dbl.zeta_F(2, 0)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
@pytest.mark.parametrize("form", ["closed", "intermediate"])
def test_gk_forms_agree(r, form):
    assert dbl.gk_constant(ctx(r, "-"), form) == dbl.gk_constant(ctx(r, "-"), "product")


def test_gk_bad_form():
    with pytest.raises(ValueError):
        dbl.gk_constant(ctx(1, "-"), "bogus")


@pytest.mark.parametrize("r", [1, 2, 3])
def test_pairing_volumes(r):
    assert dbl.pairing_constant_from_volumes(r) == dbl.pairing_constant(r).to_rfunc()


def test_pairing_rank_one():
    assert dbl.pairing_constant(1).to_text() == "q^-1"


@pytest.mark.parametrize("r", [1, 2, 3])
def test_zeta_two_ways(r):
    sigma = dbl.satake_params(["sym"] * r)
    assert dbl.zeta_value_via_chain(ctx(r, "-"), sigma) == dbl.zeta_value(ctx(r, "-"), sigma)


def test_zeta_rank_one():
    z = dbl.zeta_value(ctx(1, "-"), dbl.satake_params(["1/2"]))
    assert z.to_rfunc() == parse("-(1 + q^-1 X^2)/(q^2 (1 - q^-2 X^2))")
    assert dbl.r1_displayed_zeta() != z


@pytest.mark.parametrize("r", [1, 2, 3])
def test_intertwining_chain_constant(r):
    chain = dbl.intertwining_chain(ctx(r, "-"))
    assert all(a == b for a, b in zip(chain, chain[1:]))


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("eps", ["+", "-"])
@pytest.mark.parametrize("c", [-1, 0, 2])
def test_intertwining_lemma(r, eps, c):
    lhs, rhs = dbl.intertwining_lemma_sides(ctx(r, eps, c))
    assert lhs == rhs


def test_weyl_invariance():
    a = dbl.satake_params(["1/2", "-1", "3/2"])
    b = dbl.SatakeParams(tuple(x.invert_monomial() for x in reversed(a.u)))
    for eps in "+-":
        assert dbl.l_factor(ctx(3, eps), a) == dbl.l_factor(ctx(3, eps), b)
        assert dbl.zeta_value(ctx(3, eps), a) == dbl.zeta_value(ctx(3, eps), b)


def test_theta_parameters_minus():
    V = HermitianSpaceDesc(2, "-")
    sigma = dbl.satake_params(["1"])
    pair = dbl.theta_parameters(2, V, sigma)
    assert dbl.same_params(pair.left, list(sigma) + [q])
    assert dbl.same_params(pair.right, list(sigma))
    assert dbl.classify(pair.left, "-") == "almost_unramified"


def test_same_params():
    assert dbl.same_params([q, LPoly.const(1)], [LPoly.const(1), q ** -1])
    assert not dbl.same_params([q], [q ** 2])


@pytest.mark.parametrize("r", [1, 2, 3])
def test_vanishing_orders(r):
    assert dbl.vanishing_order(r, HermitianSpaceDesc(r, "-")) == 0
    for eps in "+-":
        lo = -r if eps == "+" else -r + 1
        with pytest.raises(dbl.RangeError):
            dbl.vanishing_order_at(r, eps, lo - 1)


def test_context_rejects_rank_zero():
    with pytest.raises(ValueError):
        dbl.DoublingContext(0, "-")
