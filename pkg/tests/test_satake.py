import pytest

from uhecke import doubling as dbl
from uhecke.exactalg import LPoly, parse, rfunc_eq
from uhecke.satake import (HermitianSpaceDesc, NotInvariantError, SymLaurent, TensorElement,
                           eval_params, ideal_member, orbit, orbit_sum, symmetrize, theta_left,
                           theta_right)


def P(text):
    return parse(text).num


def test_space_invariants():
    V = HermitianSpaceDesc(3, "-")
    assert (V.s, V.e1, V.m(5), V.m(1)) == (2, -1, 2, 1)
    assert HermitianSpaceDesc(2, "+").s == 2
    with pytest.raises(ValueError):
        HermitianSpaceDesc(0, "+")


def test_orbit_size():
    assert len(orbit((1, 0))) == 4
    assert len(orbit((1, 2))) == 8
    assert orbit_sum((0, 0)) == LPoly.const(1)


def test_symmetrize():
    assert symmetrize(LPoly.var("T1"), 1).poly == P("T1 + T1^-1")
    assert symmetrize(P("T1 T2"), 2).poly == P("T1 T2 + T1^-1 T2 + T1 T2^-1 + T1^-1 T2^-1")


def test_not_invariant():
    with pytest.raises(NotInvariantError):
        SymLaurent(2, LPoly.var("T1"))


def test_ring_ops():
    F = SymLaurent(1, orbit_sum((1,)))
    assert (F * F).poly == P("T1^2 + 2 + T1^-2")
    assert (F - F).is_zero()
    assert (F + SymLaurent.const(1, 2)).poly == P("T1 + T1^-1 + 2")


def test_theta_examples():
    F2 = SymLaurent(2, orbit_sum((1, 0)))
    F1 = SymLaurent(1, orbit_sum((1,)))
    assert theta_left(F2, HermitianSpaceDesc(1, "+"), 2).poly == P("T1 + T1^-1 + q + q^-1")
    assert theta_left(F1, HermitianSpaceDesc(1, "-"), 1).poly == P("q + q^-1")
    assert theta_right(F2, HermitianSpaceDesc(2, "+"), 1).poly == P("q + q^-1 + T1 + T1^-1")
    assert theta_right(F1, HermitianSpaceDesc(2, "-"), 0).poly == P("q^3 + q^-3")


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("d,eps", [(1, "+"), (2, "-"), (2, "+"), (3, "-")])
def test_theta_is_ring_map(r, d, eps):
    V = HermitianSpaceDesc(d, eps)
    a = symmetrize(P("T1 + 2"), r) if r == 1 else symmetrize(P("T1 T2 + 3 T1"), r)
    b = symmetrize(P("T1^2"), r)
    assert theta_left(a * b, V, r).poly == (theta_left(a, V, r) * theta_left(b, V, r)).poly


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("d,eps", [(1, "+"), (2, "-"), (2, "+"), (3, "-")])
def test_evaluation_compatibility(r, d, eps):
    V = HermitianSpaceDesc(d, eps)
    F = symmetrize(P("T1^2 + q T1") if r == 1 else P("T1 T2^-1 + T1"), r)
    toks = ["0", "1/2", "3/2", "-1"][: V.m(r)]
    sigma = dbl.satake_params(toks)
    pair = dbl.theta_parameters(r, V, sigma)
    assert rfunc_eq(eval_params(theta_left(F, V, r), list(sigma)), eval_params(F, list(pair.left)))
    G = symmetrize(P("T1 + T1^2") if V.s == 1 else P("T1 T2 + T1"), V.s)
    assert rfunc_eq(eval_params(theta_right(G, V, r), list(sigma)), eval_params(G, list(pair.right)))


def test_ideal_membership():
    V = HermitianSpaceDesc(2, "+")
    F = symmetrize(P("T1 T2 + T1"), 2)
    t = TensorElement(((F, SymLaurent.const(2)), (-SymLaurent.const(2), F)))
    assert ideal_member(t, V, 2)
    F1 = SymLaurent(1, orbit_sum((1,)))
    assert not ideal_member(TensorElement.pure(F1, SymLaurent.const(1)), HermitianSpaceDesc(1, "+"), 1)


def test_ideal_witness_from_theta():
    V = HermitianSpaceDesc(1, "+")
    F = symmetrize(P("T1 T2^2 + T1"), 2)
    G = SymLaurent(1, theta_left(F, V, 2).poly)
    t = TensorElement(((F, SymLaurent.const(1)), (-SymLaurent.const(2), G)))
    assert ideal_member(t, V, 2)
    t_bad = TensorElement(((F, SymLaurent.const(1)), (-SymLaurent.const(2), G + SymLaurent.const(1))))
    assert not ideal_member(t_bad, V, 2)
