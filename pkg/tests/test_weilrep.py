from fractions import Fraction

import numpy as np
import pytest

from uhecke.weilrep import (FiniteWeilModel, QuotientFunction, ResidueField, ResidueLattice,
                            borel_invariants, calibrate_finite_weil, finite_fourier, gr_is_zero,
                            gr_to_cyc, verify_generator_lemma)


def test_group_ring_zero_test():
    # 1 + z + ... + z^{p-1} vanishes in Q(zeta_p)
    assert gr_is_zero(np.ones(3, dtype=np.int64), 3)
    v = np.zeros(9, dtype=np.int64)
    v[[0, 3, 6]] = 1
    assert gr_is_zero(v, 9)
    v[0] = 2
    assert not gr_is_zero(v, 9)
    assert gr_to_cyc([1, 1, 1], 3).is_zero()
    assert not gr_to_cyc([1, 0, 0], 3).is_zero()


def test_residue_field_tables():
    F = ResidueField(5)
    assert F.size == 25
    for x in F.units():
        assert F.mul_table[x, F.inv[x]] == 1
        assert F.norm[F.conj[x]] == F.norm[x]


def test_bad_prime():
    with pytest.raises(ValueError):
        ResidueField(4)


@pytest.mark.parametrize("eps", ["-", "+"])
def test_window_and_volume(eps):
    L = ResidueLattice(3, eps)
    assert L.check_window()
    assert L.vol_cell() == (Fraction(1, 243) if eps == "-" else Fraction(1, 81))


def _delta0(L):
    z = np.zeros(L.m, bool)
    z[0] = True
    return QuotientFunction.from_indicator(L, z, z)


@pytest.mark.parametrize("eps", ["-", "+"])
def test_fourier_of_delta(eps):
    L = ResidueLattice(3, eps)
    ones = np.ones(L.m, bool)
    const = QuotientFunction.from_indicator(L, ones, ones)
    const.scale = L.vol_cell()
    assert finite_fourier(_delta0(L)).equals(const)


@pytest.mark.parametrize("eps", ["-", "+"])
def test_fourier_inversion_on_dual(eps):
    L = ResidueLattice(3, eps)
    f = QuotientFunction.from_indicator(L, L.in_dual(L.gram[0]), L.in_dual(L.gram[1]))
    assert finite_fourier(finite_fourier(f)).equals(f.negate_argument())


@pytest.mark.parametrize("eps", ["-", "+"])
def test_fourier_unitary(eps):
    L = ResidueLattice(3, eps)
    f = QuotientFunction.from_indicator(L, L.in_lattice(), L.in_lattice())
    Ff = finite_fourier(f)
    a, b = f.inner(f), Ff.inner(Ff)
    assert gr_to_cyc(a[0], L.n, a[1]) == gr_to_cyc(b[0], L.n, b[1])


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("eps", ["-", "+"])
def test_generator_lemma(p, eps):
    rep = verify_generator_lemma(p, 1, eps)
    assert rep["pass"], rep
    assert all(rep["subchecks"].values())


def test_generator_lemma_rank_bound():
    with pytest.raises(ValueError):
        verify_generator_lemma(3, 2)


@pytest.fixture(scope="module")
def model3():
    return calibrate_finite_weil(3)


def test_calibration_p3(model3):
    cal = model3.calibration
    assert (cal["chi"], cal["gamma"]) == ("trivial", "1")
    assert cal["group_order"] == cal["expected_order"] == 3 * 8 * 4
    assert cal["all_unitary"] and cal["distinct"] and cal["identity_ok"] and cal["borel_pairs_ok"]
    verdicts = {(c["chi"], c["gamma"]): c["ok"] for c in cal["candidates"]}
    assert verdicts[("trivial", "1")] and verdicts[("quadratic", "1")]
    assert not verdicts[("trivial", "-1")] and not verdicts[("quadratic", "-1")]


def test_wrong_gamma_is_not_a_homomorphism(model3):
    rec = next(c for c in model3.calibration["candidates"] if c["chi"] == "trivial" and c["gamma"] == "-1")
    g, h = (tuple(x) for x in rec["first_violation"])
    assert not FiniteWeilModel(3, gamma=-1).check_pair(g, h)
    assert model3.check_pair(g, h)


def test_borel_invariants_p3(model3):
    rep = borel_invariants(model3)
    assert rep["pass"]
    assert rep["dimension"] == 1 and rep["eigenvalue"] == "-1"


def test_calibration_and_invariants_p5():
    m = calibrate_finite_weil(5)
    assert m.calibration["chi"] == "trivial" and m.calibration["borel_pairs_ok"]
    assert borel_invariants(m)["pass"]
