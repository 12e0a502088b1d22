"""Doubling L-factors, epsilon factors, zeta values and intertwining constants.

Everything is a rational function of ``q``, ``X = q^{-s}`` and the Satake
parameters ``u_i = q^{2 sigma_i}``.  Shifts in s are substitutions in X:
``s -> -s`` is ``X -> 1/X`` and ``s -> s + 1/2`` is ``X^2 -> q^{-1} X^2``.
Results are :class:`~uhecke.exactalg.Factored` products, so that identical
factors cancel on the nose and printed answers stay small.

>>> ctx = DoublingContext(1, "-")
>>> print(l_factor(ctx, satake_params(["1/2"])))
1/(1 - q^-1 X^2)
>>> print(epsilon_factor(ctx, satake_params(["1/2"])))
-q X^2
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactalg import Factored, LPoly, RFunc, as_rfunc, parse, rfunc_eq
from .satake import HermitianSpaceDesc

__all__ = [
    "DoublingContext", "SatakeParams", "ThetaParamPair", "satake_params",
    "zeta_F", "zeta_E", "a_factor", "b_factor", "c_factor", "abc", "l_factor",
    "zeta_value", "zeta_value_via_chain", "pairing_constant",
    "pairing_constant_from_volumes", "gk_constant", "intertwining_constant",
    "intertwining_chain", "mdag_scalar", "intertwining_lemma_sides",
    "epsilon_factor", "classify", "theta_parameters", "same_params",
    "vanishing_order", "vanishing_order_at", "r1_displayed_zeta",
    "HypothesisError", "RangeError",
]


class HypothesisError(ValueError):
    """An input violates a hypothesis of the formula being evaluated."""


class RangeError(ValueError):
    """A point lies outside the range where a statement is asserted."""


def _sgn(eps) -> int:
    if eps in ("+", 1):
        return 1
    if eps in ("-", -1):
        return -1
    raise ValueError(f"sign must be + or -, got {eps!r}")


@dataclass(frozen=True)
class DoublingContext:
    r: int
    eps: str
    c: int = 0

    def __post_init__(self):
        object.__setattr__(self, "eps", "+" if _sgn(self.eps) == 1 else "-")
        if self.r < 1:
            raise ValueError("rank must be at least 1")

    @property
    def e1(self) -> int:
        return _sgn(self.eps)


@dataclass(frozen=True)
class SatakeParams:
    """Exponentiated parameters ``u_i``, each a monomial in q and symbols."""

    u: tuple[LPoly, ...]

    def __post_init__(self):
        clean = []
        for x in self.u:
            f = as_rfunc(x)
            if not (f.den.is_one() and f.num.is_monomial()):
                raise ValueError(f"Satake parameter {f} must be a nonzero monomial")
            clean.append(f.num)
        object.__setattr__(self, "u", tuple(clean))

    def __len__(self):
        return len(self.u)

    def __iter__(self):
        return iter(self.u)

    def inverse(self) -> "SatakeParams":
        return SatakeParams(tuple(x.invert_monomial() for x in self.u))

    def to_json(self) -> list[str]:
        return [x.to_text() for x in self.u]


def satake_params(tokens: Iterable[str]) -> SatakeParams:
    """Parse sigma entries.

    ``"1/2"`` or ``"-3/2"`` is a half-integer sigma (u = q^{2 sigma});
    ``"sym"`` is a fresh symbol u1, u2, ...; anything else is read as a
    monomial expression such as ``"q^2"`` or ``"u3"``.
    """
    out = []
    fresh = 0
    for tok in tokens:
        tok = tok.strip()
        if tok == "sym":
            fresh += 1
            out.append(LPoly.var(f"u{fresh}"))
            continue
        try:
            sigma = Fraction(tok)
        except ValueError:
            out.append(parse(tok))
            continue
        if (2 * sigma).denominator != 1:
            raise ValueError(f"sigma entry {tok} is not a half-integer")
        out.append(LPoly.var("q", int(2 * sigma)))
    return SatakeParams(tuple(out))


@dataclass(frozen=True)
class ThetaParamPair:
    left: SatakeParams
    right: SatakeParams


# -- local zeta factors --------------------------------------------------------


def _qX(k: int, x: int, coeff=1) -> LPoly:
    return LPoly.monomial({"q": k, "X": x}, coeff)


def zeta_F(a: int, k: int) -> Factored:
    """``zeta_F(a s + k) = 1/(1 - q^{-k} X^a)``."""
    return Factored.of(1 - _qX(-k, a), -1)


def zeta_E(a: int, k: int) -> Factored:
    """``zeta_E(a s + k) = 1/(1 - q^{-2k} X^{2a})``."""
    return Factored.of(1 - _qX(-2 * k, 2 * a), -1)


def _prod(fs: Iterable[Factored]) -> Factored:
    out = Factored(1)
    for f in fs:
        out = out * f
    return out


def _mono(k: int = 0, x: int = 0, coeff=1) -> Factored:
    return Factored(_qX(k, x, coeff))


# -- the building blocks ------------------------------------------------------


def a_factor(r: int) -> Factored:
    return _prod(Factored.of(1 - _qX(i - 1, 2, (-1) ** i), -1) for i in range(1, 2 * r + 1))


def b_factor(r: int) -> Factored:
    return _prod(Factored.of(1 - _qX(-i, 2, (-1) ** i), -1) for i in range(1, 2 * r + 1))


def c_factor(r: int, eps) -> Factored:
    if _sgn(eps) == 1:
        return Factored(1)
    q = LPoly.var("q")
    return (Factored.of(1 + q) / (_mono(1 + r, 0, (-1) ** r) * Factored.of(1 + q ** (2 * r - 1))
                                  * Factored.of(1 - _qX(-2 * r, 2))))


def abc(ctx: DoublingContext, which: str) -> Factored:
    if which == "a":
        return a_factor(ctx.r)
    if which == "b":
        return b_factor(ctx.r)
    if which == "c":
        return c_factor(ctx.r, ctx.eps)
    raise ValueError(f"unknown factor {which!r}")


def _check_rank(ctx: DoublingContext, sigma: SatakeParams):
    if len(sigma) != ctx.r:
        raise ValueError(f"expected {ctx.r} Satake parameters, got {len(sigma)}")


def l_factor(ctx: DoublingContext, sigma: SatakeParams) -> Factored:
    _check_rank(ctx, sigma)
    X2 = LPoly.var("X", 2)
    out = Factored(1)
    for u in sigma:
        out = out / (Factored.of(1 - u * X2) * Factored.of(1 - u.invert_monomial() * X2))
    if ctx.e1 == -1:
        out = out * Factored.of(1 - _qX(1, 2))
    return out


def _half_shift(f: Factored) -> Factored:
    """s -> s + 1/2."""
    return f.shift_s(1, Fraction(1, 2))


def _neg(f: Factored) -> Factored:
    """s -> -s."""
    return f.shift_s(-1, 0)


def zeta_value(ctx: DoublingContext, sigma: SatakeParams) -> Factored:
    """``c(s) L(s + 1/2) / b(s)``."""
    return c_factor(ctx.r, ctx.eps) * _half_shift(l_factor(ctx, sigma)) / b_factor(ctx.r)


def pairing_constant(r: int) -> Factored:
    """``(1 + q) / (q (1 + q^{2r-1}))``."""
    q = LPoly.var("q")
    return Factored.of(1 + q) / (Factored.of(q) * Factored.of(1 + q ** (2 * r - 1)))


def pairing_constant_from_volumes(r: int) -> RFunc:
    """``sum_i q^{-2i} vol(B_i)`` with vol(K) = 1 and vol(IwI) proportional to its index."""
    from .hecke import _kappa_basis
    from .weyl import parabolic_double_cosets

    blocks = parabolic_double_cosets(r)
    vols = [sum((_kappa_basis("+", w) for w in b), LPoly.const(0)) for b in blocks]
    total = sum(vols, LPoly.const(0))
    num = sum((LPoly.var("q", -2 * i) * v for i, v in enumerate(vols)), LPoly.const(0))
    return RFunc(num, total)


def gk_constant(ctx: DoublingContext, form: str = "product") -> Factored:
    """Gindikin-Karpelevich constants for the distinguished sections.

    ``form`` is ``product`` (the raw product), ``intermediate`` or
    ``closed``; for the plus sign all three are the same single product.
    """
    r = ctx.r
    if ctx.e1 == 1:
        return (_prod(zeta_E(2, 2 * i) / zeta_E(2, r + i) for i in range(1, r + 1))
                * _prod(zeta_F(2, 2 * i - 1) / zeta_F(2, 2 * i) for i in range(1, r + 1)))
    return _minus_gk(r, r, form)


def _minus_gk(n: int, r: int, form: str) -> Factored:
    """The minus-sign chain with n factors in the i-products and offset 2r."""
    pairs = [(i, j) for j in range(1, n + 1) for i in range(1, j)]
    if form == "product":
        dbl = _prod(Factored.of(1 - _qX(-2 * (2 * r - i - j + 2), 4))
                    / Factored.of(1 - _qX(-2 * (2 * r - i - j + 1), 4)) for i, j in pairs)
        single = _prod(Factored.of(_qX(2 * i - 2 * r, 2) - 1)
                       / (Factored.of(LPoly.var("q")) * Factored.of(1 - _qX(2 * i - 2 * r - 1, 2)))
                       for i in range(1, n + 1))
        return dbl * single
    if form == "intermediate":
        dbl = _prod(zeta_E(2, 2 * r - i - j + 1) / zeta_E(2, 2 * r - i - j + 2) for i, j in pairs)
        single = _prod(zeta_F(2, 2 * r - 2 * i + 1) / zeta_F(2, 2 * r - 2 * i) for i in range(1, n + 1))
        return _mono(0, 0, (-1) ** n) * _mono(-n) * dbl * single
    if form == "closed" and n == r:
        return (_mono(-r, 0, (-1) ** r)
                * _prod(zeta_E(2, 2 * i) / zeta_E(2, r + i) for i in range(1, r + 1))
                * _prod(zeta_F(2, 2 * i - 1) / zeta_F(2, 2 * i - 2) for i in range(1, r + 1)))
    raise ValueError(f"unknown form {form!r}")


def zeta_value_via_chain(ctx: DoublingContext, sigma: SatakeParams) -> Factored:
    """The minus-sign zeta value as C * (C^-/C^+) * Z^+, with raw GK products."""
    if ctx.e1 == 1:
        return zeta_value(ctx, sigma)
    plus = DoublingContext(ctx.r, "+", ctx.c)
    ratio = gk_constant(ctx, "product") / gk_constant(plus, "product")
    return pairing_constant(ctx.r) * ratio * zeta_value(plus, sigma)


def r1_displayed_zeta() -> Factored:
    """The rank-one value as displayed alongside the L-factor argument.

    Its denominator ``1 - q^{-1-2s}`` differs from the one obtained by
    assembling the closed form; this is reported, not corrected.
    """
    return Factored.of(1 + _qX(-1, 2)) / (_mono(2, 0, -1) * Factored.of(1 - _qX(-1, 2)))


def intertwining_chain(ctx: DoublingContext) -> list[Factored]:
    """The successive expressions for the scalar of M(s) on the minus section."""
    r = ctx.r
    n = 2 * r
    a, b, c = a_factor(r), b_factor(r), c_factor(r, "-")
    pairs = [(i, j) for j in range(1, n + 1) for i in range(1, j)]
    l1 = _minus_gk(n, r, "product")
    single = _prod(zeta_F(2, 2 * r - 2 * i + 1) / zeta_F(2, 2 * r - 2 * i) for i in range(1, n + 1))
    l2 = (_mono(-n) * _prod(zeta_E(2, 2 * r - i - j + 1) / zeta_E(2, 2 * r - i - j + 2) for i, j in pairs)
          * single)
    l3 = (_mono(-n) * _prod(zeta_E(2, 2 * r - 2 * j + 2) / zeta_E(2, 2 * r - j + 1) for j in range(1, n + 1))
          * single)
    l4 = _mono(-n) * (a / b) * zeta_F(2, 2 * r) / zeta_F(2, -2 * r)
    l5 = _mono(0, 2, -1) * (a / b) * zeta_F(2, 2 * r) / zeta_F(-2, 2 * r)
    l6 = _mono(0, 2, -1) * (a / b) * c / _neg(c)
    return [l1, l2, l3, l4, l5, l6]


def intertwining_constant(ctx: DoublingContext, form: str = "closed") -> Factored:
    """The scalar of M(s) on the distinguished section.

    For the plus sign this is ``a(s)/b(s)``.  For the minus sign, ``raw`` is
    the double product and ``closed`` is ``-q^{-2s} (a/b) c(s)/c(-s)``; both
    are computed and compared before returning.
    """
    if ctx.e1 == 1:
        return a_factor(ctx.r) / b_factor(ctx.r)
    chain = intertwining_chain(ctx)
    raw, closed = chain[0], chain[-1]
    if raw != closed:
        raise ArithmeticError(f"raw and closed intertwining constants differ at r={ctx.r}")
    return raw if form == "raw" else closed


def mdag_scalar(ctx: DoublingContext) -> Factored:
    """``q^{4crs} b(-s)/a(s)`` times the M(s) scalar."""
    r = ctx.r
    return _mono(0, -4 * ctx.c * r) * _neg(b_factor(r)) / a_factor(r) * intertwining_constant(ctx)


def intertwining_lemma_sides(ctx: DoublingContext) -> tuple[Factored, Factored]:
    r, e1 = ctx.r, ctx.e1
    b, c = b_factor(r), c_factor(r, ctx.eps)
    lhs = b / c * mdag_scalar(ctx)
    rhs = _mono(0, -(4 * ctx.c * r + e1 - 1), e1) * _neg(b) / _neg(c)
    return lhs, rhs


# -- epsilon factors and classification --------------------------------------


def _contains_half(sigma: SatakeParams) -> bool:
    q = LPoly.var("q")
    return any(u == q or u == q.invert_monomial() for u in sigma)


def epsilon_factor(ctx: DoublingContext, sigma: SatakeParams) -> Factored:
    """``q^{2cr(2s-1)}`` for plus; ``-q^{(2cr-1)(2s-1)}`` for minus."""
    _check_rank(ctx, sigma)
    k = 2 * ctx.c * ctx.r
    if ctx.e1 == 1:
        return _mono(-k, -2 * k)
    if not _contains_half(sigma):
        raise HypothesisError("minus sign needs some sigma_i = +-1/2 (u_i = q or q^-1)")
    return _mono(-(k - 1), -2 * (k - 1), -1)


def classify(sigma: SatakeParams, eps) -> str:
    if _sgn(eps) == 1:
        return "unramified"
    return "almost_unramified" if _contains_half(sigma) else "neither"


# -- theta parameters ----------------------------------------------------------


def theta_parameters(r: int, V: HermitianSpaceDesc, sigma: SatakeParams) -> ThetaParamPair:
    s, m, e1 = V.s, V.m(r), V.e1
    if len(sigma) != m:
        raise ValueError(f"expected {m} parameters, got {len(sigma)}")
    q = lambda k: LPoly.var("q", k)  # noqa: E731
    left = [u.invert_monomial() for u in sigma]
    left += [q(-(2 * (k - 1) + e1)) for k in range(1, r - m + 1)]
    right = [q(-(2 * k - e1)) for k in range(1, s - m + 1)] + list(sigma)
    return ThetaParamPair(SatakeParams(tuple(left)), SatakeParams(tuple(right)))


def same_params(a: Sequence, b: Sequence) -> bool:
    """Equal as multisets up to entrywise inversion."""
    rest = [as_rfunc(x) for x in b]
    if len(rest) != len(a):
        return False
    for x in a:
        x = as_rfunc(x)
        for i, y in enumerate(rest):
            if rfunc_eq(x, y) or rfunc_eq(x, y.inverse()):
                del rest[i]
                break
        else:
            return False
    return True


# -- order of vanishing ---------------------------------------------------------


def _y_poly(p: LPoly) -> LPoly:
    """Rewrite a polynomial in X^2 as one in Y."""
    if "X" not in p.vars:
        return p
    i = p.vars.index("X")
    out = LPoly.const(0)
    for e, c in p.terms.items():
        if e[i] % 2:
            raise ValueError("odd power of X")
        d = dict(zip(p.vars, e))
        d["Y"] = d.pop("X") // 2
        out = out + LPoly.monomial(d, c)
    return out


def _root_multiplicity(p: LPoly, root: LPoly) -> int:
    lin = LPoly.var("Y") - root
    k = 0
    while not p.is_zero() and p.substitute({"Y": root}).is_zero():
        nxt = p.divexact(lin)
        if nxt is None:
            raise ArithmeticError("root found but division failed")
        p, k = nxt, k + 1
    return k


def vanishing_order_at(r: int, eps, s0: int) -> int:
    """Order of vanishing of c(s)/b(s) at s = s0 (an integer)."""
    lo = -r if _sgn(eps) == 1 else -r + 1
    if s0 < lo:
        raise RangeError(f"s0={s0} below the admissible bound {lo} for r={r}, eps={eps}")
    f = (c_factor(r, eps) / b_factor(r)).to_rfunc()
    root = LPoly.var("q", -2 * s0)
    num = _y_poly(f.num * f.num.monomial_content().invert_monomial())
    den = _y_poly(f.den * f.den.monomial_content().invert_monomial())
    return _root_multiplicity(num, root) - _root_multiplicity(den, root)


def vanishing_order(r: int, V: HermitianSpaceDesc) -> int:
    """Order at s0 = d - r."""
    return vanishing_order_at(r, V.eps, V.d - r)
