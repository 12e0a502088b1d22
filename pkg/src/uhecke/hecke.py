"""The finite Iwahori-Hecke algebra of W_r with parameters (q, q^2).

Basis ``T_w``; the sign change C has quadratic parameter q and every
transposition A_i has parameter q^2, so ``T_s^2 = (p_s - 1) T_s + p_s``.

>>> from uhecke.weyl import generator
>>> w1 = generator(1, "C")
>>> print(t_mul(w1, w1))
q T[1] + (-1 + q) T[-1]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .exactalg import LPoly, RFunc, as_rfunc, solve_kernel
from .weyl import (SignedPermutation, enumerate_group, generator, generators,
                   length, parabolic_double_cosets, reduced_word)

__all__ = [
    "HeckeElement", "HeckeParams", "t_mul", "elem_mul", "kappa_generator",
    "kappa_value", "block_indicator", "eigenvector", "idempotent",
    "eigenspace", "expected_eigenvector", "HeckeStructureError",
]

Q = LPoly.var("q")


class HeckeStructureError(ArithmeticError):
    """An eigenspace had the wrong dimension, or a degenerate normalization."""


@dataclass(frozen=True)
class HeckeParams:
    c: LPoly = Q
    a: LPoly = Q ** 2

    def of(self, letter: str) -> LPoly:
        return self.c if letter == "C" else self.a


PARAMS = HeckeParams()


@dataclass(frozen=True)
class HeckeElement:
    rank: int
    coeffs: Mapping[SignedPermutation, RFunc] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, c in self.coeffs.items():
            if w.rank != self.rank:
                raise ValueError(f"{w} is not of rank {self.rank}")
            c = as_rfunc(c)
            if not c.is_zero():
                clean[w] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def basis(cls, w: SignedPermutation, coeff=1) -> "HeckeElement":
        return cls(w.rank, {w: as_rfunc(coeff)})

    @classmethod
    def one(cls, r: int) -> "HeckeElement":
        return cls.basis(SignedPermutation.identity(r))

    def coeff(self, w: SignedPermutation) -> RFunc:
        return self.coeffs.get(w, RFunc.const(0))

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        _check_rank(self, other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out[w] + c if w in out else c
        return HeckeElement(self.rank, out)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + other.scale(-1)

    def scale(self, c) -> "HeckeElement":
        c = as_rfunc(c)
        return HeckeElement(self.rank, {w: c * x for w, x in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return elem_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        if self.rank != other.rank:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeff(w) == other.coeff(w) for w in keys)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        out = ""
        for w in sorted(self.coeffs, key=lambda w: (length(w), w.images)):
            ct = self.coeffs[w].to_text()
            sign = "+"
            if ct.startswith("-") and " " not in ct:
                sign, ct = "-", ct[1:]
            body = f"T{w}" if ct == "1" else (f"({ct}) T{w}" if " " in ct else f"{ct} T{w}")
            if not out:
                out = body if sign == "+" else f"-{body}"
            else:
                out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_text()


def _check_rank(a: HeckeElement, b: HeckeElement):
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} vs {b.rank}")


def _left_gen(letter: str, elem: dict[SignedPermutation, RFunc], r: int) -> dict[SignedPermutation, RFunc]:
    """Multiply ``T_s * elem`` for a single generator s."""
    s = generator(r, letter)
    p = PARAMS.of(letter)
    out: dict[SignedPermutation, RFunc] = {}

    def add(w, c):
        out[w] = out[w] + c if w in out else c

    for w, c in elem.items():
        sw = s * w
        if length(sw) > length(w):
            add(sw, c)
        else:
            add(sw, c * p)
            add(w, c * (p - 1))
    return out


@lru_cache(maxsize=None)
def t_mul(u: SignedPermutation, v: SignedPermutation) -> HeckeElement:
    """``T_u T_v`` in the T-basis, applying a reduced word of u from the right."""
    if u.rank != v.rank:
        raise ValueError(f"rank mismatch: {u.rank} vs {v.rank}")
    elem = {v: RFunc.const(1)}
    for letter in reversed(reduced_word(u)):
        elem = _left_gen(letter, elem, u.rank)
    return HeckeElement(u.rank, elem)


def elem_mul(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    """Bilinear product; each ``T_u * b`` is built by left-applying a reduced word of u."""
    _check_rank(a, b)
    out: dict[SignedPermutation, RFunc] = {}
    for u, cu in a.coeffs.items():
        elem = dict(b.coeffs)
        for letter in reversed(reduced_word(u)):
            elem = _left_gen(letter, elem, a.rank)
        for w, x in elem.items():
            y = cu * x
            out[w] = out[w] + y if w in out else y
    return HeckeElement(a.rank, out)


def _sign(eps) -> int:
    if eps in ("+", 1, "+1"):
        return 1
    if eps in ("-", -1, "-1"):
        return -1
    raise ValueError(f"sign must be + or -, got {eps!r}")


def kappa_generator(eps, letter: str) -> LPoly:
    """q or -1 on C (for + and - respectively), q^2 on each A_i."""
    if letter == "C":
        return Q if _sign(eps) == 1 else LPoly.const(-1)
    return Q ** 2


def _kappa_basis(eps, w: SignedPermutation) -> LPoly:
    out = LPoly.const(1)
    for letter in reduced_word(w):
        out = out * kappa_generator(eps, letter)
    return out


def kappa_value(eps, a: HeckeElement) -> RFunc:
    total = RFunc.const(0)
    for w, c in a.coeffs.items():
        total = total + c * _kappa_basis(eps, w)
    return total


def block_indicator(r: int, i: int) -> HeckeElement:
    if not 0 <= i <= r:
        raise ValueError(f"block index {i} outside 0..{r}")
    block = parabolic_double_cosets(r)[i]
    return HeckeElement(r, {w: RFunc.const(1) for w in block})


def expected_eigenvector(r: int, eps) -> HeckeElement:
    """Blocks weighted by (-q)^{-i} for the minus sign and by 1 for plus."""
    out = HeckeElement(r)
    for i in range(r + 1):
        weight = RFunc.const(1) if _sign(eps) == 1 else RFunc(LPoly.const(-1) * Q) ** (-i)
        out = out + block_indicator(r, i).scale(weight)
    return out


def eigenspace(r: int, eps) -> list[HeckeElement]:
    """Basis of ``{f : f T_s = kappa(T_s) f for every generator s}``."""
    elems = [w for w, _ in enumerate_group(r)]
    index = {w: i for i, w in enumerate(elems)}
    n = len(elems)
    rows = []
    for letter in generators(r):
        s = generator(r, letter)
        k = kappa_generator(eps, letter)
        mat = [[LPoly.const(0)] * n for _ in range(n)]  # mat[x][w]
        for j, w in enumerate(elems):
            for x, c in t_mul(w, s).coeffs.items():
                mat[index[x]][j] = mat[index[x]][j] + c.num
            mat[j][j] = mat[j][j] - k
        rows.extend(row for row in mat if any(not e.is_zero() for e in row))
    basis = solve_kernel(rows)
    return [HeckeElement(r, dict(zip(elems, v))) for v in basis]


@lru_cache(maxsize=None)
def eigenvector(r: int, eps) -> HeckeElement:
    """The kappa-eigenvector with T_e coefficient 1.

    Raises HeckeStructureError unless the eigenspace is a line and its
    generator is the expected block combination.
    """
    space = eigenspace(r, eps)
    if len(space) != 1:
        raise HeckeStructureError(f"eigenspace of dimension {len(space)} for r={r}, eps={eps}")
    f = space[0]
    e = SignedPermutation.identity(r)
    lead = f.coeff(e)
    if lead.is_zero():
        raise HeckeStructureError("eigenvector has zero identity coefficient")
    f = f.scale(lead.inverse())
    if f != expected_eigenvector(r, eps):
        raise HeckeStructureError(f"eigenvector does not match the block formula (r={r}, eps={eps})")
    return f


def idempotent(r: int, eps) -> HeckeElement:
    f = eigenvector(r, eps)
    k = kappa_value(eps, f)
    if k.is_zero():
        raise HeckeStructureError("kappa vanishes on the eigenvector")
    return f.scale(k.inverse())
