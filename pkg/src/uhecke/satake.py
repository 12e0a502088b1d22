"""Invariant Laurent polynomials and the theta homomorphisms between them.

A :class:`SymLaurent` of rank m is a Laurent polynomial in ``T1..Tm``
(coefficients may involve q) invariant under all permutations and
inversions of the T variables.  The two homomorphisms attached to a
hermitian space V specialize the surplus variables to powers of q.

>>> F = symmetrize(LPoly.var("T1"), 1)
>>> print(F)
T1^-1 + T1
>>> V = HermitianSpaceDesc(1, "-")
>>> print(theta_left(F, V, 1))
q^-1 + q
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Sequence

from .exactalg import LPoly, RFunc, as_rfunc, rfunc_substitute

__all__ = [
    "SymLaurent", "HermitianSpaceDesc", "TensorElement", "symmetrize", "orbit",
    "orbit_sum", "theta_left", "theta_right", "ideal_member", "eval_params",
    "t_var", "NotInvariantError",
]


class NotInvariantError(ValueError):
    pass


def t_var(i: int) -> str:
    return f"T{i}"


def _sgn(eps) -> int:
    if eps in ("+", 1):
        return 1
    if eps in ("-", -1):
        return -1
    raise ValueError(f"sign must be + or -, got {eps!r}")


@dataclass(frozen=True)
class HermitianSpaceDesc:
    """Half-dimension d and sign; the Witt index is d for + and d-1 for -."""

    d: int
    eps: str

    def __post_init__(self):
        object.__setattr__(self, "eps", "+" if _sgn(self.eps) == 1 else "-")
        if self.d < 1:
            raise ValueError("half-dimension must be at least 1")

    @property
    def e1(self) -> int:
        return _sgn(self.eps)

    @property
    def s(self) -> int:
        return self.d - (1 - self.e1) // 2

    def m(self, r: int) -> int:
        return min(r, self.s)


def orbit(exps: Sequence[int]) -> set[tuple[int, ...]]:
    """The W_m-orbit of an exponent vector."""
    out = set()
    for perm in set(permutations(exps)):
        for signs in product((1, -1), repeat=len(exps)):
            out.add(tuple(s * x for s, x in zip(signs, perm)))
    return out


def _orbit_key(exps: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted((abs(x) for x in exps), reverse=True))


def _split(p: LPoly, m: int):
    """Yield (T-exponents, other-variable monomial as dict, coeff) per term."""
    names = [t_var(i) for i in range(1, m + 1)]
    extra = [v for v in p.vars if v not in names]
    if any(v.startswith("T") and v[1:].isdigit() for v in extra):
        raise ValueError(f"{p} has T variables beyond rank {m}")
    pos = {v: i for i, v in enumerate(p.vars)}
    for e, c in p.terms.items():
        texp = tuple(e[pos[v]] if v in pos else 0 for v in names)
        rest = tuple((v, e[pos[v]]) for v in extra if e[pos[v]])
        yield texp, rest, c


def _join(m: int, texp: Sequence[int], rest, c) -> LPoly:
    exps = {t_var(i + 1): k for i, k in enumerate(texp) if k}
    exps.update(dict(rest))
    return LPoly.monomial(exps, c)


def orbit_sum(exps: Sequence[int]) -> LPoly:
    m = len(exps)
    return sum((_join(m, e, (), 1) for e in sorted(orbit(exps))), LPoly.const(0))


@dataclass(frozen=True)
class SymLaurent:
    rank: int
    poly: LPoly = field(default_factory=lambda: LPoly.const(0))

    def __post_init__(self):
        if not isinstance(self.poly, LPoly):
            object.__setattr__(self, "poly", as_rfunc(self.poly).num)
        terms = {}
        for texp, rest, c in _split(self.poly, self.rank):
            terms[(texp, rest)] = c
        for (texp, rest), c in terms.items():
            for img in _generator_images(texp):
                if terms.get((img, rest)) != c:
                    raise NotInvariantError(f"{self.poly} is not W_{self.rank}-invariant")

    @classmethod
    def const(cls, rank: int, c=1) -> "SymLaurent":
        return cls(rank, LPoly.const(c) if isinstance(c, (int, Fraction)) else c)

    def __add__(self, other: "SymLaurent") -> "SymLaurent":
        _same_rank(self, other)
        return SymLaurent(self.rank, self.poly + other.poly)

    def __sub__(self, other: "SymLaurent") -> "SymLaurent":
        _same_rank(self, other)
        return SymLaurent(self.rank, self.poly - other.poly)

    def __mul__(self, other):
        if isinstance(other, SymLaurent):
            _same_rank(self, other)
            return SymLaurent(self.rank, self.poly * other.poly)
        return SymLaurent(self.rank, self.poly * other)

    __rmul__ = __mul__

    def __neg__(self):
        return SymLaurent(self.rank, -self.poly)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def orbits(self) -> list[tuple[tuple[int, ...], LPoly]]:
        """Orbit representatives with their (q-dependent) coefficients."""
        coeff: dict[tuple[int, ...], LPoly] = {}
        for texp, rest, c in _split(self.poly, self.rank):
            if texp == _orbit_key(texp):
                mono = LPoly.monomial(dict(rest), c)
                coeff[texp] = coeff.get(texp, LPoly.const(0)) + mono
        return sorted(coeff.items())

    def to_json(self) -> list[dict]:
        return [{"orbit_representative": list(k), "coefficient": c.to_text()} for k, c in self.orbits()]

    def __str__(self):
        return self.poly.to_text()


def _same_rank(a: SymLaurent, b: SymLaurent):
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} vs {b.rank}")


def _generator_images(texp: tuple[int, ...]):
    if texp:
        yield (-texp[0],) + texp[1:]
    for i in range(len(texp) - 1):
        t = list(texp)
        t[i], t[i + 1] = t[i + 1], t[i]
        yield tuple(t)


def symmetrize(p: LPoly, m: int) -> SymLaurent:
    """Orbit sums weighted by the mean coefficient over each orbit.

    An invariant input is returned unchanged and a single monomial goes to
    its orbit sum.
    """
    groups: dict[tuple, list] = {}
    for texp, rest, c in _split(p, m):
        groups.setdefault((_orbit_key(texp), rest), []).append(c)
    out = LPoly.const(0)
    for (key, rest), cs in groups.items():
        mean = Fraction(sum(cs)) / len(cs)
        for e in orbit(key):
            out = out + _join(m, e, rest, mean)
    return SymLaurent(m, out)


def theta_left(F: SymLaurent, V: HermitianSpaceDesc, r: int, *, sign: int = -1) -> SymLaurent:
    """Invert T1..Tm and send T_{m+k} to q^{sign (2(k-1) + e1)}."""
    if F.rank != r:
        raise ValueError(f"expected rank {r}, got {F.rank}")
    m = V.m(r)
    sub = {t_var(i): RFunc.var(t_var(i), -1) for i in range(1, m + 1)}
    for k in range(1, r - m + 1):
        sub[t_var(m + k)] = RFunc.var("q", sign * (2 * (k - 1) + V.e1))
    return SymLaurent(m, rfunc_substitute(F.poly, sub).num)


def theta_right(G: SymLaurent, V: HermitianSpaceDesc, r: int, *, sign: int = -1) -> SymLaurent:
    """Send T_k to q^{sign (2k - e1)} for k <= s-m and rename the rest to T1..Tm."""
    s = V.s
    if G.rank != s:
        raise ValueError(f"expected rank {s}, got {G.rank}")
    m = V.m(r)
    sub = {}
    for k in range(1, s - m + 1):
        sub[t_var(k)] = RFunc.var("q", sign * (2 * k - V.e1))
    for j in range(1, m + 1):
        sub[t_var(s - m + j)] = RFunc.var(t_var(j))
    return SymLaurent(m, rfunc_substitute(G.poly, sub).num)


@dataclass(frozen=True)
class TensorElement:
    """A finite sum of pure tensors ``left (x) right``."""

    pairs: tuple[tuple[SymLaurent, SymLaurent], ...] = ()

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement(self.pairs + other.pairs)

    @classmethod
    def pure(cls, left: SymLaurent, right: SymLaurent) -> "TensorElement":
        return cls(((left, right),))


def ideal_member(t: TensorElement, V: HermitianSpaceDesc, r: int) -> bool:
    total = SymLaurent(V.m(r))
    for left, right in t.pairs:
        if left.rank != r or right.rank != V.s:
            raise ValueError("tensor ranks do not match (r, s)")
        total = total + theta_left(left, V, r) * theta_right(right, V, r)
    return total.is_zero()


def eval_params(F: SymLaurent, u: Sequence) -> RFunc:
    """Substitute T_i -> u_i."""
    if len(u) != F.rank:
        raise ValueError(f"expected {F.rank} parameters, got {len(u)}")
    vals = [as_rfunc(x) for x in u]
    if any(x.is_zero() for x in vals):
        raise ValueError("Satake parameters must be nonzero")
    return rfunc_substitute(F.poly, {t_var(i + 1): x for i, x in enumerate(vals)})
