"""Exact scalar arithmetic.

Everything downstream is built from four value types:

* ``Fraction`` (stdlib) for rational coefficients,
* :class:`LPoly`, multivariate Laurent polynomials over the rationals,
* :class:`RFunc`, quotients of two ``LPoly`` compared by cross-multiplication,
* :class:`CycScalar`, elements of a prime-power cyclotomic field.

:class:`Factored` is a convenience product type: a unit times powers of
normalized factors, so that identical factors cancel without any GCD.

All values are immutable; every operation returns a new object.
"""

from __future__ import annotations

import re
from collections import Counter
from fractions import Fraction
from functools import reduce
from itertools import chain
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "AlignmentError", "PoleError", "LPoly", "RFunc", "Factored", "CycScalar",
    "lpoly_arith", "rfunc_eq", "rfunc_substitute", "solve_kernel", "parse",
    "shift_s", "as_rfunc",
]

Exps = tuple[int, ...]
Scalar = Union[int, Fraction]


class AlignmentError(ValueError):
    """Raised by strict arithmetic on LPolys with different variable lists."""


class PoleError(ZeroDivisionError):
    """A substitution or division produced a zero denominator."""


# The print order puts q first; everything else follows ASCII order.
def _print_key(name: str) -> tuple[int, str]:
    return (0 if name == "q" else 1, name)


def _fmt_coeff(c: Scalar) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _norm_coeff(c) -> Scalar:
    # integral values are kept as int: much faster than Fraction
    if type(c) is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class LPoly:
    """A Laurent polynomial with rational coefficients.

    ``vars`` is the sorted tuple of variables that actually occur, and
    ``terms`` maps exponent tuples (one slot per variable) to nonzero
    rational coefficients (``int`` when integral, else ``Fraction``).  The representation is canonical, so ``==``
    and ``hash`` are structural.

    >>> q, X = LPoly.var("q"), LPoly.var("X")
    >>> print((q + 1) * (q - 1))
    -1 + q^2
    >>> print(X**2 * X**-2)
    1
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str] = (), terms: Mapping[Exps, Scalar] | None = None):
        vars = tuple(vars)
        if list(vars) != sorted(set(vars)):
            raise ValueError(f"variables must be sorted and distinct: {vars}")
        clean: dict[Exps, Scalar] = {}
        for e, c in (terms or {}).items():
            if len(e) != len(vars):
                raise ValueError(f"exponent {e} does not match variables {vars}")
            if c:
                clean[tuple(e)] = _norm_coeff(c)
        self._set(vars, clean)

    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict[Exps, Scalar]) -> "LPoly":
        """Trusted constructor: sorted vars, tuple keys of the right length."""
        obj = object.__new__(cls)
        obj._set(vars, {e: _norm_coeff(c) for e, c in terms.items() if c})
        return obj

    def _set(self, vars, clean):
        # drop variables that no longer occur
        if vars:
            used = [i for i in range(len(vars)) if any(e[i] for e in clean)]
            if len(used) != len(vars):
                vars = tuple(vars[i] for i in used)
                clean = {tuple(e[i] for i in used): c for e, c in clean.items()}
        self.vars = vars
        self.terms = clean
        self._hash = None

    # -- constructors --------------------------------------------------

    @classmethod
    def const(cls, c: Scalar) -> "LPoly":
        return cls((), {(): c})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "LPoly":
        return cls((name,), {(power,): 1})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Scalar = 1) -> "LPoly":
        names = tuple(sorted(exps))
        return cls(names, {tuple(exps[v] for v in names): coeff})

    @classmethod
    def parse(cls, text: str) -> "LPoly":
        f = parse(text)
        if not f.den.is_one():
            raise ValueError(f"not a Laurent polynomial: {text!r}")
        return f.num

    # -- predicates ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(): 1} and not self.vars

    def is_monomial(self) -> bool:
        """True for a single nonzero term; these are the units of the ring."""
        return len(self.terms) == 1

    def is_const(self) -> bool:
        return not self.vars

    def const_value(self) -> Fraction:
        if self.vars:
            raise ValueError(f"{self} is not constant")
        return Fraction(self.terms.get((), 0))

    def degree(self, var: str) -> tuple[int, int]:
        """Return (min, max) exponent of ``var``; (0, 0) if absent."""
        if var not in self.vars:
            return (0, 0)
        i = self.vars.index(var)
        ex = [e[i] for e in self.terms]
        return (min(ex), max(ex))

    # -- alignment -------------------------------------------------------

    def embed(self, vars: Sequence[str]) -> dict[Exps, Fraction]:
        """Terms re-indexed over a superset ``vars`` of ``self.vars``."""
        vars = tuple(vars)
        if vars == self.vars:
            return self.terms
        pos = [vars.index(v) for v in self.vars]
        n = len(vars)
        out = {}
        for e, c in self.terms.items():
            full = [0] * n
            for i, k in zip(pos, e):
                full[i] = k
            out[tuple(full)] = c
        return out

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        vars = _union(self.vars, other.vars)
        out = dict(self.embed(vars))
        for e, c in other.embed(vars).items():
            out[e] = out.get(e, 0) + c
        return LPoly._raw(vars, out)

    __radd__ = __add__

    def __neg__(self):
        return LPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        vars = _union(self.vars, other.vars)
        a, b = self.embed(vars), other.embed(vars)
        if len(a) < len(b):
            a, b = b, a
        out: dict[Exps, Fraction] = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return LPoly._raw(vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.invert_monomial() ** (-k)
        result = LPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def invert_monomial(self) -> "LPoly":
        """Inverse of a unit (single-term) Laurent polynomial."""
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not a unit in the Laurent ring")
        (e, c), = self.terms.items()
        return LPoly(self.vars, {tuple(-k for k in e): Fraction(1) / c})

    def scale(self, c: Scalar) -> "LPoly":
        return LPoly(self.vars, {e: c * v for e, v in self.terms.items()})

    def monomial_content(self) -> "LPoly":
        """The largest monomial dividing every term (in the polynomial sense)."""
        if not self.terms:
            return LPoly.const(1)
        mins = tuple(min(col) for col in zip(*self.terms)) if self.vars else ()
        return LPoly(self.vars, {mins: 1})

    def divexact(self, other: "LPoly") -> "LPoly | None":
        """Exact quotient ``self / other`` in the Laurent ring, or None."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero LPoly")
        if self.is_zero():
            return self
        if other.is_monomial():
            return self * other.invert_monomial()
        vars = _union(self.vars, other.vars)
        a = LPoly(vars, self.embed(vars))
        b = LPoly(vars, other.embed(vars))
        sa, sb = a.monomial_content(), b.monomial_content()
        # stripping may prune variables, so re-embed both sides
        a_terms = (a * sa.invert_monomial()).embed(vars)
        b_terms = (b * sb.invert_monomial()).embed(vars)
        # polynomial long division in lex order
        lead_b = max(b_terms)
        cb = b_terms[lead_b]
        rem = dict(a_terms)
        quot: dict[Exps, Fraction] = {}
        while rem:
            lead = max(rem)
            shift = tuple(x - y for x, y in zip(lead, lead_b))
            if any(k < 0 for k in shift):
                return None
            c = Fraction(rem[lead]) / cb
            quot[shift] = quot.get(shift, 0) + c
            for e, v in b_terms.items():
                t = tuple(x + y for x, y in zip(e, shift))
                nv = rem.get(t, 0) - c * v
                if nv:
                    rem[t] = nv
                else:
                    rem.pop(t, None)
        return LPoly(vars, quot) * sa * sb.invert_monomial()

    # -- substitution ----------------------------------------------------

    def substitute(self, assignments: Mapping[str, object]) -> "RFunc":
        """Substitute variables by RFunc-coercible values."""
        vals = {v: as_rfunc(x) for v, x in assignments.items() if v in self.vars}
        if not vals:
            return RFunc(self)
        if all(_is_unit(v) for v in vals.values()):
            return RFunc(self._subst_units({k: v.num for k, v in vals.items()}))
        return self._subst_general(vals)

    def _subst_units(self, vals: Mapping[str, "LPoly"]) -> "LPoly":
        keep = [i for i, v in enumerate(self.vars) if v not in vals]
        keep_vars = tuple(self.vars[i] for i in keep)
        mapped = [(i, vals[v]) for i, v in enumerate(self.vars) if v in vals]
        # images as (vars, exps, coeff) in a common variable set
        allvars = _union(keep_vars, *[m.vars for _, m in mapped])
        kpos = [allvars.index(v) for v in keep_vars]
        imgs = []
        for i, m in mapped:
            (e, c), = m.terms.items()
            full = [0] * len(allvars)
            for v, k in zip(m.vars, e):
                full[allvars.index(v)] = k
            imgs.append((i, full, c))
        out: dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            full = [0] * len(allvars)
            for j, i in enumerate(keep):
                full[kpos[j]] += e[i]
            coeff = c
            for i, img, ci in imgs:
                k = e[i]
                if k:
                    for t, x in enumerate(img):
                        full[t] += k * x
                    coeff *= Fraction(ci) ** k
            t = tuple(full)
            out[t] = out.get(t, 0) + coeff
        return LPoly(allvars, out)

    def _subst_general(self, vals: Mapping[str, "RFunc"]) -> "RFunc":
        names = [v for v in self.vars if v in vals]
        idx = {v: self.vars.index(v) for v in names}
        lo = {v: min(0, self.degree(v)[0]) for v in names}
        hi = {v: max(0, self.degree(v)[1]) for v in names}
        for v in names:
            if lo[v] < 0 and vals[v].is_zero():
                raise PoleError(f"substituting {v} -> 0 into a negative power of {v}")
        keep = [i for i, v in enumerate(self.vars) if v not in vals]
        keep_vars = tuple(self.vars[i] for i in keep)
        den = LPoly.const(1)
        for v in names:
            den = den * vals[v].den ** hi[v] * vals[v].num ** (-lo[v])
        num = LPoly.const(0)
        for e, c in self.terms.items():
            mono = LPoly(keep_vars, {tuple(e[i] for i in keep): c})
            for v in names:
                k = e[idx[v]]
                a, b = vals[v].num, vals[v].den
                # v^k * b^hi * a^(-lo) with v = a/b
                mono = mono * a ** (k - lo[v]) * b ** (hi[v] - k)
            num = num + mono
        return RFunc(num, den)

    # -- misc ------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == LPoly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Exps, Fraction]]:
        return sorted(self.terms.items())

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LPoly({self.to_text()!r})"

    def to_text(self) -> str:
        """Canonical text: monomials ordered by exponent vector, vars sorted."""
        if not self.terms:
            return "0"
        order = sorted(range(len(self.vars)), key=lambda i: _print_key(self.vars[i]))
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for i in order:
                k = e[i]
                if k == 1:
                    factors.append(self.vars[i])
                elif k:
                    factors.append(f"{self.vars[i]}^{k}")
            mono = " ".join(factors)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = _fmt_coeff(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_coeff(a)} {mono}"
            parts.append((sign, body))
        s0, b0 = parts[0]
        out = ("-" if s0 == "-" else "") + b0
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _union(*varsets: Sequence[str]) -> tuple[str, ...]:
    if len(varsets) == 2 and varsets[0] == varsets[1]:
        return tuple(varsets[0])
    return tuple(sorted(set(chain.from_iterable(varsets))))


def _lift(x) -> "LPoly":
    if isinstance(x, LPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LPoly.const(x)
    return NotImplemented


def lpoly_arith(a: LPoly, b: LPoly, op: str, *, align: bool = True) -> LPoly:
    """``a + b`` or ``a * b``; with ``align=False`` the variable lists must match."""
    if not align and a.vars != b.vars:
        raise AlignmentError(f"variable lists differ: {a.vars} vs {b.vars}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def _is_unit(f: "RFunc") -> bool:
    return f.den.is_one() and f.num.is_monomial()


class RFunc:
    """A quotient ``num / den`` of Laurent polynomials.

    No GCD is ever taken; equality is cross-multiplication.  A monomial
    denominator is folded into the numerator, which keeps Laurent
    polynomials in their simplest form.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _lift(num) if not isinstance(num, LPoly) else num
        den = LPoly.const(1) if den is None else (_lift(den) if not isinstance(den, LPoly) else den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RFunc parts must be LPoly or rational")
        if den.is_zero():
            raise PoleError("zero denominator")
        if num.is_zero():
            den = LPoly.const(1)
        elif den.is_monomial() and not den.is_one():
            num = num * den.invert_monomial()
            den = LPoly.const(1)
        elif num == den:
            num = den = LPoly.const(1)
        else:
            # scale so the lex-smallest term of the denominator is exactly 1
            e, c = min(den.terms.items())
            if c != 1 or any(e):
                inv = LPoly._raw(den.vars, {tuple(-k for k in e): Fraction(1) / c})
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @classmethod
    def var(cls, name: str, power: int = 1) -> "RFunc":
        return cls(LPoly.var(name, power))

    @classmethod
    def const(cls, c: Scalar) -> "RFunc":
        return cls(LPoly.const(c))

    @property
    def vars(self) -> tuple[str, ...]:
        return _union(self.num.vars, self.den.vars)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def __add__(self, other):
        other = as_rfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RFunc(self.num + other.num, self.den)
        if other.den.is_one():
            return RFunc(self.num + other.num * self.den, self.den)
        if self.den.is_one():
            return RFunc(self.num * other.den + other.num, other.den)
        return RFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RFunc(-self.num, self.den)

    def __sub__(self, other):
        other = as_rfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = as_rfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.num and not self.den.is_one():
            return RFunc(self.num, other.den)
        if other.den == self.num and not other.den.is_one():
            return RFunc(other.num, self.den)
        return RFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RFunc":
        if self.is_zero():
            raise PoleError("inverse of zero")
        return RFunc(self.den, self.num)

    def __truediv__(self, other):
        other = as_rfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_rfunc(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RFunc(self.num ** k, self.den ** k)

    def __eq__(self, other):
        other = as_rfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return rfunc_eq(self, other)

    __hash__ = None  # equality is not structural

    def substitute(self, assignments: Mapping[str, object]) -> "RFunc":
        return rfunc_substitute(self, assignments)

    def reduced(self) -> "RFunc":
        """Cancel the denominator when it divides the numerator exactly."""
        if self.den.is_one():
            return self
        q = self.num.divexact(self.den)
        return RFunc(q) if q is not None else self

    def to_text(self) -> str:
        n = self.num.to_text()
        if self.den.is_one():
            return n
        if len(self.num.terms) > 1:
            n = f"({n})"
        return f"{n}/({self.den.to_text()})"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RFunc({self.to_text()!r})"


def as_rfunc(x, strict: bool = True) -> RFunc:
    if isinstance(x, RFunc):
        return x
    if isinstance(x, (LPoly, int, Fraction)):
        return RFunc(x)
    if isinstance(x, Factored):
        return x.to_rfunc()
    if strict:
        raise TypeError(f"cannot coerce {type(x).__name__} to RFunc")
    return NotImplemented


def rfunc_eq(a: RFunc, b: RFunc) -> bool:
    """``a == b`` as rational functions: ``a.num * b.den == b.num * a.den``."""
    if a.den == b.den:
        return a.num == b.num
    return a.num * b.den == b.num * a.den


def rfunc_substitute(f, assignments: Mapping[str, object]) -> RFunc:
    """Substitute variables of ``f`` by rational functions.

    Raises :class:`PoleError` naming the denominator that vanishes.
    """
    f = as_rfunc(f)
    num = f.num.substitute(assignments)
    den = f.den.substitute(assignments)
    if den.is_zero():
        raise PoleError(f"denominator factor {f.den.to_text()} vanishes under {_fmt_assign(assignments)}")
    return num / den


def _fmt_assign(assignments) -> str:
    return ", ".join(f"{k} -> {as_rfunc(v)}" for k, v in sorted(assignments.items()))


def shift_s(f, alpha: int = 1, beta: Fraction | int = 0, *, var: str = "X", half_q: bool = False) -> RFunc:
    """Realize ``s -> alpha*s + beta`` on a function of ``X = q^{-s}``.

    ``X^e`` becomes ``X^{alpha e} q^{-beta e}``.  Half-integral powers of q
    only arise for odd ``e``; they are rejected unless ``half_q`` is set, in
    which case the result is expressed in ``Q`` with ``q = Q^2``.
    """
    beta = Fraction(beta)
    f = as_rfunc(f)

    def go(p: LPoly) -> LPoly:
        if var not in p.vars:
            return p
        i = p.vars.index(var)
        needs_half = any((beta * e[i]).denominator != 1 for e in p.terms)
        if needs_half and not half_q:
            raise ValueError("half-integral power of q; pass half_q=True")
        base = p
        qname = "q"
        if half_q:
            base = _q_to_Q(p)
            qname = "Q"
        j = base.vars.index(var)
        out = LPoly.const(0)
        for e, c in base.terms.items():
            k = e[j]
            shift = -beta * k * (2 if half_q else 1)
            rest = dict(zip(base.vars, e))
            rest[var] = alpha * k
            rest[qname] = rest.get(qname, 0) + int(shift)
            out = out + LPoly.monomial(rest, c)
        return out

    return RFunc(go(f.num), go(f.den))


def _q_to_Q(p: LPoly) -> LPoly:
    if "q" not in p.vars:
        return p
    out = LPoly.const(0)
    for e, c in p.terms.items():
        d = dict(zip(p.vars, e))
        d["Q"] = 2 * d.pop("q")
        out = out + LPoly.monomial(d, c)
    return out


# -- factored products -------------------------------------------------------


class Factored:
    """``unit * prod(factor ** k)`` with normalized non-monomial factors.

    A factor is normalized by dividing out its smallest term, so its
    constant term is 1; for example ``X^2 - 1`` is stored as
    ``-1 * (1 - X^2)``.  Equal factors merge, which gives exact symbolic
    cancellation without any polynomial GCD.
    """

    __slots__ = ("unit", "factors")

    def __init__(self, unit: LPoly | Scalar = 1, factors: Mapping[LPoly, int] | None = None):
        unit = _lift(unit) if not isinstance(unit, LPoly) else unit
        if not (unit.is_monomial() or unit.is_zero()):
            raise ValueError("unit must be a monomial")
        self.unit = unit
        self.factors = {f: k for f, k in (factors or {}).items() if k}

    @classmethod
    def of(cls, p: LPoly | Scalar, power: int = 1) -> "Factored":
        """Wrap a single polynomial ``p ** power``."""
        p = _lift(p) if not isinstance(p, LPoly) else p
        if p.is_zero():
            if power < 0:
                raise PoleError("zero factor in a denominator")
            return cls(0)
        if p.is_monomial():
            return cls(p ** power)
        lead_e, lead_c = min(p.terms.items())
        lead = LPoly(p.vars, {lead_e: lead_c})
        norm = p * lead.invert_monomial()
        return cls(lead ** power, {norm: power})

    @classmethod
    def binomial(cls, coeff: Scalar, mono: Mapping[str, int], power: int = 1) -> "Factored":
        """``(1 - coeff * mono) ** power``."""
        return cls.of(LPoly.const(1) - LPoly.monomial(mono, coeff), power)

    def is_zero(self) -> bool:
        return self.unit.is_zero()

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LPoly)):
            other = Factored.of(other)
        if not isinstance(other, Factored):
            return NotImplemented
        c = Counter(self.factors)
        c.update(other.factors)
        return Factored(self.unit * other.unit, c)

    __rmul__ = __mul__

    def inverse(self) -> "Factored":
        if self.is_zero():
            raise PoleError("inverse of zero")
        return Factored(self.unit.invert_monomial(), {f: -k for f, k in self.factors.items()})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, LPoly)):
            other = Factored.of(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Factored.of(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Factored(self.unit ** k, {f: e * k for f, e in self.factors.items()})

    def __neg__(self):
        return Factored(-self.unit, self.factors)

    def to_rfunc(self) -> RFunc:
        num = self.unit
        den = LPoly.const(1)
        for f, k in sorted(self.factors.items(), key=lambda t: t[0].to_text()):
            if k > 0:
                num = num * f ** k
            else:
                den = den * f ** (-k)
        return RFunc(num, den)

    def substitute(self, assignments: Mapping[str, object]) -> "Factored | RFunc":
        """Substitute; stays factored when all values are monomials."""
        vals = {k: as_rfunc(v) for k, v in assignments.items()}
        if not all(_is_unit(v) for v in vals.values()):
            return rfunc_substitute(self.to_rfunc(), vals)
        units = {k: v.num for k, v in vals.items()}
        out = Factored(self.unit._subst_units(units))
        for f, k in self.factors.items():
            img = f._subst_units(units)
            if img.is_zero() and k < 0:
                raise PoleError(f"denominator factor {f.to_text()} vanishes under {_fmt_assign(assignments)}")
            out = out * Factored.of(img, k)
        return out

    def shift_s(self, alpha: int = 1, beta: Fraction | int = 0) -> "Factored":
        """Factor-wise version of :func:`shift_s` (requires even X powers when beta is half-integral)."""
        out = Factored(shift_s(self.unit, alpha, beta).num)
        for f, k in self.factors.items():
            out = out * Factored.of(shift_s(f, alpha, beta).num, k)
        return out

    def __eq__(self, other):
        if isinstance(other, Factored):
            if self.unit == other.unit and self.factors == other.factors:
                return True
            return rfunc_eq(self.to_rfunc(), other.to_rfunc())
        other = as_rfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return rfunc_eq(self.to_rfunc(), other)

    __hash__ = None

    def to_text(self) -> str:
        return self.to_rfunc().to_text()

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Factored({self.to_text()!r})"


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def parse(text: str) -> RFunc:
    """Parse an expression such as ``"(1 - q^-1 X^2)/(1 + q)"`` into an RFunc.

    Juxtaposition is multiplication; ``^`` takes a (possibly negative) integer.
    """
    tokens = []
    for num, name, op in _TOKEN.findall(text):
        if num:
            tokens.append(("num", int(num)))
        elif name:
            tokens.append(("var", name))
        elif op.strip():
            tokens.append(("op", op))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if expected is not None and tok != ("op", expected):
            raise ValueError(f"expected {expected!r} at token {pos} in {text!r}")
        pos += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            _, op = take()
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def starts_atom(tok):
        kind, v = tok
        return kind in ("num", "var") or tok == ("op", "(")

    def term():
        val = unary()
        while True:
            tok = peek()
            if tok == ("op", "*"):
                take()
                val = val * unary()
            elif tok == ("op", "/"):
                take()
                val = val / unary()
            elif starts_atom(tok):
                val = val * unary()
            else:
                return val

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            if peek() == ("op", "-"):
                take()
                sign = -1
            kind, v = take()
            if kind != "num":
                raise ValueError(f"integer exponent expected in {text!r}")
            return base ** (sign * v)
        return base

    def atom():
        kind, v = take()
        if kind == "num":
            return RFunc.const(v)
        if kind == "var":
            return RFunc.var(v)
        if (kind, v) == ("op", "("):
            val = expr()
            take(")")
            return val
        raise ValueError(f"unexpected token {v!r} in {text!r}")

    if not tokens:
        raise ValueError("empty expression")
    val = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return val


# -- linear algebra ----------------------------------------------------------


def _row_to_lpoly(row: Sequence[RFunc]) -> list[LPoly]:
    dens = []
    for x in row:
        if not x.den.is_one() and x.den not in dens:
            dens.append(x.den)
    common = reduce(lambda a, b: a * b, dens, LPoly.const(1))
    out = []
    for x in row:
        if x.den.is_one():
            out.append(x.num * common)
        else:
            rest = reduce(lambda a, b: a * b, [d for d in dens if d != x.den], LPoly.const(1))
            out.append(x.num * rest)
    return out


def _strip_content(row: list[LPoly]) -> list[LPoly]:
    nz = [x for x in row if not x.is_zero()]
    if not nz:
        return row
    vars = _union(*[x.vars for x in nz])
    mins = None
    for x in nz:
        for e in x.embed(vars):
            mins = list(e) if mins is None else [min(a, b) for a, b in zip(mins, e)]
    inv = LPoly(vars, {tuple(-k for k in mins): 1})
    return [x * inv for x in row]


def solve_kernel(rows: Iterable[Sequence]) -> list[list[RFunc]]:
    """Basis of the right kernel ``{v : row . v = 0 for every row}``.

    Elimination runs over the Laurent ring: monomial pivots are units and
    are preferred; otherwise rows are combined fraction-free.  Each basis
    vector is scaled so its first nonzero entry is 1, and every returned
    vector is checked against every input row before returning.
    """
    orig = [[as_rfunc(x) for x in r] for r in rows]
    if not orig:
        return []
    n = len(orig[0])
    if any(len(r) != n for r in orig):
        raise ValueError("rows have different lengths")
    work = [_row_to_lpoly(r) for r in orig]
    work = [r for r in work if any(not x.is_zero() for x in r)]
    pivots: list[tuple[int, list[LPoly]]] = []
    for col in range(n):
        cands = [i for i, r in enumerate(work) if not r[col].is_zero()]
        if not cands:
            continue
        best = min(cands, key=lambda i: (not work[i][col].is_monomial(), len(work[i][col].terms),
                                         sum(len(x.terms) for x in work[i])))
        prow = work.pop(best)
        p = prow[col]
        if p.is_monomial():
            inv = p.invert_monomial()
            prow = [x * inv for x in prow]
            p = prow[col]

        def eliminate(r: list[LPoly]) -> list[LPoly]:
            a = r[col]
            if a.is_zero():
                return r
            if p.is_one():
                return [x - a * y for x, y in zip(r, prow)]
            return _strip_content([p * x - a * y for x, y in zip(r, prow)])

        work = [eliminate(r) for r in work]
        work = [r for r in work if any(not x.is_zero() for x in r)]
        pivots = [(c, eliminate(r)) for c, r in pivots]
        pivots.append((col, prow))
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for free in range(n):
        if free in pivot_cols:
            continue
        v = [RFunc.const(0)] * n
        v[free] = RFunc.const(1)
        for c, r in pivots:
            if not r[free].is_zero():
                v[c] = RFunc(-r[free], r[c])
        lead = next(x for x in v if not x.is_zero())
        basis.append([x / lead for x in v])
    for v in basis:
        for r in orig:
            acc = RFunc.const(0)
            for a, x in zip(r, v):
                if not a.is_zero() and not x.is_zero():
                    acc = acc + a * x
            if not acc.is_zero():
                raise ArithmeticError("kernel post-check failed")
    return basis


# -- cyclotomic fields -------------------------------------------------------


def _prime_of(n: int) -> int:
    for p in range(2, n + 1):
        if n % p == 0:
            m = n
            while m % p == 0:
                m //= p
            if m != 1:
                raise ValueError(f"conductor {n} is not a prime power")
            return p
    raise ValueError(f"bad conductor {n}")


def reduce_cyclotomic(coeffs: Sequence[Scalar], n: int) -> tuple[Fraction, ...]:
    """Reduce a coefficient list (powers of zeta_n, any length) to the power basis."""
    p = _prime_of(n)
    step = n // p
    phi = n - step
    c = [Fraction(0)] * max(len(coeffs), n)
    for i, x in enumerate(coeffs):
        c[i % n] += x
    c = c[:n]
    # zeta^m = -sum_{j=1}^{p-1} zeta^{m - j*step} for m >= phi
    for m in range(n - 1, phi - 1, -1):
        x = c[m]
        if x:
            for j in range(1, p):
                c[m - j * step] -= x
            c[m] = Fraction(0)
    return tuple(c[:phi])


class CycScalar:
    """An element of the cyclotomic field Q(zeta_n), n a prime power.

    Stored in the power basis ``1, zeta, ..., zeta^{phi(n)-1}``.

    >>> z = CycScalar.zeta(3)
    >>> z ** 3 == CycScalar.one(3)
    True
    >>> (CycScalar.one(3) + z + z * z).is_zero()
    True
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Sequence[Scalar]):
        self.n = n
        self.coeffs = reduce_cyclotomic(coeffs, n)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "CycScalar":
        c = [0] * n
        c[k % n] = 1
        return cls(n, c)

    @classmethod
    def one(cls, n: int) -> "CycScalar":
        return cls.zeta(n, 0)

    @classmethod
    def rational(cls, n: int, x: Scalar) -> "CycScalar":
        return cls(n, [x])

    def _coerce(self, other) -> "CycScalar":
        if isinstance(other, CycScalar):
            if other.n != self.n:
                raise ValueError(f"conductor mismatch {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.rational(self.n, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycScalar(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.n, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return CycScalar(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycScalar.one(self.n)
        for _ in range(k):
            result = result * self
        return result

    def conj(self) -> "CycScalar":
        """Complex conjugation zeta -> zeta^{-1}."""
        c = [Fraction(0)] * self.n
        for i, a in enumerate(self.coeffs):
            c[(-i) % self.n] += a
        return CycScalar(self.n, c)

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        phi = len(self.coeffs)
        # columns: self * zeta^j in the power basis
        cols = [(self * CycScalar.zeta(self.n, j)).coeffs for j in range(phi)]
        m = [[cols[j][i] for j in range(phi)] + [Fraction(int(i == 0))] for i in range(phi)]
        for c in range(phi):
            piv = next(i for i in range(c, phi) if m[i][c])
            m[c], m[piv] = m[piv], m[c]
            pv = m[c][c]
            m[c] = [x / pv for x in m[c]]
            for i in range(phi):
                if i != c and m[i][c]:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[c])]
        return CycScalar(self.n, [m[i][phi] for i in range(phi)])

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __eq__(self, other):
        other = self._coerce(other) if isinstance(other, (CycScalar, int, Fraction)) else NotImplemented
        if other is NotImplemented:
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def to_text(self) -> str:
        terms = []
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            sign = "-" if a < 0 else "+"
            b = abs(a)
            body = _fmt_coeff(b) if not mono else (mono if b == 1 else f"{_fmt_coeff(b)} {mono}")
            terms.append((sign, body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, b in terms[1:]:
            out += f" {s} {b}"
        return out

    def __repr__(self):
        return f"CycScalar({self.n}, {self.to_text()!r})"
