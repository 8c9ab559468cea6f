"""Exact scalar arithmetic: rationals, univariate polynomials and rational
functions over Q, and small numeric helpers.

The exact ground field used by the instance-level backend is Q(t), realized by
:class:`RatFunc`.  Its canonical form (reduced fraction, monic denominator)
makes equality a structural comparison.  The derivation is d/dt; on Q every
derivation vanishes, so one transcendental is the smallest field with a
nonzero derivation.

A polynomial is a tuple of Fraction coefficients, index = degree, with a
nonzero leading coefficient (the zero polynomial is the empty tuple).

Multiplicative identities among finitely many field values are decided through
a coprime (gcd-free) basis: a pairwise-coprime set over which every input
factors exactly.  This is a sound substitute for irreducible factorization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotCovered, PoleAtPoint, ZeroValue

Rat = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True, slots=True)
class Poly:
    """Dense univariate polynomial over Q."""

    coeffs: tuple[Fraction, ...] = ()

    @staticmethod
    def make(coeffs: Iterable) -> "Poly":
        return Poly(_trim([Fraction(c) for c in coeffs]))

    @staticmethod
    def const(c) -> "Poly":
        c = Fraction(c)
        return Poly((c,)) if c else Poly()

    @staticmethod
    def var() -> "Poly":
        return Poly((_ZERO, _ONE))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def is_one(self) -> bool:
        return self.coeffs == (_ONE,)

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(_trim(out))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (Fraction, int)):
            q = Fraction(other)
            if not q:
                return Poly()
            return Poly(tuple(c * q for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Poly(_trim(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly((_ONE,))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [_ZERO] * (dq + 1)
        lead = other.lead
        for k in range(dq, -1, -1):
            top = rem[k + other.degree]
            if top:
                q = top / lead
                quot[k] = q
                for j, c in enumerate(other.coeffs):
                    rem[k + j] -= q * c
        return Poly(_trim(quot)), Poly(_trim(rem))

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> tuple[Fraction, "Poly"]:
        """Split into (leading coefficient, monic polynomial)."""
        if self.is_zero():
            raise ZeroValue("the zero polynomial has no monic form")
        c = self.lead
        if c == 1:
            return c, self
        return c, Poly(tuple(x / c for x in self.coeffs))

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd via the Euclidean algorithm.

        A single-prime modular screen handles the common coprime case without
        exact arithmetic: for a prime dividing no denominator and no leading
        coefficient, the rational gcd divides the gcd mod p, so a trivial
        modular gcd certifies coprimality.
        """
        if not self.is_zero() and not other.is_zero():
            for prime in _SCREEN_PRIMES:
                am = _poly_mod(self, prime)
                bm = _poly_mod(other, prime)
                if am is None or bm is None:
                    continue
                if len(_gcd_mod(am, bm, prime)) == 1:
                    return _P_GCD_ONE
                break
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
            if not b.is_zero():
                b = b.monic()[1]
        if a.is_zero():
            return a
        return a.monic()[1]

    def derivative(self) -> "Poly":
        return Poly(_trim([i * c for i, c in enumerate(self.coeffs)][1:]))

    def eval(self, x):
        """Horner evaluation; works for Fraction, float and complex points."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return x * 0
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*t" if c != 1 else "t")
            else:
                parts.append(f"{c}*t^{i}" if c != 1 else f"t^{i}")
        return " + ".join(reversed(parts))


_P_ONE = Poly((_ONE,))


@dataclass(frozen=True, slots=True)
class RatFunc:
    """Element of Q(t) in canonical form: gcd(num, den) = 1, den monic.

    Construct through :func:`ratfunc` (or the helpers below); the raw
    constructor assumes its inputs are already canonical.
    """

    num: Poly
    den: Poly

    @staticmethod
    def const(c) -> "RatFunc":
        return RatFunc(Poly.const(c), _P_ONE)

    @staticmethod
    def var() -> "RatFunc":
        return RatFunc(Poly.var(), _P_ONE)

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p, _P_ONE)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __add__(self, other) -> "RatFunc":
        other = _coerce(other)
        return ratfunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "RatFunc":
        other = _coerce(other)
        return ratfunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return ratfunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return _coerce(other) / self

    def inv(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return ratfunc(self.den, self.num)

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inv() ** (-n)
        return ratfunc(self.num**n, self.den**n)

    def derivative(self) -> "RatFunc":
        return ratfunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def eval(self, point):
        d = self.den.eval(point)
        if not d:
            raise PoleAtPoint(f"pole at {point}")
        return self.num.eval(point) / d

    def split(self) -> tuple[Fraction, Poly, Poly]:
        """Return (c, monic num, monic den) with self = c * num / den."""
        if self.is_zero():
            raise ZeroValue("cannot split the zero function")
        c, n = self.num.monic()
        return c, n, self.den

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"


def _coerce(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    return RatFunc.const(x)


def ratfunc(num: Poly, den: Poly) -> RatFunc:
    """Canonicalize num/den: reduce by the gcd and make the denominator monic."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return RatFunc(Poly(), _P_ONE)
    g = num.gcd(den)
    if not g.is_one():
        num, den = num // g, den // g
    c, den = den.monic()
    if c != 1:
        num = num * (1 / c)
    return RatFunc(num, den)


def derive(a: RatFunc) -> RatFunc:
    """The derivation d/dt on Q(t), in canonical form."""
    return a.derivative()


def eval_at(a: RatFunc, point):
    """Evaluate at a rational or complex point; raises PoleAtPoint."""
    return a.eval(point)


# ---------------------------------------------------------------------------
# Coprime (gcd-free) bases.


def _refine(values, *, gcd, div, is_unit, sort_key):
    basis: list = []
    work = list(values)
    while work:
        v = work.pop()
        if is_unit(v):
            continue
        for i, b in enumerate(basis):
            g = gcd(v, b)
            if not is_unit(g):
                del basis[i]
                work.extend((g, div(b, g), div(v, g)))
                break
        else:
            basis.append(v)
    return sorted(set(basis), key=sort_key)


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def coprime_basis_ints(values: Iterable[int]) -> list[int]:
    """Pairwise-coprime positive integers covering all inputs multiplicatively."""
    vals = []
    for v in values:
        if v == 0:
            raise ZeroValue("zero has no factorization")
        vals.append(abs(int(v)))
    return _refine(
        vals,
        gcd=_int_gcd,
        div=lambda a, b: a // b,
        is_unit=lambda x: x == 1,
        sort_key=lambda x: x,
    )


def coprime_basis_polys(values: Iterable[Poly]) -> list[Poly]:
    """Pairwise-coprime monic non-unit polynomials covering all inputs.

    Inputs are made monic first; constants are units of Q[t] and are dropped.
    """
    vals = []
    for v in values:
        if v.is_zero():
            raise ZeroValue("zero polynomial in coprime basis input")
        if not v.is_unit():
            vals.append(v.monic()[1])
    return _refine(
        vals,
        gcd=lambda a, b: a.gcd(b),
        div=lambda a, b: a // b,
        is_unit=lambda p: p.is_unit(),
        sort_key=lambda p: (p.degree, p.coeffs),
    )


def coprime_basis(values):
    """Dispatch on the value kind: integers or polynomials."""
    values = list(values)
    if values and isinstance(values[0], (int, Fraction)):
        return coprime_basis_ints(values)
    return coprime_basis_polys(values)


def _multiplicity(p: Poly, b: Poly) -> tuple[int, Poly]:
    e = 0
    while True:
        q, r = p.divmod(b)
        if not r.is_zero():
            return e, p
        e += 1
        p = q


def factor_poly_over_basis(p: Poly, basis: Sequence[Poly]) -> tuple[Fraction, list[int]]:
    """Write p = c * prod(basis[i] ** e[i]); raises NotCovered on a remainder."""
    if p.is_zero():
        raise ZeroValue("cannot factor zero")
    c, rem = p.monic()
    exps = []
    for b in basis:
        if rem.is_unit():
            exps.append(0)
            continue
        e, rem = _multiplicity(rem, b)
        exps.append(e)
    if not rem.is_one():
        raise NotCovered(f"remainder {rem} not covered by the basis")
    return c, exps


def factor_over_basis(v: RatFunc, basis: Sequence[Poly]) -> tuple[Fraction, list[int]]:
    """Factor a rational function over a coprime polynomial basis.

    Returns (constant, exponent vector) with v = constant * prod(basis**e).
    """
    if v.is_zero():
        raise ZeroValue("cannot factor zero")
    cn, en = factor_poly_over_basis(v.num, basis)
    cd, ed = factor_poly_over_basis(v.den, basis)
    return cn / cd, [a - b for a, b in zip(en, ed)]


def _int_multiplicity(n: int, b: int) -> tuple[int, int]:
    e = 0
    while n % b == 0:
        n //= b
        e += 1
    return e, n


def factor_int_over_basis(n: int, basis: Sequence[int]) -> list[int]:
    """Exponents of |n| over an integer coprime basis; raises NotCovered."""
    if n == 0:
        raise ZeroValue("cannot factor zero")
    rem = abs(int(n))
    exps = []
    for b in basis:
        e, rem = _int_multiplicity(rem, b)
        exps.append(e)
    if rem != 1:
        raise NotCovered(f"integer remainder {rem} not covered")
    return exps


# ---------------------------------------------------------------------------
# Numeric scalars.


def check_finite(z: complex) -> complex:
    """Guard against NaN and infinities leaking into numeric backends."""
    if not (abs(z.real) < float("inf") and abs(z.imag) < float("inf")):
        raise ArithmeticError(f"non-finite complex value {z!r}")
    if z.real != z.real or z.imag != z.imag:
        raise ArithmeticError("NaN complex value")
    return z


@dataclass(frozen=True, slots=True)
class DualC:
    """First-order dual number over C: val + eps * d, with d**2 = 0.

    Carries a derivation numerically: D(x) is the eps part.  Used by the
    numeric backend wherever a face involves the derivation.
    """

    val: complex
    eps: complex

    @staticmethod
    def const(z) -> "DualC":
        return DualC(complex(z), 0j)

    def __add__(self, other) -> "DualC":
        other = _dual(other)
        return DualC(self.val + other.val, self.eps + other.eps)

    __radd__ = __add__

    def __neg__(self) -> "DualC":
        return DualC(-self.val, -self.eps)

    def __sub__(self, other) -> "DualC":
        return self + (-_dual(other))

    def __rsub__(self, other) -> "DualC":
        return _dual(other) + (-self)

    def __mul__(self, other) -> "DualC":
        other = _dual(other)
        return DualC(self.val * other.val, self.val * other.eps + self.eps * other.val)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DualC":
        other = _dual(other)
        inv = 1.0 / other.val
        return DualC(self.val * inv, (self.eps - self.val * other.eps * inv) * inv)

    def __rtruediv__(self, other) -> "DualC":
        return _dual(other) / self

    def __pow__(self, n: int) -> "DualC":
        out = DualC(1.0 + 0j, 0j)
        base = self
        if n < 0:
            base = DualC(1.0 + 0j, 0j) / base
            n = -n
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


def _dual(x) -> DualC:
    if isinstance(x, DualC):
        return x
    return DualC(complex(x), 0j)
