"""Formal linear combinations and the expansion operators used by every group.

A :class:`LinComb` is a finite-support map key -> coefficient.  Coefficients
are usually Fraction, but anything with +, unary -, multiplication by Fraction
and a truthiness test for "nonzero" works; in particular a LinComb can serve
as the coefficient of another LinComb (that is how formal F-coefficients,
i.e. Q-combinations of dlog symbols, are carried).

All group targets are implemented rationalized (tensored with Q), so torsion
in the multiplicative slots is invisible: a sign is a 2-torsion unit of F^x
and its class vanishes after tensoring with Q.  The expansion helpers below
therefore discard multiplicative signs.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Iterable, Mapping, Sequence

_ONE = Fraction(1)


def _cmul(coeff, q):
    """coeff * q with q a Fraction, tolerating float/complex coefficients."""
    if isinstance(coeff, complex):
        return coeff * float(q)
    return coeff * q


class LinComb:
    """Finite formal linear combination over hashable keys."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        d = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for k, c in items:
                if k in d:
                    c = d[k] + c
                if c:
                    d[k] = c
                elif k in d:
                    del d[k]
        self.terms = d

    @staticmethod
    def single(key, coeff=_ONE) -> "LinComb":
        return LinComb([(key, coeff)])

    @staticmethod
    def zero() -> "LinComb":
        return LinComb()

    def items(self):
        return self.terms.items()

    def keys(self):
        return self.terms.keys()

    def get(self, key, default=None):
        return self.terms.get(key, default)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinComb) and self.terms == other.terms

    def __add__(self, other: "LinComb") -> "LinComb":
        if not other.terms:
            return self
        if not self.terms:
            return other
        d = dict(self.terms)
        for k, c in other.terms.items():
            if k in d:
                s = d[k] + c
                if s:
                    d[k] = s
                else:
                    del d[k]
            else:
                d[k] = c
        out = LinComb.__new__(LinComb)
        out.terms = d
        return out

    def __neg__(self) -> "LinComb":
        out = LinComb.__new__(LinComb)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __mul__(self, q) -> "LinComb":
        q = Fraction(q) if isinstance(q, int) else q
        if not q:
            return LinComb()
        out = LinComb.__new__(LinComb)
        out.terms = {k: _cmul(c, q) for k, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def map_linear(self, fn: Callable) -> "LinComb":
        """Linear extension: sum of coeff * fn(key) with fn returning a LinComb."""
        acc = LinComb()
        for k, c in self.terms.items():
            acc = acc + fn(k) * c
        return acc

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{k}" for k, c in self.terms.items())


def perm_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a tuple of images of 0..n-1."""
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def alt(points: Sequence, f: Callable):
    """Unnormalized signed sum of f over all permutations of the points.

    No 1/m! factor: the 2/45 prefactors of the weight-3 maps multiply this
    plain sum.  Limited to 6 points (720 terms).
    """
    m = len(points)
    if m > 6:
        raise ValueError("alternation beyond 6 points (720 permutations) is not supported")
    acc = None
    for perm in permutations(range(m)):
        term = f(tuple(points[i] for i in perm)) * Fraction(perm_sign(perm))
        acc = term if acc is None else acc + term
    return acc


def sort_with_sign(syms: Sequence, key=None) -> tuple[int, tuple]:
    """Sort symbols, returning (permutation sign, sorted tuple); 0 on repeats."""
    order = sorted(range(len(syms)), key=(lambda i: key(syms[i])) if key else (lambda i: syms[i]))
    out = tuple(syms[i] for i in order)
    for a, b in zip(out, out[1:]):
        if a == b:
            return 0, out
    return perm_sign(tuple(order)), out


def expand_wedge(slot_exps: Sequence[Mapping], coeff, sort_key=None) -> LinComb:
    """Multilinear alternating expansion of a wedge of exponent vectors.

    Each slot is a map symbol -> integer exponent for one multiplicative
    element; the result is a LinComb over sorted symbol tuples.
    """
    out: dict = {}
    for picks in product(*(e.items() for e in slot_exps)):
        syms = tuple(p[0] for p in picks)
        mult = 1
        for _, e in picks:
            mult *= e
        if not mult:
            continue
        sign, skey = sort_with_sign(syms, key=sort_key)
        if not sign:
            continue
        c = _cmul(coeff, Fraction(sign * mult))
        if skey in out:
            s = out[skey] + c
            if s:
                out[skey] = s
            else:
                del out[skey]
        else:
            out[skey] = c
    return LinComb(out)


def expand_tensor(slot_exps: Sequence[Mapping], coeff) -> LinComb:
    """Multilinear expansion of a plain tensor of exponent vectors."""
    out: dict = {}
    for picks in product(*(e.items() for e in slot_exps)):
        syms = tuple(p[0] for p in picks)
        mult = 1
        for _, e in picks:
            mult *= e
        if not mult:
            continue
        c = _cmul(coeff, Fraction(mult))
        if syms in out:
            s = out[syms] + c
            if s:
                out[syms] = s
            else:
                del out[syms]
        else:
            out[syms] = c
    return LinComb(out)
