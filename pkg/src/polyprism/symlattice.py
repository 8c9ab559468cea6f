"""Multiplicative exponent lattices over formal symbols.

A :class:`MulElt` is frac * prod(sym ** e): a rational constant times a
monomial in multiplicatively independent symbols.  Two symbol kinds occur:

* :class:`DetSym` - a formal determinant of configuration points (the
  symbolic backend treats these as a free lattice);
* small integers - atom ids of registered polynomials (the exact backend
  factors concrete Q(t) values over them).

dlog linearizes a MulElt into a Q-combination of dlog symbols, one per
monomial factor; constants die because the derivation kills Q.

The one-minus rewrite turns 1 - r into a monomial when r is cross-ratio
shaped, using the three-term Pluecker identity

    det(a,b) det(c,d) - det(a,c) det(b,d) + det(a,d) det(b,c) = 0

(and the same with a shared leading slot for 3x3 determinants).  The sign of
the rewrite is confirmed by one numeric spot evaluation per instance rather
than a combinatorial rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Optional

from .errors import NotCrossRatioShape, ZeroValue
from .freemod import LinComb

_ONE = Fraction(1)


@dataclass(frozen=True, slots=True, order=True)
class DetSym:
    """Formal determinant symbol with strictly increasing point indices."""

    idxs: tuple[int, ...]

    def __str__(self) -> str:
        return "D(" + ",".join(map(str, self.idxs)) + ")"


def det_sym(indices) -> tuple[int, Optional[DetSym]]:
    """Canonicalize an index tuple: (permutation sign, sorted symbol).

    Returns sign 0 and no symbol when an index repeats (zero determinant).
    """
    idxs = tuple(indices)
    if len(set(idxs)) != len(idxs):
        return 0, None
    order = sorted(range(len(idxs)), key=lambda i: idxs[i])
    sign = 1
    lst = list(range(len(idxs)))
    # parity of the sorting permutation
    perm = tuple(order)
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, ln = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            ln += 1
        if ln % 2 == 0:
            sign = -sign
    del lst
    return sign, DetSym(tuple(sorted(idxs)))


@dataclass(frozen=True, slots=True)
class MulElt:
    """frac * prod(sym ** e); exps sorted, no zero exponents, frac nonzero."""

    frac: Fraction
    exps: tuple[tuple[object, int], ...]

    @staticmethod
    def one() -> "MulElt":
        return MulElt(_ONE, ())

    @staticmethod
    def from_sym(sym, frac=_ONE, exp: int = 1) -> "MulElt":
        if not frac:
            raise ZeroValue("multiplicative element cannot be zero")
        return MulElt(Fraction(frac), ((sym, exp),) if exp else ())

    @staticmethod
    def from_exps(frac, exps: dict) -> "MulElt":
        if not frac:
            raise ZeroValue("multiplicative element cannot be zero")
        return MulElt(Fraction(frac), tuple(sorted(((s, e) for s, e in exps.items() if e), key=lambda p: _symkey(p[0]))))

    def exp_dict(self) -> dict:
        return dict(self.exps)

    def is_one(self) -> bool:
        return self.frac == 1 and not self.exps

    def __mul__(self, other: "MulElt") -> "MulElt":
        d = dict(self.exps)
        for s, e in other.exps:
            d[s] = d.get(s, 0) + e
        return MulElt.from_exps(self.frac * other.frac, d)

    def __truediv__(self, other: "MulElt") -> "MulElt":
        return self * other.inv()

    def inv(self) -> "MulElt":
        return MulElt(1 / self.frac, tuple((s, -e) for s, e in self.exps))

    def __pow__(self, n: int) -> "MulElt":
        if n == 0:
            return MulElt.one()
        return MulElt(self.frac**n, tuple((s, e * n) for s, e in self.exps))

    def __str__(self) -> str:
        parts = [f"{s}^{e}" for s, e in self.exps]
        body = "*".join(parts) if parts else "1"
        if self.frac == 1:
            return body
        return f"{self.frac}*{body}"


def _symkey(s):
    # DetSym and int atom ids never mix within one backend.
    if isinstance(s, DetSym):
        return (0, s.idxs)
    return (1, s)


def mul_sort_key(s):
    return _symkey(s)


# dlog symbols wrap the multiplicative symbol they differentiate.
def dlog_sym(sym):
    return ("dlog", sym)


def dlog(m: MulElt) -> LinComb:
    """Leibniz expansion: dlog(frac * prod s^e) = sum e * dlog(s).

    The constant contributes nothing (the derivation kills Q), so in
    particular a sign change is invisible.
    """
    return LinComb([(dlog_sym(s), Fraction(e)) for s, e in m.exps])


# ---------------------------------------------------------------------------
# Cross-ratio shape detection and the Pluecker one-minus rewrite.


def cross_ratio_shape(m: MulElt, det_indices: Callable) -> Optional[tuple[tuple[int, ...], tuple]]:
    """Detect whether m's monomial matches det(l+ad) det(l+bc) / (det(l+ac) det(l+bd)).

    det_indices maps a symbol to its point-index tuple (or None when the
    symbol is not a determinant).  Returns (lead, (a, b, c, d)) on success;
    the lead tuple is empty in the 2x2 case.  The match is combinatorial
    only; the caller still has to verify values and signs.
    """
    if len(m.exps) != 4:
        return None
    pos, neg = [], []
    for s, e in m.exps:
        idxs = det_indices(s)
        if idxs is None:
            return None
        if e == 1:
            pos.append(idxs)
        elif e == -1:
            neg.append(idxs)
        else:
            return None
    if len(pos) != 2 or len(neg) != 2:
        return None
    width = len(pos[0])
    if any(len(t) != width for t in pos + neg) or width not in (2, 3):
        return None
    lead: tuple[int, ...] = ()
    if width == 3:
        common = set(pos[0]) & set(pos[1]) & set(neg[0]) & set(neg[1])
        if len(common) != 1:
            return None
        lead = (common.pop(),)
        pos = [tuple(x for x in t if x != lead[0]) for t in pos]
        neg = [tuple(x for x in t if x != lead[0]) for t in neg]
    points = set(pos[0]) | set(pos[1])
    if len(points) != 4 or (set(neg[0]) | set(neg[1])) != points:
        return None
    # positive pairs are {a,d},{b,c}; negative pairs are {a,c},{b,d}
    for a, d in (pos[0], pos[0][::-1]):
        for b, c in (pos[1], pos[1][::-1]):
            negset = {frozenset(neg[0]), frozenset(neg[1])}
            if {frozenset((a, c)), frozenset((b, d))} == negset:
                return lead, (a, b, c, d)
    return None


def one_minus_via_plucker(
    m: MulElt,
    det_indices: Callable,
    det_value: Callable,
    verify: Callable,
) -> MulElt:
    """Rewrite 1 - m as a determinant monomial via the Pluecker relation.

    det_value(idxs) must return the MulElt of the determinant taken in the
    given argument order (sign included), so the natural-order identity

        1 - det(ad)det(bc)/(det(ac)det(bd)) = det(ab)det(cd)/(det(ac)det(bd))

    holds verbatim.  verify(m, candidate) performs one consistent spot
    evaluation of 1 - m against the candidate; a mismatch raises
    NotCrossRatioShape so the caller can fall back to an instance backend.
    """
    shape = cross_ratio_shape(m, det_indices)
    if shape is None:
        raise NotCrossRatioShape(f"not a cross-ratio monomial: {m}")
    lead, (a, b, c, d) = shape
    denom = det_value(lead + (a, c)) * det_value(lead + (b, d))
    natural = det_value(lead + (a, d)) * det_value(lead + (b, c)) / denom
    if natural != m:
        raise NotCrossRatioShape(f"monomial {m} is not the natural cross ratio of its symbols")
    candidate = det_value(lead + (a, b)) * det_value(lead + (c, d)) / denom
    if not verify(m, candidate):
        raise NotCrossRatioShape(f"Pluecker spot check failed for {m}")
    return candidate
