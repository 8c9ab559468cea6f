"""Group elements of the three complexes and the maps between them.

Element payloads are LinCombs whose keys hold raw field values (exponent
monomials in the exact backends, complex numbers in the numeric one).  Keys
by tag:

    QF     a                    Q[F] and the ambient groups of B2, B3
    BR     a                    F[F] spanned by weighted brackets [[a]]
    W2     (x, y)               wedge^2 F*
    W3     (x, y, z)            wedge^3 F*
    B2XF   (a, b)               B2 (x) F*
    FXF    x                    F (x) F*           (F-coefficient)
    FXW2   (x, y)               F (x) wedge^2 F*   (F-coefficient)
    MID    ("L", a, b)|("R", y) (beta2 (x) F*) + (F (x) B2)
    W2XF   (x, y, z)            wedge^2 F* (x) F*  (projection target)
    FXFXF  (x, y)               F (x) F* (x) F*    (projection target)

A BR coefficient q at key a means q * [[a]], i.e. q * D(a)/(a(1-a)) <a>.

Equality in a quotient group is never decided here: BR and B2 keys live in
the ambient spaces, and faces that only hold modulo relations are checked
through projections and numeric functionals registered by the verifier.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .backends import BasisCtx, cross_ratio_val, sym_order, triple_ratio_val
from .conventions import ConventionTable
from .errors import (
    BackendInadmissible,
    ExceptionalValue,
    KeyDomainMismatch,
    NotCrossRatioShape,
)
from .freemod import LinComb, alt, expand_tensor, expand_wedge
from .symlattice import MulElt

_ONE = Fraction(1)

Q_COEFF_TAGS = frozenset({"QF", "BR", "W2", "W3", "B2XF", "W2XF"})
F_COEFF_TAGS = frozenset({"FXF", "FXW2", "FXFXF"})
ALL_TAGS = Q_COEFF_TAGS | F_COEFF_TAGS | {"MID"}


class GroupElt:
    """Tagged element of one of the groups above."""

    __slots__ = ("tag", "lc")

    def __init__(self, tag: str, lc: LinComb | None = None):
        if tag not in ALL_TAGS:
            raise KeyDomainMismatch(f"unknown group tag {tag!r}")
        self.tag = tag
        self.lc = lc if lc is not None else LinComb()

    @staticmethod
    def single(tag: str, key, coeff=_ONE) -> "GroupElt":
        return GroupElt(tag, LinComb.single(key, coeff))

    def __add__(self, other: "GroupElt") -> "GroupElt":
        if self.tag != other.tag:
            raise KeyDomainMismatch(f"{self.tag} + {other.tag}")
        return GroupElt(self.tag, self.lc + other.lc)

    def __sub__(self, other: "GroupElt") -> "GroupElt":
        if self.tag != other.tag:
            raise KeyDomainMismatch(f"{self.tag} - {other.tag}")
        return GroupElt(self.tag, self.lc - other.lc)

    def __neg__(self) -> "GroupElt":
        return GroupElt(self.tag, -self.lc)

    def __mul__(self, q) -> "GroupElt":
        return GroupElt(self.tag, self.lc * q)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.lc)

    def __repr__(self) -> str:
        return f"GroupElt({self.tag}, {self.lc!r})"


# ---------------------------------------------------------------------------
# Canonical normalization (exact backends).


def _values_of_key(tag: str, key) -> tuple:
    if tag in ("QF", "BR", "FXF"):
        return (key,)
    if tag == "MID":
        return tuple(key[1:])
    return tuple(key)


def normalize(tag: str, lc: LinComb, ctx) -> dict:
    """Canonical dict of a group element; {} iff the element is zero.

    Bracket carriers (BR and the L summand of MID) are rewritten over the
    plain generators <a> with F-coefficients q * w(a) when every weight is
    available; if some weight is not (the formal backend cannot rewrite
    1 - r for a triple ratio) the comparison stays at bracket-generator
    level, which is a sound sufficient test.
    """
    weights: dict = {}
    reduce_brackets = tag in ("BR", "MID")
    if reduce_brackets:
        for key in lc.keys():
            if tag == "MID":
                if key[0] != "L":
                    continue
                a = key[1]
            else:
                a = key
            if a in weights:
                continue
            try:
                weights[a] = ctx.bracket_weight(a)
            except (NotCrossRatioShape, AttributeError):
                weights = {}
                reduce_brackets = False
                break

    values = []
    for key in lc.keys():
        values.extend(_values_of_key(tag, key))
    for w in weights.values():
        if isinstance(w, MulElt):
            values.append(w)
    for coeff in lc.terms.values():
        if isinstance(coeff, LinComb):
            values.extend(MulElt.from_exps(_ONE, {sym: 1}) for (_tag, sym) in coeff.keys())
    if weights:
        for w in weights.values():
            if isinstance(w, LinComb):
                values.extend(MulElt.from_exps(_ONE, {sym: 1}) for (_tag, sym) in w.keys())
    basis = BasisCtx(ctx, values)

    out: dict = {}

    def put(key, coeff):
        if key in out:
            s = out[key] + coeff
            if s:
                out[key] = s
            else:
                del out[key]
        elif coeff:
            out[key] = coeff

    for key, coeff in lc.items():
        if tag == "QF":
            put(("gen", basis.key_canon(key)), coeff)
        elif tag == "BR":
            if reduce_brackets:
                put(("br", basis.key_canon(key)), basis.coeff_canon(weights[key]) * coeff)
            else:
                put(("brs", basis.key_canon(key)), coeff)
        elif tag == "W2":
            for skey, c in expand_wedge([basis.expand_value(v) for v in key], coeff, sort_key=sym_order).items():
                put(skey, c)
        elif tag == "W3":
            for skey, c in expand_wedge([basis.expand_value(v) for v in key], coeff, sort_key=sym_order).items():
                put(skey, c)
        elif tag == "B2XF":
            a, b = key
            ak = basis.key_canon(a)
            for s, e in basis.expand_value(b).items():
                put((ak, s), coeff * Fraction(e))
        elif tag == "FXF":
            c = basis.coeff_canon(coeff)
            for s, e in basis.expand_value(key).items():
                put(("f", s), c * Fraction(e))
        elif tag == "FXW2":
            c = basis.coeff_canon(coeff)
            for skey, cc in expand_wedge([basis.expand_value(v) for v in key], c, sort_key=sym_order).items():
                put(("fw",) + skey, cc)
        elif tag == "FXFXF":
            c = basis.coeff_canon(coeff)
            for skey, cc in expand_tensor([basis.expand_value(v) for v in key], c).items():
                put(("ft",) + skey, cc)
        elif tag == "W2XF":
            x, y, b = key
            wpart = expand_wedge([basis.expand_value(x), basis.expand_value(y)], coeff, sort_key=sym_order)
            bexp = basis.expand_value(b)
            for pkey, c1 in wpart.items():
                for s, e in bexp.items():
                    put(("wt", pkey, s), c1 * Fraction(e))
        elif tag == "MID":
            if key[0] == "L":
                _, a, b = key
                ak = basis.key_canon(a)
                if reduce_brackets:
                    c = basis.coeff_canon(weights[a]) * coeff
                    for s, e in basis.expand_value(b).items():
                        put(("L", ak, s), c * Fraction(e))
                else:
                    for s, e in basis.expand_value(b).items():
                        put(("Ls", ak, s), coeff * Fraction(e))
            else:
                _, y = key
                put(("R", basis.key_canon(y)), basis.coeff_canon(coeff))
        else:
            raise KeyDomainMismatch(f"cannot normalize tag {tag!r}")
    return out


def equal(a: GroupElt, b: GroupElt, ctx) -> bool:
    if a.tag != b.tag:
        raise KeyDomainMismatch(f"{a.tag} vs {b.tag}")
    return not normalize(a.tag, (a - b).lc, ctx)


def residual(a: GroupElt, b: GroupElt, ctx) -> dict:
    """Canonical form of a - b; empty means the face commutes."""
    return normalize(a.tag, (a - b).lc, ctx)


# ---------------------------------------------------------------------------
# The maps of the classical and infinitesimal complexes.


def f_D(e: GroupElt) -> GroupElt:
    """[a] -> [[a]]: the weighted bracket with the same generator."""
    if e.tag != "QF":
        raise KeyDomainMismatch("f_D expects a Q[F] element")
    return GroupElt("BR", e.lc)


tau_D2 = f_D
tau_D3 = f_D


def delta_2(ctx, e: GroupElt) -> GroupElt:
    """[a]_2 -> (1-a) ^ a."""
    out = LinComb()
    for a, q in e.lc.items():
        out = out + LinComb.single((ctx.one_minus(a), a), q)
    return GroupElt("W2", out)


def delta_3(ctx, e: GroupElt) -> GroupElt:
    """[a]_3 -> [a]_2 (x) a."""
    out = LinComb([((a, a), q) for a, q in e.lc.items()])
    return GroupElt("B2XF", out)


def delta_32(ctx, e: GroupElt) -> GroupElt:
    """[a]_2 (x) b -> (1-a) ^ a ^ b."""
    out = LinComb()
    for (a, b), q in e.lc.items():
        out = out + LinComb.single((ctx.one_minus(a), a, b), q)
    return GroupElt("W3", out)


def partial_2(ctx, e: GroupElt, table: ConventionTable) -> GroupElt:
    """[[a]] -> p1 * dlog(1-a) (x) a + p2 * dlog(a) (x) (1-a)."""
    p1, p2 = table.partial2
    out = LinComb()
    for a, q in e.lc.items():
        u = ctx.one_minus(a)
        out = out + LinComb([(a, ctx.dlog(u) * (q * p1)), (u, ctx.dlog(a) * (q * p2))])
    return GroupElt("FXF", out)


def partial_3(ctx, e: GroupElt, table: ConventionTable) -> GroupElt:
    """[[a]]_3 -> [[a]]_2 (x) a + (second term) (x) [a]_2."""
    out = LinComb()
    for a, q in e.lc.items():
        out = out + LinComb.single(("L", a, a), q)
        if table.partial3_second_term == "dlog_a":
            out = out + LinComb.single(("R", a), ctx.dlog(a) * q)
        else:
            if ctx.kind == "formal" or ctx.coeff_mode == "formal":
                raise BackendInadmissible(
                    "the one_minus_a convention needs value coefficients"
                )
            out = out + LinComb.single(("R", a), ctx.materialize(ctx.one_minus(a)) * q)
    return GroupElt("MID", out)


def partial_32(ctx, e: GroupElt, table: ConventionTable) -> GroupElt:
    """The middle infinitesimal boundary into F (x) wedge^2 F*."""
    q1, q2, q3 = table.partial32
    out = LinComb()
    for key, coeff in e.lc.items():
        if key[0] == "L":
            _, a, b = key
            u = ctx.one_minus(a)
            out = out + LinComb(
                [((a, b), ctx.dlog(u) * (coeff * q1)), ((u, b), ctx.dlog(a) * (coeff * q2))]
            )
        else:
            _, y = key
            out = out + LinComb.single((ctx.one_minus(y), y), coeff * q3)
    return GroupElt("FXW2", out)


def g_2D(ctx, e: GroupElt) -> GroupElt:
    """x ^ y -> dlog(x) (x) y - dlog(y) (x) x."""
    out = LinComb()
    for (x, y), q in e.lc.items():
        out = out + LinComb([(y, ctx.dlog(x) * q), (x, ctx.dlog(y) * (-q))])
    return GroupElt("FXF", out)


def g_3D_mid(ctx, e: GroupElt) -> GroupElt:
    """[x]_2 (x) y -> [[x]]_2 (x) y + dlog(y) (x) [x]_2."""
    out = LinComb()
    for (x, y), q in e.lc.items():
        out = out + LinComb.single(("L", x, y), q)
        out = out + LinComb.single(("R", x), ctx.dlog(y) * q)
    return GroupElt("MID", out)


def g_3D_right(ctx, e: GroupElt) -> GroupElt:
    """x^y^z -> dlog(x)(x)y^z - dlog(y)(x)x^z + dlog(z)(x)x^y."""
    out = LinComb()
    for (x, y, z), q in e.lc.items():
        out = out + LinComb(
            [
                ((y, z), ctx.dlog(x) * q),
                ((x, z), ctx.dlog(y) * (-q)),
                ((x, y), ctx.dlog(z) * q),
            ]
        )
    return GroupElt("FXW2", out)


# ---------------------------------------------------------------------------
# Projections used as sound necessary conditions on quotient-valued faces.


def project_delta2_tensor(ctx, e: GroupElt) -> GroupElt:
    """delta_2 (x) id: [a]_2 (x) b -> ((1-a) ^ a) (x) b, which kills R2 (x) F*."""
    out = LinComb()
    for (a, b), q in e.lc.items():
        out = out + LinComb.single((ctx.one_minus(a), a, b), q)
    return GroupElt("W2XF", out)


def project_partial2_tensor(ctx, e: GroupElt, table: ConventionTable) -> GroupElt:
    """partial_2 (x) id on the left summand of MID; kills rho2 (x) F*."""
    p1, p2 = table.partial2
    out = LinComb()
    for key, coeff in e.lc.items():
        if key[0] != "L":
            continue
        _, a, b = key
        u = ctx.one_minus(a)
        out = out + LinComb(
            [((a, b), ctx.dlog(u) * (coeff * p1)), ((u, b), ctx.dlog(a) * (coeff * p2))]
        )
    return GroupElt("FXFXF", out)


def project_id_delta2(ctx, e: GroupElt) -> GroupElt:
    """id (x) delta_2 on the right summand of MID; kills F (x) R2."""
    out = LinComb()
    for key, coeff in e.lc.items():
        if key[0] != "R":
            continue
        _, y = key
        out = out + LinComb.single((ctx.one_minus(y), y), coeff)
    return GroupElt("FXW2", out)


# ---------------------------------------------------------------------------
# Relation-subgroup generators.


def five_term_R2(ctx, pts) -> GroupElt:
    """The five-term generator: sum (-1)^i [cross ratio of the other four]."""
    if len(pts) != 5:
        raise ValueError("five points required")
    out = LinComb()
    for i in range(5):
        rest = pts[:i] + pts[i + 1 :]
        out = out + LinComb.single(cross_ratio_val(ctx, rest), Fraction((-1) ** i))
    return GroupElt("QF", out)


def five_term_rho2D(ctx, a: MulElt, b: MulElt) -> GroupElt:
    """[[a]] - [[b]] + [[b/a]] - [[(1-b)/(1-a)]] + [[(1-b~)/(1-a~)]].

    Arguments and all five bracket generators must avoid {0, 1}; the brackets
    carry their D(.)/(.(1-.)) weights implicitly through the BR tag.
    """
    if a == b:
        raise ExceptionalValue("the five-term generator needs a != b")
    args = [
        a,
        b,
        b / a,
        ctx.one_minus(b) / ctx.one_minus(a),
        ctx.one_minus(b.inv()) / ctx.one_minus(a.inv()),
    ]
    signs = [1, -1, 1, -1, 1]
    out = LinComb()
    for v, s in zip(args, signs):
        ctx.guard_generator(v)
        out = out + LinComb.single(v, Fraction(s))
    return GroupElt("BR", out)


def triple_ratio_generator(ctx, pts) -> GroupElt:
    """Alternation of the 6-point triple ratio over all 720 orderings."""
    return GroupElt(
        "QF",
        alt(tuple(pts), lambda p: LinComb.single(triple_ratio_val(ctx, p), _ONE)),
    )


def seven_term_R3(ctx, pts) -> GroupElt:
    """The seven-term generator: sum (-1)^i r3(omit point i)."""
    if len(pts) != 7:
        raise ValueError("seven points required")
    acc = GroupElt("QF")
    for i in range(7):
        rest = pts[:i] + pts[i + 1 :]
        acc = acc + triple_ratio_generator(ctx, rest) * Fraction((-1) ** i)
    return acc
