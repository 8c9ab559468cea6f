"""The configuration-to-group maps of both prisms.

Every map takes a field context, a tuple of point indices, and (where signs
are convention-dependent) the active ConventionTable, and returns a GroupElt.
Maps extend linearly over chains of configurations via apply_chain.

Projected cross ratios r(l | a,b,c,d) replace 2x2 determinants by 3x3 ones
with the projection center l in the leading slot; the four remaining points
enter in ascending original order.  det_hat2(i, j) is the determinant of the
three points of a 5-point configuration other than i and j, in ascending
order.
"""

from __future__ import annotations

from fractions import Fraction

from .backends import cross_ratio_val, triple_ratio_val
from .configs import boundary
from .conventions import ConventionTable
from .errors import DegenerateConfiguration
from .freemod import LinComb, alt
from .groups import GroupElt, f_D

_ONE = Fraction(1)
_M13 = Fraction(-1, 3)

#: Prefactor of the two 6-point alternation maps.  Its value is pinned by the
#: quotient faces: with the audited boundary convention and the -1/3 five-point
#: maps, both of them commute for exactly this coefficient (the engine checks
#: the proportionality factor numerically across random configurations).
TRIPLE_ALT_COEFF = Fraction(-1, 90)


def apply_chain(fn, chain: LinComb) -> GroupElt:
    """Linear extension of a point-tuple map over a chain."""
    acc = None
    for pts, q in chain.items():
        term = fn(tuple(pts)) * q
        acc = term if acc is None else acc + term
    if acc is None:
        raise ValueError("empty chain")
    return acc


def omitted(pts, i: int) -> tuple:
    return tuple(pts[:i] + pts[i + 1 :])


# ---------------------------------------------------------------------------
# Weight 2.


def f2_0(ctx, pts) -> GroupElt:
    """3 points in 2-space -> wedge^2 F*."""
    a, b, c = pts
    d01, d02, d12 = ctx.det((a, b)), ctx.det((a, c)), ctx.det((b, c))
    return GroupElt(
        "W2",
        LinComb([((d01, d02), _ONE), ((d01, d12), -_ONE), ((d02, d12), _ONE)]),
    )


def f2_1(ctx, pts) -> GroupElt:
    """4 points in 2-space -> the cross-ratio generator of B2."""
    return GroupElt.single("QF", cross_ratio_val(ctx, pts))


def tau2_0(ctx, pts, table: ConventionTable) -> GroupElt:
    """3 points in 2-space -> F (x) F*; the infinitesimal triangle map."""
    s = table.tau2_0_sign
    out = LinComb()
    for i in range(3):
        p0, p1, p2 = pts[i % 3], pts[(i + 1) % 3], pts[(i + 2) % 3]
        out = out + LinComb(
            [
                (ctx.det((p0, p1)), ctx.dlog(ctx.det((p0, p2))) * Fraction(s)),
                (ctx.det((p0, p2)), ctx.dlog(ctx.det((p1, p0))) * Fraction(-s)),
            ]
        )
    return GroupElt("FXF", out)


def tau2_1(ctx, pts, table: ConventionTable) -> GroupElt:
    """4 points in 2-space -> the weighted bracket of the cross ratio."""
    return GroupElt.single("BR", cross_ratio_val(ctx, pts))


# ---------------------------------------------------------------------------
# Weight 3.


def _omission_dets(ctx, pts):
    """det of all points but one, ascending, indexed by the omitted position."""
    return [ctx.det(omitted(pts, i)) for i in range(len(pts))]


def f3_0(ctx, pts) -> GroupElt:
    """4 points in 3-space -> wedge^3 F*."""
    dets = _omission_dets(ctx, pts)
    out = LinComb()
    for i in range(4):
        triple = tuple(dets[j] for j in range(4) if j != i)
        out = out + LinComb.single(triple, Fraction((-1) ** i))
    return GroupElt("W3", out)


def projected_cross_ratio(ctx, pts, i: int):
    """r(pts[i] | the other four points, ascending)."""
    return cross_ratio_val(ctx, omitted(pts, i), lead=pts[i])


def det_hat2(ctx, pts, i: int, j: int):
    """Determinant of the three points of pts other than positions i, j."""
    keep = tuple(p for k, p in enumerate(pts) if k not in (i, j))
    if len(keep) != 3:
        raise DegenerateConfiguration("det_hat2 needs exactly five points")
    return ctx.det(keep)


def _hat_product(ctx, pts, i: int):
    prod = None
    for j in range(5):
        if j == i:
            continue
        v = det_hat2(ctx, pts, i, j)
        prod = v if prod is None else prod * v
    return prod


def f3_1(ctx, pts) -> GroupElt:
    """5 points in 3-space -> B2 (x) F*, with the -1/3 prefactor."""
    out = LinComb()
    for i in range(5):
        r = projected_cross_ratio(ctx, pts, i)
        out = out + LinComb.single((r, _hat_product(ctx, pts, i)), _M13 * ((-1) ** i))
    return GroupElt("B2XF", out)


def f3_2(ctx, pts) -> GroupElt:
    """6 points in 3-space -> B3: the scaled alternation of the triple ratio."""
    lc = alt(tuple(pts), lambda p: LinComb.single(triple_ratio_val(ctx, p), _ONE))
    return GroupElt("QF", lc * TRIPLE_ALT_COEFF)


def tau3_0(ctx, pts, table: ConventionTable) -> GroupElt:
    """4 points in 3-space -> F (x) wedge^2 F*."""
    s = table.tau3_0_sign
    dets = _omission_dets(ctx, pts)
    out = LinComb()
    for i in range(4):
        d0, d1, d2, d3 = (dets[(i + k) % 4] for k in range(4))
        coeff = ctx.dlog(d0) * (Fraction(s) * ((-1) ** i))
        out = out + LinComb.single((d1 / d2, d3 / d2), coeff)
    return GroupElt("FXW2", out)


def tau3_1(ctx, pts, table: ConventionTable) -> GroupElt:
    """5 points in 3-space -> (beta2 (x) F*) + (F (x) B2)."""
    s = Fraction(table.tau3_1_sign)
    out = LinComb()
    for i in range(5):
        r = projected_cross_ratio(ctx, pts, i)
        prod = _hat_product(ctx, pts, i)
        q = _M13 * ((-1) ** i) * s
        out = out + LinComb.single(("L", r, prod), q)
        out = out + LinComb.single(("R", r), ctx.dlog(prod) * q)
    return GroupElt("MID", out)


def tau3_2(ctx, pts, table: ConventionTable) -> GroupElt:
    """6 points in 3-space -> beta3: the scaled alternation of the bracket."""
    lc = alt(tuple(pts), lambda p: LinComb.single(triple_ratio_val(ctx, p), _ONE))
    return GroupElt("BR", lc * TRIPLE_ALT_COEFF)


# ---------------------------------------------------------------------------
# Composites around the prism faces (left = over the top edge, right = down).


def boundary_chain(pts, table: ConventionTable) -> LinComb:
    return boundary(tuple(pts), base=table.boundary_index_base)
