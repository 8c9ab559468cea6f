"""Field contexts: the three oracle backends behind every face check.

* :class:`SymContext` (formal) - determinants are free symbols; identities
  verified here hold over every field, using only the Pluecker rewrite.
* :class:`QtContext` (exact) - a concrete configuration over Q(t); values are
  kept factored over registered polynomial atoms, and equality is decided
  exactly after refining the atoms to a coprime basis.
* :class:`NumContext` (numeric) - complex floating point, optionally with
  first-order dual numbers so the derivation has a numeric realization.

A context provides: det, one_minus, dlog, bracket_weight, and (for the two
exact kinds) the hooks the normalizer needs to put group elements in
canonical form.

Coefficient modes of the exact backend: "value" carries F-coefficients as
rational functions (fully general, used for small faces); "formal" carries
them as Q-combinations of dlog symbols of the atoms (much faster on the
720-term alternation faces).  The formal mode is faithful: basis atoms are
pairwise coprime, so their dlogs p'/p have disjoint pole sets and are
Q-linearly independent by partial fractions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import configs as cfgmod
from .configs import Config
from .errors import (
    DegenerateConfiguration,
    ExceptionalValue,
    NotCrossRatioShape,
)
from .freemod import LinComb
from .scalars import DualC, Poly, RatFunc, coprime_basis_ints, coprime_basis_polys, factor_int_over_basis, factor_poly_over_basis
from .symlattice import DetSym, MulElt, det_sym, dlog, dlog_sym, mul_sort_key, one_minus_via_plucker

_SPOT_POINTS = (Fraction(2), Fraction(3), Fraction(5), Fraction(7), Fraction(11), Fraction(13), Fraction(17), Fraction(19), Fraction(23), Fraction(29))


class SymContext:
    """Formal backend: m abstract points in n-space, free determinant symbols."""

    kind = "formal"
    coeff_mode = "formal"

    def __init__(self, m: int, n: int, spot_seed=0):
        self.m = m
        self.n = n
        self.spot = cfgmod.random_generic(m, n, ("plucker-spot", spot_seed), "rat")
        self._spot_dets: dict[DetSym, Fraction] = {}

    def det(self, idxs: Sequence[int]) -> MulElt:
        sign, sym = det_sym(idxs)
        if not sign:
            raise DegenerateConfiguration(f"repeated point in determinant {idxs}")
        return MulElt.from_sym(sym, frac=sign)

    def det_indices(self, sym) -> Optional[tuple[int, ...]]:
        return sym.idxs if isinstance(sym, DetSym) else None

    def spot_eval(self, v: MulElt) -> Fraction:
        acc = v.frac
        for s, e in v.exps:
            val = self._spot_dets.get(s)
            if val is None:
                val = self.spot.det(s.idxs)
                self._spot_dets[s] = val
            acc *= val**e
        return acc

    def _verify_one_minus(self, m: MulElt, candidate: MulElt) -> bool:
        return 1 - self.spot_eval(m) == self.spot_eval(candidate)

    def one_minus(self, v: MulElt) -> MulElt:
        return one_minus_via_plucker(v, self.det_indices, self.det, self._verify_one_minus)

    def dlog(self, v: MulElt) -> LinComb:
        return dlog(v)

    def bracket_weight(self, v: MulElt) -> LinComb:
        return self.dlog(v) - self.dlog(self.one_minus(v))

    def guard_generator(self, v: MulElt) -> MulElt:
        # a formal determinant monomial is generically outside {0, 1}
        return v


class QtContext:
    """Exact backend over Q(t) for one concrete configuration.

    Every multiplicative value is frac * prod(atom ** e) over registered monic
    polynomial atoms, so products never touch polynomial arithmetic and the
    coprime refinement at equality time sees a small atom set.
    """

    kind = "exact"

    def __init__(self, config: Config | None, coeff_mode: str = "formal"):
        if coeff_mode not in ("value", "formal"):
            raise ValueError(f"unknown coeff mode {coeff_mode!r}")
        self.config = config
        self.coeff_mode = coeff_mode
        self.atoms: list[Poly] = []
        self._atom_ids: dict[tuple, int] = {}
        self._det_cache: dict[tuple[int, ...], MulElt] = {}
        self._det_of_atom: dict[int, tuple[int, ...]] = {}
        self._one_minus_cache: dict[MulElt, MulElt] = {}
        self._spot_cache: dict[tuple[int, Fraction], Fraction] = {}

    # -- atom registry ------------------------------------------------------

    def _register_atom(self, monic: Poly) -> int:
        key = monic.coeffs
        idx = self._atom_ids.get(key)
        if idx is None:
            idx = len(self.atoms)
            self.atoms.append(monic)
            self._atom_ids[key] = idx
        return idx

    def from_poly(self, p: Poly) -> MulElt:
        if p.is_zero():
            raise DegenerateConfiguration("zero polynomial value")
        c, monic = p.monic()
        if monic.is_one():
            return MulElt(Fraction(c), ())
        return MulElt.from_exps(c, {self._register_atom(monic): 1})

    def from_ratfunc(self, rf: RatFunc) -> MulElt:
        if rf.is_zero():
            raise DegenerateConfiguration("zero rational function value")
        num = self.from_poly(rf.num)
        den = self.from_poly(rf.den)
        return num / den

    def materialize(self, v: MulElt) -> RatFunc:
        num, den = Poly((Fraction(1),)), Poly((Fraction(1),))
        for a, e in v.exps:
            p = self.atoms[a] ** abs(e)
            if e > 0:
                num = num * p
            else:
                den = den * p
        return RatFunc.from_poly(num * v.frac) / RatFunc.from_poly(den)

    # -- field operations ---------------------------------------------------

    def det(self, idxs: Sequence[int]) -> MulElt:
        idxs = tuple(idxs)
        sorted_idxs = tuple(sorted(idxs))
        base = self._det_cache.get(sorted_idxs)
        if base is None:
            val = self.config.det(sorted_idxs)
            if isinstance(val, RatFunc):
                if val.is_zero():
                    raise DegenerateConfiguration(f"determinant {sorted_idxs} vanishes")
                base = self.from_ratfunc(val)
            else:
                if not val:
                    raise DegenerateConfiguration(f"determinant {sorted_idxs} vanishes")
                base = self.from_ratfunc(RatFunc.const(val))
            self._det_cache[sorted_idxs] = base
            if len(base.exps) == 1 and base.exps[0][1] == 1:
                self._det_of_atom.setdefault(base.exps[0][0], sorted_idxs)
        sign, _ = det_sym(idxs)
        if not sign:
            raise DegenerateConfiguration(f"repeated point in determinant {idxs}")
        return base if sign == 1 else base * MulElt(Fraction(-1), ())

    def det_indices(self, sym) -> Optional[tuple[int, ...]]:
        return self._det_of_atom.get(sym)

    def _spot_eval_atom(self, atom: int, point: Fraction) -> Fraction:
        key = (atom, point)
        val = self._spot_cache.get(key)
        if val is None:
            val = self.atoms[atom].eval(point)
            self._spot_cache[key] = val
        return val

    def _verify_one_minus(self, m: MulElt, candidate: MulElt) -> bool:
        involved = {a for a, _ in m.exps} | {a for a, _ in candidate.exps}
        for point in _SPOT_POINTS:
            if any(not self._spot_eval_atom(a, point) for a in involved):
                continue
            lhs = 1 - self._eval_at(m, point)
            return lhs == self._eval_at(candidate, point)
        raise NotCrossRatioShape("no usable spot point for the Pluecker check")

    def _eval_at(self, v: MulElt, point: Fraction) -> Fraction:
        acc = v.frac
        for a, e in v.exps:
            acc *= self._spot_eval_atom(a, point) ** e
        return acc

    def one_minus(self, v: MulElt) -> MulElt:
        out = self._one_minus_cache.get(v)
        if out is not None:
            return out
        try:
            out = one_minus_via_plucker(v, self.det_indices, self.det, self._verify_one_minus)
        except NotCrossRatioShape:
            rf = 1 - self.materialize(v)
            if rf.is_zero():
                raise ExceptionalValue("value equals 1; bracket undefined")
            out = self.from_ratfunc(rf)
        self._one_minus_cache[v] = out
        return out

    def dlog(self, v: MulElt):
        if self.coeff_mode == "formal":
            return LinComb([(dlog_sym(a), Fraction(e)) for a, e in v.exps])
        acc = RatFunc.const(0)
        for a, e in v.exps:
            p = self.atoms[a]
            acc = acc + RatFunc.from_poly(p.derivative() * e) / RatFunc.from_poly(p)
        return acc

    def bracket_weight(self, v: MulElt):
        if self.coeff_mode == "formal":
            return self.dlog(v) - self.dlog(self.one_minus(v))
        a = self.materialize(v)
        return a.derivative() / (a * (1 - a))

    def guard_generator(self, v: MulElt) -> MulElt:
        if not v.exps:
            if v.frac == 1:
                raise ExceptionalValue("generator equals 1")
            if not v.frac:
                raise ExceptionalValue("generator equals 0")
            return v
        # nontrivial atom content: 0 is impossible; 1 would make 1 - v vanish,
        # which one_minus detects; cheap structural screen only
        return v


class NumContext:
    """Numeric backend over C (or first-order dual numbers over C)."""

    kind = "numeric"
    coeff_mode = "numeric"

    def __init__(self, config: Config, det_floor: float = 1e-12):
        self.config = config
        self.dual = isinstance(config.points[0][0], DualC)
        self.det_floor = det_floor
        self._det_cache: dict[tuple[int, ...], object] = {}

    def det(self, idxs: Sequence[int]):
        idxs = tuple(idxs)
        val = self._det_cache.get(idxs)
        if val is None:
            val = self.config.det(idxs)
            mag = abs(val.val) if self.dual else abs(val)
            if mag < self.det_floor:
                raise DegenerateConfiguration(f"determinant {idxs} below floor")
            self._det_cache[idxs] = val
        return val

    def one_minus(self, v):
        return 1 - v

    def dlog(self, v):
        if not self.dual:
            raise BackendMisuse("dlog needs dual-number coordinates")
        return v.eps / v.val

    def bracket_weight(self, v):
        if not self.dual:
            raise BackendMisuse("bracket weight needs dual-number coordinates")
        return v.eps / (v.val * (1 - v.val))

    def guard_generator(self, v):
        x = v.val if self.dual else v
        if abs(x) < 1e-9 or abs(x - 1) < 1e-9:
            raise ExceptionalValue(f"generator too close to {{0, 1}}: {x}")
        return v


class BackendMisuse(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Shared ratio builders (work over every context).


def cross_ratio_val(ctx, pts: Sequence[int], lead: int | None = None):
    """det(03)det(12)/(det(02)det(13)) over any context; slots in tuple order."""
    a, b, c, d = pts
    pre = () if lead is None else (lead,)
    r = (ctx.det(pre + (a, d)) * ctx.det(pre + (b, c))) / (
        ctx.det(pre + (a, c)) * ctx.det(pre + (b, d))
    )
    return ctx.guard_generator(r)


def triple_ratio_val(ctx, pts: Sequence[int]):
    """The 6-point triple ratio over any context."""
    num = den = None
    for pat in cfgmod.TRIPLE_NUM:
        v = ctx.det(tuple(pts[k] for k in pat))
        num = v if num is None else num * v
    for pat in cfgmod.TRIPLE_DEN:
        v = ctx.det(tuple(pts[k] for k in pat))
        den = v if den is None else den * v
    return ctx.guard_generator(num / den)


# ---------------------------------------------------------------------------
# Basis context: canonical expansion of values for exact equality.


class BasisCtx:
    """Refined multiplicative basis for one equality check.

    For the formal backend the determinant symbols are already free, so the
    expansion is the identity.  For the exact backend the registered atoms
    appearing in the compared elements are refined to a coprime basis and
    every atom is re-expressed over it; rational constants factor over an
    integer coprime basis.  Values then have a unique canonical expansion,
    so structural equality of the expansions is field equality (modulo
    torsion, which rationalized groups do not see).
    """

    def __init__(self, ctx, values: Iterable[MulElt]):
        self.ctx = ctx
        self.formal = ctx.kind == "formal"
        fracs: set[Fraction] = set()
        self._atom_exp: dict[int, tuple[tuple, ...]] = {}
        if self.formal:
            for v in values:
                fracs.add(v.frac)
        else:
            atom_ids: set[int] = set()
            for v in values:
                fracs.add(v.frac)
                atom_ids.update(a for a, _ in v.exps)
            polys = [ctx.atoms[a] for a in sorted(atom_ids)]
            basis = coprime_basis_polys(polys)
            self._basis = basis
            for a in sorted(atom_ids):
                _, exps = factor_poly_over_basis(ctx.atoms[a], basis)
                self._atom_exp[a] = tuple(
                    (("b", i), e) for i, e in enumerate(exps) if e
                )
        ints: set[int] = set()
        for f in fracs:
            if abs(f.numerator) > 1:
                ints.add(abs(f.numerator))
            if f.denominator > 1:
                ints.add(f.denominator)
        self._int_basis = coprime_basis_ints(ints) if ints else []

    def _sym_exp(self, sym) -> tuple:
        if self.formal:
            return ((sym, 1),)
        return self._atom_exp.get(sym, ())

    def expand_value(self, v: MulElt) -> dict:
        """Exponent vector of v over the refined basis; the sign is torsion
        and is dropped, the |constant| factors over the integer basis."""
        out: dict = {}
        for s, e in v.exps:
            for b, eb in self._sym_exp(s):
                out[b] = out.get(b, 0) + e * eb
        f = v.frac
        if abs(f.numerator) > 1 or f.denominator > 1:
            for i, e in enumerate(factor_int_over_basis(abs(f.numerator), self._int_basis)):
                if e:
                    out[("z", self._int_basis[i])] = out.get(("z", self._int_basis[i]), 0) + e
            for i, e in enumerate(factor_int_over_basis(f.denominator, self._int_basis)):
                if e:
                    out[("z", self._int_basis[i])] = out.get(("z", self._int_basis[i]), 0) - e
        return {k: e for k, e in out.items() if e}

    def key_canon(self, v: MulElt):
        """Injective canonical key for a field value (sign kept)."""
        if self.formal:
            return v
        out: dict = {}
        for s, e in v.exps:
            for b, eb in self._sym_exp(s):
                out[b] = out.get(b, 0) + e * eb
        return (v.frac, tuple(sorted(out.items())))

    def coeff_canon(self, coeff):
        """Canonical form of an F-coefficient (formal dlog combo or value)."""
        if isinstance(coeff, LinComb):
            if self.formal:
                return coeff
            out = LinComb()
            for key, q in coeff.items():
                _, sym = key
                out = out + LinComb([(dlog_sym(b), Fraction(e) * q) for b, e in self._sym_exp(sym)])
            return out
        return coeff


def sym_order(sym):
    """Total order on basis symbols (works for all backends)."""
    if isinstance(sym, DetSym):
        return (0, sym.idxs)
    if isinstance(sym, tuple):
        return (1, str(sym[0]), sym[1] if isinstance(sym[1], (int, float)) else str(sym[1]))
    return (2, sym)


def make_context(backend: str, config: Config | None = None, m: int = 0, n: int = 0, coeff_mode: str = "value", spot_seed=0):
    if backend == "formal":
        return SymContext(m, n, spot_seed=spot_seed)
    if backend == "exact":
        return QtContext(config, coeff_mode=coeff_mode)
    if backend == "numeric":
        return NumContext(config)
    raise ValueError(f"unknown backend {backend!r}")
