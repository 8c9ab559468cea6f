"""Point configurations, determinants, the omission boundary, ratio invariants
and seeded random generation.

A configuration is an ordered tuple of m coordinate vectors in n-space.  Four
scalar kinds are supported: exact rationals, elements of Q(t) (the exact
instance field), complex floats, and first-order complex dual numbers (which
carry a derivation numerically).

Generic position means: every n-subset has a nonzero determinant, and (for
six or more points in 3-space) no permuted triple ratio equals 1.  Cross
ratios automatically avoid {0, 1} once all determinants are nonzero, by the
Pluecker relation, so they need no separate check.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .errors import (
    DegenerateConfiguration,
    ExceptionalValue,
    RetryLimitExceeded,
)
from .freemod import LinComb
from .scalars import DualC, Poly, RatFunc

RETRY_BUDGET = 100

# index patterns of the 6-point triple ratio: numerator and denominator triples
TRIPLE_NUM = ((0, 1, 3), (1, 2, 4), (2, 0, 5))
TRIPLE_DEN = ((0, 1, 4), (1, 2, 5), (2, 0, 3))


def stable_seed(*parts) -> int:
    """Platform-stable integer seed derived from arbitrary printable parts."""
    blob = ":".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


@dataclass(frozen=True, slots=True)
class Config:
    """Ordered tuple of m points, each a coordinate tuple of length n."""

    points: tuple[tuple, ...]

    @staticmethod
    def make(rows: Iterable[Iterable]) -> "Config":
        return Config(tuple(tuple(r) for r in rows))

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points[0])

    def det(self, indices: Sequence[int]):
        """Determinant of the selected n x n matrix, rows in the given order."""
        idxs = tuple(indices)
        if len(idxs) != self.n:
            raise IndexError(f"need {self.n} indices, got {len(idxs)}")
        if len(set(idxs)) != len(idxs):
            raise IndexError(f"repeated point index in {idxs}")
        rows = [self.points[i] for i in idxs]
        if self.n == 2:
            return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
        if self.n == 3:
            a, b, c = rows
            return (
                a[0] * (b[1] * c[2] - b[2] * c[1])
                - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0])
            )
        raise IndexError(f"unsupported dimension {self.n}")

    def omit(self, i: int) -> "Config":
        return Config(self.points[:i] + self.points[i + 1 :])

    def subset(self, idxs: Sequence[int]) -> "Config":
        return Config(tuple(self.points[i] for i in idxs))

    def apply_gl(self, g: Sequence[Sequence]) -> "Config":
        """Transform every point by the matrix g (acting on coordinates)."""
        out = []
        for p in self.points:
            out.append(tuple(sum(g[i][j] * p[j] for j in range(self.n)) for i in range(self.n)))
        return Config(tuple(out))

    def to_text(self) -> str:
        kind = scalar_kind(self.points[0][0])
        lines = [f"polyprism-config {kind} m={self.m} n={self.n}"]
        for p in self.points:
            lines.append(" ".join(_coord_text(c) for c in p))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "Config":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "polyprism-config":
            raise ValueError("not a config serialization")
        kind = head[1]
        pts = []
        for ln in lines[1:]:
            pts.append(tuple(_coord_parse(tok, kind) for tok in ln.split()))
        return Config(tuple(pts))


def scalar_kind(x) -> str:
    if isinstance(x, Fraction):
        return "rat"
    if isinstance(x, RatFunc):
        return "ratfunc"
    if isinstance(x, DualC):
        return "dual"
    return "complex"


def _coord_text(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, RatFunc):
        num = ",".join(str(q) for q in c.num.coeffs) or "0"
        if c.den.is_one():
            return num
        den = ",".join(str(q) for q in c.den.coeffs)
        return f"{num}/{den}"
    if isinstance(c, DualC):
        return f"{c.val.real!r},{c.val.imag!r},{c.eps.real!r},{c.eps.imag!r}"
    z = complex(c)
    return f"{z.real!r},{z.imag!r}"


def _coord_parse(tok: str, kind: str):
    if kind == "rat":
        return Fraction(tok)
    if kind == "ratfunc":
        if "/" in tok:
            num, den = tok.split("/")
        else:
            num, den = tok, "1"
        from .scalars import ratfunc

        return ratfunc(
            Poly.make(Fraction(q) for q in num.split(",")),
            Poly.make(Fraction(q) for q in den.split(",")),
        )
    vals = [float(v) for v in tok.split(",")]
    if kind == "dual":
        return DualC(complex(vals[0], vals[1]), complex(vals[2], vals[3]))
    return complex(vals[0], vals[1])


# ---------------------------------------------------------------------------
# Boundary.


def omit_key(key, i: int):
    if isinstance(key, Config):
        return key.omit(i)
    return key[:i] + key[i + 1 :]


def boundary(chain, base: int = 0) -> LinComb:
    """Signed sum of point omissions, sign (-1)**(i + base), i from 0.

    Accepts a Config, an index tuple, or a LinComb over either.
    """
    if not isinstance(chain, LinComb):
        chain = LinComb.single(chain)

    def one(key):
        size = key.m if isinstance(key, Config) else len(key)
        return LinComb(
            [(omit_key(key, i), Fraction((-1) ** (i + base))) for i in range(size)]
        )

    return chain.map_linear(one)


# ---------------------------------------------------------------------------
# Ratio invariants on concrete configurations.


def _guard_nonzero(value, what: str):
    if _is_zero(value):
        raise DegenerateConfiguration(f"vanishing determinant in {what}")
    return value


def _is_zero(x) -> bool:
    if isinstance(x, DualC):
        return x.val == 0
    return not x if not isinstance(x, complex) else x == 0


def _is_one(x) -> bool:
    if isinstance(x, DualC):
        return x.val == 1
    if isinstance(x, complex):
        return x == 1
    if isinstance(x, RatFunc):
        return x.is_one()
    return x == 1


def cross_ratio(config: Config, idxs: Sequence[int] = (0, 1, 2, 3), lead: int | None = None):
    """Projective cross ratio det(03)det(12) / (det(02)det(13)).

    With a lead index, 2x2 determinants become 3x3 with the lead point in the
    first slot.  Raises on vanishing determinants and on values in {0, 1}.
    """
    a, b, c, d = idxs
    pre = () if lead is None else (lead,)
    d03 = _guard_nonzero(config.det(pre + (a, d)), "cross ratio")
    d12 = _guard_nonzero(config.det(pre + (b, c)), "cross ratio")
    d02 = _guard_nonzero(config.det(pre + (a, c)), "cross ratio")
    d13 = _guard_nonzero(config.det(pre + (b, d)), "cross ratio")
    r = (d03 * d12) / (d02 * d13)
    if _is_zero(r) or _is_one(r):
        raise ExceptionalValue(f"cross ratio {r} lies in {{0, 1}}")
    return r


@dataclass(frozen=True, slots=True)
class ProjectedConfig:
    """View of a 3-space configuration through the line of one point.

    Determinants of the projection are the 3x3 determinants with the center
    point in the leading slot.
    """

    base: Config
    center: int

    def det(self, indices: Sequence[int]):
        return self.base.det((self.center,) + tuple(indices))

    def cross_ratio(self, idxs: Sequence[int]):
        return cross_ratio(self.base, idxs, lead=self.center)


def project_from(config: Config, i: int) -> ProjectedConfig:
    if config.n != 3:
        raise IndexError("projection is defined for 3-space configurations")
    if i < 0 or i >= config.m:
        raise IndexError(f"point index {i} out of range")
    return ProjectedConfig(config, i)


def triple_ratio_arg(config: Config, idxs: Sequence[int] = (0, 1, 2, 3, 4, 5)):
    """The 6-point 3-space determinant ratio (one term, before alternation)."""
    num = den = None
    for pat in TRIPLE_NUM:
        v = _guard_nonzero(config.det(tuple(idxs[k] for k in pat)), "triple ratio")
        num = v if num is None else num * v
    for pat in TRIPLE_DEN:
        v = _guard_nonzero(config.det(tuple(idxs[k] for k in pat)), "triple ratio")
        den = v if den is None else den * v
    r = num / den
    if _is_zero(r) or _is_one(r):
        raise ExceptionalValue(f"triple ratio {r} lies in {{0, 1}}")
    return r


# ---------------------------------------------------------------------------
# Random generation.


def _rand_coord(rng: random.Random, kind: str):
    if kind == "rat":
        return Fraction(rng.randint(-9, 9))
    if kind == "ratfunc":
        return RatFunc.from_poly(Poly.make([rng.randint(-5, 5), rng.randint(-5, 5)]))
    if kind == "complex":
        return complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
    if kind == "dual":
        return DualC(
            complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)),
            complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)),
        )
    raise ValueError(f"unknown scalar kind {kind!r}")


def _dets_ok(config: Config, tol: float) -> bool:
    for idxs in combinations(range(config.m), config.n):
        d = config.det(idxs)
        if isinstance(d, DualC):
            if abs(d.val) <= tol:
                return False
        elif isinstance(d, complex):
            if abs(d) <= tol:
                return False
        elif not d:
            return False
    return True


def _triple_ratios_ok(config: Config, tol: float) -> bool:
    """No permuted triple ratio of any 6-subset equals 1 (0 is impossible)."""
    exact = scalar_kind(config.points[0][0]) in ("rat", "ratfunc")
    for sub in combinations(range(config.m), 6):
        dets: dict[tuple, object] = {}
        seen: set = set()
        for perm in permutations(sub):
            numk = tuple(sorted(tuple(sorted((perm[a], perm[b], perm[c]))) for a, b, c in TRIPLE_NUM))
            denk = tuple(sorted(tuple(sorted((perm[a], perm[b], perm[c]))) for a, b, c in TRIPLE_DEN))
            sig = (numk, _slots_sign(perm, TRIPLE_NUM), denk, _slots_sign(perm, TRIPLE_DEN))
            if sig in seen:
                continue
            seen.add(sig)
            num = den = None
            for pat in TRIPLE_NUM:
                key = tuple(perm[k] for k in pat)
                v = dets.get(key)
                if v is None:
                    v = config.det(key)
                    dets[key] = v
                num = v if num is None else num * v
            for pat in TRIPLE_DEN:
                key = tuple(perm[k] for k in pat)
                v = dets.get(key)
                if v is None:
                    v = config.det(key)
                    dets[key] = v
                den = v if den is None else den * v
            if exact:
                if isinstance(num, RatFunc):
                    if num == den:
                        return False
                elif num == den:
                    return False
            else:
                nv = num.val if isinstance(num, DualC) else num
                dv = den.val if isinstance(den, DualC) else den
                if abs(nv - dv) <= tol * (abs(nv) + abs(dv)):
                    return False
    return True


def _slots_sign(perm, patterns) -> int:
    # orientation signature of three determinant slots relative to sorted
    # indices; used to dedupe equivalent permutations in the genericity scan
    sig = 1
    for pat in patterns:
        trip = tuple(perm[k] for k in pat)
        srt = sorted(trip)
        sig *= 1 if list(trip) in (srt, [srt[1], srt[2], srt[0]], [srt[2], srt[0], srt[1]]) else -1
    return sig


def is_generic(config: Config, tol: float = 1e-3) -> bool:
    if not _dets_ok(config, tol):
        return False
    if config.n == 3 and config.m >= 6:
        return _triple_ratios_ok(config, tol)
    return True


def random_generic(m: int, n: int, seed, kind: str = "rat", retries: int = RETRY_BUDGET) -> Config:
    """Seeded random configuration in generic position; deterministic per seed."""
    if m < n or n < 2:
        raise ValueError(f"need m >= n >= 2, got m={m}, n={n}")
    rng = random.Random(stable_seed("config", m, n, kind, seed))
    for _ in range(retries):
        cfg = Config(tuple(tuple(_rand_coord(rng, kind) for _ in range(n)) for _ in range(m)))
        if is_generic(cfg):
            return cfg
    raise RetryLimitExceeded(f"no generic ({m},{n}) {kind} configuration in {retries} tries")


def random_gl(n: int, seed, kind: str = "rat", retries: int = RETRY_BUDGET):
    """Random invertible n x n matrix with small integer entries."""
    rng = random.Random(stable_seed("gl", n, kind, seed))
    for _ in range(retries):
        g = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        if n == 2:
            d = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        else:
            d = (
                g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
                - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
                + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
            )
        if d:
            if kind == "rat":
                return tuple(tuple(Fraction(x) for x in row) for row in g)
            if kind == "ratfunc":
                return tuple(tuple(RatFunc.const(x) for x in row) for row in g)
            return tuple(tuple(complex(x) for x in row) for row in g)
    raise RetryLimitExceeded("no invertible matrix found")
