"""Floating-point polylogarithm functionals.

The Bloch-Wigner dilogarithm D2 vanishes on the five-term relation subgroup
over C, and the single-valued trilogarithm L3 on the seven-term subgroup;
composing them with additive characters (log| . | on multiplicative slots)
gives sound necessary conditions for identities that only hold modulo those
subgroups.

Li2 and Li3 are evaluated by region: direct series for |z| <= 1/2, inversion
for |z| >= 2, and accelerated series in between (a Bernoulli series in
-log(1-z) for Li2, the expansion around z = 1 in log z for Li3, both
convergent for |log| < 2*pi).  Absolute error is well under 1e-13 for
|z| <= 10.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BranchCutInput, ExceptionalValue
from .scalars import DualC

PI = math.pi
ZETA2 = PI * PI / 6.0
ZETA3 = 1.2020569031595942854
CATALAN = 0.9159655941772190151

_SERIES_TERMS = 120


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2), by the defining recurrence."""
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2 == 1:
        return Fraction(0)
    acc = Fraction(0)
    binom = 1
    for j in range(n):
        acc += binom * bernoulli(j)
        binom = binom * (n + 1 - j) // (j + 1)
    return -acc / (n + 1)


@lru_cache(maxsize=None)
def zeta_int(k: int) -> float:
    """zeta at an integer <= 2 as a float (negative via Bernoulli numbers)."""
    if k == 2:
        return ZETA2
    if k == 1:
        raise ValueError("zeta(1) diverges")
    if k == 0:
        return -0.5
    if k < 0:
        n = -k
        return float(-bernoulli(n + 1) / (n + 1))
    raise ValueError(f"unsupported zeta argument {k}")


def _on_cut(z: complex) -> bool:
    return z.imag == 0.0 and z.real > 1.0


def _li2_series(z: complex) -> complex:
    acc = 0j
    term = 1.0 + 0j
    for k in range(1, _SERIES_TERMS):
        term *= z
        acc += term / (k * k)
        if abs(term) < 1e-19 * k * k:
            break
    return acc


def _li2_debye(z: complex) -> complex:
    # Li2(z) = sum B_n u^(n+1) / (n+1)!,  u = -log(1-z), |u| < 2*pi
    u = -cmath.log(1 - z)
    acc = 0j
    upow = u
    fact = 1.0
    for n in range(0, _SERIES_TERMS):
        b = bernoulli(n)
        fact *= n + 1
        if b:
            term = float(b) * upow / fact
            acc += term
            if abs(term) < 1e-19:
                break
        upow *= u
    return acc


def li_2(z: complex) -> complex:
    """Principal-branch dilogarithm; errors on the real ray z > 1."""
    z = complex(z)
    if z == 1:
        return complex(ZETA2)
    if _on_cut(z):
        raise BranchCutInput(f"Li2 argument {z} on the branch cut [1, inf)")
    az = abs(z)
    if az <= 0.5:
        return _li2_series(z)
    if az >= 2.0:
        lg = cmath.log(-z)
        return -li_2(1 / z) - ZETA2 - 0.5 * lg * lg
    if z.real <= 0.5:
        return _li2_debye(z)
    w = 1 - z
    return ZETA2 - cmath.log(z) * cmath.log(w) - li_2(w)


def _li3_series(z: complex) -> complex:
    acc = 0j
    term = 1.0 + 0j
    for k in range(1, _SERIES_TERMS):
        term *= z
        acc += term / (k * k * k)
        if abs(term) < 1e-19 * k**3:
            break
    return acc


def _li3_log_series(z: complex) -> complex:
    # Li3(e^u) = zeta(3) + zeta(2) u + (3/2 - log(-u)) u^2/2
    #            + sum_{k>=3} zeta(3-k) u^k / k!,   |u| < 2*pi
    u = cmath.log(z)
    acc = complex(ZETA3) + ZETA2 * u + (1.5 - cmath.log(-u)) * 0.5 * u * u
    upow = u * u
    fact = 2.0
    for k in range(3, _SERIES_TERMS):
        upow *= u
        fact *= k
        zk = zeta_int(3 - k)
        if zk:
            term = zk * upow / fact
            acc += term
            if abs(term) < 1e-19:
                break
    return acc


def li_3(z: complex) -> complex:
    """Principal-branch trilogarithm; errors on the real ray z > 1."""
    z = complex(z)
    if z == 1:
        return complex(ZETA3)
    if _on_cut(z):
        raise BranchCutInput(f"Li3 argument {z} on the branch cut [1, inf)")
    az = abs(z)
    if az <= 0.5:
        return _li3_series(z)
    if az >= 2.0:
        lg = cmath.log(-z)
        return li_3(1 / z) - lg * (PI * PI + lg * lg) / 6.0
    return _li3_log_series(z)


def li_n(z: complex, n: int) -> complex:
    if n == 2:
        return li_2(z)
    if n == 3:
        return li_3(z)
    raise ValueError("only weights 2 and 3 are implemented")


def _guard_arg(z: complex) -> complex:
    z = complex(z)
    if z == 0 or z == 1:
        raise ExceptionalValue(f"polylogarithm functional undefined at {z}")
    return z


def bloch_wigner(z: complex) -> float:
    """D2(z) = Im Li2(z) + arg(1-z) log|z|; vanishes identically on R."""
    z = _guard_arg(z)
    if z.imag == 0.0:
        return 0.0
    return (li_2(z)).imag + cmath.phase(1 - z) * math.log(abs(z))


def sv_l3(z: complex) -> float:
    """Single-valued trilogarithm
    Re(Li3(z) - log|z| Li2(z) - (1/3) log^2|z| log(1-z)); invariant under
    z -> 1/z and under conjugation, and it annihilates the seven-term
    relation subgroup over C.  The third-term sign is forced by the inversion
    invariance (the opposite sign breaks it by O(1))."""
    z = complex(z)
    if z == 1:
        return ZETA3
    z = _guard_arg(z)
    if z.imag == 0.0 and z.real > 1.0:
        # the single-valued function continues across the cut; fold by inversion
        z = 1.0 / z
    lz = math.log(abs(z))
    return (li_3(z) - lz * li_2(z) - (lz * lz / 3.0) * cmath.log(1 - z)).real


# ---------------------------------------------------------------------------
# Functionals on numerically-valued group elements.


@dataclass(frozen=True, slots=True)
class FunctionalValue:
    """A residual together with the sum of absolute contributions."""

    value: float
    condition: float

    @property
    def relative(self) -> float:
        return self.value / self.condition if self.condition > 0 else self.value


def _cval(x) -> complex:
    return x.val if isinstance(x, DualC) else complex(x)


def _accumulate(pairs) -> FunctionalValue:
    total = 0j
    cond = 0.0
    for contribution in pairs:
        total += contribution
        cond += abs(contribution)
    return FunctionalValue(abs(total), cond)


def functional_qf_d2(lc) -> FunctionalValue:
    """sum c * D2(a) on a Q[F] element over C; kills the five-term subgroup."""
    return _accumulate(float(q) * bloch_wigner(_cval(a)) for a, q in lc.items())


def functional_qf_l3(lc) -> FunctionalValue:
    """sum c * L3(a); kills the seven-term subgroup."""
    return _accumulate(float(q) * sv_l3(_cval(a)) for a, q in lc.items())


def functional_b2_tensor(lc) -> FunctionalValue:
    """sum c * D2(a) * log|b| on B2 (x) F*; well defined modulo R2 (x) F*."""
    return _accumulate(
        float(q) * bloch_wigner(_cval(a)) * math.log(abs(_cval(b)))
        for (a, b), q in lc.items()
    )


def functional_f_tensor_b2(lc) -> FunctionalValue:
    """sum c * x * D2(y) on F (x) B2 terms of a MID element."""
    return _accumulate(
        complex(coeff) * bloch_wigner(_cval(key[1]))
        for key, coeff in lc.items()
        if key[0] == "R"
    )


def functional_mid_left(lc, table) -> FunctionalValue:
    """The weight-2 infinitesimal boundary composed with log| . | characters,
    applied to the beta2 (x) F* terms of a MID element over dual numbers;
    well defined modulo rho2 (x) F*."""
    p1, p2 = table.partial2
    contributions = []
    for key, q in lc.items():
        if key[0] != "L":
            continue
        _, a, b = key
        one_minus_a = 1 - a.val
        dl_u = -a.eps / one_minus_a
        dl_a = a.eps / a.val
        inner = p1 * dl_u * math.log(abs(a.val)) + p2 * dl_a * math.log(abs(one_minus_a))
        contributions.append(float(q) * inner * math.log(abs(b.val)))
    return _accumulate(contributions)
