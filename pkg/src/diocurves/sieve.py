"""Point counts over prime fields and the Mestre-Nagao rank-selection sum.

Everything here works on an integer-coefficient model obtained by clearing
denominators; primes dividing that model's discriminant are treated as bad
and skipped.  That convention is sound for every use in this package (the
skipped set can only be slightly too large, never too small).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadReduction
from .triples import Triple, induced_curves
from .weierstrass import CurveQ, clear_denominators, invariants


def primes_upto(n: int) -> list[int]:
    """All primes <= n by a plain sieve."""
    if n < 2:
        return []
    flags = bytearray([1]) * (n + 1)
    flags[0] = flags[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i:: i] = bytes(len(range(i * i, n + 1, i)))
    return [i for i in range(2, n + 1) if flags[i]]


_INTEGRAL_CACHE: dict[tuple, tuple] = {}


def _integral_data(E: CurveQ) -> tuple[tuple[int, ...], tuple[int, int, int], int]:
    """Integer model coefficients, its (b2, b4, b6), and its discriminant."""
    key = E.coefficients()
    hit = _INTEGRAL_CACHE.get(key)
    if hit is not None:
        return hit
    Ei, _ = clear_denominators(E)
    coeffs = tuple(int(a) for a in Ei.coefficients())
    inv = invariants(Ei)
    data = (coeffs, (int(inv.b2), int(inv.b4), int(inv.b6)), int(inv.disc))
    if len(_INTEGRAL_CACHE) > 4096:
        _INTEGRAL_CACHE.clear()
    _INTEGRAL_CACHE[key] = data
    return data


# below this, the pure-python loop beats numpy's setup cost
_NUMPY_THRESHOLD = 1024


def count_points_fp(E: CurveQ, p: int) -> int:
    """#E(F_p) including the point at infinity.

    Raises BadReduction when p divides the integral model's discriminant.
    """
    coeffs, (b2, b4, b6), disc = _integral_data(E)
    if p < 2:
        raise BadReduction(f"{p} is not a prime")
    if disc % p == 0:
        raise BadReduction(f"bad reduction at {p}")
    if p == 2:
        a1, a2, a3, a4, a6 = [c % 2 for c in coeffs]
        count = 1
        for x in (0, 1):
            for y in (0, 1):
                lhs = (y * y + a1 * x * y + a3 * y) % 2
                rhs = (x ** 3 + a2 * x * x + a4 * x + a6) % 2
                if lhs == rhs:
                    count += 1
        return count
    # odd p: complete the square; fibre sizes come from the quadratic
    # character of f(x) = 4x^3 + b2 x^2 + 2b4 x + b6
    c3, c2, c1, c0 = 4 % p, b2 % p, (2 * b4) % p, b6 % p
    if p >= _NUMPY_THRESHOLD:
        x = np.arange(p, dtype=np.int64)
        sq = np.zeros(p, dtype=np.int8)
        sq[(x * x) % p] = 1
        f = ((c3 * x + c2) % p * x + c1) % p
        f = (f * x + c0) % p
        chi = np.where(f == 0, 0, np.where(sq[f] == 1, 1, -1))
        return int(p + 1 + chi.sum())
    sq = bytearray(p)
    for i in range(p):
        sq[i * i % p] = 1
    total = 0
    for x in range(p):
        f = ((c3 * x + c2) * x + c1) * x % p
        f = (f + c0) % p
        if f:
            total += 1 if sq[f] else -1
    return p + 1 + total


def trace_of_frobenius(E: CurveQ, p: int) -> int:
    """a_p = p + 1 - #E(F_p); |a_p| <= 2 sqrt(p) by Hasse."""
    a = p + 1 - count_points_fp(E, p)
    assert a * a <= 4 * p
    return a


def summand_forms(E: CurveQ, p: int) -> tuple[float, float]:
    """Both closed forms of the per-prime sieve summand.

    (1 - (p-1)/#E(F_p)) log p and ((2 - a_p)/(p + 1 - a_p)) log p are
    equal as rational multiples of log p; returning both lets callers
    confirm the floating-point evaluations agree too.
    """
    n = count_points_fp(E, p)
    a = p + 1 - n
    logp = math.log(p)
    return ((1.0 - (p - 1) / n) * logp, ((2 - a) / (p + 1 - a)) * logp)


@dataclass(frozen=True)
class SieveResult:
    value: float
    primes_used: int
    primes_skipped: int


def mestre_nagao_sum(E: CurveQ, limit: int) -> SieveResult:
    """The rank-selection sum over good primes p <= limit.

    Each good prime contributes (1 - (p-1)/#E(F_p)) log p; large values
    correlate with high rank.  Summation is in ascending prime order so
    the float result is reproducible bit for bit.
    """
    total = 0.0
    used = skipped = 0
    for p in primes_upto(limit):
        try:
            n = count_points_fp(E, p)
        except BadReduction:
            skipped += 1
            continue
        used += 1
        total += (1.0 - (p - 1) / n) * math.log(p)
    return SieveResult(total, used, skipped)


@dataclass(frozen=True)
class ScoredTriple:
    triple: Triple
    score: float


def _triple_sort_serial(t: Triple) -> str:
    from .rationals import format_rational
    return ",".join(format_rational(v) for v in t.elements)


def sieve_candidates(triples: Sequence[Triple], limit: int = 1000,
                     keep: float = 0.1) -> list[ScoredTriple]:
    """Score triples by the rank-selection sum and keep the top fraction.

    Scores within 1e-12 of each other count as tied; ties break by the
    serialized triple so the output order never depends on dict order or
    summation quirks.
    """
    scored = []
    for t in triples:
        E = induced_curves(t).curve
        s = mestre_nagao_sum(E, limit).value
        scored.append(ScoredTriple(t, s))
    def key(st: ScoredTriple):
        return (-round(st.score / 1e-12), _triple_sort_serial(st.triple))
    scored.sort(key=key)
    count = max(1, math.ceil(keep * len(scored))) if scored else 0
    return scored[:count]
