"""Integer factorization with an explicit effort budget.

Trial division handles the smooth part, Brent-cycle Pollard rho splits what
is left, and Miller-Rabin decides primality.  Nothing here is probabilistic
in behaviour: the rho parameters and the witness sets are fixed, so a given
input always produces the same output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ZeroInput

# Below this bound the listed witnesses make Miller-Rabin a proof
# (Sorenson-Webster).  Above it we keep a fixed witness set, which makes the
# test deterministic in behaviour even though it is only "probable prime".
_MR_PROOF_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_EXTRA_BASES = (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)

TRIAL_DIVISION_BOUND = 1_000_000
DEFAULT_BUDGET = 200

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin.  Deterministic below ~3.3e24, fixed witnesses above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_PROOF_BOUND else _MR_BASES + _MR_EXTRA_BASES
    for a in bases:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int, c: int) -> int:
    """One Brent-cycle rho attempt on odd composite n; returns a divisor or n."""
    if n % 2 == 0:
        return 2
    y, m, g, r, q = 2, 128, 1, 1, 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g


@dataclass
class Factorization:
    """Best-effort factorization: prime powers plus an unfactored cofactor.

    Invariant: sign * prod(p**e) * cofactor == n, with every listed p prime
    and cofactor either 1 or a composite the budget could not split.
    """

    sign: int
    factors: list[tuple[int, int]] = field(default_factory=list)
    cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p ** e
        return v * self.cofactor

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


def factor_best_effort(n: int, budget: int = DEFAULT_BUDGET,
                       trial_bound: int = TRIAL_DIVISION_BOUND) -> Factorization:
    """Factor n as far as trial division plus `budget` rho attempts allow.

    Never raises on hard inputs; the leftover lands in .cofactor.
    """
    if n == 0:
        raise ZeroInput("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    found: dict[int, int] = {}

    def record(p: int, e: int = 1) -> None:
        found[p] = found.get(p, 0) + e

    # trial division: 2, 3, then 6k+-1
    for p in (2, 3):
        while n % p == 0:
            record(p)
            n //= p
    p = 5
    while p <= trial_bound and p * p <= n:
        for q in (p, p + 2):
            while n % q == 0:
                record(q)
                n //= q
        p += 6
    if n > 1 and (n < trial_bound * trial_bound or is_probable_prime(n)):
        record(n)
        n = 1

    cofactor = 1
    attempts = 0
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            record(m)
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack.extend([r, r])
            continue
        split = m
        while attempts < budget:
            attempts += 1
            d = _brent_rho(m, attempts)
            if 1 < d < m:
                split = d
                break
        if split == m:
            cofactor *= m
        else:
            stack.extend([split, m // split])
    return Factorization(sign, sorted(found.items()), cofactor)
