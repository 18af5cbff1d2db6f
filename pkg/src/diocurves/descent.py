"""Canonical heights, two-descent certificates, and rank lower bounds.

The canonical height is the limit of h(x(2^n P)) / 4^n.  Chasing the
doubled point exactly is hopeless (its coordinates gain digits like 4^n),
so the implementation telescopes the limit instead:

    h_{n+1} = 4 h_n + log rho_n - log g_n

where rho_n is the scale-invariant growth factor of one duplication step
and g_n the integer cancellation between its numerator and denominator.
rho_n comes from a normalized floating shadow of the orbit; g_n has
support in a fixed, curve-dependent prime set and is read off exactly
from p-adic shadows.  Every constant in the tail bound is explicit, so a
requested absolute accuracy is honest, not heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from sympy import Poly, Rational, symbols

from .errors import FactorizationIncomplete, FormMismatch, PointNotOnCurve
from .factoring import DEFAULT_BUDGET, factor_best_effort
from .rationals import QQ, log_int, naive_height
from .torsion import (
    halving_obstruction,
    point_order,
    points_with_x,
    torsion_subgroup,
)
from .weierstrass import (
    CurveQ,
    PointQ,
    add,
    clear_denominators,
    invariants,
    is_on_curve,
    map_point,
    sub,
)

_X = symbols("x")


# ---------------------------------------------------------------------------
# duplication data: Bezout cofactors, growth bounds, gcd support


class _Refine(Exception):
    """Internal: a hidden prime of the gcd support surfaced; retry."""

    def __init__(self, factor: int):
        self.factor = factor


@dataclass
class _DuplicationData:
    b: tuple[int, int, int, int]          # b2, b4, b6, b8 of the integral model
    bezout_constant: int                  # C with U F + V g = C, U, V in Z[x]
    support: list[int]                    # known primes of C
    caps: dict[int, int]                  # p -> v_p(C)
    cofactor: int                         # unfactored part of C (1 if none)
    log_rho_max: float
    log_rho_min: float
    step_bound: float                     # |log rho_n - log g_n| <= this

    def refine(self, factor: int, budget: int) -> None:
        """Move newly discovered factors out of the composite cofactor."""
        fac = factor_best_effort(factor, budget)
        rest = self.cofactor
        for p, _ in fac.factors:
            while rest % p == 0:
                rest //= p
            if p not in self.caps:
                v = 0
                c = abs(self.bezout_constant)
                while c % p == 0:
                    c //= p
                    v += 1
                self.caps[p] = v
                self.support.append(p)
        if not fac.complete:
            # keep what is left as the new composite cofactor
            pass
        self.support.sort()
        self.cofactor = rest


_DUP_CACHE: dict[tuple, _DuplicationData] = {}


def _poly_from_int_coeffs(coeffs: list[int]) -> Poly:
    return Poly([Rational(c) for c in coeffs], _X, domain="QQ")


def _duplication_data(E: CurveQ, budget: int) -> _DuplicationData:
    key = E.coefficients()
    hit = _DUP_CACHE.get(key)
    if hit is not None:
        return hit
    inv = invariants(E)
    b2, b4, b6, b8 = (int(inv.b2), int(inv.b4), int(inv.b6), int(inv.b8))
    # x(2P) = F(x) / g(x)
    F = [1, 0, -b4, -2 * b6, -b8]
    g = [4, b2, 2 * b4, b6]
    s, t, h = _poly_from_int_coeffs(F).gcdex(_poly_from_int_coeffs(g))
    assert h.degree() == 0
    hc = Fraction(int(h.all_coeffs()[0].p), int(h.all_coeffs()[0].q))
    sc = [Fraction(int(c.p), int(c.q)) / hc for c in s.all_coeffs()]
    tc = [Fraction(int(c.p), int(c.q)) / hc for c in t.all_coeffs()]
    den = 1
    for c in sc + tc:
        den = den * c.denominator // math.gcd(den, c.denominator)
    U = [int(c * den) for c in sc]
    V = [int(c * den) for c in tc]
    C = den
    # exact check of U F + V g == C over Z
    prod = [0] * 8
    for poly, other in ((U, F), (V, g)):
        shift = 8 - len(poly) - len(other) + 1
        for i, u in enumerate(poly):
            for j, f in enumerate(other):
                prod[shift + i + j] += u * f
    assert prod[:-1] == [0] * 7 and prod[-1] == C, "bezout identity failed"

    fac = factor_best_effort(abs(C), budget)
    support = sorted(p for p, _ in fac.factors)
    caps = {p: e for p, e in fac.factors}
    cofactor = fac.cofactor

    norm_u = sum(abs(c) for c in U)
    norm_v = sum(abs(c) for c in V)
    norm_f = sum(abs(c) for c in F)
    norm_g = sum(abs(c) for c in g)
    log_rho_max = log_int(max(norm_f, norm_g))
    # if |Z| <= zeta0 (max-normalized), |F| >= 1/2 outright; otherwise the
    # Bezout identity C Z^7 = Uh F + Vh G floors the step
    weight = max(1, abs(b4) + 2 * abs(b6) + abs(b8))
    log_zeta0_sq = -log_int(2 * weight)
    log_rho_min = min(-math.log(2.0),
                      log_int(abs(C)) + 3.5 * log_zeta0_sq
                      - log_int(norm_u + norm_v))
    step_bound = max(log_rho_max, -log_rho_min) + log_int(abs(C))
    data = _DuplicationData((b2, b4, b6, b8), C, support, caps, cofactor,
                            log_rho_max, log_rho_min, step_bound)
    if len(_DUP_CACHE) > 512:
        _DUP_CACHE.clear()
    _DUP_CACHE[key] = data
    return data


def _eval_pair_mod(b: tuple[int, int, int, int], X: int, Z: int,
                   mod: int) -> tuple[int, int]:
    """(F(X,Z), G(X,Z)) mod `mod` for the homogeneous duplication pair."""
    b2, b4, b6, b8 = b
    X %= mod
    Z %= mod
    X2, Z2 = X * X % mod, Z * Z % mod
    X3, Z3 = X2 * X % mod, Z2 * Z % mod
    F = (X2 * X2 - b4 * X2 % mod * Z2 - 2 * b6 * X % mod * Z3
         - b8 * Z2 % mod * Z2) % mod
    G = (4 * X3 * Z + b2 * X2 % mod * Z2 + 2 * b4 * X % mod * Z3
         + b6 * Z3 % mod * Z) % mod
    return F, G


def _valuation_capped(n: int, p: int, cap: int) -> int:
    if n == 0:
        return cap
    v = 0
    while v < cap and n % p == 0:
        n //= p
        v += 1
    return v


_HEIGHT_CACHE: dict[tuple, float] = {}


def canonical_height(E: CurveQ, P: PointQ, eps: float = 1e-6,
                     budget: int = DEFAULT_BUDGET) -> float:
    """Canonical height of P with absolute error at most eps.

    Torsion points get exactly 0.0.  The value is normalized so that
    doubling quadruples it and it tracks log max(|num|, den) of x(P).
    """
    if not is_on_curve(E, P):
        raise PointNotOnCurve(f"{P} is not on {E}")
    if P.is_infinity or point_order(E, P) is not None:
        return 0.0
    key = (E.coefficients(), P.x, P.y, eps)
    hit = _HEIGHT_CACHE.get(key)
    if hit is not None:
        return hit
    Ei, M = clear_denominators(E)
    Pi = map_point(E, M, P)
    for _ in range(12):
        try:
            value = _height_run(Ei, Pi, eps, budget)
            break
        except _Refine as r:
            data = _duplication_data(Ei, budget)
            before = (len(data.support), data.cofactor)
            data.refine(r.factor, budget)
            if (len(data.support), data.cofactor) == before:
                raise FactorizationIncomplete(
                    "gcd support of the duplication step would not split")
    else:
        raise FactorizationIncomplete(
            "gcd support of the duplication step would not stabilize")
    if len(_HEIGHT_CACHE) > 4096:
        _HEIGHT_CACHE.clear()
    _HEIGHT_CACHE[key] = value
    return value


def _height_run(Ei: CurveQ, Pi: PointQ, eps: float, budget: int) -> float:
    data = _duplication_data(Ei, budget)
    steps = max(3, math.ceil(math.log(max(data.step_bound, 1.0) / (3 * eps))
                             / math.log(4.0)))

    a, b = Pi.x.numerator, Pi.x.denominator
    total = log_int(max(abs(a), b)) if max(abs(a), b) > 1 else 0.0

    # p-adic shadows: value pair, modulus, remaining exponent
    shadows: dict[int, tuple[int, int, int]] = {}
    for p in data.support:
        cap = data.caps[p]
        k = (steps + 2) * cap + 8
        m = p ** k
        shadows[p] = (a % m, b % m, k)
    wshadow = None
    W = data.cofactor
    if W > 1:
        wshadow = (a % W, b % W)

    dps = 40 + steps + int(
        (data.log_rho_max - min(0.0, data.log_rho_min)) / math.log(10))
    with mpmath.workdps(dps):
        scale = mpmath.mpf(max(abs(a), b))
        xr = mpmath.mpf(a) / scale
        zr = mpmath.mpf(b) / scale
        b2, b4, b6, b8 = data.b
        weight = 0.25
        for _ in range(steps):
            # exact gcd of the step, prime by prime
            g = 1
            pending: dict[int, tuple[int, int, int, int]] = {}
            for p, (X, Z, k) in shadows.items():
                m = p ** k
                F, G = _eval_pair_mod(data.b, X, Z, m)
                v = min(_valuation_capped(F, p, k), _valuation_capped(G, p, k))
                assert v <= data.caps[p]
                pending[p] = (F, G, k, v)
                g *= p ** v
            Fw = Gw = 0
            if wshadow is not None:
                Fw, Gw = _eval_pair_mod(data.b, wshadow[0], wshadow[1], W)
                d = math.gcd(math.gcd(Fw, Gw), W)
                if d > 1:
                    raise _Refine(d)

            Fr = ((xr * xr - b4 * zr * zr) * xr - 2 * b6 * zr ** 3) * xr \
                - b8 * zr ** 4
            Gr = ((4 * xr + b2 * zr) * xr + 2 * b4 * zr * zr) * xr * zr \
                + b6 * zr ** 4
            rho = max(abs(Fr), abs(Gr))
            total += weight * (float(mpmath.log(rho))
                               - (log_int(g) if g > 1 else 0.0))
            xr, zr = Fr / rho, Gr / rho

            for p, (F, G, k, v) in pending.items():
                k2 = k - v
                m2 = p ** k2
                unit = g // p ** v
                inv_unit = pow(unit, -1, m2)
                shadows[p] = ((F // p ** v) % m2 * inv_unit % m2,
                              (G // p ** v) % m2 * inv_unit % m2, k2)
            if wshadow is not None:
                inv_g = pow(g, -1, W)
                wshadow = (Fw * inv_g % W, Gw * inv_g % W)
            weight /= 4.0
    return float(total)


def canonical_height_reference(E: CurveQ, P: PointQ, doublings: int = 8) -> float:
    """Slow exact-arithmetic reference: h(x(2^n P)) / 4^n.

    Only sensible for small curves and points; used to validate the
    production algorithm.
    """
    if P.is_infinity or point_order(E, P) is not None:
        return 0.0
    Q = P
    for _ in range(doublings):
        Q = add(E, Q, Q)
    return naive_height(Q.x) / 4.0 ** doublings


# ---------------------------------------------------------------------------
# height pairing and Gram certificates


def height_pairing(E: CurveQ, P: PointQ, Q: PointQ, eps: float = 1e-3,
                   budget: int = DEFAULT_BUDGET) -> float:
    """The bilinear pairing <P, Q> = (h(P+Q) - h(P) - h(Q)) / 2."""
    each = 2.0 * eps / 3.0
    S = add(E, P, Q)
    if not S.is_infinity:
        return (canonical_height(E, S, each, budget)
                - canonical_height(E, P, each, budget)
                - canonical_height(E, Q, each, budget)) / 2.0
    D = sub(E, P, Q)
    if D.is_infinity:
        return 0.0  # P = Q = -Q: torsion on both slots
    return (canonical_height(E, P, each, budget)
            + canonical_height(E, Q, each, budget)
            - canonical_height(E, D, each, budget)) / 2.0


@dataclass(frozen=True)
class GramCertificate:
    matrix: tuple[tuple[float, ...], ...]
    determinant: float
    error_bound: float
    independent: bool


def _det(rows: list[list[float]]) -> float:
    """Plain fraction-keeping Gaussian elimination determinant."""
    n = len(rows)
    a = [row[:] for row in rows]
    det = 1.0
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[pivot][col] == 0.0:
            return 0.0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            for c in range(col, n):
                a[r][c] -= f * a[col][c]
    return det


def gram_certificate(E: CurveQ, points: Sequence[PointQ], eps: float = 1e-3,
                     budget: int = DEFAULT_BUDGET) -> GramCertificate:
    """Height Gram matrix with a rigorous positive-definiteness verdict.

    `independent` is True only when every leading principal minor clears
    its own perturbation bound, so a True verdict certifies that the
    points generate a rank-len(points) subgroup.
    """
    n = len(points)
    mat = [[0.0] * n for _ in range(n)]
    for i in range(n):
        mat[i][i] = canonical_height(E, points[i], 2.0 * eps / 3.0, budget)
        for j in range(i + 1, n):
            mat[i][j] = mat[j][i] = height_pairing(E, points[i], points[j],
                                                   eps, budget)
    entry_err = eps
    big = max((abs(v) for row in mat for v in row), default=0.0)
    ok = n > 0
    full_det = _det(mat) if n else 0.0
    full_err = 0.0
    for k in range(1, n + 1):
        minor = [row[:k] for row in mat[:k]]
        dk = _det(minor)
        errk = (math.factorial(k) * k * entry_err
                * (big + entry_err) ** (k - 1))
        if k == n:
            full_err = errk
        if not dk > errk:
            ok = False
    return GramCertificate(tuple(tuple(row) for row in mat),
                           full_det, full_err, ok)


# ---------------------------------------------------------------------------
# descent into square classes


def descent_support(E: CurveQ, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Primes at which an on-curve x - e_i difference can have odd valuation.

    2 and everything dividing the integral discriminant (numerator or the
    scaling used to clear denominators).  Raises FactorizationIncomplete
    when the discriminant will not factor within budget.
    """
    Ei, M = clear_denominators(E)
    disc = int(invariants(Ei).disc)
    fac = factor_best_effort(abs(disc), budget)
    if not fac.complete:
        raise FactorizationIncomplete(
            "could not factor the discriminant for descent support",
            partial=fac)
    primes = {2}
    primes.update(p for p, _ in fac.factors)
    primes.update(p for p, _ in factor_best_effort(
        int(1 / M.u), budget).factors)
    return sorted(primes)


def descent_image(E: CurveQ, P: PointQ, support: Sequence[int] | None = None,
                  budget: int = DEFAULT_BUDGET) -> tuple[int, int, int]:
    """Square-class vector of P under the full two-torsion descent map."""
    return halving_obstruction(E, P, support=support, budget=budget)


def _coprime_basis(values: Sequence[int]) -> list[int]:
    """A pairwise-coprime set over which every |value| factors exactly."""
    basis: list[int] = []

    def insert(x: int) -> None:
        if x == 1:
            return
        for i, b in enumerate(basis):
            gcd = math.gcd(x, b)
            if gcd == 1:
                continue
            basis.pop(i)
            insert(gcd)
            insert(b // gcd)
            insert(x // gcd)
            return
        basis.append(x)

    for v in values:
        insert(abs(v))
    return sorted(basis)


def _class_bits(cls: int, basis: list[int]) -> int:
    bits = 1 if cls < 0 else 0
    c = abs(cls)
    for i, b in enumerate(basis):
        if c % b == 0:
            bits |= 1 << (i + 1)
            c //= b
    assert c == 1, "square class escaped its basis"
    return bits


@dataclass(frozen=True)
class IndependenceResult:
    independent: bool          # True: certified; False: merely inconclusive
    rank_gain: int             # new F2 dimensions beyond the torsion image
    pivot_indices: tuple[int, ...]


def independent_mod_two(E: CurveQ, points: Sequence[PointQ],
                        support: Sequence[int] | None = None,
                        budget: int = DEFAULT_BUDGET) -> IndependenceResult:
    """Certify independence of points modulo torsion and doubling.

    Images live in a product of three square-class groups; Gaussian
    elimination over F2 counts the dimensions the points add on top of
    the torsion image.  A full count certifies rank >= len(points); less
    than that proves nothing (the map forgets everything divisible by 2).
    """
    if support is None:
        try:
            support = descent_support(E, budget)
        except FactorizationIncomplete:
            support = None
    torsion = torsion_subgroup(E)
    tors_imgs = [descent_image(E, T, support, budget) for T in torsion.points]
    pt_imgs = [descent_image(E, P, support, budget) for P in points]
    all_classes = [c for img in tors_imgs + pt_imgs for c in img]
    basis = _coprime_basis(all_classes)
    width = len(basis) + 1

    def vector(img: tuple[int, int, int]) -> int:
        out = 0
        for slot, cls in enumerate(img):
            out |= _class_bits(cls, basis) << (slot * width)
        return out

    pivots: dict[int, int] = {}

    def reduce_add(vec: int) -> bool:
        while vec:
            top = vec.bit_length() - 1
            if top in pivots:
                vec ^= pivots[top]
            else:
                pivots[top] = vec
                return True
        return False

    for img in tors_imgs:
        reduce_add(vector(img))
    gained = []
    for idx, img in enumerate(pt_imgs):
        if reduce_add(vector(img)):
            gained.append(idx)
    return IndependenceResult(len(gained) == len(points), len(gained),
                              tuple(gained))


# ---------------------------------------------------------------------------
# rank lower bounds and naive search


@dataclass(frozen=True)
class RankBound:
    bound: int
    method: str                      # "descent", "heights", "descent+heights"
    certificate_indices: tuple[int, ...]


def rank_lower_bound(E: CurveQ, points: Sequence[PointQ], *,
                     eps: float = 1e-3, budget: int = DEFAULT_BUDGET,
                     support: Sequence[int] | None = None) -> RankBound:
    """A certified lower bound for the rank from the given points.

    Tries the two-descent image first (cheap, exact); any points it
    cannot separate are retried with height Gram certificates.
    """
    infinite = [(i, P) for i, P in enumerate(points)
                if not P.is_infinity and point_order(E, P) is None]
    if not infinite:
        return RankBound(0, "descent", ())
    idxs = [i for i, _ in infinite]
    pts = [P for _, P in infinite]

    try:
        res = independent_mod_two(E, pts, support=support, budget=budget)
    except (FormMismatch, FactorizationIncomplete):
        res = IndependenceResult(False, 0, ())
    if res.independent:
        return RankBound(len(pts), "descent", tuple(idxs))

    kept: list[int] = []
    for j in range(len(pts)):
        trial = [pts[k] for k in kept] + [pts[j]]
        cert = gram_certificate(E, trial, eps, budget)
        if cert.independent:
            kept.append(j)
    if res.rank_gain >= len(kept):
        return RankBound(res.rank_gain, "descent",
                         tuple(idxs[j] for j in res.pivot_indices))
    return RankBound(len(kept), "heights", tuple(idxs[j] for j in kept))


def naive_point_search(E: CurveQ, height_bound: float,
                       max_den: int | None = None) -> list[PointQ]:
    """All affine points with naive x-height below the bound.

    Searches x = m / e^2 on the cleared-denominator model (integral models
    only ever have square denominators in x) and maps hits back.
    """
    Ei, M = clear_denominators(E)
    Minv = M.inverse()
    cap = math.floor(math.exp(height_bound))
    out = []
    emax = math.isqrt(cap)
    if max_den is not None:
        emax = min(emax, max_den)
    for e in range(1, emax + 1):
        e2 = e * e
        for m in range(-cap, cap + 1):
            if math.gcd(m, e) != 1:
                continue
            for P in points_with_x(Ei, QQ(m, e2)):
                out.append(map_point(Ei, Minv, P))
    return sorted(set(out), key=lambda P: (P.x, P.y))
