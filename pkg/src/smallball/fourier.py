"""Fourier-analytic machinery: finite-field identities and exponential
bounds, the Esseen integral bound, solution-count hierarchies, level and
dual sets, and the torus-distance norm.

Esseen constant.  The inequality P(X in closed ball of radius beta) <=
C(1) * beta * integral_{|u| <= 1/beta} |E exp(iuX)| du is derived with the
triangular kernel k(t) = max(0, 1 - |t|) (the self-convolution of the
half-unit box).  Its Fourier transform is K(x) = 4 sin^2(x/2) / x^2, which
is nonnegative everywhere and >= K(1) = 4 sin^2(1/2) on [-1, 1]; Parseval
then gives the bound with the explicit constant C(1) = 1 / (4 sin^2(1/2)).
Any valid constant passes the soundness tests; this one is fixed here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import exact_sign_sum_distribution, ball_probability_1d
from .types import (
    BudgetError,
    CoefficientMultiset,
    SignDistribution,
    SoundnessError,
    ValidationError,
)

ESSEEN_C1 = 1.0 / (4.0 * math.sin(0.5) ** 2)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (the base set is exact for n < 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    c = max(2, n + 1)
    while not is_prime(c):
        c += 1
    return c


def _int_entries(A: CoefficientMultiset) -> list[int]:
    out = []
    for e in A.entries:
        if not isinstance(e, Fraction) or e.denominator != 1:
            raise ValidationError("integer coefficient multiset required")
        out.append(int(e))
    return out


@dataclass(frozen=True)
class FpContext:
    """Residues of a scaled integer multiset modulo a prime p.

    Strict contexts satisfy the embedding condition p > 2^n (sum|a_i| + 1) so
    modular probabilities coincide with the integer ones; illustrative
    contexts relax it (needed for exhaustive small-p level-set scans) and
    must not be used for rho comparisons.
    """

    p: int
    residues: tuple[int, ...]
    entries: tuple[int, ...]
    strict: bool

    @staticmethod
    def from_multiset(A: CoefficientMultiset, p: int | None = None) -> "FpContext":
        entries = _int_entries(A)
        n = len(entries)
        floor = 2**n * (sum(abs(a) for a in entries) + 1)
        if p is None:
            p = next_prime(floor)
        strict = p > floor
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        if not strict and p <= 2 * sum(abs(a) for a in entries):
            # below even the wraparound threshold the scans are meaningless
            raise ValidationError(
                f"p={p} is too small even for an illustrative context")
        return FpContext(p, tuple(a % p for a in entries), tuple(entries), strict)

    @property
    def n(self) -> int:
        return len(self.residues)


def _cos_products(ctx: FpContext) -> np.ndarray:
    """prod_i cos(2 pi a_i t / p) for all t in F_p (vectorized)."""
    t = np.arange(ctx.p, dtype=np.float64)
    prod = np.ones(ctx.p)
    for a in ctx.residues:
        prod *= np.cos((2.0 * math.pi * a / ctx.p) * t)
    return prod


def fp_fourier_identity(ctx: FpContext, a_target: int, imag_tol: float = 1e-9):
    """Evaluate rho(a_target) = (1/p) sum_t prod_i cos(2 pi t a_i / p)
    e_p(-t a_target) and compare against the exact convolution probability.

    Returns (fourier_value, exact_probability, abs_difference).
    """
    if ctx.n > 24:
        raise BudgetError("fp_fourier_identity limited to n <= 24")
    if not ctx.strict:
        raise ValidationError("identity check requires a strict embedding context")
    t = np.arange(ctx.p, dtype=np.float64)
    prod = _cos_products(ctx)
    phase = -2.0 * math.pi * (a_target % ctx.p) / ctx.p * t
    val = complex(np.sum(prod * np.cos(phase)), np.sum(prod * np.sin(phase))) / ctx.p
    if abs(val.imag) > imag_tol:
        raise SoundnessError(f"imaginary part {val.imag} exceeds {imag_tol}")
    A = CoefficientMultiset.of(ctx.entries)
    dist = exact_sign_sum_distribution(A, SignDistribution.bernoulli_pm1())
    exact = dist.atoms.get(Fraction(a_target), Fraction(0))
    return val.real, exact, abs(val.real - float(exact))


def fp_exponential_bound(ctx: FpContext) -> float:
    """(1/p) sum_t exp(-2 sum_i ||a_i t / p||^2): an upper bound on rho(A)."""
    if ctx.n > 24:
        raise BudgetError("fp_exponential_bound limited to n <= 24")
    if not ctx.strict:
        raise ValidationError("bound requires a strict embedding context")
    t = np.arange(ctx.p, dtype=np.int64)
    s = np.zeros(ctx.p)
    for a in ctx.residues:
        r = (a * t) % ctx.p
        r = np.minimum(r, ctx.p - r)
        s += (r.astype(np.float64) / ctx.p) ** 2
    return float(np.sum(np.exp(-2.0 * s)) / ctx.p)


def _charfn_abs(A: CoefficientMultiset, xi: SignDistribution):
    """|E exp(iu S)| = prod_i |E exp(iu a_i xi)| as a float function."""
    entries = [float(e) for e in A.entries]
    vals = [(float(v), float(p)) for v, p in xi.support]

    def f(u: float) -> float:
        out = 1.0
        for a in entries:
            re = sum(p * math.cos(u * a * v) for v, p in vals)
            im = sum(p * math.sin(u * a * v) for v, p in vals)
            out *= math.hypot(re, im)
            if out == 0.0:
                return 0.0
        return out

    return f


def _adaptive_simpson(f, a, b, tol, max_depth=22):
    """Adaptive Simpson returning (estimate, error_bound_estimate)."""
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0, abs(delta) / 15.0
        lv, le = rec(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        rv, re = rec(m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        return lv + rv, le + re

    return rec(a, b, fa, fm, fb, whole, tol, max_depth)


@dataclass(frozen=True)
class EsseenBound:
    bound: float
    integral: float
    quad_error: float
    constant: float
    beta: float


def esseen_bound(
    A: CoefficientMultiset,
    beta,
    xi: SignDistribution | None = None,
    tol: float = 1e-10,
) -> EsseenBound:
    """C(1) * beta * integral_{|u| <= 1/beta} |E exp(iuS)| du, an upper bound
    on the closed-ball concentration rho_{1,beta}(A).  The reported bound
    already includes the outward-rounded quadrature error."""
    if A.d != 1:
        raise ValidationError("esseen_bound needs d=1")
    beta = Fraction(beta)
    if beta <= 0:
        raise ValidationError("beta must be positive")
    xi = xi or SignDistribution.bernoulli_pm1()
    f = _charfn_abs(A, xi)
    lim = 1.0 / float(beta)
    est, err = _adaptive_simpson(f, -lim, lim, tol)
    bound = ESSEEN_C1 * float(beta) * (est + err)
    return EsseenBound(bound, est, err, ESSEEN_C1, float(beta))


def check_esseen_soundness(A: CoefficientMultiset, beta, xi=None) -> EsseenBound:
    """Raise SoundnessError if the Esseen bound falls below the exact
    closed-ball probability from the core module."""
    xi = xi or SignDistribution.bernoulli_pm1()
    res = esseen_bound(A, beta, xi)
    exact, _ = ball_probability_1d(A, xi, Fraction(beta))
    if res.bound < float(exact):
        raise SoundnessError(
            f"esseen bound {res.bound} < exact {float(exact)} on {A.entries}")
    return res


def rl_count(A: CoefficientMultiset, l: int, budget: int = 10**8) -> int:
    """Number of ordered 2l-index tuples with equal side sums:
    #{(i_1..i_l, j_1..j_l) in [n]^2l : sum a_i = sum a_j}.

    Computed by meet-in-the-middle: R_l = sum_s N_l(s)^2 where N_l is the
    l-fold sum-count of the multiset.
    """
    if A.d != 1:
        raise ValidationError("rl_count needs d=1")
    if l < 1:
        raise ValidationError("l must be >= 1")
    if A.n ** (2 * l) > budget:
        raise BudgetError(f"n^(2l) = {A.n ** (2 * l)} exceeds budget {budget}")
    counts: dict[Fraction, int] = {Fraction(0): 1}
    for _ in range(l):
        nxt: dict[Fraction, int] = {}
        for v, c in counts.items():
            for a in A.entries:
                key = v + a
                if key in nxt:
                    nxt[key] += c
                else:
                    nxt[key] = c
        counts = nxt
    return sum(c * c for c in counts.values())


def halasz_hierarchy_ratio(A: CoefficientMultiset, l: int) -> float:
    """rho(A) * n^(2l + 1/2) / R_l: bounded along structured families."""
    from .core import concentration_probability

    rho, _ = concentration_probability(A)
    rl = rl_count(A, l)
    return float(rho) * A.n ** (2 * l + 0.5) / rl


@dataclass(frozen=True)
class LevelSetReport:
    m: int
    level_size: int
    dual_size: int
    rho_reference: Fraction | None

    def to_json_dict(self):
        return {
            "m": self.m,
            "level_size": self.level_size,
            "dual_size": self.dual_size,
            "rho_reference": None if self.rho_reference is None
            else f"{self.rho_reference.numerator}/{self.rho_reference.denominator}",
        }


def level_and_dual_sets(
    ctx: FpContext,
    m_max: int,
    scan_budget: int = 10**6,
) -> list[LevelSetReport]:
    """Exact sizes of the level sets S_m = {t : sum_i ||a_i t/p||^2 <= m} and
    dual sets S*_m = {a : sum_{t in S_m} ||a t/p||^2 <= |S_m|/200} by full
    scans over F_p, with the dual inequality |S*_m| * |S_m| <= 8p verified.

    All threshold comparisons are exact integer arithmetic: with r = a t mod
    p and rbar = min(r, p - r), the condition sum (rbar/p)^2 <= m becomes
    sum rbar^2 <= m p^2.
    """
    p = ctx.p
    if p > scan_budget:
        raise BudgetError(f"p={p} exceeds scan budget {scan_budget}")
    t = np.arange(p, dtype=np.int64)
    w = np.zeros(p, dtype=np.int64)
    for a in ctx.residues:
        r = (a * t) % p
        r = np.minimum(r, p - r)
        w = w + r * r
    pp = p * p
    rho_ref = None
    if ctx.strict:
        A = CoefficientMultiset.of(ctx.entries)
        dist = exact_sign_sum_distribution(A, SignDistribution.bernoulli_pm1())
        rho_ref = dist.max_atom()[0]
    reports = []
    for m in range(0, m_max + 1):
        level_mask = w <= m * pp
        level = t[level_mask]
        size = int(level.size)
        dual = 0
        if size:
            if size * p > 4 * 10**8:
                raise BudgetError(
                    f"dual scan cost |S_m| * p = {size * p} exceeds budget")
            thresh = size * pp  # compare 200 * sum rbar^2 <= size * p^2
            a_vals = np.arange(p, dtype=np.int64)
            chunk = max(1, scan_budget // max(size, 1))
            for lo in range(0, p, chunk):
                blk = a_vals[lo:lo + chunk, None] * level[None, :] % p
                blk = np.minimum(blk, p - blk)
                sums = np.sum(blk * blk, axis=1)
                dual += int(np.count_nonzero(200 * sums <= thresh))
            if dual * size > 8 * p:
                raise SoundnessError(
                    f"dual bound violated at m={m}: |S*|={dual}, |S|={size}, p={p}")
        reports.append(LevelSetReport(m, size, dual, rho_ref))
    return reports


def qualifying_level_exists(reports: list[LevelSetReport], p: int) -> bool:
    """Check existence of m with |S_m| e^(-m+2) >= rho * p (strict contexts)."""
    rho = reports[0].rho_reference
    if rho is None:
        raise ValidationError("needs a strict context with rho reference")
    target = float(rho) * p
    return any(r.level_size * math.exp(-r.m + 2) >= target for r in reports)


def norm_rz(x) -> Fraction:
    """Distance to the nearest integer, exact for rationals."""
    x = Fraction(x)
    fl = x - math.floor(x)
    return min(fl, 1 - fl)


def xi_norm(w, xi: SignDistribution) -> float:
    """(E ||w (xi1 - xi2)||_{R/Z}^2)^(1/2); expectation exact, root floating."""
    w = Fraction(w)
    acc = Fraction(0)
    for d, p in xi.difference_law():
        nd = norm_rz(w * d)
        acc += p * nd * nd
    return math.sqrt(float(acc))
