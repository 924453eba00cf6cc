"""Generalized arithmetic progressions: algebra, forward constructions,
inverse fitting with certificates, the structured-multiset census, and
geometric-progression concentration in quadratic integer rings.

The inverse fit is a certificate-producing heuristic: the inverse theorems
guarantee existence of a small proper symmetric GAP non-constructively, so
the promise here is only "find a certificate at least as good as the
planted one on planted instances", verified independently by membership
recounts.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import bernoulli_int_counts, exact_sign_sum_distribution
from .types import (
    BudgetError,
    CoefficientMultiset,
    SignDistribution,
    ValidationError,
)

DEFAULT_MATERIALIZE_BUDGET = 10**6


@dataclass(frozen=True)
class Gap:
    """Symmetric-by-default GAP: {offset + sum m_i g_i : |m_i| <= M_i}."""

    generators: tuple[Fraction, ...]
    bounds: tuple[int, ...]
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        if len(self.generators) != len(self.bounds):
            raise ValidationError("generators and bounds must align")
        if any(b < 0 for b in self.bounds):
            raise ValidationError("bounds must be non-negative")

    @staticmethod
    def of(generators, bounds, offset=0) -> "Gap":
        return Gap(tuple(Fraction(g) for g in generators),
                   tuple(int(b) for b in bounds), Fraction(offset))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def volume(self) -> int:
        v = 1
        for b in self.bounds:
            v *= 2 * b + 1
        return v

    @property
    def symmetric(self) -> bool:
        return self.offset == 0

    def dilate(self, t: int) -> "Gap":
        if not self.symmetric:
            raise ValidationError("dilate requires a symmetric GAP")
        if t < 1:
            raise ValidationError("dilate factor must be a positive integer")
        return Gap(self.generators, tuple(t * b for b in self.bounds), self.offset)

    def contains(self, value, budget: int = DEFAULT_MATERIALIZE_BUDGET) -> bool:
        pts, _ = gap_materialize(self, budget)
        return Fraction(value) in pts


def gap_materialize(Q: Gap, budget: int = DEFAULT_MATERIALIZE_BUDGET):
    """Exact point set of the box image; proper iff |points| = volume."""
    if Q.volume > budget:
        raise BudgetError(f"volume {Q.volume} exceeds budget {budget}")
    pts = {Q.offset}
    for g, M in zip(Q.generators, Q.bounds):
        pts = {v + m * g for v in pts for m in range(-M, M + 1)}
    return frozenset(pts), len(pts) == Q.volume


def gap_is_proper(Q: Gap, budget: int = DEFAULT_MATERIALIZE_BUDGET) -> bool:
    """Properness: by materialization within budget, else by an exact
    pairwise-relation certificate (supported for rank <= 2)."""
    if Q.volume <= budget:
        return gap_materialize(Q, budget)[1]
    if Q.rank == 1:
        return Q.generators[0] != 0
    if Q.rank == 2:
        g1, g2 = Q.generators
        if g1 == 0 or g2 == 0:
            return False
        # A collision needs c1 g1 + c2 g2 = 0 with |c_i| <= 2 M_i, not both 0;
        # the minimal relation is (q, -p) where g1/g2 = p/q reduced.
        ratio = Fraction(g1, g2)
        p, q = ratio.numerator, ratio.denominator
        return not (abs(q) <= 2 * Q.bounds[0] and abs(p) <= 2 * Q.bounds[1])
    raise BudgetError("properness beyond rank 2 requires materialization")


def gap_forward_sample(Q: Gap, n: int, seed: int,
                       budget: int = DEFAULT_MATERIALIZE_BUDGET):
    """Sample n entries uniformly from the points of a proper GAP, compute
    the exact concentration rho, and the quality statistic
    rho * n^(r/2) * |Q| (order 1 by the forward pigeonhole construction)."""
    pts, proper = gap_materialize(Q, budget)
    if not proper:
        raise ValidationError("forward sampling requires a proper GAP")
    pool = sorted(pts)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(pool), size=n)
    entries = [pool[i] for i in idx]
    A = CoefficientMultiset.of(entries)
    dist = exact_sign_sum_distribution(A, SignDistribution.bernoulli_pm1())
    rho = dist.max_atom()[0]
    quality = float(rho) * n ** (Q.rank / 2) * len(pool)
    return A, rho, quality


@dataclass(frozen=True)
class GapFitCertificate:
    gap: Gap
    covered: int
    epsilon_achieved: Fraction
    rho: Fraction
    quality: float

    def to_json_dict(self):
        return {
            "generators": [str(g) for g in self.gap.generators],
            "bounds": list(self.gap.bounds),
            "volume": self.gap.volume,
            "rank": self.gap.rank,
            "covered": self.covered,
            "epsilon_achieved": str(self.epsilon_achieved),
            "rho": f"{self.rho.numerator}/{self.rho.denominator}",
            "quality": self.quality,
        }


def _gcd_all(values) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, abs(v))
    return g


def _rank1_fit(entries: list[int], keep: int):
    """Best symmetric rank-1 GAP covering >= keep entries (greedy drop of the
    largest |m| outliers)."""
    best = None
    work = sorted(entries, key=abs)
    for drop in range(0, len(entries) - keep + 1):
        kept = work[:len(entries) - drop]
        g = _gcd_all(kept)
        if g == 0:
            cand = Gap.of([1], [0])
        else:
            M = max(abs(v) // g for v in kept)
            cand = Gap.of([g], [M])
        if best is None or cand.volume < best[0].volume:
            best = (cand, len(kept))
        if len(kept) == keep:
            break
    return best


def _rank2_candidates(entries: list[int]):
    """Candidate coarse generators for a rank-2 fit: cluster centers from the
    sorted entry sequence plus large pairwise differences."""
    cands = set()
    uniq = sorted(set(entries))
    if len(uniq) >= 2:
        gaps_ = [uniq[i + 1] - uniq[i] for i in range(len(uniq) - 1)]
        big = max(gaps_)
        if big > 4 * max(1, min(gaps_)):
            # split into clusters at jumps comparable to the largest
            centers = []
            start = 0
            for i, g in enumerate(gaps_):
                if g > big // 2:
                    cluster = uniq[start:i + 1]
                    centers.append(cluster[len(cluster) // 2])
                    start = i + 1
            cluster = uniq[start:]
            centers.append(cluster[len(cluster) // 2])
            G = _gcd_all(c for c in centers if c != 0)
            if G > 1:
                cands.add(G)
            for c in centers:
                if abs(c) > 1:
                    cands.add(abs(c))
    for x, y in itertools.combinations(uniq[:60], 2):
        d = abs(x - y)
        if d > 1:
            cands.add(d)
    return cands


def _rank2_fit(entries: list[int], keep: int):
    best = None
    for G in _rank2_candidates(entries):
        resid = []
        quot = []
        for v in entries:
            m2 = round(Fraction(v, G))  # nearest multiple, exact
            resid.append(v - m2 * G)
            quot.append(m2)
        order = sorted(range(len(entries)), key=lambda i: (abs(resid[i]), abs(quot[i])))
        kept = order[:keep] if keep < len(entries) else order
        g1 = _gcd_all(resid[i] for i in kept)
        M2 = max(abs(quot[i]) for i in kept)
        if g1 == 0:
            cand = Gap.of([1, G], [0, M2])
        else:
            M1 = max(abs(resid[i]) // g1 for i in kept)
            cand = Gap.of([g1, G], [M1, M2])
        if best is None or cand.volume < best[0].volume:
            best = (cand, len(kept))
    return best


def gap_fit(
    A: CoefficientMultiset,
    epsilon,
    max_rank: int = 2,
    budget: int = DEFAULT_MATERIALIZE_BUDGET,
) -> GapFitCertificate:
    """Search for a small proper symmetric GAP containing all but epsilon*n
    entries; always returns a certificate (fallback: rank-1 with generator
    gcd(entries)).  Coverage and volume in the certificate are re-verified by
    independent membership tests."""
    if A.d != 1:
        raise ValidationError("gap_fit needs d=1 integer entries")
    entries = []
    for e in A.entries:
        if e.denominator != 1:
            raise ValidationError("gap_fit needs integer entries")
        entries.append(int(e))
    epsilon = Fraction(epsilon)
    if not 0 <= epsilon < 1:
        raise ValidationError("epsilon must lie in [0, 1)")
    if max_rank < 1 or max_rank > 3:
        raise ValidationError("max_rank must be 1, 2, or 3")
    n = len(entries)
    keep = n - math.floor(epsilon * n)
    candidates = [_rank1_fit(entries, keep)]
    if max_rank >= 2 and len(set(entries)) > 2:
        c2 = _rank2_fit(entries, keep)
        # rank-2 certificates must stay materializable for verification
        if c2 is not None and c2[0].volume <= budget:
            candidates.append(c2)
    best = min(candidates, key=lambda c: c[0].volume)
    gap = best[0]
    if not gap_is_proper(gap, budget):
        # fall back to the always-proper rank-1 gcd cover
        gap = _rank1_fit(entries, n)[0]
    # independent verification by membership recount
    try:
        pts, _ = gap_materialize(gap, budget)
        covered = sum(1 for v in entries if Fraction(v) in pts)
    except BudgetError:
        # volume too large to materialize: rank-1 membership is divisibility
        g = int(gap.generators[0])
        M = gap.bounds[0]
        covered = sum(1 for v in entries if g != 0 and v % g == 0
                      and abs(v) // g <= M)
    rho, _ = _rho_int(entries)
    eps_achieved = Fraction(n - covered, n)
    quality = float(rho) * gap.volume * n ** (gap.rank / 2)
    return GapFitCertificate(gap, covered, eps_achieved, rho, quality)


def _rho_int(entries: list[int]) -> tuple[Fraction, int]:
    counts = bernoulli_int_counts(entries)
    best = max(counts.values())
    arg = min(v for v, c in counts.items() if c == best)
    return Fraction(best, 2 ** len(entries)), arg


def structured_multiset_census(
    n: int,
    M: int,
    rho_grid,
    budget: int = 10**7,
):
    """For each rho0 in the grid, the exact number of sorted multisets of
    nonzero integers in [-M, M] with rho(A) >= rho0, with the counting-bound
    shape (rho0^-1 n^-1/2)^n emitted alongside."""
    universe = [x for x in range(-M, M + 1) if x != 0]
    total = math.comb(len(universe) + n - 1, n)
    if total > budget:
        raise BudgetError(f"census universe {total} exceeds budget {budget}")
    grid = sorted((Fraction(r) for r in rho_grid), reverse=True)
    rhos = []
    for combo in itertools.combinations_with_replacement(universe, n):
        counts = bernoulli_int_counts(list(combo))
        rhos.append(Fraction(max(counts.values()), 2**n))
    rows = []
    for rho0 in grid:
        cnt = sum(1 for r in rhos if r >= rho0)
        shape = float(rho0) ** (-n) * n ** (-n / 2) if rho0 > 0 else float("inf")
        rows.append((rho0, cnt, shape))
    return rows


def geometric_progression_rho(x, n: int, quad: tuple[int, int] | None = None,
                              budget: int = 10**7) -> Fraction:
    """Exact rho of sum_{j=0..n} xi_j x^j for Bernoulli signs.

    x is either an exact rational, or (with quad=(c1, c0)) the root of the
    monic quadratic t^2 = c1 t + c0, in which case arithmetic is exact in
    the quotient ring Z[t]/(t^2 - c1 t - c0): elements are integer pairs
    (u, v) meaning u + v t and equality is pairwise.
    """
    if n < 0:
        raise ValidationError("n must be >= 0")
    if quad is None:
        xf = Fraction(x)
        powers = [xf**j for j in range(n + 1)]
        counts: dict[Fraction, int] = {Fraction(0): 1}
        for a in powers:
            if len(counts) * 2 > budget:
                raise BudgetError("support exceeds budget")
            nxt: dict[Fraction, int] = {}
            for v, c in counts.items():
                for s in (v + a, v - a):
                    nxt[s] = nxt.get(s, 0) + c
            counts = nxt
        return Fraction(max(counts.values()), 2 ** (n + 1))
    c1, c0 = quad
    powers2: list[tuple[int, int]] = [(1, 0)]
    for _ in range(n):
        u, v = powers2[-1]
        powers2.append((v * c0, u + v * c1))
    counts2: dict[tuple[int, int], int] = {(0, 0): 1}
    for (pu, pv) in powers2:
        if len(counts2) * 2 > budget:
            raise BudgetError("support exceeds budget")
        nxt2: dict[tuple[int, int], int] = {}
        for (u, v), c in counts2.items():
            for su, sv in ((u + pu, v + pv), (u - pu, v - pv)):
                nxt2[(su, sv)] = nxt2.get((su, sv), 0) + c
        counts2 = nxt2
    return Fraction(max(counts2.values()), 2 ** (n + 1))
