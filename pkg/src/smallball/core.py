"""Exact laws of random signed sums and small-ball suprema in 1-D and 2-D.

Ball convention: all interval/disk probabilities are computed over CLOSED
balls.  The extremal identity sup_A P(S_A in ball of radius R) =
2^-n * S(n, floor(R)+1) for unit-floor coefficient multisets is attained
exactly (at the all-ones multiset) under the closed convention for every
rational R, while under the open convention it fails at integer R; the
lattice-supported test families make the closed maximum equal to the open
supremum.

2-D candidate-center argument: a closed disk of radius R maximizing covered
atom mass can be translated until either (a) a single covered atom remains
and centering on an atom is optimal, or (b) two covered atoms lie on the
boundary, in which case the center is one of the two points at distance
exactly R from both.  Coincident atoms are merged with their multiplicity
weight during convolution, so the scan over support points plus pairwise
equidistant centers is exhaustive.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .types import (
    BudgetError,
    CoefficientMultiset,
    ExactDistribution,
    SignDistribution,
    ValidationError,
    Value,
    hypot2,
    isqrt_fraction_exact,
    quad_le,
)

DEFAULT_ATOM_BUDGET = 10**7
DEFAULT_2D_ENUM_LIMIT = 22


def exact_sign_sum_distribution(
    A: CoefficientMultiset,
    xi: SignDistribution,
    atom_budget: int = DEFAULT_ATOM_BUDGET,
) -> ExactDistribution:
    """Exact law of sum a_i * xi_i by sequential convolution, merging equal
    values eagerly.  Raises BudgetError if the projected support size exceeds
    the atom budget."""
    support = xi.support
    if A.d == 1:
        atoms: dict = {Fraction(0): Fraction(1)}
        for a in A.entries:
            if len(atoms) * len(support) > atom_budget:
                raise BudgetError(
                    f"projected atom count {len(atoms) * len(support)} exceeds "
                    f"budget {atom_budget}")
            nxt: dict = {}
            for v, p in atoms.items():
                for s, q in support:
                    key = v + a * s
                    w = p * q
                    if key in nxt:
                        nxt[key] += w
                    else:
                        nxt[key] = w
            atoms = nxt
        return ExactDistribution(atoms, A.n)
    atoms2: dict = {(Fraction(0), Fraction(0)): Fraction(1)}
    for ax, ay in A.entries:
        if len(atoms2) * len(support) > atom_budget:
            raise BudgetError(
                f"projected atom count {len(atoms2) * len(support)} exceeds "
                f"budget {atom_budget}")
        nxt2: dict = {}
        for (vx, vy), p in atoms2.items():
            for s, q in support:
                key = (vx + ax * s, vy + ay * s)
                w = p * q
                if key in nxt2:
                    nxt2[key] += w
                else:
                    nxt2[key] = w
        atoms2 = nxt2
    return ExactDistribution(atoms2, A.n)


def bernoulli_int_counts(entries: list[int]) -> dict[int, int]:
    """Fast path: counts (out of 2^n) of sum +-a_i for integer entries and
    Bernoulli +-1 signs.  Used by the exhaustive sweeps; equivalent to
    exact_sign_sum_distribution up to the 2^n normalization."""
    counts = {0: 1}
    for a in entries:
        nxt: dict[int, int] = {}
        for v, c in counts.items():
            for s in (v + a, v - a):
                if s in nxt:
                    nxt[s] += c
                else:
                    nxt[s] = c
        counts = nxt
    return counts


def concentration_probability(
    A: CoefficientMultiset,
    xi: SignDistribution | None = None,
) -> tuple[Fraction, Fraction]:
    """rho(A) = sup_x P(S_A = x) with the smallest maximizing value."""
    if A.d != 1:
        raise ValidationError("concentration_probability needs d=1")
    xi = xi or SignDistribution.bernoulli_pm1()
    dist = exact_sign_sum_distribution(A, xi)
    return dist.max_atom()


def largest_binomial_sum(n: int, m: int) -> int:
    """S(n, m): sum of the m largest binomial coefficients C(n, i)."""
    if n < 1 or m < 0:
        raise ValidationError("need n >= 1 and m >= 0")
    if m == 0:
        return 0
    if m >= n + 1:
        return 2**n
    coeffs = sorted((math.comb(n, i) for i in range(n + 1)), reverse=True)
    return sum(coeffs[:m])


def ball_probability_1d(
    A: CoefficientMultiset,
    xi: SignDistribution,
    R,
) -> tuple[Fraction, Fraction]:
    """Max over centers x of P(S_A in [x-R, x+R]), with a maximizing center.

    Exact sliding window over the sorted support: the optimum is attained by
    a window whose left edge sits on a support point.  The returned center is
    the midpoint of the extreme atoms covered by the best window (ties broken
    by the smallest center).
    """
    if A.d != 1:
        raise ValidationError("ball_probability_1d needs d=1")
    R = Fraction(R)
    if R < 0:
        raise ValidationError("radius must be >= 0")
    dist = exact_sign_sum_distribution(A, xi)
    items = dist.sorted_items()
    vals = [v for v, _ in items]
    probs = [p for _, p in items]
    width = 2 * R
    best = Fraction(0)
    best_center = vals[0]
    j = 0
    running = Fraction(0)
    for i in range(len(vals)):
        # window anchored with left edge at vals[i]
        if j < i:
            j = i
            running = Fraction(0)
        while j < len(vals) and vals[j] - vals[i] <= width:
            running += probs[j]
            j += 1
        center = (vals[i] + vals[j - 1]) / 2
        if running > best or (running == best and center < best_center):
            best = running
            best_center = center
        running -= probs[i]
    return best, best_center


def disk_mass(dist: ExactDistribution, center: tuple, R) -> Fraction:
    """Exact mass of the closed disk of radius R at a rational center."""
    R = Fraction(R)
    cx, cy = Fraction(center[0]), Fraction(center[1])
    rr = R * R
    total = Fraction(0)
    for (x, y), p in dist.atoms.items():
        if hypot2((x, y), (cx, cy)) <= rr:
            total += p
    return total


def _surd_disk_mass(dist, mx, my, b, wx, wy, q, rr) -> Fraction:
    """Mass of the closed disk of radius^2 rr centered at
    (mx + b*sqrt(q)*wx, my + b*sqrt(q)*wy) with all parameters rational."""
    total = Fraction(0)
    for (x, y), p in dist.atoms.items():
        dx, dy = mx - x, my - y
        # |c - a|^2 = |m - a|^2 + b^2 q |w|^2 + 2 b sqrt(q) <m - a, w>
        base = dx * dx + dy * dy + b * b * q * (wx * wx + wy * wy)
        cross = 2 * b * (dx * wx + dy * wy)
        if quad_le(base, cross, q, rr):
            total += p
    return total


def ball_probability_2d(
    A: CoefficientMultiset,
    xi: SignDistribution,
    R,
    enum_limit: int = DEFAULT_2D_ENUM_LIMIT,
    atom_budget: int = DEFAULT_ATOM_BUDGET,
):
    """Max over disk centers of the closed-disk mass of the exact 2-D law.

    Returns (p, witness_center) where witness_center is a float pair (the
    exact optimum may have quadratic-irrational coordinates; the probability
    itself is exact).
    """
    if A.d != 2:
        raise ValidationError("ball_probability_2d needs d=2")
    if A.n > enum_limit:
        raise BudgetError(f"n={A.n} exceeds 2-D enumeration limit {enum_limit}")
    R = Fraction(R)
    if R < 0:
        raise ValidationError("radius must be >= 0")
    dist = exact_sign_sum_distribution(A, xi, atom_budget)
    pts = list(dist.atoms.keys())
    rr = R * R
    best = Fraction(0)
    best_center: tuple[float, float] = (float(pts[0][0]), float(pts[0][1]))

    for p in pts:
        m = disk_mass(dist, p, R)
        if m > best:
            best = m
            best_center = (float(p[0]), float(p[1]))

    four_rr = 4 * rr
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            u, v = pts[i], pts[j]
            d2 = hypot2(u, v)
            if d2 == 0 or d2 > four_rr:
                continue
            mx, my = (u[0] + v[0]) / 2, (u[1] + v[1]) / 2
            # centers m +- h * perp(delta)/|delta|, h = sqrt(R^2 - d2/4)
            # = m +- sqrt(q) * perp(delta) with q = R^2/d2 - 1/4
            q = rr / d2 - Fraction(1, 4)
            wx, wy = -(v[1] - u[1]), v[0] - u[0]
            root = isqrt_fraction_exact(q)
            for b in (Fraction(1), Fraction(-1)):
                m_val = _surd_disk_mass(dist, mx, my, b, wx, wy, q, rr)
                if m_val > best:
                    best = m_val
                    s = float(root) if root is not None else math.sqrt(float(q))
                    best_center = (
                        float(mx) + float(b) * s * float(wx),
                        float(my) + float(b) * s * float(wy),
                    )
    return best, best_center


def flat_direction_search(
    A: CoefficientMultiset,
    angle_grid: int = 360,
) -> tuple[tuple[float, float], float, int]:
    """Search affine lines H minimizing #{i : dist(a_i, H) >= 1}.

    For each of angle_grid unit normals e, project the entries onto e and
    pick the offset c maximizing the number of projections inside the open
    interval (c-1, c+1) by interval stabbing.  Returns (normal, offset,
    far_count); a grid-certified upper bound on the true minimum.
    """
    if A.d != 2:
        raise ValidationError("flat_direction_search needs d=2")
    if angle_grid < 4:
        raise ValidationError("angle_grid must be >= 4")
    n = A.n
    best = (n + 1, (1.0, 0.0), 0.0)
    for k in range(angle_grid):
        phi = math.pi * k / angle_grid
        e = (math.cos(phi), math.sin(phi))
        proj = [float(x) * e[0] + float(y) * e[1] for x, y in A.entries]
        events = []
        for t in proj:
            events.append((t - 1, 1))
            events.append((t + 1, -1))
        events.sort()
        cur = 0
        best_cov = 0
        best_c = proj[0]
        for idx, (pos, delta) in enumerate(events):
            cur += delta
            if cur > best_cov:
                nxt = events[idx + 1][0] if idx + 1 < len(events) else pos + 1
                best_cov = cur
                best_c = (pos + nxt) / 2
        far = n - best_cov
        if far < best[0]:
            best = (far, e, best_c)
    far, e, c = best
    return e, c, far


def centered_progression(n: int) -> CoefficientMultiset:
    """The centered arithmetic progression {-(n-1)/2, ..., (n-1)/2}, n odd."""
    if n < 3 or n % 2 == 0:
        raise ValidationError("need odd n >= 3")
    m = (n - 1) // 2
    return CoefficientMultiset.of(range(-m, m + 1))


def stanley_constant_scan(n_list: list[int]) -> list[tuple[int, Fraction, float]]:
    """For each odd n, rho of the centered progression and the scaled value
    rho * n^(3/2); the scaled values approach sqrt(24/pi)."""
    out = []
    for n in n_list:
        A0 = centered_progression(n)
        counts = bernoulli_int_counts([int(e) for e in A0.entries])
        rho = Fraction(max(counts.values()), 2**n)
        out.append((n, rho, float(rho) * n**1.5))
    return out
