"""Essential least common denominator scans and the small-ball bounds that
consume them.

The defining set {theta > 0 : dist(theta a, Z^n) < min(gamma ||theta a||_2,
alpha)} is open, so its infimum is generally unattained and lies slightly
below the first lattice hit: approaching theta = 1/g from below, the
distance (1/g - theta) ||a|| already satisfies both conditions once theta >
max(1/(g(1+gamma)), 1/g - alpha/||a||).  The scan therefore reports the
least *candidate* theta satisfying the condition, where the candidates are
the global grid of step `resolution` plus the exact rationals k/|a_i|
("LCD up to resolution delta").  For integer vectors with entries bounded
by 1/(2 alpha) this candidate scan provably returns exactly 1/gcd: at any
candidate k/|a_i| that is not a multiple of 1/gcd some coordinate sits at a
rational with denominator |a_i|, hence at distance >= 1/|a_i| > alpha from
the integers, and grid candidates k delta with delta = 1/4 are either
lattice hits or at coordinate distance >= 1/4 > alpha.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .types import (
    CoefficientMultiset,
    SignDistribution,
    SoundnessError,
    ValidationError,
)

DEFAULT_RESOLUTION = Fraction(1, 4)
RECURRENCE_C = 4.0  # frozen once against the d=1 corpus; never auto-fit


@dataclass(frozen=True)
class LcdResult:
    """Outcome of an LCD scan.

    lcd is None when no scanned candidate (<= theta_max) satisfies the
    condition; then `margin` reports the smallest observed slack
    dist - min(gamma ||theta a||, alpha) over the scan, certifying the
    failure on the scanned set.
    """

    lcd: Fraction | float | None
    witness_theta: Fraction | float | None
    witness_integers: tuple[int, ...] | None
    achieved_distance: float
    margin: float
    theta_max: float
    resolution: float

    @property
    def is_infinite(self) -> bool:
        return self.lcd is None

    def to_json_dict(self):
        def enc(x):
            if isinstance(x, Fraction):
                return f"{x.numerator}/{x.denominator}"
            return x

        return {
            "lcd": enc(self.lcd) if self.lcd is not None else "infinite",
            "witness_theta": enc(self.witness_theta) if self.witness_theta is not None else None,
            "witness_integers": list(self.witness_integers) if self.witness_integers else None,
            "achieved_distance": self.achieved_distance,
            "margin": self.margin,
            "theta_max": self.theta_max,
            "resolution": self.resolution,
        }


def _nearest_int(x: Fraction) -> int:
    fl = math.floor(x)
    return fl if x - fl <= Fraction(1, 2) else fl + 1


def _candidates_1d(a: list[Fraction], theta_max: Fraction, resolution: Fraction):
    cands = set()
    k = 1
    while k * resolution <= theta_max:
        cands.add(k * resolution)
        k += 1
    for ai in a:
        if ai == 0:
            continue
        step = 1 / abs(ai)
        k = 1
        while k * step <= theta_max:
            cands.add(k * step)
            k += 1
    return sorted(cands)


def lcd_1d(
    a,
    alpha,
    gamma,
    theta_max=None,
    resolution: Fraction = DEFAULT_RESOLUTION,
) -> LcdResult:
    """Least candidate theta with dist(theta a, Z^n) < min(gamma ||theta a||,
    alpha), scanning the grid of step `resolution` plus the exact lattice
    candidates k/|a_i|.  All decisions are exact rational comparisons."""
    a = [Fraction(x) for x in a]
    alpha, gamma = Fraction(alpha), Fraction(gamma)
    if not 0 < gamma < 1:
        raise ValidationError("gamma must lie in (0, 1)")
    if alpha <= 0:
        raise ValidationError("alpha must be positive")
    n = len(a)
    if theta_max is None:
        theta_max = Fraction(math.isqrt(n) + 1) / gamma
    theta_max = Fraction(theta_max)
    a2 = sum(x * x for x in a)
    alpha2 = alpha * alpha
    gamma2 = gamma * gamma
    best_margin = None
    for theta in _candidates_1d(a, theta_max, Fraction(resolution)):
        xs = [ai * theta for ai in a]
        ps = [_nearest_int(x) for x in xs]
        d2 = sum((x - p) * (x - p) for x, p in zip(xs, ps))
        cutoff2 = min(gamma2 * a2 * theta * theta, alpha2)
        if d2 < cutoff2:
            return LcdResult(
                lcd=theta,
                witness_theta=theta,
                witness_integers=tuple(ps),
                achieved_distance=math.sqrt(float(d2)),
                margin=0.0,
                theta_max=float(theta_max),
                resolution=float(resolution),
            )
        slack = math.sqrt(float(d2)) - math.sqrt(float(cutoff2))
        if best_margin is None or slack < best_margin:
            best_margin = slack
    return LcdResult(
        lcd=None,
        witness_theta=None,
        witness_integers=None,
        achieved_distance=float("nan"),
        margin=best_margin if best_margin is not None else float("inf"),
        theta_max=float(theta_max),
        resolution=float(resolution),
    )


def _radial_scan(coeffs: list[float], alpha: float, gamma: float,
                 theta_max: float, resolution: float):
    """Float 1-D scan along a fixed direction; returns least qualifying r."""
    a2 = sum(c * c for c in coeffs)
    if a2 == 0:
        return None
    cands = set()
    k = 1
    while k * resolution <= theta_max:
        cands.add(k * resolution)
        k += 1
    for c in coeffs:
        if abs(c) < 1e-12:
            continue
        step = 1.0 / abs(c)
        k = 1
        while k * step <= theta_max:
            cands.add(k * step)
            k += 1
    for r in sorted(cands):
        d2 = 0.0
        for c in coeffs:
            x = c * r
            d = x - round(x)
            d2 += d * d
        if d2 < min(gamma * gamma * a2 * r * r, alpha * alpha):
            return r
    return None


def lcd_multidim(
    pairs,
    alpha,
    gamma,
    theta_max=None,
    resolution=0.25,
    angle_grid: int = 720,
) -> LcdResult:
    """Grid-plus-refinement search over theta in R^2 with ||theta|| <=
    theta_max: for each direction on the angle grid, run a radial candidate
    scan; the result is the smallest qualifying ||theta|| found.

    Precondition (super-isotropy): the smallest eigenvalue of sum a_i a_i^T
    is >= 1, checked exactly.
    """
    pts = [(Fraction(x), Fraction(y)) for x, y in pairs]
    alpha_f, gamma_f = float(alpha), float(gamma)
    if not 0 < gamma_f < 1:
        raise ValidationError("gamma must lie in (0, 1)")
    sxx = sum(x * x for x, _ in pts)
    syy = sum(y * y for _, y in pts)
    sxy = sum(x * y for x, y in pts)
    # lambda_min(M) >= 1 for M = [[sxx, sxy], [sxy, syy]]:
    # trace - 2 >= 0 and det(M - I) >= 0 with both eigenvalues >= 1
    if not (sxx + syy >= 2 and (sxx - 1) * (syy - 1) - sxy * sxy >= 0
            and sxx >= 1 and syy >= 1):
        raise ValidationError(
            "super-isotropy violated: smallest eigenvalue of sum a a^T < 1")
    n = len(pts)
    if theta_max is None:
        theta_max = (math.isqrt(n) + 1) / gamma_f
    theta_max = float(theta_max)
    best_r = None
    best_dir = None
    fpts = [(float(x), float(y)) for x, y in pts]
    for k in range(angle_grid):
        phi = math.pi * k / angle_grid
        e = (math.cos(phi), math.sin(phi))
        coeffs = [e[0] * x + e[1] * y for x, y in fpts]
        r = _radial_scan(coeffs, alpha_f, gamma_f,
                         best_r if best_r is not None else theta_max,
                         float(resolution))
        if r is not None and (best_r is None or r < best_r):
            best_r, best_dir = r, e
    if best_r is None:
        return LcdResult(None, None, None, float("nan"), float("nan"),
                         theta_max, float(resolution))
    theta = (best_dir[0] * best_r, best_dir[1] * best_r)
    prods = [theta[0] * x + theta[1] * y for x, y in fpts]
    ps = tuple(round(v) for v in prods)
    d = math.sqrt(sum((v - p) ** 2 for v, p in zip(prods, ps)))
    return LcdResult(best_r, theta, ps, d, 0.0, theta_max, float(resolution))


@dataclass(frozen=True)
class RvBound:
    bound: float
    beta: float
    b: Fraction
    lcd: LcdResult
    constant: float


def rv_smallball_bound(
    a,
    beta,
    alpha,
    gamma,
    xi: SignDistribution | None = None,
    C: float = 2.0,
    theta_max=None,
    resolution: Fraction = DEFAULT_RESOLUTION,
) -> RvBound:
    """Right-hand side C beta / (gamma sqrt(b)) + C exp(-2 b alpha^2) with
    the preconditions of the Diophantine small-ball theorem checked:
    sum a_i^2 >= 1, the sign law leaves unit windows with mass <= 1 - b for
    some b > 0, and beta >= 1 / LCD_{alpha,gamma}(a)."""
    a = [Fraction(x) for x in a]
    beta = Fraction(beta)
    xi = xi or SignDistribution.bernoulli_pm1()
    if sum(x * x for x in a) < 1:
        raise ValidationError("precondition failed: sum a_i^2 >= 1")
    b = xi.b_value()
    if b <= 0:
        raise ValidationError(
            "precondition failed: sign law concentrates in a unit window (b = 0)")
    lcd = lcd_1d(a, alpha, gamma, theta_max, resolution)
    if not lcd.is_infinite:
        lcd_val = lcd.lcd
        ok = (beta * lcd_val >= 1) if isinstance(lcd_val, Fraction) \
            else (float(beta) * lcd_val >= 1.0)
        if not ok:
            raise ValidationError(
                f"precondition failed: beta={beta} < 1/LCD={1 / float(lcd_val)}")
    bound = C * float(beta) / (float(gamma) * math.sqrt(float(b))) \
        + C * math.exp(-2.0 * float(b) * float(alpha) ** 2)
    return RvBound(bound, float(beta), b, lcd, C)


def check_rv_soundness(a, beta, alpha, gamma, xi=None, C: float = 2.0) -> RvBound:
    """Assert the bound dominates the exact closed-ball probability."""
    xi = xi or SignDistribution.bernoulli_pm1()
    res = rv_smallball_bound(a, beta, alpha, gamma, xi, C)
    from .core import ball_probability_1d

    A = CoefficientMultiset.of(a)
    exact, _ = ball_probability_1d(A, xi, Fraction(beta))
    if res.bound < float(exact):
        raise SoundnessError(
            f"rv bound {res.bound} < exact {float(exact)} on {a}")
    return res


@dataclass(frozen=True)
class RecurrenceMeasure:
    measure_estimate: float
    lemma_bound: float
    boundary_fraction: float
    grid_points: int
    resolution_warning: bool


def recurrence_set_measure(
    a,
    t,
    z,
    beta,
    gamma,
    alpha,
    grid_points: int = 100_001,
) -> RecurrenceMeasure:
    """Measure of {theta in [-1, 1] : min_p ||(z/beta) theta a - p||_2 <= t}
    by a deterministic midpoint grid, against the d=1 lemma bound
    C t beta / gamma with the frozen constant.  Requires t < alpha/2 and
    z >= 1."""
    t = Fraction(t)
    z, beta, gamma, alpha = map(Fraction, (z, beta, gamma, alpha))
    if not t < alpha / 2:
        raise ValidationError("lemma hypothesis t < alpha/2 violated")
    if z < 1:
        raise ValidationError("z must be >= 1")
    scale = [float(Fraction(x) * z / beta) for x in a]
    tt = float(t) ** 2
    h = 2.0 / grid_points
    inside = 0
    flags = []
    for i in range(grid_points):
        theta = -1.0 + (i + 0.5) * h
        d2 = 0.0
        for c in scale:
            x = c * theta
            d = x - round(x)
            d2 += d * d
        good = d2 <= tt
        inside += good
        flags.append(good)
    boundary = sum(1 for i in range(1, grid_points) if flags[i] != flags[i - 1])
    measure = inside * h
    boundary_fraction = (boundary * h / measure) if measure > 0 else 0.0
    bound = RECURRENCE_C * float(t) * float(beta) / float(gamma)
    return RecurrenceMeasure(
        measure_estimate=measure,
        lemma_bound=bound,
        boundary_fraction=boundary_fraction,
        grid_points=grid_points,
        resolution_warning=boundary_fraction > 0.01,
    )
