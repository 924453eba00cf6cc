import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from smallball.core import (
    ball_probability_1d,
    ball_probability_2d,
    bernoulli_int_counts,
    centered_progression,
    concentration_probability,
    disk_mass,
    exact_sign_sum_distribution,
    flat_direction_search,
    largest_binomial_sum,
    stanley_constant_scan,
)
from smallball.types import (
    BudgetError,
    CoefficientMultiset,
    SignDistribution,
    ValidationError,
)

PM1 = SignDistribution.bernoulli_pm1()
BOOL = SignDistribution.boolean_01()


def brute_distribution(entries, xi):
    """Independent oracle: enumerate all |support|^n outcomes."""
    atoms = {}
    supports = [xi.support] * len(entries)
    for combo in itertools.product(*supports):
        val = sum((a * v for a, (v, _) in zip(entries, combo)), Fraction(0))
        prob = math.prod((p for _, p in combo), start=Fraction(1))
        atoms[val] = atoms.get(val, Fraction(0)) + prob
    return atoms


def test_distribution_examples():
    A = CoefficientMultiset.of([1, 1, 1, 1])
    dist = exact_sign_sum_distribution(A, PM1)
    assert dist.atoms[Fraction(0)] == Fraction(6, 16)
    single = exact_sign_sum_distribution(CoefficientMultiset.of([1]), PM1)
    assert dict(single.atoms) == {Fraction(-1): Fraction(1, 2),
                                  Fraction(1): Fraction(1, 2)}
    mixed = exact_sign_sum_distribution(CoefficientMultiset.of([-1, 0, 1]), PM1)
    assert mixed.atoms[Fraction(0)] == Fraction(1, 2)


def test_distribution_matches_enumeration_oracle():
    cases = [
        ([1, 2, 3], PM1),
        ([1, 1, 2], BOOL),
        ([Fraction(1, 2), Fraction(3, 2), 2], PM1),
        ([1, -1, 5, 5], SignDistribution.lazy(Fraction(1, 2))),
    ]
    for entries, xi in cases:
        A = CoefficientMultiset.of(entries)
        dist = exact_sign_sum_distribution(A, xi)
        assert dict(dist.atoms) == brute_distribution(A.entries, xi)


def test_capacity_budget():
    A = CoefficientMultiset.of([2**k for k in range(12)])
    with pytest.raises(BudgetError):
        exact_sign_sum_distribution(A, PM1, atom_budget=100)


def test_concentration_examples():
    assert concentration_probability(CoefficientMultiset.of([1, 1, 1, 1])) == \
        (Fraction(3, 8), Fraction(0))
    assert concentration_probability(CoefficientMultiset.of([1, 2, 3])) == \
        (Fraction(1, 4), Fraction(0))
    assert concentration_probability(CoefficientMultiset.of([-1, 0, 1])) == \
        (Fraction(1, 2), Fraction(0))
    with pytest.raises(ValidationError):
        concentration_probability(CoefficientMultiset.of_pairs([(1, 0)]))


@given(st.lists(st.integers(-9, 9).filter(bool), min_size=1, max_size=7),
       st.fractions(min_value=Fraction(-5), max_value=Fraction(5)).filter(bool))
@settings(max_examples=60, deadline=None)
def test_concentration_scaling_invariance(entries, c):
    A = CoefficientMultiset.of(entries)
    rho, arg = concentration_probability(A)
    rho_s, arg_s = concentration_probability(A.scaled(c))
    assert rho_s == rho
    # argmax scales by c, with the tie-break re-applied on the scaled values
    dist = exact_sign_sum_distribution(A, PM1)
    scaled_args = sorted(c * v for v, p in dist.atoms.items() if p == rho)
    assert arg_s == scaled_args[0]


def test_largest_binomial_sum():
    assert largest_binomial_sum(4, 1) == 6
    assert largest_binomial_sum(4, 2) == 10
    assert largest_binomial_sum(5, 7) == 32
    assert largest_binomial_sum(3, 0) == 0
    with pytest.raises(ValidationError):
        largest_binomial_sum(0, 1)


def test_ball_1d_examples():
    A = CoefficientMultiset.of([1, 1, 1, 1])
    p, c = ball_probability_1d(A, PM1, 1)
    assert p == Fraction(10, 16)
    # returned center must attain the mass
    dist = exact_sign_sum_distribution(A, PM1)
    att = sum(pr for v, pr in dist.atoms.items() if abs(v - c) <= 1)
    assert att == p
    p0, _ = ball_probability_1d(A, PM1, 0)
    assert p0 == concentration_probability(A)[0]
    p3, _ = ball_probability_1d(CoefficientMultiset.of([1, 2, 3]), PM1,
                                Fraction(1, 2))
    assert p3 == Fraction(1, 4)


def brute_ball_1d(entries, xi, R):
    """Oracle: direct mass summation over windows anchored at each atom."""
    atoms = brute_distribution(entries, xi)
    best = Fraction(0)
    for a in atoms:
        mass = sum(p for v, p in atoms.items() if a <= v <= a + 2 * R)
        best = max(best, mass)
    return best


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=7),
       st.fractions(min_value=0, max_value=4))
@settings(max_examples=60, deadline=None)
def test_ball_1d_matches_window_oracle(entries, R):
    A = CoefficientMultiset.of(entries)
    p, _ = ball_probability_1d(A, PM1, R)
    assert p == brute_ball_1d(A.entries, PM1, R)


def test_erdos_interval_optimum_small():
    # closed-interval extremal identity at the all-ones multiset
    for n in (3, 4, 5):
        A = CoefficientMultiset.of([1] * n)
        for R in (Fraction(1, 2), 1, Fraction(3, 2), 2):
            p, _ = ball_probability_1d(A, PM1, R)
            s = math.floor(R) + 1
            assert p == Fraction(largest_binomial_sum(n, s), 2**n)


def test_ball_2d_flat_example():
    # ten unit e1's and one e2: the printed mass of the configured example
    A = CoefficientMultiset.of_pairs([(1, 0)] * 10 + [(0, 1)])
    R = Fraction(23, 10)
    dist = exact_sign_sum_distribution(A, BOOL)
    mass = disk_mass(dist, (Fraction(11, 2), Fraction(1, 2)), R)
    expected = Fraction(2 * sum(math.comb(10, i) for i in range(4, 8)), 2**11)
    assert mass == expected == Fraction(1584, 2048)
    # the sup over centers can only be larger, and still beats S(11,3)/2^11
    p, _ = ball_probability_2d(A, BOOL, R)
    assert p >= mass
    assert p > Fraction(largest_binomial_sum(11, 3), 2**11) == Fraction(1254, 2048)


def test_ball_2d_collinear_trivial():
    for n in (3, 5, 6):
        A = CoefficientMultiset.of_pairs([(1, 0)] * n)
        p, _ = ball_probability_2d(A, PM1, Fraction(9, 10))
        assert p == Fraction(math.comb(n, n // 2), 2**n)


def test_ball_2d_rotation_invariance():
    A = CoefficientMultiset.of_pairs([(1, 0), (0, 1), (1, 1), (2, 1)])
    R = Fraction(3, 2)
    p, _ = ball_probability_2d(A, PM1, R)
    p_rot, _ = ball_probability_2d(A.rotated((Fraction(3, 5), Fraction(4, 5))),
                                   PM1, R)
    assert p == p_rot


def test_ball_2d_enumeration_limit():
    A = CoefficientMultiset.of_pairs([(1, 0)] * 23)
    with pytest.raises(BudgetError):
        ball_probability_2d(A, PM1, 1)


def test_flat_direction_search():
    collinear = CoefficientMultiset.of_pairs([(k, 0) for k in range(1, 7)])
    _, _, far = flat_direction_search(collinear, 8)
    assert far == 0
    # 12 points on a circle of radius 3
    pts = []
    for k in range(12):
        ang = 2 * math.pi * k / 12
        pts.append((Fraction(round(3 * math.cos(ang) * 8), 8),
                    Fraction(round(3 * math.sin(ang) * 8), 8)))
    circ = CoefficientMultiset.of_pairs(pts)
    _, _, far = flat_direction_search(circ, 360)
    assert far <= 8
    spike = CoefficientMultiset.of_pairs([(1, 0)] * 7 + [(0, 1)])
    _, _, far = flat_direction_search(spike, 8)
    assert far <= 1


def test_stanley_scan():
    rows = stanley_constant_scan([3, 5])
    assert rows[0][1] == Fraction(1, 2)
    assert abs(rows[0][2] - 2.598) < 1e-3
    target = math.sqrt(24 / math.pi)
    # n=5 is closer to the limit than n=3
    assert abs(rows[1][2] - target) < abs(rows[0][2] - target)
    with pytest.raises(ValidationError):
        stanley_constant_scan([4])


def test_bernoulli_int_counts_matches_general_path():
    entries = [1, -2, 2, 5]
    counts = bernoulli_int_counts(entries)
    dist = exact_sign_sum_distribution(CoefficientMultiset.of(entries), PM1)
    assert {Fraction(v): Fraction(c, 16) for v, c in counts.items()} == \
        dict(dist.atoms)


def test_centered_progression():
    assert centered_progression(5).entries == tuple(
        Fraction(k) for k in (-2, -1, 0, 1, 2))
