import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from negacantor import analysis, codec, evaluator, params
from negacantor.analysis import DerivativeTag
from negacantor.codec import NegaDigits, Tail

from conftest import CORPUS

ALL = {name: make() for name, make in CORPUS.items()}


def mean_digit_oracle(P, terms=200) -> F:
    """For non-negative P, F~ is the CDF of eta, so its integral is 1 - E[eta]."""
    mean, D = F(0), 1
    for n in range(1, terms + 1):
        D *= P.d(n)
        mean += sum((i * p for i, p in enumerate(P.column(n))), F(0)) / D
    return 1 - mean


def quad_depth(P, limit=3**8):
    n = 1
    while P.base.radix_product(n + 1) <= limit:
        n += 1
    return n


# -- integral ----------------------------------------------------------------

def test_integral_reference_values():
    r = analysis.integral_closed_form(params.uniform(), F(1, 10**9))
    assert abs(r.value - F(1, 2)) <= r.error_bound <= F(1, 10**9)
    r = analysis.integral_closed_form(params.salem(), F(1, 10**9))
    assert abs(r.value - F(7, 10)) <= r.error_bound
    assert analysis.integral_exact(params.uniform()) == F(1, 2)
    assert analysis.integral_exact(params.salem()) == F(7, 10)


@pytest.mark.parametrize("name", sorted(ALL))
def test_integral_exact_within_series_bound(name):
    P = ALL[name]
    r = analysis.integral_closed_form(P, F(1, 10**12))
    assert abs(analysis.integral_exact(P) - r.value) <= r.error_bound


@pytest.mark.parametrize("name", sorted(n for n in ALL if ALL[n].sign_class.nonnegative))
def test_integral_against_mean_of_eta(name):
    P = ALL[name]
    assert float(analysis.integral_exact(P)) == pytest.approx(float(mean_digit_oracle(P)), abs=1e-15)


@pytest.mark.parametrize("name", sorted(ALL))
def test_integral_inside_quadrature(name):
    P = ALL[name]
    lo, hi = analysis.integral_quadrature(P, quad_depth(P))
    assert lo <= analysis.integral_exact(P) <= hi


def test_quadrature_shrinks():
    U = params.uniform()
    widths = []
    for n in (4, 8, 10):
        lo, hi = analysis.integral_quadrature(U, n)
        assert lo <= F(1, 2) <= hi
        widths.append(hi - lo)
    assert widths == sorted(widths, reverse=True)
    assert widths[-1] <= F(2, 2**10)


def test_quadrature_limit():
    with pytest.raises(ValueError, match="limit"):
        analysis.integral_quadrature(params.uniform(), 25)


def test_integral_rejects_bad_tol():
    with pytest.raises(ValueError):
        analysis.integral_closed_form(params.uniform(), 0)


# -- cylinders ---------------------------------------------------------------

def test_cylinder_examples():
    S = params.salem()
    assert analysis.cylinder_increment(S, (1,)) == F(3, 10)
    assert analysis.cylinder_increment(S, (1, 1)) == F(21, 100)
    assert analysis.cylinder_measure(S, (1, 1)) == F(21, 100)


@pytest.mark.parametrize("name", sorted(ALL))
def test_increment_is_product(name):
    P = ALL[name]
    for prefix in itertools.product(*(range(P.d(n)) for n in range(1, 4))):
        assert analysis.cylinder_increment(P, prefix) == analysis.cylinder_measure(P, prefix)


@pytest.mark.parametrize("name", sorted(ALL))
def test_increments_add_up(name):
    P = ALL[name]
    for prefix in [(), (0,), (1, 0)]:
        n = len(prefix) + 1
        kids = sum(analysis.cylinder_increment(P, prefix + (c,)) for c in range(P.d(n)))
        assert kids == analysis.cylinder_increment(P, prefix)
    assert analysis.cylinder_increment(P, ()) == 1


# -- derivative --------------------------------------------------------------

def test_uniform_derivative_is_one():
    U = params.uniform()
    rng = random.Random(3)
    for _ in range(20):
        x = analysis.random_germ(U, 40, rng)
        assert analysis.derivative_limit(U, x).tag is DerivativeTag.ONE
    assert analysis.derivative_limit(U, NegaDigits((1, 0), Tail.LOWHIGH)).tag is DerivativeTag.ONE


def test_salem_zero_digits():
    S = params.salem()
    # nega zeros: positive digits alternate 0, 1 so factors alternate 7/5 and 3/5
    cls = analysis.derivative_limit(S, NegaDigits((0,) * 10))
    assert cls.partial_product == F(21, 25) ** 5
    assert cls.tag is DerivativeTag.ZERO
    assert cls.log_rate == pytest.approx(math.log(21 / 25) / 2)


def test_salem_canonical_tail_classified_by_period():
    S = params.salem()
    # tail LOWHIGH is positive zeros: factor 7/5 forever
    cls = analysis.derivative_limit(S, NegaDigits((1,), Tail.LOWHIGH), depth=5)
    assert cls.tag is DerivativeTag.INFINITE
    assert cls.partial_product == F(3, 5) * F(7, 5) ** 4
    cls = analysis.derivative_limit(S, NegaDigits((), Tail.HIGHLOW), depth=3)
    assert cls.tag is DerivativeTag.ZERO


def test_finite_positive_tag():
    # preperiod column differs, period is uniform
    base = params.BaseSequence((), (2,))
    P = params.MatrixP(base, ((F(1, 4), F(3, 4)),), ((F(1, 2), F(1, 2)),))
    cls = analysis.derivative_limit(P, NegaDigits((1,), Tail.LOWHIGH), depth=6)
    assert cls.tag is DerivativeTag.FINITE_POSITIVE
    assert cls.partial_product == F(3, 2)


def salem_small_product_probability(depth=50, threshold=F(1, 1000)) -> float:
    total = F(0)
    for a in range(depth + 1):
        if F(7, 5) ** a * F(3, 5) ** (depth - a) < threshold:
            total += math.comb(depth, a)
    return float(total / 2**depth)


def test_salem_random_germs_follow_binomial_law():
    S = params.salem()
    p = salem_small_product_probability()
    assert p == pytest.approx(0.1611, abs=5e-4)
    rng = random.Random(11)
    n = 1000
    hits = sum(
        analysis.derivative_limit(S, analysis.random_germ(S, 50, rng)).partial_product < F(1, 1000)
        for _ in range(n)
    )
    sd = math.sqrt(p * (1 - p) / n)
    assert abs(hits / n - p) < 4 * sd


# -- nowhere differentiability -----------------------------------------------

def test_mixed_qualifies():
    rep = analysis.nowhere_diff_condition(params.mixed())
    assert rep.qualifies and rep.adjacent_signs_ok
    assert rep.low_product == rep.high_product == F(9, 5)
    assert rep.case == 1


@pytest.mark.parametrize("make", [params.uniform, params.salem])
def test_positive_matrices_do_not_qualify(make):
    rep = analysis.nowhere_diff_condition(make())
    assert not rep.qualifies and not rep.adjacent_signs_ok
    assert rep.case is None


def test_quotient_cases():
    assert analysis.quotient_case(F(9, 5), F(-3, 2)) == 1
    assert analysis.quotient_case(F(1, 2), F(3)) == 2
    assert analysis.quotient_case(F(-1), F(3)) == 3
    assert analysis.quotient_case(F(1), F(1, 3)) == 4
    assert analysis.quotient_case(F(-1), F(1)) == 5
    assert analysis.quotient_case(F(1, 2), F(1, 3)) is None


def test_uniform_quotients_are_one():
    U = params.uniform()
    for q in analysis.quotient_sequences(U, codec.encode(U.base, F(1, 2), 4), 8):
        assert q.b_prime == q.b_doubleprime == 1
        assert q.consistent


nega_rationals_mixed = st.builds(
    lambda ds, tail: NegaDigits(tuple(ds), tail),
    st.lists(st.integers(0, 2), min_size=1, max_size=6),
    st.sampled_from([Tail.LOWHIGH, Tail.HIGHLOW]),
)


@given(nega_rationals_mixed)
def test_mixed_closed_form_matches_direct(x0):
    P = params.mixed()
    if codec.decode(P.base, x0)[0] in (0, 1):
        with pytest.raises(ValueError):
            analysis.switch_point(P, x0)
        return
    pairs = analysis.quotient_sequences(P, x0, 6)
    assert all(q.consistent for q in pairs)


@pytest.mark.parametrize("name", ["varied", "staggered", "salem", "zero_entry"])
def test_closed_form_matches_direct_on_corpus(name):
    P = ALL[name]
    rng = random.Random(5)
    for _ in range(10):
        q = analysis.random_rational(P, rng, 6)
        if q in (0, 1):
            continue
        x0 = codec.encode(P.base, q, 10)
        assert all(p.consistent for p in analysis.quotient_sequences(P, x0, 5))


def test_approach_points_are_one_step_away():
    P = params.mixed()
    sp = analysis.switch_point(P, NegaDigits((0, 2, 1), Tail.LOWHIGH))
    for k in range(1, 6):
        right, left = analysis.approach_points(P, sp, k)
        step = F(1, P.base.radix_product(sp.n + k))
        assert codec.decode(P.base, right)[0] == sp.value + step
        assert codec.decode(P.base, left)[0] == sp.value - step


def test_mixed_quotients_diverge_with_opposite_signs():
    P = params.mixed()
    pairs = analysis.quotient_sequences(P, NegaDigits((0, 2, 1), Tail.LOWHIGH), 12)
    last = pairs[-1]
    assert last.b_prime * last.b_doubleprime < 0
    assert min(abs(last.b_prime), abs(last.b_doubleprime)) > 1000


def test_truncated_x0_rejected():
    with pytest.raises(ValueError):
        analysis.quotient_sequences(params.mixed(), NegaDigits((1,)), 3)


# -- monotonicity ------------------------------------------------------------

def test_salem_monotone_strict():
    rep = analysis.monotonicity_probe(params.salem(), 300, 1)
    assert rep.strict and rep.consistent


def test_zero_entry_monotone():
    rep = analysis.monotonicity_probe(ALL["zero_entry"], 300, 1, 8)
    assert rep.inversions == 0 and rep.consistent


def test_uniform_differences_are_exact():
    U = params.uniform()
    rng = random.Random(2)
    for _ in range(100):
        a, b = sorted(analysis.random_rational(U, rng, 12) for _ in range(2))
        fa = evaluator.eval_digits(U, codec.encode(U.base, a, 20)).value
        fb = evaluator.eval_digits(U, codec.encode(U.base, b, 20)).value
        assert fb - fa == b - a


def test_mixed_has_opposite_siblings():
    rep = analysis.monotonicity_probe(params.mixed(), 100, 0)
    assert rep.sibling_increments == [F(3, 5), F(-1, 5), F(3, 5)]
    assert rep.opposite_siblings and rep.consistent
    assert rep.inversions > 0


def test_limit_case_five_constants_differ():
    # edge factors 5 * 1/5 = 1 on both sides: both quotient sequences are constant
    P = params.MatrixP.periodic([F(1, 5), F(-1, 10), F(4, 5), F(-1, 10), F(1, 5)])
    rep = analysis.nowhere_diff_condition(P)
    assert rep.qualifies and rep.case == 5
    for text in ["1:lowhigh", "3,2:lowhigh", "0,4,2:lowhigh"]:
        pairs = analysis.quotient_sequences(P, NegaDigits.parse(text), 6)
        assert len({q.b_prime for q in pairs}) == 1
        assert len({q.b_doubleprime for q in pairs}) == 1
        assert pairs[0].b_prime != pairs[0].b_doubleprime
