"""Integral, cylinder increments, derivatives and difference quotients of F~."""

from __future__ import annotations

import enum
import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import codec
from .codec import NegaDigits, PositiveDigits, PTail, Tail
from .evaluator import EvalResult, eval_digits, sup_bound
from .params import MatrixP, SignClass, tilde

CYLINDER_LIMIT = 10**6


# -- integral ----------------------------------------------------------------

def _column_beta_sum(P: MatrixP, n: int) -> Fraction:
    # reflection only permutes the column, so beta~ and beta sum alike
    return sum(P.beta_column(n), Fraction(0))


def integral_closed_form(P: MatrixP, tol) -> EvalResult:
    """Partial sum of sum_n (beta~_{0,n} + ... + beta~_{d_n-1,n}) / (d_1...d_n).

    The remainder after N terms is (1/D_N) times the integral of the shifted
    function, so it is bounded by sup_bound(N) / D_N.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    total, D, n = Fraction(0), 1, 0
    while True:
        n += 1
        D *= P.d(n)
        total += _column_beta_sum(P, n) / D
        bound = sup_bound(P, n) / D
        if bound <= tol:
            return EvalResult(total, bound)


def integral_exact(P: MatrixP) -> Fraction:
    """Exact value of the same series, summed in closed form over the period."""
    k, L = P.layout
    # I_o = S_{o+1}/d_{o+1} + I_{o+1}/d_{o+1}; solve around the period first
    head, weight = Fraction(0), Fraction(1)
    for n in range(k + 1, k + L + 1):
        weight /= P.d(n)
        head += weight * _column_beta_sum(P, n)
    value = head / (1 - weight)
    for n in range(k, 0, -1):
        value = (_column_beta_sum(P, n) + value) / P.d(n)
    return value


def _walk_cylinders(P: MatrixP, depth: int):
    """Yield (positive prefix, F at left endpoint, path product) for all cylinders."""
    stack = [((), Fraction(0), Fraction(1))]
    while stack:
        prefix, s, prod = stack.pop()
        n = len(prefix)
        if n == depth:
            yield prefix, s, prod
            continue
        col, betas = P.column(n + 1), P.beta_column(n + 1)
        for e in reversed(range(len(col))):
            stack.append((prefix + (e,), s + prod * betas[e], prod * col[e]))


def integral_quadrature(P: MatrixP, depth: int) -> tuple[Fraction, Fraction]:
    """Enclosure [lo, hi] of the integral from all depth-n cylinders."""
    D = P.base.radix_product(depth)
    if D > CYLINDER_LIMIT:
        raise ValueError(f"{D} cylinders exceed the limit of {CYLINDER_LIMIT}")
    M = sup_bound(P, depth)
    lo = hi = Fraction(0)
    nonneg = P.sign_class.nonnegative
    for _, s, prod in _walk_cylinders(P, depth):
        # F = s + prod * F_depth(shifted) on the cylinder
        if nonneg:
            lo += s
            hi += s + prod
        else:
            lo += s - abs(prod) * M
            hi += s + abs(prod) * M
    return lo / D, hi / D


# -- cylinders ---------------------------------------------------------------

def cylinder_increment(P: MatrixP, prefix) -> Fraction:
    """F~(right end) - F~(left end) of the cylinder, by exact evaluation."""
    prefix = tuple(prefix)
    right = eval_digits(P, NegaDigits(prefix, Tail.HIGHLOW)).value
    left = eval_digits(P, NegaDigits(prefix, Tail.LOWHIGH)).value
    return right - left


def cylinder_measure(P: MatrixP, prefix) -> Fraction:
    """Product formula prod_j p~_{c_j,j}."""
    out = Fraction(1)
    for n, c in enumerate(prefix, start=1):
        out *= tilde(P, c, n)[1]
    return out


# -- derivative --------------------------------------------------------------

class DerivativeTag(enum.Enum):
    ZERO = "Zero"
    ONE = "One"
    FINITE_POSITIVE = "FinitePositive"
    INFINITE = "Infinite"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class DerivativeClass:
    tag: DerivativeTag
    log_rate: float
    partial_product: Fraction

    def to_json(self) -> dict:
        return {
            "tag": self.tag.value,
            "log_rate": self.log_rate,
            "partial_product": str(self.partial_product),
        }


def _factor(P: MatrixP, delta: int, n: int) -> Fraction:
    return P.d(n) * P.column(n)[delta]


def _log_mean(values) -> float:
    values = list(values)
    if not values:
        return 0.0
    if any(v == 0 for v in values):
        return -math.inf
    return sum(math.log(abs(v)) for v in values) / len(values)


def derivative_limit(P: MatrixP, x: NegaDigits, depth: int | None = None) -> DerivativeClass:
    """Classify lim prod_{j<=n} d_j p~_{eps_j,j}.

    Truncated input is read as the germ of a nega-irrational point and judged
    on its own digits.  Canonical input is judged on its eventually periodic
    continuation.  ``depth`` sets how far the reported partial product runs.
    """
    y = codec.to_positive(P.base, x)
    depth = len(y.digits) if depth is None else depth
    factors = [_factor(P, e, n) for n, e in enumerate(y.digits, start=1)]

    if not y.exact:
        factors = factors[:depth]
        prod = math.prod(factors, start=Fraction(1))
        rate = _log_mean(factors)
        if all(f == 1 for f in factors):
            tag = DerivativeTag.ONE
        elif prod == 0 or abs(prod) < 1:
            tag = DerivativeTag.ZERO
        elif abs(prod) > 1:
            tag = DerivativeTag.INFINITE
        else:
            tag = DerivativeTag.UNDETERMINED
        return DerivativeClass(tag, rate, prod)

    k, L = P.layout
    fill = (lambda n: 0) if y.tail is PTail.ZERO else (lambda n: P.d(n) - 1)
    start = len(y.digits)
    lead = start + max(0, k - start)
    head = factors + [_factor(P, fill(n), n) for n in range(start + 1, lead + 1)]
    cycle = [_factor(P, fill(n), n) for n in range(lead + 1, lead + L + 1)]
    per_period = math.prod(cycle, start=Fraction(1))
    rate = _log_mean(cycle)
    stream = head + cycle * (max(0, depth - len(head)) // L + 1)
    prod = math.prod(stream[:depth], start=Fraction(1))
    if all(f == 1 for f in cycle):
        if all(f == 1 for f in head):
            tag = DerivativeTag.ONE
        elif any(f == 0 for f in head):
            tag = DerivativeTag.ZERO
        else:
            tag = DerivativeTag.FINITE_POSITIVE
    elif per_period == 0 or abs(per_period) < 1 or any(f == 0 for f in head):
        tag = DerivativeTag.ZERO
    elif abs(per_period) > 1:
        tag = DerivativeTag.INFINITE
    else:
        tag = DerivativeTag.UNDETERMINED
    return DerivativeClass(tag, rate, prod)


def random_germ(P: MatrixP, depth: int, rng: random.Random) -> NegaDigits:
    """Lebesgue-typical digit prefix: independent uniform digits."""
    return NegaDigits(tuple(rng.randrange(P.d(n)) for n in range(1, depth + 1)))


# -- nowhere differentiability -----------------------------------------------

@dataclass(frozen=True)
class NowhereDiffReport:
    qualifies: bool
    reasons: tuple[str, ...]
    adjacent_signs_ok: bool
    low_product: Fraction   # per-period prod d_k p_{0,k}
    high_product: Fraction  # per-period prod d_k p_{d_k-1,k}
    case: int | None        # which limit case of the quotient argument applies

    def to_json(self) -> dict:
        out = asdict(self)
        out["reasons"] = list(self.reasons)
        out["low_product"] = str(self.low_product)
        out["high_product"] = str(self.high_product)
        return out


def _edge_products(P: MatrixP) -> tuple[Fraction, Fraction, bool, bool]:
    k, L = P.layout
    low = high = Fraction(1)
    for n in range(k + 1, k + L + 1):
        low *= _factor(P, 0, n)
        high *= _factor(P, P.d(n) - 1, n)
    # a zero factor in the preperiod kills the limit as well
    low_dead = any(P.column(n)[0] == 0 for n in range(1, k + 1))
    high_dead = any(P.column(n)[-1] == 0 for n in range(1, k + 1))
    return low, high, low_dead, high_dead


def quotient_case(low: Fraction, high: Fraction) -> int | None:
    """Limit case 1..5 from per-period edge products, None if both die out."""
    a, b = sorted((abs(low), abs(high)), reverse=True)
    if a > 1 and b > 1:
        return 1
    if a > 1 and b < 1:
        return 2
    if a > 1 and b == 1:
        return 3
    if a == 1 and b < 1:
        return 4
    if a == 1 and b == 1:
        return 5
    return None


def nowhere_diff_condition(P: MatrixP) -> NowhereDiffReport:
    k, L = P.layout
    reasons = []
    adjacent_ok = True
    for n in range(1, k + L + 1):
        col = P.column(n)
        for e in range(1, len(col)):
            if col[e] * col[e - 1] >= 0:
                adjacent_ok = False
                reasons.append(f"p_{{{e},{n}}} * p_{{{e - 1},{n}}} = {col[e] * col[e - 1]} is not negative")
    low, high, low_dead, high_dead = _edge_products(P)
    low_vanishes = low_dead or abs(low) < 1
    high_vanishes = high_dead or abs(high) < 1
    if low_vanishes and high_vanishes:
        reasons.append(
            f"both edge products vanish in the limit (per period {low} and {high})"
        )
    qualifies = adjacent_ok and not (low_vanishes and high_vanishes)
    case = quotient_case(low, high) if qualifies else None
    if qualifies:
        reasons.append(f"edge products per period {low} and {high}: limit case {case}")
    return NowhereDiffReport(qualifies, tuple(reasons), adjacent_ok, low, high, case)


@dataclass(frozen=True)
class QuotientPair:
    k: int
    b_prime: Fraction
    b_doubleprime: Fraction
    direct_prime: Fraction | None = None
    direct_doubleprime: Fraction | None = None

    @property
    def consistent(self) -> bool:
        return self.b_prime == self.direct_prime and self.b_doubleprime == self.direct_doubleprime

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "b_prime": str(self.b_prime),
            "b_doubleprime": str(self.b_doubleprime),
            "direct_prime": str(self.direct_prime),
            "direct_doubleprime": str(self.direct_doubleprime),
        }


@dataclass(frozen=True)
class SwitchPoint:
    """A nega-rational x0 split the way the quotient construction needs it."""

    n: int                 # switch position
    eps: int               # digit eps_n of the representation eps_n [d_{n+1}-1] 0 ...
    upper: NegaDigits      # representation whose positive image ends in zeros
    lower: NegaDigits      # representation whose positive image ends in d-1's
    value: Fraction


def switch_point(P: MatrixP, x0: NegaDigits) -> SwitchPoint:
    if not x0.exact:
        raise ValueError("x0 must be nega-rational (canonical tail)")
    base = P.base
    x0 = codec.normalize(base, x0)
    if x0.tail is Tail.HIGHLOW:
        try:
            x0 = codec.dual_representation(base, x0)
        except codec.EndpointError:
            raise ValueError("x0 = 1 is not nega-rational") from None
    if not x0.digits:
        raise ValueError("x0 = 0 is not nega-rational")
    lower = codec.dual_representation(base, x0)
    n = len(x0.digits)
    # at odd n the zero-ending form carries eps_n; at even n the other one does
    eps = x0.digits[-1] if n % 2 else lower.digits[-1]
    value = codec.decode(base, x0)[0]
    return SwitchPoint(n, eps, x0, lower, value)


def _closed_form(P: MatrixP, sp: SwitchPoint, k: int) -> tuple[Fraction, Fraction]:
    n, eps = sp.n, sp.eps
    const = Fraction(1)
    for j, e in enumerate(sp.upper.digits[:-1], start=1):
        const *= P.d(j) * tilde(P, e, j)[1]
    low = high = Fraction(1)
    for m in range(n + 1, n + k + 1):
        low *= _factor(P, 0, m)
        high *= _factor(P, P.d(m) - 1, m)
    d = P.d(n)
    if n % 2:
        lead_p, lead_pp = d * P.p(eps, n), d * P.p(eps - 1, n)
    else:
        lead_p, lead_pp = d * P.p(d - eps, n), d * P.p(d - 1 - eps, n)
    return lead_p * const * low, lead_pp * const * high


def _expand(P: MatrixP, x: NegaDigits, upto: int) -> list[int]:
    """Write the canonical tail of ``x`` out as explicit digits through ``upto``."""
    digits = list(x.digits)
    for m in range(len(digits) + 1, upto + 1):
        low = (x.tail is Tail.LOWHIGH) == bool(m % 2)
        digits.append(0 if low else P.d(m) - 1)
    return digits


def approach_points(P: MatrixP, sp: SwitchPoint, k: int) -> tuple[NegaDigits, NegaDigits]:
    """x'_k = x0 + 1/(d_1...d_{n+k}) and x''_k = x0 - 1/(d_1...d_{n+k}) as nega digits."""
    m = sp.n + k
    right = _expand(P, sp.upper, m)
    # position m holds 0 (odd m) or d_m - 1 (even m); step it one unit up in value
    right[m - 1] = 1 if m % 2 else P.d(m) - 2
    left = _expand(P, sp.lower, m)
    return NegaDigits(tuple(right), Tail.LOWHIGH), NegaDigits(tuple(left), Tail.LOWHIGH)


def quotient_sequences(P: MatrixP, x0: NegaDigits, k_max: int, check: bool = True) -> list[QuotientPair]:
    """Closed-form B'_k, B''_k next to direct difference quotients, k = 1..k_max."""
    sp = switch_point(P, x0)
    f0 = eval_digits(P, sp.upper).value
    out = []
    for k in range(1, k_max + 1):
        bp, bpp = _closed_form(P, sp, k)
        right, left = approach_points(P, sp, k)
        xr = codec.decode(P.base, right)[0]
        xl = codec.decode(P.base, left)[0]
        direct_p = (eval_digits(P, right).value - f0) / (xr - sp.value)
        direct_pp = (f0 - eval_digits(P, left).value) / (sp.value - xl)
        pair = QuotientPair(k, bp, bpp, direct_p, direct_pp)
        if check and not pair.consistent:
            raise ArithmeticError(f"closed form and direct quotient disagree at k={k}")
        out.append(pair)
    return out


# -- monotonicity ------------------------------------------------------------

@dataclass
class MonotonicityReport:
    sign_class: SignClass
    n_pairs: int
    inversions: int = 0
    ties: int = 0
    sibling_increments: list[Fraction] = field(default_factory=list)

    @property
    def strict(self) -> bool:
        return self.inversions == 0 and self.ties == 0

    @property
    def opposite_siblings(self) -> bool:
        incs = self.sibling_increments
        return any(a * b < 0 for a, b in zip(incs, incs[1:]))

    @property
    def consistent(self) -> bool:
        """Outcome agrees with what the sign class predicts."""
        if self.sign_class is SignClass.ALL_POSITIVE:
            return self.strict
        if self.sign_class is SignClass.ALL_NONNEGATIVE:
            return self.inversions == 0
        return self.opposite_siblings

    def to_json(self) -> dict:
        return {
            "sign_class": self.sign_class.value,
            "n_pairs": self.n_pairs,
            "inversions": self.inversions,
            "ties": self.ties,
            "strict": self.strict,
            "sibling_increments": [str(v) for v in self.sibling_increments],
            "opposite_siblings": self.opposite_siblings,
            "consistent": self.consistent,
        }


def random_rational(P: MatrixP, rng: random.Random, max_depth: int = 16) -> Fraction:
    """Uniform grid point with denominator d_1...d_N, N random; encodes exactly."""
    D = P.base.radix_product(rng.randint(1, max_depth))
    return Fraction(rng.randint(0, D), D)


def monotonicity_probe(P: MatrixP, n_pairs: int, rng_seed: int, max_depth: int = 16) -> MonotonicityReport:
    rng = random.Random(rng_seed)
    report = MonotonicityReport(P.sign_class, n_pairs)
    depth = max_depth + 2
    for _ in range(n_pairs):
        x1 = x2 = random_rational(P, rng, max_depth)
        while x2 == x1:
            x2 = random_rational(P, rng, max_depth)
        x1, x2 = min(x1, x2), max(x1, x2)
        f1 = eval_digits(P, codec.encode(P.base, x1, depth))
        f2 = eval_digits(P, codec.encode(P.base, x2, depth))
        assert f1.exact and f2.exact
        if f2.value < f1.value:
            report.inversions += 1
        elif f2.value == f1.value:
            report.ties += 1
    report.sibling_increments = [cylinder_increment(P, (c,)) for c in range(P.d(1))]
    return report
