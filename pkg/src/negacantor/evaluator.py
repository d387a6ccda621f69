"""Evaluation of the function F~ with guaranteed error bounds.

F~ = F o g, where on positive Cantor digits delta_1 delta_2 ...

    F = beta_{delta_1,1} + sum_{n>=2} beta_{delta_n,n} prod_{j<n} p_{delta_j,j}

so everything below runs on positive digits and the nega view is an adapter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import codec
from .codec import NegaDigits, PositiveDigits, PTail
from .params import MatrixP, tilde


@dataclass(frozen=True)
class EvalResult:
    value: Fraction
    error_bound: Fraction = Fraction(0)

    @property
    def exact(self) -> bool:
        return self.error_bound == 0

    def interval(self) -> tuple[Fraction, Fraction]:
        return self.value - self.error_bound, self.value + self.error_bound

    def __str__(self):
        if self.exact:
            return f"{self.value} (exact)"
        return f"{float(self.value):.17g} +/- {float(self.error_bound):.3g}"


@lru_cache(maxsize=64)
def _sup_table(P: MatrixP) -> tuple[Fraction, ...]:
    k, L = P.layout
    if P.sign_class.nonnegative:
        # every shifted function is again monotone from 0 to 1
        return (Fraction(1),) * (k + L)
    cols = P.preperiod + P.period
    a = [max(abs(b) for b in P._betas[s]) for s in range(k + L)]
    b = [max(abs(v) for v in cols[s]) for s in range(k + L)]
    # |F_o| <= a_{o+1} + b_{o+1} |F_{o+1}|, closed around the period
    head, weight = Fraction(0), Fraction(1)
    for s in range(k, k + L):
        head += weight * a[s]
        weight *= b[s]
    if weight >= 1:
        raise ValueError("matrix violates property 1; no sup bound")
    M =[Fraction(0)] * (k + L + 1)
    M[k] = M[k + L] = head / (1 - weight)
    for s in range(k + L - 1, -1, -1):
        if s != k:
            M[s] = a[s] + b[s] * M[s + 1]
    return tuple(M[: k + L])


def sup_bound(P: MatrixP, offset: int) -> Fraction:
    """Bound on |F| for the function built from columns offset+1, offset+2, ..."""
    k, L = P.layout
    table = _sup_table(P)
    if offset < k:
        return table[offset]
    return table[k + (offset - k) % L]


def _accumulate(P: MatrixP, y: PositiveDigits) -> tuple[Fraction, Fraction]:
    """Partial sum and running product over the digits of ``y``."""
    s, prod = Fraction(0), Fraction(1)
    for n, e in enumerate(y.digits, start=y.offset + 1):
        s += prod * P.beta_column(n)[e]
        prod *= P.column(n)[e]
    return s, prod


def eval_positive(P: MatrixP, y: PositiveDigits) -> EvalResult:
    """Value of the (possibly shifted) function at positive digits ``y``."""
    codec._check_digits(P.base, y.digits, y.offset)
    s, prod = _accumulate(P, y)
    if y.tail is PTail.ZERO:
        return EvalResult(s)
    if y.tail is PTail.MAX:
        # beta_{d-1,n} + p_{d-1,n} = 1 telescopes the tail to 1
        return EvalResult(s + prod)
    return EvalResult(s, abs(prod) * sup_bound(P, y.offset + len(y.digits)))


def eval_digits(P: MatrixP, x: NegaDigits) -> EvalResult:
    return eval_positive(P, codec.to_positive(P.base, x))


def evaluate(P: MatrixP, x, tol) -> EvalResult:
    """F~(x) for a rational x with absolute error at most ``tol``."""
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    s, prod = Fraction(0), Fraction(1)
    n = 0
    for item in codec.iter_positive_digits(P.base, Fraction(x)):
        if item is PTail.ZERO:
            return EvalResult(s)
        if item is PTail.MAX:
            return EvalResult(s + prod)
        n += 1
        s += prod * P.beta_column(n)[item]
        prod *= P.column(n)[item]
        bound = abs(prod) * sup_bound(P, n)
        if bound <= tol:
            return EvalResult(s, bound)
    raise AssertionError("unreachable")


def welldefined_residual(P: MatrixP, r: NegaDigits) -> Fraction:
    """F~ at ``r`` minus F~ at its dual representation; 0 for every valid P."""
    other = codec.dual_representation(P.base, r)
    return eval_digits(P, r).value - eval_digits(P, other).value


def functional_eq_residual(P: MatrixP, i: int, k: int, y: PositiveDigits) -> Fraction:
    """Residual of f((i~ + shift^k y) / d_k) = beta~_{i,k} + p~_{i,k} f(shift^k y)."""
    if not y.exact:
        raise ValueError("y needs a canonical tail for exact evaluation")
    if k < 1:
        raise ValueError("k must be >= 1")
    d = P.d(k)
    if not 0 <= i < d:
        raise ValueError(f"digit {i} outside alphabet 0..{d - 1} at k={k}")
    z = codec.shift(P.base, y, k)
    i_adj = i if k % 2 else d - 1 - i
    left = PositiveDigits((i_adj,) + z.digits, z.tail, k - 1)
    # left argument must satisfy (i~ + value(z)) / d_k
    if codec.positive_value(P.base, left)[0] != (i_adj + codec.positive_value(P.base, z)[0]) / d:
        raise ArithmeticError("digit reconstruction failed")
    b, p = tilde(P, i, k)
    return eval_positive(P, left).value - (b + p * eval_positive(P, z).value)


def shift_eq_residual(P: MatrixP, x: NegaDigits, k: int) -> Fraction:
    """Residual of f(shift^k y) = beta~_{eps_{k+1},k+1} + p~_{eps_{k+1},k+1} f(shift^{k+1} y)."""
    if not x.exact:
        raise ValueError("x needs a canonical tail for exact evaluation")
    y = codec.to_positive(P.base, x)
    if k < len(x.digits):
        eps = x.digits[k]
    else:
        # tail digit at position k+1
        n = k + 1
        low = (x.tail is codec.Tail.LOWHIGH) == bool(n % 2)
        eps = 0 if low else P.d(n) - 1
    b, p = tilde(P, eps, k + 1)
    lhs = eval_positive(P, codec.shift(P.base, y, k)).value
    return lhs - (b + p * eval_positive(P, codec.shift(P.base, y, k + 1)).value)
