"""Invariant suite run by ``negacantor selftest`` against one matrix."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import analysis, codec, evaluator, selfaffine
from .codec import NegaDigits, PositiveDigits, PTail, Tail
from .params import MatrixP


def _random_rational_digits(P: MatrixP, rng: random.Random, max_len: int = 8) -> NegaDigits:
    """Random normalized nega-rational (never 0 or 1)."""
    while True:
        n = rng.randint(1, max_len)
        digits = [rng.randrange(P.d(m)) for m in range(1, n + 1)]
        tail = rng.choice([PTail.ZERO, PTail.MAX])
        x = codec.normalize(P.base, codec.from_positive(P.base, PositiveDigits(tuple(digits), tail)))
        if x.digits:
            return x


def _depth_for(P: MatrixP, limit: int) -> int:
    n = 0
    while P.base.radix_product(n + 1) <= limit:
        n += 1
    return max(n, 1)


def run(P: MatrixP, seed: int = 0) -> list[tuple[str, bool, str]]:
    rng = random.Random(seed)
    base = P.base
    out = []

    xs = [analysis.random_rational(P, rng, 10) for _ in range(200)]
    ok = all(codec.decode(base, codec.encode(base, x, 12)) == (x, x) for x in xs)
    out.append(("round trip", ok, "200 grid rationals"))

    pts = [_random_rational_digits(P, rng) for _ in range(200)]
    ok = all(evaluator.welldefined_residual(P, r) == 0 for r in pts)
    out.append(("well-definedness", ok, "200 nega-rationals"))

    f0 = evaluator.eval_digits(P, codec.encode(base, 0, 1))
    f1 = evaluator.eval_digits(P, codec.encode(base, 1, 1))
    out.append(("endpoints", f0.value == 0 and f1.value == 1 and f0.exact and f1.exact, f"F(0)={f0.value}, F(1)={f1.value}"))

    depth = _depth_for(P, 3**8)
    closed = analysis.integral_closed_form(P, Fraction(1, 10**9))
    lo, hi = analysis.integral_quadrature(P, depth)
    out.append(("integral enclosure", lo <= closed.value <= hi, f"depth {depth}: [{float(lo):.9g}, {float(hi):.9g}]"))

    depth = _depth_for(P, 3**5)
    prefixes = itertools.product(*(range(P.d(n)) for n in range(1, depth + 1)))
    ok = all(analysis.cylinder_increment(P, c) == analysis.cylinder_measure(P, c) for c in prefixes)
    out.append(("cylinder measure", ok, f"all cylinders to depth {depth}"))

    bad = 0
    for _ in range(100):
        k = rng.randint(1, 5)
        y = codec.to_positive(base, _random_rational_digits(P, rng))
        bad += evaluator.functional_eq_residual(P, rng.randrange(P.d(k)), k, y) != 0
    out.append(("functional equations", bad == 0, "100 random (i, k, y)"))

    depth = _depth_for(P, 3**6)
    ok = True
    for x, y in selfaffine.graph_points(P, depth):
        ok &= evaluator.eval_digits(P, codec.encode(base, x, depth + 1)).value == y
    out.append(("self-affinity", ok, f"graph points at depth {depth}"))

    mono = analysis.monotonicity_probe(P, 200, seed, 10)
    out.append(("monotonicity", mono.consistent, f"{P.sign_class.value}: {mono.inversions} inversions"))
    return out
