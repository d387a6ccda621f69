"""Affine maps psi_{i,n} whose compositions trace the graph of F~."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from decimal import Context
from fractions import Fraction
from typing import TextIO

from .params import MatrixP, SignClass, reflect, tilde

POINT_LIMIT = 10**6


@dataclass(frozen=True)
class AffineMap:
    """(x, y) -> (x_scale x + x_offset, y_scale y + y_offset)."""

    n: int
    i: int
    x_scale: Fraction
    x_offset: Fraction
    y_scale: Fraction
    y_offset: Fraction

    def __call__(self, pt):
        return apply(self, pt)


def affine_map(P: MatrixP, i: int, n: int) -> AffineMap:
    d = P.d(n)
    omega = reflect(P, i, n)
    b, p = tilde(P, i, n)
    return AffineMap(n, i, Fraction(1, d), Fraction(omega, d), p, b)


def apply(m: AffineMap, pt) -> tuple[Fraction, Fraction]:
    x, y = pt
    return m.x_scale * x + m.x_offset, m.y_scale * y + m.y_offset


def within_hypothesis(P: MatrixP) -> bool:
    """Graph description is only claimed for strictly positive matrices."""
    return P.sign_class is SignClass.ALL_POSITIVE


def graph_points(P: MatrixP, depth: int) -> list[tuple[Fraction, Fraction]]:
    """psi_{eps_1,1} o ... o psi_{eps_n,n} applied to (0, 0) for every digit string.

    The first position's map is the outermost one: it maps the graph of the
    once-shifted function onto the graph of F~.  Composition is carried along
    the digit tree as a running affine map, so every point is the image of
    the seed under the full composite.
    """
    if P.base.radix_product(depth) > POINT_LIMIT:
        raise ValueError(f"more than {POINT_LIMIT} points requested")
    points = []
    # (ax, bx, ay, by): composite maps (x, y) to (ax x + bx, ay y + by)
    stack = [(0, Fraction(1), Fraction(0), Fraction(1), Fraction(0))]
    while stack:
        n, ax, bx, ay, by = stack.pop()
        if n == depth:
            points.append((bx, by))  # image of the seed (0, 0)
            continue
        for i in range(P.d(n + 1)):
            m = affine_map(P, i, n + 1)
            stack.append((n + 1, ax * m.x_scale, ax * m.x_offset + bx, ay * m.y_scale, ay * m.y_offset + by))
    points.sort()
    return points


def _dec(v: Fraction, digits: int = 17) -> str:
    ctx = Context(prec=digits)
    return str(ctx.divide(v.numerator, v.denominator))


def write_csv(points, fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "y", "x_exact", "y_exact"])
    for x, y in points:
        w.writerow([_dec(x), _dec(y), str(x), str(y)])


def write_json(points, fh: TextIO, hypothesis: bool = True) -> None:
    doc = {
        "within_hypothesis": hypothesis,
        "points": [{"x": str(x), "y": str(y), "x_dec": _dec(x), "y_dec": _dec(y)} for x, y in points],
    }
    json.dump(doc, fh, indent=1)
    fh.write("\n")
