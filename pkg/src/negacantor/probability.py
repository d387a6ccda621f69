"""The random variable eta with independent Cantor digits, and its CDF.

Digits xi_k are drawn with P{xi_k = i} = p_{i,k}; eta = sum xi_k / (d_1...d_k)
is cut off after ``depth`` digits, which biases each sample downwards by less
than 1/(d_1...d_depth).

Random numbers come from numpy's Philox4x64-10 counter-based generator.
Samples are produced in fixed-size chunks; chunk c uses the key
``seed + c * 2**64`` so any split of the chunks over workers reproduces the
same list.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TextIO

import numpy as np

from .evaluator import evaluate
from .params import MatrixP

CHUNK = 1 << 16
INT64_LIMIT = 1 << 62


@dataclass(frozen=True)
class EtaSampler:
    matrix: MatrixP
    depth: int
    seed: int

    def __post_init__(self):
        if not self.matrix.sign_class.nonnegative:
            raise ValueError("matrix has negative entries; it is not a probability model")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.denominator > INT64_LIMIT:
            raise ValueError("depth too large for 64-bit sample numerators")

    @property
    def denominator(self) -> int:
        return self.matrix.base.radix_product(self.depth)


def default_depth(P: MatrixP, grid_size: int = 1) -> int:
    """Shallowest depth with d_1...d_N >= max(2**40, 10 * grid_size)."""
    target = max(1 << 40, 10 * grid_size)
    n, D = 0, 1
    while D < target:
        n += 1
        D *= P.d(n)
    return n


def _chunk(s: EtaSampler, index: int, size: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=(s.seed % (1 << 64)) + (index << 64)))
    num = np.zeros(size, dtype=np.int64)
    for n in range(1, s.depth + 1):
        col = s.matrix.column(n)
        cuts = np.array([float(b) for b in s.matrix.beta_column(n)[1:]])
        xi = np.searchsorted(cuts, rng.random(size), side="right")
        num = num * len(col) + xi
    return num


def sample_numerators(s: EtaSampler, count: int) -> np.ndarray:
    """Samples as integers over the common denominator ``s.denominator``."""
    if count < 0:
        raise ValueError("count must be >= 0")
    parts = []
    for c in range(math.ceil(count / CHUNK)):
        parts.append(_chunk(s, c, min(CHUNK, count - c * CHUNK)))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def sample(s: EtaSampler, count: int) -> list[Fraction]:
    D = s.denominator
    return [Fraction(int(v), D) for v in sample_numerators(s, count)]


@dataclass(frozen=True)
class CdfComparison:
    statistic: float
    ks_reference: float
    n_samples: int
    depth: int
    grid: list[Fraction]
    empirical: list[float]
    model: list[float]

    def write_csv(self, fh: TextIO) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "empirical", "model"])
        for x, e, m in zip(self.grid, self.empirical, self.model):
            w.writerow([str(x), repr(e), repr(m)])

    def to_json(self) -> dict:
        return {
            "statistic": self.statistic,
            "ks_reference": self.ks_reference,
            "n_samples": self.n_samples,
            "depth": self.depth,
        }


def cdf_distance(P: MatrixP, n_samples: int, grid_size: int, seed: int, depth: int | None = None) -> CdfComparison:
    """Sup distance over x = j/grid_size between #{eta < x}/n and F~(x).

    F~(x) = P{eta < x}, so the empirical side counts samples strictly below
    each grid point.
    """
    if n_samples <= 0:
        raise ValueError("empty sample")
    if grid_size < 1:
        raise ValueError("grid_size must be >= 1")
    depth = default_depth(P, grid_size) if depth is None else depth
    s = EtaSampler(P, depth, seed)
    num = np.sort(sample_numerators(s, n_samples))
    D = s.denominator
    grid = [Fraction(j, grid_size) for j in range(grid_size + 1)]
    # eta < j/G  <=>  numerator < ceil(j D / G)
    thresholds = np.array([-(-j * D // grid_size) for j in range(grid_size + 1)], dtype=np.int64)
    empirical = (np.searchsorted(num, thresholds, side="left") / n_samples).tolist()
    tol = Fraction(1, 10**12)
    model = [float(evaluate(P, x, tol).value) for x in grid]
    stat = max(abs(e - m) for e, m in zip(empirical, model))
    return CdfComparison(stat, 1.36 / math.sqrt(n_samples), n_samples, depth, grid, empirical, model)


def write_samples_csv(s: EtaSampler, count: int, fh: TextIO) -> None:
    D = s.denominator
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["index", "numerator", "denominator", "value"])
    for idx, v in enumerate(sample_numerators(s, count)):
        w.writerow([idx, int(v), D, repr(int(v) / D)])
