"""Radix schedule (d_n) and parameter matrix P.

Both are eventually periodic.  A :class:`MatrixP` is always stored in the
joint layout shared with its base sequence: the two preperiods are padded to
a common length and the period is the least common multiple of the two
periods, so ``position_index(n)`` addresses ``d_n`` and the column
``p_{., n}`` at once.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence


class StructuralError(ValueError):
    """Matrix layout does not fit the base sequence."""


class SignClass(enum.Enum):
    ALL_POSITIVE = "AllPositive"
    ALL_NONNEGATIVE = "AllNonnegative"
    MIXED_SIGNS = "MixedSigns"

    @property
    def nonnegative(self) -> bool:
        return self is not SignClass.MIXED_SIGNS


def _rational(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"rationals must be integers or 'num/den' strings, got {value!r}")


def _unroll(preperiod: Sequence, period: Sequence, pre_len: int, per_len: int) -> tuple[list, list]:
    """Re-express an eventually periodic sequence with a longer layout."""
    def at(k):  # 0-based
        if k < len(preperiod):
            return preperiod[k]
        return period[(k - len(preperiod)) % len(period)]

    pre = [at(k) for k in range(pre_len)]
    per = [at(pre_len + k) for k in range(per_len)]
    return pre, per


@dataclass(frozen=True)
class BaseSequence:
    """Eventually periodic radix schedule d_1, d_2, ... with every d_n >= 2."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(int(d) for d in self.preperiod))
        object.__setattr__(self, "period", tuple(int(d) for d in self.period))
        if not self.period:
            raise ValueError("period must be non-empty")
        bad = [d for d in self.preperiod + self.period if d < 2]
        if bad:
            raise ValueError(f"every radix must be >= 2, got {bad[0]}")

    @classmethod
    def constant(cls, d: int) -> BaseSequence:
        return cls((), (d,))

    def d(self, n: int) -> int:
        """Radix at position ``n`` (1-based)."""
        if n < 1:
            raise IndexError(f"positions start at 1, got {n}")
        if n <= len(self.preperiod):
            return self.preperiod[n - 1]
        return self.period[(n - len(self.preperiod) - 1) % len(self.period)]

    def radix_product(self, n: int, start: int = 0) -> int:
        """d_{start+1} * ... * d_{start+n}."""
        out = 1
        for m in range(start + 1, start + n + 1):
            out *= self.d(m)
        return out

    def to_json(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period)}


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    ok: bool
    failures: tuple[tuple[int, int], ...] = ()  # offending (i, n)
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[PropertyCheck, ...]
    sign_class: SignClass
    contraction: Fraction  # rho over one joint period

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "sign_class": self.sign_class.value,
            "contraction": str(self.contraction),
            "properties": [
                {
                    "property": c.name,
                    "ok": c.ok,
                    "failures": [{"i": i, "n": n} for i, n in c.failures],
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }


@dataclass(frozen=True)
class MatrixP:
    """Columns p_{0,n}..p_{d_n-1,n} aligned with a :class:`BaseSequence`.

    Construction normalizes both sequences to the joint layout and checks
    column arity; it does not check properties 1-4 (see :func:`validate`).
    """

    base: BaseSequence
    preperiod: tuple[tuple[Fraction, ...], ...]
    period: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        pre = [tuple(_rational(v) for v in col) for col in self.preperiod]
        per = [tuple(_rational(v) for v in col) for col in self.period]
        if not per:
            raise StructuralError("matrix period must be non-empty")
        pre_len = max(len(pre), len(self.base.preperiod))
        per_len = math.lcm(len(per), len(self.base.period))
        base_pre, base_per = _unroll(self.base.preperiod, self.base.period, pre_len, per_len)
        pre, per = _unroll(pre, per, pre_len, per_len)
        for k, (col, d) in enumerate(zip(pre + per, base_pre + base_per)):
            if len(col) != d:
                raise StructuralError(
                    f"column at position n={k + 1} has {len(col)} entries but d_{k + 1}={d}"
                )
        object.__setattr__(self, "base", BaseSequence(tuple(base_pre), tuple(base_per)))
        object.__setattr__(self, "preperiod", tuple(pre))
        object.__setattr__(self, "period", tuple(per))

    @classmethod
    def periodic(cls, *columns: Iterable) -> MatrixP:
        """Purely periodic matrix whose radices are the column lengths."""
        cols = [tuple(c) for c in columns]
        return cls(BaseSequence((), tuple(len(c) for c in cols)), (), tuple(cols))

    @property
    def layout(self) -> tuple[int, int]:
        """(preperiod length, period length) of the joint layout."""
        return len(self.preperiod), len(self.period)

    def position_index(self, n: int) -> int:
        """0-based slot of position ``n`` inside preperiod + period."""
        if n < 1:
            raise IndexError(f"positions start at 1, got {n}")
        k, L = self.layout
        if n <= k:
            return n - 1
        return k + (n - k - 1) % L

    def d(self, n: int) -> int:
        return self.base.d(n)

    def column(self, n: int) -> tuple[Fraction, ...]:
        k = len(self.preperiod)
        slot = self.position_index(n)
        return self.preperiod[slot] if slot < k else self.period[slot - k]

    def p(self, i: int, n: int) -> Fraction:
        col = self.column(n)
        if not 0 <= i < len(col):
            raise ValueError(f"digit {i} outside alphabet 0..{len(col) - 1} at n={n}")
        return col[i]

    @cached_property
    def _betas(self) -> tuple[tuple[Fraction, ...], ...]:
        out = []
        for col in self.preperiod + self.period:
            acc, row = Fraction(0), []
            for v in col:
                row.append(acc)
                acc += v
            out.append(tuple(row))
        return tuple(out)

    def beta_column(self, n: int) -> tuple[Fraction, ...]:
        return self._betas[self.position_index(n)]

    @cached_property
    def sign_class(self) -> SignClass:
        entries = [v for col in self.preperiod + self.period for v in col]
        if all(v > 0 for v in entries):
            return SignClass.ALL_POSITIVE
        if all(v >= 0 for v in entries):
            return SignClass.ALL_NONNEGATIVE
        return SignClass.MIXED_SIGNS

    @cached_property
    def contraction(self) -> Fraction:
        """rho: product over one joint period of max_i |p_{i,n}|."""
        rho = Fraction(1)
        for col in self.period:
            rho *= max(abs(v) for v in col)
        return rho

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "matrix": {
                "preperiod": [[str(v) for v in col] for col in self.preperiod],
                "period": [[str(v) for v in col] for col in self.period],
            },
        }


def beta(P: MatrixP, i: int, n: int) -> Fraction:
    """beta_{i,n}: 0 for i = 0, else p_{0,n} + ... + p_{i-1,n}."""
    row = P.beta_column(n)
    if not 0 <= i < len(row):
        raise ValueError(f"digit {i} outside alphabet 0..{len(row) - 1} at n={n}")
    return row[i]


def reflect(P: MatrixP, i: int, n: int) -> int:
    """Parity-adjusted digit: i at odd n, d_n - 1 - i at even n."""
    d = P.d(n)
    if not 0 <= i < d:
        raise ValueError(f"digit {i} outside alphabet 0..{d - 1} at n={n}")
    return i if n % 2 else d - 1 - i


def tilde(P: MatrixP, i: int, n: int) -> tuple[Fraction, Fraction]:
    """(beta~_{i,n}, p~_{i,n})."""
    j = reflect(P, i, n)
    return P.beta_column(n)[j], P.column(n)[j]


def validate(P: MatrixP) -> ValidationReport:
    """Check properties 1-4 on one preperiod plus one joint period."""
    k, L = P.layout
    cols = P.preperiod + P.period
    bad1, bad2, bad4 = [], [], []
    for slot, col in enumerate(cols):
        n = slot + 1
        bad1 += [(i, n) for i, v in enumerate(col) if not -1 < v < 1]
        if sum(col) != 1:
            bad2.append((len(col) - 1, n))
        row = P._betas[slot]
        bad4 += [(i, n) for i in range(1, len(col)) if row[i] <= 0]
    rho = P.contraction
    # with 1 in force rho < 1 follows; report it anyway since error bounds use it
    checks = (
        PropertyCheck("1", not bad1, tuple(bad1), "entries in (-1, 1)"),
        PropertyCheck("2", not bad2, tuple(bad2), "column sums equal 1"),
        PropertyCheck("3", rho < 1, (), f"per-period contraction rho={rho}"),
        PropertyCheck("4", not bad4, tuple(bad4), "partial sums beta_{i,n} > 0 for i >= 1"),
    )
    return ValidationReport(checks, P.sign_class, rho)


# -- configuration documents -------------------------------------------------

def from_json(doc: dict) -> MatrixP:
    try:
        base = BaseSequence(tuple(doc["base"].get("preperiod", [])), tuple(doc["base"]["period"]))
        m = doc["matrix"]
        return MatrixP(base, tuple(m.get("preperiod", [])), tuple(m["period"]))
    except KeyError as exc:
        raise StructuralError(f"config is missing key {exc}") from None


def load_config(path: str | Path) -> MatrixP:
    with open(path, encoding="utf-8") as fh:
        return from_json(json.load(fh))


# -- reference matrices ------------------------------------------------------

def uniform(d: int = 2) -> MatrixP:
    return MatrixP.periodic([Fraction(1, d)] * d)


def salem(p0: Fraction = Fraction(7, 10)) -> MatrixP:
    return MatrixP.periodic([p0, 1 - p0])


def mixed() -> MatrixP:
    return MatrixP.periodic([Fraction(3, 5), Fraction(-1, 5), Fraction(3, 5)])


PRESETS = {"uniform": uniform, "uniform3": lambda: uniform(3), "salem": salem, "mixed": mixed}
