from fractions import Fraction as F

import pytest

from negacantor import params
from negacantor.params import BaseSequence, MatrixP


def varied() -> MatrixP:
    """Preperiod plus a two-column period with different radices and a negative entry."""
    base = BaseSequence((3,), (2, 3))
    return MatrixP(
        base,
        ((F(1, 2), F(1, 4), F(1, 4)),),
        ((F(2, 5), F(3, 5)), (F(1, 2), F(-1, 4), F(3, 4))),
    )


def staggered() -> MatrixP:
    """Base and matrix with different periods; the joint layout has to unroll both."""
    base = BaseSequence((), (2,))
    return MatrixP(base, ((F(1, 3), F(2, 3)),), ((F(7, 10), F(3, 10)), (F(1, 2), F(1, 2))))


REFERENCE = {
    "uniform": params.uniform,
    "salem": params.salem,
    "mixed": params.mixed,
}

CORPUS = {
    **REFERENCE,
    "uniform3": lambda: params.uniform(3),
    "uniform5": lambda: params.uniform(5),
    "salem_low": lambda: params.salem(F(1, 5)),
    "varied": varied,
    "staggered": staggered,
    "zero_entry": lambda: MatrixP.periodic([F(1, 2), F(0), F(1, 2)]),
}


@pytest.fixture(params=sorted(CORPUS))
def matrix(request):
    return CORPUS[request.param]()


@pytest.fixture(params=sorted(REFERENCE))
def reference(request):
    return REFERENCE[request.param]()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
