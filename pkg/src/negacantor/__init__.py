"""Alternating Cantor series digits and the function family F~ built on them."""

from .codec import NegaDigits, PositiveDigits, PTail, Tail
from .evaluator import EvalResult, eval_digits, evaluate
from .params import BaseSequence, MatrixP, SignClass, validate

__all__ = [
    "BaseSequence",
    "EvalResult",
    "MatrixP",
    "NegaDigits",
    "PTail",
    "PositiveDigits",
    "SignClass",
    "Tail",
    "eval_digits",
    "evaluate",
    "validate",
]
