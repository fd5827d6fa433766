"""Exact rational scalars, vectors and matrices.

Every payoff, probability and LP value in the package is a
:class:`fractions.Fraction`.  Vectors and matrices are plain tuples (of
tuples) of fractions so they are hashable and immutable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

Rational = Fraction
RatVector = Tuple[Fraction, ...]
RatMatrix = Tuple[RatVector, ...]

RationalLike = Union[Fraction, int, str]

__all__ = [
    "Rational",
    "RatVector",
    "RatMatrix",
    "RationalParseError",
    "parse_rational",
    "to_rational",
    "render",
    "approx",
    "vector",
    "matrix",
    "transpose",
    "dot",
    "mat_vec",
    "vec_mat",
    "shape",
]

_INT = re.compile(r"[+-]?\d+")
_FRAC = re.compile(r"([+-]?\d+)\s*/\s*([+-]?\d+)")
_DEC = re.compile(r"([+-]?)(\d*)\.(\d*)")


class RationalParseError(ValueError):
    """Raised when a token is not an integer, ``p/q`` fraction or finite decimal."""

    def __init__(self, token, reason="not a rational number"):
        self.token = token
        self.reason = reason
        super().__init__(f"cannot parse {token!r}: {reason}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"-2"``, ``"28/3"`` or ``"3.5"`` into an exact fraction.

    Decimals are converted digit by digit, so ``"0.1"`` is exactly 1/10.
    The unicode minus sign is accepted as a convenience.
    """
    if not isinstance(text, str):
        raise RationalParseError(text, "expected a string")
    token = text.strip().replace("−", "-")
    if _INT.fullmatch(token):
        return Fraction(int(token))
    m = _FRAC.fullmatch(token)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise RationalParseError(text, "zero denominator")
        return Fraction(num, den)
    m = _DEC.fullmatch(token)
    if m and (m.group(2) or m.group(3)):
        sign = -1 if m.group(1) == "-" else 1
        whole = int(m.group(2) or "0")
        frac_digits = m.group(3)
        value = Fraction(whole)
        if frac_digits:
            value += Fraction(int(frac_digits), 10 ** len(frac_digits))
        return sign * value
    raise RationalParseError(text)


def to_rational(value: RationalLike) -> Fraction:
    """Coerce ints, fractions and rational tokens.  Floats are rejected."""
    if isinstance(value, bool):
        raise TypeError("booleans are not payoffs")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(
        f"expected int, Fraction or rational string, got {type(value).__name__}"
    )


def render(value: Fraction) -> str:
    """Canonical text: ``"p/q"``, or ``"p"`` when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def approx(value: Fraction, digits: int = 6) -> float:
    """Decimal approximation for display only."""
    return round(float(value), digits)


def vector(values: Iterable[RationalLike]) -> RatVector:
    return tuple(to_rational(v) for v in values)


def matrix(rows: Iterable[Iterable[RationalLike]]) -> RatMatrix:
    """Build a rectangular matrix; ragged input raises ``ValueError``."""
    out = tuple(vector(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        lengths = sorted({len(r) for r in out})
        raise ValueError(f"ragged matrix: row lengths {lengths}")
    return out


def shape(mat: RatMatrix) -> Tuple[int, int]:
    return len(mat), (len(mat[0]) if mat else 0)


def transpose(mat: RatMatrix) -> RatMatrix:
    return tuple(zip(*mat))


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def mat_vec(mat: RatMatrix, v: Sequence[Fraction]) -> RatVector:
    """``mat @ v``."""
    return tuple(dot(row, v) for row in mat)


def vec_mat(v: Sequence[Fraction], mat: RatMatrix) -> RatVector:
    """``v @ mat``."""
    if len(v) != len(mat):
        raise ValueError(f"dimension mismatch: {len(v)} vs {len(mat)}")
    n = len(mat[0]) if mat else 0
    out = [Fraction(0)] * n
    for w, row in zip(v, mat):
        if w:
            for j, a in enumerate(row):
                if a:
                    out[j] += w * a
    return tuple(out)
