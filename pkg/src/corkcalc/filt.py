"""Exact filtration values: rationals plus the two infinities.

Finite values are :class:`fractions.Fraction`; the infinities are the float
constants ``INF`` / ``NEG_INF``.  Fractions compare exactly against them, so
ordinary ``<``, ``min`` and ``max`` work without special cases.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

FiltValue = Union[Fraction, float]

INF = math.inf
NEG_INF = -math.inf


def parse_filt(value: object) -> FiltValue:
    """Coerce ``value`` to a filtration value.

    Accepts ints, Fractions, the strings ``"p/q"``, ``"p"``, ``"inf"``,
    ``"-inf"``, and the float infinities.  Finite floats are refused: they
    would silently break exact window membership.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a filtration value: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if math.isinf(value):
            return value
        raise ValueError(f"finite floats are not exact filtration values: {value!r}")
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity", "+infinity"):
            return INF
        if text in ("-inf", "-infinity"):
            return NEG_INF
        if "." in text or "e" in text:
            raise ValueError(f"use p/q notation, not decimals: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational p/q: {value!r}") from exc
    raise ValueError(f"not a filtration value: {value!r}")


def fmt_filt(value: FiltValue) -> str:
    """Render as ``p/q``, ``p``, ``inf`` or ``-inf``."""
    if isinstance(value, float):
        if value == INF:
            return "inf"
        if value == NEG_INF:
            return "-inf"
        raise ValueError(f"finite float leaked into exact arithmetic: {value!r}")
    return str(Fraction(value))


def is_finite(value: FiltValue) -> bool:
    return not (isinstance(value, float) and math.isinf(value))


def add(a: FiltValue, b: FiltValue) -> FiltValue:
    """Sum with the convention that ``-inf`` absorbs (``inf + -inf = -inf``)."""
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    if a == INF or b == INF:
        return INF
    return Fraction(a) + Fraction(b)


def neg(a: FiltValue) -> FiltValue:
    return -a
