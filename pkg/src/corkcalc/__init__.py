"""Exact computations with filtered instanton-type complexes over GF(2)[y, 1/y]."""

from __future__ import annotations

from .core import (
    Flavor,
    Generator,
    InstantonComplex,
    InvolutiveComplex,
    LinearMap,
    StructuralError,
    trivial_complex,
    trivial_involutive,
    validate,
)
from .filt import INF, NEG_INF, fmt_filt, parse_filt
from .io import ComplexFormatError, load_complex, save_complex
from .rs import find_theta_cycle, local_triviality, rs_function, rs_value
from .window import truncate

__all__ = [
    "ComplexFormatError",
    "Flavor",
    "Generator",
    "INF",
    "InstantonComplex",
    "InvolutiveComplex",
    "LinearMap",
    "NEG_INF",
    "StructuralError",
    "find_theta_cycle",
    "fmt_filt",
    "load_complex",
    "local_triviality",
    "parse_filt",
    "rs_function",
    "rs_value",
    "save_complex",
    "trivial_complex",
    "trivial_involutive",
    "truncate",
    "validate",
]
