"""Exact arithmetic: nu-polynomials, windowed Laurent series, time polynomials."""
from fractions import Fraction as Rational

from .nupoly import (NU, ONE, ZERO, NuPoly, NuRatio, as_nupoly, double_factorial,
                     format_rational, pochhammer)
from .series import (NEG_INF, LaurentSeries, MultiSeries, UntrustedCoefficientError,
                     flag_coordinates, geometric_denominator, series_derivative, series_mul)
from .timepoly import (TimePoly, ells_from_mono, level, mono_factorial, mono_from_ells,
                       monomials_up_to, normalize_mono)

__all__ = [
    "Rational", "NuPoly", "NuRatio", "NU", "ONE", "ZERO", "as_nupoly", "double_factorial",
    "format_rational", "pochhammer", "NEG_INF", "LaurentSeries", "MultiSeries",
    "UntrustedCoefficientError", "flag_coordinates", "geometric_denominator",
    "series_derivative", "series_mul", "TimePoly", "ells_from_mono", "level",
    "mono_factorial", "mono_from_ells", "monomials_up_to", "normalize_mono",
]
