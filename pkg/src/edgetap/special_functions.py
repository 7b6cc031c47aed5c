"""Double-precision scalar special functions underlying the distribution math.

All functions are pure and stateless; callers loop over arrays themselves.
"""

import math

from scipy import special as _special

_SQRT_2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def erf(x: float) -> float:
    """Gauss error function."""
    return math.erf(x)


def normal_pdf(z: float) -> float:
    """Standard normal density."""
    return math.exp(-0.5 * z * z) / _SQRT_2PI


def normal_cdf(z: float) -> float:
    """Standard normal CDF, computed through the error function."""
    return 0.5 * (1.0 + erf(z / _SQRT_2))


def owens_t(h: float, a: float) -> float:
    """Owen's T function T(h, a)."""
    return float(_special.owens_t(h, a))
