"""Extended-precision reduction of large phases modulo 2*pi.

Carrier phases omega*tau can reach ~1e13 rad in physical units, where a
plain double multiply-then-mod loses several digits.  ``fold_phase``
computes (x mod 2*pi) with the multiple of 2*pi represented in
double-double precision, keeping the absolute phase error below ~1e-6 rad
for |x| <= 1e16 (and far below that in the dimensionless regime).
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi
# 2*pi = _TWOPI_HI + _TWOPI_LO + O(1e-33)
_TWOPI_HI = 6.283185307179586
_TWOPI_LO = 2.4492935982947064e-16

_SPLIT = 134217729.0  # 2**27 + 1, Veltkamp splitter


def _two_prod(a, b):
    """Exact product a*b = p + e using Veltkamp splitting (no FMA needed)."""
    p = a * b
    a_hi = (a * _SPLIT) - ((a * _SPLIT) - a)
    a_lo = a - a_hi
    b_hi = (b * _SPLIT) - ((b * _SPLIT) - b)
    b_lo = b - b_hi
    e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, e


def fold_phase(x):
    """Return x reduced to (-pi, pi] with double-double accuracy.

    Accepts scalars or arrays; |x| may be as large as ~1e16.
    """
    x = np.asarray(x, dtype=float)
    k = np.rint(x / TWO_PI)
    p, e = _two_prod(k, _TWOPI_HI)
    r = (x - p) - e - k * _TWOPI_LO
    # one mop-up pass in case rounding of x/2pi put r just outside the band
    k2 = np.rint(r / TWO_PI)
    r = r - k2 * _TWOPI_HI - k2 * _TWOPI_LO
    return r if r.ndim else float(r)


def fold_product_phase(a, b):
    """Return (a*b) mod 2*pi in (-pi, pi], with the product formed exactly.

    Splits a*b into hi+lo parts before reduction so that e.g.
    omega0 ~ 1e16 times tau ~ 1e-3 keeps sub-microradian accuracy.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p, e = _two_prod(a, b)
    return fold_phase(p) + e
