import math
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from lensdelay.phasefold import fold_phase, fold_product_phase

# 2*pi to 60 digits, as an exact rational reference
_TWO_PI_REF = Fraction(
    "6.28318530717958647692528676655900576839433879875021164194989"
)


def _reference_mod(x: float) -> float:
    r = Fraction(x) % _TWO_PI_REF
    r = float(r)
    return r - 2 * math.pi if r > math.pi else r


def _reference_prod_mod(a: float, b: float) -> float:
    r = (Fraction(a) * Fraction(b)) % _TWO_PI_REF
    r = float(r)
    return r - 2 * math.pi if r > math.pi else r


@given(st.floats(min_value=-1e15, max_value=1e15, allow_nan=False))
@settings(max_examples=200)
def test_fold_phase_matches_exact_rational(x):
    got = fold_phase(x)
    ref = _reference_mod(x)
    diff = abs(got - ref)
    assert min(diff, abs(diff - 2 * math.pi)) < 1e-9


@given(
    st.floats(min_value=1e10, max_value=1e16),
    st.floats(min_value=1e-9, max_value=1e-3),
)
@settings(max_examples=200)
def test_fold_product_phase_precision(omega, tau):
    got = fold_product_phase(omega, tau)
    ref = _reference_prod_mod(omega, tau)
    diff = abs(got - ref)
    assert min(diff, abs(diff - 2 * math.pi)) < 1e-6


def test_fold_phase_vectorized():
    xs = np.array([0.0, math.pi, 7.0, 1e12, -1e12])
    folded = fold_phase(xs)
    assert folded.shape == xs.shape
    np.testing.assert_allclose(np.cos(folded), np.cos(xs), atol=1e-9)


def test_small_values_untouched():
    assert fold_phase(1.25) == 1.25
    assert abs(fold_product_phase(2.0, 0.5) - 1.0) < 1e-15
