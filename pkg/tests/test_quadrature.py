"""Adaptive Simpson quadrature against closed forms and library quadrature."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import quad_integral
from bcv.config import QuadConfig
from bcv.quadrature import QuadratureError, adaptive_simpson


def test_polynomials_are_integrated_exactly():
    # Simpson is exact on cubics, so the adaptive version must be too
    assert adaptive_simpson(lambda t: t ** 3 - 2 * t + 1, 0.0, 1.0) == pytest.approx(
        1 / 4 - 1 + 1, abs=1e-14)


def test_cosine_matches_sine_difference():
    val = adaptive_simpson(math.cos, 0.0, 2.0)
    assert abs(val - math.sin(2.0)) < 1e-10


def test_meets_absolute_tolerance_on_oscillatory_integrand():
    f = lambda t: math.sin(40.0 * t) * math.exp(-t)
    ref = quad_integral(f, 0.0, 3.0)
    assert abs(adaptive_simpson(f, 0.0, 3.0) - ref) < 1e-9
    tight = adaptive_simpson(f, 0.0, 3.0, QuadConfig(abs_tol=1e-12))
    assert abs(tight - ref) < 1e-11


def test_orientation_and_degenerate_interval():
    f = lambda t: t * t
    assert adaptive_simpson(f, 1.0, 0.0) == -adaptive_simpson(f, 0.0, 1.0)
    assert adaptive_simpson(f, 0.5, 0.5) == 0.0


def test_bounded_kink_converges_despite_tolerance_halving():
    # sqrt has unbounded curvature at 0; the width floor keeps the recursion
    # from dying at max_depth while the result stays within tolerance
    val = adaptive_simpson(math.sqrt, 0.0, 1.0)
    assert abs(val - 2.0 / 3.0) < 1e-9


def test_jump_discontinuity_raises_at_shallow_depth():
    f = lambda t: 0.0 if t < 1.0 / math.pi else 1.0
    with pytest.raises(QuadratureError):
        adaptive_simpson(f, 0.0, 1.0, QuadConfig(abs_tol=1e-10, max_depth=8))


def test_endpoints_are_passed_to_the_integrand():
    seen = []
    adaptive_simpson(lambda t: seen.append(t) or t, 0.0, 1.0)
    assert 0.0 in seen and 1.0 in seen


@given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
def test_quadratic_agreement_with_closed_form(a, b, c):
    f = lambda t: a * t * t + b * t + c
    exact = a / 3.0 + b / 2.0 + c
    assert abs(adaptive_simpson(f, 0.0, 1.0) - exact) < 1e-12
