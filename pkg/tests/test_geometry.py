import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vcdyn.geometry import (
    Configuration,
    CouplingCoefficients,
    Geometry,
    configuration_preset,
    coupling_coefficients,
    normalize_angles,
    radial_factors,
)

# high-precision reference values (mpmath, 50 digits)
RADIAL_AT_PI = -0.10132118364233777  # p_i(pi) = -1/pi^2
RADIAL_AT_02 = dict(
    p_i=0.47324790162589176,
    q_i=-0.093909752403638681,
    p_r=-0.51207866752976997,
    q_r=-2.0280518241310429,
)


def test_radial_factors_reference_values():
    rf = radial_factors(2 * math.pi * 0.2)
    for name, ref in RADIAL_AT_02.items():
        assert getattr(rf, name) == pytest.approx(ref, rel=1e-12), name
    assert radial_factors(math.pi).p_i == pytest.approx(RADIAL_AT_PI, rel=1e-12)
    assert RADIAL_AT_PI == pytest.approx(-1 / math.pi**2, rel=1e-15)


def test_radial_factors_small_xi_series():
    # p_i = 2/3 - 2 xi^2/15 + O(xi^4), q_i = -xi^2/15 + O(xi^4)
    rf = radial_factors(1e-3)
    assert abs(rf.p_i - 2 / 3) < 1e-6
    for xi in (1e-3, 3e-3, 1e-2):
        rf = radial_factors(xi)
        assert rf.p_i == pytest.approx(2 / 3 - 2 * xi**2 / 15 + xi**4 / 140, rel=1e-12)
        assert rf.q_i == pytest.approx(-(xi**2) / 15 + xi**4 / 210, rel=1e-9)


def test_radial_factors_continuous_across_series_switch():
    lo, hi = radial_factors(1.0 - 1e-12), radial_factors(1.0 + 1e-12)
    for name in ("p_i", "q_i", "p_r", "q_r"):
        assert getattr(lo, name) == pytest.approx(getattr(hi, name), rel=1e-11), name


@pytest.mark.parametrize("xi", [0.0, -1.0, float("nan"), float("inf")])
def test_radial_factors_reject_bad_xi(xi):
    with pytest.raises(ValueError):
        radial_factors(xi)


def test_config_one_values_at_02():
    c = coupling_coefficients(configuration_preset("I", 0.2))
    assert c.gamma13_c == pytest.approx(0.7098718524388377, rel=1e-12)
    assert c.omega13 == pytest.approx(-0.7681180012946551, rel=1e-12)
    assert c.gamma13_c == c.gamma23_c and c.omega13 == c.omega23
    assert c.gamma_vc == 0.0 and c.omega_vc == 0.0


def test_config_two_values_at_02():
    c = coupling_coefficients(configuration_preset("II", 0.2))
    expected = dict(
        gamma13_c=0.7803041667415667,
        omega13=0.7529208668036276,
        gamma_vc=0.0704323143027289,
        omega_vc=1.5210388680982823,
    )
    for name, ref in expected.items():
        assert getattr(c, name) == pytest.approx(ref, rel=1e-12), name
    # phi = pi/4 puts equal weight on both transitions
    assert c.gamma23_c == pytest.approx(c.gamma13_c, rel=1e-14)


def test_large_separation_coefficients_vanish():
    for which in Configuration:
        c = coupling_coefficients(configuration_preset(which, 1000.0))
        for name, v in c.as_dict().items():
            if name != "gamma":
                assert abs(v) < 1e-3, name


def test_axis_geometry_has_no_cross_coupling():
    for r in (0.01, 0.2, 3.0):
        for phi in (0.0, 0.3, 1.2):
            c = coupling_coefficients(Geometry(r, 0.0, phi))
            assert c.gamma_vc == 0.0 and c.omega_vc == 0.0
            assert c.gamma13_c == c.gamma23_c


def test_gamma_scales_linearly():
    g1 = coupling_coefficients(Geometry(0.3, 1.0, 0.7, gamma=1.0)).as_dict()
    g3 = coupling_coefficients(Geometry(0.3, 1.0, 0.7, gamma=3.0)).as_dict()
    for k in g1:
        assert g3[k] == pytest.approx(3 * g1[k], rel=1e-14)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(r_over_lambda=0.0, theta=0.0, phi=0.0),
        dict(r_over_lambda=1e-5, theta=0.0, phi=0.0),
        dict(r_over_lambda=0.2, theta=-0.1, phi=0.0),
        dict(r_over_lambda=0.2, theta=4.0, phi=0.0),
        dict(r_over_lambda=0.2, theta=1.0, phi=2 * math.pi),
        dict(r_over_lambda=0.2, theta=1.0, phi=0.0, gamma=0.0),
        dict(r_over_lambda=float("nan"), theta=1.0, phi=0.0),
    ],
)
def test_geometry_validation(kwargs):
    with pytest.raises(ValueError):
        Geometry(**kwargs)


def test_presets():
    g1 = configuration_preset("I", 0.2)
    g2 = configuration_preset(Configuration.II, 0.2)
    assert g1.theta == math.pi and g2.theta == math.pi / 2
    assert g1.phi == g2.phi == math.pi / 4
    assert g1.xi == pytest.approx(2 * math.pi * 0.2)
    with pytest.raises(ValueError):
        configuration_preset("III", 0.2)


def test_cp_check_warns_for_unphysical_coefficients():
    bad = CouplingCoefficients(1.0, 1.5, 0.0, 0.0, 0.0, 0.0, 0.0)
    assert not bad.is_completely_positive()
    assert bad.min_dissipation_eigenvalue() == pytest.approx(-0.5)
    assert bad.without_collective().is_completely_positive()


geometries = st.builds(
    Geometry,
    r_over_lambda=st.floats(1e-3, 50.0),
    theta=st.floats(0.0, math.pi),
    phi=st.floats(0.0, 2 * math.pi, exclude_max=True),
)


@settings(max_examples=200, deadline=None)
@given(geometries)
def test_dissipation_matrix_is_psd_and_rates_bounded(g):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        c = coupling_coefficients(g)
    assert c.is_completely_positive()
    for v in (c.gamma13_c, c.gamma23_c, c.gamma_vc):
        assert abs(v) <= c.gamma * (1 + 1e-12)
    m = c.dissipation_matrix()
    np.testing.assert_array_equal(m, m.T)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 20.0), st.floats(0.0, math.pi), st.floats(0.01, math.pi - 0.01))
def test_reflection_of_phi(r, theta, phi):
    # phi -> -phi leaves the diagonal couplings alone and flips the cross couplings
    a = coupling_coefficients(Geometry(r, theta, phi))
    b = coupling_coefficients(Geometry(r, theta, 2 * math.pi - phi))
    for name in ("gamma13_c", "gamma23_c", "omega13", "omega23"):
        assert getattr(b, name) == pytest.approx(getattr(a, name), rel=1e-12, abs=1e-12)
    assert b.gamma_vc == pytest.approx(-a.gamma_vc, rel=1e-12, abs=1e-12)
    assert b.omega_vc == pytest.approx(-a.omega_vc, rel=1e-12, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-2, 20.0))
def test_coefficients_continuous_in_r(r):
    h = 1e-7 * r
    a = coupling_coefficients(configuration_preset("II", r)).as_dict()
    b = coupling_coefficients(configuration_preset("II", r + h)).as_dict()
    for k in a:
        assert a[k] == pytest.approx(b[k], rel=1e-5, abs=1e-6)


def test_normalize_angles():
    assert normalize_angles(3.1416, 0.7854) == (math.pi, 0.7854)
    assert normalize_angles(-1e-4, -math.pi / 2) == (0.0, 1.5 * math.pi)
    assert normalize_angles(1.0, 2 * math.pi) == (1.0, 0.0)
    theta, _ = normalize_angles(3.2, 0.0)
    with pytest.raises(ValueError):
        Geometry(0.2, theta, 0.0)
