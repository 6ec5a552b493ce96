import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projcauchy import (
    DomainError,
    InvalidArgumentError,
    cauchy_std_pdf,
    hemisphere_to_plane,
    plane_to_hemisphere,
    projection_jacobian,
)

from oracles import fd_area_distortion

coord = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)

SQ2 = np.sqrt(2.0)


@pytest.mark.parametrize(
    "x, expected",
    [
        ((0.0, 0.0), (0.0, 0.0, 1.0)),
        ((1.0, 0.0), (1 / SQ2, 0.0, 1 / SQ2)),
        ((3.0, 4.0), (3 / np.sqrt(26), 4 / np.sqrt(26), 1 / np.sqrt(26))),
    ],
)
def test_plane_to_hemisphere_examples(x, expected):
    np.testing.assert_allclose(plane_to_hemisphere(x), expected, rtol=0, atol=1e-15)


@pytest.mark.parametrize(
    "w, expected",
    [((0.0, 0.0, 1.0), (0.0, 0.0)), ((1 / SQ2, 0.0, 1 / SQ2), (1.0, 0.0))],
)
def test_hemisphere_to_plane_examples(w, expected):
    np.testing.assert_allclose(hemisphere_to_plane(w), expected, atol=1e-15)


@pytest.mark.parametrize("w", [(1.0, 0.0, 0.0), (0.0, 0.0, -1.0), (0.6, 0.0, -0.8)])
def test_hemisphere_to_plane_rejects_lower_hemisphere(w):
    with pytest.raises(DomainError):
        hemisphere_to_plane(w)


def test_hemisphere_to_plane_rejects_non_unit():
    with pytest.raises(InvalidArgumentError):
        hemisphere_to_plane((0.0, 0.0, 1.1))


def test_slightly_off_unit_is_renormalized():
    assert np.allclose(hemisphere_to_plane((0.0, 0.0, 1.0 + 5e-10)), (0.0, 0.0))


@pytest.mark.parametrize("x", [(np.nan, 0.0), (np.inf, 1.0), (1e200, 0.0)])
def test_non_finite_or_huge_points_are_rejected(x):
    with pytest.raises(InvalidArgumentError):
        plane_to_hemisphere(x)
    with pytest.raises(InvalidArgumentError):
        projection_jacobian(x)


def test_round_trip_from_sphere(np_rng):
    v = np_rng.normal(size=(1000, 3))
    v[:, 2] = np.abs(v[:, 2]) + 1e-3
    w = v / np.linalg.norm(v, axis=1, keepdims=True)
    np.testing.assert_allclose(plane_to_hemisphere(hemisphere_to_plane(w)), w, rtol=0, atol=1e-12)


@given(coord, coord)
def test_round_trip_from_plane(x1, x2):
    back = hemisphere_to_plane(plane_to_hemisphere((x1, x2)))
    np.testing.assert_allclose(back, (x1, x2), rtol=1e-12, atol=1e-300)


@given(coord, coord)
def test_unit_norm_and_upper_half(x1, x2):
    w = plane_to_hemisphere((x1, x2))
    assert abs(np.linalg.norm(w) - 1.0) < 1e-12
    assert w[2] > 0


def test_vectorized_shapes():
    x = np.zeros((4, 5, 2))
    assert plane_to_hemisphere(x).shape == (4, 5, 3)
    assert projection_jacobian(x).shape == (4, 5)


def test_jacobian_examples():
    assert projection_jacobian((0.0, 0.0)) == 1.0
    assert projection_jacobian((1.0, 0.0)) == pytest.approx(2**-1.5, rel=1e-15)
    assert projection_jacobian((1.0, 0.0)) == pytest.approx(0.35355339, abs=5e-9)


@given(coord, coord)
def test_jacobian_range(x1, x2):
    j = projection_jacobian((x1, x2))
    assert 0.0 < j <= 1.0


@settings(max_examples=200)
@given(coord, coord)
def test_main_result_identity(x1, x2):
    x = (x1, x2)
    assert 2 * np.pi * cauchy_std_pdf(x) == pytest.approx(projection_jacobian(x), rel=1e-14)


def test_jacobian_matches_finite_differences(np_rng):
    pts = np_rng.uniform(-5, 5, size=(100, 2))
    for x in pts:
        fd = fd_area_distortion(plane_to_hemisphere, x)
        assert fd == pytest.approx(projection_jacobian(x), rel=1e-5)
