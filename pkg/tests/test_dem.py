import math
from collections import defaultdict

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from dfzcodec.dem import DEFAULT_RESOLUTION, Dem, build_dem, reconstruct_cloud
from dfzcodec.errors import EmptyCloud, NonPositiveResolution


def test_two_points_one_cell():
    dem = build_dem(np.array([[0, 0, 1], [0.05, 0.05, 3]]), 0.1)
    assert dem.shape == (1, 1)
    assert dem.plane_z == 2
    np.testing.assert_array_equal(dem.heights, [[0.0]])
    np.testing.assert_array_equal(dem.occupancy, [[True]])


def test_two_points_four_by_three():
    dem = build_dem(np.array([[0, 0, 5], [0.35, 0.25, 5]]), 0.1)
    assert (dem.width, dem.height) == (4, 3)
    assert dem.plane_z == 5
    expected = np.zeros((4, 3), dtype=bool)
    expected[0, 0] = expected[3, 2] = True
    np.testing.assert_array_equal(dem.occupancy, expected)
    np.testing.assert_array_equal(dem.heights, np.zeros((4, 3)))


def test_default_resolution():
    assert DEFAULT_RESOLUTION == 0.1
    assert build_dem(np.array([[0, 0, 0.0]])).resolution == 0.1


def test_cell_mean_and_origin():
    cloud = np.array([[1.0, 2.0, 0.0], [1.05, 2.01, 2.0], [1.25, 2.0, 4.0]])
    dem = build_dem(cloud, 0.1)
    assert (dem.origin_x, dem.origin_y) == (1.0, 2.0)
    assert dem.plane_z == 2.0
    assert dem.heights[0, 0] == pytest.approx(-1.0)  # mean of -2 and 0
    assert dem.heights[2, 0] == pytest.approx(2.0)
    assert not dem.occupancy[1, 0] and dem.heights[1, 0] == 0.0


def test_max_edge_points_clamped_into_last_cell():
    # extent is an exact multiple of the resolution
    dem = build_dem(np.array([[0.0, 0.0, 0.0], [1.0, 0.5, 0.0]]), 0.25)
    assert dem.shape == (4, 2)
    assert dem.occupancy[3, 1]


@pytest.mark.parametrize("res", [0.0, -1.0, float("nan")])
def test_bad_resolution(res):
    with pytest.raises(NonPositiveResolution):
        build_dem(np.zeros((1, 3)), res)


def test_empty_cloud():
    with pytest.raises(EmptyCloud):
        build_dem(np.zeros((0, 3)), 0.1)


def test_reconstruct_single_cell():
    dem = Dem(0.1, 0.0, 0.0, 2.0, np.zeros((1, 1)), np.ones((1, 1), bool))
    np.testing.assert_allclose(reconstruct_cloud(dem), [[0.05, 0.05, 2.0]], rtol=0, atol=1e-15)


def test_reconstruct_all_unoccupied():
    dem = Dem(0.1, 0.0, 0.0, 0.0, np.zeros((3, 2)), np.zeros((3, 2), bool))
    assert reconstruct_cloud(dem).shape == (0, 3)


def test_reconstruct_order_is_j_outer_i_inner():
    occ = np.ones((2, 2), bool)
    heights = np.array([[0.0, 1.0], [2.0, 3.0]])  # heights[i, j]
    cloud = reconstruct_cloud(Dem(1.0, 0.0, 0.0, 0.0, heights, occ))
    np.testing.assert_array_equal(cloud[:, 2], [0.0, 2.0, 1.0, 3.0])
    np.testing.assert_array_equal(cloud[:, :2], [[0.5, 0.5], [1.5, 0.5], [0.5, 1.5], [1.5, 1.5]])


def test_grid_aligned_cloud_round_trip():
    # one point per cell center on a 0.125 m grid, plus two corner anchors that pin
    # the bounding box to the cell edges; anchors share z with their cell's center
    res, nx, ny = 0.125, 7, 5
    rng = np.random.default_rng(3)
    ii, jj = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    z = rng.uniform(-1, 1, size=(nx, ny))
    centers = np.column_stack([(ii.ravel() + 0.5) * res, (jj.ravel() + 0.5) * res, z.ravel()])
    anchors = np.array([[0.0, 0.0, z[0, 0]], [nx * res, ny * res, z[-1, -1]]])
    dem = build_dem(np.vstack([centers, anchors]), res)
    assert dem.shape == (nx, ny) and dem.occupancy.all()

    back = reconstruct_cloud(dem)
    # reconstruct emits j outer, i inner
    expected = centers.reshape(nx, ny, 3).transpose(1, 0, 2).reshape(-1, 3)
    np.testing.assert_allclose(back, expected, rtol=0, atol=1e-12)


def _brute_binning(cloud, res):
    ox, oy = cloud[:, 0].min(), cloud[:, 1].min()
    w = max(1, math.ceil((cloud[:, 0].max() - ox) / res))
    h = max(1, math.ceil((cloud[:, 1].max() - oy) / res))
    plane = sum(cloud[:, 2]) / len(cloud)
    cells = defaultdict(list)
    for x, y, z in cloud:
        i = min(w - 1, int(math.floor((x - ox) / res)))
        j = min(h - 1, int(math.floor((y - oy) / res)))
        cells[i, j].append(z - plane)
    return (w, h), {k: sum(v) / len(v) for k, v in cells.items()}


coords = st.floats(-50, 50, allow_nan=False)
clouds = arrays(np.float64, st.tuples(st.integers(1, 60), st.just(3)), elements=coords)


@given(clouds, st.sampled_from([0.05, 0.1, 0.3, 1.0]))
def test_binning_matches_brute_force(cloud, res):
    dem = build_dem(cloud, res)
    shape, cells = _brute_binning(cloud, res)
    assert dem.shape == shape
    assert set(zip(*np.nonzero(dem.occupancy))) == set(cells)
    for (i, j), mean in cells.items():
        assert dem.heights[i, j] == pytest.approx(mean, abs=1e-9)
    assert (dem.heights[~dem.occupancy] == 0).all()


@given(clouds, st.sampled_from([0.05, 0.1, 0.3, 1.0]))
def test_dem_invariants(cloud, res):
    dem = build_dem(cloud, res)
    for axis, n in ((0, dem.width), (1, dem.height)):
        extent = cloud[:, axis].max() - cloud[:, axis].min()
        assert 1 <= n <= math.ceil(extent / res) + 1
    assert np.isfinite(dem.heights).all()
    scale = max(1.0, float(np.abs(cloud[:, 2]).max()))
    assert abs(float(np.mean(cloud[:, 2] - dem.plane_z))) <= 1e-9 * scale
