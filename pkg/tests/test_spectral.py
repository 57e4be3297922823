import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from dfzcodec.errors import EmptyGrid, InvalidCutoff
from dfzcodec.spectral import (
    CutoffSpec,
    Spectrum,
    apply_lpf,
    count_kept,
    dft2,
    idft2,
    kept_indices,
    kept_indices_for_radius,
    wrapped_distance,
)
from oracles import brute_in_circle, brute_radius, naive_dft2, naive_idft2, rel_err

grids = st.tuples(st.integers(1, 9), st.integers(1, 9)).flatmap(
    lambda s: arrays(np.float64, s, elements=st.floats(-1e3, 1e3, allow_nan=False))
)


def test_constant_grid_is_dc_only():
    F = dft2(np.full((6, 5), 2.5)).coeffs
    assert F[0, 0] == pytest.approx(2.5 * 30)
    rest = np.abs(F).ravel()[1:]
    assert rest.max() < 1e-9 * abs(F[0, 0])


def test_one_by_one_is_identity():
    assert dft2([[3.25]]).coeffs[0, 0] == 3.25


def test_random_5x7_matches_naive_sum():
    g = np.random.default_rng(0).normal(size=(5, 7))
    assert rel_err(dft2(g).coeffs, naive_dft2(g)) < 1e-9


@pytest.mark.parametrize("shape", [(8, 8), (5, 7), (1, 6), (9, 2)])
def test_round_trip(shape):
    g = np.random.default_rng(1).normal(size=shape)
    assert rel_err(idft2(dft2(g)), g) < 1e-9


def test_idft_matches_naive_sum():
    rng = np.random.default_rng(2)
    F = rng.normal(size=(4, 6)) + 1j * rng.normal(size=(4, 6))
    back = np.fft.ifft2(F)  # complex reference for the non-Hermitian case
    assert rel_err(back, naive_idft2(F)) < 1e-9
    assert rel_err(idft2(Spectrum(F)), naive_idft2(F).real) < 1e-9


def test_dc_spectrum_inverts_to_ones():
    F = np.zeros((4, 3), complex)
    F[0, 0] = 12
    np.testing.assert_allclose(idft2(Spectrum(F)), np.ones((4, 3)), atol=1e-15)


def test_empty_grid():
    with pytest.raises(EmptyGrid):
        dft2(np.zeros((0, 3)))
    with pytest.raises(EmptyGrid):
        idft2(Spectrum(np.zeros((2, 0), complex)))


@pytest.mark.parametrize(
    "u, v, expected", [(0, 0, 0.0), (4, 4, math.sqrt(32)), (7, 1, math.sqrt(2))]
)
def test_wrapped_distance(u, v, expected):
    assert wrapped_distance(u, v, 8, 8) == pytest.approx(expected, abs=1e-12)


def test_cutoff_radius():
    spec = CutoffSpec(0.25, 10, 7)
    assert spec.r_max == math.sqrt(25 + 9)
    assert spec.radius == 0.75 * spec.r_max
    with pytest.raises(InvalidCutoff):
        CutoffSpec(1.5, 4, 4)
    with pytest.raises(InvalidCutoff):
        CutoffSpec(-0.1, 4, 4)


def test_lpf_zero_cutoff_keeps_everything():
    F = dft2(np.random.default_rng(3).normal(size=(6, 9)))
    out = apply_lpf(F, CutoffSpec(0.0, 6, 9))
    np.testing.assert_array_equal(out.coeffs, F.coeffs)


def test_lpf_full_cutoff_keeps_dc():
    F = dft2(np.random.default_rng(4).normal(size=(6, 9)))
    out = apply_lpf(F, CutoffSpec(1.0, 6, 9)).coeffs
    assert out[0, 0] == F.coeffs[0, 0]
    assert np.count_nonzero(out) == 1


def test_lpf_8x8_half_cutoff_count():
    # brute-force lattice enumeration gives 25 indices, including the
    # boundary points (2, 2), (2, 6), (6, 2), (6, 6) at distance exactly sqrt(8)
    spec = CutoffSpec(0.5, 8, 8)
    expected = brute_in_circle(8, 8, brute_radius(0.5, 8, 8))
    assert len(expected) == 25
    F = dft2(np.random.default_rng(5).normal(size=(8, 8)) + 3)
    out = apply_lpf(F, spec).coeffs
    assert set(zip(*np.nonzero(out))) == set(expected)


def test_kept_indices_examples():
    assert kept_indices(8, 8, CutoffSpec(1.0, 8, 8)).tolist() == [[0, 0]]
    assert len(kept_indices(4, 4, CutoffSpec(0.0, 4, 4))) == 16
    expected = brute_in_circle(8, 8, brute_radius(0.5, 8, 8))
    assert [tuple(p) for p in kept_indices(8, 8, CutoffSpec(0.5, 8, 8))] == expected


@settings(max_examples=200)
@given(st.integers(1, 20), st.integers(1, 20), st.floats(0, 1))
def test_kept_indices_match_enumeration(n, m, fc):
    spec = CutoffSpec(fc, n, m)
    got = [tuple(p) for p in kept_indices(n, m, spec)]
    assert got == brute_in_circle(n, m, spec.radius)
    assert count_kept(n, m, spec.radius) == len(got)


@given(st.integers(1, 400), st.integers(1, 400), st.floats(0, 300))
def test_count_kept_matches_materialised(n, m, r):
    assert count_kept(n, m, r) == len(kept_indices_for_radius(n, m, r))


@given(st.integers(1, 16), st.integers(1, 16), st.floats(0, 1), st.floats(0, 1))
def test_kept_sets_nest(n, m, a, b):
    lo, hi = sorted((a, b))
    loose = {tuple(p) for p in kept_indices(n, m, CutoffSpec(lo, n, m))}
    tight = {tuple(p) for p in kept_indices(n, m, CutoffSpec(hi, n, m))}
    assert tight <= loose


@given(grids)
def test_round_trip_property(g):
    assert np.abs(idft2(dft2(g)) - g).max() <= 1e-9 * max(1.0, float(np.abs(g).max()))


@given(grids)
def test_hermitian_symmetry(g):
    F = dft2(g).coeffs
    n, m = F.shape
    mirrored = np.conj(F[(-np.arange(n)) % n][:, (-np.arange(m)) % m])
    scale = max(float(np.abs(F).max()), 1e-300)
    assert np.abs(F - mirrored).max() <= 1e-9 * scale


@given(grids)
def test_parseval(g):
    F = dft2(g).coeffs
    lhs = float(np.sum(g * g))
    rhs = float(np.sum(np.abs(F) ** 2)) / g.size
    assert rhs == pytest.approx(lhs, rel=1e-9, abs=1e-300)


@given(grids, grids, st.floats(-10, 10))
def test_linearity(g, h, a):
    if g.shape != h.shape:
        h = np.resize(h, g.shape)
    lhs = dft2(a * g + h).coeffs
    rhs = a * dft2(g).coeffs + dft2(h).coeffs
    scale = max(float(np.abs(a) * np.abs(g).sum() + np.abs(h).sum()), 1e-300)
    assert np.abs(lhs - rhs).max() <= 1e-9 * scale


@given(grids, st.floats(0, 1))
def test_lpf_energy_accounting(g, fc):
    n, m = g.shape
    spec = CutoffSpec(fc, n, m)
    F = dft2(g)
    kept = apply_lpf(F, spec)
    err = float(np.sum((g - idft2(kept)) ** 2))
    removed = float(np.sum(np.abs(F.coeffs - kept.coeffs) ** 2)) / (n * m)
    total = float(np.sum(g * g))
    assert err == pytest.approx(removed, rel=1e-9, abs=1e-12 * max(total, 1e-300))


@given(grids, st.floats(0, 1))
def test_lpf_idempotent(g, fc):
    spec = CutoffSpec(fc, *g.shape)
    once = apply_lpf(dft2(g), spec)
    np.testing.assert_array_equal(apply_lpf(once, spec).coeffs, once.coeffs)
