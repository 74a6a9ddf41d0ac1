import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from multihomeo.families import lipschitz_sine
from multihomeo.homeo import NetHomeomorphism
from multihomeo.modulus import Modulus
from multihomeo.spectral import (
    FrequencyPartition,
    GridSignal,
    ProductSymbol,
    SquareFunction,
    approximant,
    dyadic_partition,
    empirical_lp_constants,
    frequencies,
    full_band,
    oscillation,
    periodize,
    project,
    rank_centers,
    refine_partition_dyadic,
    spectrum,
    square_function,
    symbol_axis,
)
from oracles import floor_refinement


def _rand(N, seed=0, d=1):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((N,) * d) + 1j * rng.standard_normal((N,) * d)


def test_grid_signal_validation():
    assert GridSignal(np.zeros(8)).N == 8
    with pytest.raises(ValueError):
        GridSignal(np.zeros(6))
    with pytest.raises(ValueError):
        GridSignal(np.zeros((4, 8)))
    with pytest.raises(ValueError):
        GridSignal(np.array([np.nan, 0.0]))


def test_spectrum_round_trip():
    f = _rand(16)
    s = spectrum(f)
    assert np.allclose(s.inverse(), f)
    assert s.at(-1) == pytest.approx(np.fft.fft(f)[15])
    assert frequencies(8).tolist() == [0, 1, 2, 3, -4, -3, -2, -1]
    assert symbol_axis(8, 4.0).tolist() == [0, 1, 2, 3, -4, -3, -2, -1]


def test_project_examples():
    N = 32
    f = _rand(N)
    assert np.allclose(project(f, (-N // 2, N // 2)), f)
    tone = np.exp(2j * np.pi * 5 * np.arange(N) / N)
    assert np.allclose(project(tone, (-3, 3)), 0)
    assert np.allclose(project(tone, (5, 6)), tone)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-16, 15), st.integers(1, 16))
def test_project_idempotent_linear_orthogonal(seed, lo, width):
    N = 32
    hi = min(lo + width, 16)
    f, g = _rand(N, seed), _rand(N, seed + 1)
    P = project(f, (lo, hi))
    assert np.allclose(project(P, (lo, hi)), P, atol=1e-10)
    assert np.allclose(project(2 * f - g, (lo, hi)), 2 * P - project(g, (lo, hi)), atol=1e-10)
    if hi < 16:
        assert np.allclose(project(P, (hi, 16)), 0, atol=1e-10)


def test_partition_validation():
    with pytest.raises(ValueError):
        FrequencyPartition(8, [((-4, 0),)])  # does not cover
    with pytest.raises(ValueError):
        FrequencyPartition(8, [((-4, 1),), ((0, 4),)])  # overlaps
    with pytest.raises(ValueError):
        FrequencyPartition(8, [((-5, 4),)])  # leaves the band


def test_dyadic_partition_frozen():
    assert dyadic_partition(16).rectangles == [
        ((-8, -4),), ((-4, -2),), ((-2, -1),), ((-1, 1),), ((1, 2),), ((2, 4),), ((4, 8),)
    ]
    assert len(dyadic_partition(8, d=2)) == 25


def test_refinement_frozen_and_oracle():
    part = FrequencyPartition(16, [((-8, 0),), ((0, 8),)])
    ref = refine_partition_dyadic(part)
    assert [r[0] for r in ref.rectangles if r[0][0] >= 0] == [(0, 1), (1, 2), (2, 6), (6, 7), (7, 8)]
    base = dyadic_partition(1024)
    got = [r[0] for r in refine_partition_dyadic(base).rectangles]
    want = []
    for ((a, b),) in base.rectangles:
        want += floor_refinement(a, b) if b - a >= 2 else [(a, b)]
    assert got == want


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-127, 127), max_size=12, unique=True))
def test_refinement_is_partition(cuts):
    pts = sorted(set(cuts) | {-128, 128})
    part = FrequencyPartition(256, [((a, b),) for a, b in zip(pts, pts[1:])])
    twice = refine_partition_dyadic(refine_partition_dyadic(part))
    sizes = sum(b - a for ((a, b),) in twice.rectangles)
    assert sizes == 256  # coverage + disjointness are checked on construction
    assert np.all(twice.labels >= 0)


def test_square_function_examples():
    N = 64
    f = _rand(N, 3)
    assert np.allclose(square_function(f, full_band(N)), np.abs(f))
    g = project(f, (4, 8))
    assert np.allclose(square_function(g, dyadic_partition(N)), np.abs(g))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2]))
def test_parseval(seed, d):
    N = 32 if d == 1 else 16
    f = _rand(N, seed, d)
    S = square_function(f, dyadic_partition(N, d))
    assert np.all(S >= 0)
    assert np.linalg.norm(S) == pytest.approx(np.linalg.norm(f), rel=1e-10)


def test_empirical_constants():
    part = dyadic_partition(256)
    a, b = empirical_lp_constants(part, 2.0, trials=10)
    assert abs(a - 1) < 1e-8 and abs(b - 1) < 1e-8
    a, b = empirical_lp_constants(full_band(256), 4.0, trials=5)
    assert a == pytest.approx(1) and b == pytest.approx(1)
    a, b = empirical_lp_constants(part, 4.0, trials=10, seed=1)
    assert 0 < a <= b < 10
    with pytest.raises(ValueError):
        empirical_lp_constants(part, 1.0)


def test_square_function_transformer():
    X = np.real(_rand(64, 5)).reshape(2, 32)
    sq = SquareFunction(partition="dyadic", refinements=1).fit(X)
    out = sq.transform(X)
    assert out.shape == X.shape
    assert np.allclose(np.linalg.norm(out, axis=1), np.linalg.norm(X, axis=1))
    assert clone(sq).get_params()["refinements"] == 1
    with pytest.raises(ValueError):
        sq.transform(np.zeros((1, 16)))


def test_oscillation_examples():
    h = 1 / 64
    t = np.arange(-64, 128) * h
    assert oscillation(t, [t], ((0, 1),)) == pytest.approx(1 - h)
    assert oscillation(np.ones_like(t), [t], ((0, 1),)) == 0
    assert oscillation(np.exp(1j * t), [t], ((0, 1),)) == pytest.approx(abs(np.exp(1j * (1 - h)) - 1))
    with pytest.raises(ValueError):
        oscillation(t, [t], ((5, 6),))


def test_oscillation_bounded_by_modulus():
    f = lipschitz_sine(3.0)
    h = 1 / 128
    t = np.arange(0, 512) * h
    v = f(t)
    for lo, hi in [(0, 0.5), (1, 1.25), (0.3, 2.0)]:
        assert oscillation(v, [t], ((lo, hi),)) <= f.modulus(hi - lo)


def test_periodize_examples():
    assert np.array_equal(periodize(np.ones(8), 8), np.ones(8))
    half = np.r_[np.ones(4), np.zeros(4)]
    assert periodize(half, 8, offset=2).tolist() == [0, 0, 1, 1, 1, 1, 0, 0]
    assert np.abs(periodize(3 * half, 8)).max() == 3
    assert periodize(np.r_[half, np.zeros(8)], 8).tolist() == half.tolist()
    with pytest.raises(ValueError):
        periodize(np.ones(16), 8)


def test_rank_centers():
    c = rank_centers(np.array([1.5, 1.3, 1.0, -0.5]), 1)
    assert c.tolist() == [1.5, 1.5, 1.0, 0.0]


def test_approximant_constant_and_bounds():
    N, B = 256, 16.0
    axes = [symbol_axis(N, B)]
    const = ProductSymbol(lambda t: np.full(np.shape(t), 2.0), lambda x: x)
    assert np.all(approximant(const, axes, 3) == 2.0)
    f = lipschitz_sine(1.0)
    phi = NetHomeomorphism(modulus=f.modulus, min_rank=4).fit()
    g = ProductSymbol(f, phi.phi)
    gv = g.on_axes(axes)
    eps = 8 * np.finfo(float).eps
    prev = None
    for nu in range(1, 5):
        gn = approximant(g, axes, nu)
        assert np.abs(gv - gn).max() <= f.modulus(phi.deltas_[nu - 1]) + eps
        if prev is not None:
            assert np.abs(gn - prev).max() <= 2 * f.modulus(phi.deltas_[nu - 2]) + 2 * eps
        prev = gn


def test_product_symbol_2d():
    g = ProductSymbol(lambda pts: pts[..., 0] - pts[..., 1], lambda x: 2 * x, d=2)
    out = g.on_axes([np.array([0.0, 1.0]), np.array([0.0, 3.0])])
    assert out.tolist() == [[0.0, -6.0], [2.0, -4.0]]


def test_modulus_on_product_symbol_constant():
    assert Modulus.zero()(1.0) == 0.0
