import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multihomeo.families import (
    character,
    chirp,
    from_spec,
    holder_sine,
    lipschitz_sine,
    make_family,
    random_trig,
    weierstrass,
    weierstrass_constant,
)
from multihomeo.modulus import (
    CModel,
    Modulus,
    UnderestimateWarning,
    estimate_modulus,
    family_modulus,
    largest_feasible,
    select_b,
    select_delta,
)
from oracles import brute_modulus


def test_estimate_matches_brute_force():
    rng = np.random.default_rng(0)
    v = np.cumsum(rng.standard_normal(200))
    for delta in (1, 2.5, 7, 30):
        assert estimate_modulus(v, delta) == pytest.approx(brute_modulus(v, delta), abs=0)


def test_estimate_spacing_and_errors():
    t = np.arange(64) * 0.25
    assert estimate_modulus(t, 1.0, spacing=0.25) == pytest.approx(1.0)
    assert estimate_modulus(t, 0.0, spacing=0.25) == 0.0
    with pytest.raises(ValueError):
        estimate_modulus(np.array([]), 1.0)
    with pytest.raises(ValueError):
        estimate_modulus(t, -1.0)
    with pytest.warns(UnderestimateWarning):
        estimate_modulus(t, 0.1, spacing=0.25)


def test_estimate_2d_uses_euclidean_lags():
    x = np.arange(10.0)
    grid = x[:, None] + x[None, :]
    # distance sqrt(2) reaches the diagonal neighbour, which changes the value by 2
    assert estimate_modulus(grid, 1.0) == 1.0
    assert estimate_modulus(grid, math.sqrt(2)) == 2.0


@pytest.mark.filterwarnings("ignore::multihomeo.modulus.UnderestimateWarning")
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 1000), st.floats(0.5, 10), st.floats(0.5, 10))
def test_estimate_monotone_in_delta(seed, d1, d2):
    v = np.random.default_rng(seed).standard_normal(50)
    lo, hi = sorted((d1, d2))
    assert estimate_modulus(v, lo) <= estimate_modulus(v, hi)


def test_family_modulus_is_pointwise_max():
    rng = np.random.default_rng(1)
    a, b = rng.standard_normal(40), 3 * rng.standard_normal(40)
    assert family_modulus([a, b], 2) == max(estimate_modulus(a, 2), estimate_modulus(b, 2))
    with pytest.raises(ValueError):
        family_modulus([], 1)


def test_modulus_constructors():
    m = Modulus.lipschitz(2.0, cap=1.0)
    assert m(0.25) == 0.5 and m(10) == 1.0 and m(0) == 0 and m(-1) == 0
    h = Modulus.holder(1.0, 0.5)
    assert h(0.25) == 0.5
    assert Modulus.maximum([m, h])(0.01) == pytest.approx(0.1)
    assert m.scaled(2)(0.1) == pytest.approx(0.4)
    with pytest.raises(ValueError):
        Modulus.holder(1.0, 1.5)


def test_cmodel_default():
    c = CModel()
    assert c(2.0, 1) == 16.0
    assert c(4 / 3, 2) == pytest.approx(32.0 ** 2)
    assert CModel(d=2)(2.0, 1) == 256.0


def test_largest_feasible():
    x = largest_feasible(lambda t: t <= 0.3, 1.0)
    assert x <= 0.3 and x > 0.3 * (1 - 2 ** -19)
    assert largest_feasible(lambda t: True, 0.5) == 0.5
    with pytest.raises(ValueError):
        largest_feasible(lambda t: False, 1.0)


def test_select_b_zero_moduli():
    b = select_b([Modulus.zero()] * 6)
    assert b.tolist() == [2.0 ** -(j + 1) for j in range(6)]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.floats(0.1, 50), st.floats(0.2, 1.0)), min_size=2, max_size=8))
def test_select_b_properties(params):
    omegas = [Modulus.holder(C, a) for C, a in params]
    b = select_b(omegas)
    assert np.all((0 < b) & (b < 1))
    assert np.all(np.diff(b) < 0)
    for j, (w, bj) in enumerate(zip(omegas, b)):
        assert w(bj) <= 1 / (j + 1)


def test_select_delta_frozen():
    # omega(delta) = delta, c = 1: the constraint is delta_{nu-1} sqrt(d) <= 2^-nu
    ident = Modulus(lambda d: d)
    one = lambda p, nu: 1.0  # noqa: E731
    assert select_delta(ident, one, d=1, n_ranks=6).tolist() == [2.0 ** -nu for nu in range(2, 8)]
    assert select_delta(ident, one, d=4, n_ranks=6).tolist() == [2.0 ** -(nu + 1) for nu in range(2, 8)]


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.2, 1.0), st.integers(1, 3))
def test_select_delta_inequality(C, alpha, d):
    omega = Modulus.holder(C, alpha)
    cm = CModel(d=d)
    deltas = select_delta(omega, cm, d=d, n_ranks=8)
    assert np.all(np.diff(deltas) < 0)
    for nu in range(2, 10):
        assert cm(1 + 1 / nu, nu) * omega(deltas[nu - 2] * math.sqrt(d)) <= 2.0 ** -nu


def test_select_delta_rejects_non_vanishing_modulus():
    with pytest.raises(ValueError):
        select_delta(Modulus(lambda d: np.ones_like(d)), n_ranks=3)


# families

def test_weierstrass_constant_frozen():
    assert weierstrass_constant(0.5, 4.0) == 6.0
    f = weierstrass()
    assert f.params["alpha"] == pytest.approx(0.5)
    assert f.periodic and f.bound == pytest.approx(2 - 2 ** -11)


@pytest.mark.parametrize("maker", [
    lambda: lipschitz_sine(3.0),
    lambda: holder_sine(0.5),
    lambda: weierstrass(0.5, 4.0),
    lambda: weierstrass(0.6, 3.0),
    lambda: random_trig(4),
    lambda: character(5),
])
def test_analytic_modulus_dominates_grid(maker):
    f = maker()
    h = 2.0 ** -10
    t = np.arange(-2 ** 13, 2 ** 13) * h
    v = f(t)
    assert np.all(np.abs(v) <= f.bound + 1e-12)
    for k in range(1, 9):
        dl = 2.0 ** -k
        assert estimate_modulus(v, dl, spacing=h) <= f.modulus(dl) + 1e-12


def test_chirp_shell_modulus():
    f = chirp()
    assert not f.uniformly_continuous
    for j in range(5):
        h = 2.0 ** -10
        t = j + np.arange(0, 2 ** 10 + 1) * h
        assert estimate_modulus(f(t), 0.01, spacing=h) <= f.modulus_on_shell(j)(0.01) + 1e-12


def test_from_spec_and_family():
    f = from_spec({"kind": "holder", "alpha": 0.25}, d=2)
    assert f.d == 2
    assert f(np.zeros((3, 2))).shape == (3,)
    fam = make_family([lipschitz_sine(1), holder_sine(0.5)])
    assert fam.modulus()(1e-4) == pytest.approx(1e-2)
    with pytest.raises(ValueError):
        from_spec({"kind": "nope"})
    with pytest.raises(ValueError):
        holder_sine(0)
    with pytest.raises(ValueError):
        make_family([])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert from_spec({"kind": "constant", "c": 2.0})(np.arange(3.0)).tolist() == [2.0] * 3
