"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines interleaved
with pytest's own output (they are printed either way).
"""

import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from multihomeo.cli import main
from multihomeo.experiments import ExperimentConfig, run
from multihomeo.families import make_family, weierstrass
from multihomeo.homeo import NetHomeomorphism, RadialHomeomorphism, radial_lipschitz_check
from multihomeo.mnorm import (
    MultiplierSymbol,
    affine_invariance_check,
    lower_bound,
    norm_m2,
    upper_bound,
)
from multihomeo.modulus import Modulus, estimate_modulus
from multihomeo.nets import AlphaNet, NetAddress, dyadic_interval, dyadic_line
from oracles import nested

pytestmark = pytest.mark.slow


def _emit(capsys, n, ok, elapsed, budget, detail):
    ok = bool(ok) and elapsed <= budget
    with capsys.disabled():
        print(f"\nAC{n} {'PASS' if ok else 'FAIL'} {detail} ({elapsed:.2f}s / {budget:.0f}s)")
    return ok


# 1. dyadic formulas


def test_ac1_dyadic_exact(capsys):
    ks = range(-20, 21)
    start = time.perf_counter()
    got = {}
    for k0 in ks:
        I0 = dyadic_line(k0)
        for k1 in ks:
            I1 = dyadic_interval(I0, k1)
            for k2 in ks:
                got[(k0, k1, k2)] = dyadic_interval(I1, k2)
    elapsed = time.perf_counter() - start
    bad = sum(tuple(iv) != nested(path) for path, iv in got.items())
    net = AlphaNet()
    bad += sum(tuple(net.interval(NetAddress(p))) != nested(p)
               for p in itertools.islice(got, 0, None, 97))
    assert _emit(capsys, 1, bad == 0, elapsed, 1.0, f"{len(got)} rank-3 intervals, {bad} mismatches")


# 2. radial map


def test_ac2_radial_map(capsys):
    start = time.perf_counter()
    members = [weierstrass(0.5, 4.0), weierstrass(0.6, 3.0), weierstrass(0.7, 2.0)]
    family = make_family(members)

    def shell(j):
        return Modulus.maximum([f.modulus_on_shell(j) for f in members])

    psi = RadialHomeomorphism(shell, n_shells=12).fit()
    b = psi.b_
    violations = 0
    for j in range(11):
        lip = radial_lipschitz_check(psi, j, samples=10_000, seed=0)
        violations += lip > b[j] * (1 + 1e-12)

    h = 2.0 ** -8
    t = np.arange(-2 ** 13, 2 ** 13) * h
    mapped = psi.transform(t.reshape(-1, 1)).ravel()
    omegas = [shell(j) for j in range(len(b))]
    worst = 0.0
    for f in family.members:
        v = f(mapped)
        for k in range(1, 9):
            dl = 2.0 ** -k
            bound = 2 * max(float(w(bj * dl)) for w, bj in zip(omegas, b))
            ratio = estimate_modulus(v, dl, spacing=h) / bound
            worst = max(worst, ratio)
            violations += ratio > 1
    elapsed = time.perf_counter() - start
    assert _emit(capsys, 2, violations == 0, elapsed, 30.0,
                 f"{violations} violations, worst composed/bound {worst:.3f}")


# 3. net homeomorphism


def _addresses(rank, window, sample, rng):
    ks = range(-window, window + 1)
    if rank <= 3:
        return [NetAddress(p) for p in itertools.product(ks, repeat=rank)]
    return [NetAddress(tuple(int(k) for k in rng.integers(-window, window + 1, rank)))
            for _ in range(sample)]


@pytest.mark.parametrize("jitter", [False, True])
def test_ac3_phi_endpoints_monotone_round_trip(capsys, jitter):
    start = time.perf_counter()
    phi = NetHomeomorphism(modulus=Modulus.lipschitz(1.0), min_rank=6, max_rank=12,
                           jitter=jitter, seed=11).fit()
    src, tgt = phi.source_, phi.target_
    rng = np.random.default_rng(0)
    bad, count = 0, 0
    for rank in range(1, 7):
        for a in _addresses(rank, 8, 150, rng):
            I, J = src.interval(a), tgt.interval(a)
            bad += phi.phi_exact(I.lo).value != J.lo
            bad += phi.phi_exact(I.hi).value != J.hi
            count += 2
    xs = np.sort(rng.uniform(-8, 8, 1000))
    ys = [phi.phi_exact(x).value for x in xs]
    monotone = all(a < b for a, b in zip(ys, ys[1:]))
    worst = 0.0
    for x, y in zip(xs, ys):
        err = abs(phi.phi_inverse_exact(y) - Fraction(x))
        worst = max(worst, float(err / phi.source_interval_length(x, 6)))
    elapsed = time.perf_counter() - start
    ok = bad == 0 and monotone and worst <= 1
    assert _emit(capsys, 3, ok, elapsed, 10.0,
                 f"jitter={jitter}: {bad}/{count} endpoint mismatches, monotone={monotone}, "
                 f"round trip/len {worst:.3g}")


# 4. approximants and telescoping


@pytest.mark.parametrize("member", [{"kind": "lipschitz", "L": 1.0}, {"kind": "holder", "alpha": 0.5}])
def test_ac4_approximants(capsys, member):
    start = time.perf_counter()
    report = run(ExperimentConfig(scenario="thm1", family=[member], nu_max=6))
    elapsed = time.perf_counter() - start
    approx = [c for c in report.checks if c.name.startswith("approx-")]
    tele = report.data["telescope"]
    geometric = all(tb["geometric"] for tb in tele.values())
    violations = sum(not c.passed for c in approx)
    ok = violations == 0 and len(approx) == 11 and geometric and report.passed
    assert _emit(capsys, 4, ok, elapsed, 30.0,
                 f"{member['kind']}: {violations}/{len(approx)} approximant violations, "
                 f"geometric tails={geometric}, all checks={report.passed}")


# 5. multiplier norms


def _random_symbols(N, count, seed):
    """Piecewise-constant, smooth and white-noise symbols in rotation."""
    rng = np.random.default_rng(seed)
    k = np.fft.fftfreq(N, 1.0 / N)
    out = []
    for i in range(count):
        kind = i % 3
        if kind == 0:
            cuts = np.sort(rng.integers(-N // 2, N // 2, 6))
            v = rng.uniform(-1, 1, 7)[np.searchsorted(cuts, k)]
        elif kind == 1:
            modes = rng.standard_normal(5) + 1j * rng.standard_normal(5)
            v = sum(c * np.exp(2j * np.pi * (j + 1) * k / N) for j, c in enumerate(modes))
        else:
            v = rng.uniform(-1, 1, N) + 1j * rng.uniform(-1, 1, N)
        out.append(v)
    return out


def _tone_norm_2(m):
    """max_k |T e_k| / |e_k| over every pure tone: the l^2 norm of a multiplier."""
    N = len(m)
    tones = np.exp(2j * np.pi * np.outer(np.arange(N), np.arange(N)) / N)
    out = np.fft.ifft(m[:, None] * np.fft.fft(tones, axis=0), axis=0)
    return float(np.max(np.linalg.norm(out, axis=0) / np.linalg.norm(tones, axis=0)))


def test_ac5_multiplier_norms(capsys):
    N = 1024
    start = time.perf_counter()
    syms = _random_symbols(N, 100, seed=5)
    l2_err = max(abs(norm_m2(m) - _tone_norm_2(m)) for m in syms)
    l2_err = max(l2_err, max(abs(lower_bound(m, 2.0, restarts=1) - np.abs(m).max()) for m in syms[:20]))

    order_bad, duality = 0, 0.0
    for m in syms[:20]:
        lows = {}
        for p in (4 / 3, 3 / 2, 2.0, 3.0, 4.0):
            lows[p] = lower_bound(m, p, restarts=2)
            order_bad += lows[p] > upper_bound(m, p) * (1 + 1e-12)
        duality = max(duality, abs(lows[4 / 3] - lows[4.0]) / min(lows[4 / 3], lows[4.0]))

    gap = 0.0
    for m in syms[:3]:
        res = affine_invariance_check(m, 4.0, maps=(("shift", 3), ("reflection", None)), restarts=2)
        gap = max(gap, max(max(r["lower_gap"], r["upper_gap"]) for r in res.values()))

    unit = [MultiplierSymbol.constant(1.0, N)] + [MultiplierSymbol.indicator([n], N) for n in (0, 7, -300)]
    unit_err = max(max(abs(lower_bound(u, p) - 1), abs(upper_bound(u, p) - 1))
                   for u in unit for p in (4 / 3, 4.0))
    elapsed = time.perf_counter() - start
    ok = l2_err <= 1e-10 and order_bad == 0 and duality <= 0.10 and gap <= 1e-6 and unit_err <= 1e-10
    assert _emit(capsys, 5, ok, elapsed, 60.0,
                 f"l2 err {l2_err:.1e}, lower>upper {order_bad}, duality {duality:.2e}, "
                 f"affine gap {gap:.1e}, unit err {unit_err:.1e}")


# 6. square-function audit


def test_ac6_lp_audit(capsys):
    start = time.perf_counter()
    report = run(ExperimentConfig(scenario="lp-audit", N=1024, trials=100, p=[2.0, 4.0]))
    elapsed = time.perf_counter() - start
    consts = report.data["constants"]
    unit = max(abs(consts[name][repr(2.0)][key] - 1)
               for name in ("full", "dyadic", "refined", "refined2") for key in ("a", "b"))
    drift = consts["refined"][repr(4.0)]["drift"]
    ok = unit <= 1e-8 and drift < 10 and report.passed
    assert _emit(capsys, 6, ok, elapsed, 60.0, f"p=2 constant error {unit:.1e}, p=4 refined/base {drift:.3f}")


# 7. torus, Weierstrass


def test_ac7_weierstrass_torus(capsys):
    start = time.perf_counter()
    report = run(ExperimentConfig(scenario="thm2", grids=[512, 1024, 2048], p=[4.0]))
    elapsed = time.perf_counter() - start
    lows = [e["lower"] for e in report.estimates if e.get("composed")]
    factors = [max(a, b) / min(a, b) for a, b in zip(lows, lows[1:])]
    ends = {c.name: c.passed for c in report.checks if c.name.startswith("phi1(")}
    ok = len(lows) == 3 and max(factors) < 2 and all(ends.values()) and len(ends) == 2 and report.passed
    assert _emit(capsys, 7, ok, elapsed, 180.0,
                 f"lower at p=4 {[round(x, 4) for x in lows]}, max factor {max(factors):.3f}, "
                 f"endpoints exact={all(ends.values())}")


# 8. growth of characters


def test_ac8_characters(capsys):
    start = time.perf_counter()
    report = run(ExperimentConfig(scenario="remark5", N=2048, n_max=64, gamma="log", p=[4 / 3, 4.0]))
    elapsed = time.perf_counter() - start
    summary = report.data["summary"]
    slope = max(s["slope"] for s in summary.values())
    spread = max(s["spread"] for s in summary.values())
    ok = slope <= 0.05 and spread < 20 and report.passed
    assert _emit(capsys, 8, ok, elapsed, 180.0, f"max slope {slope:.2e}, max spread {spread:.2f}")


# 9. reproducibility


def test_ac9_bit_identical(capsys, tmp_path):
    start = time.perf_counter()
    cfg = dict(scenario="thm2", N=256, grids=[256, 512], p=[4 / 3, 4.0], seed=42)
    same = run(ExperimentConfig(**cfg)).to_json() == run(ExperimentConfig(**cfg)).to_json()
    conf = tmp_path / "small.json"
    conf.write_text('{"n_max": 8}')
    files = []
    for sub in ("a", "b"):
        assert main(["remark5", "--config", str(conf), "--grid", "256", "--p", "4/3,4", "--seed", "7",
                     "--out", str(tmp_path / sub)]) == 0
        files.append(((tmp_path / sub / "remark5.json").read_bytes(),
                      (tmp_path / sub / "remark5.csv").read_bytes()))
    same_files = files[0] == files[1]
    elapsed = time.perf_counter() - start
    assert _emit(capsys, 9, same and same_files, elapsed, 60.0,
                 f"report identical={same}, CLI files identical={same_files}")
