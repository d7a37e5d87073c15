import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import within_stderr
from kacrice.landscape import (
    DegeneracyWarning,
    PSpinInstance,
    census_csv,
    empirical_counts,
    enumerate_multistart,
    enumerate_p2,
    euler_characteristic,
    evaluate,
    min_separation,
    points_json,
    projected_residual,
    sample_instance,
)
from kacrice.numerics import RandomStream
from kacrice.sphere import PSpinSpec, b_param, count_stationary_exact


def _points_ok(inst, points):
    N = inst.N
    for p in points:
        assert abs(p.x @ p.x / N - 1) < 1e-10
        pg, g = projected_residual(inst, p.x)
        assert pg < 1e-8 * g + 1e-12
        assert 0 <= p.index <= N - 1


# -- sampling ----------------------------------------------------------------------


def test_entry_variance():
    spec = PSpinSpec(2, 1.0, 0.0, 4)
    n = 10**5
    v = np.array([sample_instance(spec, RandomStream(1, i)).couplings[0, 0] for i in range(n)])
    var = np.mean(v * v)
    se = math.sqrt(np.var(v * v, ddof=1) / n)
    assert abs(var - 0.125) <= 3 * se


def test_field_zero_when_sigma_zero():
    inst = sample_instance(PSpinSpec(3, 1.0, 0.0, 5), RandomStream(2))
    assert not np.any(inst.field)


def test_covariance_of_energy():
    N, n = 4, 20000
    spec = PSpinSpec(3, 1.0, 0.3, N)
    x = np.array([1.0, 1.0, 1.0, 1.0])
    y = np.array([1.0, 1.0, 1.0, -1.0])
    y = y / np.linalg.norm(y) * math.sqrt(N)
    # x.y / N = 0.5
    assert x @ y / N == pytest.approx(0.5)
    prods = []
    for i in range(n):
        inst = sample_instance(spec, RandomStream(3, i))
        prods.append(evaluate(inst, x)[0] * evaluate(inst, y)[0])
    prods = np.array(prods)
    target = N * (0.5**3 / 3 + 0.09 * 0.5)
    assert abs(prods.mean() - target) <= 3 * prods.std(ddof=1) / math.sqrt(n)


def test_size_bounds():
    with pytest.raises(ValueError):
        sample_instance(PSpinSpec(3, 1.0, 0.0, 13), RandomStream(0))
    with pytest.raises(ValueError):
        sample_instance(PSpinSpec(2, 1.0, 0.0, 65), RandomStream(0))
    with pytest.raises(ValueError):
        sample_instance(PSpinSpec(4, 1.0, 0.0, 4), RandomStream(0))


def test_sampling_deterministic():
    a = sample_instance(PSpinSpec(3, 1.0, 0.5, 5), RandomStream(4))
    b = sample_instance(PSpinSpec(3, 1.0, 0.5, 5), RandomStream(4))
    assert np.array_equal(a.couplings, b.couplings) and np.array_equal(a.field, b.field)


# -- evaluation ----------------------------------------------------------------------


def test_eval_p2_naive_loop():
    inst = sample_instance(PSpinSpec(2, 1.0, 0.4, 5), RandomStream(5))
    x = np.random.default_rng(0).standard_normal(5)
    naive = 0.0
    for i in range(5):
        for j in range(5):
            naive -= inst.couplings[i, j] * x[i] * x[j]
    naive -= inst.field @ x
    assert evaluate(inst, x)[0] == pytest.approx(naive, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("p", [2, 3])
def test_gradient_and_hessian_finite_differences(p):
    inst = sample_instance(PSpinSpec(p, 1.0, 0.4, 6), RandomStream(6))
    x = np.random.default_rng(1).standard_normal(6)
    e, g, H = evaluate(inst, x)
    h = 1e-5
    fd_g = np.array([(evaluate(inst, x + h * d)[0] - evaluate(inst, x - h * d)[0]) / (2 * h) for d in np.eye(6)])
    assert np.max(np.abs(fd_g - g)) < 1e-6 * np.max(np.abs(g))
    fd_H = np.array([(evaluate(inst, x + h * d)[1] - evaluate(inst, x - h * d)[1]) / (2 * h) for d in np.eye(6)])
    assert np.max(np.abs(fd_H - H)) < 1e-5 * max(np.max(np.abs(H)), 1e-300)
    assert np.array_equal(H, H.T)


def test_eval_rejects_nonfinite():
    inst = sample_instance(PSpinSpec(2, 1.0, 0.0, 3), RandomStream(7))
    with pytest.raises(ValueError):
        evaluate(inst, np.array([1.0, np.nan, 0.0]))


# -- p = 2 enumeration ---------------------------------------------------------------


def test_p2_zero_field():
    for i in range(10):
        inst = sample_instance(PSpinSpec(2, 1.0, 0.0, 6), RandomStream(8, i))
        c, pts = enumerate_p2(inst)
        assert (c.n_stationary, c.n_minima, c.morse_sum) == (12, 2, 0)
        _points_ok(inst, pts)


def test_p2_strong_field_trivializes():
    n = 200
    ok = 0
    for i in range(n):
        c, _ = enumerate_p2(sample_instance(PSpinSpec(2, 1.0, 100.0, 6), RandomStream(9, i)))
        ok += (c.n_stationary, c.n_minima) == (2, 1)
    # the rate is reported, and at sigma/J = 100 it is essentially 1
    assert ok / n >= 0.99


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.floats(0.01, 5.0), st.integers(0, 10**6))
def test_p2_morse_sum(N, sigma, seed):
    inst = sample_instance(PSpinSpec(2, 1.0, sigma, N), RandomStream(seed))
    c, pts = enumerate_p2(inst)
    assert c.morse_sum == euler_characteristic(N)
    assert c.n_minima >= 1 and c.n_stationary >= 2
    _points_ok(inst, pts)


def test_p2_degenerate_poles_warn():
    N = 4
    spec = PSpinSpec(2, 1.0, 1.0, N)
    inst = PSpinInstance(spec, 0.5 * np.eye(N), np.ones(N))
    with pytest.warns(DegeneracyWarning):
        c, pts = enumerate_p2(inst)
    assert c.n_stationary == 2
    _points_ok(inst, pts)


def test_p2_requires_p2():
    with pytest.raises(ValueError):
        enumerate_p2(sample_instance(PSpinSpec(3, 1.0, 0.0, 4), RandomStream(0)))


# -- multistart ----------------------------------------------------------------------


def test_multistart_matches_p2_census():
    compared = 0
    for i in range(50):
        inst = sample_instance(PSpinSpec(2, 1.0, 0.5, 5), RandomStream(10, i))
        exact, _ = enumerate_p2(inst)
        ms, pts = enumerate_multistart(inst, 2000, stream=RandomStream(11, i))
        _points_ok(inst, pts)
        if ms.saturated:
            compared += 1
            assert (ms.n_stationary, ms.n_minima, ms.morse_sum) == (exact.n_stationary, exact.n_minima, exact.morse_sum)
    assert compared >= 45


def test_multistart_p3_morse():
    saturated = 0
    for i in range(20):
        inst = sample_instance(PSpinSpec(3, 1.0, 0.0, 4), RandomStream(12, i))
        c, pts = enumerate_multistart(inst, 5000, stream=RandomStream(13, i))
        _points_ok(inst, pts)
        if c.saturated:
            saturated += 1
            assert c.morse_sum == 0
    assert saturated >= 18


def test_multistart_rejects_zero_starts():
    inst = sample_instance(PSpinSpec(3, 1.0, 0.0, 4), RandomStream(0))
    with pytest.raises(ValueError):
        enumerate_multistart(inst, 0)


def test_antipodal_symmetry_p3():
    N = 5
    inst = sample_instance(PSpinSpec(3, 1.0, 0.0, N), RandomStream(14))
    c, pts = enumerate_multistart(inst, 3000, stream=RandomStream(15))
    assert c.saturated
    for p in pts:
        partner = [q for q in pts if np.allclose(q.x, -p.x, atol=1e-7)]
        assert len(partner) == 1
        assert partner[0].index == (N - 1) - p.index
        assert partner[0].energy == pytest.approx(-p.energy, abs=1e-10)


def test_antipodal_symmetry_p2():
    inst = sample_instance(PSpinSpec(2, 1.0, 0.0, 6), RandomStream(16))
    _, pts = enumerate_p2(inst)
    for p in pts:
        partner = [q for q in pts if np.allclose(q.x, -p.x, atol=1e-10)]
        assert len(partner) == 1 and partner[0].index == p.index


def test_lowest_energy_point_is_a_minimum():
    for i in range(10):
        inst = sample_instance(PSpinSpec(3, 1.0, 0.3, 5), RandomStream(17, i))
        c, pts = enumerate_multistart(inst, 1000, stream=RandomStream(18, i))
        if c.saturated:
            assert min(pts, key=lambda q: q.energy).index == 0
    for i in range(10):
        _, pts = enumerate_p2(sample_instance(PSpinSpec(2, 1.0, 0.3, 8), RandomStream(19, i)))
        assert min(pts, key=lambda q: q.energy).index == 0


def test_dedup_tolerance_is_far_below_separation():
    inst = sample_instance(PSpinSpec(3, 1.0, 0.0, 6), RandomStream(20))
    _, pts = enumerate_multistart(inst, 2000, stream=RandomStream(21))
    assert min_separation(pts) > 1e-3


# -- ensemble averages ---------------------------------------------------------------


def test_empirical_zero_field_p2():
    r = empirical_counts(PSpinSpec(2, 1.0, 0.0, 7), 30, RandomStream(22))
    assert r.mean_stationary.mean == 14.0 and r.mean_stationary.stderr == 0.0
    assert r.reliable and r.n_accepted == 30


def test_empirical_p2_vs_kac_rice_small():
    spec = PSpinSpec(2, 1.0, math.sqrt(0.5), 6)
    B = b_param(spec)
    assert B == pytest.approx(-0.2)
    r = empirical_counts(spec, 2000, RandomStream(23))
    assert within_stderr(r.mean_stationary, count_stationary_exact(6, B).value)


def test_empirical_threads_invariant():
    spec = PSpinSpec(3, 1.0, 0.0, 4)
    a = empirical_counts(spec, 8, RandomStream(24), n_starts=300, threads=1)
    b = empirical_counts(spec, 8, RandomStream(24), n_starts=300, threads=4)
    assert census_csv(a.census) == census_csv(b.census)


# -- outputs -------------------------------------------------------------------------


def test_census_csv_and_points_json():
    inst = sample_instance(PSpinSpec(2, 1.0, 0.2, 4), RandomStream(25))
    c, pts = enumerate_p2(inst)
    lines = census_csv([c, c]).splitlines()
    assert lines[0] == "instance_id,n_stationary,n_minima,morse_sum,saturated"
    assert lines[1].split(",")[0] == "0" and len(lines) == 3
    data = json.loads(points_json(pts))
    assert len(data) == c.n_stationary
    assert set(data[0]) == {"x", "multiplier", "energy", "index"}
