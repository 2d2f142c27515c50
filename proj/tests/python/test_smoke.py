import math

import numpy as np
import pytest

import detquas as dq


def test_cd_kernel_is_projection():
    win = dq.GroundWindow("half_line", 0, 7)
    ops = dq.OPSystem(dq.uniform_weight(win), 3)
    K = dq.cd_kernel(ops, 3)
    assert K.projection_defect() < 1e-12
    assert K.trace() == pytest.approx(3.0)
    assert K.entries.shape == (8, 8)


def test_tau_matches_quasifree():
    win = dq.GroundWindow("half_line", 0, 4)
    ops = dq.OPSystem(dq.charlier_weight(win, 1.0), 2)
    spec = dq.EnsembleSpec(ops, 2)
    mu = dq.ensemble_measure(spec)
    K = dq.cd_kernel(ops, 2)
    for X, Y in [([0.0], [3.0]), ([1.0, 4.0], [0.0, 2.0])]:
        assert dq.tau_state(mu, X, Y) == pytest.approx(dq.quasifree_state(K, X, Y), abs=1e-12)


def test_sampler_is_deterministic():
    win = dq.GroundWindow("half_line", 0, 5)
    ops = dq.OPSystem(dq.uniform_weight(win), 2)
    K = dq.cd_kernel(ops, 2)
    a = dq.sample(K, 100, seed=7)
    b = dq.sample(K, 100, seed=7)
    assert np.array_equal(a, b)
    assert (a.sum(axis=1) == 2).all()


def test_kernel_families_and_verdict():
    hermite = dq.discrete_hermite("plus", 0.0)
    assert hermite.entry(3, 3) == pytest.approx(0.5, abs=1e-10)
    assert hermite.entry(0, 2) == 0.0

    j0 = dq.discrete_jacobi_symmetric(0.0, "plus")
    j1 = dq.discrete_jacobi_symmetric(1.0, "plus")
    v = dq.verdict(j0, j1, [128, 256, 512], norm_window=256)
    assert v["verdict"] == "equivalent"
    assert v["index"] == 0

    sine = dq.sine_kernel(math.pi / 2)
    assert sine.entry(0, 1) == pytest.approx(1.0 / math.pi)


def test_reduce_and_correlation():
    win = dq.GroundWindow("half_line", 0, 5)
    ops = dq.OPSystem(dq.uniform_weight(win), 3)
    K = dq.cd_kernel(ops, 3)
    reduced, steps = dq.reduce(K, occupied=[1.0], vacant=[4.0])
    assert len(reduced) == 4
    assert len(steps) == 2
    rho = dq.correlation(reduced, [0.0, 2.0])
    assert 0.0 <= rho <= 1.0


def test_det2_identity():
    rng = np.random.default_rng(0)
    g = rng.normal(size=(5, 5)) * 0.2
    a = 0.5 * (g + g.T)
    lam = np.linalg.eigvalsh(a)
    expected = float(np.prod((1.0 + lam) * np.exp(-lam)))
    assert dq.det2(a) == pytest.approx(expected, rel=1e-10)
