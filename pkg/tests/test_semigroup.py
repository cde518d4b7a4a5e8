import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from cattaneo import semigroup
from cattaneo.atlas import ParameterPoint, RegionLabel, representative
from cattaneo.catalog import mu_sequence, preset
from cattaneo.semigroup import (ModalState, NormSample, SingularBlock, WindowTooNarrow, argmax_window, decay_fit,
                                dissipation_residual, energy, energy_trace, evolve_mode, norm_series,
                                semigroup_norm)
from cattaneo.spectrum import modal_block, modal_eigenvalues


def rk4(a, x, t, h):
    n = int(round(t / h))
    for _ in range(n):
        k1 = a @ x
        k2 = a @ (x + 0.5 * h * k1)
        k3 = a @ (x + 0.5 * h * k2)
        k4 = a @ (x + h * k3)
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def random_state(rng):
    return ModalState.from_array(rng.normal(size=4) + 1j * rng.normal(size=4))


def test_zero_time_is_identity():
    s = ModalState(1, 2j, -3, 0.5)
    out = evolve_mode(preset("example2").point, 16.0, s, 0.0)
    np.testing.assert_allclose(out.array(), s.array(), rtol=1e-14, atol=1e-14)


@pytest.mark.parametrize("name,mu", [("example1", 3.0), ("example2-m0", 10.0), ("example3", 1.5)])
def test_matches_rk4_oracle(name, mu):
    rng = np.random.default_rng(1)
    p = preset(name).point
    s = random_state(rng)
    ref = rk4(modal_block(p, mu).matrix, s.array(), 1.0, 1e-4)
    out = evolve_mode(p, mu, s, 1.0).array()
    assert np.max(np.abs(out - ref)) <= 1e-8 * np.max(np.abs(ref))


def test_expm_fallback_agrees(monkeypatch):
    rng = np.random.default_rng(2)
    p = preset("example2").point
    s = random_state(rng)
    direct = evolve_mode(p, 81.0, s, 2.5).array()
    monkeypatch.setattr(semigroup, "EIGVEC_COND_LIMIT", 0.0)
    fallback = evolve_mode(p, 81.0, s, 2.5).array()
    np.testing.assert_allclose(fallback, direct, rtol=1e-10, atol=1e-12)


def test_state_decays_for_large_time():
    p = preset("example3-m0").point
    s = ModalState(1, 1, 1, 1)
    e0 = energy(p, [(16.0, s)])
    slowest = max(z.real for z in modal_eigenvalues(p, 16.0).roots)
    e1 = energy(p, [(16.0, evolve_mode(p, 16.0, s, 20 / abs(slowest)))])
    assert e1 < 1e-12 * e0


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 5), st.floats(0, 5), st.floats(0, 6), st.integers(0, 2**31))
def test_semigroup_property(s, t, logmu, seed):
    p = preset("example2").point
    mu = 10.0 ** logmu
    x = random_state(np.random.default_rng(seed))
    once = evolve_mode(p, mu, x, s + t).array()
    twice = evolve_mode(p, mu, evolve_mode(p, mu, x, s), t).array()
    blk = modal_block(p, mu)
    scale = blk.energy_norm(x.array())
    assert blk.energy_norm(once - twice) <= 1e-9 * scale


def test_energy_examples():
    p = ParameterPoint.make(0, 0, "1/2", m=1)
    assert energy(p, [(1.0, ModalState(0, 0, 0, 0))]) == 0.0
    assert energy(p, [(1.0, ModalState(0, 0, 0, 1))]) == 0.5
    assert energy(p, [(4.0, ModalState(0, 1, 0, 0))]) == pytest.approx(1.5, rel=1e-15)


def test_dissipation_vanishes_without_flux():
    p = preset("example2").point
    r = dissipation_residual(p, [(4.0, ModalState(1, 0, 0, 0))], 0.0, 1e-4)
    assert r < 1e-8


def test_dissipation_residual_second_order():
    rng = np.random.default_rng(4)
    p = preset("example2").point
    modes = [(16.0, random_state(rng))]
    r4 = dissipation_residual(p, modes, 0.5, 1e-4)
    r5 = dissipation_residual(p, modes, 0.5, 1e-5)
    assert 80 <= r4 / r5 <= 120


def test_dissipation_step_warning():
    p = preset("example2").point
    with pytest.warns(RuntimeWarning):
        dissipation_residual(p, [(1e4, ModalState(1, 0, 0, 0))], 0.0, 1.0)


def test_energy_non_increasing():
    rng = np.random.default_rng(6)
    for name in ("example1", "example2", "example3-m0"):
        p = preset(name).point
        modes = [(float(n) ** 4, random_state(rng)) for n in range(1, 21)]
        tr = energy_trace(p, modes, np.geomspace(1e-3, 1e3, 40))
        assert tr.monotone_violation() <= 1e-12 * tr.energies[0]


def test_norm_at_zero_is_inverse_norm():
    p = preset("example2").point
    mus = [1.0, 16.0, 81.0]
    ref = 0.0
    for mu in mus:
        blk = modal_block(p, mu)
        w = np.sqrt(blk.weights)
        ainv = np.linalg.inv(blk.matrix)
        ref = max(ref, np.linalg.norm(w[:, None] * ainv / w[None, :], 2))
    assert semigroup_norm(p, 0.0, mus).norm == pytest.approx(ref, rel=1e-10)
    assert semigroup_norm(p, 1e-9, mus).norm == pytest.approx(ref, rel=1e-6)


def test_one_mode_norm_matches_direct():
    p = preset("example1").point
    mu, t = 16.0, 3.0
    blk = modal_block(p, mu)
    w = np.sqrt(blk.weights)
    op = expm(t * blk.matrix) @ np.linalg.inv(blk.matrix)
    ref = np.linalg.norm(w[:, None] * op / w[None, :], 2)
    assert semigroup_norm(p, t, [mu]).norm == pytest.approx(ref, rel=1e-9)


def test_illposed_point_rejected():
    with pytest.raises(SingularBlock):
        semigroup_norm(ParameterPoint.make(1, "1/2", "1/2"), 1.0, [1.0])


def test_decay_fit_exact_power():
    t = np.geomspace(1, 100, 9)
    assert decay_fit(t, t ** -2.0).slope == pytest.approx(-2.0, abs=1e-12)
    with pytest.raises(WindowTooNarrow):
        decay_fit(t, t ** -2.0, window=(1, 3))


def test_example2_norm_slope():
    pre = preset("example2", 200)
    t = np.geomspace(1e2, 1e4, 21)
    s = norm_series(pre.point, t, pre.sequence)
    assert argmax_window(s, 200) == (1e2, 1e4)
    assert abs(decay_fit(t, [x.norm for x in s]).slope + 0.5) <= 0.075


def test_example3_norm_slope():
    pre = preset("example3")
    t = np.geomspace(1e2, 1e4, 21)
    s = norm_series(pre.point, t, pre.sequence)
    assert abs(decay_fit(t, [x.norm for x in s]).slope + 1.5) <= 0.15 * 1.5


def test_exponential_point_prefers_linear_log_fit():
    t = np.geomspace(1, 60, 21)
    s = norm_series(representative(RegionLabel.F13), t, mu_sequence("power", p=4, count=100))
    fit = decay_fit(t, [x.norm for x in s])
    assert fit.prefers_exponential
    assert fit.rss_power > 5 * fit.rss_exponential


def test_argmax_window_excludes_edge_modes():
    s = [NormSample(t, 1.0, m, 0.0) for t, m in zip(range(1, 8), [1, 2, 3, 3, 5, 5, 5])]
    assert argmax_window(s, 5) == (2, 4)
    assert argmax_window(s[:1], 5) is None
