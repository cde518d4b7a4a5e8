import numpy as np
import pytest

from cattaneo.atlas import ParameterPoint, RegionLabel, representative
from cattaneo.catalog import mu_sequence, preset
from cattaneo.linalg4 import NearSingularBlock, inverse, norm2
from cattaneo.resolvent import (critical_frequencies, growth_exponent, modal_resolvent_norm,
                                resolvent_sup, weighted_resolvent_direct)
from cattaneo.spectrum import critical_root, modal_eigenvalues


def dist_to_spectrum(point, mu, lam):
    return min(abs(1j * lam - z) for z in modal_eigenvalues(point, mu).roots)


def test_inverse_matches_numpy_on_random_matrices():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(50, 4, 4)) + 1j * rng.normal(size=(50, 4, 4))
    inv, det = inverse(a)
    np.testing.assert_allclose(inv, np.linalg.inv(a), rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(det, np.linalg.det(a), rtol=1e-12)
    np.testing.assert_allclose(norm2(inv), np.linalg.norm(inv, 2, axis=(1, 2)), rtol=1e-10)


def test_product_path_agrees_with_svd_path():
    rng = np.random.default_rng(8)
    for _ in range(100):
        a, b, g = rng.uniform(0, 1, 3)
        p = ParameterPoint.make(min(a, (b + 1) / 2), b, max(g, 0.05), m=int(rng.integers(0, 2)),
                                sigma=rng.uniform(0.5, 4), tau=rng.uniform(0.25, 4))
        mu = 10 ** rng.uniform(0, 4)
        lam = 10 ** rng.uniform(-1, 3)
        ref = weighted_resolvent_direct(p, mu, lam)
        assert modal_resolvent_norm(p, mu, lam) == pytest.approx(ref, rel=1e-8)


def test_far_frequency_close_to_inverse_distance():
    p = preset("example2").point
    for mu, lam in [(1.0, 50.0), (16.0, 0.01), (81.0, 300.0)]:
        r = modal_resolvent_norm(p, mu, lam) * dist_to_spectrum(p, mu, lam)
        assert 1.0 - 1e-12 <= r <= 10.0


@pytest.mark.parametrize("mu", [1e4, 1e6])
def test_norm_at_critical_frequency_bounded_below(mu):
    p = preset("example1").point
    z = critical_root(modal_eigenvalues(p, mu).roots)
    assert modal_resolvent_norm(p, mu, z.imag) >= (1 - 1e-9) / abs(z.real)


def test_lower_bound_law_on_random_samples():
    rng = np.random.default_rng(9)
    p = preset("example3").point
    for _ in range(200):
        mu, lam = 10 ** rng.uniform(0, 6), 10 ** rng.uniform(-2, 4)
        assert modal_resolvent_norm(p, mu, lam) * dist_to_spectrum(p, mu, lam) >= 1 - 1e-9


def test_near_singular_block_detected():
    p = preset("example1").point
    z = critical_root(modal_eigenvalues(p, 1e12).roots)
    with pytest.raises(NearSingularBlock):
        modal_resolvent_norm(p, 1e12, z.imag)


def test_single_mode_sup_equals_modal_norm():
    p = preset("example2").point
    s = resolvent_sup(p, 7.0, [81.0])
    assert s.norm == modal_resolvent_norm(p, 81.0, 7.0)
    assert s.argmax_mu == 81.0


def test_two_modes_argmax_tracks_tuned_mode():
    p = preset("example2").point
    lam = critical_root(modal_eigenvalues(p, 16.0).roots).imag
    s = resolvent_sup(p, lam, [16.0, 1296.0], envelope="discrete")
    assert s.argmax_mu == 16.0


def test_continuous_envelope_dominates_discrete():
    p = preset("example3-m0").point
    modes = mu_sequence("power", p=4, count=60)
    for lam in (30.0, 300.0, 3000.0):
        d = resolvent_sup(p, lam, modes, envelope="discrete")
        c = resolvent_sup(p, lam, modes, envelope="continuous")
        assert c.norm >= d.norm


def test_critical_frequencies_lie_on_branch():
    p = preset("example2").point
    lams = critical_frequencies(p, 10.0, 100.0, 5)
    np.testing.assert_allclose(lams, np.geomspace(10, 100, 5), rtol=1e-6)


def test_growth_exponent_example2():
    fit = growth_exponent(preset("example2").point, (10.0, 100.0, 8), mu_sequence("power", p=4, count=300))
    assert abs(fit.slope - 2.0) <= 0.2
    # the envelope grows without bound
    norms = [s.norm for s in fit.samples]
    assert max(norms[-3:]) > max(norms[:3])


def test_growth_exponent_exponential_point_is_flat():
    p = representative(RegionLabel.F13)
    fit = growth_exponent(p, (10.0, 1000.0, 8), mu_sequence("power", p=4, count=1000))
    assert abs(fit.slope) < 0.1
