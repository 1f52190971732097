import numpy as np
import pytest

from weakchaos.errors import EpsilonError
from weakchaos.maps import (
    PLMannevilleMap,
    doubling_map,
    identity_map,
    parse_map,
    pl_manneville_map,
    rotation_map,
)
from weakchaos.sensitivity import (
    sensitivity_curve,
    tube_brute_force,
    tube_inner,
    tube_outer,
)


def test_identity_both_radii_equal_eps():
    spec = identity_map()
    assert tube_inner(spec, 0.5, 17, 0.1) == 0.1
    assert tube_outer(spec, 0.5, 3, 0.05) == 0.05


def test_doubling_at_origin_halves_each_step():
    spec = doubling_map()
    for n in [1, 5, 20, 52, 120, 200]:
        want = 0.1 * 2.0**-n
        got_r = tube_inner(spec, 0.0, n, 0.1)
        got_R = tube_outer(spec, 0.0, n, 0.1)
        assert abs(got_r - want) <= 1e-9 * want
        assert abs(got_R - want) <= 1e-9 * want


def test_pl_at_origin_follows_breakpoints():
    spec = pl_manneville_map(3.0, 0.5)
    m = spec.pl
    for k in [0, 2, 5]:
        eps = m.xi(k)
        for n in [1, 7, 40, 200]:
            want = m.xi(k + n)
            got = tube_inner(spec, 0.0, n, eps)
            assert abs(got - want) <= 1e-9 * want


def test_doubling_outer_example():
    # |4y - 1.2| <= 0.1 pins the tube of (0.3, n=2, 0.1) to [0.275, 0.325].
    spec = doubling_map()
    got = tube_outer(spec, 0.3, 2, 0.1)
    assert got == pytest.approx(0.025, rel=1e-6)
    inner = tube_inner(spec, 0.3, 2, 0.1)
    assert inner == pytest.approx(0.025, rel=1e-6)


def test_rotation_tube_is_full_ball():
    # The tube of a rigid rotation is the whole ball; float rounding of
    # the two orbits can flip boundary probes by an ulp, so the radii
    # are exact only to the 1e-9 relative contract.
    spec = rotation_map(2.0**0.5 - 1.0)
    assert tube_inner(spec, 0.5, 100, 0.01) == pytest.approx(0.01, rel=1e-9)
    assert tube_outer(spec, 0.5, 100, 0.01) == pytest.approx(0.01, rel=1e-9)
    inner_est, outer_est = tube_brute_force(spec, 0.5, 100, 0.01, 1000)
    assert inner_est == pytest.approx(0.01, rel=1e-3)
    assert outer_est == pytest.approx(0.01, abs=2.0 * 0.02 / 999)


def test_n_zero_returns_eps():
    spec = doubling_map()
    assert tube_inner(spec, 0.3, 0, 0.07) == 0.07
    assert tube_outer(spec, 0.3, 0, 0.07) == 0.07


def test_epsilon_validation():
    spec = identity_map()
    with pytest.raises(EpsilonError):
        tube_inner(spec, 0.5, 3, 0.0)
    with pytest.raises(EpsilonError):
        tube_outer(spec, 0.5, 3, -0.1)
    with pytest.raises(EpsilonError):
        tube_brute_force(spec, 0.5, 3, 0.0, 1000)
    with pytest.raises(ValueError):
        tube_brute_force(spec, 0.5, 3, 0.1, 999)


def test_brute_force_identity_and_doubling():
    ident = identity_map()
    inner_est, outer_est = tube_brute_force(ident, 0.5, 17, 0.1, 2001)
    assert inner_est == 0.1
    assert outer_est == pytest.approx(0.1, abs=1e-4)
    dbl = doubling_map()
    inner_est, outer_est = tube_brute_force(dbl, 0.3, 2, 0.1, 2001)
    assert outer_est == pytest.approx(0.025, abs=2e-4)


def test_fast_path_matches_brute_force_random_configs():
    specs = [
        identity_map(),
        doubling_map(),
        rotation_map(2.0**0.5 - 1.0),
        pl_manneville_map(3.0, 0.5),
        pl_manneville_map(2.5, 0.3),
    ]
    rng = np.random.default_rng(77)
    grid = 2001
    for trial in range(25):
        spec = specs[trial % len(specs)]
        x = float(rng.uniform(0.02, 0.98))
        n = int(rng.integers(1, 20))
        eps = float(rng.uniform(0.02, 0.15))
        gridstep = 2.0 * eps / (grid - 1)
        inner_est, outer_est = tube_brute_force(spec, x, n, eps, grid)
        r = tube_inner(spec, x, n, eps)
        big_r = tube_outer(spec, x, n, eps)
        assert abs(r - inner_est) <= 2.0 * gridstep + 1e-12, (spec.label, x, n, eps)
        assert abs(big_r - outer_est) <= 2.0 * gridstep + 1e-12, (spec.label, x, n, eps)


def test_radii_monotone_in_n_and_eps():
    rng = np.random.default_rng(13)
    specs = [doubling_map(), pl_manneville_map(3.0, 0.5), identity_map()]
    for spec in specs:
        for _ in range(8):
            x = float(rng.uniform(0.05, 0.95))
            rs = [tube_inner(spec, x, n, 0.08) for n in [1, 3, 6, 12]]
            Rs = [tube_outer(spec, x, n, 0.08) for n in [1, 3, 6, 12]]
            assert all(b <= a + 1e-12 for a, b in zip(rs, rs[1:]))
            assert all(b <= a + 1e-12 for a, b in zip(Rs, Rs[1:]))
            assert all(r <= R + 1e-12 for r, R in zip(rs, Rs))
            # wider tolerance gives a wider inner radius
            r_small = tube_inner(spec, x, 6, 0.04)
            r_big = tube_inner(spec, x, 6, 0.1)
            assert r_big >= r_small - 1e-12


def test_sensitivity_curve_invariants():
    spec = pl_manneville_map(3.0, 0.5)
    res = sensitivity_curve(spec, 0.0, 0.5, [1, 2, 5, 10, 25])
    m = PLMannevilleMap(3.0, 0.5)
    for n, r in zip(res.ns, res.inner):
        assert abs(r - m.xi(int(n))) <= 1e-9 * m.xi(int(n))
    assert np.all(res.inner <= res.outer + 1e-12)
    assert np.all(np.diff(res.inner) <= 1e-12)
    assert np.all(res.outer <= res.eps + 1e-12)
    with pytest.raises(ValueError):
        sensitivity_curve(spec, 0.0, 0.5, [5, 5])


def test_curve_constant_for_identity():
    res = sensitivity_curve(parse_map("identity"), 0.25, 0.07, [1, 4, 9, 50])
    assert np.all(res.inner == 0.07)
    assert np.all(res.outer == 0.07)
