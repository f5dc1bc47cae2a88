"""End-to-end smoke checks for the python bindings."""

import math

import _relaycap as rc


def unit_config(M=2, K=8, L=1, seed=0):
    return rc.NetworkConfig.uniform_gains(M, K, 0.01, 1.0, 1.0, 1.0, L, seed)


def test_constants_and_scales():
    g = rc.derive_constants(unit_config())
    assert abs(g.C_hi**2 - 1.0 / 1.01) < 1e-12
    assert abs(g.Csn_hi**2 - 1.01) < 1e-12
    assert abs(g.delta_p1 - 0.12751) < 1e-4
    assert abs(rc.relay_scale_p1(unit_config(2, 8), 0) - 0.35180) < 1e-4
    coop = unit_config(2, 8, L=2)
    assert abs(rc.vrelay_scale_p1(coop, 0) - 0.21109) < 1e-4


def test_sampling_shapes_and_determinism():
    cfg = unit_config(3, 6, seed=5)
    h1, f1 = rc.sample_channels(cfg, 0)
    h2, f2 = rc.sample_channels(cfg, 0)
    assert h1.shape == (6, 3) and f1.shape == (3, 6)
    assert (h1 == h2).all() and (f1 == f2).all()
    assert rc.relay_partition(6, 2) == [0, 0, 0, 1, 1, 1]


def test_sinr_and_mutual_information():
    cfg = unit_config(2, 8)
    v = rc.sinr(cfg, 0, 0, "P1")
    assert v >= 0.0
    assert abs(rc.mutual_information(1.0) - 0.5) < 1e-12
    assert abs(rc.mutual_information(3.0) - 1.0) < 1e-12


def test_tail_bounds():
    assert abs(rc.hoeffding(1, [(0.0, 1.0)], 0.5).bound - math.exp(-0.5)) < 1e-12
    t = rc.truncation_bound(4, 1.0, 1.0, 1.0, 1.0, 27.0)
    assert abs(t.bound - 8.0 * math.exp(-4.5)) < 1e-12
    n = rc.truncation_bound_nonneg(1, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    assert abs(n.bound - 3.0 * math.exp(-0.5)) < 1e-12


def test_bounds_and_capacity_formulas():
    cfg = unit_config(2, 8)
    g = rc.derive_constants(cfg)
    iv = rc.sinr_interval("P1", 8, 512, 1.0, g, 0.01)
    assert 0.0 <= iv.lower <= iv.upper
    lo, hi = rc.ergodic_interval("P1", 100.0, 1e6, 1, 1e-9, 0.5, g, 0.01)
    assert abs(lo - 0.34115) < 5e-4 and abs(hi - 0.34115) < 5e-4
    x, bound, in_regime = rc.outage_bound_p1(10.0, 10000.0, 0.0, g, 0.01)
    assert in_regime and abs(x - 1.95375) < 1e-3 and bound > 0
    m = rc.p1_moments(unit_config(4, 16))
    assert m.f_bar > 0 and m.var_w >= 0.01


def test_af_spectrum():
    p = rc.AfParams(1.0, 1.0, 0.01)
    assert abs(rc.support_upper_bound(p) - 3.2) < 1e-12
    mp = rc.mp_density(rc.AfParams(2.0, 1.0, 0.01))
    assert abs(mp.support[0] - 0.08579) < 1e-4
    assert abs(mp.total_mass() - 1.0) < 1e-3
    G, residual = rc.stieltjes_G(0.5 + 0.01j, rc.AfParams(0.5, 1.0, 0.01))
    assert residual <= 1e-6 and G.imag > 0
    c_inf = rc.capacity_infty(1.0, 0.01)
    assert c_inf > 1.0
    dens = rc.limiting_density(rc.AfParams(0.5, 1.0, 0.01), -1.0, 400)
    assert abs(dens.total_mass() - 1.0) < 1e-3


def test_monte_carlo_surface():
    samples = rc.sinr_cdf(unit_config(2, 8, seed=1), "P2", 1000)
    assert len(samples) == 1000 and samples == sorted(samples)
    mean, err = rc.af_capacity_mc(16, 8, 1.0, 0.01, 12)
    assert mean > 0 and err >= 0
    eig = rc.esd_t_samples(30, 15, 1.0, 2)
    assert len(eig) == 30 and all(-1e-12 <= v <= 1.0 for v in eig)
    ft = rc.ft_density(rc.AfParams(0.5, 1.0, 0.01))
    assert 0.0 <= rc.ks_distance(eig, ft) <= 1.0
