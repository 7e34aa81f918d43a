import numpy as np
import pytest

from qmetro.fisher import qfi
from qmetro.spin import collective_op, direction_op, full_rep, symmetric_rep
from qmetro.states import (QuantumState, SqueezingSpec, dicke, ghz,
                           maximally_mixed, polarized, singlet_pi,
                           squeezed_ground_state, to_full)
from qmetro.witnesses import (avg_producibility_bound, avg_qfi,
                              avg_two_particle_dm, chi_squared,
                              depth_certificate, macroscopicity, moments,
                              moments_from_two_particle, optimal_ssi,
                              producibility_bound, qfi_entanglement,
                              xi_squared_os, xi_squared_s, xi_squared_singlet)
from conftest import rand_pure


# ----------------------------------------------------------------- moments

def test_moments_polarized():
    m = moments(polarized(4, "z"))
    assert m.mean[2] == pytest.approx(2.0, abs=1e-12)
    assert m.var("x") == pytest.approx(1.0, abs=1e-12)


def test_moments_singlet_all_zero():
    m = moments(singlet_pi(4))
    assert np.abs(m.mean).max() <= 1e-9
    assert abs(m.total_variance()) <= 1e-9


def test_moments_dicke():
    m = moments(dicke(4, 2))
    assert m.second_moment("x") == pytest.approx(3.0, abs=1e-12)
    assert m.second_moment("z") == pytest.approx(0.0, abs=1e-12)


# ------------------------------------------------- xi_s

def test_xi_s_polarized_boundary():
    rep = xi_squared_s(moments(polarized(6, "z")))
    assert rep.value == pytest.approx(1.0, abs=1e-9)
    assert rep.verdict == "satisfied" and rep.boundary


def test_xi_s_squeezed_state_violates():
    st = squeezed_ground_state(SqueezingSpec(100, 100.0))
    rep = xi_squared_s(moments(st))
    assert rep.value < 1 and rep.violated


def test_xi_s_ghz_inapplicable():
    rep = xi_squared_s(moments(ghz(4)))
    assert rep.verdict == "inapplicable"
    assert rep.value is None


# ------------------------------------------------- optimal ssi

def test_ssi_singlet_violates_total_variance():
    reports = {r.criterion: r for r in optimal_ssi(moments(singlet_pi(4)))}
    assert reports["ssi_total_variance"].violated
    assert not reports["ssi_total_second_moment"].violated


def test_ssi_polarized_equality_case():
    n = 6
    reports = {r.criterion: r for r in optimal_ssi(moments(polarized(n, "z")))}
    rep = reports["ssi_variances_vs_second_moment"]
    assert rep.verdict == "satisfied" and rep.boundary
    assert rep.value == pytest.approx(n * (n - 1) / 2, abs=1e-9)


def test_ssi_dicke_violation():
    reports = {r.criterion: r for r in optimal_ssi(moments(dicke(6, 3)))}
    assert reports["ssi_second_moments_vs_variance"].violated


def test_ssi_rejects_unphysical_moments():
    from qmetro.witnesses import MomentSet
    n = 4
    S = np.eye(3) * (n * (n + 2) / 4)  # each axis at the collective maximum
    with pytest.raises(ValueError):
        MomentSet(n, np.zeros(3), S)


# ------------------------------------------------- xi_os / xi_singlet

def test_xi_os_dicke_violates_at_zero():
    rep = xi_squared_os(moments(dicke(4, 2)), squeezed_axis="z")
    assert rep.value == pytest.approx(0.0, abs=1e-9)
    assert rep.violated


def test_xi_os_polarized_boundary():
    rep = xi_squared_os(moments(polarized(8, "z")))
    assert rep.value == pytest.approx(1.0, abs=1e-9)
    assert not rep.violated


def test_xi_os_maximally_mixed_trivially_satisfied():
    rep = xi_squared_os(moments(maximally_mixed(full_rep(4))))
    assert rep.verdict == "satisfied"
    assert rep.value is None


def test_xi_singlet_values():
    assert xi_squared_singlet(moments(singlet_pi(4))).value == pytest.approx(0.0, abs=1e-9)
    pol = xi_squared_singlet(moments(polarized(6, "z")))
    assert pol.value == pytest.approx(1.0, abs=1e-9)
    mm = xi_squared_singlet(moments(maximally_mixed(full_rep(4))))
    assert mm.value == pytest.approx(1.5, abs=1e-9)
    assert not mm.violated


def test_xi_os_detects_whatever_xi_s_detects(rng):
    # sampled implication: xi_s < 1 => xi_os < 1
    for lam in (2.0, 10.0, 50.0, 300.0):
        m = moments(squeezed_ground_state(SqueezingSpec(40, lam)))
        s = xi_squared_s(m)
        os_ = xi_squared_os(m)
        if s.verdict != "inapplicable" and s.value < 1 - 1e-9:
            assert os_.value is not None and os_.value < 1 - 1e-9


# ------------------------------------------------- qfi-based criteria

def test_qfi_entanglement_verdicts():
    g = ghz(4)
    rep = qfi_entanglement(g, 4, collective_op("x", g.rep))
    assert rep.violated and rep.value == pytest.approx(16.0, abs=1e-9)
    mm = maximally_mixed(symmetric_rep(4))
    rep2 = qfi_entanglement(mm, 4, collective_op("x", mm.rep))
    assert not rep2.violated
    rep3 = qfi_entanglement(17.0 + 1e-3, 4)
    assert "unphysical" in rep3.detail


def test_chi_squared_values():
    g = ghz(5)
    rep = chi_squared(g, collective_op("x", g.rep))
    assert rep.value == pytest.approx(1 / 5, abs=1e-9)
    pol = polarized(6, "z")
    rep2 = chi_squared(pol, collective_op("y", pol.rep))
    assert rep2.value == pytest.approx(1.0, abs=1e-9)


def test_chi_bounded_by_xi_s(rng):
    # chi^2 <= xi_s^2 with the rotation axis matched to the mean-spin plane
    for lam in (1.0, 5.0, 25.0):
        st = squeezed_ground_state(SqueezingSpec(20, lam))
        m = moments(st)
        s = xi_squared_s(m)
        # mean spin along z: the matched in-plane rotation axis is y
        c = chi_squared(st, collective_op("y", st.rep))
        assert c.value <= s.value + 1e-8


# ------------------------------------------------- producibility depth

def _max_square_sum(n, k):
    # brute force: partitions of n with parts <= k, maximizing sum of squares
    best = 0
    def rec(remaining, largest, acc):
        nonlocal best
        if remaining == 0:
            best = max(best, acc)
            return
        for part in range(min(k, largest, remaining), 0, -1):
            rec(remaining - part, part, acc + part * part)
    rec(n, n, 0)
    return best


def test_producibility_bound_matches_brute_force():
    for n in range(2, 13):
        for k in range(1, n + 1):
            assert producibility_bound(n, k) == _max_square_sum(n, k)


def test_depth_certificate_examples():
    cert = depth_certificate(64.0, 8)
    assert cert.genuine_multipartite and cert.depth == 8
    cert2 = depth_certificate(12.0, 6)
    assert cert2.depth == 2
    cert3 = depth_certificate(6.0, 6)
    assert cert3.depth == 1
    with pytest.raises(ValueError, match="physical"):
        depth_certificate(70.0, 8)


def test_depth_monotone_in_fq():
    n = 10
    last = 0
    for F in np.linspace(0, n * n, 40):
        k = depth_certificate(float(F), n).depth
        assert k >= last
        last = k


def test_avg_qfi_saturation():
    for n in (4, 6):
        d = avg_qfi(dicke(n, n // 2))
        assert d.average == pytest.approx(n * (n + 2) / 3, abs=1e-8)
        g = avg_qfi(ghz(n))
        assert g.average == pytest.approx(n * (n + 2) / 3, abs=1e-8)
        assert g.genuine_multipartite
    mm = avg_qfi(maximally_mixed(symmetric_rep(4)))
    assert mm.average <= 1e-12
    assert mm.certified_depth == 1


def test_avg_qfi_spin_length_bound():
    for st in (polarized(5, "z"), ghz(5), dicke(6, 3)):
        rep = avg_qfi(st)
        assert 3 * rep.average <= 3 * rep.bound_spin_length + 1e-8


def test_avg_producibility_k1_matches_separable():
    assert avg_producibility_bound(9, 1) == pytest.approx(6.0)
    assert avg_producibility_bound(6, 6) == pytest.approx(16.0)
    # remainder-one branch
    assert avg_producibility_bound(7, 3) == pytest.approx((2 * 3 * 5 + 2) / 3)


# ------------------------------------------------- macroscopicity

def test_macroscopicity_families():
    for n in (4, 7):
        assert macroscopicity(ghz(n)).n_eff == pytest.approx(n, abs=1e-9)
    assert macroscopicity(polarized(6, "z")).n_eff == pytest.approx(1.0, abs=1e-9)
    assert macroscopicity(maximally_mixed(symmetric_rep(4))).n_eff <= 1e-12


def test_macroscopicity_bounded_and_convex(rng):
    n = 4
    rep = full_rep(n)
    g = to_full(ghz(n))
    pol = to_full(polarized(n, "z"))
    mix = QuantumState(rep, 0.5 * g.density() + 0.5 * pol.density())
    n_mix = macroscopicity(mix).n_eff
    assert n_mix <= max(macroscopicity(g).n_eff, macroscopicity(pol).n_eff) + 1e-6
    assert n_mix <= n + 1e-6
    for _ in range(10):
        st = QuantumState(rep, rand_pure(rng, 2 ** n))
        assert macroscopicity(st).n_eff <= n + 1e-6


def test_macroscopicity_matches_direction_scan():
    st = dicke(5, 2)
    best = macroscopicity(st)
    rng = np.random.default_rng(3)
    for _ in range(50):
        v = rng.standard_normal(3)
        v /= np.linalg.norm(v)
        Jn = direction_op(v, st.rep)
        assert 4 * qfi(st, Jn).value / (4 * st.n) <= best.n_eff + 1e-9


# ------------------------------------------------- two-particle reduction

def test_avg_two_particle_product_state():
    st = polarized(4, "z", full_rep(4))
    rho2 = avg_two_particle_dm(st)
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 0] = 1.0
    assert np.abs(rho2 - expected).max() <= 1e-12


def test_avg_two_particle_singlet_pair():
    rho2 = avg_two_particle_dm(singlet_pi(2))
    psi = np.zeros(4, dtype=complex)
    psi[1], psi[2] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    assert np.abs(rho2 - np.outer(psi, psi.conj())).max() <= 1e-12


def test_moments_recoverable_from_pair_average(rng):
    # permutation-invariant state: symmetric-sector random vector embedded
    n = 5
    st = to_full(QuantumState(symmetric_rep(n), rand_pure(rng, n + 1)))
    direct = moments(st)
    rebuilt = moments_from_two_particle(avg_two_particle_dm(st), n)
    assert np.abs(direct.mean - rebuilt.mean).max() <= 1e-9
    assert np.abs(direct.second - rebuilt.second).max() <= 1e-9
    s_direct = xi_squared_s(direct, "x")
    s_rebuilt = xi_squared_s(rebuilt, "x")
    if s_direct.value is not None:
        assert s_rebuilt.value == pytest.approx(s_direct.value, abs=1e-9)
