import numpy as np
import pytest

from qmetro.spin import collective_op, full_rep, symmetric_rep
from qmetro.states import (QuantumState, SqueezingSpec, dicke, ghz,
                           maximally_mixed, mix_white_noise, polarized, rotate,
                           singlet_pi, squeezed_ground_state, to_full)
from qmetro.fisher import qfi, qfi_pure, white_noise_qfi, bures_fidelity


def test_polarized_examples():
    st = polarized(4, "z")
    assert st.expectation(collective_op("z", st.rep)) == pytest.approx(2.0, abs=1e-12)
    assert st.variance(collective_op("x", st.rep)) == pytest.approx(1.0, abs=1e-12)
    one = polarized(1, "x", full_rep(1))
    assert one.expectation(collective_op("x", one.rep)) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_polarized_reps_agree(axis):
    sym = to_full(polarized(5, axis))
    full = polarized(5, axis, full_rep(5))
    assert abs(np.vdot(sym.data, full.data)) == pytest.approx(1.0, abs=1e-10)


def test_ghz_values():
    g = ghz(3)
    assert qfi_pure(g, collective_op("x", g.rep)) == pytest.approx(9.0, abs=1e-9)
    assert qfi_pure(g, collective_op("y", g.rep)) == pytest.approx(3.0, abs=1e-9)
    assert qfi_pure(g, collective_op("z", g.rep)) == pytest.approx(3.0, abs=1e-9)
    assert g.expectation(collective_op("z", g.rep)) == pytest.approx(0.0, abs=1e-12)


def test_ghz_z_axis_form():
    g = ghz(4, axis="z")
    v = np.zeros(5)
    v[0] = v[4] = 1 / np.sqrt(2)
    assert np.abs(np.abs(g.data) - v).max() <= 1e-12
    assert qfi_pure(g, collective_op("z", g.rep)) == pytest.approx(16.0, abs=1e-9)


def test_ghz_reps_agree():
    sym = to_full(ghz(4, axis="x"))
    full = ghz(4, full_rep(4), axis="x")
    assert abs(np.vdot(sym.data, full.data)) == pytest.approx(1.0, abs=1e-10)


def test_dicke_moments_and_qfi():
    d = dicke(4, 2)
    rep = d.rep
    Jx, Jy, Jz = (collective_op(a, rep) for a in "xyz")
    assert d.expectation(Jx.matrix @ Jx.matrix) == pytest.approx(3.0, abs=1e-12)
    assert d.expectation(Jy.matrix @ Jy.matrix) == pytest.approx(3.0, abs=1e-12)
    assert d.expectation(Jz.matrix @ Jz.matrix) == pytest.approx(0.0, abs=1e-12)
    assert qfi_pure(d, Jx) == pytest.approx(12.0, abs=1e-9)


def test_dicke_m0_is_polarized():
    d = dicke(5, 0)
    assert np.abs(np.abs(d.data) - np.abs(polarized(5, "z").data)).max() <= 1e-12


def test_dicke_full_rep_matches():
    sym = to_full(dicke(4, 1))
    full = dicke(4, 1, full_rep(4))
    assert abs(np.vdot(sym.data, full.data)) == pytest.approx(1.0, abs=1e-10)


def test_dicke_half_maximizes_planar_moment():
    n = 6
    rep = symmetric_rep(n)
    Jx, Jy = collective_op("x", rep), collective_op("y", rep)
    planar = Jx.matrix @ Jx.matrix + Jy.matrix @ Jy.matrix
    top = dicke(n, n // 2).expectation(planar)
    assert top == pytest.approx(n * (n + 2) / 4, abs=1e-9)
    for other in (polarized(n, "z"), ghz(n), dicke(n, 1)):
        assert other.expectation(planar) <= top + 1e-9


def test_singlet_two_qubits_exact():
    st = singlet_pi(2)
    psi = np.zeros(4, dtype=complex)
    psi[1], psi[2] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    assert np.abs(st.data - np.outer(psi, psi.conj())).max() <= 1e-12


def test_singlet_moments_vanish():
    st = singlet_pi(4)
    for axis in "xyz":
        J = collective_op(axis, st.rep)
        assert abs(st.expectation(J)) <= 1e-9
        assert abs(st.variance(J)) <= 1e-9


def test_singlet_rotation_invariance(rng):
    st = singlet_pi(4)
    from qmetro.spin import direction_op
    for _ in range(3):
        n = rng.standard_normal(3)
        n /= np.linalg.norm(n)
        rotated = rotate(st, direction_op(n, st.rep), rng.uniform(0, 2 * np.pi))
        assert np.abs(rotated.data - st.data).max() <= 1e-9


def test_singlet_rejects_odd():
    with pytest.raises(ValueError, match="even"):
        singlet_pi(3)


def test_squeezed_limits():
    n = 8
    strong = squeezed_ground_state(SqueezingSpec(n, 1e6))
    overlap = abs(np.vdot(strong.data, polarized(n, "z").data)) ** 2
    assert overlap > 0.999
    flat = squeezed_ground_state(SqueezingSpec(n, 0.0))
    # ground state of J_x^2 alone: the zero-eigenvalue x basis state
    Jx = collective_op("x", flat.rep)
    assert abs(flat.expectation(Jx.matrix @ Jx.matrix)) <= 1e-10


def test_squeezed_heisenberg_relation():
    for lam in (0.5, 3.0, 40.0):
        st = squeezed_ground_state(SqueezingSpec(10, lam))
        vx = st.variance(collective_op("x", st.rep))
        vy = st.variance(collective_op("y", st.rep))
        mz = st.expectation(collective_op("z", st.rep))
        assert vx * vy >= mz ** 2 / 4 - 1e-9


def test_squeezed_is_squeezed():
    st = squeezed_ground_state(SqueezingSpec(20, 4.0))
    vx = st.variance(collective_op("x", st.rep))
    mz = st.expectation(collective_op("z", st.rep))
    assert vx < abs(mz) / 2


def test_white_noise_endpoints():
    g = ghz(2, full_rep(2))
    assert np.abs(mix_white_noise(g, 1.0).data - g.density()).max() <= 1e-12
    flat = mix_white_noise(g, 0.0)
    assert np.abs(flat.data - np.eye(4) / 4).max() <= 1e-12
    assert qfi(flat, collective_op("x", flat.rep)).value <= 1e-12


def test_white_noise_ghz2_frozen_value():
    # frozen from the eigendecomposition route: 4 p^2 Var / (p + 2(1-p)/D)
    g = ghz(2, full_rep(2), axis="x")
    Jx = collective_op("x", full_rep(2))
    noisy = mix_white_noise(g, 0.5)
    direct = qfi(noisy, Jx).value
    closed = white_noise_qfi(g, Jx, 0.5)
    assert direct == pytest.approx(4.0 / 3.0, abs=1e-9)
    assert closed == pytest.approx(direct, abs=1e-9)


def test_white_noise_rejects_bad_p():
    g = ghz(2, full_rep(2))
    with pytest.raises(ValueError, match="0, 1"):
        mix_white_noise(g, 1.5)


def test_density_invariants_enforced():
    bad = np.diag([0.7, 0.4]).astype(complex)
    with pytest.raises(ValueError, match="trace"):
        QuantumState(full_rep(1), bad)
    unnorm = np.array([1.0, 1.0], dtype=complex)
    with pytest.raises(ValueError, match="normalis"):
        QuantumState(full_rep(1), unnorm)


def test_maximally_mixed_purity():
    mm = maximally_mixed(full_rep(3))
    assert mm.purity() == pytest.approx(1 / 8, abs=1e-12)


def test_fidelity_shortcuts(rng):
    a = polarized(3, "z", full_rep(3))
    b = polarized(3, "x", full_rep(3))
    assert a.fidelity_with(a) == pytest.approx(1.0, abs=1e-12)
    assert a.fidelity_with(b) == pytest.approx(abs(np.vdot(a.data, b.data)) ** 2, abs=1e-12)
    assert bures_fidelity(a, b) == pytest.approx(a.fidelity_with(b), abs=1e-10)
