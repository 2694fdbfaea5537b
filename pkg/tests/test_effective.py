import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbhlab.effective import (BASIS, SPIN_DOT, SZ_TOTAL, QbhParams, TwoSiteState, analytic_eigenstates,
                              analytic_spectrum, basis_index, biquadratic_matrix,
                              build_qbh_hamiltonian, ground_state, numeric_sector_ground_state,
                              sector_decompose, sector_ground_state)
from qbhlab.numerics import degeneracy_classes, eigh

thetas = st.floats(-math.pi / 2 + 1e-6, math.pi / 2 - 1e-6)
lams = st.sampled_from([-1, 1])
fields = st.floats(0.0, 5.0)


def test_spin_dot_matches_kronecker_oracle(spin_dot_oracle):
    assert np.allclose(SPIN_DOT, spin_dot_oracle, atol=1e-15)


def test_basis_order():
    assert basis_index(-1, -1) == 0 and basis_index(1, 1) == 8 and basis_index(0, 1) == 5
    assert [basis_index(*b) for b in BASIS] == list(range(9))
    with pytest.raises(ValueError):
        basis_index(2, 0)


@pytest.mark.parametrize("bad", [dict(lam=0, theta=0.0), dict(lam=1, theta=math.pi / 2),
                                 dict(lam=1, theta=-1.5708), dict(lam=1, theta=0.0, h=-0.1),
                                 dict(lam=1, theta=math.nan)])
def test_params_validation(bad):
    with pytest.raises(ValueError):
        QbhParams(**bad)


def test_singlet_point_spectrum():
    es = eigh(build_qbh_hamiltonian(QbhParams(1, 0.0, 0.0)))
    assert degeneracy_classes(es.values, 1e-8) == [
        (pytest.approx(-2.0), 1), (pytest.approx(-1.0), 3), (pytest.approx(1.0), 5)]


@pytest.mark.parametrize("h", [0.0, 0.3, 2.7])
def test_fully_polarized_diagonal(h):
    ham = build_qbh_hamiltonian(QbhParams(1, 0.0, h))
    assert ham[basis_index(1, 1), basis_index(1, 1)] == pytest.approx(1 - 2 * h)


def test_theta0_degeneracy():
    spec = analytic_spectrum(QbhParams(1, -math.pi / 4))
    assert spec.e0_minus == pytest.approx(-2.0)
    assert spec.e00 == pytest.approx(-2.0)
    vals = eigh(build_qbh_hamiltonian(QbhParams(1, -math.pi / 4))).values
    assert vals[0] == pytest.approx(-2.0) and vals[1] == pytest.approx(-2.0)


def test_analytic_examples():
    s = analytic_spectrum(QbhParams(1, 0.0))
    assert s.delta == pytest.approx(3.0)
    assert (s.e0_minus, s.e0_plus, s.e00) == pytest.approx((-2.0, 1.0, -1.0))
    assert math.cos(s.alpha_minus) ** 2 == pytest.approx(2 / 3)

    s = analytic_spectrum(QbhParams(1, -math.pi / 4))
    assert s.delta == pytest.approx(2.0)
    assert s.e0_minus == pytest.approx(-2.0)
    assert s.alpha_minus == pytest.approx(0.0, abs=1e-7)

    s = analytic_spectrum(QbhParams(1, 0.0, 1.0))
    assert s.e1_minus == pytest.approx(-2.0) and s.e0_minus == pytest.approx(-2.0)


def test_biquadratic_forms_differ():
    # the operator square is SU(2) invariant and has no theta-dependent mixing
    op = biquadratic_matrix("operator")
    assert np.allclose(op, SPIN_DOT @ SPIN_DOT)
    assert not np.allclose(op, biquadratic_matrix("elementwise"))
    with pytest.raises(ValueError):
        biquadratic_matrix("cubic")


def test_operator_form_is_total_spin_function():
    # x = S_L.S_R = (S(S+1) - 4)/2 takes values -2, -1, 1
    p = QbhParams(1, 0.4)
    vals = eigh(build_qbh_hamiltonian(p, biquadratic="operator")).values
    t = p.tan_theta
    expected = sorted([-2 + 4 * t] + [-1 + t] * 3 + [1 + t] * 5)
    assert np.allclose(vals, expected)


@settings(max_examples=300, deadline=None)
@given(lams, thetas, fields)
def test_spectrum_equivalence(lam, theta, h):
    p = QbhParams(lam, theta, h)
    closed = np.sort(analytic_spectrum(p).energies())
    ham = build_qbh_hamiltonian(p)
    # absolute 1e-10 is below double precision once tan(theta) ~ 1e6
    scale = max(1.0, np.max(np.sum(np.abs(ham), axis=1)))
    assert np.max(np.abs(closed - eigh(ham).values)) <= 1e-10 * scale


@settings(max_examples=200, deadline=None)
@given(lams, thetas, fields)
def test_eigenstates_are_eigenvectors(lam, theta, h):
    p = QbhParams(lam, theta, h)
    ham = build_qbh_hamiltonian(p)
    scale = max(1.0, np.max(np.abs(ham)))
    for e, sz, st_ in analytic_eigenstates(p):
        assert st_.norm == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(ham @ st_.amplitudes - e * st_.amplitudes)) <= 1e-10 * scale
        nz = np.flatnonzero(np.abs(st_.amplitudes) > 0)
        assert all(sum(BASIS[i]) == sz for i in nz)


@settings(max_examples=200, deadline=None)
@given(lams, thetas, fields)
def test_sector_conservation_and_field_symmetry(lam, theta, h):
    p = QbhParams(lam, theta, h)
    ham = build_qbh_hamiltonian(p)
    assert np.max(np.abs(ham @ SZ_TOTAL - SZ_TOTAL @ ham)) == 0.0
    flipped = ham + 2 * h * SZ_TOTAL
    assert np.allclose(eigh(ham).values, eigh(flipped).values, atol=1e-10)


@settings(max_examples=200, deadline=None)
@given(lams, thetas)
def test_sz0_ordering(lam, theta):
    s = analytic_spectrum(QbhParams(lam, theta))
    slack = 1e-12 * max(1.0, abs(s.e00))
    assert s.e0_minus <= s.e00 + slack and s.e00 <= s.e0_plus + slack
    assert s.delta >= abs(math.tan(theta) - lam) - 1e-12
    if s.delta > 0:
        assert math.cos(s.alpha_minus) ** 2 == pytest.approx(abs(s.e0_minus) / s.delta, abs=1e-12)


def test_sector_decompose_blocks():
    blocks = sector_decompose(build_qbh_hamiltonian(QbhParams(1, 0.2, 0.5)))
    assert [blocks[s].shape[0] for s in (2, 1, 0, -1, -2)] == [1, 2, 3, 2, 1]
    b0 = sector_decompose(build_qbh_hamiltonian(QbhParams(1, 0.0)))[0]
    assert np.allclose(eigh(b0).values, [-2, -1, 1])
    assert sector_decompose(build_qbh_hamiltonian(QbhParams(-1, 0.0)))[2].tolist() == [[-1.0]]


def test_sector_decompose_rejects_cross_terms():
    ham = build_qbh_hamiltonian(QbhParams(1, 0.0))
    ham[0, 1] = ham[1, 0] = 0.1
    with pytest.raises(ValueError, match="couples"):
        sector_decompose(ham)


def test_ground_state_examples():
    gs = ground_state(QbhParams(1, 0.0, 0.0))
    assert gs.energy == pytest.approx(-2.0) and gs.sz == 0 and not gs.degenerate
    expected = TwoSiteState.from_terms({(-1, 1): 1, (1, -1): 1, (0, 0): -1})
    assert np.allclose(gs.state.amplitudes, expected.amplitudes)

    gs = ground_state(QbhParams(1, 0.0, 3.0))
    assert gs.energy == pytest.approx(-5.0) and gs.sz == 2
    assert gs.state.amplitude(1, 1) == pytest.approx(1.0)

    gs = ground_state(QbhParams(1, 0.0, 1.5))
    assert gs.sz == 1
    expected = TwoSiteState.from_terms({(0, 1): 1, (1, 0): -1})
    assert np.allclose(gs.state.amplitudes, expected.amplitudes)


def test_ground_state_tie_breaking():
    gs = ground_state(QbhParams(1, 0.0, 1.0))
    assert gs.sz == 0 and gs.degenerate and set(gs.degenerate_sectors) == {0, 1}
    # ferromagnetic multiplet at lambda = -1, h = 0: five-fold, smallest |S^z| wins
    gs = ground_state(QbhParams(-1, 0.0, 0.0))
    assert gs.sz == 0 and gs.multiplicity == 5


def test_theta0_ground_state_is_qubit_bell_state():
    gs = ground_state(QbhParams(1, -math.pi / 4))
    assert gs.multiplicity == 2 and gs.degenerate_sectors == (0,)
    expected = TwoSiteState.from_terms({(1, -1): 1, (-1, 1): 1})
    assert np.allclose(gs.state.amplitudes, expected.amplitudes, atol=1e-12)


def test_polarized_state_always_eigenstate():
    for lam, theta, h in [(1, 0.3, 0.1), (-1, -1.2, 2.0), (1, 1.4, 0.0)]:
        ham = build_qbh_hamiltonian(QbhParams(lam, theta, h))
        v = np.zeros(9)
        v[basis_index(1, 1)] = 1.0
        assert np.count_nonzero(ham @ v) == 1


@settings(max_examples=100, deadline=None)
@given(lams, thetas, st.floats(0.0, 3.0))
def test_qubit_singlet_parameter_independent(lam, theta, h):
    ref = TwoSiteState.from_terms({(0, 1): 1, (1, 0): -1}).amplitudes
    st1 = [s for e, sz, s in analytic_eigenstates(QbhParams(lam, theta, h)) if sz == 1]
    assert any(np.allclose(s.amplitudes, ref) for s in st1)


def test_mixing_sign_switches_at_theta0():
    below = sector_ground_state(QbhParams(1, -1.0)).state
    above = sector_ground_state(QbhParams(1, -0.5)).state
    assert below.amplitude(0, 0) > 0 and above.amplitude(0, 0) < 0
    assert below.amplitude(1, -1) > 0 and above.amplitude(1, -1) > 0


@settings(max_examples=200, deadline=None)
@given(lams, thetas)
def test_numeric_sector_ground_state_matches_closed_form(lam, theta):
    p = QbhParams(lam, theta)
    e, state, _ = numeric_sector_ground_state(build_qbh_hamiltonian(p), 0)
    ref = sector_ground_state(p, 0)
    assert e == pytest.approx(ref.energy, abs=1e-10 * max(1.0, abs(e)))
    assert abs(np.dot(state.amplitudes, ref.state.amplitudes)) == pytest.approx(1.0, abs=1e-9)


def test_numeric_sector_ground_state_resolves_mirror_degeneracy():
    _, state, mult = numeric_sector_ground_state(build_qbh_hamiltonian(QbhParams(1, -math.pi / 4)), 0)
    assert mult == 2
    assert np.allclose(state.amplitudes, state.mirrored().amplitudes, atol=1e-12)
    assert state.amplitude(0, 0) == pytest.approx(0.0, abs=1e-12)
