import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xyzchain.linalg import hermitian_eig
from xyzchain.model import (
    SIGMA_Z,
    Boundary,
    ChainParams,
    basis_state,
    build_hamiltonian,
    complement_bits,
    cyclic_shift,
    reconcile_three_qubit,
    shift_operator,
    site_operator,
    three_qubit_spectrum,
    two_qubit_spectrum,
)

coupling = st.floats(-3, 3, allow_nan=False)


def idx(label):
    return int(label, 2)


def test_isotropic_xx_exchange():
    # J = 1, gamma = 0 means J_x = J_y = 1.
    h = build_hamiltonian(ChainParams.from_j_gamma(2, 1.0, 0.0))
    assert h[idx("01"), idx("10")] == 1
    assert h[idx("01"), idx("01")] == 0
    assert not np.any(h[idx("00")]) and not np.any(h[:, idx("11")])


def test_two_qubit_matrix_elements():
    h = build_hamiltonian(ChainParams.from_j_gamma(2, 1.0, 0.3, 0.5, 1.1))
    assert h[idx("00"), idx("00")] == pytest.approx(1.35, abs=1e-15)
    assert h[idx("00"), idx("11")] == pytest.approx(0.3, abs=1e-15)
    assert h[idx("11"), idx("11")] == pytest.approx(0.25 - 1.1, abs=1e-15)


def test_two_site_is_open_and_periodic_rejected():
    assert ChainParams(2, 1, 1).boundary is Boundary.OPEN
    assert ChainParams(3, 1, 1).boundary is Boundary.PERIODIC
    with pytest.raises(ValueError):
        ChainParams(2, 1, 1, boundary="periodic")


@pytest.mark.parametrize("kwargs", [dict(n_sites=1, j_x=1, j_y=1), dict(n_sites=2, j_x=math.inf, j_y=1),
                                    dict(n_sites=2, j_x=1, j_y=math.nan)])
def test_invalid_params(kwargs):
    with pytest.raises(ValueError):
        ChainParams(**kwargs)


def test_derived_couplings():
    p = ChainParams.from_j_gamma(2, 1.5, 0.2)
    assert p.j_mean == pytest.approx(1.5)
    assert p.gamma == pytest.approx(0.2)
    assert p.j_gamma == pytest.approx(0.3)
    with pytest.raises(ZeroDivisionError):
        ChainParams(2, 1.0, -1.0).gamma
    assert ChainParams(2, 1.0, -1.0).j_gamma == 1.0


def test_evolve_keeps_other_coupling():
    p = ChainParams.from_j_gamma(2, 1.0, 0.3, 0.5, 1.1).evolve(gamma=0.6, b_field=2.0)
    assert (p.j_mean, p.j_z, p.b_field) == (1.0, 0.5, 2.0)
    assert p.gamma == pytest.approx(0.6)


def test_two_qubit_spectrum_examples():
    s = two_qubit_spectrum(ChainParams.from_j_gamma(2, 1.0, 0.3))
    assert s.eta == pytest.approx(0.3)
    assert sorted(s.energies) == pytest.approx([-1, -0.3, 0.3, 1])
    s = two_qubit_spectrum(ChainParams.from_j_gamma(2, 1.0, 0.3, 0.9, 1.1))
    assert s.eta == pytest.approx(1.140175, abs=1e-6)
    assert s.e_sigma_minus == pytest.approx(-0.690175, abs=1e-6)


def test_two_qubit_spectrum_even_in_field():
    a = two_qubit_spectrum(ChainParams.from_j_gamma(2, 1.0, 0.3, 0.9, 1.1)).energies
    b = two_qubit_spectrum(ChainParams.from_j_gamma(2, 1.0, 0.3, 0.9, -1.1)).energies
    assert np.array_equal(a, b)


def test_two_qubit_spectrum_matches_diagonalization():
    rng = np.random.default_rng(11)
    worst = 0.0
    for jx, jy, jz, b in rng.uniform(-3, 3, size=(1000, 4)):
        p = ChainParams(2, jx, jy, jz, b)
        numeric = hermitian_eig(build_hamiltonian(p)).eigenvalues
        worst = max(worst, np.max(np.abs(numeric - np.sort(two_qubit_spectrum(p).energies))))
    assert worst < 1e-10


@settings(max_examples=50, deadline=None)
@given(coupling, coupling, coupling, coupling)
def test_two_qubit_states_are_eigenvectors_of_flipped_field(jx, jy, jz, b):
    p = ChainParams(2, jx, jy, jz, b)
    spec = two_qubit_spectrum(p)
    h = build_hamiltonian(p)
    energies = {"psi_plus": spec.e_psi_plus, "psi_minus": spec.e_psi_minus,
                "sigma_plus": spec.e_sigma_plus, "sigma_minus": spec.e_sigma_minus}
    for name, v in spec.states.items():
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
        w = complement_bits(v)
        assert np.linalg.norm(h @ w - energies[name] * w) < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), coupling, coupling, coupling, coupling)
def test_hamiltonian_real_symmetric(n, jx, jy, jz, b):
    h = build_hamiltonian(ChainParams(n, jx, jy, jz, b))
    assert not np.any(h.imag)
    assert np.array_equal(h, h.T)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 6), coupling, coupling, coupling, coupling)
def test_ring_commutes_with_shift(n, jx, jy, jz, b):
    h = build_hamiltonian(ChainParams(n, jx, jy, jz, b))
    u = shift_operator(n)
    assert np.max(np.abs(h @ u - u @ h)) < 1e-12


def test_magnetization_conserved_only_without_anisotropy():
    n = 3
    mz = sum(site_operator(SIGMA_Z, k, n) for k in range(n))
    h0 = build_hamiltonian(ChainParams.from_j_gamma(n, 1.0, 0.0, 0.7, 0.4))
    h1 = build_hamiltonian(ChainParams.from_j_gamma(n, 1.0, 0.3, 0.7, 0.4))
    assert np.max(np.abs(h0 @ mz - mz @ h0)) < 1e-12
    assert np.max(np.abs(h1 @ mz - mz @ h1)) > 0.1


def test_cyclic_shift_examples():
    assert cyclic_shift(idx("110"), 3) == idx("011")
    assert cyclic_shift(0, 3) == 0
    for s in range(8):
        assert cyclic_shift(cyclic_shift(cyclic_shift(s, 3), 3), 3) == s
    with pytest.raises(ValueError):
        cyclic_shift(8, 3)


def test_basis_state_and_complement():
    v = basis_state("110", 3)
    assert v[6] == 1 and np.sum(np.abs(v)) == 1
    assert np.array_equal(complement_bits(v), basis_state("001", 3))


def test_three_qubit_eta():
    s = three_qubit_spectrum(ChainParams.from_j_gamma(3, 1.0, 0.3, 0.9, 1.0))
    assert s.eta_minus == pytest.approx(2.163331, abs=1e-6)
    assert s.eta_minus == pytest.approx(math.sqrt(4.68), abs=1e-15)


def test_three_qubit_vectors_normalized():
    s = three_qubit_spectrum(ChainParams.from_j_gamma(3, 1.0, 0.3, 0.9, 1.0))
    assert np.allclose(np.linalg.norm(s.vectors, axis=0), 1.0, atol=1e-12)


def test_three_qubit_gamma_zero_collapse():
    # J_z - 2B - J > 0: the anchor |000> alone.
    phi3 = three_qubit_spectrum(ChainParams.from_j_gamma(3, 1.0, 0.0, 0.9, -1.0)).vectors[:, 2]
    assert np.allclose(np.abs(phi3), np.abs(basis_state("000", 3)), atol=1e-12)
    # J_z - 2B - J < 0: the normalized orbit of |110>.
    phi3 = three_qubit_spectrum(ChainParams.from_j_gamma(3, 1.0, 0.0, 0.9, 1.0)).vectors[:, 2]
    orbit = sum(basis_state(lab, 3) for lab in ("110", "011", "101")) / math.sqrt(3)
    assert abs(abs(np.vdot(orbit, phi3)) - 1.0) < 1e-12


@settings(max_examples=40, deadline=None)
@given(coupling, coupling, coupling, coupling)
def test_three_qubit_energies_match(jx, jy, jz, b):
    rep = reconcile_three_qubit(ChainParams(3, jx, jy, jz, b))
    assert rep["energy_max_dev"] < 1e-10
    assert max(rep["residual_complemented"]) < 1e-10


def test_three_qubit_printed_labeling_needs_complement():
    rep = reconcile_three_qubit(ChainParams.from_j_gamma(3, 1.0, 0.3, 0.9, 1.0))
    assert max(rep["residual_as_printed"]) > 1.0
    assert rep["labelings"] == ["complement all bits (|0> is spin down; equivalently B -> -B)"]


def test_three_qubit_singular_normalization_handled():
    # J_z - 2B - J = 0 and J gamma = 0 makes the printed normalization vanish.
    p = ChainParams.from_j_gamma(3, 1.0, 0.0, 3.0, 1.0)
    s = three_qubit_spectrum(p)
    assert s.singular
    rep = reconcile_three_qubit(p)
    assert max(rep["residual_complemented"]) < 1e-10
