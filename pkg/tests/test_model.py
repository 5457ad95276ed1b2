import numpy as np
import pytest
from scipy.linalg import expm

from chiralpump.errors import ParameterError
from chiralpump.hilbert import StateLabel, index
from chiralpump.model import (
    TWO_PI,
    ModelParams,
    build_hamiltonian,
    build_reduced_hamiltonian,
    build_s_operator,
    build_transformed_hamiltonian,
    check_selective_condition,
    embed_reduced,
    frohlich_nakajima_transform,
    default_params,
    split_hamiltonian,
)

TINY = 1e-300
G_L, G_R, M_L, M_R, E = 0, 1, 2, 3, 4
WORKING = [0, 1, 4]
MEDIATE = [2, 3]


def conjugated(p):
    s = build_s_operator(p)
    return expm(-s) @ build_hamiltonian(p) @ expm(s)


def block_residual(p):
    """Residual restricted to the {1_L, 1_R, 3} and {2_L, 2_R} blocks."""
    r = conjugated(p) - build_transformed_hamiltonian(p)
    return max(np.max(np.abs(r[np.ix_(b, b)])) for b in (WORKING, MEDIATE))


def test_hamiltonian_entries(params):
    h = build_hamiltonian(params)
    assert h[G_L, E] == pytest.approx(TWO_PI * 0.05)
    assert h[G_R, E] == pytest.approx(-TWO_PI * 0.05)
    assert h[M_L, M_L] == h[M_R, M_R] == pytest.approx(TWO_PI * 20)
    assert h[G_L, M_L] == pytest.approx(TWO_PI)
    assert h[M_R, E] == pytest.approx(TWO_PI)
    assert h[G_L, G_R] == 0 and h[M_L, M_R] == 0 and h[E, E] == 0
    np.testing.assert_array_equal(h, h.conj().T)


def test_hamiltonian_vanishing_couplings():
    h = build_hamiltonian(ModelParams(delta=0.0, omega21=TINY, omega32=TINY, omega31=TINY))
    assert np.max(np.abs(h)) < 1e-299


def test_extended_hamiltonian_embeds_five_level_block(params):
    h7 = build_hamiltonian(params.replace(extended=True))
    assert h7.shape == (7, 7)
    np.testing.assert_array_equal(h7[:5, :5], build_hamiltonian(params))
    assert not np.any(h7[5:, :]) and not np.any(h7[:, 5:])


@pytest.mark.parametrize("field", ["omega21", "omega32", "omega31"])
@pytest.mark.parametrize("value", [0.0, -1.0])
def test_non_positive_coupling_rejected(params, field, value):
    with pytest.raises(ParameterError):
        params.replace(**{field: value})


def test_s_operator_anti_hermitian(params):
    s = build_s_operator(params)
    np.testing.assert_array_equal(s.conj().T, -s)


def test_s_operator_cancels_first_order(params):
    h0, h1, _ = split_hamiltonian(params)
    s = build_s_operator(params)
    assert np.max(np.abs(h0 @ s - s @ h0 + h1)) <= 1e-12


def test_s_operator_vanishes_without_far_detuned_couplings(params):
    s = build_s_operator(params.replace(omega21=TINY, omega32=TINY))
    assert np.max(np.abs(s)) < 1e-299


def test_s_operator_needs_detuning(params):
    with pytest.raises(ParameterError):
        build_s_operator(params.replace(delta=0.0))


def test_split_sums_to_hamiltonian(params):
    np.testing.assert_allclose(sum(split_hamiltonian(params)), build_hamiltonian(params), atol=1e-15)


def test_effective_parameters_at_selective_point(params):
    eff = frohlich_nakajima_transform(params)
    assert abs(eff.omega_tilde_L) < 1e-14
    assert eff.omega_tilde_R == pytest.approx(-2 * TWO_PI * 0.05, abs=1e-14)
    assert eff.lam == pytest.approx(-TWO_PI * 0.05, rel=1e-14)
    assert eff.lam_tilde == pytest.approx(-TWO_PI * 0.05, rel=1e-14)
    assert eff.delta_tilde == pytest.approx(TWO_PI * 20.1, rel=1e-14)


def test_effective_parameters_phase_pi(params):
    eff = frohlich_nakajima_transform(params.replace(phi=np.pi))
    assert abs(eff.omega_tilde_R) < 1e-14
    assert eff.omega_tilde_L == pytest.approx(-2 * TWO_PI * 0.05, abs=1e-14)


def test_effective_coupling_recomputable(params):
    p = params.replace(phi=0.7, omega31=TWO_PI * 0.3)
    eff = frohlich_nakajima_transform(p)
    for q, shift in (("L", 0.0), ("R", np.pi)):
        expected = p.omega31 * np.exp(1j * (p.phi + shift)) - p.omega32 * p.omega21 / p.delta
        assert eff.omega_tilde(q) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("phi", [0.0, np.pi])
@pytest.mark.parametrize("omega31_mhz", [0.01, 0.05, 0.1])
def test_one_coupling_suppressed_other_enhanced(params, phi, omega31_mhz):
    p = params.replace(phi=phi, omega21=TWO_PI * omega31_mhz * 20).bound()
    eff = frohlich_nakajima_transform(p)
    weak, strong = sorted((abs(eff.omega_tilde_L), abs(eff.omega_tilde_R)))
    assert weak < 1e-14
    assert strong == pytest.approx(2 * p.omega31, rel=1e-12)


def test_transformed_hamiltonian_matches_commutator_expansion(params):
    h0, h1, h2 = split_hamiltonian(params)
    s = build_s_operator(params)
    expansion = h0 + (h1 @ s - s @ h1) / 2 + h2
    np.testing.assert_allclose(build_transformed_hamiltonian(params), expansion, atol=1e-13)


def test_transformed_hamiltonian_entries(params):
    hp = build_transformed_hamiltonian(params)
    np.testing.assert_allclose(hp, hp.conj().T, atol=0)
    assert hp[M_L, M_R] == pytest.approx(TWO_PI * 0.05, rel=1e-13)


def test_transformed_hamiltonian_against_exact_conjugation(params):
    # third-order couplings between the blocks remain, O(omega^3 / delta^2)
    assert block_residual(params) <= TWO_PI * 0.01
    full = np.max(np.abs(conjugated(params) - build_transformed_hamiltonian(params)))
    assert full <= 2 * TWO_PI**3 / (TWO_PI * 20) ** 2 * 5


def test_residual_scaling_under_detuning_doubling():
    ratios, full_ratios = [], []
    prev = prev_full = None
    for delta in (20, 40, 80):
        p = default_params(delta=TWO_PI * delta).bound()
        res = block_residual(p)
        full = np.max(np.abs(conjugated(p) - build_transformed_hamiltonian(p)))
        if prev is not None:
            ratios.append(prev / res)
            full_ratios.append(prev_full / full)
        prev, prev_full = res, full
    assert all(7.0 <= r <= 9.0 for r in ratios), ratios
    assert all(r >= 3.5 for r in full_ratios), full_ratios


def test_reduced_hamiltonian_selective_form(params):
    h3 = build_reduced_hamiltonian(params)
    assert h3.shape == (3, 3)
    assert abs(h3[0, 2]) < 1e-14
    assert h3[1, 2] == pytest.approx(-2 * params.omega31, abs=1e-14)
    assert h3[2, 2] == pytest.approx(2 * (-TWO_PI * 0.05))


def test_left_ground_state_is_dark(params):
    h3 = build_reduced_hamiltonian(params)
    eff = frohlich_nakajima_transform(params)
    v = np.array([1, 0, 0], dtype=complex)
    np.testing.assert_allclose(h3 @ v, eff.lam_tilde * v, atol=1e-14)


def test_reduced_generic_phase_couples_both(params):
    h3 = build_reduced_hamiltonian(params.replace(phi=0.3))
    assert abs(h3[0, 2]) > 0.01 and abs(h3[1, 2]) > 0.01


def test_reduced_matches_transformed_working_block(params):
    p = params.replace(phi=0.4, omega31=TWO_PI * 0.08)
    hp = build_transformed_hamiltonian(p)
    np.testing.assert_allclose(build_reduced_hamiltonian(p), hp[np.ix_(WORKING, WORKING)], atol=1e-14)
    emb = embed_reduced(build_reduced_hamiltonian(p))
    assert emb[index(StateLabel.E, 5), index(StateLabel.E, 5)] == hp[E, E]
    assert not np.any(emb[MEDIATE, :])


def test_effective_operations_need_detuning(params):
    p = params.replace(delta=0.0)
    for fn in (frohlich_nakajima_transform, build_transformed_hamiltonian, build_reduced_hamiltonian):
        with pytest.raises(ParameterError, match="singular"):
            fn(p)


def test_regime_report_default_params(params):
    rep = check_selective_condition(params)
    assert rep.selective_condition_residuals[0] == 0
    assert rep.selective_condition_residuals[1] <= 1e-12
    assert rep.detuning_ratio_32 == pytest.approx(20)
    assert rep.detuning_ratio_21 == pytest.approx(20)
    assert rep.coupling_ratio == pytest.approx(20)
    assert rep.large_detuning_ok
    assert rep.rwa_warnings == []


def test_regime_report_coupling_residual(params):
    rep = check_selective_condition(params.replace(omega31=TWO_PI * 0.06))
    assert rep.coupling_residual == pytest.approx(TWO_PI * 0.01, rel=1e-9)
    assert rep.phase_residual == 0


def test_regime_report_phase_residual_wraps(params):
    assert check_selective_condition(params.replace(phi=2 * np.pi)).phase_residual < 1e-15
    assert check_selective_condition(params.replace(phi=np.pi)).phase_residual == pytest.approx(np.pi)


def test_regime_report_coupling_limit_warning(params):
    rep = check_selective_condition(params.replace(omega21=TWO_PI * 50))
    assert any("omega21" in w for w in rep.rwa_warnings)
    assert all(r >= 0 for r in rep.selective_condition_residuals)


def test_bound_reproduces_selective_condition():
    p = default_params(delta=TWO_PI * 137.0).bound()
    assert check_selective_condition(p).coupling_residual == 0
    assert abs(frohlich_nakajima_transform(p).omega_tilde_L) < 1e-15


def test_from_mhz():
    p = ModelParams.from_mhz(delta=20, omega21=1, omega32=1, omega31=0.05)
    assert p.delta == pytest.approx(2 * np.pi * 20)
    assert p.dim == 5 and p.replace(extended=True).dim == 7
