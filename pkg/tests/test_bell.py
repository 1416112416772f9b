import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import eig2_hermitian, lhv_chsh_from_table, random_state
from seplab import bell
from seplab.bell import (
    DEFAULT_ANGLES_A,
    DEFAULT_ANGLES_B,
    chsh_exact,
    chsh_sampled,
    expectation,
    no_signaling_residual,
    quantum_coincidence_model,
    spin_observable,
)
from seplab.classical_models import rod_dice_model
from seplab.errors import BadSpectrum, MissingDistribution
from seplab.hilbert import SIGMA_X, SIGMA_Z, Operator, StateVector

ROOT_HALF = 1 / math.sqrt(2)
SINGLET = StateVector(np.array([0, ROOT_HALF, -ROOT_HALF, 0]))
ZERO_ZERO = StateVector(np.array([1, 0, 0, 0]))


def test_expectation_examples():
    assert expectation(SINGLET, SIGMA_Z, SIGMA_Z) == pytest.approx(-1.0, abs=1e-12)
    assert expectation(SINGLET, SIGMA_Z, SIGMA_X) == pytest.approx(0.0, abs=1e-12)
    assert expectation(ZERO_ZERO, SIGMA_Z, SIGMA_Z) == pytest.approx(1.0, abs=1e-12)


def test_expectation_rejects_bad_spectrum():
    with pytest.raises(BadSpectrum):
        expectation(SINGLET, Operator(np.diag([2.0, -1.0])), SIGMA_Z)


def test_spin_observable_axes_and_spectrum():
    np.testing.assert_allclose(spin_observable(0.0).entries, SIGMA_Z.entries, atol=1e-15)
    np.testing.assert_allclose(
        spin_observable(math.pi / 2).entries, SIGMA_X.entries, atol=1e-15
    )
    diagonal = spin_observable(math.pi / 4)
    values = [v for v, _ in eig2_hermitian(diagonal.entries)]
    assert values == pytest.approx([-1.0, 1.0], abs=1e-12)


def singlet_correlation(theta_a: float, theta_b: float) -> float:
    """Closed-form oracle for the singlet: E = -cos(theta_a - theta_b)."""
    return -math.cos(theta_a - theta_b)


def test_chsh_exact_singlet_at_default_angles():
    model = quantum_coincidence_model(SINGLET, DEFAULT_ANGLES_A, DEFAULT_ANGLES_B)
    report = chsh_exact(model)
    for i, ta in enumerate(DEFAULT_ANGLES_A):
        for j, tb in enumerate(DEFAULT_ANGLES_B):
            assert report.e_table[i][j] == pytest.approx(
                singlet_correlation(ta, tb), abs=1e-12
            )
            assert abs(report.e_table[i][j]) <= 1.0 + 1e-9
    assert abs(report.s) == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-12)
    assert report.violates_classical and not report.violates_tsirelson


def test_chsh_exact_e_table_at_legacy_b_angles():
    # with B in {pi/4, 3pi/4} every correlation is -sqrt(2)/2 except E(1,2)
    model = quantum_coincidence_model(
        SINGLET, (0.0, math.pi / 2), (math.pi / 4, 3 * math.pi / 4)
    )
    e = chsh_exact(model).e_table
    assert e[0][0] == pytest.approx(-ROOT_HALF, abs=1e-12)
    assert e[0][1] == pytest.approx(+ROOT_HALF, abs=1e-12)
    assert e[1][0] == pytest.approx(-ROOT_HALF, abs=1e-12)
    assert e[1][1] == pytest.approx(-ROOT_HALF, abs=1e-12)


def test_chsh_exact_needs_distributions():
    class NoTable(bell.CoincidenceModel):
        settings_a = (0, 1)
        settings_b = (0, 1)

        def sample(self, i, j, rng):
            return (1, 1)

    with pytest.raises(MissingDistribution):
        chsh_exact(NoTable())


def test_chsh_needs_two_settings_per_side():
    model = quantum_coincidence_model(SINGLET, (0.0,), (0.0,))
    with pytest.raises(ValueError):
        chsh_exact(model)
    with pytest.raises(ValueError):
        chsh_sampled(model, 10, np.random.default_rng(0))


def test_chsh_exact_rod_dice_through_uniform_interface():
    report = chsh_exact(rod_dice_model())
    assert report.s == pytest.approx(4.0, abs=1e-12)
    assert report.violates_tsirelson


def test_quantum_model_aligned_singlet_distribution():
    model = quantum_coincidence_model(SINGLET, (0.3, 1.0), (0.3, 1.0))
    dist = model.exact_distribution(0, 0)
    assert dist[(+1, +1)] == pytest.approx(0.0, abs=1e-12)
    assert dist[(-1, -1)] == pytest.approx(0.0, abs=1e-12)
    assert dist[(+1, -1)] == pytest.approx(0.5, abs=1e-12)
    assert dist[(-1, +1)] == pytest.approx(0.5, abs=1e-12)


def test_quantum_model_product_eigenstate():
    model = quantum_coincidence_model(ZERO_ZERO, (0.0, 1.0), (0.0, 1.0))
    dist = model.exact_distribution(0, 0)
    assert dist[(+1, +1)] == pytest.approx(1.0, abs=1e-12)


def reduced_density_marginal(psi: np.ndarray, side: int, theta: float) -> dict[int, float]:
    """Partial-trace oracle: marginal outcome probabilities from the reduced
    density matrix, independent of the joint-PVM path."""
    m = psi.reshape(2, 2)
    rho = m @ m.conj().T if side == 0 else m.T @ m.conj()
    pairs = eig2_hermitian(
        math.cos(theta) * np.diag([1.0, -1.0]) + math.sin(theta) * np.array([[0, 1], [1, 0]])
    )
    out = {}
    for value, vec in pairs:
        out[int(round(value))] = float(np.real(vec.conj() @ rho @ vec))
    return out


def test_singlet_marginals_uniform_at_every_setting():
    model = quantum_coincidence_model(SINGLET, (0.0, 0.7), (1.1, 2.3))
    for i in range(2):
        for j in range(2):
            dist = model.exact_distribution(i, j)
            for a in (+1, -1):
                marg = sum(p for (x, _), p in dist.items() if x == a)
                oracle = reduced_density_marginal(
                    SINGLET.amplitudes, 0, model.settings_a[i]
                )[a]
                assert marg == pytest.approx(0.5, abs=1e-12)
                assert marg == pytest.approx(oracle, abs=1e-12)


def test_no_signaling_exact_quantum_and_rod_dice():
    model = quantum_coincidence_model(SINGLET, DEFAULT_ANGLES_A, DEFAULT_ANGLES_B)
    assert no_signaling_residual(model) <= 1e-12
    assert no_signaling_residual(rod_dice_model()) <= 1e-12


def test_chsh_sampled_rod_dice_is_exact():
    report = chsh_sampled(rod_dice_model(), 10_000, np.random.default_rng(5))
    assert report.s == pytest.approx(4.0, abs=0.0)
    assert all(se == 0.0 for row in report.stderr for se in row)


def test_chsh_sampled_reproducible_even_at_one_sample():
    model = quantum_coincidence_model(SINGLET, DEFAULT_ANGLES_A, DEFAULT_ANGLES_B)
    a = chsh_sampled(model, 1, np.random.default_rng(3))
    b = chsh_sampled(model, 1, np.random.default_rng(3))
    assert a.e_table == b.e_table
    assert a.samples_per_cell == 1


def test_chsh_sampled_close_to_exact_for_singlet():
    model = quantum_coincidence_model(SINGLET, DEFAULT_ANGLES_A, DEFAULT_ANGLES_B)
    report = chsh_sampled(model, 20_000, np.random.default_rng(17))
    assert abs(abs(report.s) - 2.0 * math.sqrt(2.0)) < 0.05


@given(seed=st.integers(0, 100_000), n_hidden=st.integers(1, 12))
@settings(max_examples=60, deadline=None)
def test_finite_hidden_variable_models_never_beat_classical_bound(seed, n_hidden):
    rng = np.random.default_rng(seed)
    a_resp = rng.choice([-1, 1], size=(2, n_hidden))
    b_resp = rng.choice([-1, 1], size=(2, n_hidden))
    weights = rng.random(n_hidden)
    weights = weights / weights.sum()
    s = lhv_chsh_from_table(a_resp, b_resp, weights)
    assert abs(s) <= 2.0 + 1e-9


@given(seed=st.integers(0, 100_000))
@settings(max_examples=40, deadline=None)
def test_quantum_chsh_never_beats_tsirelson(seed):
    rng = np.random.default_rng(seed)
    psi = StateVector(random_state(4, rng))
    angles = rng.uniform(0, 2 * math.pi, size=4)
    model = quantum_coincidence_model(psi, angles[:2], angles[2:])
    report = chsh_exact(model)
    assert abs(report.s) <= 2.0 * math.sqrt(2.0) + 1e-9


def test_sampled_cells_track_exact_within_error_budget():
    # 4 cells x 50 seeded runs = 200 checks; the 4-sigma budget allows 1%
    model = quantum_coincidence_model(SINGLET, DEFAULT_ANGLES_A, DEFAULT_ANGLES_B)
    exact = chsh_exact(model)
    n = 500
    checks = ok = 0
    for seed in range(50):
        sampled = chsh_sampled(model, n, np.random.default_rng(seed))
        for i in range(2):
            for j in range(2):
                se = max(sampled.stderr[i][j], 1e-12)
                checks += 1
                ok += int(abs(sampled.e_table[i][j] - exact.e_table[i][j]) < 4 * se)
    assert ok / checks >= 0.99
