import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import (FD_E0, LINEAR_E0, SINGLE_MODE_E_BETA_01, dense_quadrature,
                     fd_linear_box, series)
from qhyst.wavefunction import (BoxObjective, BoxSpec, EnergyModel, FourierCoefficients,
                                apply_coefficient_delta, basis_matrix, energy, energy_terms,
                                evaluate, expectation_x, norm, to_grid)

BOX = BoxSpec()
finite = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


def coeff_strategy(max_m=8):
    return st.integers(1, max_m).flatmap(
        lambda m: arrays(np.float64, 2 * m, elements=finite)
        .filter(lambda v: np.sum(v * v) > 1e-6)
        .map(FourierCoefficients.from_vector))


# --- construction and validation ---

def test_box_rejects_bad_grid():
    with pytest.raises(ValueError):
        BoxSpec(0.5, 100)
    with pytest.raises(ValueError):
        BoxSpec(0.5, 32)
    with pytest.raises(ValueError):
        BoxSpec(-1.0)


def test_nodes_exactly_antisymmetric():
    x = BoxSpec(0.7, 256).nodes
    assert np.array_equal(x, -x[::-1])
    assert x[0] == -0.35 and x[-1] == 0.35


def test_zero_coefficients_rejected():
    with pytest.raises(ValueError):
        FourierCoefficients(np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError):
        FourierCoefficients(np.array([np.nan]), np.array([1.0]))


def test_model_validation():
    with pytest.raises(ValueError):
        EnergyModel(gamma=1.0)
    with pytest.raises(ValueError):
        EnergyModel(beta=0.1)


# --- wavefunction values ---

def test_lowest_mode_values():
    c = FourierCoefficients.single_mode(4)
    assert evaluate(c, BOX, 0.0) == pytest.approx(math.sqrt(2 / 0.5), abs=1e-14)
    assert abs(evaluate(c, BOX, 0.25)) < 1e-14
    assert abs(evaluate(c, BOX, -0.25)) < 1e-14


def test_evaluate_outside_box():
    with pytest.raises(ValueError):
        evaluate(FourierCoefficients.single_mode(2), BOX, 0.3)


@given(coeff_strategy())
def test_boundary_zero(c):
    assert np.all(np.abs(evaluate(c, BOX, [-0.25, 0.25])) < 1e-12)


@given(coeff_strategy(), st.floats(0.01, 100.0))
def test_scale_invariance(c, k):
    x = np.linspace(-0.2, 0.2, 7)
    np.testing.assert_allclose(evaluate(c.scaled(k), BOX, x), evaluate(c, BOX, x),
                               rtol=1e-12, atol=1e-12)


@given(coeff_strategy(20))
def test_norm_is_one(c):
    assert norm(to_grid(c, BOX)) == pytest.approx(1.0, abs=1e-9)


@given(coeff_strategy())
def test_mirror_reverses_grid(c):
    f, g = to_grid(c, BOX), to_grid(c.mirrored(), BOX)
    assert np.array_equal(g.values, f.values[::-1])


@given(coeff_strategy())
def test_expectation_parity_exact(c):
    assert expectation_x(to_grid(c.mirrored(), BOX)) == -expectation_x(to_grid(c, BOX))


def test_symmetric_state_centered():
    c = FourierCoefficients(np.array([1.0, 0.3, -0.2]), np.zeros(3))
    assert expectation_x(to_grid(c, BOX)) == 0.0


@pytest.mark.parametrize("seed", range(4))
def test_expectation_matches_dense_quadrature(seed):
    rng = np.random.default_rng(seed)
    a_n, b_n = rng.standard_normal(4), rng.standard_normal(4)
    psi = series(a_n, b_n, 0.5)
    ref = dense_quadrature(lambda x: x * psi(x) ** 2, 0.5) / 0.5
    got = expectation_x(to_grid(FourierCoefficients(a_n, b_n), BOX))
    assert got == pytest.approx(ref, abs=1e-6)


def test_basis_matches_series_oracle():
    b = basis_matrix(3, BOX)
    x = BOX.nodes
    np.testing.assert_allclose(b[1], np.cos(3 * math.pi * x / 0.5), atol=1e-12)
    np.testing.assert_allclose(b[4], np.sin(4 * math.pi * x / 0.5), atol=1e-12)


# --- energy functional ---

def test_linear_ground_state_energy():
    c = FourierCoefficients.single_mode(20)
    assert energy(c, EnergyModel(-1.0, 0.0)) == pytest.approx(LINEAR_E0, rel=1e-12)
    assert LINEAR_E0 == pytest.approx(FD_E0, rel=1e-6)


def test_single_mode_quartic_energy():
    c = FourierCoefficients.single_mode(20)
    assert energy(c, EnergyModel(-1.0, -0.1)) == pytest.approx(SINGLE_MODE_E_BETA_01, abs=1e-9)


def test_fd_oracle_reproduces_frozen_values():
    e0, x0 = fd_linear_box(0.0)
    assert e0 == pytest.approx(FD_E0, rel=1e-6)
    assert abs(x0) < 1e-12


@pytest.mark.parametrize("seed", range(3))
def test_kinetic_matches_finite_difference(seed):
    rng = np.random.default_rng(seed)
    a_n, b_n = rng.standard_normal(5), rng.standard_normal(5)
    psi = series(a_n, b_n, 0.5)
    x = np.linspace(-0.25, 0.25, 200_001)
    dpsi = np.gradient(psi(x), x)
    ref = np.trapezoid(dpsi**2, x)
    got = energy_terms(FourierCoefficients(a_n, b_n), EnergyModel(-1.0, 0.0))["kinetic"]
    assert got == pytest.approx(ref, rel=1e-4)


@given(coeff_strategy(), st.floats(-5.0, 0.0), st.floats(-300.0, 300.0))
def test_energy_mirror_covariance(c, beta, v0):
    m = EnergyModel(-1.0, beta, v0)
    e1 = energy(c, m)
    e2 = energy(c.mirrored(), m.with_v0(-v0))
    assert e2 == pytest.approx(e1, abs=1e-12 * max(1.0, abs(e1)))


@given(coeff_strategy(), st.floats(0.1, 10.0))
def test_energy_scale_invariant(c, k):
    m = EnergyModel(-1.0, -3.0, 40.0)
    assert energy(c.scaled(k), m) == pytest.approx(energy(c, m), rel=1e-12)


def test_objective_matches_energy():
    rng = np.random.default_rng(1)
    v = rng.standard_normal(40)
    m = EnergyModel(-1.0, -50.0, 30.0)
    assert BoxObjective(m, 20)(v) == energy(FourierCoefficients.from_vector(v), m)


# --- incremental grid updates ---

def test_single_update_matches_rebuild():
    rng = np.random.default_rng(2)
    c = FourierCoefficients.from_vector(rng.standard_normal(40))
    f = to_grid(c, BOX)
    f2, c2 = apply_coefficient_delta(f, c, 27, 0.37)
    ref = to_grid(c2, BOX)
    assert np.max(np.abs(f2.raw - ref.raw)) < 1e-10
    assert f2.norm_accum == pytest.approx(ref.norm_accum, abs=1e-12)


def test_many_updates_drift():
    rng = np.random.default_rng(3)
    c = FourierCoefficients.from_vector(rng.standard_normal(40))
    f = to_grid(c, BOX)
    for idx, d in zip(rng.integers(0, 40, 10_000), 0.05 * rng.standard_normal(10_000)):
        f, c = apply_coefficient_delta(f, c, int(idx), float(d))
    ref = to_grid(c, BOX)
    assert np.max(np.abs(f.raw - ref.raw)) < 1e-8
    assert abs(norm(f) - 1.0) < 1e-8


def test_update_rejects_all_zero():
    c = FourierCoefficients.single_mode(3)
    with pytest.raises(ValueError):
        apply_coefficient_delta(to_grid(c, BOX), c, 0, -1.0)


def test_zero_delta_is_identity():
    c = FourierCoefficients.single_mode(3)
    f = to_grid(c, BOX)
    f2, c2 = apply_coefficient_delta(f, c, 2, 0.0)
    assert f2 is f and c2 is c


def test_resized_pads_and_truncates():
    c = FourierCoefficients(np.array([1.0, 2.0]), np.array([3.0, 4.0]))
    big = c.resized(4)
    assert big.a_n.tolist() == [1, 2, 0, 0] and big.b_n.tolist() == [3, 4, 0, 0]
    assert energy(big, EnergyModel(-1, -2.0, 5.0)) == pytest.approx(
        energy(c, EnergyModel(-1, -2.0, 5.0)), rel=1e-12)
