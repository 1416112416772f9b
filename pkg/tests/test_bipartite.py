import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_hermitian, random_state, schmidt_coefficients_2x2
from seplab.bipartite import (
    BipartiteSpace,
    commuting_joint,
    embed_left,
    embed_right,
    is_product,
    joint_measurement,
    schmidt,
)
from seplab.errors import DimensionMismatch, NonCommuting
from seplab.hilbert import (
    SIGMA_X,
    SIGMA_Z,
    Operator,
    StateVector,
    basis_vector,
    commutator_norm,
    tensor_vec,
)
from seplab.measurement import born_probability, coarse_projector, pvm_from_operator

Z_PVM = pvm_from_operator(SIGMA_Z)
X_PVM = pvm_from_operator(SIGMA_X)
QUBIT_PAIR = BipartiteSpace(2, 2)
ROOT_HALF = 1 / math.sqrt(2)


def two_qubit(amplitudes) -> StateVector:
    return StateVector(np.array(amplitudes, dtype=complex))


def test_embed_left_right_projectors():
    left = embed_left(Z_PVM, QUBIT_PAIR)
    np.testing.assert_allclose(
        left.projector_for("+1").entries, np.diag([1, 1, 0, 0]), atol=1e-12
    )
    right = embed_right(Z_PVM, QUBIT_PAIR)
    np.testing.assert_allclose(
        right.projector_for("+1").entries, np.diag([1, 0, 1, 0]), atol=1e-12
    )


def test_embedded_sides_commute():
    left = embed_left(Z_PVM, QUBIT_PAIR)
    right = embed_right(X_PVM, QUBIT_PAIR)
    for p in left.projectors:
        for q in right.projectors:
            assert commutator_norm(p, q) <= 1e-12


def test_embed_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        embed_left(Z_PVM, BipartiteSpace(3, 2))


def test_joint_measurement_z_z():
    joint = joint_measurement(Z_PVM, Z_PVM)
    assert len(joint.couples) == 4
    for x, y in joint.couples:
        proj = joint.projector(x, y)
        assert proj.is_projector()
        assert np.count_nonzero(np.abs(np.diag(proj.entries)) > 0.5) == 1
    np.testing.assert_allclose(
        joint.coarse(["+1"], ["-1"]).entries, np.diag([0, 1, 0, 0]), atol=1e-12
    )


def test_commuting_joint_rejects_non_commuting_sides():
    with pytest.raises(NonCommuting):
        commuting_joint(Z_PVM, X_PVM)


def test_schmidt_product_state():
    triples = schmidt(tensor_vec(basis_vector(2, 0), basis_vector(2, 1)), QUBIT_PAIR)
    coeffs = [c for c, _, _ in triples]
    assert coeffs[0] == pytest.approx(1.0, abs=1e-12)
    assert all(c <= 1e-12 for c in coeffs[1:])
    assert is_product(tensor_vec(basis_vector(2, 0), basis_vector(2, 1)), QUBIT_PAIR)


@pytest.mark.parametrize(
    "amplitudes",
    [
        [0, ROOT_HALF, ROOT_HALF, 0],
        [0, ROOT_HALF, -ROOT_HALF, 0],  # singlet
    ],
)
def test_schmidt_maximally_entangled_pairs(amplitudes):
    psi = two_qubit(amplitudes)
    expected = schmidt_coefficients_2x2(psi.amplitudes)
    coeffs = [c for c, _, _ in schmidt(psi, QUBIT_PAIR)]
    assert coeffs == pytest.approx(expected, abs=1e-12)
    assert coeffs == pytest.approx([ROOT_HALF, ROOT_HALF], abs=1e-12)
    assert not is_product(psi, QUBIT_PAIR)


@given(seed=st.integers(0, 10_000), da=st.integers(2, 4), db=st.integers(2, 4))
@settings(max_examples=40, deadline=None)
def test_schmidt_reconstructs_the_state(seed, da, db):
    rng = np.random.default_rng(seed)
    space = BipartiteSpace(da, db)
    psi = StateVector(random_state(space.dim, rng))
    triples = schmidt(psi, space)
    coeffs = [c for c, _, _ in triples]
    assert all(b <= a for a, b in zip(coeffs, coeffs[1:]))
    assert sum(c * c for c in coeffs) == pytest.approx(1.0, abs=1e-10)
    rebuilt = np.zeros(space.dim, dtype=complex)
    for c, left, right in triples:
        rebuilt += c * np.kron(left.amplitudes, right.amplitudes)
    assert np.linalg.norm(rebuilt - psi.amplitudes) <= 1e-9


@given(seed=st.integers(0, 10_000), da=st.integers(2, 4), db=st.integers(2, 4))
@settings(max_examples=30, deadline=None)
def test_coarse_factorizes_over_sides(seed, da, db):
    rng = np.random.default_rng(seed)
    ma = pvm_from_operator(Operator(random_hermitian(da, rng)))
    mb = pvm_from_operator(Operator(random_hermitian(db, rng)))
    joint = joint_measurement(ma, mb)
    ka = int(rng.integers(0, len(ma.outcomes) + 1))
    kb = int(rng.integers(0, len(mb.outcomes) + 1))
    subset_a = ma.outcomes.labels[:ka]
    subset_b = mb.outcomes.labels[:kb]
    # summing couple projectors over I x J must equal the product of the
    # one-side coarse projectors
    summed = np.zeros((joint.dim, joint.dim), dtype=complex)
    for x in subset_a:
        for y in subset_b:
            summed += joint.projector(x, y).entries
    pa = coarse_projector(joint.side_a, subset_a).entries
    pb = coarse_projector(joint.side_b, subset_b).entries
    assert np.abs(summed - pa @ pb).max() <= 1e-10
    assert np.abs(joint.coarse(subset_a, subset_b).entries - summed).max() <= 1e-10


def test_joint_flattens_to_a_valid_pvm():
    joint = joint_measurement(Z_PVM, X_PVM)
    flat = joint.as_pvm()  # Pvm construction re-validates the couple family
    assert flat.outcomes.labels == ("-1|-1", "-1|+1", "+1|-1", "+1|+1")
    from seplab.bipartite import commuting_joint

    flat_commuting = commuting_joint(
        embed_left(Z_PVM, QUBIT_PAIR), embed_right(X_PVM, QUBIT_PAIR)
    ).as_pvm()
    assert len(flat_commuting.outcomes) == 4


@given(seed=st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_marginal_consistency(seed):
    rng = np.random.default_rng(seed)
    da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
    ma = pvm_from_operator(Operator(random_hermitian(da, rng)))
    mb = pvm_from_operator(Operator(random_hermitian(db, rng)))
    joint = joint_measurement(ma, mb)
    psi = StateVector(random_state(da * db, rng))
    for x in ma.outcomes:
        total = sum(joint.probability(psi, x, y) for y in mb.outcomes)
        assert total == pytest.approx(born_probability(joint.side_a, psi, x), abs=1e-10)
    for y in mb.outcomes:
        total = sum(joint.probability(psi, x, y) for x in ma.outcomes)
        assert total == pytest.approx(born_probability(joint.side_b, psi, y), abs=1e-10)


@given(seed=st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_product_states_factorize(seed):
    rng = np.random.default_rng(seed)
    da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
    ma = pvm_from_operator(Operator(random_hermitian(da, rng)))
    mb = pvm_from_operator(Operator(random_hermitian(db, rng)))
    joint = joint_measurement(ma, mb)
    phi_a = StateVector(random_state(da, rng))
    phi_b = StateVector(random_state(db, rng))
    psi = tensor_vec(phi_a, phi_b)
    for x in ma.outcomes:
        for y in mb.outcomes:
            expected = born_probability(ma, phi_a, x) * born_probability(mb, phi_b, y)
            assert joint.probability(psi, x, y) == pytest.approx(expected, abs=1e-10)
