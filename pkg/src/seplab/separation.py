"""Separability of joint measurements, witness states, and a cloning obstruction.

Two measurements executed together count as separate when every couple of
individually possible outcomes stays jointly possible.  For any commuting
projector pair (P_A, P_B) whose subspaces ``P_A (1-P_B) H`` and
``(1-P_A) P_B H`` are both nonzero, the superposition

    psi = (phi + chi) / sqrt(2),   phi in P_A (1-P_B) H,  chi in (1-P_A) P_B H

has both outcomes possible on each side while the couples (+,+) and (-,-)
carry zero probability, so the verdict is never "separate".  This module
builds such witnesses, checks the defining identities numerically, and
renders the verdict for arbitrary states and joint measurements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .bipartite import JointMeasurement, commuting_joint
from .errors import DimensionMismatch, EmptySubspace, NonCommuting
from .hilbert import Operator, StateVector, commutator_norm
from .measurement import POSSIBILITY_TOL, binary_pvm, possible_outcomes

WITNESS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class AertsWitness:
    """Witness tuple for non-separability of a commuting projector pair.

    ``subset_a`` / ``subset_b`` name the outcome subsets the two projectors
    coarse-grain over ("+" of the binary split unless the caller says
    otherwise).  ``residuals`` holds the named magnitudes computed by
    :func:`verify_witness`; all of them must stay below ``WITNESS_TOL``.
    """

    subset_a: tuple[str, ...]
    subset_b: tuple[str, ...]
    phi: StateVector
    chi: StateVector
    psi: StateVector
    residuals: Mapping[str, float]


@dataclass(frozen=True)
class SeparationVerdict:
    """Outcome of the separate-measurements check on one state.

    ``missing_couples`` lists couples that are possible marginally on each
    side but carry joint probability at most ``tol``; the measurements are
    separate on this state iff that list is empty.
    """

    separate: bool
    possible_a: tuple[str, ...]
    possible_b: tuple[str, ...]
    missing_couples: tuple[tuple[str, str], ...]
    probabilities: dict[tuple[str, str], float]
    tol: float


@dataclass(frozen=True)
class CloningCertificate:
    """Obstruction to cloning a state pair with one unitary machine.

    A unitary copier preserves inner products, which forces the overlap
    ``c = |<psi|phi>|`` to satisfy ``c = c^2``, i.e. the pair must be
    identical or orthogonal.  A positive ``defect = |c - c^2|`` therefore
    certifies that no such machine exists for the pair.
    """

    overlap: float
    defect: float
    impossible: bool


def _canonical_phase(amps: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude entry is real positive."""
    k = int(np.argmax(np.abs(amps)))
    pivot = amps[k]
    return amps * (pivot.conjugate() / abs(pivot))


def _range_basis(product: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the range of a near-projector matrix."""
    herm = (product + product.conj().T) / 2.0
    values, vectors = np.linalg.eigh(herm)
    keep = values > 0.5
    return vectors[:, keep]


def _random_unit_in(basis: np.ndarray, rng: np.random.Generator) -> StateVector:
    """Haar-random unit vector in the span of the basis columns, with the
    global phase fixed canonically so repeated runs are comparable."""
    rank = basis.shape[1]
    coeffs = rng.normal(size=rank) + 1j * rng.normal(size=rank)
    v = basis @ coeffs
    v = v / np.linalg.norm(v)
    return StateVector(_canonical_phase(v))


def construct_witness(
    p_a: Operator,
    p_b: Operator,
    rng: np.random.Generator,
    subset_a: tuple[str, ...] = ("+",),
    subset_b: tuple[str, ...] = ("+",),
) -> AertsWitness:
    """Build a witness state for the commuting projector pair (p_a, p_b).

    phi is drawn Haar-uniformly inside ``p_a (1-p_b) H`` and chi inside
    ``(1-p_a) p_b H`` (deterministically from ``rng``, phases canonical),
    then ``psi = (phi + chi)/sqrt(2)``.  Raises :class:`NonCommuting` when
    the projectors fail to commute within tolerance and
    :class:`EmptySubspace` when either subspace has rank zero, in which case
    this pair admits no witness.
    """
    for name, p in (("p_a", p_a), ("p_b", p_b)):
        if not p.is_projector():
            raise ValueError(f"{name} fails the projector check")
    if p_a.dim != p_b.dim:
        raise DimensionMismatch(f"dims {p_a.dim} and {p_b.dim}")
    comm = commutator_norm(p_a, p_b)
    if comm > WITNESS_TOL:
        raise NonCommuting(f"[p_a, p_b] max entry {comm:.3e}")

    eye = np.eye(p_a.dim)
    sub_phi = p_a.entries @ (eye - p_b.entries)
    sub_chi = (eye - p_a.entries) @ p_b.entries
    basis_phi = _range_basis(sub_phi)
    basis_chi = _range_basis(sub_chi)
    if basis_phi.shape[1] == 0:
        raise EmptySubspace("p_a (1 - p_b) H has rank zero")
    if basis_chi.shape[1] == 0:
        raise EmptySubspace("(1 - p_a) p_b H has rank zero")

    phi = _random_unit_in(basis_phi, rng)
    chi = _random_unit_in(basis_chi, rng)
    psi = StateVector((phi.amplitudes + chi.amplitudes) / np.sqrt(2.0))
    witness = AertsWitness(subset_a, subset_b, phi, chi, psi, {})
    residuals = verify_witness(witness, p_a, p_b)
    return AertsWitness(subset_a, subset_b, phi, chi, psi, residuals)


def verify_witness(w: AertsWitness, p_a: Operator, p_b: Operator) -> dict[str, float]:
    """Residual report for the witness identities; every entry must be ~0.

    The halves: applying p_a (or the complement of p_b) to psi returns
    phi/sqrt(2), and symmetrically chi/sqrt(2).  The crosses: the couple
    projectors for (+,-) and (-,+) return the same halves.  The blocked
    couples: the projectors for (+,+) and (-,-) annihilate psi.
    """
    eye = np.eye(p_a.dim)
    pa, pb = p_a.entries, p_b.entries
    ca, cb = eye - pa, eye - pb
    phi, chi, psi = w.phi.amplitudes, w.chi.amplitudes, w.psi.amplitudes
    root2 = np.sqrt(2.0)

    def dist(vec: np.ndarray, target: np.ndarray) -> float:
        return float(np.linalg.norm(vec - target))

    half_phi = phi / root2
    half_chi = chi / root2
    return {
        "phi_membership": dist(pa @ (cb @ phi), phi),
        "chi_membership": dist(ca @ (pb @ chi), chi),
        "phi_chi_overlap": float(abs(np.vdot(phi, chi))),
        "psi_norm": float(abs(np.linalg.norm(psi) - 1.0)),
        "a_half": dist(pa @ psi, half_phi),
        "a_complement_half": dist(ca @ psi, half_chi),
        "b_half": dist(pb @ psi, half_chi),
        "b_complement_half": dist(cb @ psi, half_phi),
        "cross_a_notb": dist(pa @ (cb @ psi), half_phi),
        "cross_nota_b": dist(ca @ (pb @ psi), half_chi),
        "blocked_both": float(np.linalg.norm(pa @ (pb @ psi))),
        "blocked_neither": float(np.linalg.norm(ca @ (cb @ psi))),
    }


def witness_joint(p_a: Operator, p_b: Operator) -> JointMeasurement:
    """Binary coarse-grained joint measurement {p_a, 1-p_a} x {p_b, 1-p_b}."""
    return commuting_joint(binary_pvm(p_a), binary_pvm(p_b))


def separation_verdict(
    joint: JointMeasurement, psi: StateVector, tol: float = POSSIBILITY_TOL
) -> SeparationVerdict:
    """Decide whether the two sides of ``joint`` act as separate measurements
    on ``psi``: every couple of marginally possible outcomes must be jointly
    possible above ``tol``."""
    if psi.dim != joint.dim:
        raise DimensionMismatch(f"state dim {psi.dim}, joint dim {joint.dim}")
    poss_a = tuple(o.label for o in possible_outcomes(joint.side_a, psi, tol))
    poss_b = tuple(o.label for o in possible_outcomes(joint.side_b, psi, tol))
    table = joint.probability_table(psi)
    missing = tuple(
        (x, y) for x in poss_a for y in poss_b if table[(x, y)] <= tol
    )
    return SeparationVerdict(
        separate=not missing,
        possible_a=poss_a,
        possible_b=poss_b,
        missing_couples=missing,
        probabilities=table,
        tol=tol,
    )


def no_cloning_witness(psi: StateVector, phi: StateVector) -> CloningCertificate:
    """Certificate for the pair (psi, phi): cloning both with one unitary
    machine is impossible iff the overlap defect ``|c - c^2|`` is positive."""
    if psi.dim != phi.dim:
        raise DimensionMismatch(f"dims {psi.dim} and {phi.dim}")
    for name, v in (("psi", psi), ("phi", phi)):
        if abs(v.norm() - 1.0) > 1e-9:
            raise ValueError(f"{name} must be normalized")
    c = float(abs(np.vdot(psi.amplitudes, phi.amplitudes)))
    defect = abs(c - c * c)
    return CloningCertificate(overlap=c, defect=defect, impossible=defect > 1e-10)
