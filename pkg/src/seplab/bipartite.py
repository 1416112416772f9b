"""Bipartite structure: embedded observables, joint measurements, Schmidt analysis.

A joint measurement pairs two PVMs whose projectors commute on a common
space; couple outcomes (x, y) get the product projector P_x Q_y.  The tensor
constructor embeds factor PVMs as P (x) 1 and 1 (x) Q, which makes the
commutation automatic, but any commuting pair of same-space PVMs works via
``commuting_joint``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from . import measurement
from .errors import DimensionMismatch, NonCommuting
from .hilbert import Operator, StateVector, commutator_norm, identity, tensor_op
from .measurement import Outcome, OutcomeLike, OutcomeSet, Pvm

COMMUTATION_TOL = 1e-10


@dataclass(frozen=True)
class BipartiteSpace:
    dim_a: int
    dim_b: int

    def __post_init__(self) -> None:
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("factor dimensions must be >= 1")

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b


def embed_left(m: Pvm, space: BipartiteSpace) -> Pvm:
    """Lift a factor-A PVM to the product space: projectors P_x (x) 1."""
    if m.dim != space.dim_a:
        raise DimensionMismatch(f"pvm dim {m.dim} != dim_a {space.dim_a}")
    eye_b = identity(space.dim_b)
    return Pvm(m.outcomes, tuple(tensor_op(p, eye_b) for p in m.projectors))


def embed_right(m: Pvm, space: BipartiteSpace) -> Pvm:
    """Lift a factor-B PVM to the product space: projectors 1 (x) P_y."""
    if m.dim != space.dim_b:
        raise DimensionMismatch(f"pvm dim {m.dim} != dim_b {space.dim_b}")
    eye_a = identity(space.dim_a)
    return Pvm(m.outcomes, tuple(tensor_op(eye_a, p) for p in m.projectors))


@dataclass(frozen=True, eq=False)
class JointMeasurement:
    """Two one-side measurements executed together; outcomes are couples.

    ``pvm_a`` and ``pvm_b`` are the factor PVMs when built through
    ``joint_measurement`` (``space`` set), or same-space commuting PVMs when
    built through ``commuting_joint`` (``space`` is None).  ``side_a`` and
    ``side_b`` always act on the full space.
    """

    pvm_a: Pvm
    pvm_b: Pvm
    space: BipartiteSpace | None

    @cached_property
    def side_a(self) -> Pvm:
        return embed_left(self.pvm_a, self.space) if self.space else self.pvm_a

    @cached_property
    def side_b(self) -> Pvm:
        return embed_right(self.pvm_b, self.space) if self.space else self.pvm_b

    @property
    def dim(self) -> int:
        return self.space.dim if self.space else self.pvm_a.dim

    @property
    def couples(self) -> tuple[tuple[Outcome, Outcome], ...]:
        return tuple((x, y) for x in self.pvm_a.outcomes for y in self.pvm_b.outcomes)

    def projector(self, x: OutcomeLike, y: OutcomeLike) -> Operator:
        px = self.side_a.projector_for(x).entries
        qy = self.side_b.projector_for(y).entries
        return Operator(px @ qy)

    def coarse(self, subset_a: Iterable[OutcomeLike], subset_b: Iterable[OutcomeLike]) -> Operator:
        pa = measurement.coarse_projector(self.side_a, subset_a).entries
        pb = measurement.coarse_projector(self.side_b, subset_b).entries
        return Operator(pa @ pb)

    def probability(self, psi: StateVector, x: OutcomeLike, y: OutcomeLike) -> float:
        if psi.dim != self.dim:
            raise DimensionMismatch(f"state dim {psi.dim}, joint dim {self.dim}")
        v = self.projector(x, y).entries @ psi.amplitudes
        return float(np.real(np.vdot(v, v)))

    def probability_table(self, psi: StateVector) -> dict[tuple[str, str], float]:
        return {
            (x.label, y.label): self.probability(psi, x, y) for x, y in self.couples
        }

    def as_pvm(self) -> Pvm:
        """Flatten into one PVM over couple outcomes labeled ``x|y``; the Pvm
        constructor re-checks orthogonality and completeness of the family."""
        outcomes = OutcomeSet(
            tuple(Outcome(f"{x.label}|{y.label}") for x, y in self.couples)
        )
        projectors = tuple(self.projector(x, y) for x, y in self.couples)
        return Pvm(outcomes, projectors)


def joint_measurement(m_a: Pvm, m_b: Pvm) -> JointMeasurement:
    """Tensor-form joint measurement of two factor PVMs."""
    return JointMeasurement(m_a, m_b, BipartiteSpace(m_a.dim, m_b.dim))


def commuting_joint(m_a: Pvm, m_b: Pvm) -> JointMeasurement:
    """Joint measurement from two PVMs on one common space.

    Every projector of one side must commute with every projector of the
    other within ``COMMUTATION_TOL``; otherwise the couple projectors would
    not form a PVM.
    """
    if m_a.dim != m_b.dim:
        raise DimensionMismatch(f"dims {m_a.dim} and {m_b.dim}")
    worst = max(
        commutator_norm(p, q) for p in m_a.projectors for q in m_b.projectors
    )
    if worst > COMMUTATION_TOL:
        raise NonCommuting(f"max projector commutator {worst:.3e}")
    return JointMeasurement(m_a, m_b, None)


def schmidt(psi: StateVector, space: BipartiteSpace) -> list[tuple[float, StateVector, StateVector]]:
    """Schmidt triples (coefficient, left vector, right vector), descending.

    Reshapes the amplitudes into a dim_a x dim_b matrix and takes its SVD;
    coefficients are the singular values, so sum of squares equals the
    squared norm of the state.
    """
    if psi.dim != space.dim:
        raise DimensionMismatch(f"state dim {psi.dim}, space dim {space.dim}")
    matrix = psi.amplitudes.reshape(space.dim_a, space.dim_b)
    u, s, vh = np.linalg.svd(matrix, full_matrices=False)
    return [
        (float(s[k]), StateVector(u[:, k]), StateVector(vh[k, :]))
        for k in range(len(s))
    ]


def is_product(psi: StateVector, space: BipartiteSpace, tol: float = 1e-10) -> bool:
    """True when exactly one Schmidt coefficient exceeds ``tol``."""
    coeffs = [c for c, _, _ in schmidt(psi, space)]
    return sum(1 for c in coeffs if c > tol) == 1
