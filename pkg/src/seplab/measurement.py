"""Projection-valued measures and Born-rule measurement mechanics.

A ``Pvm`` assigns one orthogonal projector per outcome, with the family
summing to the identity.  Outcome labels optionally carry a real value so
that +/-1-valued observables support correlation arithmetic downstream.
Sampling takes an explicit ``numpy.random.Generator``; there is no hidden
global randomness anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from . import hilbert
from .errors import DimensionMismatch, ImpossibleOutcome, UnknownOutcome
from .hilbert import Operator, StateVector

# Born probabilities below this threshold count as "impossible outcome".
POSSIBILITY_TOL = 1e-10

ORTHOGONALITY_TOL = 1e-10
COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True)
class Outcome:
    """Measurement outcome: a printable label plus an optional real value."""

    label: str
    value: float | None = None

    def __str__(self) -> str:
        return self.label


OutcomeLike = Union[Outcome, str]


@dataclass(frozen=True)
class OutcomeSet:
    """Finite ordered set of distinct outcomes."""

    outcomes: tuple[Outcome, ...]

    def __post_init__(self) -> None:
        labels = [o.label for o in self.outcomes]
        if len(set(labels)) != len(labels):
            raise ValueError(f"outcome labels must be distinct, got {labels}")

    def __iter__(self):
        return iter(self.outcomes)

    def __len__(self) -> int:
        return len(self.outcomes)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(o.label for o in self.outcomes)

    def index(self, x: OutcomeLike) -> int:
        label = x.label if isinstance(x, Outcome) else x
        for k, o in enumerate(self.outcomes):
            if o.label == label:
                return k
        raise UnknownOutcome(f"outcome {label!r} not in {self.labels}")

    def resolve(self, x: OutcomeLike) -> Outcome:
        return self.outcomes[self.index(x)]


@dataclass(frozen=True, eq=False)
class Pvm:
    """Projection-valued measure: one orthogonal projector per outcome.

    Construction validates the projector property of each element, mutual
    orthogonality, and completeness (sum equals the identity), all at the
    module tolerances.
    """

    outcomes: OutcomeSet
    projectors: tuple[Operator, ...]

    def __post_init__(self) -> None:
        if len(self.outcomes) != len(self.projectors):
            raise ValueError("one projector per outcome required")
        if len(self.projectors) == 0:
            raise ValueError("a measurement needs at least one outcome")
        dim = self.projectors[0].dim
        total = np.zeros((dim, dim), dtype=complex)
        for k, p in enumerate(self.projectors):
            if p.dim != dim:
                raise DimensionMismatch("all projectors must share one dimension")
            if not p.is_projector():
                raise ValueError(f"element {k} fails the projector check")
            total += p.entries
        for i in range(len(self.projectors)):
            for j in range(i + 1, len(self.projectors)):
                cross = self.projectors[i].entries @ self.projectors[j].entries
                if float(np.abs(cross).max()) > ORTHOGONALITY_TOL:
                    raise ValueError(f"projectors {i} and {j} are not orthogonal")
        if float(np.abs(total - np.eye(dim)).max()) > COMPLETENESS_TOL:
            raise ValueError("projectors do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.projectors[0].dim

    def projector_for(self, x: OutcomeLike) -> Operator:
        return self.projectors[self.outcomes.index(x)]


def pvm_from_operator(O: Operator) -> Pvm:
    """Spectral PVM of a hermitian operator; outcomes carry the eigenvalues.

    Degenerate eigenvalues are merged (see ``spectral_decomposition``), so one
    outcome per distinct eigenvalue.
    """
    dec = hilbert.spectral_decomposition(O)
    outcomes = tuple(Outcome(f"{v:+.12g}", v) for v, _ in dec.pairs)
    return Pvm(OutcomeSet(outcomes), dec.projectors)


def binary_pvm(p: Operator, labels: tuple[str, str] = ("+", "-")) -> Pvm:
    """Two-outcome PVM {p, 1-p}; first label fires on the range of p."""
    if not p.is_projector():
        raise ValueError("binary_pvm needs a projector")
    complement = Operator(np.eye(p.dim) - p.entries)
    outcomes = OutcomeSet((Outcome(labels[0], +1.0), Outcome(labels[1], -1.0)))
    return Pvm(outcomes, (p, complement))


def coarse_projector(m: Pvm, subset: Iterable[OutcomeLike]) -> Operator:
    """Sum of the projectors over an outcome subset (empty subset -> zero)."""
    total = np.zeros((m.dim, m.dim), dtype=complex)
    seen: set[int] = set()
    for x in subset:
        k = m.outcomes.index(x)
        if k in seen:
            continue
        seen.add(k)
        total += m.projectors[k].entries
    return Operator(total)


def born_probability(m: Pvm, psi: StateVector, x: OutcomeLike) -> float:
    """||P_x psi||^2."""
    if m.dim != psi.dim:
        raise DimensionMismatch(f"pvm dim {m.dim}, state dim {psi.dim}")
    projected = m.projector_for(x).entries @ psi.amplitudes
    return float(np.real(np.vdot(projected, projected)))


def all_probabilities(m: Pvm, psi: StateVector) -> tuple[float, ...]:
    return tuple(born_probability(m, psi, o) for o in m.outcomes)


def possible_outcomes(m: Pvm, psi: StateVector, tol: float = POSSIBILITY_TOL) -> tuple[Outcome, ...]:
    """Outcomes with Born probability above ``tol``; never empty for a unit state."""
    if m.dim != psi.dim:
        raise DimensionMismatch(f"pvm dim {m.dim}, state dim {psi.dim}")
    found = tuple(o for o in m.outcomes if born_probability(m, psi, o) > tol)
    if not found:
        raise ValueError("no possible outcome: is the state normalized?")
    return found


def collapse(m: Pvm, psi: StateVector, x: OutcomeLike) -> StateVector:
    """Project onto the outcome subspace and renormalize (Lueders rule)."""
    prob = born_probability(m, psi, x)
    if prob <= 1e-12:
        raise ImpossibleOutcome(f"outcome {x} has probability {prob:.3e}")
    projected = m.projector_for(x).entries @ psi.amplitudes
    return StateVector(projected / np.sqrt(prob))


def sample(m: Pvm, psi: StateVector, rng: np.random.Generator) -> tuple[Outcome, StateVector]:
    """Draw one outcome with Born probabilities and return it with the
    collapsed post-measurement state.  Deterministic given the generator
    state; outcomes are scanned in outcome-set order."""
    probs = all_probabilities(m, psi)
    u = rng.random() * sum(probs)
    acc = 0.0
    pick = len(probs) - 1
    for k, p in enumerate(probs):
        acc += p
        if u < acc:
            pick = k
            break
    outcome = m.outcomes.outcomes[pick]
    return outcome, collapse(m, psi, outcome)


def expectation_value(m: Pvm, psi: StateVector) -> float:
    """Sum of value * probability over outcomes (requires valued outcomes)."""
    total = 0.0
    for o in m.outcomes:
        if o.value is None:
            raise ValueError(f"outcome {o.label!r} carries no value")
        total += o.value * born_probability(m, psi, o)
    return total
