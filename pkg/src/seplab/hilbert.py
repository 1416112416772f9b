"""Dense complex linear algebra over small finite-dimensional Hilbert spaces.

Everything is an immutable value wrapping a read-only numpy array, every
operation is a pure function, and dimensions are capped (``DIM_CAP``) because
correctness at desk scale matters more than throughput here.  The Kronecker
index convention is row-major throughout: the component ``k`` of ``a (x) b``
is ``a[i] * b[j]`` with ``k = i * dim(b) + j``, matching ``numpy.kron``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian

# Hard cap on space dimension; raise it consciously, not by accident.
DIM_CAP = 64

HERMITIAN_TOL = 1e-12
PROJECTOR_TOL = 1e-10


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex vector in a finite-dimensional Hilbert space.

    Not required to be normalized on construction; ``normalize`` returns a
    unit-norm copy and is the invariant every physical state goes through.
    """

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise ValueError(f"state vector must be 1-d, got shape {amps.shape}")
        if amps.shape[0] < 1:
            raise ValueError("state vector needs dimension >= 1")
        if amps.shape[0] > DIM_CAP:
            raise ValueError(f"dimension {amps.shape[0]} exceeds DIM_CAP={DIM_CAP}")
        object.__setattr__(self, "amplitudes", _readonly(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class Operator:
    """Square complex matrix acting on a finite-dimensional space."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValueError("operator needs dimension >= 1")
        if m.shape[0] > DIM_CAP:
            raise ValueError(f"dimension {m.shape[0]} exceeds DIM_CAP={DIM_CAP}")
        object.__setattr__(self, "entries", _readonly(m))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return float(np.abs(self.entries - self.entries.conj().T).max()) <= tol

    def is_projector(self, tol: float = PROJECTOR_TOL) -> bool:
        if not self.is_hermitian(tol):
            return False
        m = self.entries
        return float(np.abs(m @ m - m).max()) <= tol


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalue/projector pairs of a hermitian operator.

    Eigenvalues are strictly increasing after degenerate groups are merged;
    the projectors are mutually orthogonal and sum to the identity.
    """

    pairs: tuple[tuple[float, Operator], ...]

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.pairs)

    @property
    def projectors(self) -> tuple[Operator, ...]:
        return tuple(p for _, p in self.pairs)

    def reconstruct(self) -> Operator:
        dim = self.pairs[0][1].dim
        total = np.zeros((dim, dim), dtype=complex)
        for value, proj in self.pairs:
            total += value * proj.entries
        return Operator(total)


# ---------------------------------------------------------------------------
# constructors

def basis_vector(dim: int, index: int) -> StateVector:
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dim {dim}")
    amps = np.zeros(dim, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps)


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim, dtype=complex))


def zero_operator(dim: int) -> Operator:
    return Operator(np.zeros((dim, dim), dtype=complex))


def projector_onto(v: StateVector) -> Operator:
    """Rank-1 projector |v><v| (v is normalized first)."""
    u = normalize(v).amplitudes
    return Operator(np.outer(u, u.conj()))


SIGMA_X = Operator(np.array([[0, 1], [1, 0]], dtype=complex))
SIGMA_Y = Operator(np.array([[0, -1j], [1j, 0]], dtype=complex))
SIGMA_Z = Operator(np.array([[1, 0], [0, -1]], dtype=complex))


# ---------------------------------------------------------------------------
# operations

def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims {a.dim} and {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def normalize(v: StateVector) -> StateVector:
    n = v.norm()
    if n < 1e-14:
        raise ValueError("cannot normalize a (numerically) zero vector")
    return StateVector(v.amplitudes / n)


def apply(O: Operator, v: StateVector) -> StateVector:
    if O.dim != v.dim:
        raise DimensionMismatch(f"operator dim {O.dim}, vector dim {v.dim}")
    return StateVector(O.entries @ v.amplitudes)


def adjoint(O: Operator) -> Operator:
    return Operator(O.entries.conj().T)


def compose(A: Operator, B: Operator) -> Operator:
    """Operator product AB."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"dims {A.dim} and {B.dim}")
    return Operator(A.entries @ B.entries)


def tensor_vec(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product of states, row-major: index k = i*dim(b) + j."""
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def tensor_op(A: Operator, B: Operator) -> Operator:
    """Kronecker product of operators, same index convention as tensor_vec."""
    return Operator(np.kron(A.entries, B.entries))


def commutator_norm(A: Operator, B: Operator) -> float:
    """Max-entry magnitude of AB - BA."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"dims {A.dim} and {B.dim}")
    c = A.entries @ B.entries - B.entries @ A.entries
    return float(np.abs(c).max())


def spectral_decomposition(O: Operator, grouping_rtol: float = 1e-9) -> SpectralDecomposition:
    """Eigenvalues and spectral projectors of a hermitian operator.

    Eigenvalues closer than ``grouping_rtol * max(1, ||O||)`` are merged into
    a single degenerate projector, so coarse-graining by outcome subsets sees
    the correct ranks.  Raises :class:`NotHermitian` when the input fails the
    hermiticity check.
    """
    if not O.is_hermitian():
        raise NotHermitian("spectral decomposition needs a hermitian operator")
    values, vectors = np.linalg.eigh(O.entries)
    scale = max(1.0, float(np.abs(values).max()))
    tol = grouping_rtol * scale

    pairs: list[tuple[float, Operator]] = []
    start = 0
    for k in range(1, len(values) + 1):
        if k == len(values) or values[k] - values[k - 1] > tol:
            block = vectors[:, start:k]
            proj = Operator(block @ block.conj().T)
            pairs.append((float(values[start:k].mean()), proj))
            start = k
    return SpectralDecomposition(tuple(pairs))
