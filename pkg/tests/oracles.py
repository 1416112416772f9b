"""Independent oracles used to derive expected values in the test suite.

Everything here deliberately avoids the package's own code paths: the 2x2
eigensolver is closed-form, the Kronecker product is explicit loops, the
rock correlation comes from arc-intersection geometry, and the hidden
variable CHSH bound comes from brute-force enumeration.
"""

from __future__ import annotations

import math

import numpy as np


def eig2_hermitian(m: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """Closed-form eigenpairs (value, unit eigenvector) of a 2x2 hermitian
    matrix, ascending by eigenvalue."""
    a = m[0, 0].real
    d = m[1, 1].real
    b = m[0, 1]
    half_gap = math.sqrt(((a - d) / 2.0) ** 2 + abs(b) ** 2)
    mean = (a + d) / 2.0
    pairs = []
    for value in (mean - half_gap, mean + half_gap):
        if abs(b) > 1e-15:
            vec = np.array([b, value - a], dtype=complex)
        elif abs(value - a) <= abs(value - d):
            vec = np.array([1.0, 0.0], dtype=complex)
        else:
            vec = np.array([0.0, 1.0], dtype=complex)
        pairs.append((value, vec / np.linalg.norm(vec)))
    return pairs


def kron_loops(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Kronecker product by explicit index loops (row-major convention)."""
    if x.ndim == 1:
        out = np.zeros(x.shape[0] * y.shape[0], dtype=complex)
        for i in range(x.shape[0]):
            for j in range(y.shape[0]):
                out[i * y.shape[0] + j] = x[i] * y[j]
        return out
    out = np.zeros((x.shape[0] * y.shape[0], x.shape[1] * y.shape[1]), dtype=complex)
    for i in range(x.shape[0]):
        for j in range(x.shape[1]):
            for k in range(y.shape[0]):
                for l in range(y.shape[1]):
                    out[i * y.shape[0] + k, j * y.shape[1] + l] = x[i, j] * y[k, l]
    return out


def _wrap(angle: float) -> float:
    return angle % (2.0 * math.pi)


def arc_intersection_length(center_1: float, center_2: float, half_width: float = math.pi / 2) -> float:
    """Length of the intersection of two circular arcs of the given half
    width centered at the given angles."""
    # work on the unwrapped line: translate arc 2 near arc 1 in both directions
    total = 0.0
    start_1 = _wrap(center_1 - half_width)
    start_2 = _wrap(center_2 - half_width)
    width = 2 * half_width
    for shift in (-2 * math.pi, 0.0, 2 * math.pi):
        s2 = start_2 + shift
        lo = max(start_1, s2)
        hi = min(start_1 + width, s2 + width)
        total += max(0.0, hi - lo)
    return total


def rock_correlation_by_arcs(theta_a: float, theta_b: float) -> float:
    """Fragment correlation from half-circle overlap geometry: station A fires
    +1 on the arc centered at theta_a, station B mirrors the arc at theta_b
    shifted by pi (opposite momentum)."""
    same_sign_arc = arc_intersection_length(theta_a, theta_b)
    p_same = same_sign_arc / math.pi  # both + or both -, by symmetry
    return -(2.0 * p_same - 1.0)


def rock_correlation_by_grid(theta_a: float, theta_b: float, n: int = 200_000) -> float:
    """Rock correlation by midpoint quadrature over the hidden direction."""
    lam = (np.arange(n) + 0.5) * (2.0 * math.pi / n)
    a = np.where(np.cos(theta_a - lam) > 0, 1, -1)
    b = np.where(np.cos(theta_b - (lam + math.pi)) > 0, 1, -1)
    return float((a * b).mean())


def lhv_chsh_from_table(a_responses: np.ndarray, b_responses: np.ndarray, weights: np.ndarray) -> float:
    """CHSH value of a finite shared-hidden-variable model.

    ``a_responses``/``b_responses`` are (2, n) arrays of +/-1 deterministic
    responses per setting and hidden value; ``weights`` is the hidden-value
    distribution.  Convention: minus on the (2,2) cell.
    """
    e = np.zeros((2, 2))
    for i in range(2):
        for j in range(2):
            e[i, j] = float(np.sum(weights * a_responses[i] * b_responses[j]))
    return e[0, 0] + e[0, 1] + e[1, 0] - e[1, 1]


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2.0


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_projector_matrix(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(g)
    block = q[:, :rank]
    return block @ block.conj().T


def schmidt_coefficients_2x2(psi: np.ndarray) -> list[float]:
    """Singular values of the 2x2 amplitude matrix via the closed-form
    eigenvalues of M M^dagger."""
    m = psi.reshape(2, 2)
    gram = m @ m.conj().T
    values = [v for v, _ in eig2_hermitian(gram)]
    return sorted((math.sqrt(max(v, 0.0)) for v in values), reverse=True)
