"""Dense complex linear algebra over few-qubit registers.

Qubit ordering is big-endian throughout: qubit 0 is the most significant bit
of a computational-basis index, so ``|q0 q1 ... q(n-1)>`` has index
``q0 * 2**(n-1) + ... + q(n-1)``. A matrix "over k qubits" is addressed by
positions ``0 .. k-1`` in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError

EPS_HERM = 1e-9
EPS_NORM = 1e-9
EPS_RANK = 1e-10
EPS_PSD = 1e-10


@dataclass(frozen=True)
class SchmidtData:
    """Descending Schmidt coefficients (probabilities) and numerical rank."""

    coefficients: np.ndarray
    rank: int

    def pair_sum(self) -> float:
        """Sum of ``lambda_i * lambda_j`` over ``i < j``."""
        lam = self.coefficients
        return float(np.sum(np.triu(np.outer(lam, lam), 1)))


def num_qubits(dim: int) -> int:
    k = int(dim).bit_length() - 1
    if dim < 1 or 1 << k != dim:
        raise DomainError(f"dimension {dim} is not a power of two")
    return k


def _check_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")


def _check_positions(positions: Sequence[int], k: int, what: str) -> list[int]:
    positions = [int(p) for p in positions]
    if len(set(positions)) != len(positions):
        raise DomainError(f"{what} has repeated qubits: {positions}")
    bad = [p for p in positions if not 0 <= p < k]
    if bad:
        raise DomainError(f"{what} {positions} is not a subset of qubits 0..{k - 1}")
    return positions


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; ``a`` occupies the more significant qubits."""
    return np.kron(np.atleast_2d(a), np.atleast_2d(b))


def check_hermitian(h: np.ndarray, tol: float = EPS_HERM) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    _check_square(h)
    dev = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
    if dev > tol:
        raise DomainError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return h


def partial_trace(rho, keep: Sequence[int]) -> np.ndarray:
    """Reduce ``rho`` to the qubits ``keep``, in the order given."""
    rho = np.asarray(rho, dtype=complex)
    _check_square(rho)
    k = num_qubits(rho.shape[0])
    keep = _check_positions(keep, k, "keep")
    if not keep:
        raise DomainError("keep must be non-empty")
    rest = [q for q in range(k) if q not in keep]
    dk, dr = 1 << len(keep), 1 << len(rest)
    t = rho.reshape([2] * (2 * k))
    perm = keep + rest
    t = t.transpose(perm + [q + k for q in perm]).reshape(dk, dr, dk, dr)
    return np.einsum("ajbj->ab", t)


def reduced_from_vector(vec, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of a pure state vector without forming |psi><psi|."""
    vec = np.asarray(vec, dtype=complex)
    n = num_qubits(vec.shape[0])
    keep = _check_positions(keep, n, "keep")
    if not keep:
        raise DomainError("keep must be non-empty")
    rest = [q for q in range(n) if q not in keep]
    if not rest:
        t = vec.reshape([2] * n).transpose(keep).ravel()
        return np.outer(t, t.conj())
    m = bipartite_matrix(vec, keep, rest)
    return m @ m.conj().T


def bipartite_matrix(vec, block_a: Sequence[int], block_b: Sequence[int]) -> np.ndarray:
    """Amplitudes reshaped to a ``2**|A| x 2**|B|`` matrix for the cut A|B."""
    vec = np.asarray(vec, dtype=complex)
    n = num_qubits(vec.shape[0])
    order = list(block_a) + list(block_b)
    if sorted(order) != list(range(n)):
        raise DomainError(f"cut {list(block_a)}|{list(block_b)} must cover qubits 0..{n - 1} exactly once")
    if not block_a or not block_b:
        raise DomainError("both blocks of a cut must be non-empty")
    t = vec.reshape([2] * n).transpose(order)
    return t.reshape(1 << len(block_a), 1 << len(block_b))


def partial_transpose(rho, block: Sequence[int]) -> np.ndarray:
    """Transpose the tensor factors listed in ``block``.

    Pure index permutation, so applying it twice returns the input exactly.
    """
    rho = np.asarray(rho, dtype=complex)
    _check_square(rho)
    k = num_qubits(rho.shape[0])
    block = _check_positions(block, k, "block")
    axes = list(range(2 * k))
    for q in block:
        axes[q], axes[q + k] = axes[q + k], axes[q]
    return rho.reshape([2] * (2 * k)).transpose(axes).reshape(rho.shape)


def trace_norm(m) -> float:
    m = np.asarray(m, dtype=complex)
    _check_square(m)
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def hermitian_eigenvalues(h, tol: float = EPS_HERM) -> np.ndarray:
    """Real eigenvalues in descending order (ties keep LAPACK's order)."""
    h = check_hermitian(h, tol)
    w = np.linalg.eigvalsh(h)
    return w[np.argsort(-w, kind="stable")]


def psd_sqrt(p, tol: float = EPS_PSD) -> np.ndarray:
    p = check_hermitian(p)
    w, v = np.linalg.eigh(p)
    if w.size and w.min() < -tol:
        raise DomainError(f"matrix is not positive semidefinite (eigenvalue {w.min():.3e})")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def schmidt(psi, cut, rank_tol: float = EPS_RANK) -> SchmidtData:
    """Schmidt coefficients of ``psi`` across ``cut``.

    The coefficients are the squared singular values of the bipartite
    amplitude matrix, i.e. the spectrum of either reduced density matrix.
    """
    cut.check(psi.n_qubits)
    m = bipartite_matrix(psi.amplitudes, cut.block_a, cut.block_b)
    s = np.linalg.svd(m, compute_uv=False)
    lam = s * s
    lam = lam[np.argsort(-lam, kind="stable")]
    return SchmidtData(coefficients=lam, rank=int(np.count_nonzero(lam > rank_tol)))
