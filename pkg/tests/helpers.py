"""Brute-force reference implementations used as test oracles."""

import itertools

import numpy as np


def random_density(n_qubits, rng, rank=None):
    d = 1 << n_qubits
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def bits(index, k):
    return [(index >> (k - 1 - q)) & 1 for q in range(k)]


def index_of(b):
    out = 0
    for x in b:
        out = 2 * out + x
    return out


def partial_trace_loop(rho, keep):
    """Sum over the traced bits by explicit enumeration."""
    k = int(np.log2(rho.shape[0]))
    rest = [q for q in range(k) if q not in keep]
    dk = 1 << len(keep)
    out = np.zeros((dk, dk), dtype=complex)
    for i, j in itertools.product(range(dk), repeat=2):
        bi, bj = bits(i, len(keep)), bits(j, len(keep))
        for r in range(1 << len(rest)):
            br = bits(r, len(rest))
            row, col = [0] * k, [0] * k
            for pos, q in enumerate(keep):
                row[q], col[q] = bi[pos], bj[pos]
            for pos, q in enumerate(rest):
                row[q] = col[q] = br[pos]
            out[i, j] += rho[index_of(row), index_of(col)]
    return out


def partial_transpose_loop(rho, block):
    k = int(np.log2(rho.shape[0]))
    out = np.empty_like(rho)
    for i, j in itertools.product(range(1 << k), repeat=2):
        bi, bj = bits(i, k), bits(j, k)
        for q in block:
            bi[q], bj[q] = bj[q], bi[q]
        out[i, j] = rho[index_of(bi), index_of(bj)]
    return out


def negativity_eig(rho, block):
    """||rho^T_A|| - 1 from the eigenvalues of the looped partial transpose."""
    w = np.linalg.eigvalsh(partial_transpose_loop(rho, block))
    return float(np.abs(w).sum() - 1)


def concurrence_purity(vec, block_a):
    """sqrt(2 (1 - Tr rho_A^2)) via the looped partial trace."""
    rho = np.outer(vec, np.conj(vec))
    rho_a = partial_trace_loop(rho, list(block_a))
    return float(np.sqrt(max(0.0, 2 * (1 - np.trace(rho_a @ rho_a).real))))


def wootters_eigvals(rho):
    """Square roots of eig(rho @ rho~) from a general eigensolver."""
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    w = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy)
    return np.sort(np.sqrt(np.clip(w.real, 0, None)))[::-1]


def random_local_unitary(n_qubits, rng):
    """Tensor product of independent Haar single-qubit unitaries."""
    from cren_monogamy.states import haar_unitary

    u = np.ones((1, 1))
    for _ in range(n_qubits):
        u = np.kron(u, haar_unitary(2, rng))
    return u
