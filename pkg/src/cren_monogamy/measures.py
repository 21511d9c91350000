"""Entanglement measures: concurrence, COA, negativity, CREN and CRENOA.

CREN and CRENOA of two-qubit states coincide with the concurrence and the
concurrence of assistance, so both are evaluated through the Wootters
spectrum. :func:`cren_oracle` estimates them independently by sampling pure
state decompositions, which can only overshoot the minimum and undershoot
the maximum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalInconsistency
from .linalg import (
    EPS_NORM,
    EPS_RANK,
    check_hermitian,
    hermitian_eigenvalues,
    num_qubits,
    partial_transpose,
    psd_sqrt,
    schmidt,
    trace_norm,
)
from .states import Bipartition, PureState, haar_isometry, reduced_two_qubit

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True)
class PairMeasures:
    concurrence: float
    coa: float
    negativity: float
    cren: float
    crenoa: float


def _two_qubit(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError(f"expected a 4x4 two-qubit density matrix, got shape {rho.shape}")
    return check_hermitian(rho)


def concurrence_pure(psi: PureState, cut: Bipartition) -> float:
    """Concurrence ``sqrt(2 (1 - Tr rho_A^2))`` of a pure state across ``cut``.

    Evaluated as ``2 sqrt(sum_{i<j} lambda_i lambda_j)`` over the Schmidt
    coefficients, which is the same number without the cancellation in
    ``1 - Tr rho_A^2`` near product states.
    """
    return 2.0 * float(np.sqrt(schmidt(psi, cut).pair_sum()))


def spin_flip(rho) -> np.ndarray:
    rho = _two_qubit(rho)
    return YY @ rho.conj() @ YY


def wootters_spectrum(rho) -> np.ndarray:
    """Square roots of the eigenvalues of ``rho @ spin_flip(rho)``, descending.

    These are the singular values of the complex-symmetric matrix
    ``sqrt(rho)^T YY sqrt(rho)``; taking singular values keeps tiny entries
    at machine precision instead of square-rooting eigenvalue noise.
    """
    rho = _two_qubit(rho)
    root = psd_sqrt(rho)
    lam = np.linalg.svd(root.T @ YY @ root, compute_uv=False)
    return np.sort(lam)[::-1]


def concurrence_2q(rho) -> float:
    lam = wootters_spectrum(rho)
    return max(0.0, float(lam[0] - lam[1:].sum()))


def coa_2q(rho) -> float:
    return float(wootters_spectrum(rho).sum())


def _pure_negativity(psi: PureState, cut: Bipartition) -> tuple[float, float]:
    rho_pt = partial_transpose(psi.density_matrix(), cut.block_a)
    by_norm = trace_norm(rho_pt) - 1.0
    s = np.sqrt(schmidt(psi, cut).coefficients)
    by_schmidt = float(2.0 * np.sum(np.triu(np.outer(s, s), 1)))
    return by_norm, by_schmidt


def negativity(state, cut: Bipartition) -> float:
    """``||rho^{T_A}|| - 1`` for a :class:`PureState` or a density matrix.

    For pure states the Schmidt form ``2 sum_{i<j} sqrt(lambda_i lambda_j)``
    is evaluated as well and must agree with the trace-norm value.
    """
    if isinstance(state, PureState):
        cut.check(state.n_qubits)
        by_norm, by_schmidt = _pure_negativity(state, cut)
        if abs(by_norm - by_schmidt) > EPS_NORM:
            raise NumericalInconsistency(
                f"negativity across {cut}: trace norm gives {by_norm!r}, Schmidt form {by_schmidt!r}"
            )
        return by_norm
    rho = check_hermitian(state)
    cut.check(num_qubits(rho.shape[0]))
    return trace_norm(partial_transpose(rho, cut.block_a)) - 1.0


def pair_measures(psi: PureState, i: int, j: int) -> PairMeasures:
    """Measures of the reduced state on qubits ``(i, j)``.

    Concurrence and COA are clamped to ``[0, 1]`` here; bound evaluations use
    the unclamped values.
    """
    rho = reduced_two_qubit(psi, i, j)
    conc = min(1.0, max(0.0, concurrence_2q(rho)))
    coa = min(1.0, max(0.0, coa_2q(rho)))
    neg = negativity(rho, Bipartition((0,), (1,)))
    return PairMeasures(concurrence=conc, coa=coa, negativity=neg, cren=conc, crenoa=coa)


def linear_entropy(rho) -> float:
    rho = check_hermitian(rho)
    return 1.0 - float(np.sum(np.abs(rho) ** 2))


def _pure_negativity_rows(vectors: np.ndarray) -> np.ndarray:
    """Weighted two-qubit negativity ``2 s_0 s_1`` of unnormalized rows.

    For ``v = sqrt(q) phi`` this equals ``q * N(phi)``.
    """
    s = np.linalg.svd(vectors.reshape(-1, 2, 2), compute_uv=False)
    return 2.0 * s[:, 0] * s[:, 1]


def cren_oracle(rho, trials: int, seed: int) -> tuple[float, float]:
    """Min and max average negativity over ``trials`` sampled decompositions.

    Each trial draws an ensemble size ``m`` uniformly from ``rank .. 2 rank``
    and a Haar ``m x rank`` isometry ``U``; the ensemble is
    ``|phi_j> = sum_k U_jk sqrt(p_k) |e_k>`` over the eigenpairs of ``rho``.
    Trial ``t`` uses the ``t``-th child of ``SeedSequence(seed)``.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rho = _two_qubit(rho)
    w, v = np.linalg.eigh(rho)
    keep = w > EPS_RANK
    p, e = w[keep], v[:, keep]
    rank = int(p.size)
    if rank == 0:
        raise DomainError("density matrix has no eigenvalue above the rank tolerance")
    # row k is sqrt(p_k) e_k
    weighted = (e * np.sqrt(p)).T
    children = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF).spawn(trials)
    lo, hi = np.inf, -np.inf
    for child in children:
        rng = np.random.Generator(np.random.PCG64(child))
        m = int(rng.integers(rank, 2 * rank + 1))
        u = haar_isometry(m, rank, rng)
        avg = float(_pure_negativity_rows(u @ weighted).sum())
        lo, hi = min(lo, avg), max(hi, avg)
    return lo, hi


def wootters_spectrum_hermitian(rho) -> np.ndarray:
    """Spectrum via eigenvalues of ``sqrt(sqrt(rho) rho~ sqrt(rho))``.

    Kept as a cross-check of :func:`wootters_spectrum`; it loses about eight
    digits on the zero part of rank-deficient spectra.
    """
    rho = _two_qubit(rho)
    root = psd_sqrt(rho)
    inner = root @ spin_flip(rho) @ root
    return np.clip(hermitian_eigenvalues(psd_sqrt((inner + inner.conj().T) / 2)), 0.0, None)
