"""Pure-state containers, the state families used in the examples, and state files.

State files are JSON objects::

    {"n_qubits": 2, "amplitudes": [[re, im], [re, im], [re, im], [re, im]]}

with amplitudes indexed by the big-endian computational-basis integer.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError, StateFileError
from .linalg import EPS_NORM, reduced_from_vector

MAX_QUBITS = 10


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over an ``n_qubits`` register."""

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if self.n_qubits < 1:
            raise DomainError("n_qubits must be positive")
        if amps.shape[0] != 1 << self.n_qubits:
            raise DomainError(f"expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, got {amps.shape[0]}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > EPS_NORM:
            raise DomainError(f"state is not normalized (squared norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vec) -> "PureState":
        vec = np.asarray(vec, dtype=complex).ravel()
        n = int(vec.shape[0]).bit_length() - 1
        if vec.shape[0] < 2 or 1 << n != vec.shape[0]:
            raise DomainError(f"vector length {vec.shape[0]} is not 2**n with n >= 1")
        return cls(n, vec)

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def reduced(self, keep: Sequence[int]) -> np.ndarray:
        return reduced_from_vector(self.amplitudes, keep)

    def apply(self, unitary, qubits: Sequence[int]) -> "PureState":
        """Apply ``unitary`` to ``qubits`` (in that order); returns a new state."""
        qubits = list(qubits)
        k = len(qubits)
        u = np.asarray(unitary, dtype=complex).reshape([2] * (2 * k))
        t = self.amplitudes.reshape([2] * self.n_qubits)
        t = np.tensordot(u, t, axes=(list(range(k, 2 * k)), qubits))
        t = np.moveaxis(t, list(range(k)), qubits)
        return PureState(self.n_qubits, t.ravel())

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return self.n_qubits == other.n_qubits and np.array_equal(self.amplitudes, other.amplitudes)

    __hash__ = None


@dataclass(frozen=True)
class Bipartition:
    """Ordered split of the register into an A-side and a B-side."""

    block_a: tuple[int, ...]
    block_b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "block_a", tuple(int(q) for q in self.block_a))
        object.__setattr__(self, "block_b", tuple(int(q) for q in self.block_b))

    def check(self, n_qubits: int) -> None:
        if not self.block_a or not self.block_b:
            raise DomainError("both blocks of a cut must be non-empty")
        if set(self.block_a) & set(self.block_b):
            raise DomainError(f"cut blocks overlap: {self}")
        if sorted(self.block_a + self.block_b) != list(range(n_qubits)):
            raise DomainError(f"cut {self} does not cover qubits 0..{n_qubits - 1} exactly once")

    @classmethod
    def split(cls, block_a: Sequence[int], n_qubits: int) -> "Bipartition":
        """Cut with ``block_a`` on one side and every other qubit on the other."""
        return cls(tuple(block_a), tuple(q for q in range(n_qubits) if q not in block_a))

    def swapped(self) -> "Bipartition":
        return Bipartition(self.block_b, self.block_a)

    def __str__(self):
        return ",".join(map(str, self.block_a)) + "|" + ",".join(map(str, self.block_b))


@dataclass(frozen=True)
class WClassParams:
    """Amplitudes ``a_1 .. a_N`` of a generalized W-class state."""

    a: tuple[complex, ...]

    def __post_init__(self):
        a = tuple(complex(x) for x in self.a)
        if len(a) < 3:
            raise DomainError("W-class states need N >= 3 amplitudes")
        norm = sum(abs(x) ** 2 for x in a)
        if abs(norm - 1.0) > EPS_NORM:
            raise DomainError(f"W-class amplitudes are not normalized (sum |a_i|^2 = {norm!r})")
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def weights(self) -> np.ndarray:
        return np.abs(np.array(self.a)) ** 2

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "WClassParams":
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return cls(tuple(z / np.linalg.norm(z)))


def w_class_state(params: WClassParams) -> PureState:
    n = params.n
    amps = np.zeros(1 << n, dtype=complex)
    for i, a in enumerate(params.a):
        amps[1 << (n - 1 - i)] = a
    return PureState(n, amps)


def _rng(seed: int) -> np.random.Generator:
    # PCG64 seeded by the seed's two's-complement 64-bit pattern
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def haar_random_pure(n_qubits: int, seed: int) -> PureState:
    """Haar-distributed pure state, deterministic in ``(n_qubits, seed)``."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise DomainError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n_qubits}")
    g = _rng(seed).standard_normal((1 << n_qubits, 2))
    z = g[:, 0] + 1j * g[:, 1]
    return PureState(n_qubits, z / np.linalg.norm(z))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """``rows x cols`` matrix with orthonormal columns, Haar distributed."""
    if cols > rows:
        raise DomainError("an isometry needs rows >= cols")
    return haar_unitary(rows, rng)[:, :cols]


def basis_state(bits: str) -> PureState:
    amps = np.zeros(1 << len(bits), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return PureState(len(bits), amps)


def superposition(*terms: str) -> PureState:
    """Equal-weight superposition of computational basis strings."""
    n = len(terms[0])
    amps = np.zeros(1 << n, dtype=complex)
    for t in terms:
        amps[int(t, 2)] += 1.0
    return PureState(n, amps / np.linalg.norm(amps))


def bell() -> PureState:
    return superposition("00", "11")


def ghz(n: int = 3) -> PureState:
    return superposition("0" * n, "1" * n)


def fixture_example3() -> PureState:
    """Four-qubit (A, B, C, D) state with Schmidt rank 3 across AB|CD."""
    return superposition("0000", "0101", "1010")


def fixture_example4() -> PureState:
    return superposition("0000", "1011")


def product(*states: PureState) -> PureState:
    amps = np.ones(1, dtype=complex)
    for s in states:
        amps = np.kron(amps, s.amplitudes)
    return PureState(sum(s.n_qubits for s in states), amps)


def reduced_two_qubit(psi: PureState, i: int, j: int) -> np.ndarray:
    """4x4 reduced density matrix over qubits ``(i, j)`` in that order."""
    if i == j:
        raise DomainError(f"pair indices must differ, got ({i}, {j})")
    for q in (i, j):
        if not 0 <= q < psi.n_qubits:
            raise DomainError(f"qubit {q} out of range for {psi.n_qubits} qubits")
    return psi.reduced([i, j])


def save_state(psi: PureState, path) -> None:
    rows = ",\n    ".join(f"[{z.real:.16e}, {z.imag:.16e}]" for z in psi.amplitudes)
    text = f'{{\n  "n_qubits": {psi.n_qubits},\n  "amplitudes": [\n    {rows}\n  ]\n}}\n'
    Path(path).write_text(text, encoding="utf-8")


def load_state(path) -> PureState:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        n = data["n_qubits"]
        pairs = data["amplitudes"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise TypeError("n_qubits must be an integer")
        amps = np.array([complex(float(re), float(im)) for re, im in pairs], dtype=complex)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise StateFileError(f"cannot read state file {path}: {exc}") from exc
    if not 1 <= n <= MAX_QUBITS:
        raise DomainError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n}")
    return PureState(n, amps)
