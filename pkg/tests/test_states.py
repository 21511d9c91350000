import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cren_monogamy.errors import DomainError, StateFileError
from cren_monogamy.linalg import schmidt
from cren_monogamy.states import (
    Bipartition,
    PureState,
    WClassParams,
    basis_state,
    bell,
    fixture_example3,
    fixture_example4,
    haar_random_pure,
    haar_unitary,
    load_state,
    product,
    reduced_two_qubit,
    save_state,
    w_class_state,
)


def test_w_class_equal_amplitudes():
    s = w_class_state(WClassParams((1 / math.sqrt(3),) * 3))
    expected = np.zeros(8)
    expected[[0b100, 0b010, 0b001]] = 1 / math.sqrt(3)
    assert np.allclose(s.amplitudes, expected)


def test_w_class_product_and_uniform4():
    assert w_class_state(WClassParams((1, 0, 0))) == basis_state("100")
    amps = w_class_state(WClassParams((0.5,) * 4)).amplitudes
    assert np.allclose(amps[[8, 4, 2, 1]], 0.5)
    assert np.count_nonzero(amps) == 4


def test_w_class_rejects_unnormalized_and_small():
    with pytest.raises(DomainError):
        WClassParams((0.5, 0.5, 0.5))
    with pytest.raises(DomainError):
        WClassParams((1, 0))


@given(st.integers(0, 2**32), st.integers(3, 7))
def test_w_class_support_is_hamming_weight_one(seed, n):
    params = WClassParams.random(n, np.random.default_rng(seed))
    amps = w_class_state(params).amplitudes
    support = np.flatnonzero(amps)
    assert all(bin(i).count("1") == 1 for i in support)
    assert len(support) == n
    assert np.vdot(amps, amps).real == pytest.approx(1.0)


def test_haar_deterministic_and_normalized():
    a, b = haar_random_pure(3, 42), haar_random_pure(3, 42)
    assert a.amplitudes.tobytes() == b.amplitudes.tobytes()
    assert np.linalg.norm(a.amplitudes) == pytest.approx(1.0, abs=1e-12)
    assert haar_random_pure(3, 43) != a
    assert haar_random_pure(2, -1).n_qubits == 2


@pytest.mark.parametrize("n", [0, 11])
def test_haar_rejects_out_of_range(n):
    with pytest.raises(DomainError):
        haar_random_pure(n, 0)


def _purity(psi):
    r = psi.reduced([0])
    return np.trace(r @ r).real


def test_haar_mean_reduced_purity():
    # E Tr(rho_A^2) = (d_A + d_B) / (d_A d_B + 1) = 4/5 for two qubits
    p = np.array([_purity(haar_random_pure(2, s)) for s in range(10_000)])
    assert p.mean() == pytest.approx(0.8, abs=0.02)


def test_haar_law_invariant_under_fixed_unitary():
    u = haar_unitary(4, np.random.default_rng(3))
    plain = np.array([_purity(haar_random_pure(2, s)) for s in range(4000)])
    moved = np.array([_purity(haar_random_pure(2, s).apply(u, [0, 1])) for s in range(4000, 8000)])
    # means and second moments agree within a few standard errors
    se = plain.std() / math.sqrt(4000)
    assert abs(plain.mean() - moved.mean()) < 5 * math.sqrt(2) * se
    assert abs((plain**2).mean() - (moved**2).mean()) < 0.02


def test_fixtures():
    ex3 = fixture_example3()
    assert ex3.amplitudes[0b0000] == pytest.approx(1 / math.sqrt(3))
    assert ex3.amplitudes[0b0101] == pytest.approx(1 / math.sqrt(3))
    assert ex3.amplitudes[0b1010] == pytest.approx(1 / math.sqrt(3))
    assert schmidt(ex3, Bipartition((0, 1), (2, 3))).rank == 3
    ex4 = fixture_example4()
    assert np.allclose(ex4.reduced([0, 2]), np.diag([0.5, 0, 0, 0.5]))
    assert np.allclose(ex4.reduced([1, 2]), np.diag([0.5, 0.5, 0, 0]))
    assert np.allclose(ex4.reduced([0, 3]), ex4.reduced([0, 2]))
    assert np.allclose(ex4.reduced([1, 3]), ex4.reduced([1, 2]))


def test_example3_pair_reductions():
    ex3 = fixture_example3()
    for pair in ([0, 1], [0, 3], [1, 2]):
        assert np.allclose(ex3.reduced(pair), np.diag([1, 1, 1, 0]) / 3)
    rho_ac = np.zeros((4, 4))
    rho_ac[0, 0], rho_ac[0, 3], rho_ac[3, 0], rho_ac[3, 3] = 2 / 3, 1 / 3, 1 / 3, 1 / 3
    assert np.allclose(ex3.reduced([0, 2]), rho_ac)
    assert np.allclose(ex3.reduced([1, 3]), rho_ac)


def test_reduced_two_qubit_w_class(rng):
    params = WClassParams.random(5, rng)
    a = np.array(params.a)
    psi = w_class_state(params)
    for i, j in [(0, 1), (3, 1), (2, 4)]:
        v = np.zeros(4, dtype=complex)
        v[0b10], v[0b01] = a[i], a[j]
        expected = np.outer(v, v.conj())
        expected[0, 0] += sum(abs(a[k]) ** 2 for k in range(5) if k not in (i, j))
        assert np.allclose(reduced_two_qubit(psi, i, j), expected)


def test_reduced_two_qubit_bell_extension_and_errors():
    psi = product(bell(), basis_state("0"))
    assert np.allclose(reduced_two_qubit(psi, 0, 1), bell().density_matrix())
    rho = reduced_two_qubit(haar_random_pure(4, 9), 3, 1)
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(rho).min() > -1e-12
    with pytest.raises(DomainError):
        reduced_two_qubit(psi, 1, 1)
    with pytest.raises(DomainError):
        reduced_two_qubit(psi, 0, 3)


def test_state_file_round_trip(tmp_path):
    for psi in (fixture_example3(), haar_random_pure(4, 11)):
        path = tmp_path / "s.json"
        save_state(psi, path)
        back = load_state(path)
        assert back.amplitudes.tobytes() == psi.amplitudes.tobytes()
        data = json.loads(path.read_text())
        assert data["n_qubits"] == psi.n_qubits
        first = path.read_text().split('"amplitudes"')[1].split("[")[2].split(",")[0]
        assert len(first.split("e")[0].replace(".", "").lstrip("-")) >= 17


def _write(tmp_path, n, pairs):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n_qubits": n, "amplitudes": pairs}))
    return path


def test_load_state_rejects_unnormalized(tmp_path):
    with pytest.raises(DomainError):
        load_state(_write(tmp_path, 1, [[0.9, 0.0], [0.0, 0.0]]))


def test_load_state_rejects_wrong_length(tmp_path):
    with pytest.raises(DomainError):
        load_state(_write(tmp_path, 3, [[1 / math.sqrt(6), 0.0]] * 6))


def test_load_state_rejects_garbage(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    with pytest.raises(StateFileError):
        load_state(path)
    with pytest.raises(StateFileError):
        load_state(_write(tmp_path, "two", [[1.0, 0.0]]))
    with pytest.raises(StateFileError):
        load_state(tmp_path / "missing.json")


def test_pure_state_is_immutable():
    psi = bell()
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0
    with pytest.raises(DomainError):
        PureState(2, np.ones(4))
