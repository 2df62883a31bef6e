import numpy as np
import pytest

from qembed.simulator import (
    Circuit,
    DensityMatrix,
    Gate,
    GateOp,
    StateVector,
    adjoint,
    apply,
    basis_state,
    density_from_states,
    gate_matrix,
    qubit_z_probability,
    sample_qubit_z,
    zero_state,
)

from _oracles import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    apply_circuit_dense,
    expm_hermitian,
    random_circuit,
    random_state,
)


def plus_state():
    return apply(Circuit(1, (GateOp(Gate.H, (0,)),)), zero_state(1))


# ---------------------------------------------------------------------------
# gate matrices

def test_rx_zero_angle_is_identity():
    assert np.allclose(gate_matrix(GateOp(Gate.RX, (0,), 0.0)), np.eye(2), atol=1e-15)


def test_rx_pi_maps_zero_to_minus_i_one():
    out = gate_matrix(GateOp(Gate.RX, (0,), np.pi)) @ np.array([1, 0])
    assert np.allclose(out, [0, -1j], atol=1e-12)


def test_zz_diagonal():
    phi = 0.7321
    diag = np.diag(gate_matrix(GateOp(Gate.ZZ, (0, 1), phi)))
    e = np.exp(-0.5j * phi)
    assert np.allclose(diag, [e, e.conj(), e.conj(), e], atol=1e-15)


@pytest.mark.parametrize("kind,generator", [(Gate.RX, SIGMA_X), (Gate.RY, SIGMA_Y)])
def test_rotations_match_matrix_exponential(kind, generator):
    rng = np.random.default_rng(3)
    for angle in rng.uniform(-2 * np.pi, 2 * np.pi, 20):
        expected = expm_hermitian(generator, -0.5j * angle)
        got = gate_matrix(GateOp(kind, (0,), float(angle)))
        assert np.max(np.abs(got - expected)) < 1e-12


def test_zz_matches_matrix_exponential():
    rng = np.random.default_rng(4)
    zz_gen = np.kron(SIGMA_Z, SIGMA_Z)
    for angle in rng.uniform(-2 * np.pi, 2 * np.pi, 20):
        expected = expm_hermitian(zz_gen, -0.5j * angle)
        got = gate_matrix(GateOp(Gate.ZZ, (0, 1), float(angle)))
        assert np.max(np.abs(got - expected)) < 1e-12


def test_cswap_is_fredkin_permutation():
    mat = gate_matrix(GateOp(Gate.CSWAP, (0, 1, 2)))
    perm = list(range(8))
    perm[5], perm[6] = 6, 5
    assert np.array_equal(mat, np.eye(8)[perm])


def test_all_gates_unitary():
    rng = np.random.default_rng(5)
    ops = [
        GateOp(Gate.RX, (0,), float(rng.uniform(-7, 7))),
        GateOp(Gate.RY, (0,), float(rng.uniform(-7, 7))),
        GateOp(Gate.ZZ, (0, 1), float(rng.uniform(-7, 7))),
        GateOp(Gate.H, (0,)),
        GateOp(Gate.CSWAP, (0, 1, 2)),
    ]
    for op in ops:
        u = gate_matrix(op)
        assert np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) < 1e-12


# ---------------------------------------------------------------------------
# gate ops / circuits

def test_gateop_validation():
    with pytest.raises(ValueError):
        GateOp(Gate.RX, (0, 1), 0.1)  # wrong arity
    with pytest.raises(ValueError):
        GateOp(Gate.ZZ, (1, 1), 0.1)  # duplicate targets
    with pytest.raises(ValueError):
        GateOp(Gate.RX, (0,))  # missing angle
    with pytest.raises(ValueError):
        GateOp(Gate.H, (0,), 0.3)  # spurious angle


def test_circuit_rejects_out_of_range_qubits():
    with pytest.raises(ValueError):
        Circuit(1, (GateOp(Gate.ZZ, (0, 1), 0.1),))


# ---------------------------------------------------------------------------
# apply

def test_apply_empty_circuit_is_identity():
    rng = np.random.default_rng(6)
    s = random_state(rng, 3)
    out = apply(Circuit(3, ()), s)
    assert np.array_equal(out.amplitudes, s.amplitudes)


def test_apply_hadamard_on_zero():
    out = apply(Circuit(1, (GateOp(Gate.H, (0,)),)), zero_state(1))
    assert np.allclose(out.amplitudes, [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-12)


def test_apply_rx_half_pi():
    # Frozen from the 2x2 exponential: cos(pi/4)|0> - i sin(pi/4)|1>.
    out = apply(Circuit(1, (GateOp(Gate.RX, (0,), np.pi / 2),)), zero_state(1))
    expected = [np.cos(np.pi / 4), -1j * np.sin(np.pi / 4)]
    assert np.allclose(out.amplitudes, expected, atol=1e-12)
    oracle = expm_hermitian(SIGMA_X, -0.5j * (np.pi / 2)) @ np.array([1, 0])
    assert np.allclose(out.amplitudes, oracle, atol=1e-12)


def test_apply_rejects_qubit_count_mismatch():
    with pytest.raises(ValueError):
        apply(Circuit(2, ()), zero_state(1))


@pytest.mark.parametrize("n_qubits", [1, 2, 3, 4, 5])
def test_apply_matches_dense_oracle(n_qubits):
    rng = np.random.default_rng(100 + n_qubits)
    for _ in range(5):
        circuit = random_circuit(rng, n_qubits, 30)
        state = random_state(rng, n_qubits)
        got = apply(circuit, state).amplitudes
        expected = apply_circuit_dense(circuit, state)
        assert np.max(np.abs(got - expected)) < 1e-10


@pytest.mark.parametrize("n_qubits", [1, 3, 5])
def test_apply_preserves_norm(n_qubits):
    rng = np.random.default_rng(200 + n_qubits)
    for _ in range(10):
        circuit = random_circuit(rng, n_qubits, 50)
        out = apply(circuit, random_state(rng, n_qubits))
        assert abs(np.linalg.norm(out.amplitudes) - 1.0) < 1e-10


# ---------------------------------------------------------------------------
# adjoint

def test_adjoint_empty():
    assert adjoint(Circuit(2, ())).ops == ()


def test_adjoint_negates_angles_and_reverses():
    c = Circuit(2, (GateOp(Gate.RX, (0,), 0.4), GateOp(Gate.ZZ, (0, 1), 0.9)))
    inv = adjoint(c)
    assert inv.ops[0] == GateOp(Gate.ZZ, (0, 1), -0.9)
    assert inv.ops[1] == GateOp(Gate.RX, (0,), -0.4)


def test_adjoint_keeps_h_and_cswap():
    c = Circuit(3, (GateOp(Gate.H, (1,)), GateOp(Gate.CSWAP, (0, 1, 2))))
    assert adjoint(c).ops == (GateOp(Gate.CSWAP, (0, 1, 2)), GateOp(Gate.H, (1,)))


@pytest.mark.parametrize("n_qubits", [1, 2, 4])
def test_adjoint_round_trip(n_qubits):
    rng = np.random.default_rng(300 + n_qubits)
    for _ in range(10):
        circuit = random_circuit(rng, n_qubits, 25)
        state = random_state(rng, n_qubits)
        back = apply(adjoint(circuit), apply(circuit, state))
        assert np.max(np.abs(back.amplitudes - state.amplitudes)) < 1e-10


# ---------------------------------------------------------------------------
# density matrices

def test_density_single_pure_state():
    dm = density_from_states([zero_state(1)])
    assert np.allclose(dm.entries, [[1, 0], [0, 0]], atol=1e-15)


def test_density_orthogonal_mixture():
    dm = density_from_states([basis_state(1, 0), basis_state(1, 1)])
    assert np.allclose(dm.entries, np.diag([0.5, 0.5]), atol=1e-15)


def test_density_zero_plus_mixture():
    dm = density_from_states([zero_state(1), plus_state()])
    assert np.allclose(dm.entries, [[0.75, 0.25], [0.25, 0.25]], atol=1e-12)


def test_density_invariants_on_random_ensembles():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        states = [random_state(rng, n) for _ in range(rng.integers(1, 6))]
        dm = density_from_states(states)
        assert np.max(np.abs(dm.entries - dm.entries.conj().T)) < 1e-10
        assert abs(np.trace(dm.entries) - 1.0) < 1e-10
        eigs = np.linalg.eigvalsh(dm.entries)
        assert eigs.min() > -1e-10
        assert np.sum(eigs > 1e-10) <= len(states)


def test_density_errors():
    with pytest.raises(ValueError):
        density_from_states([])
    with pytest.raises(ValueError):
        density_from_states([zero_state(1), zero_state(2)])


def test_density_matrix_type_validation():
    with pytest.raises(ValueError):
        DensityMatrix(1, np.array([[0.5, 0.3], [0.2, 0.5]]))  # not Hermitian
    with pytest.raises(ValueError):
        DensityMatrix(1, np.diag([0.7, 0.7]))  # trace != 1
    with pytest.raises(ValueError):
        DensityMatrix(1, np.diag([1.5, -0.5]))  # negative eigenvalue


def test_state_vector_validation():
    with pytest.raises(ValueError):
        StateVector(1, np.array([1.0, 1.0]))  # not normalized
    with pytest.raises(ValueError):
        StateVector(2, np.array([1.0, 0.0]))  # wrong length


# ---------------------------------------------------------------------------
# sampling

def test_sample_deterministic_outcomes():
    for shots in (1, 17, 1000):
        assert sample_qubit_z(zero_state(1), 0, shots, 0) == (shots, 0)
        assert sample_qubit_z(basis_state(1, 1), 0, shots, 0) == (0, shots)


def test_sample_seed_determinism():
    s = plus_state()
    assert sample_qubit_z(s, 0, 500, 42) == sample_qubit_z(s, 0, 500, 42)
    assert sample_qubit_z(s, 0, 500, 42) != sample_qubit_z(s, 0, 500, 43)


def test_sample_qubit_out_of_range():
    with pytest.raises(ValueError):
        sample_qubit_z(zero_state(1), 1, 10, 0)
    with pytest.raises(ValueError):
        sample_qubit_z(zero_state(1), 0, 0, 0)


def test_plus_state_frequency_within_binomial_bound():
    # 3-sigma bound at p = 0.5, shots = 1e5.
    s = plus_state()
    shots = 10**5
    hits = 0
    for seed in range(50):
        n0, _ = sample_qubit_z(s, 0, shots, seed)
        if abs(n0 / shots - 0.5) <= 3 * np.sqrt(0.25 / shots):
            hits += 1
    assert hits >= 49


@pytest.mark.parametrize("p0,angle", [(0.0, np.pi), (0.25, 2 * np.arccos(0.5)), (0.5, np.pi / 2), (1.0, 0.0)])
def test_sample_frequency_convergence(p0, angle):
    # RX(a)|0> has |<0|psi>|^2 = cos^2(a/2); chosen angles hit each target p0.
    state = apply(Circuit(1, (GateOp(Gate.RX, (0,), float(angle)),)), zero_state(1))
    assert abs(qubit_z_probability(state, 0) - p0) < 1e-12
    shots = 10**4
    bound = 3 * np.sqrt(p0 * (1 - p0) / shots)
    good = sum(
        abs(sample_qubit_z(state, 0, shots, seed)[0] / shots - p0) <= bound
        for seed in range(100)
    )
    assert good >= 99


def test_marginal_probability_on_entangled_state():
    # H on qubit 0 then ZZ leaves qubit-0 marginal at 1/2.
    circuit = Circuit(2, (GateOp(Gate.H, (0,)), GateOp(Gate.ZZ, (0, 1), 1.3)))
    state = apply(circuit, zero_state(2))
    assert abs(qubit_z_probability(state, 0) - 0.5) < 1e-12
    assert abs(qubit_z_probability(state, 1) - 1.0) < 1e-12
