import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concatqec import statevec as sv
from concatqec.exceptions import CapacityError, NondeterministicMeasurementError
from concatqec.statevec import GateSpec, QubitAddress


def addr(i):
    return QubitAddress.from_index(i)


def test_basis_state_trivial():
    s = sv.basis_state(1, "0")
    assert np.allclose(s.amps, [1, 0])
    s = sv.basis_state(2, "10")
    assert s.amps[int("10", 2)] == 1 and np.abs(s.amps).sum() == 1


def test_basis_state_ancilla_block():
    s = sv.basis_state(5, "00000")
    assert s.amps[0] == 1 and np.linalg.norm(s.amps) == 1


def test_basis_state_length_mismatch():
    with pytest.raises(ValueError):
        sv.basis_state(3, "10")


def test_qubit_address_flattening_bijection():
    seen = {QubitAddress(b, p).index for b in range(4) for p in range(1, 6)}
    assert seen == set(range(20))
    for i in range(20):
        a = QubitAddress.from_index(i)
        assert a.index == i


def test_apply_gate_h_on_zero():
    out = sv.apply_gate(sv.basis_state(1, "0"), GateSpec("H", addr(0)))
    assert np.allclose(out.amps, [1 / np.sqrt(2), 1 / np.sqrt(2)])


def test_apply_gate_cnot():
    out = sv.apply_gate(sv.basis_state(2, "10"),
                        GateSpec("CNOT", addr(1), controls=(addr(0),)))
    assert np.allclose(out.amps, sv.basis_state(2, "11").amps)


def test_apply_gate_toffoli():
    out = sv.apply_gate(sv.basis_state(3, "110"),
                        GateSpec("TOFFOLI", addr(2), controls=(addr(0), addr(1))))
    assert np.allclose(out.amps, sv.basis_state(3, "111").amps)


def test_gate_spec_rejects_repeated_address():
    with pytest.raises(ValueError, match="repeated"):
        GateSpec("CNOT", addr(1), controls=(addr(1),))


def test_named_gates_match_their_matrices():
    s = sv.random_state(3, 50)
    for kind, m in sv.GATE_MATRICES.items():
        a = sv.apply_gate(s, GateSpec(kind, addr(1)))
        b = sv.apply_gate(s, GateSpec("generic-2x2", addr(1), matrix=m))
        assert np.abs(a.amps - b.amps).max() < 1e-12, kind


def test_generic_gate_requires_unitary():
    with pytest.raises(ValueError, match="unitary"):
        GateSpec("generic-2x2", addr(0), matrix=np.array([[1, 0], [0, 2.0]]))
    g = GateSpec("generic-2x2", addr(0),
                 matrix=np.array([[0.6, 0.8], [0.8, -0.6]], dtype=complex))
    out = sv.apply_gate(sv.basis_state(1, "0"), g)
    assert np.allclose(out.amps, [0.6, 0.8])


def test_tensor_products():
    a, b = sv.basis_state(1, "0"), sv.basis_state(1, "1")
    assert np.allclose(sv.tensor(a, b).amps, sv.basis_state(2, "01").amps)
    plus = sv.apply_gate(a, GateSpec("H", addr(0)))
    out = sv.tensor(plus, a)
    assert np.allclose(out.amps, [1 / np.sqrt(2), 0, 1 / np.sqrt(2), 0])


def test_tensor_capacity_limit():
    with pytest.raises(CapacityError):
        sv.tensor(sv.random_state(11, 0), sv.random_state(11, 1))


def test_fidelity_cases():
    z, o = sv.basis_state(1, "0"), sv.basis_state(1, "1")
    plus = sv.apply_gate(z, GateSpec("H", addr(0)))
    assert sv.fidelity(z, z) == pytest.approx(1.0)
    assert sv.fidelity(z, o) == pytest.approx(0.0)
    assert sv.fidelity(z, plus) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        sv.fidelity(z, sv.basis_state(2, "00"))


def test_measure_deterministic_basis():
    bits, post = sv.measure_deterministic(sv.basis_state(2, "00"), [addr(0), addr(1)])
    assert bits == "00"
    assert np.allclose(post.amps, sv.basis_state(2, "00").amps)


def test_measure_deterministic_rejects_superposition():
    plus = sv.apply_gate(sv.basis_state(1, "0"), GateSpec("H", addr(0)))
    with pytest.raises(NondeterministicMeasurementError):
        sv.measure_deterministic(plus, [addr(0)])


def test_measure_sampled_is_seeded():
    plus = sv.apply_gate(sv.basis_state(1, "0"), GateSpec("H", addr(0)))
    a = sv.measure_sampled(plus, [addr(0)], seed=11)
    b = sv.measure_sampled(plus, [addr(0)], seed=11)
    assert a[0] == b[0]
    assert np.allclose(a[1].amps, b[1].amps)


def test_block_purity_product_and_bell():
    prod = sv.tensor(sv.random_state(5, 3), sv.random_state(5, 4))
    assert sv.block_purity(prod, 0) == pytest.approx(1.0, abs=1e-12)
    assert sv.block_purity(prod, 1) == pytest.approx(1.0, abs=1e-12)
    bell = sv.basis_state(2, "00")
    sv.apply_ops(bell, [("H", 0), ("CNOT", 0, 1)])
    assert sv.subsystem_purity(bell, [0]) == pytest.approx(0.5, abs=1e-12)


def test_insert_zero_qubits_layout():
    s = sv.basis_state(2, "11")
    out = sv.insert_zero_qubits(s, 1, 2)
    assert out.num_qubits == 4
    assert out.amps[int("1001", 2)] == 1


def test_certified_factor_out_on_product():
    left = sv.random_state(3, 5)
    right = sv.random_state(2, 6)
    joint = sv.tensor(left, right)
    got, purity = sv.certified_factor_out(joint, 3)
    assert purity > 1 - 1e-12
    assert sv.fidelity(got, right) == pytest.approx(1.0, abs=1e-12)


# -- properties ---------------------------------------------------------

_GATES_1Q = ["H", "X", "Y", "Z"]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.data())
def test_norm_preserved_by_random_circuits(seed, data):
    n = data.draw(st.integers(1, 6))
    s = sv.random_state(n, seed)
    for _ in range(data.draw(st.integers(1, 8))):
        kind = data.draw(st.sampled_from(_GATES_1Q + ["CNOT", "CZ", "TOFFOLI"]))
        arity = {"CNOT": 2, "CZ": 2, "TOFFOLI": 3}.get(kind, 1)
        if arity > n:
            continue
        qubits = data.draw(st.permutations(range(n))).copy()[:arity]
        sv.apply_ops(s, [(kind, *qubits)])
    assert abs(s.norm() - 1.0) < 1e-12


@pytest.mark.parametrize("ops", [
    [("X", 0)], [("Z", 1)], [("H", 2)], [("Y", 0)],
    [("CNOT", 0, 2)], [("CZ", 1, 2)], [("TOFFOLI", 0, 1, 2)],
])
def test_gate_involutions(ops):
    s = sv.random_state(3, 99)
    t = s.copy()
    sv.apply_ops(t, ops + ops)
    assert np.abs(t.amps - s.amps).max() < 1e-12


def test_disjoint_gates_commute():
    s = sv.random_state(4, 17)
    a, b = s.copy(), s.copy()
    sv.apply_ops(a, [("H", 0), ("CNOT", 1, 2)])
    sv.apply_ops(b, [("CNOT", 1, 2), ("H", 0)])
    assert np.abs(a.amps - b.amps).max() < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 2 * np.pi))
def test_fidelity_symmetric_and_phase_invariant(seed, phase):
    a = sv.random_state(3, seed)
    b = sv.random_state(3, seed + 1)
    assert sv.fidelity(a, b) == pytest.approx(sv.fidelity(b, a), abs=1e-12)
    b_rot = sv.StateVector(3, b.amps * np.exp(1j * phase))
    assert sv.fidelity(a, b_rot) == pytest.approx(sv.fidelity(a, b), abs=1e-12)
