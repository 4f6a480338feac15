import numpy as np

from concatqec import channel, concat, qlcc
from concatqec import statevec as sv
from concatqec.channel import NoiseScenario


def test_encode_concat_size_and_norm(spec):
    out = concat.encode_concat(spec, sv.basis_state(1, "0"))
    assert out.num_qubits == 15
    assert abs(out.norm() - 1.0) < 1e-12


def test_encoded_basis_states_are_orthogonal(spec):
    a = concat.encode_concat(spec, sv.basis_state(1, "0"))
    b = concat.encode_concat(spec, sv.basis_state(1, "1"))
    assert abs(np.vdot(a.amps, b.amps)) < 1e-10


def test_encode_concat_zero_matches_logical_expansion(spec):
    """encode(|0>) must equal sum_y V[y,0] * |y>_L over the block forms."""
    expect = np.zeros(1 << 15, dtype=complex)
    for y in range(32):
        expect += spec.encoder[y, 0] * qlcc.logical_ghz_state(y)
    got = concat.encode_concat(spec, sv.basis_state(1, "0"))
    assert np.abs(got.amps - expect).max() < 1e-12


def test_pipeline_round_trip_random_inputs(spec):
    for seed in range(20):
        x = sv.random_state(1, seed)
        syndrome, out = concat.decode_concat(
            spec, concat.encode_concat(spec, x), qlcc.ErasureFlagSet(()))
        assert syndrome == "0000"
        assert sv.fidelity(out, x) > 1 - 1e-10


def test_worked_example_full_pipeline(spec):
    x = sv.random_state(1, 77)
    encoded = concat.encode_concat(spec, x)
    noisy = channel.apply_scenario(encoded, concat.WORKED_EXAMPLE_SCENARIO)
    info = {}
    syndrome, out = concat.decode_concat(
        spec, noisy, concat.WORKED_EXAMPLE_SCENARIO.decoder_view(), info=info)
    assert syndrome == "0110"
    assert info["correction"] == "S5"
    assert sv.fidelity(out, x) > 1 - 1e-9


def test_run_worked_example_trace(spec):
    trace = concat.run_worked_example(spec, extra_inputs=10)
    assert trace["syndrome"] == "0110"
    assert trace["correction"] == "S5"
    assert trace["final_fidelity"] >= 1 - 1e-9
    assert trace["recovery_purity"] >= 1 - 1e-9
    assert trace["passed"]
    assert len(trace["fidelities"]) == 13


def test_erasure_pauli_independence(spec):
    """For a fixed flag set the decoder outcome works for every Pauli pair."""
    x = sv.random_state(1, 5)
    encoded = concat.encode_concat(spec, x)
    flags = ((0, 2), (2, 4))
    for g1 in channel.PAULIS:
        for g2 in channel.PAULIS:
            sc = NoiseScenario(erasures=((0, 2, g1), (2, 4, g2)))
            noisy = channel.apply_scenario(encoded, sc)
            _, out = concat.decode_concat(spec, noisy, sc.decoder_view())
            assert sv.fidelity(out, x) > 1 - 1e-9, (g1, g2)


def test_verify_capability_trivial_case(spec):
    rep = concat.verify_capability(spec, 0, 0)
    assert (rep.total, rep.passed) == (1, 1)
    assert rep.min_fidelity > 1 - 1e-10
    assert rep.all_passed


def test_verify_capability_erasure_slice_passes(spec):
    """Deterministic slice of the 675 two-erasure sweep (full run is in the
    acceptance suite)."""
    scenarios = list(channel.enumerate_scenarios(2, 0))[::45]
    encoded = concat._encode_inputs(spec, concat.default_probe_inputs())
    for sc in scenarios:
        ok, syndrome, fid = concat._run_scenario(spec, encoded, sc, 1e-9)
        assert ok, (sc, syndrome, fid)


def test_report_serialization_and_consistency(spec):
    rep = concat.verify_capability(spec, 1, 0)
    assert rep.passed + len(rep.failures) == rep.total
    payload = rep.to_json()
    assert '"wall_time"' not in payload
    assert '"total": 45' in payload
    # identical config gives byte-identical artifacts
    rep2 = concat.verify_capability(spec, 1, 0)
    assert rep2.to_json() == payload


def test_parallel_matches_serial(spec):
    a = concat.verify_capability(spec, 1, 0, workers=2)
    b = concat.verify_capability(spec, 1, 0, workers=1)
    assert a.to_json() == b.to_json()


def test_verification_linearity_on_probe_choice(spec):
    """Pass/fail sets agree between the 3 canonical probes and 3 + 5 random
    ones; correctability does not depend on the input state."""
    extra = list(concat.default_probe_inputs()) + [
        sv.random_state(1, 900 + i) for i in range(5)]
    sub = list(channel.enumerate_scenarios(0, 1))
    enc3 = concat._encode_inputs(spec, concat.default_probe_inputs())
    enc8 = concat._encode_inputs(spec, extra)
    for sc in sub:
        ok3, _, _ = concat._run_scenario(spec, enc3, sc, 1e-9)
        ok8, _, _ = concat._run_scenario(spec, enc8, sc, 1e-9)
        assert ok3 == ok8, sc
