"""The concatenated pipeline: external graph code over the internal loss code.

Encoding composes the external encoder with the internal one; decoding runs
in reverse order - measurement-free erasure recovery first, then syndrome
extraction and table-lookup correction on the recovered register. The
verification harness sweeps exhaustive noise enumerations and reports
per-scenario fidelities.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import time
from dataclasses import dataclass, field

import numpy as np

from . import channel, graph_code, qlcc, statevec
from .exceptions import (NondeterministicMeasurementError, RecoveryFailureError,
                         UncorrectableConfigurationError)
from .statevec import StateVector


def default_probe_inputs():
    """The three inputs every sweep probes: |0>, |1> and a phase-superposed
    state. A scenario counts as corrected only if all of them survive."""
    plus_phase = np.array([1.0, np.exp(1j * np.pi / 4)], dtype=complex) / np.sqrt(2)
    return (StateVector(1, np.array([1.0, 0.0], dtype=complex)),
            StateVector(1, np.array([0.0, 1.0], dtype=complex)),
            StateVector(1, plus_phase))


@dataclass(frozen=True)
class ConcatCodeSpec:
    """External encoder/decoder + syndrome table + internal parameters."""

    graph: graph_code.GraphAdjacency
    encoder: np.ndarray
    decoder: np.ndarray
    table: graph_code.SyndromeTable
    qlcc_params: qlcc.QlccParams
    capability: tuple = (1, 2)  # (s errors, t erasures)

    def __post_init__(self):
        if (1 << self.graph.n_output) != self.encoder.shape[0]:
            raise ValueError("external output size does not match the encoder")
        if self.encoder.shape[0] != (1 << self.qlcc_params.k):
            raise ValueError("internal input size does not match the external output")


_SPEC_CACHE = None


def default_spec():
    """Spec for the shipped instance; encoder/decoder/table built once."""
    global _SPEC_CACHE
    if _SPEC_CACHE is None:
        graph = graph_code.bundled_graph()
        encoder = graph_code.build_encoder(graph)
        decoder = graph_code.build_syndrome_decoder()
        table = graph_code.generate_syndrome_table(encoder, decoder)
        _SPEC_CACHE = ConcatCodeSpec(graph, encoder, decoder, table, qlcc.QlccParams())
    return _SPEC_CACHE


def encode_concat(spec, input_state):
    """External encoding then internal encoding: 1 qubit -> 15 qubits.

    Trailing spectator qubits ride along untouched.
    """
    return qlcc.encode(graph_code.encode_data(spec.encoder, input_state))


def decode_concat(spec, state, decoder_view, info=None, scratch=None):
    """Full decoding: erasure recovery, syndrome extraction, correction.

    ``decoder_view`` carries erasure positions only. Returns (syndrome,
    corrected 1-qubit state [+ spectators]). Recovery or measurement
    determinism failures surface as UncorrectableConfigurationError.
    """
    try:
        recovered = qlcc.decode_and_recover(state, decoder_view, info=info,
                                            scratch=scratch)
        syndrome, data = graph_code.decode_and_extract(spec.decoder, recovered)
    except (RecoveryFailureError, NondeterministicMeasurementError) as exc:
        raise UncorrectableConfigurationError(str(exc)) from exc
    correction = spec.table.lookup(syndrome).correction
    if info is not None:
        info["syndrome"] = syndrome
        info["correction"] = correction.label
    return syndrome, graph_code.apply_correction(data, correction)


@dataclass(frozen=True)
class FailureRecord:
    scenario: channel.NoiseScenario
    syndrome: str | None
    fidelity: float


@dataclass
class VerificationReport:
    """Sweep outcome; ``passed + len(failures) == total`` always holds."""

    total: int
    passed: int
    failures: list
    min_fidelity: float
    wall_time: float = 0.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.passed + len(self.failures) != self.total:
            raise ValueError("inconsistent report: passed + failures != total")

    @property
    def all_passed(self):
        return self.passed == self.total

    def to_json(self, indent=None):
        # wall_time is deliberately not serialized: artifacts are
        # byte-identical for identical configurations.
        return json.dumps({
            "params": self.params,
            "total": self.total,
            "passed": self.passed,
            "min_fidelity": round(self.min_fidelity, 12),
            "failures": [{
                "scenario": json.loads(f.scenario.to_json()),
                "syndrome": f.syndrome,
                "fidelity": round(f.fidelity, 12),
            } for f in self.failures],
        }, sort_keys=True, indent=indent)


def _run_scenario(spec, encoded_inputs, scenario, tolerance, scratch=None):
    """Returns (passed, syndrome, min fidelity over probe inputs)."""
    view = scenario.decoder_view()
    min_fid = 1.0
    syndrome = None
    for original, encoded in encoded_inputs:
        noisy = channel.apply_scenario(encoded, scenario)
        try:
            syn, out = decode_concat(spec, noisy, view, scratch=scratch)
        except UncorrectableConfigurationError:
            return False, syndrome, 0.0
        if syndrome is None:
            syndrome = syn
        fid = statevec.fidelity(out, original)
        min_fid = min(min_fid, fid)
    return min_fid >= 1.0 - tolerance, syndrome, min_fid


def _encode_inputs(spec, inputs):
    return [(state, encode_concat(spec, state)) for state in inputs]


# Worker-process state for parallel sweeps.
_POOL_CTX = {}


def _sweep_scratch():
    return np.empty(1 << (qlcc.ENCODED_QUBITS + qlcc.DATA_QUBITS),
                    dtype=np.complex128)


def _pool_init(spec, input_amps, tolerance):
    inputs = [StateVector(1, np.asarray(a)) for a in input_amps]
    _POOL_CTX["spec"] = spec
    _POOL_CTX["encoded"] = _encode_inputs(spec, inputs)
    _POOL_CTX["tolerance"] = tolerance
    _POOL_CTX["scratch"] = _sweep_scratch()


def _pool_run(scenario):
    return _run_scenario(_POOL_CTX["spec"], _POOL_CTX["encoded"], scenario,
                         _POOL_CTX["tolerance"], scratch=_POOL_CTX["scratch"])


def verify_capability(spec, t_erasures, s_errors,
                      constraint=channel.ERROR_IN_UNDAMAGED_BLOCK,
                      tolerance=statevec.ATOL_ACCEPT, inputs=None, workers=1,
                      progress=None):
    """Exhaustively sweep all scenarios for (t, s, constraint).

    A scenario passes only if every probe input is restored with fidelity
    >= 1 - tolerance; failures are recorded, not raised. Results are merged
    in enumeration order regardless of worker scheduling.
    """
    if inputs is None:
        inputs = default_probe_inputs()
    scenarios = list(channel.enumerate_scenarios(t_erasures, s_errors, constraint))
    start = time.perf_counter()
    results = []
    if workers and workers > 1:
        input_amps = [s.amps for s in inputs]
        with multiprocessing.Pool(workers, initializer=_pool_init,
                                  initargs=(spec, input_amps, tolerance)) as pool:
            chunk = max(1, len(scenarios) // (workers * 8))
            for i, res in enumerate(pool.imap(_pool_run, scenarios, chunksize=chunk)):
                results.append(res)
                if progress:
                    progress(i + 1, len(scenarios))
    else:
        encoded = _encode_inputs(spec, inputs)
        scratch = _sweep_scratch()
        for i, scenario in enumerate(scenarios):
            results.append(_run_scenario(spec, encoded, scenario, tolerance,
                                         scratch=scratch))
            if progress:
                progress(i + 1, len(scenarios))
    failures = [FailureRecord(sc, syn, fid)
                for sc, (ok, syn, fid) in zip(scenarios, results) if not ok]
    min_fid = min((fid for _, _, fid in results), default=1.0)
    return VerificationReport(
        total=len(scenarios),
        passed=len(scenarios) - len(failures),
        failures=failures,
        min_fidelity=float(min_fid),
        wall_time=time.perf_counter() - start,
        params={"t": t_erasures, "s": s_errors, "constraint": constraint,
                "tolerance": tolerance, "inputs": len(inputs)},
    )


#: The worked-example scenario: phase flip erased at block 0 position 1,
#: bit flip erased at block 1 position 5, plus an unflagged bit flip at
#: block 2 position 1.
WORKED_EXAMPLE_SCENARIO = channel.NoiseScenario(
    erasures=((0, 1, "Z"), (1, 5, "X")),
    comp_errors=((2, 1, "X"),),
)

WORKED_EXAMPLE_SYNDROME = "0110"


def _checksum(state):
    return hashlib.sha256(np.round(state.amps, 10).tobytes()).hexdigest()[:16]


def run_worked_example(spec=None, extra_inputs=10, seed=1009,
                       tolerance=statevec.ATOL_ACCEPT):
    """Execute the worked example and emit a milestone trace.

    Probes the three standard inputs plus ``extra_inputs`` random qubit
    states; the trace records state checksums, the recovery purity, the
    syndrome, the correction applied, and the worst-case fidelity.
    """
    spec = spec or default_spec()
    scenario = WORKED_EXAMPLE_SCENARIO
    inputs = list(default_probe_inputs())
    inputs += [statevec.random_state(1, seed + i) for i in range(extra_inputs)]
    trace = {"scenario": json.loads(scenario.to_json()), "inputs": len(inputs)}
    fidelities = []
    syndromes = set()
    for i, original in enumerate(inputs):
        encoded = encode_concat(spec, original)
        noisy = channel.apply_scenario(encoded, scenario)
        info = {}
        syndrome, out = decode_concat(spec, noisy, scenario.decoder_view(), info=info)
        fid = statevec.fidelity(out, original)
        fidelities.append(fid)
        syndromes.add(syndrome)
        if i == 0:
            trace["encoded_checksum"] = _checksum(encoded)
            trace["post_noise_checksum"] = _checksum(noisy)
            trace["recovery_purity"] = round(info["purity"], 12)
            trace["correction"] = info["correction"]
    trace["syndrome"] = sorted(syndromes)[0] if len(syndromes) == 1 else sorted(syndromes)
    trace["fidelities"] = [round(f, 12) for f in fidelities]
    trace["final_fidelity"] = round(min(fidelities), 12)
    trace["passed"] = (trace["syndrome"] == WORKED_EXAMPLE_SYNDROME
                       and min(fidelities) >= 1.0 - tolerance)
    return trace
