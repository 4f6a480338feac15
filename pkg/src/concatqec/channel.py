"""Located-erasure and computational-error injection.

Both event kinds act on the state identically (a Pauli at a known site);
they differ only in what the decoder is allowed to see. Erasure positions
are decoder-visible, erasure Paulis and everything about computational
errors are not - enforced by handing decoders an
:class:`~concatqec.qlcc.ErasureFlagSet` built by :meth:`NoiseScenario.decoder_view`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from . import statevec
from .exceptions import InvalidScenarioError, UnsupportedConfigurationError
from .qlcc import DATA_QUBITS, NUM_BLOCKS, ErasureFlagSet

PAULIS = ("X", "Y", "Z")

ERROR_IN_UNDAMAGED_BLOCK = "error-in-undamaged-block"
UNCONSTRAINED = "unconstrained"
CONSTRAINTS = (ERROR_IN_UNDAMAGED_BLOCK, UNCONSTRAINED)

MAX_ERASURES = 2
MAX_ERRORS = 1


def _pauli_ops(pauli, qubit):
    """Pauli as gate ops; Y is the Z*X composition, global phase dropped."""
    if pauli == "X":
        return [("X", qubit)]
    if pauli == "Z":
        return [("Z", qubit)]
    if pauli == "Y":
        return [("X", qubit), ("Z", qubit)]
    raise InvalidScenarioError(f"unknown Pauli {pauli!r}")


@dataclass(frozen=True)
class NoiseScenario:
    """Reproducible noise configuration: located erasures plus Pauli errors.

    Events are (block, position, pauli) triples. Replaying a scenario on
    the same state is bit-exact.
    """

    erasures: tuple = ()
    comp_errors: tuple = ()
    seed: int = 0

    def __post_init__(self):
        erasures = tuple((int(b), int(p), str(g)) for b, p, g in self.erasures)
        comp_errors = tuple((int(b), int(p), str(g)) for b, p, g in self.comp_errors)
        object.__setattr__(self, "erasures", erasures)
        object.__setattr__(self, "comp_errors", comp_errors)
        addresses = [(b, p) for b, p, _ in erasures + comp_errors]
        if len(set(addresses)) != len(addresses):
            raise InvalidScenarioError("two noise events share one address")
        for b, p, g in erasures + comp_errors:
            if not 0 <= b < NUM_BLOCKS:
                raise InvalidScenarioError(f"block {b} out of range")
            if not 1 <= p <= DATA_QUBITS:
                raise InvalidScenarioError(f"position {p} out of range")
            if g not in PAULIS:
                raise InvalidScenarioError(f"unknown Pauli {g!r}")

    def decoder_view(self):
        """What the decoder may see: erasure (block, position) pairs only."""
        return ErasureFlagSet(tuple((b, p) for b, p, _ in self.erasures))

    def events(self):
        return self.erasures + self.comp_errors

    def to_json(self):
        return json.dumps({
            "erasures": [{"block": b, "pos": p, "pauli": g} for b, p, g in self.erasures],
            "comp_errors": [{"block": b, "pos": p, "pauli": g}
                            for b, p, g in self.comp_errors],
            "seed": self.seed,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        rec = json.loads(text)
        return cls(
            erasures=tuple((e["block"], e["pos"], e["pauli"]) for e in rec["erasures"]),
            comp_errors=tuple((e["block"], e["pos"], e["pauli"])
                              for e in rec["comp_errors"]),
            seed=rec.get("seed", 0),
        )


def apply_scenario(state, scenario):
    """Apply every event's Pauli at its address; returns a new state."""
    ops = []
    for b, p, g in scenario.events():
        ops += _pauli_ops(g, DATA_QUBITS * b + p - 1)
    return statevec.apply_ops(state.copy(), ops)


def _check_sweep_params(t_erasures, s_errors, constraint):
    if not 0 <= t_erasures <= MAX_ERASURES:
        raise UnsupportedConfigurationError(
            f"t={t_erasures} erasures outside the supported 0..{MAX_ERASURES}")
    if not 0 <= s_errors <= MAX_ERRORS:
        raise UnsupportedConfigurationError(
            f"s={s_errors} errors outside the supported 0..{MAX_ERRORS}")
    if constraint not in CONSTRAINTS:
        raise UnsupportedConfigurationError(f"unknown constraint {constraint!r}")


def enumerate_scenarios(t_erasures, s_errors, constraint=ERROR_IN_UNDAMAGED_BLOCK):
    """Deterministic lexicographic stream of noise scenarios.

    Erasures occupy distinct blocks. Closed-form counts for the shipped
    code: (t=2, s=0) -> 3 * 25 * 9 = 675; (t=2, s=1, constrained) ->
    675 * 15 = 10125; (t=0, s=1) -> 45; (t=0, s=0) -> 1. Unconstrained
    s=1 streams skip address collisions with erasures.
    """
    _check_sweep_params(t_erasures, s_errors, constraint)
    blocks = range(NUM_BLOCKS)
    positions = range(1, DATA_QUBITS + 1)

    if t_erasures == 0:
        erasure_choices = [()]
    else:
        erasure_choices = []
        for blks in itertools.combinations(blocks, t_erasures):
            for pos in itertools.product(positions, repeat=t_erasures):
                for paulis in itertools.product(PAULIS, repeat=t_erasures):
                    erasure_choices.append(
                        tuple((b, p, g) for b, p, g in zip(blks, pos, paulis)))

    for erasures in erasure_choices:
        if s_errors == 0:
            yield NoiseScenario(erasures=erasures)
            continue
        damaged = {b for b, _, _ in erasures}
        taken = {(b, p) for b, p, _ in erasures}
        if constraint == ERROR_IN_UNDAMAGED_BLOCK:
            error_blocks = [b for b in blocks if b not in damaged]
        else:
            error_blocks = list(blocks)
        for b in error_blocks:
            for p in positions:
                if (b, p) in taken:
                    continue
                for g in PAULIS:
                    yield NoiseScenario(erasures=erasures,
                                        comp_errors=((b, p, g),))


def count_scenarios(t_erasures, s_errors, constraint=ERROR_IN_UNDAMAGED_BLOCK):
    return sum(1 for _ in enumerate_scenarios(t_erasures, s_errors, constraint))


def random_scenario(seed, t_erasures, s_errors, constraint=ERROR_IN_UNDAMAGED_BLOCK):
    """Seeded random pick from the deterministic enumeration."""
    _check_sweep_params(t_erasures, s_errors, constraint)
    pool = list(enumerate_scenarios(t_erasures, s_errors, constraint))
    rng = np.random.default_rng(seed)
    pick = pool[int(rng.integers(len(pool)))]
    return NoiseScenario(pick.erasures, pick.comp_errors, seed=seed)
