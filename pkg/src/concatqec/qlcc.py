"""Internal measurement-free loss-correcting code.

Five data qubits are spread over three 5-qubit blocks (one data block plus
two redundancy blocks in a GHZ-like structure). Erasure recovery appends a
fresh ancilla block, transfers the logical content into it with a block
decoding circuit, and disentangles each damaged block with a dedicated
recovery circuit - no measurement anywhere on the recovery path.

Qubit layout: block d occupies global qubits 5d..5d+4 (in-block positions
are 1-based); the fresh recovery block is block 3 at qubits 15..19. Any
spectator qubits (e.g. a reference half of an entangled pair) trail the
register from qubit 15 up and are shifted right when block 3 is inserted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import statevec
from .exceptions import RecoveryFailureError, UnsupportedConfigurationError

DATA_QUBITS = 5
NUM_BLOCKS = 3
RECOVERY_BLOCK = 3
ENCODED_QUBITS = DATA_QUBITS * NUM_BLOCKS

#: Purity a recovered register must reach for extraction to proceed.
RECOVERY_PURITY_THRESHOLD = 1.0 - 1e-9


@dataclass(frozen=True)
class QlccParams:
    """Shipped instance: 5 data qubits, 2 redundancy blocks, 1 recovery block."""

    k: int = DATA_QUBITS
    t: int = NUM_BLOCKS - 1
    num_blocks: int = NUM_BLOCKS
    recovery_block: int = RECOVERY_BLOCK


@dataclass(frozen=True)
class ErasureFlagSet:
    """Decoder-visible erasure locations: (block, position) pairs only."""

    flags: tuple = ()

    def __post_init__(self):
        flags = tuple((int(b), int(p)) for b, p in self.flags)
        object.__setattr__(self, "flags", flags)
        if len(set(flags)) != len(flags):
            raise ValueError("duplicate erasure flag")
        for b, p in flags:
            if not 0 <= b < NUM_BLOCKS:
                raise ValueError(f"flag block {b} out of range")
            if not 1 <= p <= DATA_QUBITS:
                raise ValueError(f"flag position {p} out of range")

    @property
    def blocks(self):
        return frozenset(b for b, _ in self.flags)

    def require_supported(self):
        """Supported recovery: at most one flag per block, at most two flags,
        and at least one block left unflagged."""
        if len(self.flags) > NUM_BLOCKS - 1:
            raise UnsupportedConfigurationError(
                f"{len(self.flags)} erasures exceed the supported budget of "
                f"{NUM_BLOCKS - 1}")
        if len(self.blocks) != len(self.flags):
            raise UnsupportedConfigurationError(
                "two erasures in one block are outside the supported set")
        if len(self.blocks) >= NUM_BLOCKS:
            raise UnsupportedConfigurationError("all blocks damaged")


def _q(block, position):
    return DATA_QUBITS * block + position - 1


def build_uenc():
    """Encoding circuit, applied right-to-left as written:

    cross-block copies from block 0, a Hadamard on position 5 of every
    block, then the in-block fan-out from position 5.
    """
    ops = []
    for d in (1, 2):
        for i in range(1, 6):
            ops.append(("CNOT", _q(0, i), _q(d, i)))
    for d in range(NUM_BLOCKS):
        ops.append(("H", _q(d, 5)))
    for d in range(NUM_BLOCKS):
        for i in range(1, 5):
            ops.append(("CNOT", _q(d, 5), _q(d, i)))
    return ops


def encode(data5):
    """Encode a 5-qubit register into 3 blocks (15 qubits).

    ``data5`` may carry trailing spectator qubits; two fresh |00000> blocks
    are inserted right after the data block.
    """
    if data5.num_qubits < DATA_QUBITS:
        raise ValueError(f"need at least {DATA_QUBITS} qubits, got {data5.num_qubits}")
    out = statevec.insert_zero_qubits(data5, DATA_QUBITS, 2 * DATA_QUBITS)
    return statevec.apply_ops(out, build_uenc())


def block_factor(label):
    """Single-block state carrying logical label ``label`` (5 bits, MSB first).

    The block form is (|y1 y2 y3 y4, 0> + (-1)^y5 |~y1 ~y2 ~y3 ~y4, 1>)/sqrt(2).
    """
    bits = [(label >> s) & 1 for s in range(4, -1, -1)]
    vec = np.zeros(32, dtype=np.complex128)
    head = 0
    for b in bits[:4]:
        head = (head << 1) | b
    vec[(head << 1) | 0] = 1.0
    flipped = 0
    for b in bits[:4]:
        flipped = (flipped << 1) | (b ^ 1)
    vec[(flipped << 1) | 1] = (-1.0) ** bits[4]
    return vec / np.sqrt(2)


def logical_ghz_state(label):
    """Three-block logical basis state: the block factor tensored three times."""
    f = block_factor(label)
    return np.kron(np.kron(f, f), f)


def build_udec(damaged_blocks):
    """Block decoding circuit acting only on undamaged blocks.

    Each undamaged block is unwound (fan-out, Hadamard), copied into block
    3, then cleared against it. Copying from an even number of blocks would
    cancel pairwise, so with two undamaged blocks only the lowest-index one
    acts as the copy source; all undamaged blocks are still cleared.
    """
    damaged = frozenset(int(d) for d in damaged_blocks)
    if not damaged <= set(range(NUM_BLOCKS)):
        raise ValueError(f"damaged blocks {sorted(damaged)} out of range")
    undamaged = sorted(set(range(NUM_BLOCKS)) - damaged)
    if not undamaged:
        raise UnsupportedConfigurationError("all blocks damaged")
    sources = undamaged if len(undamaged) % 2 == 1 else undamaged[:1]
    ops = []
    for d in undamaged:
        for i in range(1, 5):
            ops.append(("CNOT", _q(d, 5), _q(d, i)))
        ops.append(("H", _q(d, 5)))
    for d in sources:
        for i in range(1, 6):
            ops.append(("CNOT", _q(d, i), _q(RECOVERY_BLOCK, i)))
    for d in undamaged:
        for i in range(1, 6):
            ops.append(("CNOT", _q(RECOVERY_BLOCK, i), _q(d, i)))
    return ops


def build_urec(position, block):
    """Recovery circuit for one flagged erasure at (position, block).

    For position 5 the damaged block is rewritten from block 3 and a single
    controlled-Z clears the residual phase. For position p != 5 the same
    pattern is used with p in place of 1 throughout, r being the largest
    working position below 5.
    """
    if not 0 <= block < NUM_BLOCKS:
        raise ValueError(f"block {block} out of range")
    if not 1 <= position <= DATA_QUBITS:
        raise ValueError(f"position {position} out of range")
    working = [i for i in range(1, 6) if i != position]
    r = max(i for i in working if i != 5)
    if position == 5:
        ops = [("CNOT", _q(3, i), _q(block, i)) for i in range(1, 5)]
        ops.append(("CZ", _q(3, 5), _q(block, r)))
        return ops
    ops = [("CNOT", _q(3, position), _q(block, i)) for i in working]
    ops += [("CNOT", _q(3, i), _q(block, i)) for i in range(1, 5) if i != position]
    ops += [("TOFFOLI", _q(3, position), _q(3, 5), _q(block, r)),
            ("CZ", _q(3, 5), _q(block, r)),
            ("TOFFOLI", _q(3, position), _q(3, 5), _q(block, r))]
    return ops


def recovery_ops(flags):
    """Full measurement-free recovery sequence for a flag set.

    Block decoding once, then one recovery circuit per flag in descending
    block order. The returned trace contains gate tuples only - no
    measurement of any kind appears on this path.
    """
    flags = flags if isinstance(flags, ErasureFlagSet) else ErasureFlagSet(tuple(flags))
    flags.require_supported()
    ops = build_udec(flags.blocks)
    for b, p in sorted(flags.flags, key=lambda f: -f[0]):
        ops += build_urec(p, b)
    return ops


def decode_and_recover(state, flags, info=None, scratch=None):
    """Recover the 5-qubit register from a (possibly erased) 3-block state.

    Appends the fresh block 3, runs the recovery sequence, certifies that
    the three original blocks factor out (purity of their reduced state
    within 1e-9 of one, via a rank-1 factorization bound), and returns the
    extracted register: block 3 followed by whatever spectator qubits the
    input carried.

    ``info``, if given, is filled with the applied ops and the certified
    purity. ``scratch`` may supply a reusable work buffer of length
    ``2**(num_qubits+5)`` for sweep loops.
    """
    if state.num_qubits < ENCODED_QUBITS:
        raise ValueError(f"need at least {ENCODED_QUBITS} qubits, got {state.num_qubits}")
    ops = recovery_ops(flags)
    work = statevec.insert_zero_qubits(state, ENCODED_QUBITS, DATA_QUBITS, out=scratch)
    statevec.apply_ops(work, ops)
    extracted, purity = statevec.certified_factor_out(work, ENCODED_QUBITS)
    if info is not None:
        info["ops"] = ops
        info["purity"] = purity
    if purity < RECOVERY_PURITY_THRESHOLD:
        raise RecoveryFailureError(
            f"recovered register is not extractable (purity bound {purity:.12f}); "
            f"configuration outside the code's capability", purity=purity)
    return extracted
