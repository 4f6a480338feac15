"""Dense state-vector simulator for small registers (up to 21 qubits).

Conventions
-----------
* Qubit 0 is the most significant bit of the basis label, matching the
  left-to-right ket notation ``|b0 b1 ... b_{n-1}>``.
* Registers are grouped in 5-qubit blocks; ``QubitAddress(block, position)``
  uses the 1-based in-block position, so it flattens to global index
  ``5 * block + position - 1``.
* States are kept normalized; comparisons go through :func:`fidelity`,
  which absorbs global phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .backends import kernels
from .exceptions import CapacityError, NondeterministicMeasurementError

MAX_QUBITS = 21
BLOCK_SIZE = 5

#: Tolerance for algebraic identities (unitarity, involutions).
ATOL_ALGEBRA = 1e-12
#: Default tolerance for acceptance-style fidelity checks.
ATOL_ACCEPT = 1e-9
#: Probability mass a measurement outcome needs to count as deterministic.
DETERMINISTIC_THRESHOLD = 1.0 - 1e-9

_ISQ2 = 1.0 / np.sqrt(2.0)

GATE_MATRICES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _ISQ2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True, order=True)
class QubitAddress:
    """Qubit ``position`` (1-based) inside 5-qubit ``block``."""

    block: int
    position: int

    def __post_init__(self):
        if self.block < 0:
            raise ValueError(f"block must be >= 0, got {self.block}")
        if not 1 <= self.position <= BLOCK_SIZE:
            raise ValueError(f"position must be in 1..{BLOCK_SIZE}, got {self.position}")

    @property
    def index(self):
        """Global qubit index; (block, position) -> 5*block + position - 1 is a bijection."""
        return BLOCK_SIZE * self.block + self.position - 1

    @classmethod
    def from_index(cls, index):
        return cls(index // BLOCK_SIZE, index % BLOCK_SIZE + 1)


@dataclass
class GateSpec:
    """A gate from the supported alphabet, addressed by (block, position).

    ``kind`` is one of H/X/Y/Z (no controls), CNOT/CZ (one control),
    TOFFOLI (two controls) or generic-2x2 (no controls, explicit unitary
    ``matrix``).
    """

    kind: str
    target: QubitAddress
    controls: tuple = ()
    matrix: np.ndarray | None = None

    _EXPECTED_CONTROLS = {"H": 0, "X": 0, "Y": 0, "Z": 0, "generic-2x2": 0,
                          "CNOT": 1, "CZ": 1, "TOFFOLI": 2}

    def __post_init__(self):
        self.controls = tuple(self.controls)
        if self.kind not in self._EXPECTED_CONTROLS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.controls) != self._EXPECTED_CONTROLS[self.kind]:
            raise ValueError(f"{self.kind} expects {self._EXPECTED_CONTROLS[self.kind]} "
                             f"control(s), got {len(self.controls)}")
        addrs = [a.index for a in (*self.controls, self.target)]
        if len(set(addrs)) != len(addrs):
            raise ValueError("repeated qubit address among controls/target")
        if self.kind == "generic-2x2":
            if self.matrix is None:
                raise ValueError("generic-2x2 gate needs a matrix")
            m = np.asarray(self.matrix, dtype=complex)
            if m.shape != (2, 2):
                raise ValueError("generic-2x2 matrix must be 2x2")
            if np.abs(m.conj().T @ m - np.eye(2)).max() > 1e-10:
                raise ValueError("generic-2x2 matrix is not unitary")
            self.matrix = m


@dataclass
class StateVector:
    """Normalized amplitudes over ``2**num_qubits`` basis states."""

    num_qubits: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise CapacityError(f"num_qubits must be in 1..{MAX_QUBITS}, got {self.num_qubits}")
        self.amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if self.amps.shape != (1 << self.num_qubits,):
            raise ValueError(f"amplitude array must have length 2**{self.num_qubits}")

    def copy(self):
        return StateVector(self.num_qubits, self.amps.copy())

    def norm(self):
        return float(np.linalg.norm(self.amps))


def basis_state(num_qubits, bits):
    """Computational basis state |bits>, e.g. basis_state(2, "10")."""
    bits = "".join(str(b) for b in bits)
    if len(bits) != num_qubits:
        raise ValueError(f"expected {num_qubits} bits, got {len(bits)}")
    if set(bits) - {"0", "1"}:
        raise ValueError(f"bits must be 0/1, got {bits!r}")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return StateVector(num_qubits, amps)


def random_state(num_qubits, seed):
    """Haar-ish random normalized state, reproducible from the seed."""
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    return StateVector(num_qubits, amps / np.linalg.norm(amps))


def _check_indices(n, idx):
    if len(set(idx)) != len(idx):
        raise ValueError("repeated qubit address")
    for q in idx:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for {n} qubits")


def apply_ops(state, ops):
    """Apply a sequence of (kind, *indices) gate tuples in place.

    This is the hot path used by the encoding/decoding pipelines; the
    public, address-based entry point is :func:`apply_gate`.
    """
    a, n = state.amps, state.num_qubits
    for op in ops:
        kind = op[0]
        if kind == "CNOT":
            kernels.apply_cnot(a, n, op[1], op[2])
        elif kind == "H":
            kernels.apply_h(a, n, op[1])
        elif kind == "CZ":
            kernels.apply_cz(a, n, op[1], op[2])
        elif kind == "TOFFOLI":
            kernels.apply_ccx(a, n, op[1], op[2], op[3])
        elif kind == "X":
            kernels.apply_x(a, n, op[1])
        elif kind == "Y":
            kernels.apply_y(a, n, op[1])
        elif kind == "Z":
            kernels.apply_z(a, n, op[1])
        else:
            raise ValueError(f"unknown op kind {kind!r}")
    return state


def apply_gate(state, gate):
    """Apply a :class:`GateSpec`; returns a new state, input untouched."""
    idx = [a.index for a in (*gate.controls, gate.target)]
    _check_indices(state.num_qubits, idx)
    out = state.copy()
    if gate.kind == "generic-2x2":
        m = gate.matrix
        kernels.apply_unitary1(out.amps, out.num_qubits, idx[-1],
                               m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    else:
        apply_ops(out, [(gate.kind, *idx)])
    return out


def tensor(a, b):
    """Tensor product; ``a``'s qubits become the leading (most significant) ones."""
    if a.num_qubits + b.num_qubits > MAX_QUBITS:
        raise CapacityError(f"{a.num_qubits}+{b.num_qubits} qubits exceed the "
                            f"{MAX_QUBITS}-qubit budget")
    return StateVector(a.num_qubits + b.num_qubits, np.kron(a.amps, b.amps))


def insert_zero_qubits(state, at, count, out=None):
    """Insert ``count`` fresh |0> qubits so they occupy indices at..at+count-1.

    ``out`` may supply a reusable flat buffer of length
    ``2**(num_qubits+count)``; sweep loops use this to avoid reallocating
    large arrays.
    """
    if state.num_qubits + count > MAX_QUBITS:
        raise CapacityError(f"{state.num_qubits}+{count} qubits exceed the "
                            f"{MAX_QUBITS}-qubit budget")
    if not 0 <= at <= state.num_qubits:
        raise ValueError(f"insertion point {at} out of range")
    lead = 1 << at
    rest = 1 << (state.num_qubits - at)
    if out is None:
        out = np.zeros((lead, 1 << count, rest), dtype=np.complex128)
    else:
        out = out.reshape(lead, 1 << count, rest)
        out[:, 1:, :] = 0.0
    out[:, 0, :] = state.amps.reshape(lead, rest)
    return StateVector(state.num_qubits + count, out.reshape(-1))


def fidelity(a, b):
    """|<a|b>|^2 - symmetric and insensitive to global phase."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("fidelity arguments must have equal qubit counts")
    return float(np.abs(np.vdot(a.amps, b.amps)) ** 2)


def _marginal(state, targets):
    """Probabilities of the 2**k outcomes on ``targets``, plus the reshaped view."""
    n, k = state.num_qubits, len(targets)
    t = state.amps.reshape([2] * n)
    m = np.moveaxis(t, targets, range(k)).reshape(1 << k, -1)
    probs = np.einsum("ij,ij->i", m, m.conj()).real
    return probs, m


def dominant_outcome(state, targets):
    """Most likely measurement outcome on ``targets`` and its probability.

    Does not collapse the state; used to check syndrome determinism.
    """
    idx = [a.index if isinstance(a, QubitAddress) else int(a) for a in targets]
    _check_indices(state.num_qubits, idx)
    probs, _ = _marginal(state, idx)
    best = int(np.argmax(probs))
    return f"{best:0{len(idx)}b}", float(probs[best])


def measure_deterministic(state, targets):
    """Measure ``targets`` (QubitAddress list) expecting a near-certain outcome.

    Returns the outcome bitstring and the renormalized post-measurement
    state (dimensions unchanged). Raises
    :class:`NondeterministicMeasurementError` if no outcome carries
    probability >= 1 - 1e-9.
    """
    idx = [a.index if isinstance(a, QubitAddress) else int(a) for a in targets]
    _check_indices(state.num_qubits, idx)
    probs, m = _marginal(state, idx)
    best = int(np.argmax(probs))
    if probs[best] < DETERMINISTIC_THRESHOLD:
        raise NondeterministicMeasurementError(
            f"outcome {best:0{len(idx)}b} has probability {probs[best]:.6f} < "
            f"{DETERMINISTIC_THRESHOLD}; measurement is not deterministic",
            outcome=f"{best:0{len(idx)}b}", probability=float(probs[best]))
    out = np.zeros_like(m)
    out[best] = m[best] / np.sqrt(probs[best])
    n, k = state.num_qubits, len(idx)
    amps = np.moveaxis(out.reshape([2] * n), range(k), idx).reshape(-1)
    return f"{best:0{k}b}", StateVector(n, amps)


def measure_sampled(state, targets, seed):
    """Seeded sampling measurement (exploratory use only)."""
    idx = [a.index if isinstance(a, QubitAddress) else int(a) for a in targets]
    _check_indices(state.num_qubits, idx)
    probs, m = _marginal(state, idx)
    rng = np.random.default_rng(seed)
    pick = int(rng.choice(len(probs), p=probs / probs.sum()))
    out = np.zeros_like(m)
    out[pick] = m[pick] / np.sqrt(probs[pick])
    n, k = state.num_qubits, len(idx)
    amps = np.moveaxis(out.reshape([2] * n), range(k), idx).reshape(-1)
    return f"{pick:0{k}b}", StateVector(n, amps)


def collapse_leading(state, count):
    """Deterministically measure the first ``count`` qubits and drop them."""
    bits, post = measure_deterministic(state, list(range(count)))
    m = post.amps.reshape(1 << count, -1)
    return bits, StateVector(state.num_qubits - count, m[int(bits, 2)].copy())


def subsystem_purity(state, qubits):
    """Tr(rho^2) of the reduced state on ``qubits`` (global qubit indices)."""
    idx = list(qubits)
    _check_indices(state.num_qubits, idx)
    n, k = state.num_qubits, len(idx)
    t = state.amps.reshape([2] * n)
    m = np.moveaxis(t, idx, range(k)).reshape(1 << k, -1)
    # For a pure global state the subsystem and its complement share purity;
    # form the density matrix on the smaller side.
    if m.shape[0] <= m.shape[1]:
        rho = m @ m.conj().T
    else:
        rho = m.conj().T @ m
    return float(np.einsum("ij,ij->", rho, rho.conj()).real)


def block_purity(state, block):
    """Purity of the reduced state of 5-qubit ``block``."""
    base = BLOCK_SIZE * block
    if base + BLOCK_SIZE > state.num_qubits or block < 0:
        raise ValueError(f"block {block} out of range for {state.num_qubits} qubits")
    return subsystem_purity(state, range(base, base + BLOCK_SIZE))


def factor_out_leading(state, count):
    """Drop the leading ``count`` qubits, assuming they factor out.

    The leading register is projected onto its dominant component; callers
    must certify factorization first (see :func:`subsystem_purity` or
    :func:`certified_factor_out`).
    """
    m = state.amps.reshape(1 << count, -1)
    weights = np.einsum("ij,ij->i", m, m.conj()).real
    row = m[int(np.argmax(weights))]
    return StateVector(state.num_qubits - count, row / np.linalg.norm(row))


def certified_factor_out(state, count):
    """Factor out the leading ``count`` qubits with a purity certificate.

    Returns (trailing-register state, purity lower bound). The bound comes
    from the rank-1 residual eps of the bipartition: the leading register's
    reduced state has purity >= (1 - eps)^2, so a bound close to one
    certifies that the two registers factorize.
    """
    v, residual = kernels.dominant_factor(
        state.amps, 1 << count, 1 << (state.num_qubits - count))
    purity_bound = max(0.0, (1.0 - residual) ** 2)
    return StateVector(state.num_qubits - count, v), purity_bound
