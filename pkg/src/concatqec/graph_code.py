"""External error-correcting code built from a graph adjacency matrix.

The encoder isometry phases come from the quadratic form of the adjacency
matrix; decoding applies a fixed phase transform whose output splits into
four syndrome qubits plus the recovered data qubit. The 16-row syndrome
table is regenerated semantically (by searching for the exact restoring
operation) rather than transcribed, and diffed against the bundled
reference in tests.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import statevec
from .exceptions import ConstructionError, InvalidGraphError
from .statevec import StateVector

SYNDROME_BITS = 4

#: Decoder output variables, MSB first: four syndrome bits then the data bit.
DECODER_OUTPUT_VARS = ("l0", "l1", "l3", "l4", "x0h")
DECODER_INPUT_VARS = ("y0", "y1", "y2", "y3", "y4")


@dataclass(frozen=True)
class GraphAdjacency:
    """Symmetric 0/1 adjacency matrix over input + output vertices."""

    n_input: int
    n_output: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int8)
        size = self.n_input + self.n_output
        if m.shape != (size, size):
            raise InvalidGraphError(f"matrix must be {size}x{size}, got {m.shape}")
        if not np.isin(m, (0, 1)).all():
            raise InvalidGraphError("matrix entries must be 0 or 1")
        if (m != m.T).any():
            raise InvalidGraphError("adjacency matrix must be symmetric")
        if np.diagonal(m).any():
            raise InvalidGraphError("adjacency matrix must have zero diagonal")
        object.__setattr__(self, "matrix", m)

    @property
    def edges(self):
        """Unordered vertex pairs (u < v) with an edge."""
        u, v = np.nonzero(np.triu(self.matrix))
        return list(zip(u.tolist(), v.tolist()))


def parse_graph_text(text):
    """Parse the exchange format: first line "n_input n_output", then matrix rows."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    n_in, n_out = (int(x) for x in lines[0].split())
    rows = [[int(x) for x in ln.split()] for ln in lines[1 : 1 + n_in + n_out]]
    return GraphAdjacency(n_in, n_out, np.array(rows, dtype=np.int8))


def graph_to_text(graph):
    lines = [f"{graph.n_input} {graph.n_output}"]
    lines += [" ".join(str(int(x)) for x in row) for row in graph.matrix]
    return "\n".join(lines) + "\n"


def bundled_graph():
    """The shipped 3-regular graph instance (one input, five output vertices)."""
    text = resources.files("concatqec.data").joinpath("graph_513.txt").read_text()
    return parse_graph_text(text)


@dataclass(frozen=True)
class QuadraticPhase:
    """Multilinear quadratic form: parity of x_u * x_v over the monomial list."""

    monomials: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "monomials", tuple(tuple(pair) for pair in self.monomials))

    def variables(self):
        return {v for pair in self.monomials for v in pair}

    def evaluate(self, assignment):
        """Parity bit of the form under a {var: 0/1} assignment."""
        total = 0
        for u, v in self.monomials:
            total += assignment[u] * assignment[v]
        return total & 1


#: Phase exponent of the decoding transform for the bundled code. There is
#: deliberately no l2 variable: the third output vertex has no syndrome
#: partner, so the syndrome register is the 4 bits (l0, l1, l3, l4).
DECODER_PHASE = QuadraticPhase((
    ("x0h", "y0"), ("x0h", "y1"), ("x0h", "y2"),
    ("y0", "y1"), ("y0", "y3"), ("y1", "y4"),
    ("y2", "y3"), ("y2", "y4"), ("y3", "y4"),
    ("y0", "l0"), ("y1", "l1"), ("y3", "l3"), ("y4", "l4"),
))


def _bit_table(num_vars):
    """(2**num_vars, num_vars) array of bit patterns, MSB first."""
    labels = np.arange(1 << num_vars)
    shifts = np.arange(num_vars - 1, -1, -1)
    return (labels[:, None] >> shifts[None, :]) & 1


def build_encoder(graph):
    """Encoder isometry (2**n_output x 2**n_input) from the graph.

    Column for input label x holds e^{i*pi*gamma(x, y)} / sqrt(2**n) at each
    output label y, with gamma the half quadratic form of the adjacency
    matrix; for a symmetric zero-diagonal matrix that is the edge-sum parity.
    """
    k, n = graph.n_input, graph.n_output
    in_bits = _bit_table(k)   # (2**k, k)
    out_bits = _bit_table(n)  # (2**n, n)
    # Combined assignment d = (inputs, outputs); parity over edges u < v.
    phase = np.zeros((1 << n, 1 << k), dtype=np.int64)
    for u, v in graph.edges:
        du = in_bits[:, u][None, :] if u < k else out_bits[:, u - k][:, None]
        dv = in_bits[:, v][None, :] if v < k else out_bits[:, v - k][:, None]
        phase += du * dv
    enc = ((-1.0) ** (phase & 1)).astype(np.complex128) / np.sqrt(1 << n)
    dev = np.abs(enc.conj().T @ enc - np.eye(1 << k)).max()
    if dev > 1e-10:
        raise ConstructionError(f"encoder is not an isometry (deviation {dev:.3e})")
    return enc


def build_syndrome_decoder(theta=DECODER_PHASE):
    """Decoding transform (32x32) with entries e^{-i*pi*theta} / sqrt(32).

    Input labels run over the codeword bits (y0..y4), output labels over
    (l0, l1, l3, l4, x0h). Raises ConstructionError if the resulting matrix
    is not unitary, which signals a mistranscribed phase form.
    """
    unknown = theta.variables() - set(DECODER_INPUT_VARS) - set(DECODER_OUTPUT_VARS)
    if unknown:
        raise ValueError(f"phase form references unknown variables {sorted(unknown)}")
    in_bits = _bit_table(5)
    out_bits = _bit_table(5)
    phase = np.zeros((32, 32), dtype=np.int64)
    for u, v in theta.monomials:
        du = (in_bits[:, DECODER_INPUT_VARS.index(u)][None, :]
              if u in DECODER_INPUT_VARS
              else out_bits[:, DECODER_OUTPUT_VARS.index(u)][:, None])
        dv = (in_bits[:, DECODER_INPUT_VARS.index(v)][None, :]
              if v in DECODER_INPUT_VARS
              else out_bits[:, DECODER_OUTPUT_VARS.index(v)][:, None])
        phase += du * dv
    dec = ((-1.0) ** (phase & 1)).astype(np.complex128) / np.sqrt(32)
    dev = np.abs(dec.conj().T @ dec - np.eye(32)).max()
    if dev > 1e-10:
        raise ConstructionError(f"decoding transform is not unitary (deviation {dev:.3e})")
    return dec


def encode_data(encoder, state):
    """Apply the encoder isometry to the leading qubit of ``state``."""
    m = state.amps.reshape(2, -1)
    out = encoder @ m
    return StateVector(state.num_qubits + 4, out.reshape(-1))


def decode_and_extract(decoder, state):
    """Apply the decoding transform to the leading five qubits, measure the
    syndrome qubits, and return (syndrome bitstring, residual state).

    The four syndrome qubits are removed from the returned state; its
    leading qubit is the recovered data qubit.
    """
    m = state.amps.reshape(32, -1)
    transformed = StateVector(state.num_qubits, (decoder @ m).reshape(-1))
    return statevec.collapse_leading(transformed, SYNDROME_BITS)


@dataclass(frozen=True)
class CorrectionOp:
    """Bit-flip (B) / phase-flip (S) sequence for the recovered data qubit.

    ``sequence`` is in application order; the table label uses operator
    product notation, i.e. the rightmost letter acts first.
    """

    sequence: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sequence", tuple(self.sequence))
        if len(self.sequence) > 3:
            raise ValueError("correction sequences have length <= 3")
        if set(self.sequence) - {"B", "S"}:
            raise ValueError("correction steps must be B or S")

    @property
    def label(self):
        if not self.sequence:
            return "None"
        return "".join(reversed(self.sequence)) + "5"

    @classmethod
    def from_label(cls, label):
        if label in ("None", "", None):
            return cls(())
        if not label.endswith("5"):
            raise ValueError(f"unrecognized correction label {label!r}")
        return cls(tuple(reversed(label[:-1])))


def apply_correction(data_state, op):
    """Apply the correction sequence to the data qubit (leading qubit)."""
    out = data_state.copy()
    ops = [("X" if step == "B" else "Z", 0) for step in op.sequence]
    return statevec.apply_ops(out, ops)


@dataclass(frozen=True)
class SyndromeRow:
    syndrome: str
    error_label: str
    data_state_form: str
    correction: CorrectionOp


@dataclass
class SyndromeTable:
    rows: list

    def __post_init__(self):
        syndromes = [r.syndrome for r in self.rows]
        if len(set(syndromes)) != len(syndromes):
            raise ValueError("duplicate syndromes in table")
        self._by_syndrome = {r.syndrome: r for r in self.rows}

    def lookup(self, syndrome):
        return self._by_syndrome[syndrome]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["syndrome", "error_label", "data_state_form", "correction"])
        for r in sorted(self.rows, key=lambda r: r.syndrome):
            w.writerow([r.syndrome, r.error_label, r.data_state_form, r.correction.label])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            rows.append(SyndromeRow(rec["syndrome"], rec["error_label"],
                                    rec["data_state_form"],
                                    CorrectionOp.from_label(rec["correction"])))
        return cls(rows)


def bundled_reference_table():
    """Bundled reference copy of the syndrome table (regression anchor)."""
    text = resources.files("concatqec.data").joinpath(
        "syndrome_table_reference.csv").read_text()
    return SyndromeTable.from_csv(text)


def _error_catalogue():
    """(label, ops) for no error plus B/S/BS at each codeword position.

    Composite labels are operator products, so BS_i applies the phase flip
    first, then the bit flip.
    """
    catalogue = [("None", [])]
    for i in range(1, 6):
        catalogue.append((f"B{i}", [("X", i - 1)]))
    for i in range(1, 6):
        catalogue.append((f"S{i}", [("Z", i - 1)]))
    for i in range(1, 6):
        catalogue.append((f"BS{i}", [("Z", i - 1), ("X", i - 1)]))
    return catalogue


#: Probe amplitudes used to disambiguate phase-only effects: |0> and
#: (|0> + i|1>)/sqrt(2).
_PROBES = (np.array([1.0, 0.0], dtype=complex),
           np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2))

_FORM_MAPS = [(flip, s0, s1) for flip in (0, 1) for s0 in (1, -1) for s1 in (1, -1)]


def _match_form(pairs):
    """Identify data = s0*c0|flip> + s0*s1*c1|1-flip> across probe pairs."""
    for flip, s0, s1 in _FORM_MAPS:
        ok = True
        for c, d in pairs:
            expect = np.array([s0 * c[0], s0 * s1 * c[1]], dtype=complex)
            if flip:
                expect = expect[::-1]
            if np.abs(d - expect).max() > 1e-10:
                ok = False
                break
        if ok:
            ket0, ket1 = ("|1>", "|0>") if flip else ("|0>", "|1>")
            sign0 = "-" if s0 < 0 else ""
            sign1 = "-" if s0 * s1 < 0 else "+"
            return f"{sign0}c(0){ket0} {sign1} c(1){ket1}"
    raise ConstructionError("decoded data qubit is not a signed permutation of the input")


def _search_correction(pairs):
    """Unique shortest B/S sequence restoring the data qubit exactly."""
    sequences = [()]
    for length in (1, 2, 3):
        sequences += [seq for seq in _all_seqs(length)]
    best = None
    best_len = None
    for seq in sequences:
        if best_len is not None and len(seq) > best_len:
            break
        op = CorrectionOp(seq)
        if all(_restores_exactly(op, c, d) for c, d in pairs):
            if best_len == len(seq):
                raise ConstructionError(
                    f"correction is not unique at length {best_len}: "
                    f"{best.sequence} and {seq}")
            if best is None:
                best, best_len = op, len(seq)
    if best is None:
        raise ConstructionError("no correction of length <= 3 restores the data qubit")
    return best


def _all_seqs(length):
    seqs = [()]
    for _ in range(length):
        seqs = [s + (g,) for s in seqs for g in ("B", "S")]
    return seqs


def _restores_exactly(op, c, d):
    out = apply_correction(StateVector(1, d), op)
    return np.abs(out.amps - c).max() <= 1e-10


def generate_syndrome_table(encoder, decoder):
    """Regenerate the 16-row syndrome table by enumeration.

    Each single-position error (and the identity) is applied to encoded
    probe states; the deterministic syndrome is recorded and the correction
    is found semantically as the unique shortest sequence restoring the
    data qubit exactly (not merely up to phase - fidelity-level search
    would pick shorter, phase-sloppy sequences and disagree with the
    reference table).
    """
    rows = []
    for label, error_ops in _error_catalogue():
        pairs = []
        syndrome = None
        for c in _PROBES:
            codeword = StateVector(5, (encoder @ c).reshape(-1))
            statevec.apply_ops(codeword, [(k, q) for k, q in error_ops])
            bits, data = decode_and_extract(decoder, codeword)
            if syndrome is None:
                syndrome = bits
            elif bits != syndrome:
                raise ConstructionError(
                    f"error {label}: syndrome depends on the input "
                    f"({syndrome} vs {bits})")
            pairs.append((c, data.amps))
        rows.append(SyndromeRow(syndrome, label, _match_form(pairs),
                                _search_correction(pairs)))
    table = SyndromeTable(rows)
    if len(table.rows) != 16:
        raise ConstructionError(f"expected 16 rows, got {len(table.rows)}")
    none_row = table.lookup("0000")
    if none_row.error_label != "None":
        raise ConstructionError("syndrome 0000 is not the no-error row")
    return table


def diff_tables(generated, reference):
    """Human-readable differences between two syndrome tables."""
    diffs = []
    ref = {r.syndrome: r for r in reference.rows}
    gen = {r.syndrome: r for r in generated.rows}
    for syndrome in sorted(set(ref) | set(gen)):
        a, b = gen.get(syndrome), ref.get(syndrome)
        if a is None:
            diffs.append(f"{syndrome}: missing from generated table")
        elif b is None:
            diffs.append(f"{syndrome}: unexpected extra row")
        elif (a.error_label, a.data_state_form, a.correction.label) != (
                b.error_label, b.data_state_form, b.correction.label):
            diffs.append(
                f"{syndrome}: generated ({a.error_label}, {a.data_state_form!r}, "
                f"{a.correction.label}) != reference ({b.error_label}, "
                f"{b.data_state_form!r}, {b.correction.label})")
    return diffs
