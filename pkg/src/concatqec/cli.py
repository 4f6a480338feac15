"""Command-line front end.

Subcommands: ``syndrome-table`` (regenerate and diff against the bundled
reference), ``example`` (run the worked erasure + error scenario),
``sweep`` (exhaustive verification over a noise enumeration) and
``selfcheck`` (algebraic identity suite).

Exit codes: 0 all assertions pass, 1 verification failure, 2 invalid
configuration. ``CONCATQEC_TOLERANCE`` overrides the default fidelity
tolerance; an explicit ``--tolerance`` flag wins over the environment.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import channel, concat, graph_code, qlcc, statevec
from .backends import active_backend
from .exceptions import ConstructionError, UnsupportedConfigurationError

EXIT_OK = 0
EXIT_VERIFICATION_FAILURE = 1
EXIT_INVALID_CONFIG = 2

DEFAULT_TOLERANCE = 1e-9


@dataclass
class RunConfig:
    command: str
    format: str = "text"
    tolerance: float = DEFAULT_TOLERANCE
    seed: int = 0
    t: int = 2
    s: int = 1
    constraint: str = channel.ERROR_IN_UNDAMAGED_BLOCK
    workers: int = 1
    out: str | None = None
    inject_theta_fault: bool = False


def _default_tolerance():
    env = os.environ.get("CONCATQEC_TOLERANCE")
    if env:
        try:
            return float(env)
        except ValueError:
            raise UnsupportedConfigurationError(
                f"invalid CONCATQEC_TOLERANCE value {env!r}")
    return DEFAULT_TOLERANCE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="concatqec",
        description="Concatenated erasure + Pauli error correction at desk scale.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--tolerance", type=float, default=None,
                       help=f"fidelity tolerance (default {DEFAULT_TOLERANCE}, "
                            f"or CONCATQEC_TOLERANCE)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", metavar="FILE", default=None,
                       help="write the artifact to FILE instead of stdout")

    p = sub.add_parser("syndrome-table",
                       help="regenerate the 16-row syndrome table and diff it "
                            "against the bundled reference")
    common(p)
    p.add_argument("--inject-theta-fault", action="store_true",
                   help=argparse.SUPPRESS)

    p = sub.add_parser("example",
                       help="run the worked two-erasure + one-error scenario")
    common(p)

    p = sub.add_parser("sweep", help="exhaustive verification sweep")
    common(p)
    p.add_argument("--t", type=int, default=2, help="number of erasures (0..2)")
    p.add_argument("--s", type=int, default=1, help="number of Pauli errors (0..1)")
    p.add_argument("--constraint", choices=channel.CONSTRAINTS,
                   default=channel.ERROR_IN_UNDAMAGED_BLOCK)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("selfcheck", help="algebraic identity suite")
    common(p)
    return parser


def _config_from_args(args):
    cfg = RunConfig(command=args.command)
    cfg.format = args.format
    cfg.tolerance = args.tolerance if args.tolerance is not None else _default_tolerance()
    cfg.seed = args.seed
    cfg.out = args.out
    cfg.inject_theta_fault = getattr(args, "inject_theta_fault", False)
    cfg.t = getattr(args, "t", 2)
    cfg.s = getattr(args, "s", 1)
    cfg.constraint = getattr(args, "constraint", channel.ERROR_IN_UNDAMAGED_BLOCK)
    cfg.workers = getattr(args, "workers", 1)
    if not 0.0 < cfg.tolerance < 1e-3:
        raise UnsupportedConfigurationError(
            f"tolerance must lie in (0, 1e-3), got {cfg.tolerance}")
    return cfg


def _emit(cfg, text):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _faulty_theta():
    """A transcription slip in the phase form: one syndrome coupler moved."""
    monomials = [("y2", "l0") if pair == ("y0", "l0") else pair
                 for pair in graph_code.DECODER_PHASE.monomials]
    return graph_code.QuadraticPhase(tuple(monomials))


def cmd_syndrome_table(cfg):
    graph = graph_code.bundled_graph()
    encoder = graph_code.build_encoder(graph)
    theta = _faulty_theta() if cfg.inject_theta_fault else graph_code.DECODER_PHASE
    try:
        decoder = graph_code.build_syndrome_decoder(theta)
        table = graph_code.generate_syndrome_table(encoder, decoder)
    except ConstructionError as exc:
        _emit(cfg, f"table generation failed: {exc}\n")
        return EXIT_VERIFICATION_FAILURE
    reference = graph_code.bundled_reference_table()
    diffs = graph_code.diff_tables(table, reference)

    if cfg.format == "csv":
        _emit(cfg, table.to_csv())
    elif cfg.format == "json":
        rows = [{"syndrome": r.syndrome, "error_label": r.error_label,
                 "data_state_form": r.data_state_form,
                 "correction": r.correction.label}
                for r in sorted(table.rows, key=lambda r: r.syndrome)]
        _emit(cfg, json.dumps({"rows": rows, "matches_reference": not diffs},
                              sort_keys=True, indent=2))
    else:
        lines = [f"{'syndrome':8s} {'error':6s} {'data state':22s} correction"]
        for r in sorted(table.rows, key=lambda r: r.syndrome):
            lines.append(f"{r.syndrome:8s} {r.error_label:6s} "
                         f"{r.data_state_form:22s} {r.correction.label}")
        lines.append("")
        lines.append("reference match: " + ("yes" if not diffs else "NO"))
        lines += [f"  diff: {d}" for d in diffs]
        _emit(cfg, "\n".join(lines) + "\n")
    if diffs:
        for d in diffs:
            print(f"mismatch: {d}", file=sys.stderr)
        return EXIT_VERIFICATION_FAILURE
    return EXIT_OK


def cmd_example(cfg):
    trace = concat.run_worked_example(seed=cfg.seed or 1009,
                                      tolerance=cfg.tolerance)
    if cfg.format == "json":
        _emit(cfg, json.dumps(trace, sort_keys=True, indent=2))
    elif cfg.format == "csv":
        raise UnsupportedConfigurationError("the example trace has no CSV form")
    else:
        lines = ["worked example: two erasures + one computational error",
                 f"scenario: {json.dumps(trace['scenario'], sort_keys=True)}",
                 f"inputs probed: {trace['inputs']}",
                 f"encoded checksum: {trace['encoded_checksum']}",
                 f"post-noise checksum: {trace['post_noise_checksum']}",
                 f"recovery purity: {trace['recovery_purity']:.9f}",
                 f"syndrome: {trace['syndrome']}",
                 f"correction: {trace['correction']}",
                 f"fidelity: {trace['final_fidelity']:.9f}"]
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if trace["passed"] else EXIT_VERIFICATION_FAILURE


def _split_sweep_report(report, constraint):
    """Partition failures into asserted and unasserted (reported-only) sets.

    Under the unconstrained stream, scenarios whose computational error
    lands inside a damaged block are outside the code's stated capability:
    they are reported but do not gate the exit code.
    """
    asserted, unasserted = [], []
    for f in report.failures:
        damaged = {b for b, _, _ in f.scenario.erasures}
        in_damaged = any(b in damaged for b, _, _ in f.scenario.comp_errors)
        (unasserted if (constraint == channel.UNCONSTRAINED and in_damaged)
         else asserted).append(f)
    return asserted, unasserted


def cmd_sweep(cfg):
    spec = concat.default_spec()
    report = concat.verify_capability(
        spec, cfg.t, cfg.s, constraint=cfg.constraint,
        tolerance=cfg.tolerance, workers=cfg.workers)
    asserted_failures, unasserted_failures = _split_sweep_report(report, cfg.constraint)

    if cfg.format == "json":
        payload = json.loads(report.to_json())
        payload["asserted_failures"] = len(asserted_failures)
        payload["reported_only_failures"] = len(unasserted_failures)
        _emit(cfg, json.dumps(payload, sort_keys=True, indent=2))
    elif cfg.format == "csv":
        lines = ["erasures,comp_errors,syndrome,fidelity"]
        for f in report.failures:
            er = ";".join(f"{b}:{p}:{g}" for b, p, g in f.scenario.erasures)
            ce = ";".join(f"{b}:{p}:{g}" for b, p, g in f.scenario.comp_errors)
            lines.append(f"{er},{ce},{f.syndrome or ''},{f.fidelity:.12f}")
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        # timing goes to stderr so artifacts stay byte-identical per config
        print(f"wall time: {report.wall_time:.1f}s (backend: {active_backend()}, "
              f"workers: {cfg.workers})", file=sys.stderr)
        lines = [f"sweep t={cfg.t} s={cfg.s} constraint={cfg.constraint}",
                 f"total scenarios: {report.total}",
                 f"passed: {report.passed}",
                 f"failed (asserted): {len(asserted_failures)}",
                 f"failed (reported only): {len(unasserted_failures)}",
                 f"min fidelity: {report.min_fidelity:.12f}"]
        shown = 0
        for f in asserted_failures + unasserted_failures:
            if shown >= 25:
                lines.append(f"  ... {len(report.failures) - shown} further "
                             f"failures (use --format json/csv for all)")
                break
            lines.append(f"  FAIL erasures={f.scenario.erasures} "
                         f"errors={f.scenario.comp_errors} syndrome={f.syndrome} "
                         f"fidelity={f.fidelity:.6f}")
            shown += 1
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if not asserted_failures else EXIT_VERIFICATION_FAILURE


def _selfcheck_results(seed):
    rng_seed = seed or 1
    graph = graph_code.bundled_graph()
    encoder = graph_code.build_encoder(graph)
    decoder = graph_code.build_syndrome_decoder()
    spec = concat.default_spec()
    results = []

    dev = np.abs(encoder.conj().T @ encoder - np.eye(2)).max()
    results.append(("encoder isometry", dev, 1e-10))
    dev = np.abs(decoder.conj().T @ decoder - np.eye(32)).max()
    results.append(("decoding transform unitarity", dev, 1e-10))

    # circuit round trips: every gate is an involution, so the reversed
    # sequence is the inverse.
    s15 = statevec.random_state(15, rng_seed)
    work = s15.copy()
    statevec.apply_ops(work, qlcc.build_uenc())
    norm_dev = abs(work.norm() - 1.0)
    statevec.apply_ops(work, list(reversed(qlcc.build_uenc())))
    results.append(("encoding circuit round trip",
                    np.abs(work.amps - s15.amps).max(), 1e-12))

    s20 = statevec.random_state(20, rng_seed + 1)
    recovery = qlcc.recovery_ops(((0, 1), (1, 5)))
    work = s20.copy()
    statevec.apply_ops(work, recovery)
    norm_dev = max(norm_dev, abs(work.norm() - 1.0))
    statevec.apply_ops(work, list(reversed(recovery)))
    results.append(("recovery circuit round trip",
                    np.abs(work.amps - s20.amps).max(), 1e-12))
    results.append(("norm preservation", norm_dev, 1e-12))

    dev = 0.0
    for label in range(32):
        enc = qlcc.encode(statevec.basis_state(5, f"{label:05b}"))
        dev = max(dev, float(np.abs(enc.amps - qlcc.logical_ghz_state(label)).max()))
    results.append(("logical block forms", dev, 1e-12))

    worst = 0.0
    for i in range(5):
        s5 = statevec.random_state(5, rng_seed + 10 + i)
        out = qlcc.decode_and_recover(qlcc.encode(s5), ())
        worst = max(worst, 1.0 - statevec.fidelity(out, s5))
    results.append(("noiseless round trip (loss code)", worst, 1e-10))

    worst = 0.0
    for i in range(5):
        s1 = statevec.random_state(1, rng_seed + 20 + i)
        syn, out = concat.decode_concat(spec, concat.encode_concat(spec, s1),
                                        qlcc.ErasureFlagSet(()))
        worst = max(worst, 1.0 - statevec.fidelity(out, s1))
        if syn != "0000":
            worst = 1.0
    results.append(("noiseless round trip (concatenated)", worst, 1e-10))

    worst = 0.0
    for label, ops in graph_code._error_catalogue():
        c = statevec.random_state(1, rng_seed + 30)
        codeword = statevec.StateVector(5, (encoder @ c.amps).reshape(-1))
        statevec.apply_ops(codeword, ops)
        m = codeword.amps.reshape(32, 1)
        transformed = statevec.StateVector(5, (decoder @ m).reshape(-1))
        _, prob = statevec.dominant_outcome(transformed, range(4))
        worst = max(worst, 1.0 - prob)
    results.append(("syndrome determinism", worst, 1e-9))

    trace = concat.run_worked_example(extra_inputs=3, seed=rng_seed + 40)
    dev = 0.0 if trace["passed"] else 1.0
    results.append(("worked-example milestones", dev, 1e-9))
    return results


def cmd_selfcheck(cfg):
    results = _selfcheck_results(cfg.seed)
    ok = all(dev <= tol for _, dev, tol in results)
    if cfg.format == "json":
        payload = [{"check": name, "max_dev": float(dev), "tolerance": tol,
                    "ok": bool(dev <= tol)} for name, dev, tol in results]
        _emit(cfg, json.dumps({"checks": payload, "ok": ok}, sort_keys=True, indent=2))
    elif cfg.format == "csv":
        lines = ["check,max_dev,tolerance,ok"]
        lines += [f"{name},{dev:.3e},{tol:.1e},{dev <= tol}"
                  for name, dev, tol in results]
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        lines = []
        for name, dev, tol in results:
            verdict = "OK" if dev <= tol else "FAIL"
            lines.append(f"{name}: {verdict} (max dev {dev:.1e}, tol {tol:.0e})")
        lines.append("selfcheck: " + ("all checks passed" if ok else "FAILED"))
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_VERIFICATION_FAILURE


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        handler = {
            "syndrome-table": cmd_syndrome_table,
            "example": cmd_example,
            "sweep": cmd_sweep,
            "selfcheck": cmd_selfcheck,
        }[cfg.command]
        return handler(cfg)
    except UnsupportedConfigurationError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG


if __name__ == "__main__":
    sys.exit(main())
