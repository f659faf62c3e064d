"""Command-line verification harness.

Subcommands run randomized sweeps over the code family and the circuits and
emit deterministic machine-readable reports:

  verify-q4       round-trip check of the 4-qubit code over every deletion
                  position and both forced measurement outcomes
  verify-general  same for the level-l family (--l 2..4)
  lemma1          deletion channel vs. its closed-form mixture oracle
  circuit-check   encoder/decoder circuits vs. their reference maps
  parse           parse a circuit file and print it back

Reports are byte-identical for identical (config, seed); wall time is kept
on the Report object but never serialized.  Exit code is 0 iff every check
passed.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import circuits, gencode, kernels, q4code
from .qstate import (
    PureState,
    apply_operator,
    delete_qubit,
    fidelity,
    partial_trace,
    random_pure_state,
    tensor,
)

COMMANDS = ("verify-q4", "verify-general", "lemma1", "circuit-check")

DEFAULT_TRIALS = {
    "verify-q4": 1000,
    "verify-general": 100,
    "lemma1": 200,
    "circuit-check": 200,
}
DEFAULT_TOL = 1e-9
DEFAULT_SEED = 0


def _fmt(x: float) -> str:
    """Scientific notation, 6 significant digits."""
    return f"{x:.5e}"


@dataclass(frozen=True)
class SweepConfig:
    command: str
    trials: int
    seed: int
    tol: float
    level: int | None = None
    step3: str = "literal"
    fmt: str = "json"
    out: Path | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if self.tol <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if self.step3 not in q4code.VARIANTS:
            raise ValueError(f"unknown step3 variant {self.step3!r}")
        if self.command == "verify-general":
            if self.level is None or not 2 <= self.level <= gencode.MAX_LEVEL:
                raise ValueError(
                    f"level must be between 2 and {gencode.MAX_LEVEL}, got {self.level}"
                )


@dataclass
class ReportEntry:
    """One checked position (or named circuit check)."""

    label: str
    max_infidelity: float
    max_branch_deviation: float | None = None
    error: str | None = None
    passed: bool = True


@dataclass
class Report:
    command: str
    seed: int
    trials: int
    tol: float
    level: int | None
    step3: str
    entries: list[ReportEntry] = field(default_factory=list)
    passed: bool = True
    wall_time_s: float = 0.0  # informational only; never serialized


def _finish(report: Report) -> Report:
    report.passed = all(e.passed for e in report.entries) and bool(report.entries)
    return report


def _check_q4_position(phi, codeword, i: int, variant: str) -> tuple[float, float]:
    """Worst round-trip infidelity and branch-probability deviation at one position."""
    projs = q4code.step1_projectors()
    rho = delete_qubit(codeword, i)
    worst_inf = 0.0
    worst_dev = 0.0
    for b in (0, 1):
        worst_dev = max(worst_dev, abs(projs[b].probability(rho) - 0.5))
        decoded = q4code.decode4(rho, outcome=b, variant=variant)
        worst_inf = max(worst_inf, 1.0 - fidelity(phi, decoded))
    return worst_inf, worst_dev


def _sweep_verify_q4(config: SweepConfig) -> Report:
    report = Report("verify-q4", config.seed, config.trials, config.tol, None, config.step3)
    rng = np.random.default_rng(config.seed)
    worst_inf = np.zeros(4)
    worst_branch = np.zeros(4)
    errors: dict[int, str] = {}
    for _ in range(config.trials):
        phi = random_pure_state(2, rng)
        codeword = q4code.encode4(phi)
        for i in range(1, 5):
            if i in errors:
                continue
            try:
                inf, dev = _check_q4_position(phi, codeword, i, config.step3)
                worst_inf[i - 1] = max(worst_inf[i - 1], inf)
                worst_branch[i - 1] = max(worst_branch[i - 1], dev)
            except ValueError as exc:
                errors[i] = str(exc)
    for i in range(1, 5):
        err = errors.get(i)
        inf, dev = float(worst_inf[i - 1]), float(worst_branch[i - 1])
        ok = err is None and inf <= config.tol and dev <= config.tol
        report.entries.append(ReportEntry(str(i), inf, dev, err, ok))
    return _finish(report)


def _check_general_position(message, codeword, i: int, params) -> tuple[float, float]:
    rho = delete_qubit(codeword, i)
    worst_inf = 0.0
    worst_dev = 0.0
    for b in (0, 1):
        worst_dev = max(worst_dev, abs(gencode.outcome_probability(rho, b) - 0.5))
        decoded = gencode.decode_general(rho, params, outcome=b)
        worst_inf = max(worst_inf, 1.0 - fidelity(message, decoded))
    return worst_inf, worst_dev


def _sweep_verify_general(config: SweepConfig) -> Report:
    report = Report(
        "verify-general", config.seed, config.trials, config.tol, config.level, config.step3
    )
    params = gencode.weight_classes(config.level)
    try:
        for b in (0, 1):
            gencode.build_recovery(params, b)
    except ValueError as exc:
        report.entries.append(ReportEntry("recovery", 1.0, None, str(exc), False))
        return _finish(report)
    rng = np.random.default_rng(config.seed)
    n = params.n
    worst_inf = np.zeros(n)
    worst_branch = np.zeros(n)
    errors: dict[int, str] = {}
    for _ in range(config.trials):
        message = random_pure_state(params.level, rng)
        codeword = gencode.encode_general(message, params)
        for i in range(1, n + 1):
            if i in errors:
                continue
            try:
                # the deleted-state matrix lives only inside the helper, so
                # the allocator can hand its block straight to the next one
                inf, dev = _check_general_position(message, codeword, i, params)
                worst_inf[i - 1] = max(worst_inf[i - 1], inf)
                worst_branch[i - 1] = max(worst_branch[i - 1], dev)
            except ValueError as exc:
                errors[i] = str(exc)
    for i in range(1, n + 1):
        err = errors.get(i)
        inf, dev = float(worst_inf[i - 1]), float(worst_branch[i - 1])
        ok = err is None and inf <= config.tol and dev <= config.tol
        report.entries.append(ReportEntry(str(i), inf, dev, err, ok))
    return _finish(report)


def _sweep_lemma1(config: SweepConfig) -> Report:
    report = Report("lemma1", config.seed, config.trials, config.tol, None, config.step3)
    rng = np.random.default_rng(config.seed)
    worst = np.zeros(4)
    for _ in range(config.trials):
        phi = random_pure_state(2, rng)
        codeword = q4code.encode4(phi)
        oracle = q4code.deletion_mixture(phi).matrix
        first = None
        for i in range(1, 5):
            channel = delete_qubit(codeword, i).matrix
            dev = float(np.abs(channel - oracle).max())
            if first is None:
                first = channel
            else:
                dev = max(dev, float(np.abs(channel - first).max()))
            worst[i - 1] = max(worst[i - 1], dev)
    for i in range(1, 5):
        dev = float(worst[i - 1])
        report.entries.append(ReportEntry(str(i), dev, None, None, dev <= config.tol))
    return _finish(report)


def _sweep_circuit_check(config: SweepConfig) -> Report:
    report = Report(
        "circuit-check", config.seed, config.trials, config.tol, None, config.step3
    )
    rng = np.random.default_rng(config.seed)
    ancilla = PureState.from_bits("000")

    def entry(label: str, deviation: float):
        report.entries.append(
            ReportEntry(label, deviation, None, None, deviation <= config.tol)
        )

    # Encoder vs. the abstract encoding map on random message inputs.
    inputs = [tensor(random_pure_state(2, rng), ancilla) for _ in range(config.trials)]
    entry(
        "encoder-equivalence",
        circuits.check_equivalence(
            circuits.encoder_circuit(), circuits.encoder_reference_matrix(), inputs
        ),
    )

    # CNOT stage as a classical affine map on all 16 basis inputs.
    stage = circuits.encoder_cnot_stage()
    dev = 0.0
    for x in range(16):
        bits = [(x >> 3) & 1, (x >> 2) & 1, (x >> 1) & 1, x & 1]
        y = (
            ((bits[0] ^ bits[2]) << 3)
            | ((bits[1] ^ bits[2]) << 2)
            | (bits[2] << 1)
            | (bits[0] ^ bits[1] ^ bits[2] ^ bits[3])
        )
        out = circuits.simulate(stage, PureState.basis(16, x))
        expect = PureState.basis(16, y)
        dev = max(dev, float(np.abs(out.amplitudes - expect.amplitudes).max()))
    entry("encoder-cnot-table", dev)

    # Intermediate superpositions after the entangling stage.
    stage1 = circuits.encoder_entangle_stage()
    expect0 = np.zeros(16, dtype=np.complex128)
    expect0[[0b0000, 0b0010]] = 1 / np.sqrt(2)
    expect1 = np.zeros(16, dtype=np.complex128)
    expect1[[0b1000, 0b1010, 0b0100, 0b0110, 0b1100, 0b1110]] = 1 / np.sqrt(6)
    dev = float(
        np.abs(circuits.simulate(stage1, PureState.from_bits("0000")).amplitudes - expect0).max()
    )
    dev = max(
        dev,
        float(
            np.abs(
                circuits.simulate(stage1, PureState.from_bits("1000")).amplitudes - expect1
            ).max()
        ),
    )
    entry("encoder-entangle-stage", dev)

    # Pinned actions of the extraction unitary.
    extract = circuits.message_extract_unitary()
    uniform = np.zeros(8, dtype=np.complex128)
    uniform[[0b011, 0b101, 0b110]] = 1 / np.sqrt(3)
    e = np.eye(8, dtype=np.complex128)
    dev = float(np.abs(extract @ e[0] - e[0]).max())
    dev = max(dev, float(np.abs(extract @ uniform - e[0b100]).max()))
    entry("extract-pinned-actions", dev)

    # Measurement-free decoder: message on qubit 1, half-mixed ancilla on qubit 4.
    decoder = circuits.full_decoder_unitary()
    ancilla0 = PureState.from_bits("0").density()
    worst_msg = 0.0
    worst_anc = 0.0
    for _ in range(config.trials):
        phi = random_pure_state(2, rng)
        codeword = q4code.encode4(phi)
        for i in range(1, 5):
            received = tensor(delete_qubit(codeword, i), ancilla0)
            out = apply_operator(received, decoder)
            qubit1 = partial_trace(partial_trace(partial_trace(out, 4), 3), 2)
            worst_msg = max(worst_msg, 1.0 - fidelity(phi, qubit1))
            qubit4 = partial_trace(partial_trace(partial_trace(out, 1), 1), 1)
            worst_anc = max(
                worst_anc, float(np.abs(qubit4.matrix - np.eye(2) / 2).max())
            )
    entry("decoder-message-fidelity", worst_msg)
    entry("decoder-ancilla-mixed", worst_anc)
    return _finish(report)


_SWEEPS = {
    "verify-q4": _sweep_verify_q4,
    "verify-general": _sweep_verify_general,
    "lemma1": _sweep_lemma1,
    "circuit-check": _sweep_circuit_check,
}


def run_sweep(config: SweepConfig) -> Report:
    """Run the configured sweep; deterministic given the seed."""
    kernels.enable_heap_reuse()
    start = time.perf_counter()
    report = _SWEEPS[config.command](config)
    report.wall_time_s = time.perf_counter() - start
    return report


def emit_report(report: Report, fmt: str) -> str:
    """Serialize a report with stable field order and number formatting.

    Identical inputs yield byte-identical output; wall time is omitted for
    exactly that reason.
    """
    if fmt == "json":
        return _emit_json(report)
    if fmt == "csv":
        return _emit_csv(report)
    if fmt == "text":
        return _emit_text(report)
    raise ValueError(f"unknown format {fmt!r}")


def _json_str(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{out}"'


def _emit_json(report: Report) -> str:
    lines = ["{"]
    lines.append(f'  "command": {_json_str(report.command)},')
    lines.append(f'  "seed": {report.seed},')
    lines.append(f'  "trials": {report.trials},')
    lines.append(f'  "tol": {_fmt(report.tol)},')
    lines.append(f'  "l": {report.level if report.level is not None else "null"},')
    lines.append(f'  "step3": {_json_str(report.step3)},')
    lines.append('  "entries": [')
    for k, e in enumerate(report.entries):
        branch = _fmt(e.max_branch_deviation) if e.max_branch_deviation is not None else "null"
        err = _json_str(e.error) if e.error is not None else "null"
        comma = "," if k + 1 < len(report.entries) else ""
        lines.append(
            f'    {{"position": {_json_str(e.label)}, '
            f'"max_infidelity": {_fmt(e.max_infidelity)}, '
            f'"max_branch_deviation": {branch}, '
            f'"error": {err}, '
            f'"pass": {"true" if e.passed else "false"}}}{comma}'
        )
    lines.append("  ],")
    lines.append(f'  "pass": {"true" if report.passed else "false"}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _emit_csv(report: Report) -> str:
    rows = ["command,seed,trials,position,max_infidelity,pass"]
    for e in report.entries:
        rows.append(
            f"{report.command},{report.seed},{report.trials},{e.label},"
            f"{_fmt(e.max_infidelity)},{'true' if e.passed else 'false'}"
        )
    return "\n".join(rows) + "\n"


def _emit_text(report: Report) -> str:
    head = (
        f"command {report.command} seed {report.seed} trials {report.trials} "
        f"tol {_fmt(report.tol)} step3 {report.step3}"
    )
    if report.level is not None:
        head += f" l {report.level}"
    lines = [head]
    for e in report.entries:
        line = f"{e.label}: max infidelity {_fmt(e.max_infidelity)}"
        if e.max_branch_deviation is not None:
            line += f", branch deviation {_fmt(e.max_branch_deviation)}"
        if e.error is not None:
            line += f", error: {e.error}"
        line += " [pass]" if e.passed else " [FAIL]"
        lines.append(line)
    lines.append(f"result: {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def first_failure(report: Report) -> str | None:
    for e in report.entries:
        if not e.passed:
            detail = e.error or (
                f"max infidelity {_fmt(e.max_infidelity)} exceeds tol {_fmt(report.tol)}"
            )
            return f"{report.command} {e.label}: {detail}"
    if not report.entries:
        return f"{report.command}: no checks ran"
    return None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdel",
        description="Verification sweeps for short quantum deletion codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--trials", type=int, default=DEFAULT_TRIALS[name])
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument(
            "--format", dest="fmt", choices=("json", "csv", "text"), default="json"
        )
        sp.add_argument("--out", type=Path, default=None)
        sp.add_argument(
            "--step3", choices=q4code.VARIANTS, default="literal",
            help="extraction-stage variant (image of the last twisted vector)",
        )
        if name == "verify-general":
            sp.add_argument("--l", dest="level", type=int, default=3)
    parse_cmd = sub.add_parser("parse", help="parse a circuit file and print it back")
    parse_cmd.add_argument("file", type=Path)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "parse":
        try:
            text = args.file.read_text(encoding="utf-8")
        except OSError as exc:
            print(f"qdel: cannot read {args.file}: {exc}", file=sys.stderr)
            return 2
        try:
            circuit = circuits.parse_circuit(text)
        except circuits.CircuitParseError as exc:
            print(f"qdel: parse error: {exc}", file=sys.stderr)
            return 2
        sys.stdout.write(circuits.format_circuit(circuit))
        return 0

    try:
        config = SweepConfig(
            command=args.command,
            trials=args.trials,
            seed=args.seed,
            tol=args.tol,
            level=getattr(args, "level", None),
            step3=args.step3,
            fmt=args.fmt,
            out=args.out,
        )
    except ValueError as exc:
        print(f"qdel: invalid configuration: {exc}", file=sys.stderr)
        return 2

    report = run_sweep(config)
    serialized = emit_report(report, config.fmt)
    if config.out is not None:
        try:
            config.out.write_text(serialized, encoding="utf-8")
        except OSError as exc:
            print(f"qdel: cannot write {config.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(serialized)
    if not report.passed:
        print(f"qdel: check failed: {first_failure(report)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
