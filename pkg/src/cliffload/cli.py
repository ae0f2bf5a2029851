"""Command-line interface: synthesis, verification, depth tables, VQE runs.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource
guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import chem, vqe
from .loader import LadderStyle, circuit_from_plan, loader_plan
from .oracle import compare_states, correlated_oracle
from .ortho import OrthonormalMatrix
from .sim import run

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

_ORACLE_MAX = 20
_VQE_MAX_QUBITS = 16


class _CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_matrix(path: str) -> OrthonormalMatrix:
    p = Path(path)
    if not p.exists():
        raise _CliError(f"no such file: {path}", EXIT_INPUT)
    try:
        return OrthonormalMatrix.from_json(p.read_text())
    except ValueError as exc:
        raise _CliError(f"invalid matrix {path}: {exc}", EXIT_INPUT)


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_synth(args) -> int:
    m = _read_matrix(args.matrix)
    try:
        plan = loader_plan(m, args.L)
        circuit = circuit_from_plan(plan, LadderStyle.parse(args.ladder))
    except ValueError as exc:
        raise _CliError(str(exc), EXIT_INPUT)
    base = args.out or str(Path(args.matrix).with_suffix(""))
    Path(base + ".qasm").write_text(circuit.to_qasm())
    Path(base + ".plan.json").write_text(plan.to_json() + "\n")
    print(f"wrote {base}.qasm ({len(circuit)} gates, "
          f"two-qubit depth {circuit.two_qubit_depth()}) and {base}.plan.json")
    return EXIT_OK


def cmd_verify(args) -> int:
    m = _read_matrix(args.matrix)
    if args.L * m.n_rows > _ORACLE_MAX:
        raise _CliError(
            f"oracle comparison limited to {_ORACLE_MAX} qubits", EXIT_RESOURCE
        )
    style = LadderStyle.parse(args.ladder)
    try:
        plan = loader_plan(m, args.L)
        if args.corrupt_angle:
            sched = plan.columns[0]
            mu, nu, theta = sched.layers[0][0]
            sched.layers[0][0] = type(sched.layers[0][0])(mu, nu, theta + args.corrupt_angle)
        circuit = circuit_from_plan(plan, style)
        report = compare_states(run(circuit), correlated_oracle(m, args.L), args.L)
    except ValueError as exc:
        raise _CliError(str(exc), EXIT_INPUT)
    _write_or_print(report.to_json() + "\n", args.out)
    return EXIT_OK if report.fidelity > 1.0 - args.tol else EXIT_VERIFY_FAILED


def depth_formula(n: int, d: int, L: int) -> int:
    """Analytic two-qubit depth bound for the tree-loader circuit."""
    s = math.ceil(math.log2(n // L)) if n // L > 1 else 0
    return round((2 * d / L) * (s * s + (1 + 2 * math.log2(L)) * s))


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise _CliError(f"bad integer list {text!r}", EXIT_INPUT)


def cmd_depth(args) -> int:
    ns = _parse_int_list(args.N)
    ds = _parse_int_list(args.d)
    style = LadderStyle.parse(args.ladder)
    rows = ["N,d,L,measured,analytic,baseline,ratio"]
    crossover: dict[tuple[int, int], int] = {}
    for L in _parse_int_list(args.L):
        for n in ns:
            if n % L:
                continue
            for d in ds:
                if d > n // 2 or d % L:
                    continue
                from .ortho import random_orthonormal

                m = random_orthonormal(n // L, d // L, args.seed)
                plan = loader_plan(m, L)
                measured = circuit_from_plan(plan, style).two_qubit_depth()
                analytic = depth_formula(n, d, L)
                baseline = 2 * n
                rows.append(
                    f"{n},{d},{L},{measured},{analytic},{baseline},"
                    f"{measured / baseline:.4f}"
                )
                if measured < baseline and (d, L) not in crossover:
                    crossover[(d, L)] = n
    csv = "\n".join(rows) + "\n"
    _write_or_print(csv, args.out)
    for (d, L), n in sorted(crossover.items()):
        print(f"crossover d={d} L={L}: first N with depth < 2N is N={n}", file=sys.stderr)
    return EXIT_OK


def cmd_vqe(args) -> int:
    p = Path(args.fcidump)
    if not p.exists():
        raise _CliError(f"no such file: {args.fcidump}", EXIT_INPUT)
    try:
        dump = chem.parse_fcidump(p.read_text())
    except chem.FcidumpError as exc:
        raise _CliError(f"{args.fcidump}: {exc}", EXIT_INPUT)
    if 2 * dump.n_orb > _VQE_MAX_QUBITS:
        raise _CliError(
            f"in-process FCI limited to {_VQE_MAX_QUBITS} qubits", EXIT_RESOURCE
        )
    h = chem.jw_hamiltonian(dump)
    result = vqe.run_vqe(
        h,
        d=dump.n_elec,
        L=args.L,
        style=LadderStyle.parse(args.ladder),
        tol=args.tol,
        max_iter=args.max_iter,
    )
    base = args.out or str(p.with_suffix(""))
    Path(base + ".result.json").write_text(result.to_json() + "\n")
    Path(base + ".trace.csv").write_text(result.trace_csv())
    print(f"E_HF   = {result.e_hf:.10f}")
    print(f"E_FCI  = {result.e_fci:.10f}")
    print(f"E_opt  = {result.energy:.10f}")
    print(f"fraction = {result.fraction:.8f}")
    print(f"wrote {base}.result.json and {base}.trace.csv")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliffload",
        description="Synthesize, verify and analyze tree-structured "
        "fermionic state-preparation circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_tol=True):
        p.add_argument("--L", type=int, default=1, help="correlation width (default 1)")
        p.add_argument(
            "--ladder",
            choices=["cascade", "logtree"],
            default="logtree",
            help="CNOT ladder variant (default logtree)",
        )
        p.add_argument("--seed", type=int, default=0, help="seed for randomized inputs")
        if with_tol:
            p.add_argument("--tol", type=float, default=1e-9, help="tolerance (default 1e-9)")
        p.add_argument("--out", help="output path or basename")

    p_synth = sub.add_parser("synth", help="emit QASM and the angle plan for a matrix")
    p_synth.add_argument("matrix", help="matrix JSON file {rows, cols, data}")
    common(p_synth)
    p_synth.set_defaults(func=cmd_synth)

    p_verify = sub.add_parser("verify", help="simulate and compare against the oracle")
    p_verify.add_argument("matrix", help="matrix JSON file {rows, cols, data}")
    common(p_verify)
    p_verify.add_argument(
        "--corrupt-angle",
        type=float,
        default=0.0,
        help="testing hook: offset added to the first rotation angle",
    )
    p_verify.set_defaults(func=cmd_verify)

    p_depth = sub.add_parser("depth", help="measured vs analytic two-qubit depth table")
    p_depth.add_argument("--N", default="4,8,16,32,64", help="comma list of mode counts")
    p_depth.add_argument("--d", default="2,4,8", help="comma list of occupation counts")
    p_depth.add_argument("--L", default="1", help="comma list of correlation widths")
    p_depth.add_argument("--ladder", choices=["cascade", "logtree"], default="logtree")
    p_depth.add_argument("--seed", type=int, default=0)
    p_depth.add_argument("--out", help="CSV output path (default stdout)")
    p_depth.set_defaults(func=cmd_depth)

    p_vqe = sub.add_parser("vqe", help="variational run on an FCIDUMP Hamiltonian")
    p_vqe.add_argument("fcidump", help="FCIDUMP file")
    common(p_vqe)
    p_vqe.add_argument("--max-iter", type=int, default=200)
    p_vqe.set_defaults(func=cmd_vqe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
