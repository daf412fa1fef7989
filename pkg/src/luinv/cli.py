"""Command-line front end.

Exit codes: 0 consistent or equivalent, 1 inequivalent, 2 usage, parse or
validation error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import io, linalg
from .adjoint import LocalUnitary, adjoint_matrix, apply_local_unitary
from .bloch import BlochTriple, decompose
from .harness import MODES, GeneratorSpec, generate_pair, paper_fixture
from .invariants import (
    Outcome,
    albert_check,
    albert_polynomial,
    completeness_bound,
    ghs_check,
    norm_check,
    trace_identity_check,
)
from .pencil import kronecker_pencil, smith_normal_form, snf_check
from .scalarfield import Tolerance

EXIT_OK, EXIT_INEQUIVALENT, EXIT_USAGE = 0, 1, 2
CRITERIA = ("norm", "snf", "albert", "trace", "ghs")
BACKENDS = ("exact", "float")


class UsageError(Exception):
    pass


def _backend(args) -> str:
    if args.backend is not None:
        return args.backend
    env = os.environ.get("LUINV_BACKEND", "exact")
    if env not in BACKENDS:
        raise UsageError(f"LUINV_BACKEND must be one of {', '.join(BACKENDS)}, got {env!r}")
    return env


def _tolerance(args) -> Tolerance | None:
    tol = getattr(args, "tol", None)
    if tol is None:
        return None
    if tol <= 0:
        raise UsageError("--tol must be positive")
    return Tolerance(relative=tol, absolute=tol)


def _on_backend(obj, backend: str):
    if backend == "float":
        return obj.to_float()
    if not obj.is_exact:
        raise UsageError("input contains floating-point numbers; use --backend float")
    return obj


def _load_bases(args):
    b1 = io.basis_from_json(io.read_json(args.basis1)) if getattr(args, "basis1", None) else None
    b2 = io.basis_from_json(io.read_json(args.basis2)) if getattr(args, "basis2", None) else None
    return b1, b2


def _load_triple(path, backend: str, tol=None) -> BlochTriple:
    data = io.read_json(path)
    if isinstance(data, dict) and "rows" in data:
        rho = _on_backend(io.density_from_json(data), backend)
        try:
            return decompose(rho, tol=tol)
        except ValueError as exc:
            raise io.FormatError(f"{path}: {exc}") from None
    return _on_backend(io.triple_from_json(data), backend)


def _emit(data):
    sys.stdout.write(io.dumps(data))


def cmd_decompose(args) -> int:
    backend = _backend(args)
    rho = _on_backend(io.load_density(args.state), backend)
    b1, b2 = _load_bases(args)
    try:
        t = decompose(rho, b1, b2, tol=_tolerance(args))
    except ValueError as exc:
        raise io.FormatError(f"{args.state}: {exc}") from None
    _emit(io.triple_to_json(t))
    return EXIT_OK


def _parse_criteria(text: str) -> list[str]:
    chosen = [c.strip() for c in text.split(",") if c.strip()]
    unknown = [c for c in chosen if c not in CRITERIA]
    if unknown or not chosen:
        raise UsageError(f"--criteria takes a comma list of {', '.join(CRITERIA)}")
    return [c for c in CRITERIA if c in chosen]


def _summary(verdicts, d1: int, d2: int) -> tuple[str, str]:
    refuted = [v for v in verdicts if v.outcome is Outcome.INEQUIVALENT]
    if refuted:
        v = refuted[0]
        return "inequivalent", f"not LU-equivalent: {v.criterion} refutes (witness {v.witness})"
    if any(v.outcome is Outcome.EQUIVALENT for v in verdicts):
        if d1 == d2 == 2:
            return "equivalent", "LU-equivalent (quasi-LU confirmed; sufficient for two qubits)"
        return "equivalent", "quasi-LU equivalent (necessary for LU)"
    return "consistent", "no refutation found up to the stated bounds"


def cmd_check(args) -> int:
    backend = _backend(args)
    tol = _tolerance(args)
    criteria = _parse_criteria(args.criteria)
    if args.max_word_len is not None and args.max_word_len < 1:
        raise UsageError("--max-word-len must be at least 1")
    t1 = _load_triple(args.file_a, backend, tol)
    t2 = _load_triple(args.file_b, backend, tol)
    if (t1.d1, t1.d2) != (t2.d1, t2.d2):
        raise UsageError(f"dimension mismatch: ({t1.d1}, {t1.d2}) vs ({t2.d1}, {t2.d2})")
    pairs = args.max_word_len if args.max_word_len is not None else t1.m
    runners = {
        "norm": lambda: norm_check(t1, t2, tol),
        "snf": lambda: snf_check(t1, t2, tol),
        "albert": lambda: albert_check(t1, t2, tol),
        "trace": lambda: trace_identity_check(t1, t2, pairs, tol),
        "ghs": lambda: ghs_check(t1, t2, 2 * pairs, tol),
    }
    verdicts, timings = [], []
    for name in criteria:
        start = time.perf_counter()
        verdicts.append(runners[name]())
        timings.append(time.perf_counter() - start)
    overall, summary = _summary(verdicts, t1.d1, t1.d2)
    if args.json:
        _emit({
            "backend": backend,
            "dims": [t1.d1, t1.d2],
            "criteria": [v.to_json() for v in verdicts],
            "overall": overall,
            "summary": summary,
        })
    else:
        print(f"backend: {backend}, dims: ({t1.d1}, {t1.d2})")
        for v, secs in zip(verdicts, timings):
            print(f"  {str(v):<60} {secs:8.3f} s")
        print(f"overall: {overall}: {summary}")
        full = completeness_bound(t1.m)
        if any(c in criteria for c in ("trace", "ghs")) and pairs < full and overall == "consistent":
            print(
                f"note: word bound {pairs} is below the completeness bound {full}; "
                "a clean run does not certify equivalence",
                file=sys.stderr,
            )
    return EXIT_INEQUIVALENT if overall == "inequivalent" else EXIT_OK


def cmd_snf(args) -> int:
    backend = _backend(args)
    tol = _tolerance(args)
    t = _load_triple(args.file, backend, tol)
    stol = None if t.is_exact else (tol or Tolerance())
    _emit(smith_normal_form(kronecker_pencil(t), tol=stol).to_json())
    return EXIT_OK


def cmd_albert(args) -> int:
    backend = _backend(args)
    t = _load_triple(args.file, backend, _tolerance(args))
    poly = albert_polynomial(t)
    if not t.is_exact:
        poly = poly.trimmed(_tolerance(args))
    print(poly)
    return EXIT_OK


def cmd_apply(args) -> int:
    backend = _backend(args)
    tol = _tolerance(args)
    rho = _on_backend(io.load_density(args.state), backend)
    U1 = io.unitary_from_json(io.read_json(args.u1))
    U2 = io.unitary_from_json(io.read_json(args.u2))
    if backend == "float":
        U1, U2 = (LocalUnitary(linalg.to_float_array(U.entries).astype(complex)) for U in (U1, U2))
    elif not (U1.is_exact and U2.is_exact):
        raise UsageError("unitary contains floating-point numbers; use --backend float")
    b1, b2 = _load_bases(args)
    try:
        out = apply_local_unitary(rho, U1, U2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    A = adjoint_matrix(U1, b1, tol)
    B = adjoint_matrix(U2, b2, tol)
    data = {
        "state": io.density_to_json(out),
        "A": io.matrix_to_json(A.entries),
        "B": io.matrix_to_json(B.entries),
    }
    if args.out:
        io.write_json(args.out, io.density_to_json(out))
    _emit(data)
    return EXIT_OK


def cmd_generate(args) -> int:
    backend = _backend(args)
    try:
        spec = GeneratorSpec(args.d1, args.d2, args.seed, args.mode, backend)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pair = generate_pair(spec)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = {"state_a": out / "state_a.json", "state_b": out / "state_b.json"}
    io.write_json(written["state_a"], io.density_to_json(pair.rho_a))
    io.write_json(written["state_b"], io.density_to_json(pair.rho_b))
    if pair.witness is not None:
        written["u1"], written["u2"] = out / "u1.json", out / "u2.json"
        io.write_json(written["u1"], io.unitary_to_json(pair.witness[0]))
        io.write_json(written["u2"], io.unitary_to_json(pair.witness[1]))
    _emit({k: str(v) for k, v in written.items()})
    return EXIT_OK


def cmd_fixture(args) -> int:
    try:
        f = paper_fixture(args.p)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "rho.json": io.density_to_json(f.rho),
        "rho_prime.json": io.density_to_json(f.rho_prime),
        "triple.json": io.triple_to_json(f.triple),
        "triple_prime.json": io.triple_to_json(f.triple_prime),
        "u1.json": io.unitary_to_json(f.u1),
        "u2.json": io.unitary_to_json(f.u2),
        "basis1.json": io.basis_to_json(f.basis1),
        "basis2.json": io.basis_to_json(f.basis2),
    }
    for name, data in files.items():
        io.write_json(out / name, data)
    _emit(sorted(str(out / name) for name in files))
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--backend", choices=BACKENDS, default=None,
                   help="arithmetic backend (default: $LUINV_BACKEND or exact)")
    p.add_argument("--tol", type=float, default=None, help="float-backend tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="luinv", description="Local-unitary invariants of bipartite states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="print the Bloch triple of a state file")
    p.add_argument("state")
    p.add_argument("--basis1", help="JSON basis for the first factor")
    p.add_argument("--basis2", help="JSON basis for the second factor")
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("check", help="compare two states or triples")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--criteria", default=",".join(CRITERIA))
    p.add_argument("--max-word-len", type=int, default=None,
                   help="pair-word bound for trace (GHS uses twice as many letters); default m")
    p.add_argument("--json", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("snf", help="Smith normal form of the Kronecker pencil")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("albert", help="Albert polynomial of a state or triple")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=cmd_albert)

    p = sub.add_parser("apply", help="apply U1 (x) U2 to a state")
    p.add_argument("state")
    p.add_argument("u1")
    p.add_argument("u2")
    p.add_argument("--out", help="also write the transformed state here")
    p.add_argument("--basis1")
    p.add_argument("--basis2")
    _add_common(p)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("generate", help="write a reproducible random pair")
    p.add_argument("--d1", type=int, required=True)
    p.add_argument("--d2", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", choices=MODES, default="equivalent")
    p.add_argument("--out-dir", default=".")
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fixture", help="write the worked-example files for a rational p")
    p.add_argument("--p", default="1/2")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"luinv {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
