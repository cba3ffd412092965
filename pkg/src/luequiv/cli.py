"""Command-line front end: ``luequiv <command> [options]``.

Exit codes: 0 ok, 1 property failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .canonical import (
    general_sc_equivalent,
    sc_lu_equivalent,
    sc_lu_witness,
    sc_min_pt_eigenvalue,
    sc_separable,
    standard_form_2q,
    standard_form_general,
    witness_residual,
)
from .correlations import correlation_report
from .equivalence import conjugation_residual, decide_lu_equivalence
from .exceptions import DimensionMismatch
from .invariants import invariants_I, pure_lu_equivalent, pure_lu_witness, representation_of, schmidt_decompose
from .io import StateFile, StateFileError, dumps, parse_state_file, serialize_state_file
from .linalg import partial_transpose
from .states import DensityMatrix, PureState, SCCoefficients, random_density, random_pure_state, random_sc, sc_embed
from .verify import run_verify_suite

EXIT_OK, EXIT_PROPERTY, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load(path: str) -> StateFile:
    try:
        data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return parse_state_file(data)
    except StateFileError as exc:
        extra = f" [{exc.invariant}]" if hasattr(exc, "invariant") else ""
        raise InputError(f"{path}: {exc.kind}{extra}: {exc}") from exc


def _density(sf: StateFile) -> DensityMatrix:
    if isinstance(sf.state, SCCoefficients):
        return sc_embed(sf.state)
    if isinstance(sf.state, PureState):
        return sf.state.density()
    return sf.state


def _table(pairs) -> str:
    width = max(len(k) for k, _ in pairs)
    return "\n".join(f"{k.ljust(width)}  {_fmt(v)}" for k, v in pairs) + "\n"


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    if isinstance(v, (complex, np.complexfloating)):
        return f"{v.real:.12g}{v.imag:+.12g}j"
    if isinstance(v, np.ndarray):
        return np.array2string(v, precision=8, suppress_small=True).replace("\n", "\n" + " " * 2)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_fmt(x)}" for k, x in v.items())
    return str(v)


def _emit(args, doc: dict, pairs=None) -> None:
    if args.format == "json":
        sys.stdout.write(dumps(doc))
    else:
        sys.stdout.write(_table(pairs if pairs is not None else list(doc.items())))


# -- commands -------------------------------------------------------------------


def cmd_canon(args) -> int:
    sf = _load(args.file)
    sc = sf.state
    if not isinstance(sc, SCCoefficients):
        raise InputError("canon needs an sc2q or sc state file")
    if sc.is_two_qubit:
        form = standard_form_2q(sc)
        res = witness_residual(sc, form.coefficients(), form.witness)
        doc = {
            "kind": "sc2q",
            "standard_form": {"lambda1": form.lambda1, "lambda2": form.lambda2, "lambda4": form.lambda4},
            "swapped": form.swapped,
            "witness": list(form.witness),
            "residual": res,
        }
    else:
        form = standard_form_general(sc)
        res = witness_residual(sc, form.canonical, form.witness)
        doc = {
            "kind": "sc",
            "canonical": form.canonical.c,
            "residual_phases": form.residual_phases,
            "permutation": list(form.permutation),
            "witness": list(form.witness),
            "residual": res,
        }
    _emit(args, doc)
    return EXIT_OK if res < max(args.tol, 1e-12) * 10 else EXIT_PROPERTY


def cmd_equiv(args) -> int:
    a, b = _load(args.first), _load(args.second)
    sa, sb = a.state, b.state
    if isinstance(sa, SCCoefficients) and isinstance(sb, SCCoefficients):
        if sa.is_two_qubit and sb.is_two_qubit:
            eq = sc_lu_equivalent(sa, sb, args.tol)
            doc = {"method": "sc-standard-form", "equivalent": eq}
            if eq:
                w = sc_lu_witness(sa, sb)
                doc.update(witness=list(w), residual=witness_residual(sa, sb, w))
            _emit(args, doc)
            return EXIT_OK
        if sa.c.shape == sb.c.shape and sa.parties == sb.parties and general_sc_equivalent(sa, sb, args.tol):
            fa, fb = standard_form_general(sa), standard_form_general(sb)
            w = [wb.conj().T @ wa for wa, wb in zip(fa.witness, fb.witness)]
            _emit(args, {"method": "sc-general-form", "equivalent": True, "witness": w,
                         "residual": witness_residual(sa, sb, w)})
            return EXIT_OK
        if sa.parties != 2 or sb.parties != 2:
            _emit(args, {"method": "sc-general-form", "equivalent": None,
                         "note": "canonical forms differ; multipartite search is not implemented"})
            return EXIT_OK
    if isinstance(sa, PureState) and isinstance(sb, PureState):
        if tuple(sa.dims) != tuple(sb.dims):
            raise InputError(f"dims differ: {tuple(sa.dims)} vs {tuple(sb.dims)}")
        eq = pure_lu_equivalent(sa, sb, args.tol)
        doc = {"method": "schmidt", "equivalent": eq}
        if eq:
            u1, u2 = pure_lu_witness(sa, sb)
            doc.update(witness=[u1, u2], residual=float(np.linalg.norm(np.kron(u1, u2) @ sa.vector - sb.vector)))
        _emit(args, doc)
        return EXIT_OK
    ra, rb = _density(a), _density(b)
    if len(ra.dims) != 2 or tuple(ra.dims) != tuple(rb.dims):
        raise InputError(f"need two bipartite states of equal dims, got {tuple(ra.dims)} and {tuple(rb.dims)}")
    verdict = decide_lu_equivalence(ra, rb, restarts=args.restarts, seed=args.seed)
    doc = {
        "method": verdict.method,
        "status": verdict.status.value,
        "equivalent": verdict.equivalent,
        "residual": verdict.residual,
        "certificate": verdict.certificate,
    }
    if verdict.witness is not None:
        doc["witness"] = list(verdict.witness)
        if conjugation_residual(ra, rb, *verdict.witness) >= max(args.tol, 1e-7):
            _emit(args, doc)
            return EXIT_PROPERTY
    _emit(args, doc)
    return EXIT_OK


def cmd_invariants(args) -> int:
    sf = _load(args.file)
    if isinstance(sf.state, PureState):
        sd = schmidt_decompose(sf.state)
        doc = {
            "kind": "pure",
            "I_alpha": invariants_I(sf.state),
            "schmidt_coefficients": sd.coefficients,
            "schmidt_rank": sd.rank,
        }
    else:
        rho = _density(sf)
        if len(rho.dims) != 2:
            raise InputError("invariants needs a bipartite state (sc files must have two parties)")
        rep = representation_of(rho, args.tol)
        doc = {
            "kind": sf.kind,
            "eigenvalues": rep.eigenvalues(),
            "schmidt_coefficients": [r.schmidt.coefficients for r in rep.records],
            "degenerate": rep.degenerate,
            "schmidt_degenerate": rep.schmidt_degenerate,
            "purities": [float(np.sum(rep.eigenvalues() ** k)) for k in range(1, rho.dim + 1)],
        }
    _emit(args, doc)
    return EXIT_OK


def cmd_correlations(args) -> int:
    sf = _load(args.file)
    if isinstance(sf.state, SCCoefficients):
        if not sf.state.is_two_qubit:
            raise InputError("correlations needs a two-qubit state")
        state = sf.state
    else:
        state = _density(sf)
        if state.dim != 4 or len(state.dims) != 2:
            raise InputError("correlations needs a two-qubit state")
    rep = correlation_report(state, args.log_base, er_samples=args.er_samples, seed=args.seed)
    doc = {k: v for k, v in rep.to_dict().items() if v is not None}
    _emit(args, doc)
    return EXIT_OK


def cmd_separable(args) -> int:
    sf = _load(args.file)
    if isinstance(sf.state, SCCoefficients):
        sc = sf.state
        doc = {"method": "sc-coherences", "separable": sc_separable(sc, args.tol),
               "min_pt_eigenvalue": sc_min_pt_eigenvalue(sc)}
    else:
        rho = _density(sf)
        if len(rho.dims) != 2:
            raise InputError("separable needs a bipartite state")
        m, n = rho.dims
        lam = float(np.linalg.eigvalsh(partial_transpose(rho.mat, rho.bipartite)).min())
        doc = {"method": "ppt", "ppt": lam >= -args.tol, "min_pt_eigenvalue": lam,
               "conclusive": m * n <= 6 or lam < -args.tol}
        if doc["conclusive"]:
            doc["separable"] = lam >= -args.tol
    _emit(args, doc)
    return EXIT_OK


def cmd_random(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "sc2q":
        sf = StateFile("sc2q", random_sc(rng))
    elif args.kind == "sc":
        sf = StateFile("sc", random_sc(rng, args.levels, args.parties))
    elif args.kind == "density":
        m, n = args.dims
        sf = StateFile("density", random_density(m * n, rng, rank=args.rank, dims=(m, n)))
    else:
        sf = StateFile("pure", random_pure_state(tuple(args.dims), rng))
    text = serialize_state_file(StateFile(sf.kind, sf.state, args.label))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verify_suite(args.seed if args.seed is not None else 42)
    text = report.to_json() if args.format == "json" else report.to_table()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return report.exit_code


# -- parser ---------------------------------------------------------------------


def _dims(text: str) -> tuple[int, int]:
    try:
        m, n = (int(x) for x in text.lower().replace("x", ",").split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"dims must look like 2,3 or 2x3, got {text!r}") from exc
    if m < 1 or n < 1:
        raise argparse.ArgumentTypeError("dims must be positive")
    return m, n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-8, help="comparison tolerance (default 1e-8)")
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--restarts", type=int, default=8, help="brute-force restarts (default 8)")
    common.add_argument("--log-base", type=float, default=2.0, help="entropy log base (default 2)")
    common.add_argument("--format", choices=("json", "table"), default="json", help="output format")

    parser = argparse.ArgumentParser(prog="luequiv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("canon", parents=[common], help="standard form of an SC state with its witness")
    p.add_argument("file")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("equiv", parents=[common], help="decide LU equivalence of two states")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("invariants", parents=[common], help="I_alpha, Schmidt data or mixed-state representation")
    p.add_argument("file")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("correlations", parents=[common], help="correlation report of a two-qubit state")
    p.add_argument("file")
    p.add_argument("--er-samples", type=int, default=0, help="separable samples bounding E_R (default 0)")
    p.set_defaults(func=cmd_correlations)

    p = sub.add_parser("separable", parents=[common], help="PPT separability test")
    p.add_argument("file")
    p.set_defaults(func=cmd_separable)

    p = sub.add_parser("random", parents=[common], help="write a random state file")
    p.add_argument("kind", choices=("sc2q", "sc", "density", "pure"))
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--parties", type=int, default=2)
    p.add_argument("--dims", type=_dims, default=(2, 2))
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--label", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("verify", parents=[common], help="run the reconciliation and property suite")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command != "verify" and args.seed is None:
        args.seed = 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DimensionMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
