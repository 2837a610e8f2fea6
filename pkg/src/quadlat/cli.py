"""Command-line front end.

Machine-readable JSON goes to stdout by default; ``--pretty`` prints a short
human summary instead. Exit codes: 0 success/pass, 1 negative verdict,
2 invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from .bounds import fuzz_lemma22, threshold_polynomial
from .errors import BoundDomainError, LatticeFileError, QuadlatError
from .fileformat import (
    certificate_to_dict,
    from_triple,
    read_lattice,
    to_triple,
    vector_to_json,
)
from .obstruction import certify_no_rank7
from .qfield import FieldCtx
from .represent import default_workers, enumerate_representations, represents
from .universal import search_candidates, universal_up_to

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(args, doc, pretty_lines):
    if getattr(args, "pretty", False):
        text = "\n".join(pretty_lines) + "\n"
    else:
        text = json.dumps(doc) + "\n"
    sys.stdout.write(text)
    sys.stdout.flush()


def _parse_target(F, text):
    try:
        parts = [int(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"target must be p,q,den integers, got {text!r}") from None
    if len(parts) == 2:
        parts.append(1)
    try:
        x = from_triple(F, parts, "target")
        return F.to_oint(x)
    except QuadlatError as e:
        raise InputError(str(e)) from None


def cmd_field_info(args):
    try:
        F = FieldCtx(args.d)
    except QuadlatError as e:
        raise InputError(str(e)) from None
    omega = "(1+sqrt(d))/2" if F.branch == "1" else "sqrt(d)"
    omega_bar = "(1-sqrt(d))/2" if F.branch == "1" else "-sqrt(d)"
    doc = {"d": F.d, "delta": F.delta, "branch": F.branch, "omega": omega, "omega_conj": omega_bar}
    _emit(args, doc, [
        f"d = {F.d}",
        f"discriminant = {F.delta}",
        f"d mod 4 in {{{F.branch}}}",
        f"omega = {omega}, conjugate = {omega_bar}",
    ])
    return EXIT_OK


def cmd_represent(args):
    L = read_lattice(args.lattice)
    F = L.field
    t = _parse_target(F, args.target)
    if t and not t.is_totally_positive():
        raise InputError(f"target {t} is not totally positive")
    if args.all:
        found = enumerate_representations(L, t, args.cap)
    else:
        w = represents(L, t)
        found = [] if w is None else [w]
    doc = {"target": to_triple(F, t), "found": bool(found), "witnesses": [vector_to_json(F, x) for x in found]}
    lines = [f"target {t}"] + (
        ["  (" + ", ".join(str(c) for c in x) + ")" for x in found] if found else ["NONE"]
    )
    _emit(args, doc, lines)
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_universal_check(args):
    L = read_lattice(args.lattice)
    if args.trace_max < 0:
        raise InputError("--trace-max must be >= 0")
    rep = universal_up_to(L, args.trace_max, workers=args.workers or default_workers())
    F = L.field
    doc = {
        "result": "PASS" if rep.passed else "FAIL",
        "trace_max": rep.tr_max,
        "checked": rep.checked,
        "failure": None if rep.failure is None else to_triple(F, rep.failure),
    }
    line = "PASS" if rep.passed else f"FAIL at {rep.failure} (trace {rep.failure.trace()})"
    _emit(args, doc, [line])
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


def cmd_threshold(args):
    try:
        rep = threshold_polynomial(args.n)
    except BoundDomainError as e:
        raise InputError(str(e)) from None
    doc = {
        "N": rep.N,
        "coefficients": list(rep.coefficients),
        "threshold": rep.threshold,
        "minimal_threshold": rep.minimal_threshold,
        "certified": rep.certified,
    }
    _emit(args, doc, [
        f"N = {rep.N}",
        *(f"c_{l} = {c}" for l, c in enumerate(rep.coefficients)),
        f"threshold = {rep.threshold}",
        f"minimal integer threshold = {rep.minimal_threshold}",
        f"certified for all x >= threshold: {rep.certified}",
    ])
    return EXIT_OK


def cmd_fuzz(args):
    if args.iters < 0:
        raise InputError("--iters must be >= 0")
    rep = fuzz_lemma22(args.iters, args.seed)
    digest = hashlib.sha256("\n".join(rep.transcript).encode()).hexdigest()
    doc = {
        "iters": rep.iters,
        "seed": rep.seed,
        "passed": rep.passed,
        "violations": rep.violations,
        "transcript_sha256": digest,
    }
    if args.transcript:
        doc["transcript"] = rep.transcript
    _emit(args, doc, rep.transcript + [f"{rep.passed}/{rep.iters} passed"])
    return EXIT_OK if not rep.violations else EXIT_NEGATIVE


def cmd_search(args):
    try:
        F = FieldCtx(args.d)
        found = search_candidates(F, args.rank, args.coeff_bound, args.trace_max)
    except (QuadlatError, ValueError) as e:
        raise InputError(str(e)) from None
    diags = [[to_triple(F, row[i]) for i, row in enumerate(L.gram)] for L in found]
    doc = {"d": F.d, "rank": args.rank, "trace_max": args.trace_max, "candidates": diags}
    lines = [f"<{', '.join(str(L.gram[i][i]) for i in range(L.rank))}>" for L in found]
    _emit(args, doc, lines or ["NONE"])
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_certify(args):
    L = read_lattice(args.lattice)
    report = certify_no_rank7(L)
    doc = certificate_to_dict(report)
    text = json.dumps(doc, indent=1) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    lines = [f"{s.name}: {'ok' if s.ok else 'FAILED'}" for s in report.stages]
    lines += [f"verdict: {report.verdict}", report.label]
    if report.certificate is not None:
        lines.append(f"determinant: {report.certificate.determinant}")
    _emit(args, doc, lines)
    return EXIT_OK if report.verdict == "certificate" else EXIT_NEGATIVE


def build_parser():
    parser = argparse.ArgumentParser(prog="quadlat", description=__doc__.splitlines()[0])
    parser.add_argument("--pretty", action="store_true", help="human-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", help="discriminant and integral basis of Q(sqrt d)")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("represent", help="find x with Q(x) = target")
    p.add_argument("--lattice", required=True)
    p.add_argument("--target", required=True, help="p,q,den meaning (p + q*omega)/den")
    p.add_argument("--all", action="store_true")
    p.add_argument("--cap", type=int, default=100)
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("universal-check", help="represent every totally positive integer up to a trace")
    p.add_argument("--lattice", required=True)
    p.add_argument("--trace-max", type=int, required=True)
    p.add_argument("--workers", type=int, default=0, help="default: QUADLAT_THREADS or all cores")
    p.set_defaults(func=cmd_universal_check)

    p = sub.add_parser("threshold", help="discriminant threshold for criterion bound N")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("fuzz-lemma22", help="seeded check of the determinant bound chain")
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transcript", action="store_true")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("search", help="diagonal classic lattices passing a truncated universality check")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--coeff-bound", type=int, required=True)
    p.add_argument("--trace-max", type=int, required=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("certify", help="run the rank obstruction pipeline")
    p.add_argument("--lattice", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    for sp in sub.choices.values():
        sp.add_argument("--pretty", action="store_true", help=argparse.SUPPRESS, default=argparse.SUPPRESS)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, LatticeFileError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
