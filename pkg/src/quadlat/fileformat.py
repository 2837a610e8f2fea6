"""Lattice documents and certificate serialisation.

A lattice document is UTF-8 JSON::

    {
      "d": 5,
      "classic": true,
      "gram": [
        [[1, 0, 1], [0, 0, 1]],
        [[0, 0, 1], [1, 0, 1]]
      ]
    }

Each Gram entry ``[p, q, den]`` stands for ``(p + q*omega_d) / den`` with
``den`` in {1, 2}. The canonical form written by :func:`serialize_lattice`
uses the reduced triple and the exact layout above.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd

from .errors import LatticeFileError, QuadlatError
from .lattice import make_lattice
from .obstruction import EightBlock, assemble_and_certify
from .qfield import FieldCtx, OInt, QElem


def to_triple(F, x):
    """[p, q, den] with x = (p + q*omega)/den, reduced, den > 0."""
    a, b = F.omega_coords(x)
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    return [int(a * den), int(b * den), den]


def from_triple(F, t, position="value"):
    if (
        not isinstance(t, list)
        or len(t) != 3
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in t)
    ):
        raise LatticeFileError("expected a triple [p, q, den] of integers", position)
    p, q, den = t
    if den not in (1, 2):
        raise LatticeFileError(f"den must be 1 or 2, got {den}", position)
    x = OInt(p, q, F).to_qelem()
    return x / den if den == 2 else x


def _parse_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise LatticeFileError(e.msg, f"line {e.lineno} column {e.colno}") from None


def parse_lattice(text):
    doc = _parse_json(text)
    if not isinstance(doc, dict):
        raise LatticeFileError("document must be an object", "$")
    for key in ("d", "classic", "gram"):
        if key not in doc:
            raise LatticeFileError(f"missing key {key!r}", "$")
    d, classic, gram = doc["d"], doc["classic"], doc["gram"]
    if not isinstance(d, int) or isinstance(d, bool):
        raise LatticeFileError("d must be an integer", "d")
    if not isinstance(classic, bool):
        raise LatticeFileError("classic must be true or false", "classic")
    try:
        F = FieldCtx(d)
    except QuadlatError as e:
        raise LatticeFileError(str(e), "d") from None
    if not isinstance(gram, list) or not gram:
        raise LatticeFileError("gram must be a non-empty array", "gram")
    n = len(gram)
    rows = []
    for i, row in enumerate(gram):
        if not isinstance(row, list) or len(row) != n:
            raise LatticeFileError(f"row must have {n} entries", f"gram[{i}]")
        rows.append([from_triple(F, t, f"gram[{i}][{j}]") for j, t in enumerate(row)])
    try:
        return make_lattice(F, rows, classic)
    except QuadlatError as e:
        raise LatticeFileError(str(e), "gram") from None


def read_lattice(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise LatticeFileError(str(e), str(path)) from None
    return parse_lattice(text)


def _triple_text(t):
    return "[" + ", ".join(str(v) for v in t) + "]"


def serialize_lattice(L):
    F = L.field
    rows = [
        "    [" + ", ".join(_triple_text(to_triple(F, v)) for v in row) + "]" for row in L.gram
    ]
    return (
        "{\n"
        f'  "d": {F.d},\n'
        f'  "classic": {"true" if L.classic else "false"},\n'
        '  "gram": [\n' + ",\n".join(rows) + "\n  ]\n"
        "}\n"
    )


def vector_to_json(F, x):
    return [to_triple(F, c) for c in x]


def certificate_to_dict(report):
    """Self-contained certificate document for :func:`quadlat.obstruction.certify_no_rank7`."""
    F = report.field
    doc = {
        "d": F.d,
        "delta": F.delta,
        "verdict": report.verdict,
        "label": report.label,
        "below_threshold": report.below_threshold,
        "failed_stage": report.failed_stage,
        "stages": [
            {"name": s.name, "ok": s.ok, "data": _jsonable(F, s.data)} for s in report.stages
        ],
    }
    if report.block is not None:
        blk = report.block
        doc["blocks"] = {
            "A": [list(r) for r in blk.A],
            "B": [list(r) for r in blk.B],
            "C": [list(r) for r in blk.C],
            "D": [[to_triple(F, v) for v in r] for r in blk.D],
        }
        doc["vectors"] = [vector_to_json(F, v) for v in report.vectors]
    if report.certificate is not None:
        cert = report.certificate
        doc["determinant"] = to_triple(F, cert.determinant)
        doc["determinant_totally_positive"] = cert.totally_positive
        doc["bound_chain"] = {
            "inner_lower": to_triple(F, cert.chain.inner_lower),
            "inner_upper": to_triple(F, cert.chain.inner_upper),
            "holds": cert.chain.holds,
        }
    return doc


def _jsonable(F, v):
    if isinstance(v, dict):
        return {str(k): _jsonable(F, x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(F, x) for x in v]
    if isinstance(v, (QElem, OInt)):
        return to_triple(F, v)
    if isinstance(v, Fraction):
        return str(v)
    return v


def verify_certificate(doc):
    """Re-check a certificate document without any enumeration.

    Rebuilds the blocks, recomputes the exact determinant and compares it
    with the stored value; also re-validates the block invariants.
    """
    F = FieldCtx(doc["d"])
    b = doc["blocks"]
    D = [[from_triple(F, t) for t in r] for r in b["D"]]
    blk = EightBlock(b["A"], b["B"], b["C"], D, F)
    cert = assemble_and_certify(blk)
    return to_triple(F, cert.determinant) == doc["determinant"] and cert.verdict == "independent"
