"""Canonical structured documents, text rendering and the on-disk store.

All documents are JSON with a "format" tag and integer "version".  Term
lists are sorted by (total degree, expanded variable sequence) and monomial
factors by basis position; coefficients are least non-negative residues in
the mod-p ring and signed integers otherwise.  Two runs of the same job
produce byte-identical documents.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .algebras import CartanAlgebra, build
from .errors import SerializationError
from .modular import FieldParams
from .pipeline import InvariantRecord
from .symalg import SymPolynomial

POLY_FORMAT = "cartaninv.sympoly"
RECORD_FORMAT = "cartaninv.invariant-record"
SC_FORMAT = "cartaninv.structure-constants"
VERSION = 1

STORE_ENV = "CARTANINV_STORE"


def dumps_canonical(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _header(algebra: CartanAlgebra, fmt: str) -> dict:
    pr = algebra.params
    return {
        "format": fmt,
        "version": VERSION,
        "kind": algebra.kind,
        "p": pr.p,
        "n": pr.n,
        "m": list(pr.m),
        "sign_convention": algebra.sign_tag,
    }


def _check_header(doc, fmt: str, algebra: CartanAlgebra | None = None) -> None:
    if not isinstance(doc, dict) or doc.get("format") != fmt:
        raise SerializationError(f"expected a {fmt} document")
    if doc.get("version") != VERSION:
        raise SerializationError(
            f"format version mismatch: {doc.get('version')} != {VERSION}"
        )
    if algebra is not None:
        want = _header(algebra, fmt)
        for key in ("kind", "p", "n", "m", "sign_convention"):
            if doc.get(key) != want[key]:
                raise SerializationError(
                    f"document {key}={doc.get(key)!r} does not match "
                    f"the algebra ({want[key]!r})"
                )


# -- polynomials ----------------------------------------------------------------

def poly_to_document(F: SymPolynomial) -> dict:
    doc = _header(F.algebra, POLY_FORMAT)
    doc["ring"] = F.ring
    terms = []
    for mono, c in F.sorted_terms():
        terms.append(
            {
                "monomial": [[F.algebra.basis[v].label, e] for v, e in mono],
                "coefficient": c,
            }
        )
    doc["terms"] = terms
    return doc


def document_to_poly(doc, algebra: CartanAlgebra) -> SymPolynomial:
    _check_header(doc, POLY_FORMAT, algebra)
    ring = doc.get("ring")
    if ring not in ("int", "modp"):
        raise SerializationError(f"unknown ring {ring!r}")
    terms = {}
    for entry in doc.get("terms", ()):
        mono = []
        for pair in entry.get("monomial", ()):
            if len(pair) != 2:
                raise SerializationError(f"malformed monomial entry {pair!r}")
            label, e = pair
            if label not in algebra.index:
                raise SerializationError(f"unknown basis label {label!r}")
            if not isinstance(e, int) or e <= 0:
                raise SerializationError(f"bad exponent {e!r} for {label}")
            mono.append((algebra.index[label], e))
        mono.sort()
        if len({v for v, _ in mono}) != len(mono):
            raise SerializationError("duplicate factor in a monomial")
        c = entry.get("coefficient")
        if not isinstance(c, int) or c == 0:
            raise SerializationError(f"bad coefficient {c!r}")
        key = tuple(mono)
        if key in terms:
            raise SerializationError("duplicate monomial in term list")
        terms[key] = c
    return SymPolynomial(algebra, ring, terms)


def render_text(F: SymPolynomial) -> str:
    """Human-readable canonical rendering, e.g. 2*u_{0,1}*u_{2,1} + u_{1,1}^2."""
    if F.is_zero():
        return "0"
    bits = []
    for mono, c in F.sorted_terms():
        facs = [
            F.algebra.basis[v].label + (f"^{e}" if e > 1 else "") for v, e in mono
        ]
        body = "*".join(facs) if facs else "1"
        if c == 1 and facs:
            piece = body
        elif c < 0:
            piece = f"-{-c}*{body}"
        else:
            piece = f"{c}*{body}"
        if not bits:
            bits.append(piece)
        elif piece.startswith("-"):
            bits.append("- " + piece[1:])
        else:
            bits.append("+ " + piece)
    return " ".join(bits)


# -- invariant records -------------------------------------------------------------

def record_to_document(record: InvariantRecord) -> dict:
    return {
        "format": RECORD_FORMAT,
        "version": VERSION,
        "label": record.label,
        "power": record.power,
        "p_power_m": record.p_power_m,
        "lambda_value": record.lambda_value,
        "term_count": record.term_count,
        "generator": poly_to_document(record.generator),
        "invariant": poly_to_document(record.invariant),
    }


def document_to_record(doc, hbar: CartanAlgebra) -> InvariantRecord:
    if not isinstance(doc, dict) or doc.get("format") != RECORD_FORMAT:
        raise SerializationError(f"expected a {RECORD_FORMAT} document")
    if doc.get("version") != VERSION:
        raise SerializationError("format version mismatch for invariant record")
    if hbar.kind != "Hbar":
        raise SerializationError("records are resolved against an Hbar algebra")
    gen_doc = doc.get("generator")
    inv_doc = doc.get("invariant")
    gen_alg = hbar if gen_doc.get("kind") == "Hbar" else hbar.h_subalgebra
    generator = document_to_poly(gen_doc, gen_alg)
    invariant = document_to_poly(inv_doc, hbar.h_subalgebra)
    return InvariantRecord(
        label=doc.get("label"),
        power=doc.get("power"),
        invariant=invariant,
        generator=generator,
        lambda_value=doc.get("lambda_value"),
        term_count=doc.get("term_count"),
        p_power_m=doc.get("p_power_m"),
    )


# -- structure constants -------------------------------------------------------------

def sc_document(algebra: CartanAlgebra) -> dict:
    doc = _header(algebra, SC_FORMAT)
    doc["dim"] = algebra.dim
    doc["basis"] = [{"label": b.label, "grade": b.grade} for b in algebra.basis]
    rows = []
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            row = algebra.row_int(i, j)
            if row:
                rows.append([i, j, [[k, c] for k, c in row]])
    doc["rows"] = rows
    return doc


def algebra_from_sc_document(doc, hs=None) -> CartanAlgebra:
    """Rebuild an algebra from a cached tensor, skipping bracket verification.

    The basis is re-enumerated deterministically; the document's rows must
    agree with the freshly computed closed forms, which is the cheap
    consistency check replacing the full derivation-level verification.
    """
    if not isinstance(doc, dict) or doc.get("format") != SC_FORMAT:
        raise SerializationError(f"expected a {SC_FORMAT} document")
    if doc.get("version") != VERSION:
        raise SerializationError("format version mismatch for structure constants")
    params = FieldParams(doc["p"], doc["n"], tuple(doc["m"]))
    algebra = build(doc["kind"], params, hs, verify=False)
    _check_header(doc, SC_FORMAT, algebra)
    labels = [b["label"] for b in doc.get("basis", ())]
    if labels != [b.label for b in algebra.basis]:
        raise SerializationError("cached basis does not match the enumeration")
    cached = {}
    for i, j, row in doc.get("rows", ()):
        cached[(i, j)] = tuple((k, c) for k, c in row)
    fresh = {ij: row for ij, row in algebra.rows_int.items() if ij[0] < ij[1]}
    if cached != fresh:
        raise SerializationError("cached structure constants disagree")
    return algebra


# -- the store -------------------------------------------------------------------------

def default_store() -> str | None:
    return os.environ.get(STORE_ENV)


def _m_tag(m) -> str:
    return "-".join(str(x) for x in m)


def record_path(store, p, n, m, label) -> Path:
    return Path(store) / f"invariant_p{p}_n{n}_m{_m_tag(m)}_{label}.json"


def sc_path(store, kind, p, n, m) -> Path:
    return Path(store) / f"sc_{kind}_p{p}_n{n}_m{_m_tag(m)}.json"


def save_record(store, record: InvariantRecord) -> Path:
    pr = record.invariant.algebra.params
    path = record_path(store, pr.p, pr.n, pr.m, record.label)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_canonical(record_to_document(record)))
    return path


def load_record(store, hbar: CartanAlgebra, label) -> InvariantRecord | None:
    pr = hbar.params
    path = record_path(store, pr.p, pr.n, pr.m, label)
    if not path.exists():
        return None
    doc = json.loads(path.read_text())
    return document_to_record(doc, hbar)


def save_structure_constants(store, algebra: CartanAlgebra) -> Path:
    pr = algebra.params
    path = sc_path(store, algebra.kind, pr.p, pr.n, pr.m)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_canonical(sc_document(algebra)))
    return path


def load_algebra(store, kind, params: FieldParams, hs=None) -> CartanAlgebra | None:
    path = sc_path(store, kind, params.p, params.n, params.m)
    if not path.exists():
        return None
    return algebra_from_sc_document(json.loads(path.read_text()), hs)
