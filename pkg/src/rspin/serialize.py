"""Canonical file formats and the on-disk piece cache.

Every document is JSON with a fixed key order and canonically ordered
terms, so serialization is a pure function of the value: two equal values
always produce byte-identical files.  Scalars are written as reduced
fraction strings with the sign on the numerator; the s-legend field in
tau documents records the defining relation of the quadratic generator.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .correlator import CorrelatorRecord
from .errors import CacheError, ParseError
from .scalar import QScalar
from .solver import TauExpansion
from .tpoly import TMonomial, TPolynomial
from .verify import CheckReport

FORMAT_VERSION = 1

__all__ = [
    "FORMAT_VERSION",
    "TauCache",
    "parse_tau",
    "poly_from_obj",
    "poly_to_obj",
    "records_to_csv",
    "records_to_json",
    "reports_to_json",
    "serialize_tau",
]


def _frac_str(x: Fraction) -> str:
    return str(x)


def _frac_parse(text, where: str) -> Fraction:
    if not isinstance(text, str):
        raise ParseError(f"expected a fraction string, got {type(text).__name__}", where)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad fraction {text!r}: {exc}", where) from None


def scalar_to_obj(q: QScalar) -> dict:
    return {"a": _frac_str(q.a), "b": _frac_str(q.b)}


def scalar_from_obj(r: int, obj, where: str) -> QScalar:
    if not isinstance(obj, dict) or set(obj) != {"a", "b"}:
        raise ParseError('scalar must be an object with fields "a" and "b"', where)
    return QScalar.of(r, _frac_parse(obj["a"], where + ".a"), _frac_parse(obj["b"], where + ".b"))


def mono_to_obj(mono: TMonomial) -> dict:
    return {"lambda": mono.lambda_exp, "t": [[n, e] for n, e in mono.exps]}


def mono_from_obj(obj, where: str) -> TMonomial:
    if not isinstance(obj, dict) or set(obj) != {"lambda", "t"}:
        raise ParseError('monomial must be an object with fields "lambda" and "t"', where)
    lam = obj["lambda"]
    if not isinstance(lam, int):
        raise ParseError("lambda exponent must be an integer", where + ".lambda")
    pairs = obj["t"]
    if not isinstance(pairs, list):
        raise ParseError("t must be a list of [index, exponent] pairs", where + ".t")
    exps = []
    last_n = 0
    for idx, pair in enumerate(pairs):
        loc = f"{where}.t[{idx}]"
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, int) for x in pair)):
            raise ParseError("entry must be a pair of integers", loc)
        n, e = pair
        if n <= last_n:
            raise ParseError(f"indices must be strictly ascending, got {n} after {last_n}", loc)
        if e < 1:
            raise ParseError(f"exponent must be positive, got {e}", loc)
        last_n = n
        exps.append((n, e))
    return TMonomial(lam, tuple(exps))


def poly_to_obj(poly: TPolynomial) -> list:
    return [
        {"monomial": mono_to_obj(mono), "coeff": scalar_to_obj(coeff)}
        for mono, coeff in poly.canonical_terms()
    ]


def poly_from_obj(r: int, obj, where: str) -> TPolynomial:
    if not isinstance(obj, list):
        raise ParseError("polynomial must be a list of terms", where)
    terms = {}
    for idx, item in enumerate(obj):
        loc = f"{where}[{idx}]"
        if not isinstance(item, dict) or set(item) != {"monomial", "coeff"}:
            raise ParseError('term must be an object with fields "monomial" and "coeff"', loc)
        mono = mono_from_obj(item["monomial"], loc + ".monomial")
        coeff = scalar_from_obj(r, item["coeff"], loc + ".coeff")
        if mono in terms:
            raise ParseError("duplicate monomial", loc)
        if coeff.is_zero:
            raise ParseError("stored coefficient must be nonzero", loc)
        terms[mono] = coeff
    try:
        return TPolynomial(r, terms)
    except Exception as exc:
        raise ParseError(str(exc), where) from None


def _dump(obj) -> bytes:
    return (json.dumps(obj, indent=1) + "\n").encode("utf-8")


def serialize_tau(tau: TauExpansion) -> bytes:
    """Canonical byte serialization; a fixpoint of parse-then-serialize."""
    doc = {
        "format_version": FORMAT_VERSION,
        "r": tau.r,
        "max_degree": tau.max_degree,
        "s_legend": "s^2 = -r",
        "pieces": [poly_to_obj(p) for p in tau.pieces],
    }
    return _dump(doc)


def parse_tau(data: bytes | str) -> TauExpansion:
    """Parse and fully re-validate a tau document."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {version!r}, expected {FORMAT_VERSION}")
    r = doc.get("r")
    max_degree = doc.get("max_degree")
    if not isinstance(r, int) or r < 2:
        raise ParseError(f"r must be an integer >= 2, got {r!r}", "r")
    if not isinstance(max_degree, int) or max_degree < 0:
        raise ParseError(f"max_degree must be a nonnegative integer, got {max_degree!r}", "max_degree")
    pieces_obj = doc.get("pieces")
    if not isinstance(pieces_obj, list) or len(pieces_obj) != max_degree + 1:
        raise ParseError(f"pieces must be a list of {max_degree + 1} polynomials", "pieces")
    pieces = [poly_from_obj(r, p, f"pieces[{j}]") for j, p in enumerate(pieces_obj)]
    tau = TauExpansion(r, max_degree, pieces)
    try:
        tau.validate()
    except Exception as exc:
        raise ParseError(str(exc), "pieces") from None
    return tau


# -- correlators ---------------------------------------------------------


def record_to_obj(rec: CorrelatorRecord) -> dict:
    return {
        "genus": rec.genus,
        "insertions": [[ins.m, ins.a] for ins in rec.insertions],
        "value": _frac_str(rec.value),
    }


def records_to_json(records: list[CorrelatorRecord]) -> bytes:
    return _dump([record_to_obj(rec) for rec in records])


def records_to_csv(records: list[CorrelatorRecord]) -> bytes:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["genus", "insertions", "value"])
    for rec in records:
        joined = ";".join(f"{ins.m}:{ins.a}" for ins in rec.insertions)
        writer.writerow([rec.genus, joined, _frac_str(rec.value)])
    return buf.getvalue().encode("utf-8")


# -- check reports --------------------------------------------------------


def report_to_obj(report: CheckReport) -> dict:
    return {
        "check_name": report.check_name,
        "status": report.status,
        "residuals": [
            {"label": label, "poly": poly_to_obj(poly)} for label, poly in report.residuals
        ],
        "timing_ms": round(report.timing_ms, 3),
        "details": report.details,
    }


def reports_to_json(reports: list[CheckReport]) -> bytes:
    return _dump([report_to_obj(rep) for rep in reports])


# -- piece cache -----------------------------------------------------------


class TauCache:
    """Directory-backed store of finished pieces, one JSON file per
    (r, degree).  Corrupt or version-mismatched entries raise CacheError;
    they are never silently recomputed."""

    def __init__(self, directory):
        from pathlib import Path

        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path(self, r: int, degree: int):
        return self.directory / f"r{r}_deg{degree}.json"

    def load(self, r: int, degree: int) -> TPolynomial | None:
        path = self.path(r, degree)
        if not path.exists():
            return None
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CacheError(f"unreadable cache entry {path}: {exc}") from None
        if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
            raise CacheError(
                f"cache entry {path} has format_version {doc.get('format_version')!r}, "
                f"expected {FORMAT_VERSION}"
            )
        if doc.get("r") != r or doc.get("degree") != degree:
            raise CacheError(f"cache entry {path} labeled (r={doc.get('r')}, degree={doc.get('degree')})")
        try:
            return poly_from_obj(r, doc.get("piece"), "piece")
        except ParseError as exc:
            raise CacheError(f"corrupt cache entry {path}: {exc}") from None

    def store(self, r: int, degree: int, piece: TPolynomial) -> None:
        doc = {
            "format_version": FORMAT_VERSION,
            "r": r,
            "degree": degree,
            "piece": poly_to_obj(piece),
        }
        self.path(r, degree).write_bytes(_dump(doc))
