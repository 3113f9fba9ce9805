"""Matrix parsing and report serialization.

Two input formats: JSON ``{"n": int, "entries": [[re, im], ...]}`` with the
entries row-major of length n*n, and CSV with one complex literal per cell
("2", "-1.5i", "3+4i", "1e-2-2e-3i").  Exact mode restricts input to real
rationals ("p/q", integers, decimal literals) and carries them as Fractions.

All JSON emitted by this package carries ``"schema": "ddsing/1"``.  Indices
in reports (rows, edges, blocks, anchors) are 1-based; the Python API is
0-based throughout.
"""
from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .angles import AngleAssignment, ConsistencyReport, EdgeResidual
from .certificates import (
    CertificateBundle,
    MarkovDecomposition,
    SingularCertificate,
    UnitaryWitness,
)
from .digraph import FrobeniusForm
from .errors import ParseError
from .exact import ExactMatrix, exact_matrix
from .matrix import RowClass, Tolerances, as_matrix
from .verdict import BlockVerdict, MatrixVerdict

SCHEMA = "ddsing/1"


def parse_complex_literal(text: str) -> complex:
    """One cell: "a", "bi", "a+bi", or "a-bi"; bare "i" means 1i."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty entry")
    if s[-1] in "iI":
        body = s[:-1]
        split = 0
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                split = k
                break
        re_part, im_part = body[:split], body[split:]
        if im_part in ("", "+"):
            im = 1.0
        elif im_part == "-":
            im = -1.0
        else:
            im = float(im_part)
        re = float(re_part) if re_part else 0.0
        return complex(re, im)
    return complex(float(s), 0.0)


def _parse_rational(text: str) -> Fraction:
    s = text.strip()
    if s and s[-1] in "iI":
        raise ValueError("complex entry not allowed in exact mode")
    return Fraction(s)


def _csv_cells(text: str) -> list[list[str]]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ParseError("no rows found")
    return [line.split(",") for line in lines]


def _parse_csv(text: str, exact: bool):
    cells = _csv_cells(text)
    n = len(cells)
    rows = []
    for i, line in enumerate(cells):
        if len(line) != n:
            raise ParseError(f"expected {n} entries, found {len(line)}", row=i + 1)
        row = []
        for j, cell in enumerate(line):
            try:
                row.append(_parse_rational(cell) if exact else parse_complex_literal(cell))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad entry {cell.strip()!r}: {exc}", row=i + 1, col=j + 1) from exc
        rows.append(row)
    return rows


def _entry_from_json(pair, exact: bool, k: int):
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ParseError(f"entry {k + 1} is not a [re, im] pair")
    re, im = pair
    if exact:
        if im != 0:
            raise ParseError(f"entry {k + 1} has a nonzero imaginary part in exact mode")
        try:
            return Fraction(re) if isinstance(re, (int, str)) else Fraction(str(re))
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ParseError(f"entry {k + 1}: bad rational {re!r}: {exc}") from exc
    if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
        raise ParseError(f"entry {k + 1} is not numeric")
    return complex(re, im)


def _parse_json(text: str, exact: bool):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "entries" not in doc:
        raise ParseError('matrix JSON needs keys "n" and "entries"')
    n = doc["n"]
    entries = doc["entries"]
    if not isinstance(n, int) or n < 1:
        raise ParseError(f'"n" must be a positive integer, got {n!r}')
    if not isinstance(entries, list) or len(entries) != n * n:
        raise ParseError(f'"entries" must hold {n * n} pairs, got {len(entries)}')
    values = [_entry_from_json(pair, exact, k) for k, pair in enumerate(entries)]
    return [values[i * n : (i + 1) * n] for i in range(n)]


def parse_matrix(text: str | bytes, fmt: str = "json", exact: bool = False):
    """Parse matrix input; returns a complex ndarray, or an ExactMatrix of
    Fractions when ``exact``.  Raises ParseError with a 1-based position on
    malformed entries."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if fmt == "json":
        rows = _parse_json(text, exact)
    elif fmt == "csv":
        rows = _parse_csv(text, exact)
    else:
        raise ParseError(f"unknown format {fmt!r}; expected json or csv")
    if exact:
        return exact_matrix(rows)
    return as_matrix(rows)


def parse_weights(text: str | bytes, exact: bool = False):
    """Weights file: a JSON array of positive numbers (rational strings
    allowed in exact mode)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid weights JSON: {exc}") from exc
    if not isinstance(doc, list) or not doc:
        raise ParseError("weights must be a nonempty JSON array")
    if exact:
        try:
            return tuple(Fraction(x) if isinstance(x, (int, str)) else Fraction(str(x)) for x in doc)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ParseError(f"bad rational weight: {exc}") from exc
    if not all(isinstance(x, (int, float)) for x in doc):
        raise ParseError("weights must be numbers")
    return np.asarray(doc, dtype=np.float64)


def sniff_format(path: str, explicit: str | None = None) -> str:
    if explicit and explicit != "auto":
        return explicit
    return "json" if str(path).lower().endswith(".json") else "csv"


# ---------------------------------------------------------------------------
# serialization


def _pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _vector(v) -> list[list[float]]:
    return [_pair(z) for z in v]


def matrix_to_dict(a) -> dict:
    m = as_matrix(a)
    n = m.shape[0]
    return {"schema": SCHEMA, "n": n, "entries": [_pair(z) for z in m.reshape(-1)]}


def _assignment_to_dict(assignment: AngleAssignment | None):
    if assignment is None:
        return None
    return {"thetas": [float(t) for t in assignment.thetas], "anchor": assignment.anchor + 1}


def _consistency_to_dict(report: ConsistencyReport | None):
    if report is None:
        return None
    return {
        "max_residual": float(report.max_residual),
        "violations": [
            {"i": v.i + 1, "j": v.j + 1, "residual": float(v.residual), "marginal": v.marginal}
            for v in report.violations
        ],
    }


def _frobenius_to_dict(form: FrobeniusForm | None):
    if form is None:
        return None
    return {
        "permutation": [p + 1 for p in form.permutation],
        "blocks": [[x + 1 for x in block] for block in form.blocks],
        "independent": list(form.independent_flags),
    }


def _bundle_to_dict(bundle: CertificateBundle) -> dict:
    cert = bundle.certificate
    out = {
        "block": bundle.block_id + 1,
        "gamma": _vector(cert.gamma),
        "rho": _vector(cert.rho),
        "right_residual": float(cert.right_residual),
        "left_residual": float(cert.left_residual),
        "markov": None,
        "witness_residual": None,
        "witness": None,
    }
    if bundle.markov is not None:
        out["markov"] = {
            "diag": _vector(bundle.markov.diag),
            "S": [list(row) for row in bundle.markov.stochastic],
            "residual": float(bundle.markov.residual),
        }
    if bundle.witness is not None:
        out["witness_residual"] = float(bundle.witness.residual)
        out["witness"] = {
            "gamma": _vector(bundle.witness.gamma),
            "mu": [list(row) for row in bundle.witness.mu],
            "residual": float(bundle.witness.residual),
            "normalized_residual": float(bundle.witness.normalized_residual),
        }
    return out


def report_to_dict(verdict: MatrixVerdict, include_certificates: bool = True) -> dict:
    """Report document; 1-based indices, schema-tagged."""
    blocks = []
    for bv in verdict.blocks:
        blocks.append({
            "block": bv.block_id + 1,
            "independent": bv.independent,
            "size": bv.size,
            "members": [i + 1 for i in bv.members],
            "singular": bv.singular,
            "reason": bv.reason,
            "certificate": None if bv.certificate_ref is None else bv.certificate_ref + 1,
            "dominance": [c.value for c in bv.dominance],
            "assignment": _assignment_to_dict(bv.assignment),
            "consistency": _consistency_to_dict(bv.consistency),
        })
    tolerances = None
    if verdict.tolerances is not None:
        tolerances = {
            "tol_dominance": verdict.tolerances.tol_dom,
            "tol_angle": verdict.tolerances.tol_angle,
            "tol_residual": verdict.tolerances.tol_res,
        }
    return {
        "schema": SCHEMA,
        "applicable": verdict.applicable,
        "violated_rows": [i + 1 for i in verdict.violated_rows],
        "singular": verdict.singular,
        "nullity": verdict.nullity,
        "frobenius": _frobenius_to_dict(verdict.form),
        "blocks": blocks,
        "certificates": [
            _bundle_to_dict(b) for b in verdict.certificates
        ] if include_certificates else [],
        "tolerances": tolerances,
        "exact": verdict.exact,
    }


def report_json(verdict: MatrixVerdict, include_certificates: bool = True) -> str:
    return json.dumps(report_to_dict(verdict, include_certificates), indent=2)


def _assignment_from_dict(d) -> AngleAssignment | None:
    if d is None:
        return None
    return AngleAssignment(thetas=tuple(float(t) for t in d["thetas"]), anchor=d["anchor"] - 1)


def _consistency_from_dict(d) -> ConsistencyReport | None:
    if d is None:
        return None
    return ConsistencyReport(
        max_residual=float(d["max_residual"]),
        violations=tuple(
            EdgeResidual(i=v["i"] - 1, j=v["j"] - 1, residual=float(v["residual"]),
                         marginal=bool(v["marginal"]))
            for v in d["violations"]
        ),
    )


def _frobenius_from_dict(d) -> FrobeniusForm | None:
    if d is None:
        return None
    return FrobeniusForm(
        permutation=tuple(p - 1 for p in d["permutation"]),
        blocks=tuple(tuple(x - 1 for x in block) for block in d["blocks"]),
        independent_flags=tuple(bool(f) for f in d["independent"]),
    )


def _complex_tuple(pairs) -> tuple[complex, ...]:
    return tuple(complex(re, im) for re, im in pairs)


def _bundle_from_dict(d) -> CertificateBundle:
    markov = None
    if d["markov"] is not None:
        markov = MarkovDecomposition(
            diag=_complex_tuple(d["markov"]["diag"]),
            stochastic=tuple(tuple(float(x) for x in row) for row in d["markov"]["S"]),
            residual=float(d["markov"]["residual"]),
        )
    witness = None
    if d["witness"] is not None:
        witness = UnitaryWitness(
            gamma=_complex_tuple(d["witness"]["gamma"]),
            mu=tuple(tuple(float(x) for x in row) for row in d["witness"]["mu"]),
            residual=float(d["witness"]["residual"]),
            normalized_residual=float(d["witness"]["normalized_residual"]),
        )
    return CertificateBundle(
        block_id=d["block"] - 1,
        certificate=SingularCertificate(
            gamma=_complex_tuple(d["gamma"]),
            rho=_complex_tuple(d["rho"]),
            right_residual=float(d["right_residual"]),
            left_residual=float(d["left_residual"]),
        ),
        markov=markov,
        witness=witness,
    )


def report_from_dict(d: dict) -> MatrixVerdict:
    """Inverse of report_to_dict (certificates included)."""
    if d.get("schema") != SCHEMA:
        raise ParseError(f"unknown report schema {d.get('schema')!r}")
    tolerances = None
    if d["tolerances"] is not None:
        tolerances = Tolerances(
            tol_dom=d["tolerances"]["tol_dominance"],
            tol_angle=d["tolerances"]["tol_angle"],
            tol_res=d["tolerances"]["tol_residual"],
        )
    blocks = tuple(
        BlockVerdict(
            block_id=b["block"] - 1,
            independent=b["independent"],
            size=b["size"],
            members=tuple(i - 1 for i in b["members"]),
            singular=b["singular"],
            reason=b["reason"],
            certificate_ref=None if b["certificate"] is None else b["certificate"] - 1,
            dominance=tuple(RowClass(c) for c in b["dominance"]),
            assignment=_assignment_from_dict(b["assignment"]),
            consistency=_consistency_from_dict(b["consistency"]),
        )
        for b in d["blocks"]
    )
    return MatrixVerdict(
        applicable=d["applicable"],
        violated_rows=tuple(i - 1 for i in d["violated_rows"]),
        singular=d["singular"],
        nullity=d["nullity"],
        form=_frobenius_from_dict(d["frobenius"]),
        blocks=blocks,
        certificates=tuple(_bundle_from_dict(c) for c in d["certificates"]),
        tolerances=tolerances,
        exact=d["exact"],
    )


def report_text(verdict: MatrixVerdict, include_certificates: bool = False) -> str:
    """Human-readable report; carries the same verdicts as the JSON form."""
    lines = []
    if not verdict.applicable:
        rows = ", ".join(str(i + 1) for i in verdict.violated_rows)
        lines.append("verdict: not applicable (matrix is not diagonally dominant)")
        lines.append(f"violated rows: {rows}")
        return "\n".join(lines)
    lines.append("verdict: singular" if verdict.singular else "verdict: nonsingular")
    lines.append(f"nullity: {verdict.nullity}")
    form = verdict.form
    lines.append(
        f"blocks: {len(verdict.blocks)} "
        f"({form.independent_count} independent, {form.dependent_count} dependent)"
    )
    for bv in verdict.blocks:
        members = ",".join(str(i + 1) for i in bv.members)
        kind = "independent" if bv.independent else "dependent"
        if bv.singular:
            state = f"singular (certificate {bv.certificate_ref + 1})"
        else:
            state = f"nonsingular [{bv.reason}]"
        lines.append(f"  block {bv.block_id + 1}: rows {{{members}}} {kind} {state}")
        if bv.consistency is not None and bv.consistency.violations:
            worst = max(v.residual for v in bv.consistency.violations)
            lines.append(
                f"    angle violations: {len(bv.consistency.violations)}"
                f" (max residual {worst:.3e})"
            )
    if verdict.tolerances is not None:
        t = verdict.tolerances
        lines.append(
            f"tolerances: dominance {t.tol_dom:.1e}, angle {t.tol_angle:.1e}, "
            f"residual {t.tol_res:.1e}"
        )
    else:
        lines.append("mode: exact rational arithmetic")
    if include_certificates:
        for bundle in verdict.certificates:
            cert = bundle.certificate
            gamma = ", ".join(f"{z:.6g}" for z in cert.gamma)
            lines.append(f"  certificate for block {bundle.block_id + 1}: gamma = [{gamma}]")
            lines.append(
                f"    right residual {cert.right_residual:.3e}, "
                f"left residual {cert.left_residual:.3e}"
            )
    return "\n".join(lines)
