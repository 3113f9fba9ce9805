"""Exact-rational mode for real matrices.

Entries are carried as ``fractions.Fraction``; dominance, balance, and the
sign-vector singularity decision are made by exact comparison, no tolerance
anywhere.  Certificates attached to exact verdicts are computed through the
float path from the exact +-1 sign vectors; the decision itself never looks
at them.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .angles import AngleAssignment, solve_real_signs
from .certificates import CertificateBundle, certificate_bundle, singleton_certificate
from .digraph import frobenius_form_of, support_digraph
from .errors import DimensionMismatch, NonPositiveWeight
from .matrix import RowClass
from .verdict import (
    REASON_DEPENDENT_BLOCK,
    REASON_STRICT_ROW,
    REASON_ANGLE_INCONSISTENT,
    BlockVerdict,
    MatrixVerdict,
)

ExactMatrix = tuple[tuple[Fraction, ...], ...]


def exact_matrix(rows) -> ExactMatrix:
    """Coerce nested values (int, Fraction, rational string) to a square
    matrix of Fractions."""
    out = tuple(tuple(Fraction(x) for x in row) for row in rows)
    n = len(out)
    if n < 1 or any(len(r) != n for r in out):
        raise DimensionMismatch("expected a square matrix of rationals")
    return out


def to_float(a: ExactMatrix) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in a], dtype=np.float64)


def exact_classify_rows(a: ExactMatrix) -> tuple[RowClass, ...]:
    """Strict / weak / violated by exact comparison; zero rows are weak."""
    classes = []
    for i, row in enumerate(a):
        d = abs(row[i])
        s = sum(abs(x) for j, x in enumerate(row) if j != i)
        if d == s:
            classes.append(RowClass.WEAK)
        elif d > s:
            classes.append(RowClass.STRICT)
        else:
            classes.append(RowClass.VIOLATED)
    return tuple(classes)


def exact_balance_check(a: ExactMatrix, axis: str = "row") -> tuple[bool, ...]:
    if axis not in ("row", "column"):
        raise ValueError(f"axis must be 'row' or 'column', got {axis!r}")
    n = len(a)
    if axis == "row":
        return tuple(sum(row) == 0 for row in a)
    return tuple(sum(a[i][j] for i in range(n)) == 0 for j in range(n))


def exact_scale_columns(a: ExactMatrix, weights) -> ExactMatrix:
    w = [Fraction(x) for x in weights]
    if len(w) != len(a):
        raise DimensionMismatch("weight vector length does not match matrix order")
    if any(x <= 0 for x in w):
        raise NonPositiveWeight("weights must be positive")
    return tuple(tuple(x * wj for x, wj in zip(row, w)) for row in a)


def _submatrix(a: ExactMatrix, members) -> ExactMatrix:
    return tuple(tuple(a[i][j] for j in members) for i in members)


def _thetas_from_signs(signs) -> AngleAssignment:
    return AngleAssignment(
        thetas=tuple(0.0 if s > 0 else math.pi for s in signs.signs),
        anchor=signs.anchor,
    )


def analyze_exact(a, weights=None) -> MatrixVerdict:
    """Verdict for a rational real matrix with exact arithmetic throughout."""
    m = exact_matrix(a)
    if weights is not None:
        m = exact_scale_columns(m, weights)
    classes = exact_classify_rows(m)
    violated = tuple(i for i, c in enumerate(classes) if c is RowClass.VIOLATED)
    if violated:
        return MatrixVerdict(
            applicable=False,
            violated_rows=violated,
            singular=None,
            nullity=None,
            form=None,
            blocks=(),
            certificates=(),
            tolerances=None,
            exact=True,
        )
    n = len(m)
    mask = np.array([[x != 0 for x in row] for row in m], dtype=bool)
    form = frobenius_form_of(support_digraph(mask))
    float_m = to_float(m)
    parent_scale = float(np.abs(float_m).sum(axis=1).max())

    blocks: list[BlockVerdict] = []
    bundles: list[CertificateBundle] = []
    for b, independent in enumerate(form.independent_flags):
        members = form.original_members(b)
        sub = _submatrix(m, members)
        sub_classes = exact_classify_rows(sub)
        size = len(members)
        if size == 1:
            entry = sub[0][0]
            if independent and entry == 0:
                bundles.append(singleton_certificate(0.0, parent_scale, b))
                blocks.append(BlockVerdict(
                    block_id=b, independent=True, size=1, members=members,
                    singular=True, reason=None, certificate_ref=len(bundles) - 1,
                    dominance=(RowClass.WEAK,),
                    assignment=AngleAssignment(thetas=(0.0,), anchor=0),
                    consistency=None,
                ))
            else:
                blocks.append(BlockVerdict(
                    block_id=b, independent=independent, size=1, members=members,
                    singular=False,
                    reason=REASON_STRICT_ROW if independent else REASON_DEPENDENT_BLOCK,
                    certificate_ref=None, dominance=sub_classes,
                    assignment=None, consistency=None,
                ))
            continue
        if not independent:
            blocks.append(BlockVerdict(
                block_id=b, independent=False, size=size, members=members,
                singular=False, reason=REASON_DEPENDENT_BLOCK,
                certificate_ref=None, dominance=sub_classes,
                assignment=None, consistency=None,
            ))
            continue
        if any(c is RowClass.STRICT for c in sub_classes):
            blocks.append(BlockVerdict(
                block_id=b, independent=True, size=size, members=members,
                singular=False, reason=REASON_STRICT_ROW,
                certificate_ref=None, dominance=sub_classes,
                assignment=None, consistency=None,
            ))
            continue
        solve = solve_real_signs(sub, anchor=0)
        if solve.consistent:
            assignment = _thetas_from_signs(solve.vector)
            float_sub = float_m[np.ix_(members, members)]
            bundles.append(certificate_bundle(float_sub, assignment, None, b))
            blocks.append(BlockVerdict(
                block_id=b, independent=True, size=size, members=members,
                singular=True, reason=None, certificate_ref=len(bundles) - 1,
                dominance=sub_classes, assignment=assignment, consistency=None,
            ))
        else:
            blocks.append(BlockVerdict(
                block_id=b, independent=True, size=size, members=members,
                singular=False, reason=REASON_ANGLE_INCONSISTENT,
                certificate_ref=None, dominance=sub_classes,
                assignment=None, consistency=None,
            ))
    nullity = sum(1 for bv in blocks if bv.singular)
    return MatrixVerdict(
        applicable=True,
        violated_rows=(),
        singular=nullity >= 1,
        nullity=nullity,
        form=form,
        blocks=tuple(blocks),
        certificates=tuple(bundles),
        tolerances=None,
        exact=True,
    )
