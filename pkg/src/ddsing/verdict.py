"""Singular-or-nonsingular verdicts for diagonally dominant matrices.

The pipeline: classify rows (any violated row means no verdict applies),
reduce to block lower triangular form, then decide each diagonal block.
Dependent blocks are never singular.  An independent block with a strict row
is nonsingular by Taussky's irreducibility argument; an all-weak block is
singular exactly when its angle system is consistent, in which case the
certificate bundle (null vectors, Markov split, unitary witness) is built on
the spot.  The nullity is the number of singular blocks: each contributes
exactly one rank deficiency.

With a weight vector v, the verdict is computed for A diag(v), which decides
generalized dominance of A itself since diag(v) is nonsingular.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import AngleAssignment, ConsistencyReport, solve_angle_system
from .certificates import CertificateBundle, certificate_bundle, singleton_certificate
from .digraph import FrobeniusForm, associated_digraph, frobenius_normal_form, is_strongly_connected
from .errors import NotApplicable, PreconditionViolated
from .matrix import (
    DominanceProfile,
    RowClass,
    Tolerances,
    as_matrix,
    classify_rows,
    max_row_sum,
    scale_columns,
)

REASON_STRICT_ROW = "strict_row"
REASON_ANGLE_INCONSISTENT = "angle_inconsistent"
REASON_DEPENDENT_BLOCK = "dependent_block"


@dataclass(frozen=True)
class BlockVerdict:
    block_id: int
    independent: bool
    size: int
    members: tuple[int, ...]
    singular: bool
    reason: str | None
    certificate_ref: int | None
    dominance: tuple[RowClass, ...]
    assignment: AngleAssignment | None
    consistency: ConsistencyReport | None


@dataclass(frozen=True)
class MatrixVerdict:
    applicable: bool
    violated_rows: tuple[int, ...]
    singular: bool | None
    nullity: int | None
    form: FrobeniusForm | None
    blocks: tuple[BlockVerdict, ...]
    certificates: tuple[CertificateBundle, ...]
    tolerances: Tolerances | None
    exact: bool = False


def _decide_singleton(entry: complex, tol: Tolerances, parent_scale: float,
                      block_id: int, independent: bool, members: tuple[int, ...],
                      cert_ref: int) -> tuple[BlockVerdict, CertificateBundle | None]:
    """1x1 blocks: singular when the entry is zero at tolerance scale.

    A singular singleton's row is reported weak (the entry counts as zero),
    keeping the rule that singular blocks have only weak rows.
    """
    if independent and abs(entry) <= tol.tol_dom:
        bundle = singleton_certificate(entry, parent_scale, block_id)
        verdict = BlockVerdict(
            block_id=block_id,
            independent=True,
            size=1,
            members=members,
            singular=True,
            reason=None,
            certificate_ref=cert_ref,
            dominance=(RowClass.WEAK,),
            assignment=AngleAssignment(thetas=(0.0,), anchor=0),
            consistency=None,
        )
        return verdict, bundle
    verdict = BlockVerdict(
        block_id=block_id,
        independent=independent,
        size=1,
        members=members,
        singular=False,
        reason=REASON_DEPENDENT_BLOCK if not independent else REASON_STRICT_ROW,
        certificate_ref=None,
        dominance=(RowClass.STRICT if abs(entry) > 0 else RowClass.WEAK,),
        assignment=None,
        consistency=None,
    )
    return verdict, None


def _decide_block(sub: np.ndarray, tol: Tolerances, parent_scale: float,
                  block_id: int, independent: bool, members: tuple[int, ...],
                  cert_ref: int) -> tuple[BlockVerdict, CertificateBundle | None]:
    profile = classify_rows(sub, tol)
    if sub.shape[0] == 1:
        return _decide_singleton(sub[0, 0], tol, parent_scale, block_id,
                                 independent, members, cert_ref)
    if not independent:
        verdict = BlockVerdict(
            block_id=block_id,
            independent=False,
            size=sub.shape[0],
            members=members,
            singular=False,
            reason=REASON_DEPENDENT_BLOCK,
            certificate_ref=None,
            dominance=profile.classes(),
            assignment=None,
            consistency=None,
        )
        return verdict, None
    if any(c is RowClass.STRICT for c in profile.classes()):
        verdict = BlockVerdict(
            block_id=block_id,
            independent=True,
            size=sub.shape[0],
            members=members,
            singular=False,
            reason=REASON_STRICT_ROW,
            certificate_ref=None,
            dominance=profile.classes(),
            assignment=None,
            consistency=None,
        )
        return verdict, None
    solve = solve_angle_system(sub, tol, anchor=0)
    if solve.consistent:
        bundle = certificate_bundle(sub, solve.assignment, tol, block_id)
        verdict = BlockVerdict(
            block_id=block_id,
            independent=True,
            size=sub.shape[0],
            members=members,
            singular=True,
            reason=None,
            certificate_ref=cert_ref,
            dominance=profile.classes(),
            assignment=solve.assignment,
            consistency=solve.report,
        )
        return verdict, bundle
    verdict = BlockVerdict(
        block_id=block_id,
        independent=True,
        size=sub.shape[0],
        members=members,
        singular=False,
        reason=REASON_ANGLE_INCONSISTENT,
        certificate_ref=None,
        dominance=profile.classes(),
        assignment=None,
        consistency=solve.report,
    )
    return verdict, None


def analyze(a, tol: Tolerances | None = None, weights=None) -> MatrixVerdict:
    """Full verdict for a matrix, optionally column-scaled by ``weights``."""
    tol = tol or Tolerances()
    m = as_matrix(a)
    if weights is not None:
        m = scale_columns(m, weights)
    profile = classify_rows(m, tol)
    if profile.violated_rows:
        return MatrixVerdict(
            applicable=False,
            violated_rows=profile.violated_rows,
            singular=None,
            nullity=None,
            form=None,
            blocks=(),
            certificates=(),
            tolerances=tol,
        )
    form = frobenius_normal_form(m)
    parent_scale = max_row_sum(m)
    blocks: list[BlockVerdict] = []
    bundles: list[CertificateBundle] = []
    for b, independent in enumerate(form.independent_flags):
        members = form.original_members(b)
        sub = m[np.ix_(members, members)]
        verdict, bundle = _decide_block(
            sub, tol, parent_scale, b, independent, members, len(bundles)
        )
        blocks.append(verdict)
        if bundle is not None:
            bundles.append(bundle)
    nullity = sum(1 for bv in blocks if bv.singular)
    return MatrixVerdict(
        applicable=True,
        violated_rows=(),
        singular=nullity >= 1,
        nullity=nullity,
        form=form,
        blocks=tuple(blocks),
        certificates=tuple(bundles),
        tolerances=tol,
    )


def block_verdict(block, tol: Tolerances | None = None) -> BlockVerdict:
    """Verdict for one irreducible diagonally dominant matrix on its own.

    Raises PreconditionViolated when the input is reducible or has a
    violated row.
    """
    tol = tol or Tolerances()
    m = as_matrix(block)
    if not is_strongly_connected(associated_digraph(m)):
        raise PreconditionViolated("block is not irreducible")
    profile = classify_rows(m, tol)
    if profile.violated_rows:
        raise PreconditionViolated(
            f"rows {list(profile.violated_rows)} are not diagonally dominant"
        )
    verdict, _ = _decide_block(
        m, tol, max_row_sum(m), 0, True, tuple(range(m.shape[0])), 0
    )
    return verdict


def nullity_of(verdict: MatrixVerdict) -> int:
    """Dimension of the null space; raises NotApplicable without a verdict."""
    if not verdict.applicable:
        raise NotApplicable("matrix is not diagonally dominant; no verdict")
    assert verdict.nullity is not None
    return verdict.nullity
