import numpy as np
import pytest

from ddsing import (
    NotApplicable,
    NonPositiveWeight,
    PreconditionViolated,
    REASON_ANGLE_INCONSISTENT,
    REASON_DEPENDENT_BLOCK,
    REASON_STRICT_ROW,
    RowClass,
    Tolerances,
    analyze,
    block_verdict,
    extend_null_vector,
    gen_fixture,
    gen_singular_instance,
    nullity_of,
    rank_det_oracle,
    scale_columns,
)
from ddsing.matrix import max_row_sum

from gens import reducible_composition, taussky_instance


def test_identity_matrix():
    report = analyze(np.eye(3))
    assert report.applicable
    assert report.singular is False
    assert report.nullity == 0
    assert len(report.blocks) == 3
    for bv in report.blocks:
        assert bv.independent and bv.size == 1
        assert bv.reason == REASON_STRICT_ROW
        assert bv.dominance == (RowClass.STRICT,)
    assert report.certificates == ()
    assert nullity_of(report) == 0


def test_reducible_example_full_report():
    a = [[1, -1, 0], [-1, 1, 0], [0, -1, 2]]
    report = analyze(a)
    assert report.applicable and report.singular
    assert report.nullity == 1
    assert report.form.blocks == ((0, 1), (2,))
    first, second = report.blocks
    assert first.independent and first.singular
    assert first.members == (0, 1)
    assert first.reason is None
    assert first.dominance == (RowClass.WEAK, RowClass.WEAK)
    assert first.certificate_ref == 0
    assert np.allclose(first.assignment.gamma(), [1, 1])
    assert second.members == (2,)
    assert not second.independent and not second.singular
    assert second.reason == REASON_DEPENDENT_BLOCK
    bundle = report.certificates[0]
    assert bundle.block_id == 0
    assert np.allclose(bundle.certificate.gamma, [1, 1])
    assert np.allclose(bundle.certificate.rho, [0.5, 0.5]) or np.allclose(
        bundle.certificate.rho, [1, 1]
    )
    x = extend_null_vector(a, report.form, 0, bundle.certificate.gamma)
    assert np.allclose(x, [1, 1, 0.5])


def test_angle_inconsistent_is_nonsingular():
    report = analyze([[1, 1], [-1, 1]])
    assert report.applicable and report.singular is False
    (bv,) = report.blocks
    assert bv.reason == REASON_ANGLE_INCONSISTENT
    assert bv.consistency is not None
    assert bv.consistency.max_residual == pytest.approx(np.pi)
    assert rank_det_oracle([[1, 1], [-1, 1]]).rank == 2


def test_singletons():
    zero = analyze([[0]])
    assert zero.singular and zero.nullity == 1
    assert zero.blocks[0].dominance == (RowClass.WEAK,)
    assert zero.certificates[0].certificate.gamma == (1,)

    tiny = analyze([[1e-12]])
    assert tiny.singular

    small_but_clear = analyze([[1e-6]])
    assert small_but_clear.singular is False
    assert small_but_clear.blocks[0].reason == REASON_STRICT_ROW


def test_zero_matrix_all_singular_singletons():
    report = analyze(np.zeros((4, 4)))
    assert report.singular and report.nullity == 4
    assert len(report.blocks) == 4
    assert all(bv.singular and bv.size == 1 for bv in report.blocks)
    assert len(report.certificates) == 4


def test_not_applicable():
    report = analyze([[1, 2], [0, 1]])
    assert not report.applicable
    assert report.violated_rows == (0,)
    assert report.singular is None
    assert report.nullity is None
    assert report.form is None
    assert report.blocks == ()
    with pytest.raises(NotApplicable):
        nullity_of(report)


def test_weights_recover_applicability():
    a = [[2, -3], [-4 / 3, 2]]
    assert not analyze(a).applicable
    weighted = analyze(a, weights=(3, 2))
    assert weighted.applicable and weighted.singular
    assert weighted.nullity == 1
    direct = analyze(scale_columns(a, (3, 2)))
    assert direct.singular == weighted.singular
    assert direct.nullity == weighted.nullity
    with pytest.raises(NonPositiveWeight):
        analyze(a, weights=(3, 0))


def test_block_verdict_standalone():
    strict = block_verdict([[2, 1], [1, 2]])
    assert not strict.singular and strict.reason == REASON_STRICT_ROW

    singular = block_verdict([[1, 1], [1, 1]])
    assert singular.singular
    assert singular.assignment.thetas == pytest.approx((0.0, np.pi))

    with pytest.raises(PreconditionViolated):
        block_verdict([[1, 1, 0], [1, 1, 0], [0, 1, 2]])  # reducible
    with pytest.raises(PreconditionViolated):
        block_verdict([[0, 1], [1, 0]])  # violated rows


def test_taussky_blocks_are_nonsingular():
    for seed in range(12):
        n = 2 + seed
        a = taussky_instance(n, seed)
        report = analyze(a)
        assert report.applicable
        assert report.singular is False
        (bv,) = report.blocks
        assert bv.reason == REASON_STRICT_ROW
        assert any(c is RowClass.STRICT for c in bv.dominance)
        assert not rank_det_oracle(a).singular


def test_dependent_blocks_never_singular():
    found = 0
    for seed in range(40):
        a = reducible_composition(seed)
        report = analyze(a)
        assert report.applicable
        for bv in report.blocks:
            if not bv.independent:
                found += 1
                assert not bv.singular
                assert bv.reason == REASON_DEPENDENT_BLOCK
                sub = a[np.ix_(bv.members, bv.members)]
                assert not rank_det_oracle(sub).singular
    assert found > 10


def test_nullity_matches_oracle():
    for seed in range(40):
        a = reducible_composition(seed)
        report = analyze(a)
        res = rank_det_oracle(a, pivot_tol=1e-10)
        assert report.nullity == a.shape[0] - res.rank
        assert report.singular == res.singular


def test_permutation_invariance():
    rng = np.random.default_rng(13)
    for seed in range(15):
        a = reducible_composition(seed)
        n = a.shape[0]
        perm = rng.permutation(n)
        b = a[np.ix_(perm, perm)]
        ra, rb = analyze(a), analyze(b)
        assert ra.singular == rb.singular
        assert ra.nullity == rb.nullity
        part_a = {frozenset(bv.members) for bv in ra.blocks}
        part_b = {frozenset(int(perm[v]) for v in bv.members) for bv in rb.blocks}
        assert part_a == part_b


def test_fixture_independent_blocks_all_singular():
    for kind in ("laplacian", "kolmogorov", "markovm"):
        a = gen_fixture(kind, 7, seed=4)
        report = analyze(a)
        assert report.applicable and report.singular
        for bv in report.blocks:
            assert bv.singular == bv.independent
        assert report.nullity == sum(1 for bv in report.blocks if bv.independent)
        for bundle in report.certificates:
            gamma = np.array(bundle.certificate.gamma)
            assert np.allclose(gamma / gamma[0], np.ones(len(gamma)), atol=1e-9)


def test_singular_blocks_report_only_weak_rows():
    for seed in range(20):
        report = analyze(reducible_composition(seed))
        for bv in report.blocks:
            if bv.singular:
                assert all(c is RowClass.WEAK for c in bv.dominance)


def test_certificate_residuals_scaled_to_parent():
    inst = gen_singular_instance(6, 0.7, seed=21)
    report = analyze(inst.matrix)
    bundle = report.certificates[0]
    gamma = np.array(bundle.certificate.gamma)
    scale = max_row_sum(inst.matrix)
    direct = np.max(np.abs(inst.matrix @ gamma)) / scale
    assert bundle.certificate.right_residual == pytest.approx(direct, abs=1e-15)
    assert bundle.certificate.right_residual <= 1e-12
    assert bundle.certificate.left_residual <= 1e-10


def test_tolerance_objects_are_recorded():
    tol = Tolerances(tol_dom=1e-7)
    report = analyze(np.eye(2), tol)
    assert report.tolerances is tol
    assert report.exact is False
