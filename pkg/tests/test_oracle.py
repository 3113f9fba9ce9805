import numpy as np
import pytest

from ddsing import (
    DegenerateSupport,
    TooLarge,
    gen_fixture,
    gen_perturbed_instance,
    gen_singular_instance,
    rank_det_oracle,
)
from ddsing.digraph import associated_digraph, is_strongly_connected
from ddsing.matrix import classify_rows, max_row_sum
from ddsing.oracle import FIXTURE_KINDS, ORACLE_CAP, PlantedInstance


def test_oracle_identity():
    res = rank_det_oracle(np.eye(3))
    assert res.rank == 3
    assert res.det == 1
    assert res.null_basis == ()
    assert not res.singular
    assert res.nullity == 0


def test_oracle_small_determinants():
    assert rank_det_oracle([[1, 2], [3, 4]]).det == pytest.approx(-2)
    assert rank_det_oracle([[1, 1j], [1j, 1]]).det == pytest.approx(2)
    res = rank_det_oracle([[2]])
    assert res.rank == 1 and res.det == 2


def test_oracle_reducible_example():
    res = rank_det_oracle([[1, -1, 0], [-1, 1, 0], [0, -1, 2]])
    assert res.rank == 2
    assert res.det == 0
    assert res.singular and res.nullity == 1
    v = np.array(res.null_basis[0])
    v = v / v[0]
    assert np.allclose(v, [1, 1, 0.5])


def test_oracle_zero_matrix():
    res = rank_det_oracle(np.zeros((3, 3)))
    assert res.rank == 0
    assert res.det == 0
    assert res.nullity == 3
    assert np.allclose(np.array(res.null_basis), np.eye(3))


def test_oracle_null_vectors_have_unit_max_modulus():
    for seed in range(6):
        inst = gen_singular_instance(5, 0.7, seed=seed)
        res = rank_det_oracle(inst.matrix)
        assert res.nullity == 1
        v = np.array(res.null_basis[0])
        assert np.abs(v).max() == pytest.approx(1.0)
        assert np.max(np.abs(inst.matrix @ v)) <= 1e-10 * max_row_sum(inst.matrix)


def test_oracle_pivot_threshold_is_relative():
    a = [[1, 0], [0, 1e-14]]
    res = rank_det_oracle(a, pivot_tol=1e-10)
    assert res.rank == 1
    assert res.det == 0
    assert np.allclose(res.null_basis[0], [0, 1])
    sharp = rank_det_oracle(a, pivot_tol=1e-16)
    assert sharp.rank == 2
    assert sharp.det == pytest.approx(1e-14)


def test_oracle_matches_lapack_det():
    rng = np.random.default_rng(29)
    for _ in range(30):
        n = int(rng.integers(1, 9))
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        got = rank_det_oracle(a).det
        want = np.linalg.det(a)
        assert got == pytest.approx(want, rel=1e-8)


def test_oracle_rejects_large_input():
    with pytest.raises(TooLarge):
        rank_det_oracle(np.eye(ORACLE_CAP + 1))
    assert rank_det_oracle(np.eye(ORACLE_CAP)).rank == ORACLE_CAP


def test_planted_instance_shape():
    inst = gen_singular_instance(6, 0.6, seed=42)
    a = inst.matrix
    assert a.shape == (6, 6)
    assert len(inst.gamma) == 6
    assert np.allclose(np.abs(inst.gamma), 1.0)
    assert classify_rows(a).all_weak
    assert is_strongly_connected(associated_digraph(a))
    gamma = np.array(inst.gamma)
    assert np.max(np.abs(a @ gamma)) <= 1e-12 * max_row_sum(a)
    res = rank_det_oracle(a)
    assert res.rank == 5 and res.singular
    # oracle null vector is parallel to the planted one
    v = np.array(res.null_basis[0])
    ratio = v / gamma
    assert np.allclose(ratio, ratio[0])


def test_planted_moduli_match_seed():
    inst = gen_singular_instance(5, 0.8, seed=3)
    assert np.allclose(np.abs(inst.matrix), np.abs(inst.mu_seed))
    assert np.allclose(inst.mu_seed @ np.ones(5), 0.0, atol=1e-13)


def test_planted_deterministic():
    a = gen_singular_instance(5, 0.5, seed=11).matrix
    b = gen_singular_instance(5, 0.5, seed=11).matrix
    c = gen_singular_instance(5, 0.5, seed=12).matrix
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_planted_rejects_bad_sizes():
    with pytest.raises(ValueError):
        gen_singular_instance(1, 0.5, seed=0)
    with pytest.raises(DegenerateSupport):
        gen_singular_instance(5, 1e-9, seed=0)


def test_perturbed_flip_of_ones_block():
    base = PlantedInstance(
        matrix=np.ones((2, 2), dtype=complex),
        gamma=(1 + 0j, -1 + 0j),
        mu_seed=np.array([[1.0, -1.0], [-1.0, 1.0]]),
    )
    flipped = gen_perturbed_instance(base, np.pi)
    assert np.allclose(flipped, [[1, -1], [1, 1]])
    assert rank_det_oracle(flipped).det == pytest.approx(2)


def test_perturbed_keeps_dominance_and_breaks_singularity():
    inst = gen_singular_instance(4, 0.7, seed=9)
    for delta in (np.pi / 2, 1e-3):
        a = gen_perturbed_instance(inst, delta)
        assert classify_rows(a).all_weak
        assert np.allclose(np.abs(a), np.abs(inst.matrix))
        assert rank_det_oracle(a).rank == 4


def test_perturbed_rejects_bad_delta():
    inst = gen_singular_instance(3, 0.9, seed=1)
    for delta in (0.0, -0.5, np.pi + 0.1):
        with pytest.raises(ValueError):
            gen_perturbed_instance(inst, delta)


def test_fixture_laplacian_balance():
    a = gen_fixture("laplacian", 7, seed=5)
    assert np.allclose(a @ np.ones(7), 0.0, atol=1e-13)
    assert classify_rows(a).all_weak
    assert np.all(np.diag(a) <= 0)
    assert rank_det_oracle(a).singular


def test_fixture_kolmogorov_dense():
    a = gen_fixture("kolmogorov", 6, seed=2)
    assert np.allclose(a @ np.ones(6), 0.0, atol=1e-13)
    assert classify_rows(a).all_weak
    assert is_strongly_connected(associated_digraph(a))
    res = rank_det_oracle(a)
    assert res.rank == 5
    v = np.array(res.null_basis[0])
    assert np.allclose(v / v[0], np.ones(6), atol=1e-8)


def test_fixture_markovm():
    a = gen_fixture("markovm", 8, seed=7)
    assert np.allclose(np.diag(a), 1.0)
    assert np.all(a - np.diag(np.diag(a)) <= 0)
    assert np.allclose(a @ np.ones(8), 0.0, atol=1e-13)
    assert classify_rows(a).all_weak
    assert rank_det_oracle(a).singular
    assert np.array_equal(gen_fixture("markovm", 1, seed=0), np.zeros((1, 1)))


def test_fixture_every_row_keeps_an_edge():
    for seed in range(10):
        a = gen_fixture("markovm", 5, seed=seed)
        off = a - np.diag(np.diag(a))
        assert np.all(np.abs(off).sum(axis=1) > 0)


def test_fixture_deterministic_and_validated():
    assert np.array_equal(gen_fixture("laplacian", 5, seed=1),
                          gen_fixture("laplacian", 5, seed=1))
    with pytest.raises(ValueError):
        gen_fixture("toeplitz", 4)
    with pytest.raises(ValueError):
        gen_fixture("laplacian", 0)
    assert set(FIXTURE_KINDS) == {"laplacian", "kolmogorov", "markovm"}
