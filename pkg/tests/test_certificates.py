import numpy as np
import pytest

from ddsing import (
    DimensionMismatch,
    ResidualTooLarge,
    Tolerances,
    ZeroDiagonal,
    analyze,
    b_matrix,
    certificate_bundle,
    extend_null_vector,
    gen_singular_instance,
    left_null_vector,
    markov_decomposition,
    right_null_vector,
    solve_angle_system,
    unitary_witness,
)
from ddsing.angles import AngleAssignment, angle_distance, wrap_angle
from ddsing.digraph import frobenius_normal_form
from ddsing.matrix import comparison_matrix, max_row_sum
from ddsing.oracle import rank_det_oracle

from gens import reducible_composition

ONES = [[1, 1], [1, 1]]


def _solved(block):
    solve = solve_angle_system(block)
    assert solve.consistent
    return solve.assignment


def test_right_null_vector_ones():
    gamma = right_null_vector(ONES, _solved(ONES))
    assert np.allclose(gamma, [1, -1])
    assert np.allclose(np.abs(gamma), 1.0)


def test_right_null_vector_rejects_garbage():
    with pytest.raises(DimensionMismatch):
        right_null_vector(ONES, AngleAssignment(thetas=(0.0,), anchor=0))
    with pytest.raises(ResidualTooLarge):
        right_null_vector(ONES, AngleAssignment(thetas=(0.0, 0.0), anchor=0))


def test_left_null_vector_ones():
    gamma = right_null_vector(ONES, _solved(ONES))
    rho = left_null_vector(ONES, gamma)
    assert np.allclose(rho, [1, -1])
    assert np.max(np.abs(rho @ np.array(ONES, dtype=complex))) < 1e-14


def test_left_null_vector_real_block():
    a = [[2, -2, 0], [-1, 2, -1], [-1, 0, 1]]
    gamma = right_null_vector(a, _solved(a))
    assert np.allclose(gamma, [1, 1, 1])
    rho = left_null_vector(a, gamma)
    assert np.allclose(rho, [1, 1, 1])
    # cross-check the comparison weights against the oracle on mu^T
    res = rank_det_oracle(comparison_matrix(a).T)
    assert res.nullity == 1
    v = np.array(res.null_basis[0])
    assert np.allclose(v / v[0], rho / rho[0])


def test_left_null_vector_planted():
    for seed in range(8):
        inst = gen_singular_instance(6, 0.7, seed=seed)
        gamma = np.array(inst.gamma)
        rho = left_null_vector(inst.matrix, gamma)
        scale = max_row_sum(inst.matrix)
        assert np.max(np.abs(rho @ inst.matrix)) <= 1e-11 * scale
        p = rho * gamma * np.exp(1j * np.angle(np.diag(inst.matrix)))
        assert np.max(np.abs(p.imag)) <= 1e-10
        assert np.all(p.real > 0)
        assert p[0].real == pytest.approx(1.0)


def test_unitary_witness_ones():
    w = unitary_witness(ONES, [1, -1])
    assert w.residual == 0.0
    assert w.normalized_residual == 0.0
    assert np.allclose(w.mu, [[1, -1], [-1, 1]])


def test_unitary_witness_conjugation_structure():
    inst = gen_singular_instance(5, 0.8, seed=2)
    gamma = np.array(inst.gamma)
    w = unitary_witness(inst.matrix, gamma)
    assert w.residual <= 1e-12
    assert w.normalized_residual <= 1e-12
    conj = inst.matrix * (gamma[np.newaxis, :] / gamma[:, np.newaxis])
    diag_args = np.angle(np.diag(inst.matrix))
    for i in range(5):
        for j in range(5):
            if i == j or conj[i, j] == 0:
                continue
            # off-diagonal arguments sit at diag argument plus pi
            d = angle_distance(np.angle(conj[i, j]), wrap_angle(diag_args[i] + np.pi))
            assert d <= 1e-10


def test_unitary_witness_rejects_wrong_gamma():
    with pytest.raises(ResidualTooLarge):
        unitary_witness(ONES, [1, 1])
    with pytest.raises(ZeroDiagonal):
        unitary_witness([[0, 1], [1, 0]], [1, 1])


def test_markov_decomposition_ones():
    m = markov_decomposition(ONES, [1, -1])
    assert m.residual == 0.0
    assert m.diag == (1, 1)
    assert np.allclose(m.stochastic, [[0, 1], [1, 0]])


def test_markov_decomposition_cycle():
    a = [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
    m = markov_decomposition(a, [1, 1, 1])
    assert np.allclose(m.stochastic, [[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]])
    assert m.residual <= 1e-15


def test_markov_rows_are_stochastic():
    for seed in range(6):
        inst = gen_singular_instance(7, 0.6, seed=seed)
        m = markov_decomposition(inst.matrix, np.array(inst.gamma))
        s = np.array(m.stochastic)
        assert np.all(s >= 0)
        assert np.allclose(np.diag(s), 0.0)
        assert np.allclose(s.sum(axis=1), 1.0, atol=1e-12)
        assert m.residual <= 1e-12


def test_markov_zero_diagonal_raises():
    with pytest.raises(ZeroDiagonal):
        markov_decomposition([[0, 1], [1, 0]], [1, 1])


def test_b_matrix_ones():
    b = b_matrix(ONES, [1, -1], [1, -1])
    assert np.allclose(b, [[1, -1], [-1, 1]])
    assert b.dtype == np.float64


def test_b_matrix_planted_doubly_balanced():
    for seed in range(6):
        inst = gen_singular_instance(6, 0.7, seed=seed)
        assignment = _solved(inst.matrix)
        gamma = right_null_vector(inst.matrix, assignment)
        rho = left_null_vector(inst.matrix, gamma)
        b = b_matrix(inst.matrix, rho, gamma)
        scale = max_row_sum(b)
        assert np.max(np.abs(b.sum(axis=1))) <= 1e-12 * scale
        assert np.max(np.abs(b.sum(axis=0))) <= 1e-12 * scale
        assert np.all(np.diag(b) > 0)
        off = b.copy()
        np.fill_diagonal(off, 0.0)
        assert np.all(off <= 1e-12 * scale)
        # B is the comparison matrix reweighted by p
        p = rho * gamma * np.exp(1j * np.angle(np.diag(inst.matrix)))
        want = p.real[:, np.newaxis] * comparison_matrix(inst.matrix)
        assert np.allclose(b, want, atol=1e-10 * scale)


def test_b_matrix_rejects_mismatched_pair():
    with pytest.raises(ResidualTooLarge):
        b_matrix(ONES, [1, 1], [1, -1])


def test_certificate_bundle_contents():
    inst = gen_singular_instance(5, 0.7, seed=14)
    bundle = certificate_bundle(inst.matrix, _solved(inst.matrix), block_id=3)
    assert bundle.block_id == 3
    assert bundle.markov is not None and bundle.witness is not None
    assert bundle.certificate.right_residual <= 1e-12
    assert bundle.certificate.left_residual <= 1e-11
    assert len(bundle.certificate.gamma) == 5
    assert abs(bundle.certificate.gamma[0] - 1) < 1e-12


def test_extend_null_vector_reducible_example():
    a = [[1, -1, 0], [-1, 1, 0], [0, -1, 2]]
    form = frobenius_normal_form(a)
    x = extend_null_vector(a, form, 0, [1, 1])
    assert np.allclose(x, [1, 1, 0.5])


def test_extend_null_vector_zero_on_other_independents():
    a = np.zeros((4, 4), dtype=complex)
    a[0:2, 0:2] = ONES
    a[2:4, 2:4] = [[1, -1], [-1, 1]]
    form = frobenius_normal_form(a)
    assert form.independent_flags == (True, True)
    x = extend_null_vector(a, form, 0, [1, -1])
    assert np.allclose(x[2:], 0.0)
    assert np.allclose(x[:2], [1, -1])


def test_extend_null_vector_chain():
    checked = 0
    for seed in range(30):
        a = reducible_composition(seed)
        form = frobenius_normal_form(a)
        report = analyze(a)
        for bv in report.blocks:
            if not bv.singular or bv.size < 2:
                continue
            bundle = report.certificates[bv.certificate_ref]
            x = extend_null_vector(a, form, bv.block_id, bundle.certificate.gamma)
            assert np.max(np.abs(a @ x)) <= 1e-8 * max_row_sum(a)
            checked += 1
    assert checked >= 5


def test_extend_rejects_dependent_target():
    a = [[1, -1, 0], [-1, 1, 0], [0, -1, 2]]
    form = frobenius_normal_form(a)
    with pytest.raises(DimensionMismatch):
        extend_null_vector(a, form, 1, [1])
    with pytest.raises(DimensionMismatch):
        extend_null_vector(a, form, 0, [1, 1, 1])


def test_tolerance_threading():
    tight = Tolerances(tol_res=1e-15)
    inst = gen_singular_instance(4, 0.9, seed=5)
    assignment = _solved(inst.matrix)
    # machine-precision planted instances pass even a 1e-15 gate
    gamma = right_null_vector(inst.matrix, assignment, tight)
    assert gamma is not None
