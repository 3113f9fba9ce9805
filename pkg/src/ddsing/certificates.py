"""Null vectors and structure witnesses for singular weakly dominant blocks.

A consistent angle assignment gives the right null vector gamma directly.
The left null vector comes from the comparison matrix mu (diagonal |a_ii|,
off-diagonal -|a_ij|): solve p^T mu = 0 with the anchor entry fixed to 1,
then unwind the diagonal similarity, rho_i = p_i * exp(-1j*arg(a_ii)) /
gamma_i.  Two decompositions certify the structure itself:

  unitary witness   Upsilon^-1 A Upsilon = D(A_c) mu(A),  Upsilon = diag(gamma)
  markov split      Upsilon^-1 A Upsilon = D(A) (I - S),  S row stochastic

and B = diag(rho) A diag(gamma) is real and doubly balanced with positive
diagonal and nonpositive off-diagonal entries.

Every residual here is an infinity norm relative to the largest row modulus
sum of the block; checks failing ``tol_res`` raise ResidualTooLarge.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import AngleAssignment
from .digraph import FrobeniusForm
from .errors import (
    DimensionMismatch,
    NonPositiveWeight,
    ResidualTooLarge,
    SingularDependentBlock,
    ZeroDiagonal,
)
from .matrix import Tolerances, as_matrix, comparison_matrix, max_row_sum


def _relative(value: float, scale: float) -> float:
    if scale == 0.0:
        return 0.0 if value == 0.0 else float("inf")
    return value / scale


def right_null_vector(block, assignment: AngleAssignment, tol: Tolerances | None = None) -> np.ndarray:
    """Unit-modulus right null vector from a consistent assignment."""
    tol = tol or Tolerances()
    m = as_matrix(block)
    if len(assignment.thetas) != m.shape[0]:
        raise DimensionMismatch("assignment length does not match block order")
    gamma = assignment.gamma()
    residual = _relative(float(np.abs(m @ gamma).max()), max_row_sum(m))
    if residual > tol.tol_res:
        raise ResidualTooLarge(f"right residual {residual:.3e} exceeds tol_res {tol.tol_res:.1e}")
    return gamma


def left_null_vector(block, gamma, tol: Tolerances | None = None) -> np.ndarray:
    """Left null vector rho with positive comparison weights, anchor fixed to 1.

    The comparison matrix of a singular irreducible weak block has rank n-1,
    so dropping the anchor row and column of mu^T leaves a nonsingular system.
    The recovered p must be strictly positive.
    """
    tol = tol or Tolerances()
    m = as_matrix(block)
    n = m.shape[0]
    gamma = np.asarray(gamma, dtype=np.complex128)
    if gamma.shape != (n,):
        raise DimensionMismatch("gamma length does not match block order")
    anchor = 0
    if n == 1:
        p = np.ones(1)
    else:
        mu_t = comparison_matrix(m).T
        keep = [i for i in range(n) if i != anchor]
        reduced = mu_t[np.ix_(keep, keep)]
        rhs = -mu_t[keep, anchor]
        try:
            solution = np.linalg.solve(reduced, rhs)
        except np.linalg.LinAlgError as exc:
            raise ResidualTooLarge(f"reduced comparison system is singular: {exc}") from exc
        p = np.ones(n)
        p[keep] = solution
    if np.any(p <= 0.0):
        raise NonPositiveWeight(f"comparison weights must be positive, got min {p.min():.3e}")

    diag_args = np.angle(np.diag(m))
    rho = p * np.exp(-1j * diag_args) / gamma
    residual = _relative(float(np.abs(rho @ m).max()), max_row_sum(m))
    if residual > tol.tol_res:
        raise ResidualTooLarge(f"left residual {residual:.3e} exceeds tol_res {tol.tol_res:.1e}")
    return rho


@dataclass(frozen=True)
class SingularCertificate:
    gamma: tuple[complex, ...]
    rho: tuple[complex, ...]
    right_residual: float
    left_residual: float


@dataclass(frozen=True)
class UnitaryWitness:
    """Diagonal unitary similarity onto the comparison matrix.

    ``residual`` checks Upsilon^-1 A Upsilon = D(A_c) mu(A); the normalized
    variant checks the same identity for D(A)^-1 A, whose comparison matrix
    has unit diagonal.
    """

    gamma: tuple[complex, ...]
    mu: tuple[tuple[float, ...], ...]
    residual: float
    normalized_residual: float


@dataclass(frozen=True)
class MarkovDecomposition:
    """A = D(A) (I - S) up to the diagonal unitary similarity; S is row
    stochastic with zero diagonal."""

    diag: tuple[complex, ...]
    stochastic: tuple[tuple[float, ...], ...]
    residual: float


def unitary_witness(block, gamma, tol: Tolerances | None = None) -> UnitaryWitness:
    tol = tol or Tolerances()
    m = as_matrix(block)
    n = m.shape[0]
    gamma = np.asarray(gamma, dtype=np.complex128)
    diag = np.diag(m)
    if np.any(diag == 0):
        raise ZeroDiagonal("unitary witness needs nonzero diagonal entries")
    scale = max_row_sum(m)
    mu = comparison_matrix(m)
    conjugated = m * (gamma[np.newaxis, :] / gamma[:, np.newaxis])
    phases = np.exp(1j * np.angle(diag))
    residual = _relative(
        float(np.abs(conjugated - phases[:, np.newaxis] * mu).max(initial=0.0)), scale
    )
    normalized = m / diag[:, np.newaxis]
    conj_norm = normalized * (gamma[np.newaxis, :] / gamma[:, np.newaxis])
    norm_residual = _relative(
        float(np.abs(conj_norm - comparison_matrix(normalized)).max(initial=0.0)),
        max_row_sum(normalized),
    )
    if residual > tol.tol_res or norm_residual > tol.tol_res:
        raise ResidualTooLarge(
            f"witness residuals {residual:.3e} / {norm_residual:.3e} "
            f"exceed tol_res {tol.tol_res:.1e}"
        )
    return UnitaryWitness(
        gamma=tuple(gamma),
        mu=tuple(tuple(float(x) for x in row) for row in mu),
        residual=residual,
        normalized_residual=norm_residual,
    )


def markov_decomposition(block, gamma, tol: Tolerances | None = None) -> MarkovDecomposition:
    tol = tol or Tolerances()
    m = as_matrix(block)
    gamma = np.asarray(gamma, dtype=np.complex128)
    diag = np.diag(m)
    if np.any(diag == 0):
        raise ZeroDiagonal("markov decomposition needs nonzero diagonal entries")
    s = np.abs(m) / np.abs(diag)[:, np.newaxis]
    np.fill_diagonal(s, 0.0)
    conjugated = m * (gamma[np.newaxis, :] / gamma[:, np.newaxis])
    target = diag[:, np.newaxis] * (np.eye(m.shape[0]) - s)
    residual = _relative(float(np.abs(conjugated - target).max()), max_row_sum(m))
    if residual > tol.tol_res:
        raise ResidualTooLarge(f"markov residual {residual:.3e} exceeds tol_res {tol.tol_res:.1e}")
    return MarkovDecomposition(
        diag=tuple(diag),
        stochastic=tuple(tuple(float(x) for x in row) for row in s),
        residual=residual,
    )


def b_matrix(block, rho, gamma, tol: Tolerances | None = None) -> np.ndarray:
    """Real doubly balanced form diag(rho) A diag(gamma).

    Checks realness, positive diagonal, nonpositive off-diagonal, and zero
    row and column sums, all within ``tol_res`` of the scale of B.
    """
    tol = tol or Tolerances()
    m = as_matrix(block)
    rho = np.asarray(rho, dtype=np.complex128)
    gamma = np.asarray(gamma, dtype=np.complex128)
    b = rho[:, np.newaxis] * m * gamma[np.newaxis, :]
    scale = max_row_sum(b)
    bound = tol.tol_res * scale
    if float(np.abs(b.imag).max()) > bound:
        raise ResidualTooLarge("B has a non-negligible imaginary part")
    real = b.real.copy()
    if np.any(np.diag(real) <= 0.0):
        raise ResidualTooLarge("B must have a positive diagonal")
    off = real.copy()
    np.fill_diagonal(off, 0.0)
    if float(off.max(initial=0.0)) > bound:
        raise ResidualTooLarge("B must have nonpositive off-diagonal entries")
    if float(np.abs(real.sum(axis=1)).max()) > bound or float(np.abs(real.sum(axis=0)).max()) > bound:
        raise ResidualTooLarge("B must have zero row and column sums")
    return real


def extend_null_vector(a, form: FrobeniusForm, block_id: int, gamma_block, tol: Tolerances | None = None) -> np.ndarray:
    """Extend a singular independent block's null vector to the full matrix.

    The extension is zero on the other independent blocks; dependent blocks
    are solved in normal-form order, where each one only couples to already
    known entries: A_pp x_p = -sum_q A_pq x_q.  Dependent blocks are
    nonsingular, so the solves cannot legitimately fail.
    """
    tol = tol or Tolerances()
    m = as_matrix(a)
    if not 0 <= block_id < len(form.blocks):
        raise DimensionMismatch(f"block id {block_id} out of range")
    if not form.independent_flags[block_id]:
        raise DimensionMismatch(f"block {block_id} is not independent")
    gamma_block = np.asarray(gamma_block, dtype=np.complex128)
    members = form.original_members(block_id)
    if gamma_block.shape != (len(members),):
        raise DimensionMismatch("gamma length does not match block size")

    x = np.zeros(m.shape[0], dtype=np.complex128)
    x[list(members)] = gamma_block
    for b in range(form.independent_count, len(form.blocks)):
        rows = list(form.original_members(b))
        sub = m[np.ix_(rows, rows)]
        rhs = -(m[rows, :] @ x) + sub @ x[rows]
        try:
            x[rows] = np.linalg.solve(sub, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularDependentBlock(f"dependent block {b} did not solve: {exc}") from exc

    residual = _relative(float(np.abs(m @ x).max()), max_row_sum(m))
    if residual > tol.tol_res:
        raise ResidualTooLarge(f"extension residual {residual:.3e} exceeds tol_res {tol.tol_res:.1e}")
    return x


@dataclass(frozen=True)
class CertificateBundle:
    """Everything attached to one singular block verdict."""

    block_id: int
    certificate: SingularCertificate
    markov: MarkovDecomposition | None
    witness: UnitaryWitness | None


def certificate_bundle(block, assignment: AngleAssignment, tol: Tolerances | None = None, block_id: int = 0) -> CertificateBundle:
    """Build the full bundle for a singular block of size >= 2."""
    tol = tol or Tolerances()
    gamma = right_null_vector(block, assignment, tol)
    rho = left_null_vector(block, gamma, tol)
    m = as_matrix(block)
    scale = max_row_sum(m)
    cert = SingularCertificate(
        gamma=tuple(gamma),
        rho=tuple(rho),
        right_residual=_relative(float(np.abs(m @ gamma).max()), scale),
        left_residual=_relative(float(np.abs(rho @ m).max()), scale),
    )
    return CertificateBundle(
        block_id=block_id,
        certificate=cert,
        markov=markov_decomposition(m, gamma, tol),
        witness=unitary_witness(m, gamma, tol),
    )


def singleton_certificate(value: complex, parent_scale: float, block_id: int = 0) -> CertificateBundle:
    """Bundle for a 1x1 block judged zero at matrix scale.

    The Markov and unitary witnesses need a nonzero diagonal, so they are
    omitted; residuals are relative to the full-matrix scale.
    """
    residual = _relative(abs(value), parent_scale)
    cert = SingularCertificate(
        gamma=(1.0 + 0j,),
        rho=(1.0 + 0j,),
        right_residual=residual,
        left_residual=residual,
    )
    return CertificateBundle(block_id=block_id, certificate=cert, markov=None, witness=None)
