"""Brute-force ground truth and instance generators.

``rank_det_oracle`` is an independent check on the analyzer: plain Gaussian
elimination with partial pivoting on the complex entries, no structure
exploited.  A pivot counts when its modulus exceeds ``pivot_tol`` times the
largest initial row modulus sum.  The oracle is capped at order 64; it is a
verification tool, not a solver.

The generators invert the diagonal-unitary similarity that characterizes
singular irreducible weakly dominant matrices: draw a nonnegative balanced
modulus seed, then conjugate by random unit-modulus diagonals.  The planted
null vector is the diagonal of the similarity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import is_strongly_connected, support_digraph
from .errors import DegenerateSupport, TooLarge
from .matrix import as_matrix, max_row_sum

ORACLE_CAP = 64
SUPPORT_RETRIES = 100


@dataclass(frozen=True)
class OracleResult:
    rank: int
    det: complex
    null_basis: tuple[tuple[complex, ...], ...]

    @property
    def singular(self) -> bool:
        return self.det == 0

    @property
    def nullity(self) -> int:
        return len(self.null_basis)


def rank_det_oracle(a, pivot_tol: float = 1e-10) -> OracleResult:
    """Rank, determinant, and a null-space basis by row reduction.

    det is exactly 0 whenever rank < n.  Each null basis vector has infinity
    norm 1.  Raises TooLarge above order 64.
    """
    m = as_matrix(a)
    n = m.shape[0]
    if n > ORACLE_CAP:
        raise TooLarge(f"oracle is capped at order {ORACLE_CAP}, got {n}")
    scale = max_row_sum(m)
    threshold = pivot_tol * scale

    u = m.copy()
    sign = 1.0
    pivot_cols: list[int] = []
    r = 0
    for c in range(n):
        if r == n:
            break
        p = r + int(np.argmax(np.abs(u[r:, c])))
        if abs(u[p, c]) <= threshold:
            u[r:, c] = 0.0
            continue
        if p != r:
            u[[r, p], :] = u[[p, r], :]
            sign = -sign
        factors = u[r + 1 :, c] / u[r, c]
        u[r + 1 :, c:] -= np.outer(factors, u[r, c:])
        u[r + 1 :, c] = 0.0
        pivot_cols.append(c)
        r += 1

    rank = r
    if rank < n:
        det = 0j
    else:
        det = complex(sign * np.prod(np.diag(u)))

    free_cols = [c for c in range(n) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        v = np.zeros(n, dtype=np.complex128)
        v[f] = 1.0
        for row in range(rank - 1, -1, -1):
            c = pivot_cols[row]
            v[c] = -(u[row, c + 1 :] @ v[c + 1 :]) / u[row, c]
        v /= np.abs(v).max()
        basis.append(tuple(v))
    return OracleResult(rank=rank, det=det, null_basis=tuple(basis))


@dataclass(frozen=True, eq=False)
class PlantedInstance:
    """A singular irreducible weakly dominant matrix with its null vector.

    ``matrix @ gamma`` vanishes to machine precision by construction;
    ``mu_seed`` is the nonnegative balanced modulus seed.
    """

    matrix: np.ndarray
    gamma: tuple[complex, ...]
    mu_seed: np.ndarray


def _connected_support(rng, n: int, density: float) -> np.ndarray:
    for _ in range(SUPPORT_RETRIES):
        mask = rng.random((n, n)) < density
        np.fill_diagonal(mask, False)
        if is_strongly_connected(support_digraph(mask)):
            return mask
    raise DegenerateSupport(
        f"no strongly connected support after {SUPPORT_RETRIES} draws "
        f"(n={n}, density={density})"
    )


def gen_singular_instance(n: int, density: float = 0.5, seed: int = 0) -> PlantedInstance:
    """Plant a singular instance of order ``n >= 2``.

    Off-diagonal moduli are drawn on a strongly connected support, diagonal
    moduli equal the off-diagonal row sums exactly, and the result is
    conjugated by random unit-modulus diagonals.  Raises DegenerateSupport
    when the density is too low to connect the support within the retry
    budget.
    """
    if n < 2:
        raise ValueError(f"planted instances need n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    mask = _connected_support(rng, n, density)

    moduli = np.where(mask, rng.uniform(0.2, 1.0, (n, n)), 0.0)
    row_sums = moduli.sum(axis=1)
    mu = -moduli
    np.fill_diagonal(mu, row_sums)

    upsilon = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n))
    dc = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n))
    a = (upsilon * dc)[:, np.newaxis] * mu * np.conj(upsilon)[np.newaxis, :]
    return PlantedInstance(matrix=a, gamma=tuple(upsilon), mu_seed=mu)


def gen_perturbed_instance(base: PlantedInstance, delta: float) -> np.ndarray:
    """Rotate one off-diagonal entry of a planted instance by exp(1j*delta).

    The entry lies on a directed cycle (any off-diagonal entry of an
    irreducible matrix does), so the rotation breaks the angle system's cycle
    closure: for delta in (0, pi] the result is nonsingular while moduli, and
    hence dominance, are unchanged.
    """
    if not 0.0 < delta <= np.pi:
        raise ValueError(f"delta must be in (0, pi], got {delta}")
    a = base.matrix.copy()
    n = a.shape[0]
    for i in range(n):
        for j in range(n):
            if i != j and a[i, j] != 0:
                a[i, j] *= np.exp(1j * delta)
                return a
    raise ValueError("planted instance has no off-diagonal entry")


FIXTURE_KINDS = ("laplacian", "kolmogorov", "markovm")


def gen_fixture(kind: str, n: int, seed: int = 0) -> np.ndarray:
    """Classic singular families, all real and row balanced.

    laplacian: nonnegative off-diagonal weights, diagonal minus the row sum.
    kolmogorov: Q - I for a dense random row-stochastic Q.
    markovm: I - S for a random row-stochastic S with zero diagonal.

    Every independent block of the result is singular with null vector 1.
    """
    if n < 1:
        raise ValueError(f"fixtures need n >= 1, got {n}")
    rng = np.random.default_rng(seed)
    k = kind.lower()
    if k == "laplacian":
        mask = rng.random((n, n)) < 0.5
        np.fill_diagonal(mask, False)
        w = np.where(mask, rng.uniform(0.2, 1.0, (n, n)), 0.0)
        a = w.copy()
        np.fill_diagonal(a, -w.sum(axis=1))
        return a
    if k == "kolmogorov":
        q = rng.uniform(0.1, 1.0, (n, n))
        q /= q.sum(axis=1, keepdims=True)
        return q - np.eye(n)
    if k == "markovm":
        if n == 1:
            return np.zeros((1, 1))
        mask = rng.random((n, n)) < 0.6
        np.fill_diagonal(mask, False)
        for i in range(n):
            if not mask[i].any():
                j = rng.integers(0, n - 1)
                mask[i, j + (j >= i)] = True
        s = np.where(mask, rng.uniform(0.2, 1.0, (n, n)), 0.0)
        s /= s.sum(axis=1, keepdims=True)
        return np.eye(n) - s
    raise ValueError(f"unknown fixture kind {kind!r}; expected one of {FIXTURE_KINDS}")
