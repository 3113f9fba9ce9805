"""The angle-equation system of an irreducible weakly dominant block.

Such a block is singular exactly when the system

    theta_j = pi + arg(a_ii) - arg(a_ij) + theta_i   (mod 2*pi)

over all nonzero off-diagonal entries (i, j) is consistent; a solution gives
the unit-modulus right null vector ``gamma_i = exp(1j * theta_i)``.  The
solver propagates values breadth-first from an anchor fixed at zero, then
re-checks every edge with the wraparound distance, so a single contradictory
cycle is always caught and all violating edges are reported.

For real matrices the system collapses to signs: solutions live in {0, pi},
so the decision is exact.  ``solve_real_signs`` runs the same propagation on
rational input with no tolerance at all.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .digraph import associated_digraph, is_strongly_connected, support_digraph
from .errors import PreconditionViolated
from .matrix import TWO_PI, RowClass, Tolerances, as_matrix, classify_rows, polar_split

MARGINAL_FACTOR = 10.0


def wrap_angle(x: float) -> float:
    """Reduce to [0, 2*pi)."""
    r = math.fmod(x, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:
        r = 0.0
    return r


def angle_distance(x: float, y: float) -> float:
    """Wraparound distance between two angles, in [0, pi]."""
    d = abs(wrap_angle(x) - wrap_angle(y))
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class AngleAssignment:
    """Angles of a candidate null vector; the anchor was fixed to zero at
    solve time (rotating afterwards is allowed, solutions form a circle)."""

    thetas: tuple[float, ...]
    anchor: int

    def gamma(self) -> np.ndarray:
        """Unit-modulus vector exp(1j * theta)."""
        return np.exp(1j * np.asarray(self.thetas))


@dataclass(frozen=True)
class EdgeResidual:
    i: int
    j: int
    residual: float
    marginal: bool


@dataclass(frozen=True)
class ConsistencyReport:
    max_residual: float
    violations: tuple[EdgeResidual, ...]


@dataclass(frozen=True)
class AngleSolve:
    """Outcome of the solver: the assignment iff every edge checked out,
    and the edge-residual report either way."""

    assignment: AngleAssignment | None
    report: ConsistencyReport

    @property
    def consistent(self) -> bool:
        return self.assignment is not None


def _require_block(a, tol: Tolerances):
    m = as_matrix(a)
    g = associated_digraph(m)
    if not is_strongly_connected(g):
        raise PreconditionViolated("block is not irreducible")
    profile = classify_rows(m, tol)
    bad = [i for i, c in enumerate(profile.classes()) if c is not RowClass.WEAK]
    if bad:
        raise PreconditionViolated(f"rows {bad} are not weakly dominant")
    if np.any(np.diag(m) == 0):
        raise PreconditionViolated("zero diagonal entry; size-1 blocks are decided upstream")
    return m, g


def solve_angle_system(block, tol: Tolerances | None = None, anchor: int = 0) -> AngleSolve:
    """Decide consistency of the angle system of one irreducible weak block.

    Values are propagated breadth-first from ``anchor`` (theta = 0), then all
    edges are re-checked: residuals above ``tol_angle`` are violations, and
    those at most ``10 * tol_angle`` are additionally flagged marginal.
    Raises PreconditionViolated when the block is reducible, has a row that
    is not weakly dominant, or has a zero diagonal entry.
    """
    tol = tol or Tolerances()
    m, g = _require_block(block, tol)
    n = m.shape[0]
    if not 0 <= anchor < n:
        raise PreconditionViolated(f"anchor {anchor} out of range for order {n}")

    split = polar_split(m)
    diag_args = np.array([split.args[i, i] for i in range(n)])

    thetas = [0.0] * n
    seen = [False] * n
    seen[anchor] = True
    queue = deque([anchor])
    while queue:
        i = queue.popleft()
        for j in g.adjacency[i]:
            if seen[j]:
                continue
            seen[j] = True
            thetas[j] = wrap_angle(math.pi + diag_args[i] - split.args[i, j] + thetas[i])
            queue.append(j)

    max_residual = 0.0
    violations = []
    for i, j in g.edges():
        expected = math.pi + diag_args[i] - split.args[i, j] + thetas[i]
        residual = angle_distance(thetas[j], expected)
        max_residual = max(max_residual, residual)
        if residual > tol.tol_angle:
            violations.append(
                EdgeResidual(
                    i=i,
                    j=j,
                    residual=residual,
                    marginal=residual <= MARGINAL_FACTOR * tol.tol_angle,
                )
            )
    report = ConsistencyReport(max_residual=max_residual, violations=tuple(violations))
    if violations:
        return AngleSolve(assignment=None, report=report)
    return AngleSolve(assignment=AngleAssignment(tuple(thetas), anchor), report=report)


def normalize_assignment(assignment: AngleAssignment, beta: float) -> AngleAssignment:
    """Rotate every angle by ``beta``; the edge equations are unaffected."""
    return AngleAssignment(
        thetas=tuple(wrap_angle(t + beta) for t in assignment.thetas),
        anchor=assignment.anchor,
    )


@dataclass(frozen=True)
class RealSignVector:
    """Signs of a real null vector, +1 or -1 per entry."""

    signs: tuple[int, ...]
    anchor: int

    def gamma(self) -> np.ndarray:
        return np.asarray(self.signs, dtype=np.float64)


@dataclass(frozen=True)
class RealSignSolve:
    vector: RealSignVector | None
    violations: tuple[tuple[int, int], ...]

    @property
    def consistent(self) -> bool:
        return self.vector is not None


def _as_exact_rows(block) -> list[list[Fraction]]:
    rows = [[Fraction(x) for x in row] for row in block]
    n = len(rows)
    if n < 1 or any(len(r) != n for r in rows):
        raise PreconditionViolated("expected a square matrix of rationals")
    return rows


def solve_real_signs(block, anchor: int = 0) -> RealSignSolve:
    """Exact sign propagation for a real rational block; no tolerance.

    The propagation rule is sign(gamma_j) = -sign(a_ii) * sign(a_ij) *
    sign(gamma_i).  Preconditions mirror the float solver: irreducible and
    every row exactly weak (|a_ii| equal to the off-diagonal modulus sum).
    """
    rows = _as_exact_rows(block)
    n = len(rows)
    mask = np.array([[x != 0 for x in row] for row in rows], dtype=bool)
    g = support_digraph(mask)
    if not is_strongly_connected(g):
        raise PreconditionViolated("block is not irreducible")
    for i in range(n):
        d = abs(rows[i][i])
        s = sum(abs(rows[i][j]) for j in range(n) if j != i)
        if d != s:
            raise PreconditionViolated(f"row {i} is not exactly weak")
    if any(rows[i][i] == 0 for i in range(n)):
        raise PreconditionViolated("zero diagonal entry; size-1 blocks are decided upstream")
    if not 0 <= anchor < n:
        raise PreconditionViolated(f"anchor {anchor} out of range for order {n}")

    def sgn(x: Fraction) -> int:
        return 1 if x > 0 else -1

    signs = [0] * n
    signs[anchor] = 1
    queue = deque([anchor])
    while queue:
        i = queue.popleft()
        for j in g.adjacency[i]:
            if signs[j] != 0:
                continue
            signs[j] = -sgn(rows[i][i]) * sgn(rows[i][j]) * signs[i]
            queue.append(j)

    violations = []
    for i, j in g.edges():
        if signs[j] != -sgn(rows[i][i]) * sgn(rows[i][j]) * signs[i]:
            violations.append((i, j))
    if violations:
        return RealSignSolve(vector=None, violations=tuple(violations))
    return RealSignSolve(
        vector=RealSignVector(signs=tuple(signs), anchor=anchor), violations=()
    )
