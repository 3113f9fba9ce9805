"""Dense complex matrices: polar form, dominance and balance classification,
the comparison matrix, and column scaling for generalized dominance.

Row ``i`` is *strictly* dominant when ``|a_ii|`` exceeds the sum of the other
row moduli, *weakly* dominant when the two are equal, and *violated*
otherwise.  All comparisons use a relative band of width ``tol_dom`` around
equality, scaled by the total row modulus sum, so the classification is
invariant under rescaling the whole matrix.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonPositiveWeight

TWO_PI = 2.0 * math.pi


class RowClass(str, enum.Enum):
    STRICT = "strict"
    WEAK = "weak"
    VIOLATED = "violated"


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used by the analyzer.

    tol_dom
        Relative half-width of the equality band in dominance and balance
        tests, scaled by the row (or line) modulus sum.
    tol_angle
        Absolute wraparound tolerance, in radians, for angle-equation
        residuals.
    tol_res
        Relative bound on certificate residuals, scaled by the largest row
        modulus sum.

    Each tolerance must lie strictly between 0 and 0.1.
    """

    tol_dom: float = 1e-8
    tol_angle: float = 1e-9
    tol_res: float = 1e-8

    def __post_init__(self):
        for name in ("tol_dom", "tol_angle", "tol_res"):
            value = getattr(self, name)
            if not 0.0 < value < 0.1:
                raise ValueError(f"{name} must be in (0, 0.1), got {value!r}")


def as_matrix(a) -> np.ndarray:
    """Coerce to a square complex128 array, copying once."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def max_row_sum(a) -> float:
    """Largest row modulus sum; the scale used by relative residual checks."""
    m = as_matrix(a)
    return float(np.abs(m).sum(axis=1).max())


@dataclass(frozen=True, eq=False)
class PolarSplit:
    """Moduli and arguments of a matrix.

    ``args`` holds NaN wherever the entry is zero; arguments of present
    entries are reduced to [0, 2*pi).
    """

    moduli: np.ndarray
    args: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Rebuild the complex matrix from moduli and arguments."""
        args = np.where(np.isnan(self.args), 0.0, self.args)
        return self.moduli * np.exp(1j * args)


def polar_split(a) -> PolarSplit:
    m = as_matrix(a)
    moduli = np.abs(m)
    args = np.mod(np.angle(m), TWO_PI)
    args[args >= TWO_PI] = 0.0
    args = np.where(moduli > 0.0, args, np.nan)
    return PolarSplit(moduli=moduli, args=args)


def diagonal_of(a) -> np.ndarray:
    """The diagonal as a 1-d complex vector."""
    return np.diag(as_matrix(a)).copy()


@dataclass(frozen=True)
class RowDominance:
    diag_modulus: float
    offdiag_sum: float
    row_class: RowClass


@dataclass(frozen=True)
class DominanceProfile:
    rows: tuple[RowDominance, ...]

    def classes(self) -> tuple[RowClass, ...]:
        return tuple(r.row_class for r in self.rows)

    @property
    def all_strict(self) -> bool:
        return all(r.row_class is RowClass.STRICT for r in self.rows)

    @property
    def all_weak(self) -> bool:
        return all(r.row_class is RowClass.WEAK for r in self.rows)

    @property
    def violated_rows(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.rows) if r.row_class is RowClass.VIOLATED)

    @property
    def dominant(self) -> bool:
        """True when no row is violated, i.e. the matrix is diagonally dominant."""
        return not self.violated_rows


def classify_rows(a, tol: Tolerances | None = None) -> DominanceProfile:
    """Classify every row as strict, weak, or violated.

    A zero row has diag modulus and off-diagonal sum both zero and counts as
    weak.  The equality band is ``tol_dom`` times the row modulus sum.
    """
    tol = tol or Tolerances()
    m = as_matrix(a)
    moduli = np.abs(m)
    diag = np.abs(np.diag(m))
    off = moduli.sum(axis=1) - diag
    band = tol.tol_dom * (diag + off)
    rows = []
    for d, s, eps in zip(diag, off, band):
        if abs(d - s) <= eps:
            cls = RowClass.WEAK
        elif d > s:
            cls = RowClass.STRICT
        else:
            cls = RowClass.VIOLATED
        rows.append(RowDominance(float(d), float(s), cls))
    return DominanceProfile(rows=tuple(rows))


@dataclass(frozen=True)
class BalanceCheck:
    axis: str
    lines: tuple[bool, ...]

    @property
    def all_balanced(self) -> bool:
        return all(self.lines)


def balance_check(a, axis: str = "row", tol: Tolerances | None = None) -> BalanceCheck:
    """Test whether each row (or column) sums to zero.

    A line is balanced when the modulus of its complex sum is at most
    ``tol_dom`` times its modulus sum; a zero line is balanced.
    """
    tol = tol or Tolerances()
    m = as_matrix(a)
    if axis not in ("row", "column"):
        raise ValueError(f"axis must be 'row' or 'column', got {axis!r}")
    ax = 1 if axis == "row" else 0
    sums = np.abs(m.sum(axis=ax))
    totals = np.abs(m).sum(axis=ax)
    lines = tuple(bool(s <= tol.tol_dom * t) for s, t in zip(sums, totals))
    return BalanceCheck(axis=axis, lines=lines)


def comparison_matrix(a) -> np.ndarray:
    """Real matrix with ``|a_ii|`` on the diagonal and ``-|a_ij|`` off it."""
    m = as_matrix(a)
    g = -np.abs(m)
    np.fill_diagonal(g, np.abs(np.diag(m)))
    return g


def scale_columns(a, v) -> np.ndarray:
    """Right-multiply by ``diag(v)``; every weight must be positive.

    Dominance of the scaled matrix is exactly generalized dominance of the
    original with weight vector ``v``.
    """
    m = as_matrix(a)
    w = np.asarray(v, dtype=np.float64)
    if w.shape != (m.shape[0],):
        raise DimensionMismatch(
            f"weight vector of length {w.shape} does not fit matrix of order {m.shape[0]}"
        )
    if not np.all(w > 0.0):
        raise NonPositiveWeight(f"weights must be positive, got min {w.min()!r}")
    return m * w[np.newaxis, :]
