"""
Exact linear algebra over Q(t) using fraction-free (Bareiss) elimination.

Rows are scaled to Q[t] before elimination so every intermediate entry is a
polynomial minor; the divisions by the previous pivot are exact.
"""

import logging
from typing import List, Sequence, Tuple

from sympy import QQ, Poly

from rational import T, RatFuncT, common_denominator

logger = logging.getLogger(__name__)


class QtMatrix:
    """A dense rectangular matrix with entries in Q(t)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence[RatFuncT]], ncols: int = None):
        self.rows: List[List[RatFuncT]] = [[RatFuncT.coerce(e) for e in row] for row in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(row) != ncols for row in self.rows):
            raise ValueError("ragged matrix rows")
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "QtMatrix":
        return cls([[RatFuncT.zero() for _ in range(ncols)] for _ in range(nrows)], ncols)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, index: Tuple[int, int]) -> RatFuncT:
        i, j = index
        return self.rows[i][j]

    def __setitem__(self, index: Tuple[int, int], value: RatFuncT) -> None:
        i, j = index
        self.rows[i][j] = RatFuncT.coerce(value)

    def minor(self, drop_row: int, drop_col: int) -> "QtMatrix":
        """The matrix without one row and one column."""
        return QtMatrix(
            [
                [e for j, e in enumerate(row) if j != drop_col]
                for i, row in enumerate(self.rows)
                if i != drop_row
            ],
            self.ncols - 1,
        )

    def mul_vector(self, v: Sequence[RatFuncT]) -> List[RatFuncT]:
        """
        Matrix-vector product.

        Args:
            v: Vector with one entry per column

        Returns:
            One entry per row

        Raises:
            ValueError: If the length of v does not match the column count
        """
        if len(v) != self.ncols:
            raise ValueError("vector length does not match column count")
        out = []
        for row in self.rows:
            acc = RatFuncT.zero()
            for e, c in zip(row, v):
                if e and c:
                    acc = acc + e * c
            out.append(acc)
        return out

    def determinant(self) -> RatFuncT:
        """
        Determinant by fraction-free elimination over Q[t].

        Returns:
            det, with the row scalings divided back out

        Raises:
            ValueError: If the matrix is not square
        """
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if self.nrows == 0:
            return RatFuncT.one()
        scaled, scale = _integral_rows(self.rows)
        echelon, pivots, sign = _bareiss(scaled, self.ncols)
        if len(pivots) < self.nrows:
            return RatFuncT.zero()
        det = RatFuncT(echelon[-1][-1]) * sign
        for s in scale:
            det = det / RatFuncT(s)
        return det

    def rank(self) -> int:
        """Number of pivots in the fraction-free echelon form."""
        if self.nrows == 0 or self.ncols == 0:
            return 0
        scaled, _ = _integral_rows(self.rows)
        _, pivots, _ = _bareiss(scaled, self.ncols)
        return len(pivots)

    def nullspace(self) -> List[List[RatFuncT]]:
        """A basis of the right kernel in reduced form.

        One vector per free column: that column is 1, the other free columns
        are 0, pivot columns are solved by back-substitution.
        """
        n = self.ncols
        if self.nrows == 0:
            return [[RatFuncT.one() if j == k else RatFuncT.zero() for j in range(n)] for k in range(n)]
        scaled, _ = _integral_rows(self.rows)
        echelon, pivots, _ = _bareiss(scaled, n)
        pivot_set = set(pivots)
        free = [c for c in range(n) if c not in pivot_set]
        logger.debug("nullspace: %dx%d, rank %d, %d free columns", self.nrows, n, len(pivots), len(free))

        basis = []
        for f in free:
            vec = [RatFuncT.zero() for _ in range(n)]
            vec[f] = RatFuncT.one()
            for k in reversed(range(len(pivots))):
                c = pivots[k]
                row = echelon[k]
                acc = RatFuncT.zero()
                for j in range(c + 1, n):
                    if vec[j] and not row[j].is_zero:
                        acc = acc + RatFuncT(row[j]) * vec[j]
                vec[c] = -acc / RatFuncT(row[c])
            basis.append(vec)
        return basis

    def __eq__(self, other) -> bool:
        if not isinstance(other, QtMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self) -> str:
        return f"QtMatrix({self.nrows}x{self.ncols})"


def _integral_rows(rows: List[List[RatFuncT]]) -> Tuple[List[List[Poly]], List[Poly]]:
    """Multiply each row by the lcm of its denominators; return rows and scalings."""
    scaled, scale = [], []
    for row in rows:
        lcm = common_denominator(row)
        scaled.append([e.num * lcm.exquo(e.den) for e in row])
        scale.append(lcm)
    return scaled, scale


def _bareiss(rows: List[List[Poly]], ncols: int) -> Tuple[List[List[Poly]], List[int], int]:
    """Fraction-free row echelon form over Q[t].

    Returns the echelon rows, the pivot columns and the sign of the row
    permutation.
    """
    E = [list(row) for row in rows]
    m = len(E)
    zero = Poly(0, T, domain=QQ)
    prev = Poly(1, T, domain=QQ)
    sign = 1
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if not E[i][c].is_zero), None)
        if p is None:
            continue
        if p != r:
            E[p], E[r] = E[r], E[p]
            sign = -sign
        piv = E[r][c]
        for i in range(r + 1, m):
            lead = E[i][c]
            for j in range(c + 1, ncols):
                E[i][j] = (piv * E[i][j] - lead * E[r][j]).exquo(prev)
            E[i][c] = zero
        prev = piv
        pivots.append(c)
        r += 1
    return E, pivots, sign


def determinant(m: QtMatrix) -> RatFuncT:
    """
    Determinant of a square matrix over Q(t).

    Args:
        m: Square matrix

    Returns:
        det(m); the empty matrix has determinant 1

    Raises:
        ValueError: If m is not square
    """
    return m.determinant()


def rank(m: QtMatrix) -> int:
    """
    Rank over Q(t).

    Args:
        m: Matrix

    Returns:
        Number of independent rows
    """
    return m.rank()


def nullspace(m: QtMatrix) -> List[List[RatFuncT]]:
    """
    Basis of the right kernel over Q(t).

    Args:
        m: Matrix

    Returns:
        One vector per free column, that column set to 1; empty when m has
        full column rank
    """
    return m.nullspace()
