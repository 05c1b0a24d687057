"""
Tests for fraction-free elimination over Q(t).
"""

import pytest

from linalg import QtMatrix, determinant, nullspace, rank
from rational import RatFuncT

t = RatFuncT.t()
one, zero = RatFuncT.one(), RatFuncT.zero()


class TestNullspace:
    """Test reduced nullspace bases."""

    def test_single_row_constants(self):
        """Test [[1, -1]] has basis (1, 1)."""
        assert nullspace(QtMatrix([[one, -one]])) == [[one, one]]

    def test_single_row_polynomials(self):
        """Test [[t, t^2]] has basis (-t, 1)."""
        assert nullspace(QtMatrix([[t, t * t]])) == [[-t, one]]

    def test_full_rank_square(self):
        """Test an invertible matrix has an empty nullspace."""
        assert nullspace(QtMatrix([[one, t], [t, one]])) == []

    def test_skipped_pivot_column(self):
        """Test a zero column becomes a free variable."""
        m = QtMatrix([[zero, one, t], [zero, t, t * t]])
        basis = nullspace(m)
        assert len(basis) == 2
        for vec in basis:
            assert all(v.is_zero for v in m.mul_vector(vec))

    def test_rational_entries(self):
        """Test denominators are cleared and results stay exact."""
        m = QtMatrix([[one / t, one / (t + 1), one], [one, t, t * t]])
        basis = nullspace(m)
        assert len(basis) == 1
        assert all(v.is_zero for v in m.mul_vector(basis[0]))

    def test_empty_rows(self):
        """Test a matrix with no rows has the identity basis."""
        assert nullspace(QtMatrix([], 2)) == [[one, zero], [zero, one]]


class TestDeterminantAndRank:
    """Test determinant and rank."""

    def test_determinant_2x2(self):
        """Test det [[t, 1], [1, t]] = t^2 - 1."""
        assert determinant(QtMatrix([[t, one], [one, t]])) == t * t - 1

    def test_determinant_with_row_swap(self):
        """Test a pivot swap flips the sign."""
        assert determinant(QtMatrix([[zero, one], [one, zero]])) == -one

    def test_determinant_rational(self):
        """Test scaled rows are divided back out."""
        m = QtMatrix([[one / t, one], [one, t]])
        assert determinant(m) == zero
        m = QtMatrix([[one / t, zero], [zero, one / (t + 1)]])
        assert determinant(m) == one / (t * (t + 1))

    def test_determinant_3x3(self):
        """Test a 3x3 Vandermonde determinant in 1, t, t^2."""
        nodes = [one, t, t * t]
        m = QtMatrix([[n ** k for k in range(3)] for n in nodes])
        expected = (t - 1) * (t * t - 1) * (t * t - t)
        assert determinant(m) == expected

    def test_determinant_needs_square(self):
        """Test non-square input is rejected."""
        with pytest.raises(ValueError, match="non-square"):
            determinant(QtMatrix([[one, t]]))

    def test_rank(self):
        """Test rank counts pivots."""
        assert rank(QtMatrix([[one, t], [t, t * t]])) == 1
        assert rank(QtMatrix([[one, t], [t, one]])) == 2
        assert rank(QtMatrix.zeros(2, 3)) == 0

    def test_rank_nullity(self):
        """Test rank + nullity = columns."""
        m = QtMatrix([[one, t, t * t, one], [t, one, t, zero], [one + t, one + t, t * t + t, one]])
        assert rank(m) + len(nullspace(m)) == 4
