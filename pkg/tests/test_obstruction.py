"""
Tests for the obstruction operator solver.
"""

from dataclasses import replace
from unittest.mock import patch

import pytest

from errors import BoundsTooSmall, DomainError, IntegrabilityViolation, SystemTooLarge, TrivialNullspace
from obstruction import (
    DegenerateReport,
    ObstructionCertificate,
    ObstructionProblem,
    build_system,
    default_bounds,
    r_sequence,
    rational_first_order_kernel,
    solve_obstruction,
    verify_obstruction,
)
from ore import OreOperator
from rational import RatFuncT, RatFuncXT, d_t, d_x
from settings import settings

t = RatFuncT.t()


@pytest.fixture
def moving_pole(rx):
    """A = -1/(x - t), B = 1/(x - t)."""
    return ObstructionProblem.from_pair(rx("-1/(x - t)"), rx("1/(x - t)"))


class TestBounds:
    """Test default bounds and problem setup."""

    @pytest.mark.parametrize("n, p, expected", [(1, 1, (2, 2)), (1, 2, (3, 3)), (2, 2, (5, 9)), (1, 3, (4, 4))])
    def test_default_bounds(self, n, p, expected):
        """Test M = n p + 1 and N = n (M - 1) + 1."""
        assert default_bounds(n, p) == expected

    def test_bounds_need_positive_inputs(self):
        """Test n = 0 is rejected."""
        with pytest.raises(ValueError, match="n >= 1"):
            default_bounds(0, 2)

    def test_from_pair(self, moving_pole):
        """Test the pole set, n and bounds are derived."""
        assert moving_pole.poles == (t,)
        assert moving_pole.p == 2
        assert (moving_pole.n, moving_pole.M, moving_pole.N) == (1, 3, 3)

    def test_explicit_bounds(self, rx):
        """Test overrides replace the defaults."""
        prob = ObstructionProblem.from_pair(rx("-1/(x - t)"), rx("1/(x - t)"), M=5, N=2)
        assert (prob.M, prob.N) == (5, 2)

    def test_integrability_violation(self, rx):
        """Test d_t A != d_x B is rejected."""
        with pytest.raises(IntegrabilityViolation):
            ObstructionProblem.from_pair(rx("1/(x - t)"), rx("0"))


class TestRSequence:
    """Test R_{i+1} = d_t R_i + B R_i."""

    def test_moving_pole(self, rx):
        """Test R for B = 1/(x - t)."""
        R = r_sequence(rx("1/(x - t)"), 2, order_bound=1)
        assert len(R) == 3
        assert R[0] == RatFuncXT.one()
        assert R[1] == rx("1/(x - t)")
        assert R[2] == rx("2/(x - t)^2")

    def test_zero_b(self, rx):
        """Test B = 0 gives 1, 0, 0, ..."""
        R = r_sequence(rx("0"), 3)
        assert R[0] == RatFuncXT.one()
        assert all(r.is_zero for r in R.terms[1:])

    def test_pole_order_bound(self, rx):
        """Test R_i stays within pole order i n."""
        R = r_sequence(rx("t/(x - t)^2 + x"), 3, order_bound=2)
        assert len(R) == 4

    def test_negative_m(self, rx):
        """Test M < 0 is rejected."""
        with pytest.raises(ValueError):
            r_sequence(rx("x"), -1)


class TestBuildSystem:
    """Test the linear system layout."""

    def test_dimensions(self, moving_pole):
        """Test 9 rows and 11 columns with surplus 2."""
        system = build_system(moving_pole)
        assert (system.nrows, system.ncols) == (9, 11)
        assert system.surplus == 2
        assert system.columns[0] == ("alpha", 0)
        assert system.columns[4] == ("beta", 2, 0)
        assert system.columns[-1] == ("beta", 1, 3)
        assert system.rows[-1] == ("pole", 1, 4)

    def test_size_limit(self, moving_pole):
        """Test the column limit from settings."""
        with patch.object(settings, "max_system_columns", 5):
            with pytest.raises(SystemTooLarge, match="limit is 5"):
                build_system(moving_pole)

    def test_bounds_too_small(self, rx):
        """Test N below n (M - 1) is refused once R_i overflows the rows."""
        prob = ObstructionProblem.from_pair(rx("-1/(x - t)"), rx("1/(x - t)"), M=3, N=0)
        with pytest.raises(BoundsTooSmall, match=r"R_2 has pole order 2 > n \+ N = 1"):
            build_system(prob)

    def test_bounds_too_small_is_domain_error(self):
        """Test the refusal maps to the domain exit code."""
        assert issubclass(BoundsTooSmall, DomainError)

    def test_small_n_that_still_fits(self, rx):
        """Test an override is accepted while every R_i still fits."""
        prob = ObstructionProblem.from_pair(rx("-1/(x - t)"), rx("1/(x - t)"), M=1, N=0)
        system = build_system(prob)
        assert system.ncols == 3

    def test_constant_a_rejected(self, rx):
        """Test A in Q(t) has no system."""
        prob = ObstructionProblem.from_pair(rx("t"), rx("x"))
        with pytest.raises(ValueError, match="Q\\(t\\)"):
            build_system(prob)


class TestSolveObstruction:
    """Test solutions and their certificates."""

    def test_moving_pole(self, moving_pole, rx):
        """Test A = -1/(x - t), B = 1/(x - t) gives L = Dt, h = -1."""
        cert = solve_obstruction(moving_pole)
        assert isinstance(cert, ObstructionCertificate)
        assert cert.operator == OreOperator.dt()
        assert cert.h == rx("-1")
        assert cert.verify()

    def test_static_pole(self, rx):
        """Test A = -1/x, B = 0 gives L = Dt, h = 0."""
        cert = solve_obstruction(ObstructionProblem.from_pair(rx("-1/x"), rx("0")))
        assert cert.operator == OreOperator.dt()
        assert cert.h.is_zero

    def test_a_in_qt(self, rx):
        """Test A = t, B = x short-circuits to (A, 1)."""
        cert = solve_obstruction(ObstructionProblem.from_pair(rx("t"), rx("x")))
        assert cert.operator == OreOperator.scalar(t)
        assert cert.h == RatFuncXT.one()
        assert cert.system is None
        assert cert.verify()

    def test_a_zero(self, rx):
        """Test A = 0 short-circuits to (1, x)."""
        cert = solve_obstruction(ObstructionProblem.from_pair(rx("0"), rx("0")))
        assert cert.operator == OreOperator.one()
        assert cert.h == RatFuncXT.x()
        assert cert.verify()

    def test_two_poles(self, rx):
        """Test a rational w' = (x - t)^2 (x - 1) yields a verified certificate."""
        prob = ObstructionProblem.from_pair(rx("2/(x - t) + 1/(x - 1)"), rx("-2/(x - t)"))
        cert = solve_obstruction(prob)
        assert isinstance(cert, ObstructionCertificate)
        assert cert.operator.is_monic
        assert verify_obstruction(cert)

    def test_trivial_nullspace(self, rx):
        """Test bounds too small to leave free unknowns."""
        prob = ObstructionProblem.from_pair(rx("-1/(x - t)"), rx("1/(x - t)"), M=0, N=0)
        with pytest.raises(TrivialNullspace):
            solve_obstruction(prob)

    def test_tampered_h(self, moving_pole, rx):
        """Test a wrong h fails verification."""
        cert = solve_obstruction(moving_pole)
        assert not verify_obstruction(replace(cert, h=rx("1")))
        assert not verify_obstruction(replace(cert, operator=OreOperator.zero()))


class TestKernel:
    """Test rational solutions of d_x h + A h = 0."""

    def test_integer_residues(self, rx):
        """Test A = -1/x has kernel x."""
        assert rational_first_order_kernel(rx("-1/x")) == rx("x")
        assert rational_first_order_kernel(rx("2/(x - t)")) == rx("1/(x - t)^2")

    @pytest.mark.parametrize("text", ["1/(2*x)", "1/(x - t)^2", "x", "t/(x - 1)"])
    def test_no_rational_kernel(self, rx, text):
        """Test fractional, higher-order, polynomial and non-constant residues."""
        assert rational_first_order_kernel(rx(text)) is None

    def test_degenerate_report_verifies(self, rx):
        """Test the report checks its kernel element."""
        prob = ObstructionProblem.from_pair(rx("-1/x"), rx("0"))
        assert DegenerateReport(prob, rx("x"), rx("x")).verify()
        assert not DegenerateReport(prob, rx("x^2"), None).verify()


class TestRandomizedObstruction:
    """Test solve_obstruction on sampled integrable pairs."""

    def test_certificates_verify(self, sampler):
        """Test every result verifies: certificates by their identity, reports by d_x h0 + A h0 = 0."""
        for _ in range(4):
            A, B = sampler.integrable_pair(max_poles=2)
            result = solve_obstruction(ObstructionProblem.from_pair(A, B))
            if isinstance(result, DegenerateReport):
                h0 = result.h0
                assert not h0.is_zero
                assert (d_x(h0) + A * h0).is_zero
            else:
                assert result.operator.is_monic
                assert verify_obstruction(result)

    def test_sampled_pairs_are_integrable(self, sampler):
        """Test the sampler only produces pairs with d_t A = d_x B."""
        for _ in range(10):
            A, B = sampler.integrable_pair(max_poles=3)
            assert d_t(A) == d_x(B)

    def test_non_integrable_rejected(self, sampler):
        """Test perturbing B by a function with d_x != 0 is always rejected."""
        for _ in range(6):
            A, B = sampler.integrable_pair()
            delta = sampler.split_function(max_poles=2, max_order=2, polynomial_part=False)
            with pytest.raises(IntegrabilityViolation):
                ObstructionProblem.from_pair(A, B + delta)
