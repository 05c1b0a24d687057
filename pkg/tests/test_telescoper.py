"""
Tests for telescopers of rational functions.
"""

import time
from dataclasses import replace

import pytest

from errors import NonSplitDenominator
from ore import OreOperator, apply
from rational import RatFuncT, d_x
from residues import residue_list, split_partial_fractions
from telescoper import apply_to_form, telescope, verify_telescope

t = RatFuncT.t()


class TestTelescope:
    """Test telescoper construction."""

    def test_constant_residue(self, rx):
        """Test 1/(x - t) gives L = Dt, g = -1/(x - t)."""
        cert = telescope(rx("1/(x - t)"))
        assert cert.operator == OreOperator.dt()
        assert cert.integral == rx("-1/(x - t)")

    def test_linear_residue(self, rx):
        """Test t/(x - t) gives L = Dt - 1/t, g = -t/(x - t)."""
        cert = telescope(rx("t/(x - t)"))
        assert cert.operator == OreOperator([-1 / t, 1])
        assert cert.integral == rx("-t/(x - t)")

    def test_no_residues(self, rx):
        """Test an exact derivative needs only the identity."""
        cert = telescope(rx("x^2 + 1/(x - t)^2"))
        assert cert.operator == OreOperator.one()
        assert d_x(cert.integral) == rx("x^2 + 1/(x - t)^2")

    def test_order_is_residue_dimension(self, rx):
        """Test the order equals dim_Q of the residue span."""
        cert = telescope(rx("1/(x - t) + 2/(x - t^2) + t/(x + 1)"))
        # residues 1, 2, t span a 2-dimensional Q-space
        assert cert.operator.order == 2
        assert cert.operator.is_monic

    def test_non_split_rejected(self, rx):
        """Test denominators that do not split over Q(t) are rejected."""
        with pytest.raises(NonSplitDenominator):
            telescope(rx("1/(x^2 - t)"))

    def test_random_functions(self, sampler):
        """Test L(f) = d_x g on sampled split functions."""
        for _ in range(8):
            f = sampler.split_function(max_poles=3, max_order=2)
            cert = telescope(f)
            assert apply(cert.operator, f) == d_x(cert.integral)
            assert cert.operator.order == len(cert.annihilator.basis)


class TestVerifyTelescope:
    """Test certificate re-checking."""

    def test_valid(self, rx):
        """Test a constructed certificate verifies."""
        assert verify_telescope(telescope(rx("t/(x - t)")))

    def test_tampered_integral(self, rx):
        """Test a wrong integral is rejected."""
        cert = telescope(rx("1/(x - t)"))
        assert not verify_telescope(replace(cert, integral=rx("1/(x - t)")))

    def test_zero_operator(self, rx):
        """Test the zero operator never certifies."""
        cert = telescope(rx("1/(x - t)"))
        assert not verify_telescope(replace(cert, operator=OreOperator.zero(), integral=rx("0")))

    def test_integral_with_foreign_pole(self, rx):
        """Test an integral with a pole that f lacks is rejected."""
        cert = telescope(rx("1/(x - t)"))
        assert not verify_telescope(replace(cert, integral=rx("-1/(x - t) + 1/(x - 1)")))


class TestTelescopeInvariants:
    """Test residue-level invariants on sampled inputs."""

    def test_annihilator_kills_residue_at_infinity(self, sampler):
        """Test R kills the residue at infinity as well as the finite ones."""
        for _ in range(8):
            cert = telescope(sampler.split_function(max_poles=3, max_order=2))
            assert apply(cert.annihilator.operator, cert.residues.at_infinity).is_zero

    def test_image_has_no_residues(self, sampler):
        """Test every residue of L(f) vanishes."""
        for _ in range(8):
            f = sampler.split_function(max_poles=3, max_order=2)
            cert = telescope(f)
            residues = residue_list(apply(cert.operator, f))
            assert all(r.is_zero for _, r in residues.finite)
            assert residues.at_infinity.is_zero

    def test_termwise_application(self, sampler):
        """Test applying L on partial fractions agrees with applying it to f."""
        for _ in range(6):
            f = sampler.split_function(max_poles=3, max_order=2)
            op = sampler.operator(2, 2)
            form = split_partial_fractions(f)
            assert apply_to_form(op, form).reassemble() == apply(op, f)


class TestTelescopeTiming:
    """Test telescopers stay fast enough for the full property suite."""

    def test_sampled_inputs_within_budget(self, sampler):
        """Test 20 inputs with up to four poles of order three finish in under 60 seconds."""
        start = time.perf_counter()
        for _ in range(20):
            assert telescope(sampler.split_function(max_poles=4, max_order=3)).verify()
        assert time.perf_counter() - start < 60

    def test_ore_pairs_within_budget(self, sampler, rx):
        """Test 20 operator pairs compose and apply in under 30 seconds."""
        f = rx("x/(x - t^2)")
        start = time.perf_counter()
        for _ in range(20):
            l1, l2 = sampler.operator(4, 3), sampler.operator(4, 3)
            assert apply(l1 * l2, f) == apply(l1, apply(l2, f))
        assert time.perf_counter() - start < 30
