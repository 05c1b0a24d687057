"""
Tests for the quotient criterion, generator witnesses and density obstructions.
"""

from dataclasses import replace
from fractions import Fraction

import pytest

from errors import CriterionFails, IndexOutOfRange, InputError, SymbolicOnly, UnsupportedDescription
from groups import (
    EXTERNAL_SL2_NOTE,
    catalog_generators,
    commutativize,
    conjugate_lower,
    density_obstruction,
    gprime_closure_check,
    has_ga_or_gm_quotient,
    kolchin_dense_generators,
    log_derivative_image,
    symmetric_power,
    verify_density,
    word_eval,
)
from models import GroupDesc, QuotientKind
from ore import OreOperator, apply
from rational import RatFuncT

t = RatFuncT.t()
one = RatFuncT.one()


def group(**identity) -> GroupDesc:
    return GroupDesc.model_validate(identity)


def sl2_with(*modules) -> GroupDesc:
    return group(semisimple=["SL2"], modules=list(modules))


class TestQuotientCriterion:
    """Test the Ga/Gm decision table."""

    @pytest.mark.parametrize(
        "desc, expected",
        [
            ({"semisimple": ["SL2"]}, QuotientKind.NONE),
            ({"semisimple": ["SL3"]}, QuotientKind.NONE),
            ({"torus_rank": 1}, QuotientKind.GM),
            ({"semisimple": ["SL2"], "modules": [{"dim": 3, "weight": "V_2"}]}, QuotientKind.NONE),
            ({"semisimple": ["SL2"], "modules": [{"dim": 1, "action": "trivial"}]}, QuotientKind.GA),
            (
                {"semisimple": ["SL2"], "modules": [{"dim": 2, "weight": "V_1"}, {"dim": 2, "weight": "V_1"}]},
                QuotientKind.NONE,
            ),
        ],
    )
    def test_catalog_rows(self, desc, expected):
        """Test the verdict for each catalog row."""
        assert has_ga_or_gm_quotient(group(**desc)).verdict is expected

    def test_trivial_summand_witness(self):
        """Test SL2 with V_2 plus a trivial line names the trivial summand."""
        verdict = has_ga_or_gm_quotient(
            sl2_with({"dim": 3, "weight": "V_2"}, {"dim": 1, "action": "trivial"})
        )
        assert verdict.verdict is QuotientKind.GA
        assert verdict.witness == "module 1"

    def test_module_without_semisimple_part(self):
        """Test a unipotent group alone has a Ga quotient."""
        assert has_ga_or_gm_quotient(group(modules=[{"dim": 2}])).verdict is QuotientKind.GA

    def test_kovacic_reduction_keeps_verdict(self):
        """Test the non-commutative radical flag does not change verdicts."""
        for desc in (
            {"semisimple": ["SL2"], "modules": [{"dim": 3, "weight": "V_2"}]},
            {"semisimple": ["SL2"], "modules": [{"dim": 1, "action": "trivial"}]},
            {"torus_rank": 2},
        ):
            plain = has_ga_or_gm_quotient(group(**desc))
            reduced = has_ga_or_gm_quotient(group(radical_commutative=False, **desc))
            assert plain.verdict is reduced.verdict
            assert reduced.reductions and not plain.reductions

    def test_commutativize(self):
        """Test the reduction only flips the radical flag."""
        identity = group(semisimple=["SL2"], radical_commutative=False).identity
        reduced, notes = commutativize(identity)
        assert reduced.radical_commutative
        assert reduced.semisimple == identity.semisimple
        assert len(notes) == 1

    def test_differential_group_rejected(self):
        """Test the differential catalog is outside the algebraic criterion."""
        with pytest.raises(UnsupportedDescription):
            has_ga_or_gm_quotient(group(variant="lower-triangular"))


class TestGeneratorWitness:
    """Test witness synthesis and side conditions."""

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_sl2_modules(self, d):
        """Test SL2 acting on V_d passes every side condition."""
        witness = kolchin_dense_generators(sl2_with({"dim": d + 1, "weight": f"V_{d}"}))
        assert witness.verify()
        assert all(c.holds for c in witness.side_conditions)
        vector = [e for e in witness.elements if e.kind == "highest-weight"][0].vector
        assert vector == tuple([one] + [RatFuncT.zero()] * d)
        assert EXTERNAL_SL2_NOTE in witness.notes

    def test_plain_sl3(self):
        """Test SL3 uses its four elementary generators and a torus element."""
        witness = kolchin_dense_generators(group(semisimple=["SL3"]))
        kinds = [e.kind for e in witness.elements]
        assert kinds.count("unipotent") == 4
        assert kinds.count("torus") == 1
        assert witness.verify()

    def test_component_count(self):
        """Test one coset representative h_i per component, h_1 first."""
        witness = kolchin_dense_generators(group(semisimple=["SL2"], components=3))
        assert witness.cosets == 3
        assert [e.label for e in witness.elements if e.kind == "coset"] == ["h_1", "h_2", "h_3"]
        assert witness.verify()

    def test_missing_coset_rejected(self):
        """Test a witness that drops a coset representative fails its side conditions."""
        witness = kolchin_dense_generators(group(semisimple=["SL2"], components=2))
        trimmed = tuple(e for e in witness.elements if e.label != "h_2")
        assert not replace(witness, elements=trimmed).verify()

    def test_duplicate_coset_rejected(self):
        """Test repeated coset labels fail even when the count matches."""
        witness = kolchin_dense_generators(group(semisimple=["SL2"], components=2))
        doubled = tuple(e for e in witness.elements if e.label != "h_2") + (
            [e for e in witness.elements if e.label == "h_1"][0],
        )
        assert not replace(witness, elements=doubled).verify()

    def test_criterion_fails(self):
        """Test a torus blocks witness synthesis."""
        with pytest.raises(CriterionFails, match="Gm-quotient"):
            kolchin_dense_generators(group(semisimple=["SL2"], torus_rank=1))

    def test_abstract_factor(self):
        """Test abstract factors have no matrices."""
        with pytest.raises(SymbolicOnly):
            kolchin_dense_generators(group(semisimple=[{"abstract": "G2"}]))

    def test_sl3_module(self):
        """Test modules over SL3 are symbolic only."""
        with pytest.raises(SymbolicOnly):
            kolchin_dense_generators(group(semisimple=["SL3"], modules=[{"dim": 3}]))

    def test_unknown_catalog_name(self):
        """Test only SL2 and SL3 have matrices."""
        with pytest.raises(SymbolicOnly):
            catalog_generators("SO5")

    def test_symmetric_power(self):
        """Test Sym^1 is the matrix itself and the torus acts diagonally on Sym^2."""
        unipotent, (_, torus) = catalog_generators("SL2")
        upper = dict(unipotent)["E12"]
        assert symmetric_power(upper, 1) == upper
        square = symmetric_power(torus, 2)
        assert [square[i][i] for i in range(3)] == [t * t, one, 1 / (t * t)]
        assert square[0][1].is_zero

    def test_symmetric_power_binomials(self):
        """Test E12 acts on V_2 by the binomial matrix."""
        unipotent, _ = catalog_generators("SL2")
        square = symmetric_power(dict(unipotent)["E12"], 2)
        expected = [[1, 1, 1], [0, 1, 2], [0, 0, 1]]
        assert [[square[i][j] for j in range(3)] for i in range(3)] == [
            [RatFuncT.const(v) for v in row] for row in expected
        ]


class TestLowerTriangular:
    """Test word evaluation and density obstructions."""

    def test_word_eval(self):
        """Test the empty word, a single letter and a conjugate."""
        gens = [(t, Fraction(1)), (RatFuncT.zero(), Fraction(2))]
        assert word_eval(gens, []) == (RatFuncT.zero(), Fraction(1))
        assert word_eval(gens, [1]) == (t, Fraction(1))
        assert word_eval(gens, [1, 2, -1]) == (-t, Fraction(2))
        assert conjugate_lower(t, Fraction(2)) == (-t, Fraction(2))

    def test_word_out_of_range(self):
        """Test letters outside the generator list."""
        gens = [(t, Fraction(1))]
        with pytest.raises(IndexOutOfRange):
            word_eval(gens, [2])
        with pytest.raises(IndexOutOfRange):
            word_eval(gens, [0])

    @pytest.mark.parametrize(
        "entries, expected",
        [
            (["1", "t", "t^2"], OreOperator.dt(3)),
            (["t"], OreOperator([-1 / t, 1])),
            ([], OreOperator.dt()),
            (["0"], OreOperator.dt()),
        ],
    )
    def test_density_operator(self, rt, entries, expected):
        """Test the emitted operator on known generator sets."""
        cert = density_obstruction([(rt(a), Fraction(2)) for a in entries])
        assert cert.operator == expected
        assert verify_density(cert)

    def test_zero_diagonal(self):
        """Test b = 0 is not a group element."""
        with pytest.raises(InputError):
            density_obstruction([(t, 0)])

    def test_supergroup_description(self):
        """Test the supergroup names its operator."""
        cert = density_obstruction([(t, 1)])
        assert cert.supergroup["lower_left"] == "L(a) = 0 with L = Dt^1 - (1/t)*Dt^0"

    def test_closure(self, sampler):
        """Test random words stay inside the certified supergroup."""
        for _ in range(5):
            gens = sampler.lower_generators()
            cert = density_obstruction(gens)
            for _ in range(20):
                a, b = word_eval(gens, sampler.word(len(gens)))
                assert apply(cert.operator, a).is_zero
                assert log_derivative_image(b).is_zero


class TestGPrime:
    """Test right division of Dt."""

    def test_dt_itself(self):
        """Test Dt divides Dt and generates the same ideal."""
        report = gprime_closure_check(OreOperator.dt())
        assert report.divides and report.associated

    def test_non_divisor(self):
        """Test Dt - 1/t leaves a remainder."""
        report = gprime_closure_check(OreOperator([-1 / t, 1]))
        assert not report.divides
        assert report.remainder == OreOperator.scalar(1 / t)

    def test_scalar_divides(self):
        """Test a unit divides without being associated to Dt."""
        report = gprime_closure_check(OreOperator.scalar(t))
        assert report.divides
        assert not report.associated
        assert report.quotient * OreOperator.scalar(t) == OreOperator.dt()
