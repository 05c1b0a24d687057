"""
Group-side computations: the Ga/Gm quotient criterion on structured group
descriptions, generator witnesses for groups that pass it, and
density-obstruction certificates for lower-triangular groups
{[[1, 0], [a, b]] : d_t b = 0, b != 0}.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import Poly, Symbol

from errors import CriterionFails, IndexOutOfRange, InputError, SymbolicOnly, UnsupportedDescription
from linalg import QtMatrix
from models import (
    AbstractSemisimple,
    AlgebraicIdentity,
    DiffCatalogIdentity,
    GroupDesc,
    QuotientKind,
    QuotientVerdict,
)
from ore import AnnihilatorCertificate, OreOperator, apply, right_divide, wronskian_annihilator
from rational import QT, RatFuncT, log_derivative

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[RatFuncT, ...], ...]

_Z = Symbol("z")

EXTERNAL_SL2_NOTE = (
    "SL2 generators [[1,1],[0,1]] and [[1,0],[1,1]] generate SL2(Z), which is "
    "Zariski dense in SL2; this choice is standard and externally sourced"
)


# Quotient criterion

def commutativize(identity: AlgebraicIdentity) -> Tuple[AlgebraicIdentity, List[str]]:
    """Replace the radical by its abelianization; the quotient verdict is unchanged."""
    if identity.radical_commutative:
        return identity, []
    reduced = identity.model_copy(update={"radical_commutative": True})
    return reduced, ["radical replaced by its commutator quotient (Kovacic reduction)"]


def has_ga_or_gm_quotient(g: GroupDesc) -> QuotientVerdict:
    """
    Decide whether the identity component maps onto Ga or Gm.

    A torus gives a Gm-quotient; a module acted on trivially (or any module when
    there is no semisimple part) gives a Ga-quotient.  The radical is first
    replaced by its commutator quotient.

    Args:
        g: Group description with an algebraic identity component

    Returns:
        QuotientVerdict naming the quotient and its witness

    Raises:
        UnsupportedDescription: For differential catalog groups
    """
    identity = g.identity
    if isinstance(identity, DiffCatalogIdentity):
        raise UnsupportedDescription(
            "quotient test applies to algebraic groups only", value=identity.variant
        )
    identity, reductions = commutativize(identity)
    if identity.torus_rank > 0:
        return QuotientVerdict(verdict=QuotientKind.GM, witness="torus", reductions=reductions)
    for index, module in enumerate(identity.modules):
        # with no semisimple part every summand is acted on trivially
        if module.action == "trivial" or not identity.semisimple:
            return QuotientVerdict(
                verdict=QuotientKind.GA, witness=f"module {index}", reductions=reductions
            )
    return QuotientVerdict(verdict=QuotientKind.NONE, reductions=reductions)


# Witnesses

def _m(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(RatFuncT.coerce(e) for e in row) for row in rows)


def _identity(n: int) -> List[List[RatFuncT]]:
    return [[RatFuncT.one() if i == j else RatFuncT.zero() for j in range(n)] for i in range(n)]


def _elementary(n: int, i: int, j: int) -> Matrix:
    rows = _identity(n)
    rows[i][j] = RatFuncT.one()
    return _m(rows)


def _torus(n: int) -> Matrix:
    rows = _identity(n)
    rows[0][0] = RatFuncT.t()
    rows[1][1] = RatFuncT.t().inverse()
    return _m(rows)


def catalog_generators(name: str) -> Tuple[List[Tuple[str, Matrix]], Tuple[str, Matrix]]:
    """Unipotent generators and torus element for a catalog factor."""
    if name == "SL2":
        unipotent = [("E12", _elementary(2, 0, 1)), ("E21", _elementary(2, 1, 0))]
        return unipotent, ("torus", _torus(2))
    if name == "SL3":
        unipotent = [
            ("E12", _elementary(3, 0, 1)),
            ("E21", _elementary(3, 1, 0)),
            ("E23", _elementary(3, 1, 2)),
            ("E32", _elementary(3, 2, 1)),
        ]
        return unipotent, ("torus", _torus(3))
    raise SymbolicOnly(f"{name} has no catalog matrices", value=name)


def symmetric_power(g: Matrix, d: int) -> Matrix:
    """
    Action of g on binary forms of degree d in the basis X^(d-l) Y^l.

    g sends X to a X + c Y and Y to b X + e Y for g = [[a, b], [c, e]].  With
    X = 1 and Y = z, column k is (a + c z)^(d-k) (b + e z)^k.

    Args:
        g: 2x2 matrix over Q(t)
        d: Degree of the forms

    Returns:
        (d+1)x(d+1) matrix over Q(t)
    """
    (a, b), (c, e) = g
    image_x = Poly([c.to_field(), a.to_field()], _Z, domain=QT)
    image_y = Poly([e.to_field(), b.to_field()], _Z, domain=QT)
    columns = []
    for k in range(d + 1):
        form = image_x ** (d - k) * image_y ** k
        coeffs = [RatFuncT.from_field(q) for q in form.rep.to_list()[::-1]]
        columns.append(coeffs + [RatFuncT.zero()] * (d + 1 - len(coeffs)))
    return tuple(tuple(columns[k][l] for k in range(d + 1)) for l in range(d + 1))


@dataclass(frozen=True)
class SideCondition:
    claim: str
    holds: bool
    detail: str = ""


@dataclass(frozen=True)
class WitnessElement:
    kind: str  # "unipotent", "torus", "highest-weight", "coset"
    label: str
    factor: int
    matrix: Optional[Matrix] = None
    vector: Optional[Tuple[RatFuncT, ...]] = None
    module: Optional[int] = None


@dataclass(frozen=True)
class GeneratorWitness:
    group: GroupDesc
    elements: Tuple[WitnessElement, ...]
    side_conditions: Tuple[SideCondition, ...]
    notes: Tuple[str, ...] = field(default=())

    @property
    def cosets(self) -> int:
        return sum(1 for el in self.elements if el.kind == "coset")

    def verify(self) -> bool:
        return all(c.holds for c in check_side_conditions(self.group, self.elements))


def _line_stable(g: Matrix, d: int, u: Sequence[RatFuncT]) -> bool:
    image = QtMatrix(symmetric_power(g, d)).mul_vector(list(u))
    support = [i for i, v in enumerate(u) if v]
    if len(support) != 1:
        return False
    pivot = support[0]
    return bool(image[pivot]) and all(not v for i, v in enumerate(image) if i != pivot)


def check_side_conditions(group: GroupDesc, elements: Sequence[WitnessElement]) -> List[SideCondition]:
    """
    Recompute every checkable claim a witness makes.

    Args:
        group: Group the witness was built for
        elements: Witness elements

    Returns:
        One SideCondition per claim, in element order, coset claims last
    """
    conditions: List[SideCondition] = []
    identity = group.identity
    semisimple = identity.semisimple if isinstance(identity, AlgebraicIdentity) else []
    for el in elements:
        if el.kind in ("unipotent", "torus") and el.matrix is not None:
            det = QtMatrix(el.matrix).determinant()
            conditions.append(
                SideCondition(f"det {el.label}[{el.factor}] = 1", det == RatFuncT.one())
            )
        if el.kind == "torus" and el.matrix is not None:
            x1 = el.matrix[0][0]
            conditions.append(SideCondition(f"d_t x1 of torus[{el.factor}] != 0", bool(x1.diff())))
        if el.kind == "highest-weight" and el.vector is not None:
            d = len(el.vector) - 1
            name = semisimple[el.factor] if el.factor < len(semisimple) else None
            if name != "SL2":
                conditions.append(SideCondition(f"module {el.module} acted on by SL2", False))
                continue
            unipotent, (_, torus) = catalog_generators("SL2")
            upper = dict(unipotent)["E12"]
            for label, g in (("E12", upper), ("torus", torus)):
                conditions.append(
                    SideCondition(
                        f"{label} stabilizes the line of u[{el.module}]",
                        _line_stable(g, d, el.vector),
                    )
                )
            weight = torus[0][0] ** d
            conditions.append(
                SideCondition(
                    f"torus acts on u[{el.module}] by a nonconstant character",
                    bool(weight.diff()),
                    detail=f"t^{d}",
                )
            )
    labels = [el.label for el in elements if el.kind == "coset"]
    conditions.append(
        SideCondition(
            "one coset representative per component",
            len(labels) == group.components,
            detail=f"{len(labels)} of {group.components}",
        )
    )
    conditions.append(
        SideCondition(
            "coset representatives are distinct and h_1 is the identity",
            len(set(labels)) == len(labels) and labels[:1] == ["h_1"],
        )
    )
    return conditions


def kolchin_dense_generators(g: GroupDesc) -> GeneratorWitness:
    """Generators whose checkable hypotheses for density all hold.

    Density itself rests on the structure theory and is not recomputed.
    """
    verdict = has_ga_or_gm_quotient(g)
    if verdict.verdict is not QuotientKind.NONE:
        raise CriterionFails(f"group has a {verdict.verdict.value}", value=verdict.verdict.value)
    identity = g.identity
    assert isinstance(identity, AlgebraicIdentity)

    elements: List[WitnessElement] = []
    notes: List[str] = []
    for index, factor in enumerate(identity.semisimple):
        if isinstance(factor, AbstractSemisimple):
            raise SymbolicOnly(f"factor {index} is abstract", value=factor.abstract)
        unipotent, (torus_label, torus) = catalog_generators(factor)
        for label, m in unipotent:
            elements.append(WitnessElement("unipotent", label, index, matrix=m))
        elements.append(WitnessElement("torus", torus_label, index, matrix=torus))
        if factor == "SL2" and EXTERNAL_SL2_NOTE not in notes:
            notes.append(EXTERNAL_SL2_NOTE)

    for index, module in enumerate(identity.modules):
        factor = identity.semisimple[module.factor]
        if factor != "SL2":
            raise SymbolicOnly(f"module {index} is not an SL2 module", value=str(factor))
        d = module.weight_degree()
        if d is None:
            d = module.dim - 1
        u = tuple(RatFuncT.one() if i == 0 else RatFuncT.zero() for i in range(d + 1))
        elements.append(
            WitnessElement("highest-weight", f"V_{d}", module.factor, vector=u, module=index)
        )

    # representatives of G/G0 are not given concretely; h_1 stands for the identity
    for index in range(1, g.components + 1):
        elements.append(WitnessElement("coset", f"h_{index}", 0))

    conditions = check_side_conditions(g, elements)
    failed = [c.claim for c in conditions if not c.holds]
    if failed:
        raise AssertionError(f"witness side conditions failed: {failed}")
    logger.info("kolchin_dense_generators: %d elements, %d side conditions", len(elements), len(conditions))
    return GeneratorWitness(g, tuple(elements), tuple(conditions), tuple(notes))


# Lower-triangular groups

Generator = Tuple[RatFuncT, Fraction]


def word_eval(generators: Sequence[Generator], word: Sequence[int]) -> Generator:
    """Product of [[1, 0], [a, b]] matrices; +i is generator i, -i its inverse (1-based).

    (a1, b1)(a2, b2) = (a1 + b1 a2, b1 b2) and (a, b)^-1 = (-a/b, 1/b).
    """
    a, b = RatFuncT.zero(), Fraction(1)
    for letter in word:
        index = abs(letter) - 1
        if letter == 0 or index >= len(generators):
            raise IndexOutOfRange(f"word letter {letter} out of range", value=letter)
        ga, gb = generators[index]
        gb = Fraction(gb)
        if letter < 0:
            ga, gb = -ga / gb, 1 / gb
        a, b = a + ga * b, b * gb
    return a, b


def conjugate_lower(a: RatFuncT, b: Fraction) -> Generator:
    """[[1,0],[a,1]] [[1,0],[0,b]] [[1,0],[-a,1]] = [[1,0],[a - b a, b]]."""
    return word_eval([(a, Fraction(1)), (RatFuncT.zero(), Fraction(b))], [1, 2, -1])


def log_derivative_image(b: Fraction) -> RatFuncT:
    """d_t(b)/b for a diagonal entry; zero for every member of the group."""
    return log_derivative(RatFuncT.const(b))


@dataclass(frozen=True)
class DensityObstructionCert:
    generators: Tuple[Generator, ...]
    annihilator: AnnihilatorCertificate
    operator: OreOperator

    @property
    def supergroup(self) -> dict:
        from expressions import serialize

        return {
            "lower_left": f"L(a) = 0 with L = {serialize(self.operator)}",
            "diagonal": "d_t b = 0, b != 0",
        }

    def verify(self) -> bool:
        return verify_density(self)


def density_obstruction(elements: Sequence[Generator]) -> DensityObstructionCert:
    """Nonzero L killing every lower-left entry of the generated group."""
    generators = []
    for a, b in elements:
        b = Fraction(b)
        if b == 0:
            raise InputError("diagonal entries must be nonzero", value=b)
        generators.append((RatFuncT.coerce(a), b))
    annihilator = wronskian_annihilator([a for a, _ in generators])
    operator = annihilator.operator
    if operator.order == 0:
        # zero span: the closure sits inside {a = 0}
        operator = OreOperator.dt()
    cert = DensityObstructionCert(tuple(generators), annihilator, operator)
    logger.info("density_obstruction: order %d", operator.order)
    return cert


def verify_density(cert: DensityObstructionCert) -> bool:
    """
    Recheck a density obstruction from its generators.

    Args:
        cert: Certificate to check

    Returns:
        True when the operator is a nonzero annihilator of every lower-left entry
    """
    op = cert.operator
    if op.is_zero:
        return False
    for a, b in cert.generators:
        if b == 0 or apply(op, a) or RatFuncT.const(b).diff():
            return False
    return True


@dataclass(frozen=True)
class GPrimeReport:
    operator: OreOperator
    quotient: OreOperator
    remainder: OreOperator

    @property
    def divides(self) -> bool:
        return self.remainder.is_zero

    @property
    def associated(self) -> bool:
        """R generates the same left ideal as Dt."""
        return self.divides and self.operator.order == 1


def gprime_closure_check(R: OreOperator) -> GPrimeReport:
    """Right-divide Dt by R."""
    quotient, remainder = right_divide(OreOperator.dt(), R)
    return GPrimeReport(R, quotient, remainder)
