"""
Partial fractions in x over Q(t), residues, Hermite integration and the
Chevalley commutation check d_t(res f) = res(d_t f).

Poles are located by factoring the squarefree part of the denominator over
Q[x, t]; only factors of x-degree one are supported, each giving a pole
x = x_i with x_i in Q(t).  The coefficients at a pole are read off the Taylor
expansion of numerator and cofactor at x_i (cover-up method).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ, Poly

from errors import NonSplitDenominator, NonzeroResidue
from rational import QT, T, X, RatFuncT, RatFuncXT, common_denominator, d_t, lift_t

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PoleSpec:
    """A pole of f in x: a finite location x_i in Q(t), or infinity when location is None."""

    location: Optional[RatFuncT]
    multiplicity: int

    @property
    def is_infinite(self) -> bool:
        return self.location is None


@dataclass(frozen=True)
class PartialFractionTerm:
    pole: int  # index into PartialFractionForm.poles
    order: int
    coefficient: RatFuncT


@dataclass(frozen=True)
class ResidueList:
    finite: Tuple[Tuple[RatFuncT, RatFuncT], ...]  # (pole, residue)
    at_infinity: RatFuncT

    def nonzero_finite(self) -> List[RatFuncT]:
        """Residues at finite poles that are not zero, in pole order."""
        return [r for _, r in self.finite if r]


Coefficients = Dict[Tuple[int, int], RatFuncT]


@dataclass(frozen=True)
class PartialFractionForm:
    """f = sum_k polynomial[k] x^k + sum c / (x - poles[i])^j.

    Only nonzero terms are listed, ordered by pole then order, and the
    polynomial part has no trailing zeros, so two forms over the same pole
    list are equal exactly when the functions are.
    """

    poles: Tuple[RatFuncT, ...]
    polynomial: Tuple[RatFuncT, ...]
    terms: Tuple[PartialFractionTerm, ...] = field(default=())

    @classmethod
    def build(
        cls, poles: Sequence[RatFuncT], polynomial: Sequence[RatFuncT], coefficients: Coefficients
    ) -> "PartialFractionForm":
        """
        Normalize raw data into a form.

        Args:
            poles: Pole locations
            polynomial: Coefficients of x^0, x^1, ...
            coefficients: Map (pole index, order) -> coefficient; zeros are dropped

        Returns:
            The canonical form
        """
        poly = list(polynomial)
        while poly and poly[-1].is_zero:
            poly.pop()
        terms = tuple(
            PartialFractionTerm(i, j, c) for (i, j), c in sorted(coefficients.items()) if c
        )
        return cls(tuple(poles), tuple(poly), terms)

    def coefficient(self, pole: int, order: int) -> RatFuncT:
        for term in self.terms:
            if term.pole == pole and term.order == order:
                return term.coefficient
        return RatFuncT.zero()

    def max_order(self, pole: int) -> int:
        return max((t.order for t in self.terms if t.pole == pole), default=0)

    def _coefficients(self) -> Coefficients:
        return {(term.pole, term.order): term.coefficient for term in self.terms}

    def __add__(self, other: "PartialFractionForm") -> "PartialFractionForm":
        if self.poles != other.poles:
            raise ValueError("forms over different pole lists")
        coeffs = self._coefficients()
        for key, c in other._coefficients().items():
            coeffs[key] = coeffs.get(key, RatFuncT.zero()) + c
        size = max(len(self.polynomial), len(other.polynomial))
        zero = RatFuncT.zero()
        poly = [
            (self.polynomial[k] if k < len(self.polynomial) else zero)
            + (other.polynomial[k] if k < len(other.polynomial) else zero)
            for k in range(size)
        ]
        return PartialFractionForm.build(self.poles, poly, coeffs)

    def scale(self, c: RatFuncT) -> "PartialFractionForm":
        """Multiply every coefficient by c in Q(t)."""
        coeffs = {key: value * c for key, value in self._coefficients().items()}
        return PartialFractionForm.build(self.poles, [p * c for p in self.polynomial], coeffs)

    def dt(self) -> "PartialFractionForm":
        """
        Apply d_t termwise.

        d_t(c / (x - x_i)^j) = c' / (x - x_i)^j + j c x_i' / (x - x_i)^(j+1).

        Returns:
            The form of d_t f over the same poles
        """
        coeffs: Coefficients = {}
        for term in self.terms:
            c = term.coefficient
            moving = self.poles[term.pole].diff()
            _accumulate(coeffs, (term.pole, term.order), c.diff())
            if moving:
                _accumulate(coeffs, (term.pole, term.order + 1), c * moving * term.order)
        return PartialFractionForm.build(self.poles, [p.diff() for p in self.polynomial], coeffs)

    def dx(self) -> "PartialFractionForm":
        """Apply d_x termwise."""
        coeffs: Coefficients = {}
        for term in self.terms:
            _accumulate(coeffs, (term.pole, term.order + 1), -term.coefficient * term.order)
        poly = [p * k for k, p in enumerate(self.polynomial)][1:]
        return PartialFractionForm.build(self.poles, poly, coeffs)

    def residues(self) -> ResidueList:
        """Coefficient of 1/(x - x_i) at each pole; minus their sum at infinity."""
        finite = tuple((x_i, self.coefficient(i, 1)) for i, x_i in enumerate(self.poles))
        at_infinity = RatFuncT.zero()
        for _, r in finite:
            at_infinity = at_infinity - r
        return ResidueList(finite, at_infinity)

    def integrate(self) -> "PartialFractionForm":
        """
        Termwise antiderivative in x.

        The polynomial part integrates with zero constant term.

        Returns:
            A form g with g.dx() == self

        Raises:
            NonzeroResidue: If some 1/(x - x_i) coefficient is nonzero
        """
        coeffs: Coefficients = {}
        for term in self.terms:
            if term.order == 1:
                raise NonzeroResidue(
                    "function has a nonzero residue; its integral is not rational",
                    value=self.poles[term.pole],
                )
            j = term.order
            coeffs[(term.pole, j - 1)] = -term.coefficient / (j - 1)
        poly = [RatFuncT.zero()] + [p / (k + 1) for k, p in enumerate(self.polynomial)]
        return PartialFractionForm.build(self.poles, poly, coeffs)

    def reassemble(self) -> RatFuncXT:
        """The rational function this form represents."""
        return reassemble(self)


def _accumulate(coeffs: Coefficients, key: Tuple[int, int], value: RatFuncT) -> None:
    if value:
        coeffs[key] = coeffs.get(key, RatFuncT.zero()) + value


def pole_sort_key(x: RatFuncT) -> Tuple[int, str]:
    """Canonical pole order: height first, then printed text."""
    from expressions import serialize

    return x.height(), serialize(x)


def _locations(f: RatFuncXT) -> List[RatFuncT]:
    """Distinct finite poles of f, sorted by pole_sort_key."""
    if f.is_zero or f.den.degree(X) <= 0:
        return []
    _, factors = f.den.sqf_part().factor_list()
    locations = []
    for fac, _ in factors:
        dx = fac.degree(X)
        if dx <= 0:
            continue
        if dx > 1:
            raise NonSplitDenominator(
                "denominator has an irreducible factor of degree > 1 in x",
                value=RatFuncXT(fac),
            )
        # fac = a(t) x + b(t)
        a_rep = {(j,): c for (i, j), c in fac.terms() if i == 1}
        b_rep = {(j,): c for (i, j), c in fac.terms() if i == 0}
        a = Poly.from_dict(a_rep, T, domain=QQ)
        b = Poly.from_dict(b_rep, T, domain=QQ) if b_rep else Poly(0, T, domain=QQ)
        locations.append(RatFuncT(-b, a))
    locations.sort(key=pole_sort_key)
    return locations


def _taylor(p: Poly, x_i: RatFuncT) -> list:
    """Coefficients of p(x_i + y) in ascending powers of y, as elements of QT."""
    if p.is_zero:
        return []
    return p.shift(x_i.to_field()).rep.to_list()[::-1]


def _vanishing_order(coeffs: list) -> int:
    return next((k for k, c in enumerate(coeffs) if c), len(coeffs))


def _series_head(top: list, bottom: list, count: int) -> list:
    """First ``count`` coefficients of the power series top / bottom; bottom[0] != 0."""
    series = []
    for k in range(count):
        acc = top[k] if k < len(top) else QT.zero
        for j in range(1, min(k, len(bottom) - 1) + 1):
            acc = acc - bottom[j] * series[k - j]
        series.append(acc / bottom[0])
    return series


def find_poles(f: RatFuncXT) -> List[PoleSpec]:
    """
    Finite poles of f in canonical order, with multiplicities.

    Args:
        f: Element of Q(t)(x)

    Returns:
        One PoleSpec per distinct finite pole

    Raises:
        NonSplitDenominator: If the denominator does not split into linear factors in x
    """
    locations = _locations(f)
    if not locations:
        return []
    _, den = f.monic_parts()
    return [PoleSpec(x_i, _vanishing_order(_taylor(den, x_i))) for x_i in locations]


def pole_order_at_infinity(f: RatFuncXT) -> int:
    """deg_x(num) - deg_x(den) when positive, else 0."""
    return f.pole_order_at_infinity()


def split_partial_fractions(
    f: RatFuncXT, poles: Optional[Sequence[RatFuncT]] = None
) -> PartialFractionForm:
    """
    Decompose f over Q(t).

    Args:
        f: Element of Q(t)(x)
        poles: Pole list to express the form over; every pole of f must be in
            it.  When omitted the poles of f are found and ordered.

    Returns:
        The canonical partial fraction form

    Raises:
        NonSplitDenominator: If poles are searched for and the denominator does not split
        ValueError: If f has a pole outside the given list
    """
    f = RatFuncXT.coerce(f)
    locations = tuple(_locations(f)) if poles is None else tuple(poles)
    num, den = f.monic_parts()
    shifted = [_taylor(den, x_i) for x_i in locations]
    mults = [_vanishing_order(coeffs) for coeffs in shifted]
    if sum(mults) != den.degree():
        raise ValueError("denominator has a pole outside the given pole set")

    quo, rem = num.div(den)
    polynomial = [RatFuncT.from_field(c) for c in quo.rep.to_list()[::-1]]

    coeffs: Coefficients = {}
    if not rem.is_zero:
        for index, (x_i, m) in enumerate(zip(locations, mults)):
            if m == 0:
                continue
            head = _series_head(_taylor(rem, x_i), shifted[index][m:], m)
            for k, c in enumerate(head):
                if c:
                    coeffs[(index, m - k)] = RatFuncT.from_field(c)
    return PartialFractionForm.build(locations, polynomial, coeffs)


def _linear_factor(x_i: RatFuncT) -> Tuple[Poly, Poly]:
    """(q x - p, q) for x_i = p/q, so that x - x_i = (q x - p) / q."""
    q = lift_t(x_i.den)
    return Poly(X, X, T, domain=QQ) * q - lift_t(x_i.num), q


def reassemble(form: PartialFractionForm) -> RatFuncXT:
    """
    Rebuild the rational function from its partial fractions.

    All terms are brought over one common denominator, so the result is
    reduced only once.

    Args:
        form: A partial fraction form

    Returns:
        The function it represents
    """
    bases = [_linear_factor(x_i) for x_i in form.poles]
    orders = [form.max_order(i) for i in range(len(form.poles))]
    values = [term.coefficient for term in form.terms] + list(form.polynomial)
    common = common_denominator(values)

    one = Poly(1, X, T, domain=QQ)
    powers = [base ** m for (base, _), m in zip(bases, orders)]
    full = one
    for p in powers:
        full = full * p
    cofactors = []
    for i in range(len(powers)):
        cof = one
        for k, p in enumerate(powers):
            if k != i:
                cof = cof * p
        cofactors.append(cof)

    def weight(c: RatFuncT) -> Poly:
        return lift_t(c.num * common.exquo(c.den))

    numerator = Poly(0, X, T, domain=QQ)
    for term in form.terms:
        base, q = bases[term.pole]
        m = orders[term.pole]
        numerator = numerator + (
            weight(term.coefficient) * q ** term.order * base ** (m - term.order) * cofactors[term.pole]
        )
    x_poly = Poly(X, X, T, domain=QQ)
    for k, c in enumerate(form.polynomial):
        if c:
            numerator = numerator + weight(c) * x_poly ** k * full
    return RatFuncXT(numerator, full * lift_t(common))


def residue_list(f: RatFuncXT) -> ResidueList:
    """
    Residues of f at its finite poles and at infinity.

    Args:
        f: Element of Q(t)(x) with split denominator

    Returns:
        ResidueList whose entries sum to zero
    """
    return split_partial_fractions(f).residues()


def residue(f: RatFuncXT, pole: PoleSpec) -> RatFuncT:
    """Coefficient of 1/(x - x_i) at a finite pole; minus their sum at infinity.

    A location that is not a pole of f has residue zero.
    """
    residues = residue_list(f)
    if pole.is_infinite:
        return residues.at_infinity
    for x_i, r in residues.finite:
        if x_i == pole.location:
            return r
    return RatFuncT.zero()


def hermite_integrate(f: RatFuncXT, poles: Optional[Sequence[RatFuncT]] = None) -> RatFuncXT:
    """
    A rational g with d_x g = f, when every residue of f vanishes.

    Args:
        f: Element of Q(t)(x)
        poles: Optional known pole list of f; skips factoring the denominator

    Returns:
        The antiderivative, with zero constant term in the polynomial part

    Raises:
        NonzeroResidue: If f has a nonzero residue at a finite pole
    """
    form = split_partial_fractions(f, poles)
    logger.debug("hermite_integrate: %d poles", len(form.poles))
    return form.integrate().reassemble()


@dataclass(frozen=True)
class ChevalleyCheck:
    pole: PoleSpec
    residue_of_derivative: RatFuncT
    derivative_of_residue: RatFuncT

    @property
    def holds(self) -> bool:
        return self.residue_of_derivative == self.derivative_of_residue


def chevalley_check(f: RatFuncXT) -> List[ChevalleyCheck]:
    """
    Compare res(d_t f, P) with d_t(res(f, P)) at every pole of f and at infinity.

    d_t f is computed as a rational function and decomposed again, over the
    pole list of f.

    Args:
        f: Element of Q(t)(x) with split denominator

    Returns:
        One check per finite pole, then one for infinity
    """
    form = split_partial_fractions(f)
    res_f = form.residues()
    res_df = split_partial_fractions(d_t(f), form.poles).residues()
    checks = []
    for i, ((x_i, r), (_, r_df)) in enumerate(zip(res_f.finite, res_df.finite)):
        checks.append(ChevalleyCheck(PoleSpec(x_i, form.max_order(i)), r_df, r.diff()))
    checks.append(
        ChevalleyCheck(
            PoleSpec(None, f.pole_order_at_infinity()),
            res_df.at_infinity,
            res_f.at_infinity.diff(),
        )
    )
    return checks


def poles(f: RatFuncXT) -> List[PoleSpec]:
    """Finite poles in canonical order, then infinity when f has a pole there."""
    specs = find_poles(f)
    order = f.pole_order_at_infinity()
    if order > 0:
        specs.append(PoleSpec(None, order))
    return specs
