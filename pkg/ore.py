"""
Linear differential operators in Q(t)<Dt> and Wronskian annihilators.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import List, Sequence, Tuple, Union

from sympy import Matrix

from errors import DivisorZero
from linalg import QtMatrix
from rational import T, RatFuncT, RatFuncXT, common_denominator, lift_t

logger = logging.getLogger(__name__)


class OreOperator:
    """L = sum_i coeffs[i] * Dt^i with Dt * a = a * Dt + d_t(a).

    Trailing zero coefficients are stripped, so the zero operator has no
    coefficients and order -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Union[RatFuncT, int, Fraction]]):
        cs = [RatFuncT.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        self.coeffs: Tuple[RatFuncT, ...] = tuple(cs)

    @classmethod
    def zero(cls) -> "OreOperator":
        return cls([])

    @classmethod
    def one(cls) -> "OreOperator":
        return cls([1])

    @classmethod
    def dt(cls, k: int = 1) -> "OreOperator":
        return cls([0] * k + [1])

    derivative_power = dt

    @classmethod
    def scalar(cls, a: Union[RatFuncT, int, Fraction]) -> "OreOperator":
        return cls([a])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coefficient(self, k: int) -> RatFuncT:
        """Coefficient of Dt^k, zero beyond the order."""
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else RatFuncT.zero()

    @property
    def leading_coefficient(self) -> RatFuncT:
        """
        Coefficient of the highest power of Dt.

        Raises:
            DivisorZero: If the operator is zero
        """
        if self.is_zero:
            raise DivisorZero("the zero operator has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return not self.is_zero and self.coeffs[-1] == RatFuncT.one()

    def monic(self) -> "OreOperator":
        """
        Divide through by the leading coefficient.

        Raises:
            DivisorZero: If the operator is zero
        """
        lc = self.leading_coefficient
        return OreOperator([c / lc for c in self.coeffs])

    def __add__(self, other: "OreOperator") -> "OreOperator":
        n = max(len(self.coeffs), len(other.coeffs))
        return OreOperator([self.coefficient(k) + other.coefficient(k) for k in range(n)])

    def __neg__(self) -> "OreOperator":
        return OreOperator([-c for c in self.coeffs])

    def __sub__(self, other: "OreOperator") -> "OreOperator":
        return self + (-other)

    def __mul__(self, other) -> "OreOperator":
        if isinstance(other, OreOperator):
            return ore_multiply(self, other)
        c = RatFuncT.coerce(other)
        return ore_multiply(self, OreOperator.scalar(c))

    def __rmul__(self, other) -> "OreOperator":
        c = RatFuncT.coerce(other)
        return OreOperator([c * a for a in self.coeffs])

    def __call__(self, f):
        return apply(self, f)

    def is_right_divisor_of(self, other: "OreOperator") -> bool:
        """True when other = Q * self for some operator Q."""
        return right_divide(other, self)[1].is_zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, OreOperator):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("OreOperator", self.coeffs))

    def __repr__(self) -> str:
        from expressions import serialize

        return f"OreOperator({serialize(self)!r})"


def apply(op: OreOperator, f: Union[RatFuncXT, RatFuncT]):
    """
    Apply L = sum_i a_i Dt^i to f.

    On Q(t)(x) every d_t^i(f) is kept over a power of den(f) and the sum is
    reduced once at the end.

    Args:
        op: Operator in Q(t)<Dt>
        f: Element of Q(t) or Q(t)(x)

    Returns:
        L(f), in the same field as f
    """
    if isinstance(f, RatFuncT):
        acc, current = RatFuncT.zero(), f
        for i, a in enumerate(op.coeffs):
            if i:
                current = current.diff()
            if a and current:
                acc = acc + a * current
        return acc

    f = RatFuncXT.coerce(f)
    if op.is_zero or f.is_zero:
        return RatFuncXT.zero()
    r = op.order
    den, dden = f.den, f.den.diff(T)
    common = common_denominator(op.coeffs)
    total = f.num * 0
    # d_t^i(f) = current / den^(i+1)
    current = f.num
    for i, a in enumerate(op.coeffs):
        if i:
            current = current.diff(T) * den - current * dden * i
        if a:
            weight = lift_t(a.num * common.exquo(a.den))
            total = total + weight * current * den ** (r - i)
    return RatFuncXT(total, lift_t(common) * den ** (r + 1))


def ore_multiply(left: OreOperator, right: OreOperator) -> OreOperator:
    """
    Compose two operators.

    Uses Dt^i * b = sum_k C(i, k) d_t^k(b) Dt^(i-k).

    Args:
        left: Outer operator
        right: Inner operator

    Returns:
        left o right
    """
    if left.is_zero or right.is_zero:
        return OreOperator.zero()
    size = left.order + right.order + 1
    out = [RatFuncT.zero() for _ in range(size)]
    for j, b in enumerate(right.coeffs):
        if b.is_zero:
            continue
        derivs = [b]
        for _ in range(left.order):
            derivs.append(derivs[-1].diff())
        for i, a in enumerate(left.coeffs):
            if a.is_zero:
                continue
            for k in range(i + 1):
                dk = derivs[k]
                if dk:
                    out[i - k + j] = out[i - k + j] + a * dk * comb(i, k)
    return OreOperator(out)


def right_divide(dividend: OreOperator, divisor: OreOperator) -> Tuple[OreOperator, OreOperator]:
    """
    Right Euclidean division in Q(t)<Dt>.

    Args:
        dividend: Operator to divide
        divisor: Nonzero operator

    Returns:
        (Q, R) with dividend = Q * divisor + R and ord R < ord divisor

    Raises:
        DivisorZero: If divisor is the zero operator
    """
    if divisor.is_zero:
        raise DivisorZero("right division by the zero operator")
    quotient = OreOperator.zero()
    remainder = dividend
    lc = divisor.leading_coefficient
    while not remainder.is_zero and remainder.order >= divisor.order:
        shift = remainder.order - divisor.order
        term = OreOperator([0] * shift + [remainder.leading_coefficient / lc])
        quotient = quotient + term
        remainder = remainder - ore_multiply(term, divisor)
    return quotient, remainder


def q_linear_basis(alphas: Sequence[RatFuncT]) -> List[RatFuncT]:
    """
    Greedy Q-basis of the Q-span, keeping the earliest independent inputs.

    Inputs are brought over a common denominator and compared as coefficient
    vectors of their numerators.

    Args:
        alphas: Elements of Q(t)

    Returns:
        A sublist of the nonzero inputs that is a basis of their span
    """
    alphas = [RatFuncT.coerce(a) for a in alphas]
    nonzero = [a for a in alphas if a]
    if not nonzero:
        return []
    den = common_denominator(nonzero)
    numerators = [a.num * den.exquo(a.den) for a in nonzero]
    width = max(p.degree() for p in numerators) + 1

    def vector(p) -> list:
        row = [0] * width
        for (k,), c in p.terms():
            row[k] = c
        return row

    basis: List[RatFuncT] = []
    rows: List[list] = []
    for a, p in zip(nonzero, numerators):
        candidate = rows + [vector(p)]
        if Matrix(candidate).rank() == len(candidate):
            rows = candidate
            basis.append(a)
    logger.debug("q_linear_basis: %d inputs, dimension %d", len(alphas), len(basis))
    return basis


@dataclass(frozen=True)
class AnnihilatorCertificate:
    """R annihilates every input and has order equal to the Q-dimension of their span."""

    inputs: Tuple[RatFuncT, ...]
    basis: Tuple[RatFuncT, ...]
    operator: OreOperator

    def verify(self) -> bool:
        return verify_annihilator(self)


def wronskian_annihilator(alphas: Sequence[RatFuncT]) -> AnnihilatorCertificate:
    """
    Monic R of order s = dim_Q span(alphas) with R(alpha) = 0 for every input.

    R(Y) is the Wronskian of (Y, beta_1, ..., beta_s) expanded along its first
    column, divided by the leading cofactor.  An empty span gives the identity.

    Args:
        alphas: Elements of Q(t)

    Returns:
        AnnihilatorCertificate holding the inputs, a basis and R
    """
    inputs = tuple(RatFuncT.coerce(a) for a in alphas)
    basis = q_linear_basis(inputs)
    s = len(basis)
    if s == 0:
        return AnnihilatorCertificate(inputs, (), OreOperator.one())

    # derivatives[k][j] = d_t^k(beta_j) for k = 0..s
    derivatives = [list(basis)]
    for _ in range(s):
        derivatives.append([b.diff() for b in derivatives[-1]])

    coeffs = []
    for k in range(s + 1):
        minor = QtMatrix([row for i, row in enumerate(derivatives) if i != k], s)
        cofactor = minor.determinant()
        coeffs.append(cofactor if k % 2 == 0 else -cofactor)
    operator = OreOperator(coeffs)
    if operator.order != s:
        # the Wronskian of a Q-independent family is nonzero
        raise RuntimeError("Wronskian of an independent family vanished")
    cert = AnnihilatorCertificate(inputs, tuple(basis), operator.monic())
    logger.debug("wronskian_annihilator: order %d", s)
    return cert


def verify_annihilator(cert: AnnihilatorCertificate) -> bool:
    """
    Recheck an annihilator from its inputs.

    Args:
        cert: Certificate to check

    Returns:
        True when the operator is monic, has order dim_Q of the span and kills every input
    """
    op = cert.operator
    if op.is_zero or not op.is_monic:
        return False
    if op.order != len(q_linear_basis(cert.inputs)):
        return False
    return all(apply(op, a).is_zero for a in cert.inputs)
