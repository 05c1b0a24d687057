"""
Exact arithmetic in Q, Q(t) and Q(t)(x) with the commuting derivations d_x and d_t.

Polynomials are sympy ``Poly`` objects over QQ (dense representation).  Every
value is kept in a canonical reduced form so that equality is decided by
comparing representations, never by evaluation.
"""

import logging
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

from sympy import QQ, Expr, Poly, Rational, cancel, fraction, symbols

from errors import DivisionByZero, PoleAtPoint

logger = logging.getLogger(__name__)

X, T = symbols("x t")

# Coefficient field of t-rational functions, used for polynomials in x over Q(t).
QT = QQ.frac_field(T)

RatQ = Fraction

Scalar = Union[int, Fraction]


def to_fraction(c) -> Fraction:
    """Convert a sympy rational number to a Fraction."""
    return Fraction(int(c.p), int(c.q))


def to_rational(q: Scalar) -> Rational:
    """Convert a Fraction or int to a sympy Rational."""
    q = Fraction(q)
    return Rational(q.numerator, q.denominator)


def _poly_t(expr) -> Poly:
    return Poly(expr, T, domain=QQ)


def _poly_xt(expr) -> Poly:
    return Poly(expr, X, T, domain=QQ)


def _from_ring(p) -> Poly:
    """A PolyElement of the ring under ``QT`` as a Poly in t."""
    rep = dict(p)
    if not rep:
        return _poly_t(0)
    return Poly.from_dict(rep, T, domain=QQ)


def _eval_poly(p: Poly, point: Sequence[Scalar]) -> Fraction:
    """Evaluate a Poly at exact rationals given in generator order."""
    return to_fraction(p.eval(tuple(to_rational(v) for v in point)))


class RatFuncT:
    """An element of Q(t): coprime numerator and monic denominator in t."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None):
        if den is None:
            den = _poly_t(1)
        if den.is_zero:
            raise DivisionByZero("zero denominator in Q(t)")
        if num.is_zero:
            self.num, self.den = _poly_t(0), _poly_t(1)
            return
        g = num.gcd(den)
        if not g.is_one:
            num, den = num.exquo(g), den.exquo(g)
        lc = den.LC()
        if lc != 1:
            num, den = num.mul_ground(1 / lc), den.monic()
        self.num, self.den = num, den

    # Construction

    @classmethod
    def const(cls, c: Scalar) -> "RatFuncT":
        return cls(_poly_t(to_rational(c)))

    @classmethod
    def t(cls) -> "RatFuncT":
        return cls(_poly_t(T))

    @classmethod
    def zero(cls) -> "RatFuncT":
        return cls(_poly_t(0))

    @classmethod
    def one(cls) -> "RatFuncT":
        return cls(_poly_t(1))

    @classmethod
    def from_expr(cls, expr: Expr) -> "RatFuncT":
        """Build from a sympy expression that is rational in t only."""
        n, d = fraction(cancel(expr))
        return cls(_poly_t(n), _poly_t(d))

    @classmethod
    def from_field(cls, q) -> "RatFuncT":
        """
        Build from an element of the sympy domain ``QT``.

        Args:
            q: Element of QQ.frac_field(t), e.g. a coefficient of a Poly over QT

        Returns:
            The same value in canonical form
        """
        if not q:
            return cls.zero()
        return cls(_from_ring(q.numer), _from_ring(q.denom))

    def to_field(self):
        """The value as an element of ``QT``."""
        return QT.from_sympy(self.to_expr())

    @classmethod
    def coerce(cls, value) -> "RatFuncT":
        """
        Accept RatFuncT, int or Fraction.

        Raises:
            TypeError: For any other type
        """
        if isinstance(value, RatFuncT):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"cannot use {type(value).__name__} as an element of Q(t)")

    # Predicates and views

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self) -> bool:
        return not self.num.is_zero

    @property
    def is_constant(self) -> bool:
        """True when the value lies in Q."""
        return self.den.is_one and self.num.degree() <= 0

    def constant_value(self) -> Fraction:
        """
        The value as a Fraction.

        Raises:
            ValueError: If the value depends on t
        """
        if not self.is_constant:
            raise ValueError("value depends on t")
        return Fraction(0) if self.is_zero else to_fraction(self.num.LC())

    def is_negative(self) -> bool:
        """Sign of the leading numerator coefficient, used for printing."""
        return not self.is_zero and self.num.LC() < 0

    def height(self) -> int:
        """Max of numerator and denominator degree."""
        return max(0, self.num.degree(), self.den.degree())

    def to_expr(self) -> Expr:
        return self.num.as_expr() / self.den.as_expr()

    # Arithmetic

    def __add__(self, other) -> "RatFuncT":
        try:
            other = RatFuncT.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return RatFuncT(self.num + other.num, self.den)
        return RatFuncT(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFuncT":
        return RatFuncT(-self.num, self.den)

    def __sub__(self, other) -> "RatFuncT":
        try:
            other = RatFuncT.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFuncT":
        return RatFuncT.coerce(other) - self

    def __mul__(self, other) -> "RatFuncT":
        try:
            other = RatFuncT.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFuncT(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFuncT":
        """
        1/self.

        Raises:
            DivisionByZero: If self is zero
        """
        if self.is_zero:
            raise DivisionByZero("division by zero in Q(t)")
        return RatFuncT(self.den, self.num)

    def __truediv__(self, other) -> "RatFuncT":
        try:
            other = RatFuncT.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFuncT":
        return RatFuncT.coerce(other) / self

    def __pow__(self, k: int) -> "RatFuncT":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFuncT(self.num ** k, self.den ** k)

    def diff(self) -> "RatFuncT":
        """d_t."""
        if self.is_constant:
            return RatFuncT.zero()
        n, d = self.num, self.den
        return RatFuncT(n.diff(T) * d - n * d.diff(T), d * d)

    def eval(self, t0: Scalar) -> Fraction:
        """
        Value at t = t0.

        Args:
            t0: Rational evaluation point

        Returns:
            The exact value

        Raises:
            PoleAtPoint: If the denominator vanishes at t0
        """
        d = _eval_poly(self.den, (t0,))
        if d == 0:
            raise PoleAtPoint(f"t = {t0} is a pole", value=self)
        return _eval_poly(self.num, (t0,)) / d

    # Value semantics

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFuncT.const(other)
        if not isinstance(other, RatFuncT):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RatFuncT", tuple(self.num.terms()), tuple(self.den.terms())))

    def __repr__(self) -> str:
        from expressions import serialize

        return f"RatFuncT({serialize(self)!r})"


class RatFuncXT:
    """An element of Q(t)(x) = Q(x, t).

    Numerator and denominator are coprime in Q[x, t]; the denominator is scaled
    so that its lex-leading coefficient (x before t) is 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None):
        if den is None:
            den = _poly_xt(1)
        if den.is_zero:
            raise DivisionByZero("zero denominator in Q(t)(x)")
        if num.is_zero:
            self.num, self.den = _poly_xt(0), _poly_xt(1)
            return
        g = num.gcd(den)
        if not g.is_ground:
            num, den = num.exquo(g), den.exquo(g)
        lc = den.LC()
        if lc != 1:
            num, den = num.mul_ground(1 / lc), den.mul_ground(1 / lc)
        self.num, self.den = num, den

    # Construction

    @classmethod
    def const(cls, c: Scalar) -> "RatFuncXT":
        return cls(_poly_xt(to_rational(c)))

    @classmethod
    def x(cls) -> "RatFuncXT":
        return cls(_poly_xt(X))

    @classmethod
    def t(cls) -> "RatFuncXT":
        return cls(_poly_xt(T))

    @classmethod
    def zero(cls) -> "RatFuncXT":
        return cls(_poly_xt(0))

    @classmethod
    def one(cls) -> "RatFuncXT":
        return cls(_poly_xt(1))

    @classmethod
    def from_t(cls, a: RatFuncT) -> "RatFuncXT":
        """Embed Q(t) into Q(t)(x)."""
        return cls(lift_t(a.num), lift_t(a.den))

    @classmethod
    def from_expr(cls, expr: Expr) -> "RatFuncXT":
        """Build from a sympy expression in x and t after cancelling."""
        n, d = fraction(cancel(expr))
        return cls(_poly_xt(n), _poly_xt(d))

    @classmethod
    def coerce(cls, value) -> "RatFuncXT":
        """
        Accept RatFuncXT, RatFuncT, int or Fraction.

        Args:
            value: Value to embed

        Returns:
            The value as an element of Q(t)(x)

        Raises:
            TypeError: For any other type
        """
        if isinstance(value, RatFuncXT):
            return value
        if isinstance(value, RatFuncT):
            return cls.from_t(value)
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"cannot use {type(value).__name__} as an element of Q(t)(x)")

    # Predicates and views

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self) -> bool:
        return not self.num.is_zero

    def is_constant_in_x(self) -> bool:
        """True when the value lies in Q(t)."""
        return self.num.degree(X) <= 0 and self.den.degree(X) <= 0

    def to_t(self) -> RatFuncT:
        """
        The value as an element of Q(t).

        Raises:
            ValueError: If the value depends on x
        """
        if not self.is_constant_in_x():
            raise ValueError("value depends on x")
        return RatFuncT(_drop_x(self.num), _drop_x(self.den))

    def pole_order_at_infinity(self) -> int:
        """deg_x(num) - deg_x(den) when positive, else 0."""
        if self.is_zero:
            return 0
        return max(0, self.num.degree(X) - self.den.degree(X))

    def monic_parts(self) -> Tuple[Poly, Poly]:
        """Numerator and denominator over Q(t), with the denominator monic in x."""
        num = Poly(self.num.as_expr(), X, domain=QT)
        den = Poly(self.den.as_expr(), X, domain=QT)
        lc = den.LC()
        return num.quo_ground(lc), den.monic()

    def to_expr(self) -> Expr:
        return self.num.as_expr() / self.den.as_expr()

    # Arithmetic

    def __add__(self, other) -> "RatFuncXT":
        try:
            other = RatFuncXT.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return RatFuncXT(self.num + other.num, self.den)
        return RatFuncXT(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFuncXT":
        return RatFuncXT(-self.num, self.den)

    def __sub__(self, other) -> "RatFuncXT":
        try:
            other = RatFuncXT.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFuncXT":
        return RatFuncXT.coerce(other) - self

    def __mul__(self, other) -> "RatFuncXT":
        try:
            other = RatFuncXT.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFuncXT(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFuncXT":
        """
        1/self.

        Raises:
            DivisionByZero: If self is zero
        """
        if self.is_zero:
            raise DivisionByZero("division by zero in Q(t)(x)")
        return RatFuncXT(self.den, self.num)

    def __truediv__(self, other) -> "RatFuncXT":
        try:
            other = RatFuncXT.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFuncXT":
        return RatFuncXT.coerce(other) / self

    def __pow__(self, k: int) -> "RatFuncXT":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFuncXT(self.num ** k, self.den ** k)

    def _diff(self, var) -> "RatFuncXT":
        n, d = self.num, self.den
        dn, dd = n.diff(var), d.diff(var)
        if dd.is_zero:
            return RatFuncXT(dn, d)
        return RatFuncXT(dn * d - n * dd, d * d)

    def eval_at(self, x0: Scalar, t0: Scalar) -> Fraction:
        """Value at the rational point (x0, t0); raises PoleAtPoint on a pole."""
        point = (x0, t0)
        d = _eval_poly(self.den, point)
        if d == 0:
            raise PoleAtPoint(f"(x, t) = ({x0}, {t0}) is a pole", value=self)
        return _eval_poly(self.num, point) / d

    # Value semantics

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, RatFuncT)):
            other = RatFuncXT.coerce(other)
        if not isinstance(other, RatFuncXT):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RatFuncXT", tuple(self.num.terms()), tuple(self.den.terms())))

    def __repr__(self) -> str:
        from expressions import serialize

        return f"RatFuncXT({serialize(self)!r})"


def lift_t(p: Poly) -> Poly:
    """Univariate t-polynomial as a polynomial in (x, t)."""
    rep = {(0, monom[0]): coeff for monom, coeff in p.terms()}
    if not rep:
        return _poly_xt(0)
    return Poly.from_dict(rep, X, T, domain=QQ)


def _drop_x(p: Poly) -> Poly:
    """An (x, t)-polynomial free of x as a univariate t-polynomial."""
    rep = {(monom[1],): coeff for monom, coeff in p.terms()}
    if not rep:
        return _poly_t(0)
    return Poly.from_dict(rep, T, domain=QQ)


def field_op(op: str, a: RatFuncXT, b: Union[RatFuncXT, int]) -> RatFuncXT:
    """
    Dispatch one of the field operations by name.

    Args:
        op: One of "add", "sub", "mul", "div", "pow"
        a: Left operand
        b: Right operand; an int exponent for "pow"

    Returns:
        The canonical result

    Raises:
        DivisionByZero: On division by zero
        ValueError: For an unknown operation name
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        if not isinstance(b, int):
            raise TypeError("exponent must be an integer")
        return a ** b
    raise ValueError(f"unknown field operation: {op}")


def d_x(f: RatFuncXT) -> RatFuncXT:
    """Derivation with d_x(x) = 1 and d_x(t) = 0."""
    return f._diff(X)


def d_t(f: Union[RatFuncXT, RatFuncT]):
    """Derivation with d_t(t) = 1 and d_t(x) = 0; accepts Q(t) or Q(t)(x)."""
    if isinstance(f, RatFuncT):
        return f.diff()
    return f._diff(T)


def log_derivative(u: RatFuncT) -> RatFuncT:
    """
    Logarithmic derivative d_t(u)/u, the map Gm -> Ga.

    Args:
        u: Nonzero element of Q(t)

    Returns:
        d_t(u) / u
    """
    if u.is_zero:
        raise DivisionByZero("logarithmic derivative of zero")
    return u.diff() / u


def eval_at(f: RatFuncXT, x0: Scalar, t0: Scalar) -> Fraction:
    """
    Evaluate f at a rational point.

    Args:
        f: Element of Q(t)(x)
        x0: Value for x
        t0: Value for t

    Returns:
        f(x0, t0) as a Fraction
    """
    return f.eval_at(x0, t0)


def common_denominator(values: Iterable[RatFuncT]) -> Poly:
    """Monic lcm of the denominators."""
    result = _poly_t(1)
    for v in values:
        result = result.lcm(v.den)
    return result
