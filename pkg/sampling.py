"""
Seeded generators of random inputs for the property suites.
"""

import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ore import OreOperator
from rational import RatFuncT, RatFuncXT

SMALL = (-3, -2, -1, 1, 2, 3)


class Sampler:
    """Random rational functions, operators and words from one seeded stream."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def small_rational(self, nonzero: bool = True) -> Fraction:
        """A rational with numerator in [-3, 3] and denominator 1, 2 or 3."""
        num = self.rng.choice(SMALL) if nonzero else self.rng.randint(-3, 3)
        return Fraction(num, self.rng.choice((1, 1, 2, 3)))

    def poly_t(self, max_degree: int = 3, nonzero: bool = True) -> RatFuncT:
        """A polynomial in t with small integer coefficients."""
        degree = self.rng.randint(0, max_degree)
        t = RatFuncT.t()
        value = RatFuncT.zero()
        for k in range(degree + 1):
            value = value + RatFuncT.const(self.rng.randint(-3, 3)) * t ** k
        if nonzero and value.is_zero:
            value = RatFuncT.const(self.rng.choice(SMALL))
        return value

    def pole_location(self) -> RatFuncT:
        """One of q, q + r t, t^2."""
        t = RatFuncT.t()
        kind = self.rng.randrange(3)
        if kind == 0:
            return RatFuncT.const(self.small_rational(nonzero=False))
        if kind == 1:
            return RatFuncT.const(self.small_rational(nonzero=False)) + t * self.small_rational()
        return t * t

    def split_function(
        self,
        max_poles: int = 4,
        max_order: int = 3,
        locations: Optional[Sequence[RatFuncT]] = None,
        polynomial_part: bool = True,
    ) -> RatFuncXT:
        """sum c(t) / (x - x_i)^j over distinct poles, plus a small polynomial part."""
        x = RatFuncXT.x()
        chosen: List[RatFuncT] = []
        count = self.rng.randint(1, max_poles)
        for _ in range(count * 4):
            if len(chosen) == count:
                break
            loc = self.rng.choice(list(locations)) if locations else self.pole_location()
            if loc not in chosen:
                chosen.append(loc)
        f = RatFuncXT.zero()
        for loc in chosen:
            base = x - RatFuncXT.from_t(loc)
            for j in range(1, self.rng.randint(1, max_order) + 1):
                if j == 1 or self.rng.random() < 0.7:
                    f = f + RatFuncXT.from_t(self.poly_t()) / base ** j
        if polynomial_part and self.rng.random() < 0.3:
            f = f + RatFuncXT.from_t(self.poly_t()) * x ** self.rng.randint(0, 2)
        return f

    def integrable_pair(self, max_poles: int = 2) -> Tuple[RatFuncXT, RatFuncXT]:
        """(A, B) = (d_x w / w, d_t w / w) for w = exp(a x) prod (x - x_i)^m_i.

        Such a pair always satisfies d_t A = d_x B.
        """
        x = RatFuncXT.x()
        a = self.poly_t(2, nonzero=False) if self.rng.random() < 0.3 else RatFuncT.zero()
        A, B = RatFuncXT.from_t(a), RatFuncXT.from_t(a.diff()) * x
        chosen: List[RatFuncT] = []
        for _ in range(self.rng.randint(1, max_poles)):
            loc = self.pole_location()
            if loc in chosen:
                continue
            chosen.append(loc)
            m = self.rng.choice((-2, -1, 1, 2))
            base = x - RatFuncXT.from_t(loc)
            A = A + RatFuncXT.const(m) / base
            B = B - RatFuncXT.from_t(loc.diff() * m) / base
        return A, B

    def operator(self, max_order: int = 4, max_degree: int = 3) -> OreOperator:
        """An operator with polynomial coefficients and a nonzero leading one."""
        order = self.rng.randint(0, max_order)
        coeffs = [self.poly_t(max_degree, nonzero=False) for _ in range(order)]
        coeffs.append(self.poly_t(max_degree))
        return OreOperator(coeffs)

    def lower_generators(self, max_count: int = 4, max_degree: int = 3) -> List[Tuple[RatFuncT, Fraction]]:
        count = self.rng.randint(1, max_count)
        return [(self.poly_t(max_degree, nonzero=False), self.small_rational()) for _ in range(count)]

    def word(self, size: int, max_length: int = 20) -> List[int]:
        """A word in generators 1..size and their inverses, encoded as signed indices."""
        length = self.rng.randint(0, max_length)
        return [self.rng.choice((1, -1)) * self.rng.randint(1, size) for _ in range(length)]
