"""
Operators L with L(w') = (d_x h + A h) w' for w' = d_x w given only through
A = d_x(w')/w' and B = d_t(w')/w'.

With R_0 = 1 and R_{i+1} = d_t R_i + B R_i we look for constants alpha_i in
Q(t) and a rational h with

    sum_i alpha_i R_i = d_x h + A h,

by writing h with unknown coefficients beta over the poles of A and B and
comparing partial fractions on both sides.  The comparison is a homogeneous
linear system with more unknowns than equations.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from errors import BoundsTooSmall, IntegrabilityViolation, SystemTooLarge, TrivialNullspace
from linalg import QtMatrix
from ore import OreOperator
from rational import RatFuncT, RatFuncXT, d_t, d_x
from residues import PartialFractionForm, find_poles, pole_sort_key, split_partial_fractions
from settings import settings

logger = logging.getLogger(__name__)


def default_bounds(n: int, p: int) -> Tuple[int, int]:
    """Smallest M > n p and N > n (M - 1)."""
    if n < 1 or p < 1:
        raise ValueError("bounds need n >= 1 and p >= 1")
    m = n * p + 1
    return m, n * (m - 1) + 1


def _max_orders(f: RatFuncXT, poles: Sequence[RatFuncT]) -> int:
    if f.is_zero:
        return 0
    form = split_partial_fractions(f, poles)
    finite = max((form.max_order(i) for i in range(len(poles))), default=0)
    return max(finite, f.pole_order_at_infinity())


@dataclass(frozen=True)
class ObstructionProblem:
    """A, B with the finite pole set x_1..x_{p-1}; infinity is pole p."""

    A: RatFuncXT
    B: RatFuncXT
    poles: Tuple[RatFuncT, ...]
    n: int
    M: int
    N: int

    @property
    def p(self) -> int:
        return len(self.poles) + 1

    @classmethod
    def from_pair(
        cls, A: RatFuncXT, B: RatFuncXT, M: Optional[int] = None, N: Optional[int] = None
    ) -> "ObstructionProblem":
        """Derive the pole set and n from A and B; unset bounds take default_bounds."""
        A, B = RatFuncXT.coerce(A), RatFuncXT.coerce(B)
        check_integrability(A, B)
        locations: List[RatFuncT] = []
        for f in (A, B):
            for spec in find_poles(f):
                if spec.location not in locations:
                    locations.append(spec.location)
        locations.sort(key=pole_sort_key)
        poles = tuple(locations)
        n = max(1, _max_orders(A, poles), _max_orders(B, poles))
        default_m, _ = default_bounds(n, len(poles) + 1)
        m = default_m if M is None else M
        if N is None:
            N = n * (m - 1) + 1
        if m < 0 or N < 0:
            raise ValueError("bounds must be nonnegative")
        logger.info("obstruction problem: p=%d n=%d M=%d N=%d", len(poles) + 1, n, m, N)
        return cls(A, B, poles, n, m, N)


def check_integrability(A: RatFuncXT, B: RatFuncXT) -> None:
    """
    Require d_t A = d_x B.

    Raises:
        IntegrabilityViolation: With the defect d_t A - d_x B as value
    """
    defect = d_t(A) - d_x(B)
    if defect:
        raise IntegrabilityViolation("d_t A differs from d_x B", value=defect)


@dataclass(frozen=True)
class RSequence:
    terms: Tuple[RatFuncXT, ...]

    def __getitem__(self, i: int) -> RatFuncXT:
        return self.terms[i]

    def __len__(self) -> int:
        return len(self.terms)


def r_sequence(B: RatFuncXT, M: int, order_bound: Optional[int] = None) -> RSequence:
    """R_0..R_M with R_0 = 1 and R_{i+1} = d_t R_i + B R_i.

    With ``order_bound`` = n, asserts that R_i has pole order at most i n
    everywhere, infinity included.
    """
    if M < 0:
        raise ValueError("M must be nonnegative")
    B = RatFuncXT.coerce(B)
    terms = [RatFuncXT.one()]
    for _ in range(M):
        prev = terms[-1]
        terms.append(d_t(prev) + B * prev)
    if order_bound is not None:
        for i, r in enumerate(terms):
            if r.is_zero:
                continue
            worst = max(
                [spec.multiplicity for spec in find_poles(r)] + [r.pole_order_at_infinity()]
            )
            if worst > i * order_bound:
                raise AssertionError(f"R_{i} has a pole of order {worst} > {i * order_bound}")
    return RSequence(tuple(terms))


Label = Tuple[Union[str, int], ...]


@dataclass(frozen=True)
class ObstructionSystem:
    """Columns are unknowns, rows are partial-fraction coefficients.

    Column labels: ("alpha", r) for r = 0..M, then ("beta", p, s) for the
    polynomial side s = 0..N, then ("beta", i, j) for finite pole i, j = 1..N.
    Row labels: ("x", k) for x^k, k = 0..n+N, then ("pole", i, j) for
    1/(x - x_i)^j, j = 1..n+N.
    """

    problem: ObstructionProblem
    columns: Tuple[Label, ...]
    rows: Tuple[Label, ...]
    matrix: QtMatrix

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @property
    def surplus(self) -> int:
        """Unknowns minus equations; positive for the default bounds."""
        return self.ncols - self.nrows


def _column_labels(prob: ObstructionProblem) -> List[Label]:
    labels: List[Label] = [("alpha", r) for r in range(prob.M + 1)]
    labels += [("beta", prob.p, s) for s in range(prob.N + 1)]
    for i in range(1, prob.p):
        labels += [("beta", i, j) for j in range(1, prob.N + 1)]
    return labels


def _row_labels(prob: ObstructionProblem) -> List[Label]:
    top = prob.n + prob.N
    labels: List[Label] = [("x", k) for k in range(top + 1)]
    for i in range(1, prob.p):
        labels += [("pole", i, j) for j in range(1, top + 1)]
    return labels


def _h_basis(prob: ObstructionProblem, label: Label) -> RatFuncXT:
    """The ansatz function multiplying unknown beta_label in h."""
    _, i, j = label
    x = RatFuncXT.x()
    if i == prob.p:
        return x ** j
    return (x - RatFuncXT.from_t(prob.poles[i - 1])) ** (-j)


def _check_reach(prob: ObstructionProblem, label: Label, form: PartialFractionForm) -> None:
    """
    Make sure a column fits the rows of the ansatz.

    Columns of h always fit; a term R_r can overflow when M or N was
    overridden below its default.

    Raises:
        BoundsTooSmall: If an R_r column has pole order above n + N
    """
    top = prob.n + prob.N
    reach = max(
        [len(form.polynomial) - 1] + [term.order for term in form.terms],
    )
    if reach <= top:
        return
    if label[0] == "alpha":
        raise BoundsTooSmall(
            f"R_{label[1]} has pole order {reach} > n + N = {top}; raise N",
            value=reach,
        )
    raise AssertionError(f"column {label} reaches order {reach}")


def build_system(prob: ObstructionProblem) -> ObstructionSystem:
    """
    Coefficient comparison of sum alpha_i R_i - (d_x h + A h) = 0.

    Args:
        prob: Problem with A not in Q(t)

    Returns:
        ObstructionSystem with one row per partial fraction coefficient

    Raises:
        SystemTooLarge: If the column count exceeds max_system_columns
        BoundsTooSmall: If overridden bounds leave some R_i outside the rows
    """
    if prob.A.is_constant_in_x():
        raise ValueError("A lies in Q(t); use solve_obstruction")
    columns = _column_labels(prob)
    rows = _row_labels(prob)
    if len(columns) > settings.max_system_columns:
        raise SystemTooLarge(
            f"system needs {len(columns)} unknowns, limit is {settings.max_system_columns}",
            value=len(columns),
        )
    logger.info("build_system: %d rows x %d columns", len(rows), len(columns))

    row_index = {label: k for k, label in enumerate(rows)}
    R = r_sequence(prob.B, prob.M, order_bound=prob.n)
    matrix = QtMatrix.zeros(len(rows), len(columns))

    for col, label in enumerate(columns):
        if label[0] == "alpha":
            contribution = R[label[1]]
        else:
            b = _h_basis(prob, label)
            contribution = -(d_x(b) + prob.A * b)
        if contribution.is_zero:
            continue
        form = split_partial_fractions(contribution, prob.poles)
        _check_reach(prob, label, form)
        for k, c in enumerate(form.polynomial):
            if c:
                matrix[row_index[("x", k)], col] = c
        for term in form.terms:
            matrix[row_index[("pole", term.pole + 1, term.order)], col] = term.coefficient
    return ObstructionSystem(prob, tuple(columns), tuple(rows), matrix)


def assemble_operator(alphas: Sequence[RatFuncT]) -> OreOperator:
    """
    Build L = sum_i alpha_i Dt^i from the alpha-part of a solution.

    Args:
        alphas: alpha_0..alpha_M in Q(t)

    Returns:
        The operator, trailing zeros dropped
    """
    return OreOperator(alphas)


def assemble_h(prob: ObstructionProblem, betas: Sequence[Tuple[Label, RatFuncT]]) -> RatFuncXT:
    """
    Build h from the beta-part of a solution.

    Args:
        prob: Problem fixing the poles and the ansatz
        betas: (column label, value) pairs for the h-columns

    Returns:
        h = sum beta_(i,j) (x - x_i)^(-j) + sum beta_(p,j) x^j
    """
    h = RatFuncXT.zero()
    for label, value in betas:
        if value:
            h = h + RatFuncXT.from_t(value) * _h_basis(prob, label)
    return h


@dataclass(frozen=True)
class ObstructionCertificate:
    """sum_i alpha_i R_i = d_x h + A h with L = sum_i alpha_i Dt^i nonzero."""

    problem: ObstructionProblem
    operator: OreOperator
    h: RatFuncXT
    system: Optional[ObstructionSystem] = field(default=None, compare=False)

    def verify(self) -> bool:
        return verify_obstruction(self)


@dataclass(frozen=True)
class DegenerateReport:
    """Every nullspace vector has zero alpha-part; h0 solves d_x h + A h = 0."""

    problem: ObstructionProblem
    h0: RatFuncXT
    kernel: Optional[RatFuncXT]
    system: Optional[ObstructionSystem] = field(default=None, compare=False)

    def verify(self) -> bool:
        return not self.h0.is_zero and (d_x(self.h0) + self.problem.A * self.h0).is_zero


def _split_vector(
    system: ObstructionSystem, vec: Sequence[RatFuncT]
) -> Tuple[List[RatFuncT], List[Tuple[Label, RatFuncT]]]:
    alphas, betas = [], []
    for label, value in zip(system.columns, vec):
        if label[0] == "alpha":
            alphas.append(value)
        else:
            betas.append((label, value))
    return alphas, betas


def _operator_order(alphas: Sequence[RatFuncT]) -> int:
    return max((i for i, a in enumerate(alphas) if a), default=-1)


def solve_obstruction(
    prob: ObstructionProblem,
) -> Union[ObstructionCertificate, DegenerateReport]:
    """
    Pick a nullspace vector with nonzero alpha-part and minimal order; make L monic.

    Args:
        prob: Problem from ObstructionProblem.from_pair

    Returns:
        An ObstructionCertificate, or a DegenerateReport when every solution
        has zero operator part

    Raises:
        IntegrabilityViolation: If d_t A != d_x B
        SystemTooLarge: If the system exceeds the configured limit
        BoundsTooSmall: If bound overrides cannot hold the R_i
        TrivialNullspace: If bound overrides leave only the zero solution
    """
    check_integrability(prob.A, prob.B)
    if prob.A.is_zero:
        return ObstructionCertificate(prob, OreOperator.one(), RatFuncXT.x())
    if prob.A.is_constant_in_x():
        return ObstructionCertificate(prob, OreOperator.scalar(prob.A.to_t()), RatFuncXT.one())

    system = build_system(prob)
    basis = system.matrix.nullspace()
    logger.info("solve_obstruction: nullspace dimension %d", len(basis))
    if not basis:
        raise TrivialNullspace("the system has only the zero solution; raise M or N", value=system.surplus)

    best = None
    for index, vec in enumerate(basis):
        alphas, _ = _split_vector(system, vec)
        order = _operator_order(alphas)
        if order < 0:
            continue
        if best is None or order < best[0]:
            best = (order, index)

    if best is None:
        _, betas = _split_vector(system, basis[0])
        report = DegenerateReport(
            prob, assemble_h(prob, betas), rational_first_order_kernel(prob.A), system
        )
        logger.warning("solve_obstruction: every solution has zero operator part")
        return report

    order, index = best
    alphas, betas = _split_vector(system, basis[index])
    lead = alphas[order]
    alphas = [a / lead for a in alphas]
    betas = [(label, b / lead) for label, b in betas]
    cert = ObstructionCertificate(prob, assemble_operator(alphas), assemble_h(prob, betas), system)
    if not verify_obstruction(cert):
        raise AssertionError("obstruction certificate failed its own check")
    logger.info("solve_obstruction: basis vector %d, order %d", index, order)
    return cert


def verify_obstruction(cert: ObstructionCertificate) -> bool:
    """
    Recompute the R-sequence and check the identity exactly.

    Args:
        cert: Certificate to check

    Returns:
        True when L is nonzero and sum alpha_i R_i = d_x h + A h
    """
    op = cert.operator
    if op.is_zero:
        return False
    A = cert.problem.A
    R = r_sequence(cert.problem.B, op.order)
    lhs = RatFuncXT.zero()
    for alpha, r in zip(op.coeffs, R.terms):
        if alpha:
            lhs = lhs + RatFuncXT.from_t(alpha) * r
    return (lhs - (d_x(cert.h) + A * cert.h)).is_zero


def rational_first_order_kernel(A: RatFuncXT) -> Optional[RatFuncXT]:
    """Nonzero rational h0 with d_x h0 = -A h0, or None.

    Exists exactly when A = -sum m_i / (x - x_i) with integer m_i and no
    polynomial part; then h0 = prod (x - x_i)^m_i.
    """
    A = RatFuncXT.coerce(A)
    form = split_partial_fractions(A)
    if form.polynomial:
        return None
    x = RatFuncXT.x()
    h0 = RatFuncXT.one()
    for i, x_i in enumerate(form.poles):
        if form.max_order(i) > 1:
            return None
        r = form.coefficient(i, 1)
        if not r.is_constant:
            return None
        m = -r.constant_value()
        if m.denominator != 1:
            return None
        h0 = h0 * (x - RatFuncXT.from_t(x_i)) ** int(m)
    return h0
