#!/usr/bin/env python3
"""
Full-size property suites for the certificate toolkit.

Runs the randomized checks at their release sizes (the unit tests use smaller
samples) and prints a summary table. Exit code 0 when every suite passes.
"""

import logging
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Tuple

from rich.console import Console
from rich.table import Table

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from groups import (  # noqa: E402
    density_obstruction,
    has_ga_or_gm_quotient,
    kolchin_dense_generators,
    word_eval,
)
from models import GroupDesc, QuotientKind  # noqa: E402
from obstruction import DegenerateReport, ObstructionProblem, solve_obstruction  # noqa: E402
from ore import apply, right_divide  # noqa: E402
from rational import RatFuncT, RatFuncXT, d_x  # noqa: E402
from residues import chevalley_check, residue_list  # noqa: E402
from sampling import Sampler  # noqa: E402
from settings import settings  # noqa: E402
from telescoper import telescope  # noqa: E402

console = Console()

Outcome = Tuple[bool, List[str]]

CRITERION_TABLE = [
    ({"semisimple": ["SL2"]}, QuotientKind.NONE),
    ({"semisimple": ["SL3"]}, QuotientKind.NONE),
    ({"torus_rank": 1}, QuotientKind.GM),
    ({"semisimple": ["SL2"], "modules": [{"dim": 3, "weight": "V_2"}]}, QuotientKind.NONE),
    ({"semisimple": ["SL2"], "modules": [{"dim": 1, "action": "trivial"}]}, QuotientKind.GA),
    ({"semisimple": ["SL2"], "modules": [{"dim": 2, "weight": "V_1"}, {"dim": 2, "weight": "V_1"}]}, QuotientKind.NONE),
]


def setup_logging():
    logging.basicConfig(level=settings.log_level, format="%(name)s - %(levelname)s - %(message)s")


def check_telescoper(sampler: Sampler, count: int = 200) -> Outcome:
    """Certificates verify and order(L) = dim_Q of the residue span."""
    issues = []
    for k in range(count):
        f = sampler.split_function(max_poles=4, max_order=3)
        cert = telescope(f)
        if not cert.verify():
            issues.append(f"input {k}: L(f) != d_x g")
        if cert.operator.order != len(cert.annihilator.basis):
            issues.append(f"input {k}: order {cert.operator.order} != {len(cert.annihilator.basis)}")
    return not issues, issues


def check_obstruction(sampler: Sampler, count: int = 10) -> Outcome:
    """Sampled integrable pairs give verified certificates or valid degenerate reports."""
    issues = []
    for k in range(count):
        A, B = sampler.integrable_pair(max_poles=2)
        result = solve_obstruction(ObstructionProblem.from_pair(A, B))
        ok = result.verify()
        if isinstance(result, DegenerateReport):
            ok = ok and (d_x(result.h0) + A * result.h0).is_zero
        if not ok:
            issues.append(f"pair {k}: {type(result).__name__} does not verify")
    return not issues, issues


def check_chevalley(sampler: Sampler, count: int = 100) -> Outcome:
    t = RatFuncT.t()
    locations = [t, t * t, t + 1, RatFuncT.zero(), RatFuncT.one()]
    issues = []
    for k in range(count):
        f = sampler.split_function(max_poles=3, locations=locations)
        failed = [c for c in chevalley_check(f) if not c.holds]
        if failed:
            issues.append(f"input {k}: {len(failed)} poles disagree")
    return not issues, issues


def _sum_of_finite_residues(f: RatFuncXT) -> RatFuncT:
    """lim x * (proper part of f) as x -> infinity."""
    num, den = f.monic_parts()
    rem = num.rem(den)
    if rem.is_zero or rem.degree() != den.degree() - 1:
        return RatFuncT.zero()
    return RatFuncT.from_expr(rem.LC())


def check_residue_theorem(sampler: Sampler, count: int = 100) -> Outcome:
    issues = []
    for k in range(count):
        f = sampler.split_function()
        residues = residue_list(f)
        total = RatFuncT.zero()
        for _, r in residues.finite:
            total = total + r
        if total != _sum_of_finite_residues(f) or not (total + residues.at_infinity).is_zero:
            issues.append(f"input {k}: residue at infinity disagrees with the Laurent coefficient")
    return not issues, issues


def check_ore_laws(sampler: Sampler, count: int = 100) -> Outcome:
    """Homomorphism, order additivity and right-division reconstruction."""
    f = RatFuncXT.x() / (RatFuncXT.x() - RatFuncXT.t() ** 2)
    issues = []
    for k in range(count):
        l1, l2 = sampler.operator(4, 3), sampler.operator(4, 3)
        product = l1 * l2
        if apply(product, f) != apply(l1, apply(l2, f)):
            issues.append(f"pair {k}: application is not a homomorphism")
        if product.order != l1.order + l2.order:
            issues.append(f"pair {k}: orders do not add")
        q, r = right_divide(l1, l2)
        if q * l2 + r != l1 or (r and r.order >= l2.order):
            issues.append(f"pair {k}: division does not reconstruct")
    return not issues, issues


def check_density(sampler: Sampler, sets: int = 10, words: int = 50) -> Outcome:
    issues = []
    for k in range(sets):
        gens = sampler.lower_generators()
        cert = density_obstruction(gens)
        for _ in range(words):
            a, b = word_eval(gens, sampler.word(len(gens)))
            if apply(cert.operator, a) or not isinstance(b, Fraction) or b == 0:
                issues.append(f"set {k}: a word left the certified supergroup")
                break
    return not issues, issues


def check_groups(_: Sampler) -> Outcome:
    """Criterion table and SL2 witnesses on V_1..V_3."""
    issues = []
    for desc, expected in CRITERION_TABLE:
        verdict = has_ga_or_gm_quotient(GroupDesc.model_validate(desc)).verdict
        if verdict is not expected:
            issues.append(f"{desc}: {verdict.value}, expected {expected.value}")
    for d in (1, 2, 3):
        group = GroupDesc.model_validate({"semisimple": ["SL2"], "modules": [{"dim": d + 1, "weight": f"V_{d}"}]})
        if not kolchin_dense_generators(group).verify():
            issues.append(f"V_{d}: witness side conditions fail")
    return not issues, issues


def main():
    """Run every suite and report."""
    setup_logging()
    sampler = Sampler(settings.random_seed)

    console.print("[bold]🧪 Property suites[/bold]")
    console.print(f"seed {settings.random_seed}")

    suites: List[Tuple[str, Callable[[Sampler], Outcome]]] = [
        ("Telescoper certificates", check_telescoper),
        ("Obstruction certificates", check_obstruction),
        ("Chevalley commutation", check_chevalley),
        ("Residue theorem", check_residue_theorem),
        ("Ore ring laws", check_ore_laws),
        ("Density obstruction closure", check_density),
        ("Group criterion and witnesses", check_groups),
    ]

    table = Table(show_header=True, header_style="bold")
    table.add_column("Suite", style="cyan")
    table.add_column("Result", style="white")
    table.add_column("Seconds", style="white", justify="right")

    all_issues = []
    for name, suite in suites:
        console.print(f"📋 {name}...")
        start = time.perf_counter()
        success, issues = suite(sampler)
        elapsed = time.perf_counter() - start
        table.add_row(name, "[green]PASSED[/green]" if success else "[red]FAILED[/red]", f"{elapsed:.1f}")
        all_issues.extend(f"{name}: {issue}" for issue in issues)

    console.print(table)
    if all_issues:
        console.print(f"[red]🚨 {len(all_issues)} failures[/red]")
        for i, issue in enumerate(all_issues, 1):
            console.print(f"{i}. {issue}")
        return 1
    console.print("[green]✅ All property suites passed[/green]")
    return 0


if __name__ == "__main__":
    try:
        sys.exit(main())
    except Exception as e:
        console.print(f"[red]❌ Property suites failed with error: {e}[/red]")
        sys.exit(1)
