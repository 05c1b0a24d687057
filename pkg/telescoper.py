"""
Telescopers for rational functions on the projective line.

For f in Q(t)(x) whose denominator splits, find a nonzero L in Q(t)[Dt] and
g in Q(t)(x) with L(f) = d_x(g).  The annihilator of the residues kills every
residue of L(f), which then integrates without logarithms.

Everything is computed on the partial fraction form of f: d_t moves terms
between orders at a fixed pole and never creates new poles, so L(f) is built
termwise and only g is reassembled.
"""

import logging
from dataclasses import dataclass

from errors import CertifyError
from ore import AnnihilatorCertificate, OreOperator, wronskian_annihilator
from rational import RatFuncXT
from residues import PartialFractionForm, ResidueList, split_partial_fractions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TelescopeCertificate:
    f: RatFuncXT
    residues: ResidueList
    annihilator: AnnihilatorCertificate
    operator: OreOperator
    integral: RatFuncXT

    def verify(self) -> bool:
        return verify_telescope(self)


def apply_to_form(op: OreOperator, form: PartialFractionForm) -> PartialFractionForm:
    """
    Apply L = sum a_i Dt^i to a function given by its partial fractions.

    Args:
        op: Operator in Q(t)<Dt>
        form: Partial fraction form of f

    Returns:
        The form of L(f) over the same poles
    """
    acc = PartialFractionForm.build(form.poles, [], {})
    current = form
    for i, a in enumerate(op.coeffs):
        if i:
            current = current.dt()
        if a:
            acc = acc + current.scale(a)
    return acc


def telescope(f: RatFuncXT) -> TelescopeCertificate:
    """
    Construct (L, g) with L(f) = d_x g.

    Args:
        f: Element of Q(t)(x) with split denominator

    Returns:
        Certificate whose operator has order dim_Q of the residue span

    Raises:
        NonSplitDenominator: If the denominator of f does not split over Q(t)
        CertifyError: If the result fails its own check
    """
    f = RatFuncXT.coerce(f)
    form = split_partial_fractions(f)
    residues = form.residues()
    annihilator = wronskian_annihilator(residues.nonzero_finite())
    operator = annihilator.operator
    integral = apply_to_form(operator, form).integrate().reassemble()
    cert = TelescopeCertificate(f, residues, annihilator, operator, integral)
    if not verify_telescope(cert):
        raise CertifyError("constructed telescoper failed its own check", value=f)
    logger.info("telescope: order %d over %d poles", operator.order, len(form.poles))
    return cert


def verify_telescope(cert: TelescopeCertificate) -> bool:
    """
    Recheck L(f) = d_x g from f, L and g alone.

    Both sides are compared as partial fraction forms over the poles of f;
    equal forms over one pole list mean equal functions.

    Args:
        cert: Certificate to check

    Returns:
        True when the operator is nonzero and the identity holds
    """
    if cert.operator.is_zero:
        return False
    form = split_partial_fractions(cert.f)
    try:
        derivative = split_partial_fractions(cert.integral, form.poles).dx()
    except ValueError:
        # g has a pole that f lacks
        return False
    return apply_to_form(cert.operator, form) == derivative
