"""
Task dispatch for problem files and independent re-verification of certificates.

Each task has a runner producing (inputs, result) dictionaries of canonical
strings and a checker that rebuilds the claim from those strings alone.
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, Tuple

from pydantic import ValidationError

from errors import CertifyError, ProblemFormatError
from expressions import (
    parse_operator,
    parse_rational,
    parse_rational_q,
    parse_rational_t,
    serialize,
)
from groups import (
    DensityObstructionCert,
    density_obstruction,
    has_ga_or_gm_quotient,
    kolchin_dense_generators,
)
from models import (
    CertificateFile,
    CertificateStatus,
    GroupDesc,
    ProblemFile,
    QuotientVerdict,
    TaskName,
)
from obstruction import (
    DegenerateReport,
    ObstructionCertificate,
    ObstructionProblem,
    solve_obstruction,
    verify_obstruction,
)
from ore import AnnihilatorCertificate, q_linear_basis, wronskian_annihilator
from rational import RatFuncXT
from residues import (
    PartialFractionForm,
    PartialFractionTerm,
    chevalley_check,
    reassemble,
    residue_list,
    split_partial_fractions,
)
from settings import settings
from telescoper import TelescopeCertificate, telescope, verify_telescope

logger = logging.getLogger(__name__)

TOOL_NAME = "ppv-certify"
TOOL_VERSION = "0.1.0"

Payload = Tuple[Dict[str, Any], Dict[str, Any]]


def _pole_text(location) -> str:
    return "infinity" if location is None else serialize(location)


# Runners

def _run_telescope(problem: ProblemFile) -> Payload:
    f = parse_rational(problem.f)
    cert = telescope(f)
    result = {
        "L": serialize(cert.operator),
        "g": serialize(cert.integral),
        "order": cert.operator.order,
        "residues": [
            {"pole": serialize(x), "residue": serialize(r)} for x, r in cert.residues.finite
        ],
        "residue_at_infinity": serialize(cert.residues.at_infinity),
        "residue_basis": [serialize(b) for b in cert.annihilator.basis],
    }
    return {"f": serialize(f)}, result


def _run_obstruct(problem: ProblemFile) -> Payload:
    A, B = parse_rational(problem.A), parse_rational(problem.B)
    prob = ObstructionProblem.from_pair(A, B, M=problem.options.M, N=problem.options.N)
    outcome = solve_obstruction(prob)
    inputs = {"A": serialize(A), "B": serialize(B), "M": prob.M, "N": prob.N}
    system = None
    if outcome.system is not None:
        system = {
            "rows": outcome.system.nrows,
            "cols": outcome.system.ncols,
            "surplus": outcome.system.surplus,
        }
    bounds = {"n": prob.n, "p": prob.p, "M": prob.M, "N": prob.N}
    poles = [serialize(x) for x in prob.poles] + ["infinity"]
    if isinstance(outcome, DegenerateReport):
        result = {
            "kind": "degenerate",
            "h0": serialize(outcome.h0),
            "kernel": None if outcome.kernel is None else serialize(outcome.kernel),
            "poles": poles,
            "bounds": bounds,
            "system": system,
        }
    else:
        result = {
            "kind": "certificate",
            "L": serialize(outcome.operator),
            "h": serialize(outcome.h),
            "poles": poles,
            "bounds": bounds,
            "system": system,
        }
    return inputs, result


def _run_annihilate(problem: ProblemFile) -> Payload:
    alphas = [parse_rational_t(a) for a in problem.alphas]
    cert = wronskian_annihilator(alphas)
    result = {
        "R": serialize(cert.operator),
        "order": cert.operator.order,
        "basis": [serialize(b) for b in cert.basis],
    }
    return {"alphas": [serialize(a) for a in alphas]}, result


def _residue_result(f: RatFuncXT) -> Dict[str, Any]:
    form = split_partial_fractions(f)
    residues = form.residues()
    return {
        "poles": [
            {
                "pole": serialize(x),
                "order": form.max_order(i),
                "residue": serialize(r),
            }
            for i, (x, r) in enumerate(residues.finite)
        ],
        "residue_at_infinity": serialize(residues.at_infinity),
        "order_at_infinity": f.pole_order_at_infinity(),
        "polynomial_part": [serialize(c) for c in form.polynomial],
        "terms": [
            {"pole": term.pole, "order": term.order, "coefficient": serialize(term.coefficient)}
            for term in form.terms
        ],
    }


def _run_residues(problem: ProblemFile) -> Payload:
    f = parse_rational(problem.f)
    return {"f": serialize(f)}, _residue_result(f)


def _chevalley_result(f: RatFuncXT) -> Dict[str, Any]:
    checks = chevalley_check(f)
    return {
        "checks": [
            {
                "pole": _pole_text(c.pole.location),
                "residue_of_derivative": serialize(c.residue_of_derivative),
                "derivative_of_residue": serialize(c.derivative_of_residue),
                "holds": c.holds,
            }
            for c in checks
        ],
        "all_hold": all(c.holds for c in checks),
    }


def _run_chevalley(problem: ProblemFile) -> Payload:
    f = parse_rational(problem.f)
    return {"f": serialize(f)}, _chevalley_result(f)


def _verdict_result(verdict: QuotientVerdict) -> Dict[str, Any]:
    return verdict.model_dump(mode="json")


def _run_group_check(problem: ProblemFile) -> Payload:
    verdict = has_ga_or_gm_quotient(problem.group)
    return {"group": problem.group.model_dump(mode="json")}, _verdict_result(verdict)


def _witness_result(group: GroupDesc) -> Dict[str, Any]:
    witness = kolchin_dense_generators(group)
    elements = []
    for el in witness.elements:
        entry: Dict[str, Any] = {"kind": el.kind, "label": el.label, "factor": el.factor}
        if el.matrix is not None:
            entry["matrix"] = [[serialize(e) for e in row] for row in el.matrix]
        if el.vector is not None:
            entry["module"] = el.module
            entry["vector"] = [serialize(e) for e in el.vector]
        elements.append(entry)
    return {
        "elements": elements,
        "side_conditions": [
            {"claim": c.claim, "holds": c.holds, "detail": c.detail} for c in witness.side_conditions
        ],
        "cosets": witness.cosets,
        "notes": list(witness.notes),
    }


def _run_group_generators(problem: ProblemFile) -> Payload:
    return {"group": problem.group.model_dump(mode="json")}, _witness_result(problem.group)


def _parse_elements(raw):
    return [(parse_rational_t(e["a"]), parse_rational_q(e["b"])) for e in raw]


def _run_density(problem: ProblemFile) -> Payload:
    elements = _parse_elements([e.model_dump() for e in problem.elements])
    cert = density_obstruction(elements)
    inputs = {"elements": [{"a": serialize(a), "b": serialize(b)} for a, b in elements]}
    result = {"L": serialize(cert.operator), "supergroup": cert.supergroup}
    return inputs, result


def _run_verify(problem: ProblemFile) -> Payload:
    target = load_certificate(Path(problem.certificate))
    return {"certificate": problem.certificate}, {"verified": verify_certificate(target)}


RUNNERS: Dict[TaskName, Callable[[ProblemFile], Payload]] = {
    TaskName.TELESCOPE: _run_telescope,
    TaskName.OBSTRUCT: _run_obstruct,
    TaskName.ANNIHILATE: _run_annihilate,
    TaskName.RESIDUES: _run_residues,
    TaskName.CHEVALLEY: _run_chevalley,
    TaskName.GROUP_CHECK: _run_group_check,
    TaskName.GROUP_GENERATORS: _run_group_generators,
    TaskName.DENSITY_OBSTRUCT: _run_density,
    TaskName.VERIFY: _run_verify,
}


# Checkers

def _check_telescope(cert: CertificateFile) -> bool:
    f = parse_rational(cert.inputs["f"])
    L = parse_operator(cert.result["L"])
    g = parse_rational(cert.result["g"])
    residues = residue_list(f)
    annihilator = AnnihilatorCertificate(tuple(residues.nonzero_finite()), (), L)
    return verify_telescope(TelescopeCertificate(f, residues, annihilator, L, g))


def _check_obstruct(cert: CertificateFile) -> bool:
    A, B = parse_rational(cert.inputs["A"]), parse_rational(cert.inputs["B"])
    prob = ObstructionProblem.from_pair(A, B, M=cert.inputs.get("M"), N=cert.inputs.get("N"))
    if cert.result.get("kind") == "degenerate":
        h0 = parse_rational(cert.result["h0"])
        return DegenerateReport(prob, h0, None).verify()
    L = parse_operator(cert.result["L"])
    h = parse_rational(cert.result["h"])
    system = cert.result.get("system")
    if system is not None and system["cols"] - system["rows"] != system["surplus"]:
        return False
    return verify_obstruction(ObstructionCertificate(prob, L, h))


def _check_annihilate(cert: CertificateFile) -> bool:
    alphas = [parse_rational_t(a) for a in cert.inputs["alphas"]]
    R = parse_operator(cert.result["R"])
    basis = [parse_rational_t(b) for b in cert.result["basis"]]
    if len(q_linear_basis(basis)) != len(basis):
        return False
    return AnnihilatorCertificate(tuple(alphas), tuple(basis), R).verify()


def _check_residues(cert: CertificateFile) -> bool:
    f = parse_rational(cert.inputs["f"])
    poles = tuple(parse_rational_t(p["pole"]) for p in cert.result["poles"])
    form = PartialFractionForm(
        poles,
        tuple(parse_rational_t(c) for c in cert.result["polynomial_part"]),
        tuple(
            PartialFractionTerm(t["pole"], t["order"], parse_rational_t(t["coefficient"]))
            for t in cert.result["terms"]
        ),
    )
    if reassemble(form) != f:
        return False
    total = parse_rational_t(cert.result["residue_at_infinity"])
    for i, entry in enumerate(cert.result["poles"]):
        r = parse_rational_t(entry["residue"])
        if r != form.coefficient(i, 1):
            return False
        total = total + r
    return total.is_zero


def _check_chevalley(cert: CertificateFile) -> bool:
    f = parse_rational(cert.inputs["f"])
    return _chevalley_result(f) == cert.result


def _check_group_check(cert: CertificateFile) -> bool:
    group = GroupDesc.model_validate(cert.inputs["group"])
    return _verdict_result(has_ga_or_gm_quotient(group)) == cert.result


def _check_group_generators(cert: CertificateFile) -> bool:
    group = GroupDesc.model_validate(cert.inputs["group"])
    if _witness_result(group) != cert.result:
        return False
    return kolchin_dense_generators(group).verify()


def _check_density(cert: CertificateFile) -> bool:
    elements = _parse_elements(cert.inputs["elements"])
    L = parse_operator(cert.result["L"])
    annihilator = AnnihilatorCertificate(tuple(a for a, _ in elements), (), L)
    return DensityObstructionCert(tuple(elements), annihilator, L).verify()


def _check_verify(cert: CertificateFile) -> bool:
    target = load_certificate(Path(cert.inputs["certificate"]))
    return verify_certificate(target) == cert.result["verified"]


CHECKERS: Dict[TaskName, Callable[[CertificateFile], bool]] = {
    TaskName.TELESCOPE: _check_telescope,
    TaskName.OBSTRUCT: _check_obstruct,
    TaskName.ANNIHILATE: _check_annihilate,
    TaskName.RESIDUES: _check_residues,
    TaskName.CHEVALLEY: _check_chevalley,
    TaskName.GROUP_CHECK: _check_group_check,
    TaskName.GROUP_GENERATORS: _check_group_generators,
    TaskName.DENSITY_OBSTRUCT: _check_density,
    TaskName.VERIFY: _check_verify,
}


# Public API

def load_problem(path: Path) -> ProblemFile:
    """
    Read and validate a problem file.

    Args:
        path: JSON problem file

    Returns:
        The validated ProblemFile

    Raises:
        ProblemFormatError: If the file is unreadable, not a JSON object, or invalid
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ProblemFormatError(f"cannot read problem file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ProblemFormatError(f"{path} does not hold a JSON object")
    try:
        return ProblemFile.model_validate(data)
    except ValidationError as e:
        raise ProblemFormatError(f"invalid problem file {path}: {e}") from e


def load_certificate(path: Path) -> CertificateFile:
    """
    Read and validate a certificate file.

    Args:
        path: JSON certificate file

    Returns:
        The validated CertificateFile

    Raises:
        ProblemFormatError: If the file is unreadable or invalid
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return CertificateFile.model_validate(data)
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise ProblemFormatError(f"invalid certificate file {path}: {e}") from e


def run_problem(problem: ProblemFile) -> CertificateFile:
    """Run the task and, unless disabled, re-verify the certificate from its own text."""
    logger.info("running task %s", problem.task.value)
    inputs, result = RUNNERS[problem.task](problem)
    cert = CertificateFile(
        task=problem.task,
        inputs=inputs,
        result=result,
        status=CertificateStatus.UNCHECKED,
        tool=TOOL_NAME,
        version=TOOL_VERSION,
    )
    if settings.verify_on_emit:
        ok = verify_certificate(cert)
        cert.status = CertificateStatus.VERIFIED if ok else CertificateStatus.FAILED
    return cert


def verify_certificate(cert: CertificateFile) -> bool:
    """Rebuild the claim from the certificate text and check it exactly."""
    try:
        ok = CHECKERS[cert.task](cert)
    except (CertifyError, IndexError, KeyError, TypeError, ValueError) as e:
        # unparsable or incomplete result fields count as a failed check
        logger.warning("certificate for %s could not be checked: %s", cert.task.value, e)
        return False
    logger.info("verify %s: %s", cert.task.value, "ok" if ok else "FAILED")
    return ok


def to_json(model) -> str:
    """Serialize a model with the configured indent; zero means one line."""
    indent = settings.json_indent or None
    return json.dumps(model.model_dump(mode="json"), indent=indent, ensure_ascii=False) + "\n"


def write_atomic(path: Path, text: str) -> None:
    """Write to a temporary file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
