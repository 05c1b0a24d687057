"""
Core data models for problem files, certificate files and group descriptions.

Mathematical values cross this boundary as canonical expression strings.
"""

from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TaskName(str, Enum):
    TELESCOPE = "telescope"
    OBSTRUCT = "obstruct"
    ANNIHILATE = "annihilate"
    RESIDUES = "residues"
    CHEVALLEY = "chevalley"
    GROUP_CHECK = "group-check"
    GROUP_GENERATORS = "group-generators"
    DENSITY_OBSTRUCT = "density-obstruct"
    VERIFY = "verify"


class CertificateStatus(str, Enum):
    VERIFIED = "verified"
    FAILED = "failed"
    UNCHECKED = "unchecked"


# Group descriptions

class AbstractSemisimple(BaseModel):
    """A simple factor with no matrix realization in the catalog."""
    model_config = ConfigDict(extra="forbid")

    abstract: str = Field(..., min_length=1, description="Free-form tag, e.g. 'G2'")


SemisimpleFactor = Union[Literal["SL2", "SL3"], AbstractSemisimple]


class UnipotentModule(BaseModel):
    """One summand of the commutativized unipotent radical."""
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(..., ge=1, description="Dimension of the summand")
    action: Literal["trivial", "irreducible"] = Field(
        "irreducible", description="Trivial or irreducible nontrivial action of the Levi factor"
    )
    weight: Optional[str] = Field(None, description="Weight tag such as 'V_2' for SL2 modules")
    factor: int = Field(0, ge=0, description="Index of the semisimple factor that acts")

    def weight_degree(self) -> Optional[int]:
        """d for a 'V_d' tag."""
        if self.weight is None:
            return None
        if not self.weight.startswith("V_") or not self.weight[2:].isdigit():
            raise ValueError(f"weight tag must look like V_d, got {self.weight!r}")
        return int(self.weight[2:])


class AlgebraicIdentity(BaseModel):
    """Levi data of an algebraic identity component."""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["algebraic"] = "algebraic"
    semisimple: List[SemisimpleFactor] = Field(default_factory=list)
    torus_rank: int = Field(0, ge=0, description="Rank of the central torus")
    modules: List[UnipotentModule] = Field(default_factory=list)
    radical_commutative: bool = Field(True, description="Whether the unipotent radical is commutative")

    @model_validator(mode="after")
    def check_modules(self) -> "AlgebraicIdentity":
        for index, module in enumerate(self.modules):
            if module.action == "trivial" or not self.semisimple:
                continue
            if module.factor >= len(self.semisimple):
                raise ValueError(f"module {index} refers to missing factor {module.factor}")
            d = module.weight_degree()
            if d is not None and self.semisimple[module.factor] == "SL2" and module.dim != d + 1:
                raise ValueError(f"module {index}: V_{d} has dimension {d + 1}, not {module.dim}")
        return self


class DiffCatalogIdentity(BaseModel):
    """The differential algebraic groups of lower-triangular 2x2 matrices."""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["differential"] = "differential"
    variant: Literal["lower-triangular", "lower-triangular-prime"]


class GroupDesc(BaseModel):
    """A linear algebraic group given by its component count and identity component."""

    components: int = Field(1, ge=1, description="Order of G/G0")
    identity: Union[AlgebraicIdentity, DiffCatalogIdentity] = Field(..., discriminator="kind")

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "components": 1,
                "identity": {
                    "kind": "algebraic",
                    "semisimple": ["SL2"],
                    "torus_rank": 0,
                    "modules": [{"dim": 3, "action": "irreducible", "weight": "V_2"}],
                },
            }
        },
    )

    @model_validator(mode="before")
    @classmethod
    def lift_flat_form(cls, data: Any) -> Any:
        """Accept {"semisimple": [...], ...} or {"variant": ...} without the identity wrapper."""
        if not isinstance(data, dict) or "identity" in data:
            return data
        data = dict(data)
        components = data.pop("components", 1)
        if "variant" in data:
            data.setdefault("kind", "differential")
        else:
            data.setdefault("kind", "algebraic")
        return {"components": components, "identity": data}


class QuotientKind(str, Enum):
    NONE = "none"
    GM = "Gm-quotient"
    GA = "Ga-quotient"


class QuotientVerdict(BaseModel):
    """Result of the Ga/Gm quotient test."""
    verdict: QuotientKind
    witness: Optional[str] = Field(None, description="'torus' or 'module <index>'")
    reductions: List[str] = Field(default_factory=list, description="Reductions applied first")


# Files

class LowerTriangularGenerator(BaseModel):
    """[[1, 0], [a, b]] with a in Q(t) and b a nonzero rational."""
    a: str = Field(..., description="Lower-left entry, an expression in t")
    b: str = Field(..., description="Diagonal entry, a nonzero rational")


class ProblemOptions(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    M: Optional[int] = Field(None, ge=0, description="Operator order bound override")
    N: Optional[int] = Field(None, ge=0, description="Ansatz degree bound override")
    output: Optional[str] = Field(None, description="Certificate path")


_REQUIRED: Dict[TaskName, List[str]] = {
    TaskName.TELESCOPE: ["f"],
    TaskName.RESIDUES: ["f"],
    TaskName.CHEVALLEY: ["f"],
    TaskName.OBSTRUCT: ["A", "B"],
    TaskName.ANNIHILATE: ["alphas"],
    TaskName.GROUP_CHECK: ["group"],
    TaskName.GROUP_GENERATORS: ["group"],
    TaskName.DENSITY_OBSTRUCT: ["elements"],
    TaskName.VERIFY: ["certificate"],
}


class ProblemFile(BaseModel):
    """A single task with its payload."""

    task: TaskName
    f: Optional[str] = Field(None, description="Rational function in x and t")
    A: Optional[str] = Field(None, description="d_x(w')/w'")
    B: Optional[str] = Field(None, description="d_t(w')/w'")
    alphas: Optional[List[str]] = Field(None, description="Rational functions in t")
    group: Optional[GroupDesc] = None
    elements: Optional[List[LowerTriangularGenerator]] = None
    certificate: Optional[str] = Field(None, description="Path of a certificate to re-check")
    options: ProblemOptions = Field(default_factory=ProblemOptions)

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={"example": {"task": "telescope", "f": "1/(x-t)"}},
    )

    @model_validator(mode="after")
    def check_payload(self) -> "ProblemFile":
        missing = [name for name in _REQUIRED[self.task] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"task {self.task.value} needs {', '.join(missing)}")
        return self


class CertificateFile(BaseModel):
    """Output of one task; field order is fixed so output is byte-stable."""

    task: TaskName
    inputs: Dict[str, Any] = Field(..., description="Canonical echo of the inputs")
    result: Dict[str, Any] = Field(..., description="Task results as canonical strings")
    status: CertificateStatus
    tool: str
    version: str

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "task": "telescope",
                "inputs": {"f": "1/(x - t)"},
                "result": {"L": "Dt^1", "g": "-1/(x - t)"},
                "status": "verified",
                "tool": "ppv-certify",
                "version": "0.1.0",
            }
        }
    )


class ErrorReport(BaseModel):
    """Machine-readable refusal written instead of a certificate."""
    task: Optional[TaskName] = None
    error: Dict[str, Any]
    tool: str
    version: str
