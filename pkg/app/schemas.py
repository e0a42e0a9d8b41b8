from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

# ============ INPUT SCHEMAS ============

class ArrowSpec(BaseModel):
    """One arrow line of the input"""
    name: str = Field(..., min_length=1, description="Arrow name")
    source: str = Field(..., min_length=1)
    target: str = Field(..., min_length=1)
    degree: int = Field(1, description="Positive degree of the arrow")
    line: Optional[int] = None


class RelationSpec(BaseModel):
    """A relation as (coefficient, word) pairs; coefficients are written a/b"""
    terms: List[List[Any]] = Field(..., description="[coefficient, [arrow, ...]] pairs")
    line: Optional[int] = None


class PresentationSpec(BaseModel):
    """Quiver, relations, field and truncation"""
    field: str = "Q"
    vertices: List[str] = Field(default_factory=list)
    arrows: List[ArrowSpec] = Field(default_factory=list)
    relations: List[RelationSpec] = Field(default_factory=list)
    truncation: int = Field(8, ge=1, description="Truncation degree N")


class JobSpec(BaseModel):
    """Everything one invocation needs"""
    presentation: PresentationSpec
    order: Optional[List[List[str]]] = Field(None, description="Classes in ascending order")
    order_line: Optional[int] = None
    depth: int = Field(6, ge=1, description="Homological depth L")
    command: str = "classify"
    output: Optional[str] = None

# ============ REPORT SCHEMAS ============

class LayerReport(BaseModel):
    """A layer X(vertex)<shift> of a filtration"""
    kind: str
    vertex: str
    shift: int
    reliable: bool = True
    label: str


class FiltrationReportOut(BaseModel):
    label: str
    status: str
    layers: List[LayerReport] = Field(default_factory=list)
    boundary_layers: List[LayerReport] = Field(default_factory=list)
    diagnosis: List[str] = Field(default_factory=list)


class ModuleOut(BaseModel):
    """Graded dimensions of a module in its window"""
    label: str
    lo: int
    hi: int
    lo_exact: bool
    hi_exact: bool
    dims: Dict[str, List[int]] = Field(..., description="Per vertex, dimensions in degrees lo..hi")


class ComplexTermOut(BaseModel):
    position: int
    summands: List[str]


class ComplexOut(BaseModel):
    label: str
    terms: List[ComplexTermOut]
    linear: Optional[bool] = None
    complete: bool = True


class ExtTableOut(BaseModel):
    """Nonzero ext^i(M, N<k>) cells"""
    source: str
    target: str
    cells: List[Dict[str, Any]] = Field(default_factory=list)


class AlgebraOut(BaseModel):
    """A computed algebra in the input format, with its graded Cartan matrices"""
    name: str
    presentation: str
    order: str
    reliable_degree: int
    cartan: List[List[List[int]]]
    mismatches: List[str] = Field(default_factory=list)


class Report(BaseModel):
    """Top-level document written by every command"""
    schema_version: str
    command: str
    status: str = Field(..., description="computed, violated, undetermined or error")
    exit_code: int
    truncation: Optional[int] = None
    depth: Optional[int] = None
    field: Optional[str] = None
    summary: List[str] = Field(default_factory=list)
    detail: Optional[str] = None
    data: Dict[str, Any] = Field(default_factory=dict)
