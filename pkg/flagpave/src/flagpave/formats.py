"""
File formats: pydantic models for quivers, representations, bound modules and reports.

Loading never lets a pydantic ``ValidationError`` or a JSON decode error escape;
both are reported as ``InputFormatError`` with the offending location.
"""

import json
import os
from fractions import Fraction
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import DimensionMismatchError, InputFormatError
from .exactlinalg import GF, QQ, Field as ScalarField
from .extended import BoundModule, ExtendedQuiver, build_extended
from .quiver import Quiver
from .rep import Representation

KNOWLEDGE_DIR = os.path.join(os.path.dirname(__file__), "..", "..", "knowledge", "quivers")

Scalar = Union[int, str]


class ArrowModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    id: str = Field(..., description="Arrow id, unique within the quiver")
    source: str = Field(..., alias="from", description="Tail vertex")
    target: str = Field(..., alias="to", description="Head vertex")


class QuiverFile(BaseModel):
    """{"vertices": [...], "arrows": [{"id", "from", "to"}]}"""

    name: str = Field("", description="Display name; defaults to the file stem")
    vertices: list[str] = Field(..., description="Vertex ids in the order used by dimension vectors")
    arrows: list[ArrowModel] = Field(default_factory=list, description="Arrows of the quiver")
    note: Optional[str] = Field(None, description="Free-form provenance of the orientation")

    def to_quiver(self) -> Quiver:
        try:
            return Quiver(tuple(self.vertices), tuple((a.id, a.source, a.target) for a in self.arrows), name=self.name)
        except ValueError as exc:
            raise InputFormatError(f"invalid quiver: {exc}")

    @classmethod
    def from_quiver(cls, q: Quiver) -> "QuiverFile":
        return cls.model_validate({"name": q.name, **q.to_dict()})


def _parse_scalar(value: Scalar) -> Fraction:
    try:
        return Fraction(value) if isinstance(value, int) else Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{value!r} is not an integer or a p/q rational")


class RepresentationFile(BaseModel):
    """A representation: dimensions keyed by vertex and one row-major matrix per arrow."""

    quiver: Optional[str] = Field(None, description="Quiver file path or bundled quiver name")
    dims: dict[str, int] = Field(..., description="Dimension at each vertex")
    maps: dict[str, list[list[Scalar]]] = Field(default_factory=dict, description="Matrix per arrow id, as rows")
    modulus: Optional[int] = Field(None, description="Read the entries in F_p instead of the rationals")

    @field_validator("dims")
    @classmethod
    def _nonnegative(cls, value: dict[str, int]) -> dict[str, int]:
        for vertex, n in value.items():
            if n < 0:
                raise ValueError(f"negative dimension at {vertex}")
        return value

    @field_validator("maps")
    @classmethod
    def _scalars(cls, value: dict[str, list[list[Scalar]]]) -> dict[str, list[list[Scalar]]]:
        for rows in value.values():
            for row in rows:
                for entry in row:
                    _parse_scalar(entry)
        return value

    def field(self) -> ScalarField:
        return GF(self.modulus) if self.modulus else QQ

    def _matrices(self) -> dict[str, list[list[Fraction]]]:
        return {arrow: [[_parse_scalar(x) for x in row] for row in rows] for arrow, rows in self.maps.items()}

    def _dims_in(self, vertices: tuple[str, ...]) -> tuple[int, ...]:
        unknown = set(self.dims) - set(vertices)
        if unknown:
            raise InputFormatError(f"dims: unknown vertices {sorted(unknown)}")
        return tuple(self.dims.get(v, 0) for v in vertices)

    def to_representation(self, q: Quiver) -> Representation:
        unknown = set(self.maps) - {a.id for a in q.arrows}
        if unknown:
            raise InputFormatError(f"maps: unknown arrows {sorted(unknown)}")
        try:
            return Representation.from_matrices(q, self.field(), self._dims_in(q.vertices), self._matrices())
        except DimensionMismatchError as exc:
            raise InputFormatError(f"maps: {exc}")

    @classmethod
    def from_representation(cls, m: Representation) -> "RepresentationFile":
        q = m.quiver
        return cls(
            quiver=q.name or None,
            dims={v: n for v, n in zip(q.vertices, m.dims)},
            maps={a.id: [[str(x) for x in row] for row in mat.to_rows()] for a, mat in zip(q.arrows, m.maps)},
            modulus=m.field.characteristic or None,
        )


class BoundModuleFile(RepresentationFile):
    """A module over the bound extended quiver, keyed by "vertex:level" and extended arrow ids."""

    d: int = Field(..., description="Depth of the extended quiver")
    strict: bool = Field(False, description="Use the strict extended quiver")

    def to_module(self, q: Quiver) -> BoundModule:
        eq: ExtendedQuiver = build_extended(q, self.d, self.strict)
        unknown = set(self.maps) - {a.id for a in eq.arrows}
        if unknown:
            raise InputFormatError(f"maps: unknown arrows {sorted(unknown)}")
        try:
            module = BoundModule.build(eq, self.field(), self._dims_in(eq.vertices), self._matrices())
        except DimensionMismatchError as exc:
            raise InputFormatError(f"maps: {exc}")
        return module.checked()


class CountingRecordModel(BaseModel):
    quiver: str = Field(..., description="Quiver name")
    rep: str = Field("", description="Module label")
    d: int = Field(..., description="Flag length")
    strict: bool = Field(False, description="Strict flags")
    f: list[int] = Field(..., description="Extended dimension vector, level-major")
    p: int = Field(..., description="Prime")
    count: int = Field(..., description="|Gr_f(Phi(M))| over F_p")
    polynomial: Optional[list[int]] = Field(None, description="Interpolated coefficients, lowest first")


class StratumModel(BaseModel):
    f: list[int]
    g: list[int]
    rank: int
    cells: dict[str, int]
    image: str


class TrailEntryModel(BaseModel):
    piece: str
    rule: str
    detail: str = ""


class UnresolvedModel(BaseModel):
    piece: str
    reason: str
    trail: list[TrailEntryModel] = Field(default_factory=list)


class VerificationModel(BaseModel):
    primes: list[int]
    brute: list[int]
    evaluated: list[Optional[int]]
    recursive: list[Optional[int]]
    match: list[bool]


class PavingResultModel(BaseModel):
    f: list[int]
    cells: Optional[dict[str, int]] = None
    polynomial: Optional[list[int]] = None
    unresolved: Optional[UnresolvedModel] = None
    verification: VerificationModel
    strata: list[StratumModel] = Field(default_factory=list)


class PavingInputModel(BaseModel):
    quiver: str
    type: str
    module: str
    dims: list[int]
    d: int
    strict: bool


class PavingReportModel(BaseModel):
    input: PavingInputModel
    results: list[PavingResultModel]
    trail: list[TrailEntryModel] = Field(default_factory=list)
    ok: bool


class ARNodeModel(BaseModel):
    root: list[int]
    label: str
    position: tuple[str, int]
    projective: bool
    injective: bool
    ord_e: Optional[int] = None


class ARArrowModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    source: list[int] = Field(..., alias="from")
    target: list[int] = Field(..., alias="to")
    multiplicity: int = 1


class ARTranslationModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    source: list[int] = Field(..., alias="from")
    target: list[int] = Field(..., alias="to")


class ARQuiverModel(BaseModel):
    quiver: str
    type: str
    nodes: list[ARNodeModel]
    arrows: list[ARArrowModel]
    translation: list[ARTranslationModel]


# loading


def _format_validation(exc: ValidationError, source: str) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(x) for x in err.get("loc", ()))
        parts.append(f"{loc or '<root>'}: {err.get('msg', 'invalid')}")
    return f"{source}: " + "; ".join(parts)


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise InputFormatError(f"{path}: no such file")
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")


def _validated(model: type[BaseModel], data, source: str):
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise InputFormatError(_format_validation(exc, source))


def resolve_quiver_path(name_or_path: str) -> str:
    """A file path as given, or a bundled quiver name such as ``e6_ar``."""
    if os.path.exists(name_or_path):
        return name_or_path
    stem = name_or_path[:-5] if name_or_path.endswith(".json") else name_or_path
    bundled = os.path.abspath(os.path.join(KNOWLEDGE_DIR, f"{stem}.json"))
    if os.path.exists(bundled):
        return bundled
    raise InputFormatError(f"{name_or_path}: neither a file nor a bundled quiver ({', '.join(bundled_quivers())})")


def bundled_quivers() -> list[str]:
    folder = os.path.abspath(KNOWLEDGE_DIR)
    if not os.path.isdir(folder):
        return []
    return sorted(name[:-5] for name in os.listdir(folder) if name.endswith(".json"))


def load_quiver(name_or_path: str) -> Quiver:
    path = resolve_quiver_path(name_or_path)
    model = _validated(QuiverFile, _read_json(path), path)
    if not model.name:
        model.name = os.path.splitext(os.path.basename(path))[0]
    return model.to_quiver()


def parse_quiver(data: dict, name: str = "") -> Quiver:
    model = _validated(QuiverFile, data, name or "quiver")
    if name and not model.name:
        model.name = name
    return model.to_quiver()


def load_representation(path: str, q: Optional[Quiver] = None) -> Representation:
    model = _validated(RepresentationFile, _read_json(path), path)
    if q is None:
        if model.quiver is None:
            raise InputFormatError(f"{path}: no quiver given in the file or on the command line")
        q = load_quiver(model.quiver)
    return model.to_representation(q)


def load_bound_module(path: str, q: Optional[Quiver] = None) -> BoundModule:
    model = _validated(BoundModuleFile, _read_json(path), path)
    if q is None:
        if model.quiver is None:
            raise InputFormatError(f"{path}: no quiver given in the file or on the command line")
        q = load_quiver(model.quiver)
    return model.to_module(q)


def parse_dimvec(text: str, length: Optional[int] = None) -> tuple[int, ...]:
    """Comma separated nonnegative integers, e.g. "1,2,1,1"."""
    try:
        values = tuple(int(part) for part in text.replace(" ", "").split(",") if part != "")
    except ValueError:
        raise InputFormatError(f"{text!r} is not a comma separated list of integers")
    if any(v < 0 for v in values):
        raise InputFormatError(f"{text!r} has a negative entry")
    if length is not None and len(values) != length:
        raise InputFormatError(f"{text!r} has {len(values)} entries, expected {length}")
    return values


def check_report(report: dict) -> PavingReportModel:
    """Validate a paving report dict against its schema."""
    return _validated(PavingReportModel, report, "paving report")
