"""JSON manifests describing an algebroid, connections and optional candidate data.

Polynomial leaves are strings in the chart coordinates.  Indices in keys
("1,2" for a bracket or a wedge) are 1-based, as in the printed output.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .algebroid import ChartAlgebroid, Connection
from .errors import LieRuthError, ManifestError
from .graded import Element
from .symcore import Poly, parse_poly


@dataclass
class Manifest:
    raw: dict
    algebroid: ChartAlgebroid
    connections: List[Connection]
    representations: Dict[str, dict] = field(default_factory=dict)
    sigma: Optional[list] = None
    kdiff: Optional[dict] = None
    extension: Optional[dict] = None

    @property
    def digest(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def parse_leaf(text, variables, block) -> Poly:
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        text = str(text)
    if not isinstance(text, str):
        raise ManifestError(f"expected a polynomial string, got {text!r}", block)
    try:
        return parse_poly(text, variables)
    except LieRuthError as exc:
        raise ManifestError(f"{exc} in {text!r}", block) from None


def _pair(key: str, block: str):
    try:
        parts = [int(x) for x in key.split(",")]
    except ValueError:
        raise ManifestError(f"key {key!r} is not of the form 'i,j'", block) from None
    return parts


def _matrix(value, rows, cols, variables, block):
    if not isinstance(value, list) or len(value) != rows:
        raise ManifestError(f"expected {rows} rows", block)
    out = []
    for n, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            raise ManifestError(f"row {n + 1} must have {cols} entries", block)
        out.append([parse_leaf(x, variables, f"{block}[{n + 1}]") for x in row])
    return out


def _connection(value, A: ChartAlgebroid, block: str) -> Connection:
    """Γ as ``{"a": [[Γ^1_{a1}, ..], ..]}`` keyed by coordinate name, rows i, columns j."""
    if not isinstance(value, dict):
        raise ManifestError("a connection maps coordinate names to r×r matrices Γ^i_{aj}", block)
    v = A.coordinates
    unknown = [k for k in value if k not in v]
    if unknown:
        raise ManifestError(f"unknown coordinate {unknown[0]!r}", block)
    gamma = []
    for a, x in enumerate(v):
        if x in value:
            gamma.append(_matrix(value[x], A.r, A.r, v, f"{block}.{x}"))
        else:
            gamma.append([[A.zero()] * A.r for _ in range(A.r)])
    return Connection(A, gamma)


def multivector(value, A: ChartAlgebroid, block: str) -> Element:
    """``{"1,2": "x", "": "1"}``: wedge-index keys (1-based) to coefficients."""
    alg = A.multivector_algebra()
    if not isinstance(value, dict):
        raise ManifestError("a multivector maps wedge indices like '1,2' to coefficients", block)
    out = alg.zero()
    for key, coeff in value.items():
        idx = [] if key == "" else _pair(key, block)
        if any(not 1 <= i <= A.r for i in idx):
            raise ManifestError(f"index out of range in {key!r}", block)
        out = out + alg.monomial([i - 1 for i in idx], parse_leaf(coeff, A.coordinates, block))
    return out


def load_manifest(data) -> Manifest:
    if not isinstance(data, dict):
        raise ManifestError("the manifest must be a JSON object")
    chart = data.get("chart", [])
    if not isinstance(chart, list) or not all(isinstance(x, str) for x in chart):
        raise ManifestError("chart must be a list of coordinate names", "chart")
    if "rank" not in data or not isinstance(data["rank"], int) or data["rank"] < 0:
        raise ManifestError("rank must be a non-negative integer", "rank")
    m, r = len(chart), data["rank"]
    anchor = data.get("anchor")
    if anchor is None:
        anchor = [["0"] * m for _ in range(r)]
    anchor = _matrix(anchor, r, m, chart, "anchor")
    brackets = {}
    for key, values in (data.get("brackets") or {}).items():
        idx = _pair(key, "brackets")
        if len(idx) != 2 or not (1 <= idx[0] < idx[1] <= r):
            raise ManifestError(f"bracket key {key!r} must be 'i,j' with 1 ≤ i < j ≤ {r}", "brackets")
        if not isinstance(values, list) or len(values) != r:
            raise ManifestError(f"bracket [{key}] needs {r} components", "brackets")
        brackets[(idx[0] - 1, idx[1] - 1)] = [parse_leaf(x, chart, f"brackets.{key}") for x in values]
    try:
        A = ChartAlgebroid.from_brackets(chart, r, anchor=anchor, brackets=brackets,
                                         name=data.get("name", ""))
    except LieRuthError as exc:
        raise ManifestError(str(exc), "brackets") from None
    conns = []
    if "connection" in data:
        conns.append(_connection(data["connection"], A, "connection"))
    for n, value in enumerate(data.get("connections") or []):
        conns.append(_connection(value, A, f"connections[{n + 1}]"))
    reps = data.get("representations") or {}
    if not isinstance(reps, dict):
        raise ManifestError("representations must map names to blocks", "representations")
    sigma = data.get("sigma")
    if sigma is not None:
        sigma = _matrix(sigma, r, m, chart, "sigma")
    return Manifest(data, A, conns, dict(reps), sigma, data.get("kdiff"), data.get("extension"))


def read_manifest(path: str) -> Manifest:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise ManifestError(f"cannot read {path}: {exc.strerror}") from None
    return load_manifest(data)
