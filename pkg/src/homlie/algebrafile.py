"""JSON description files for algebras and deformations.

Schema (indices 1-based)::

    {
      "dim": 3,
      "basis": ["x1", "x2", "x3"],
      "params": ["a11", ...],          # registry order
      "truncation": 2,
      "brackets": [{"order": 0, "entries": [[1, 2, ["0", "2", "0"]], ...]}],
      "maps": [{"order": 0, "matrix": [["1", "0", "0"], ...]}]
    }

Map matrices are row-major: ``matrix[i][j]`` is the coefficient of
``x_{i+1}`` in the image of ``x_{j+1}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Dict, Tuple

from .deform import Deformation
from .errors import InputError
from .exprparse import parse_poly
from .homalg import Basis, BracketConstants, LinMap
from .symcore import MultiPoly, Registry

FIELDS = ("dim", "basis", "params", "truncation", "brackets", "maps")
FIXTURES = ("sl2.json", "sl2_with_generic_alpha.json", "sl2_paper_deformation.json",
            "sl2_counterexample.json")


class AlgebraFileError(InputError):
    def __init__(self, location: str, message: str):
        self.location = location
        self.message = message
        super().__init__(f"{location}: {message}" if location else message)


@dataclass(frozen=True)
class AlgebraFile:
    dim: int
    basis: Basis
    registry: Registry
    truncation: int
    brackets: Tuple[Tuple[int, BracketConstants], ...]
    maps: Tuple[Tuple[int, LinMap], ...]

    def to_deformation(self) -> Deformation:
        """Orders not listed are zero; with no maps at all, alpha_0 = id."""
        b = dict(self.brackets)
        m = dict(self.maps) or {0: LinMap.identity(self.dim)}
        bracket_orders = tuple(b.get(k, BracketConstants.zero(self.dim)) for k in range(max(b, default=0) + 1))
        map_orders = tuple(m.get(k, LinMap.zero(self.dim)) for k in range(max(m) + 1))
        return Deformation(self.basis, bracket_orders, map_orders, self.truncation)

    @classmethod
    def from_deformation(cls, d: Deformation, registry: Registry | None = None) -> "AlgebraFile":
        reg = registry or d.registry() or Registry()
        return cls(d.dim, d.basis, reg, d.truncation_order,
                   tuple(enumerate(d.bracket_orders)), tuple(enumerate(d.map_orders)))


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture."""
    return Path(str(resources.files("homlie") / "data" / name))


def _require(cond: bool, where: str, message: str):
    if not cond:
        raise AlgebraFileError(where, message)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _expr(src, registry: Registry, where: str) -> MultiPoly:
    _require(isinstance(src, str), where, "expression must be a string")
    try:
        return parse_poly(src, registry)
    except InputError as exc:
        raise AlgebraFileError(where, str(exc)) from None


def from_dict(doc) -> AlgebraFile:
    _require(isinstance(doc, dict), "", "top level must be a JSON object")
    missing = [f for f in FIELDS if f not in doc]
    _require(not missing, "", f"missing field(s): {', '.join(missing)}")
    extra = sorted(set(doc) - set(FIELDS))
    _require(not extra, "", f"unknown field(s): {', '.join(extra)}")

    dim = doc["dim"]
    _require(_is_int(dim) and dim >= 1, "dim", "must be a positive integer")
    names = doc["basis"]
    _require(isinstance(names, list) and len(names) == dim
             and all(isinstance(n, str) for n in names), "basis", f"must list {dim} names")
    try:
        basis = Basis(tuple(names))
    except InputError as exc:
        raise AlgebraFileError("basis", str(exc)) from None
    params = doc["params"]
    _require(isinstance(params, list), "params", "must be a list of names")
    try:
        registry = Registry(params)
    except InputError as exc:
        raise AlgebraFileError("params", str(exc)) from None
    N = doc["truncation"]
    _require(_is_int(N) and N >= 1, "truncation", "must be an integer >= 1")

    brackets: Dict[int, BracketConstants] = {}
    _require(isinstance(doc["brackets"], list), "brackets", "must be a list")
    for b_idx, block in enumerate(doc["brackets"]):
        where = f"brackets[{b_idx}]"
        _require(isinstance(block, dict) and set(block) == {"order", "entries"}, where,
                 "needs exactly the keys 'order' and 'entries'")
        order = block["order"]
        _require(_is_int(order) and 0 <= order < N, f"{where}.order", f"must be in 0..{N - 1}")
        _require(order not in brackets, f"{where}.order", f"duplicate bracket order {order}")
        _require(isinstance(block["entries"], list), f"{where}.entries", "must be a list")
        table = {}
        for e_idx, entry in enumerate(block["entries"]):
            ew = f"{where}.entries[{e_idx}]"
            _require(isinstance(entry, list) and len(entry) == 3, ew, "must be [i, j, [exprs]]")
            i, j, exprs = entry
            _require(_is_int(i) and _is_int(j), ew, "indices must be integers")
            _require(1 <= i <= dim and 1 <= j <= dim, ew, f"index out of range 1..{dim}")
            _require(i != j, ew, "diagonal entry; brackets [x, x] are zero")
            _require(i < j, ew, "lower-triangle entry; specify i < j")
            _require((i, j) not in table, ew, f"duplicate bracket entry ({i}, {j})")
            _require(isinstance(exprs, list) and len(exprs) == dim, ew, f"needs {dim} expressions")
            table[(i, j)] = tuple(_expr(s, registry, f"{ew}[2][{k}]") for k, s in enumerate(exprs))
        brackets[order] = BracketConstants(dim, table)

    maps: Dict[int, LinMap] = {}
    _require(isinstance(doc["maps"], list), "maps", "must be a list")
    for m_idx, block in enumerate(doc["maps"]):
        where = f"maps[{m_idx}]"
        _require(isinstance(block, dict) and set(block) == {"order", "matrix"}, where,
                 "needs exactly the keys 'order' and 'matrix'")
        order = block["order"]
        _require(_is_int(order) and 0 <= order < N, f"{where}.order", f"must be in 0..{N - 1}")
        _require(order not in maps, f"{where}.order", f"duplicate map order {order}")
        matrix = block["matrix"]
        _require(isinstance(matrix, list) and len(matrix) == dim
                 and all(isinstance(r, list) and len(r) == dim for r in matrix),
                 f"{where}.matrix", f"must be {dim}x{dim}")
        maps[order] = LinMap([[_expr(s, registry, f"{where}.matrix[{i}][{j}]")
                               for j, s in enumerate(row)] for i, row in enumerate(matrix)])

    return AlgebraFile(dim, basis, registry, N, tuple(sorted(brackets.items())),
                       tuple(sorted(maps.items())))


def loads(text: str) -> AlgebraFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(f"line {exc.lineno} column {exc.colno}", f"invalid JSON: {exc.msg}") from None
    return from_dict(doc)


def load(path) -> AlgebraFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise AlgebraFileError(str(path), "no such file") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise AlgebraFileError(str(path), f"cannot read: {exc}") from None
    try:
        return loads(text)
    except AlgebraFileError as exc:
        where = f"{path}: {exc.location}" if exc.location else str(path)
        raise AlgebraFileError(where, exc.message) from None


def to_dict(af: AlgebraFile) -> dict:
    brackets = []
    for order, b in af.brackets:
        brackets.append({"order": order,
                         "entries": [[i, j, [str(c) for c in coords]] for (i, j), coords in b.items()]})
    maps = [{"order": order, "matrix": [[str(c) for c in row] for row in m.rows]}
            for order, m in af.maps]
    return {
        "dim": af.dim,
        "basis": list(af.basis.names),
        "params": list(af.registry.names),
        "truncation": af.truncation,
        "brackets": brackets,
        "maps": maps,
    }


def dumps(af: AlgebraFile) -> str:
    return json.dumps(to_dict(af), indent=2) + "\n"


def save(af: AlgebraFile, path) -> None:
    Path(path).write_text(dumps(af), encoding="utf-8")
