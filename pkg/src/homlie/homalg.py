"""Hom-Lie algebras given by structure constants.

Indices are 1-based throughout, matching basis names ``x1 .. xn``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .errors import InputError
from .symcore import MultiPoly, PolyMatrix, Registry, _as_poly, _is_scalar, format_poly


@dataclass(frozen=True)
class Basis:
    names: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise InputError("a basis needs at least one vector")
        if len(set(self.names)) != len(self.names):
            raise InputError("basis names must be unique")

    @classmethod
    def default(cls, n: int) -> "Basis":
        return cls(tuple(f"x{i}" for i in range(1, n + 1)))

    @property
    def dim(self) -> int:
        return len(self.names)


class Vec:
    """Vector with polynomial coordinates in a fixed basis."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(_as_poly(c) for c in coords))

    def __setattr__(self, key, value):
        raise AttributeError("Vec is immutable")

    @classmethod
    def basis(cls, n: int, i: int) -> "Vec":
        if not 1 <= i <= n:
            raise InputError(f"basis index {i} out of range 1..{n}")
        return cls(1 if k == i else 0 for k in range(1, n + 1))

    @classmethod
    def zero(cls, n: int) -> "Vec":
        return cls([0] * n)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, k: int) -> MultiPoly:
        return self.coords[k]

    def _check(self, other: "Vec"):
        if not isinstance(other, Vec):
            raise TypeError("expected a Vec")
        if other.dim != self.dim:
            raise InputError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        self._check(other)
        return Vec(a + b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return Vec(-a for a in self.coords)

    def __sub__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        return self + (-other)

    def __mul__(self, s):
        if _is_scalar(s) or isinstance(s, MultiPoly):
            return Vec(a * s for a in self.coords)
        return NotImplemented

    __rmul__ = __mul__

    def __rmatmul__(self, m):
        if not isinstance(m, PolyMatrix):
            return NotImplemented
        if m.dim != self.dim:
            raise InputError(f"dimension mismatch: {m.dim} vs {self.dim}")
        out = []
        for row in m.rows:
            acc = MultiPoly.constant(0)
            for a, v in zip(row, self.coords):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return Vec(out)

    def __eq__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def substitute(self, bindings: Mapping) -> "Vec":
        return Vec(c.substitute(bindings) for c in self.coords)

    def evaluate(self, point: Mapping):
        return tuple(c.evaluate(point) for c in self.coords)

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or Basis.default(self.dim).names
        parts = []
        for c, x in zip(self.coords, names):
            if not c:
                continue
            if c.is_constant():
                k = c.constant_term()
                if k == 1:
                    parts.append(x)
                elif k == -1:
                    parts.append(f"-{x}")
                else:
                    parts.append(f"{k}*{x}")
            else:
                parts.append(f"({format_poly(c)})*{x}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Vec({[format_poly(c) for c in self.coords]!r})"


class LinMap(PolyMatrix):
    """Linear endomorphism; column ``j`` holds the image of basis vector ``j``."""

    __slots__ = ()

    def apply(self, v: Vec) -> Vec:
        return self @ v

    def image(self, j: int) -> Vec:
        return Vec(row[j - 1] for row in self.rows)


class BracketConstants:
    """Skew bilinear bracket stored by its constants ``c(i, j, k)`` for ``i < j``.

    ``[x_i, x_j] = sum_k c(i, j, k) x_k``.  Lower-triangle and diagonal values
    follow from skew-symmetry and are never stored.
    """

    __slots__ = ("dim", "_table")

    def __init__(self, dim: int, entries: Mapping[Tuple[int, int], Sequence] | None = None):
        if not isinstance(dim, int) or dim < 1:
            raise InputError("dimension must be a positive integer")
        table: Dict[Tuple[int, int], Tuple[MultiPoly, ...]] = {}
        for (i, j), coords in (entries or {}).items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise InputError(f"bracket index ({i}, {j}) out of range 1..{dim}")
            if i >= j:
                raise InputError(f"lower-triangle entry ({i}, {j}); specify i < j")
            coords = tuple(_as_poly(c) for c in coords)
            if len(coords) != dim:
                raise InputError(f"bracket ({i}, {j}) needs {dim} coordinates, got {len(coords)}")
            if any(coords):
                table[(i, j)] = coords
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_table", table)

    def __setattr__(self, key, value):
        raise AttributeError("BracketConstants is immutable")

    @classmethod
    def zero(cls, dim: int) -> "BracketConstants":
        return cls(dim)

    def lookup(self, i: int, j: int, k: int) -> MultiPoly:
        if i == j:
            return MultiPoly.constant(0)
        if i > j:
            return -self.lookup(j, i, k)
        coords = self._table.get((i, j))
        return coords[k - 1] if coords else MultiPoly.constant(0)

    def structure(self, i: int, j: int) -> Vec:
        """``[x_i, x_j]`` as a vector."""
        if i == j:
            return Vec.zero(self.dim)
        if i > j:
            return -self.structure(j, i)
        return Vec(self._table.get((i, j), (0,) * self.dim))

    def items(self):
        """Stored nonzero entries ``((i, j), coords)`` with ``i < j``, sorted."""
        return sorted(self._table.items())

    def __call__(self, u: Vec, v: Vec) -> Vec:
        return bracket_eval(self, u, v)

    def _map(self, fn) -> "BracketConstants":
        return BracketConstants(self.dim, {ij: fn(Vec(c)).coords for ij, c in self._table.items()})

    def __add__(self, other):
        if not isinstance(other, BracketConstants):
            return NotImplemented
        if other.dim != self.dim:
            raise InputError(f"dimension mismatch: {self.dim} vs {other.dim}")
        keys = set(self._table) | set(other._table)
        return BracketConstants(
            self.dim,
            {ij: (self.structure(*ij) + other.structure(*ij)).coords for ij in keys},
        )

    def __neg__(self):
        return self._map(lambda v: -v)

    def __sub__(self, other):
        if not isinstance(other, BracketConstants):
            return NotImplemented
        return self + (-other)

    def __mul__(self, s):
        if _is_scalar(s) or isinstance(s, MultiPoly):
            return self._map(lambda v: v * s)
        return NotImplemented

    __rmul__ = __mul__

    def __rmatmul__(self, m):
        """Post-compose the bracket with a linear map: ``(m ∘ [·,·])``."""
        if not isinstance(m, PolyMatrix):
            return NotImplemented
        if m.dim != self.dim:
            raise InputError(f"dimension mismatch: {m.dim} vs {self.dim}")
        return self._map(lambda v: m @ v)

    def substitute(self, bindings: Mapping) -> "BracketConstants":
        return self._map(lambda v: v.substitute(bindings))

    def __eq__(self, other):
        if not isinstance(other, BracketConstants):
            return NotImplemented
        return self.dim == other.dim and self._table == other._table

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self._table.items()))))

    def __bool__(self):
        return bool(self._table)

    def __repr__(self):
        body = ", ".join(f"[x{i},x{j}]={Vec(c)}" for (i, j), c in self.items())
        return f"BracketConstants({self.dim}: {body or '0'})"


def bracket_eval(b: BracketConstants, u: Vec, v: Vec) -> Vec:
    """Bilinear extension ``[u, v] = sum_{i<j} (u_i v_j - u_j v_i) [x_i, x_j]``."""
    n = b.dim
    if u.dim != n or v.dim != n:
        raise InputError(f"dimension mismatch: bracket {n}, vectors {u.dim}, {v.dim}")
    out = [MultiPoly.constant(0)] * n
    for (i, j), coords in b._table.items():
        w = u.coords[i - 1] * v.coords[j - 1] - u.coords[j - 1] * v.coords[i - 1]
        if not w:
            continue
        out = [o + w * c for o, c in zip(out, coords)]
    return Vec(out)


@dataclass(frozen=True)
class HomAlgebra:
    basis: Basis
    bracket: BracketConstants
    twist: LinMap

    def __post_init__(self):
        if not isinstance(self.twist, LinMap):
            object.__setattr__(self, "twist", LinMap(self.twist.rows))
        if self.bracket.dim != self.basis.dim or self.twist.dim != self.basis.dim:
            raise InputError("basis, bracket and twist dimensions differ")

    @property
    def dim(self) -> int:
        return self.basis.dim

    def x(self, i: int) -> Vec:
        return Vec.basis(self.dim, i)

    def with_twist(self, twist: PolyMatrix) -> "HomAlgebra":
        return HomAlgebra(self.basis, self.bracket, LinMap(twist.rows))


def sl2() -> HomAlgebra:
    """sl2 in the basis with ``[x1,x2] = 2x2, [x1,x3] = -2x3, [x2,x3] = x1``; twist = id."""
    bracket = BracketConstants(3, {
        (1, 2): (0, 2, 0),
        (1, 3): (0, 0, -2),
        (2, 3): (1, 0, 0),
    })
    return HomAlgebra(Basis.default(3), bracket, LinMap.identity(3))


def map_param_names(prefix: str, dim: int = 3) -> Tuple[str, ...]:
    """Row-major names of a generic ``dim x dim`` map: ``a11, a12, ...``."""
    sep = "" if dim <= 9 else "_"
    return tuple(f"{prefix}{i}{sep}{j}" for i in range(1, dim + 1) for j in range(1, dim + 1))


def generic_map(registry: Registry, prefix: str = "a", dim: int = 3) -> LinMap:
    """Matrix whose ``(i, j)`` entry is the parameter ``<prefix>ij``."""
    names = iter(map_param_names(prefix, dim))
    return LinMap([[registry.var(next(names)) for _ in range(dim)] for _ in range(dim)])


def bracket_param_names(names: Sequence[str] = ("p", "q", "r")) -> Tuple[str, ...]:
    return tuple(f"{s}{k}" for s in names for k in (1, 2, 3))


def generic_bracket(registry: Registry, names: Sequence[str] = ("p", "q", "r")) -> BracketConstants:
    """Most general skew bracket on a 3-dimensional space.

    ``[x1,x2] = p1 x1 + p2 x2 + p3 x3`` and likewise ``q`` for ``(1,3)``,
    ``r`` for ``(2,3)``.
    """
    if len(names) != 3:
        raise InputError("generic_bracket needs three name stems for the pairs (1,2), (1,3), (2,3)")
    pairs = ((1, 2), (1, 3), (2, 3))
    return BracketConstants(3, {
        ij: tuple(registry.var(f"{stem}{k}") for k in (1, 2, 3))
        for ij, stem in zip(pairs, names)
    })


def twisted_cyclic_sum(outer: BracketConstants, inner: BracketConstants,
                       twist: PolyMatrix | None, u: Vec, v: Vec, w: Vec) -> Vec:
    """``sum_cyc [twist(u), [v, w]_inner]_outer``; ``twist=None`` means identity."""
    def t(x):
        return x if twist is None else twist @ x

    return (outer(t(u), inner(v, w))
            + outer(t(v), inner(w, u))
            + outer(t(w), inner(u, v)))


def hom_jacobiator(A: HomAlgebra, u: Vec, v: Vec, w: Vec) -> Vec:
    return twisted_cyclic_sum(A.bracket, A.bracket, A.twist, u, v, w)


def jacobiator(b: BracketConstants, u: Vec, v: Vec, w: Vec) -> Vec:
    return twisted_cyclic_sum(b, b, None, u, v, w)


@dataclass(frozen=True)
class HomJacobiVerdict:
    holds: bool
    triple: Tuple[int, int, int] | None = None
    coordinate: int | None = None  # 1-based
    witness: MultiPoly | None = None

    def __bool__(self):
        return self.holds


def basis_triples(n: int):
    return combinations(range(1, n + 1), 3)


def check_hom_jacobi(A: HomAlgebra) -> HomJacobiVerdict:
    """Decide the Hom-Jacobi identity by checking every basis triple ``i < j < k``.

    Reports the first nonzero coordinate in lexicographic triple order.
    """
    n = A.dim
    for triple in basis_triples(n):
        res = hom_jacobiator(A, *(Vec.basis(n, i) for i in triple))
        for k, c in enumerate(res.coords, start=1):
            if c:
                return HomJacobiVerdict(False, triple, k, c)
    return HomJacobiVerdict(True)
