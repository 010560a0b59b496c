"""One-parameter deformations and their expansion in powers of t.

A :class:`Deformation` carries ``[·,·]_t = sum_i t^i [·,·]_i`` and
``alpha_t = sum_i t^i alpha_i`` together with a truncation order ``N``.
Expansions of the (Hom-)Jacobi identity are computed as full polynomials in
``t``; ``N`` only matters for untwisting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Mapping, Tuple

from .errors import InputError, NotUnipotent
from .homalg import (
    Basis,
    BracketConstants,
    HomAlgebra,
    LinMap,
    Vec,
    basis_triples,
    twisted_cyclic_sum,
)
from .symcore import MultiPoly, PolyMatrix, PolySeries


@dataclass(frozen=True)
class Deformation:
    basis: Basis
    bracket_orders: Tuple[BracketConstants, ...]
    map_orders: Tuple[LinMap, ...]
    truncation_order: int = 2

    def __post_init__(self):
        brackets = tuple(self.bracket_orders)
        maps = tuple(m if isinstance(m, LinMap) else LinMap(m.rows) for m in self.map_orders)
        object.__setattr__(self, "bracket_orders", brackets)
        object.__setattr__(self, "map_orders", maps)
        N = self.truncation_order
        if not isinstance(N, int) or N < 1:
            raise InputError("truncation order must be an integer >= 1")
        if not brackets or not maps:
            raise InputError("a deformation needs at least one bracket order and one map order")
        if len(brackets) > N or len(maps) > N:
            raise InputError(f"more orders than the truncation order {N} allows")
        n = self.basis.dim
        if any(b.dim != n for b in brackets) or any(m.dim != n for m in maps):
            raise InputError("all orders must match the basis dimension")

    @classmethod
    def from_algebra(cls, A: HomAlgebra, truncation_order: int = 2) -> "Deformation":
        return cls(A.basis, (A.bracket,), (A.twist,), truncation_order)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def algebra(self, order: int = 0) -> HomAlgebra:
        """``(V, [·,·]_0, alpha_order)``; the map is zero past the stored orders."""
        twist = self.map_orders[order] if order < len(self.map_orders) else LinMap.zero(self.dim)
        return HomAlgebra(self.basis, self.bracket_orders[0], twist)

    def bracket_series(self) -> PolySeries:
        return PolySeries(self.bracket_orders, self.truncation_order)

    def map_series(self) -> PolySeries:
        return PolySeries(self.map_orders, self.truncation_order)

    def max_degree(self) -> int:
        """Largest power of t that can appear in the Hom-Jacobi expansion."""
        return 2 * (len(self.bracket_orders) - 1) + (len(self.map_orders) - 1)

    def substitute(self, bindings: Mapping) -> "Deformation":
        return Deformation(
            self.basis,
            tuple(b.substitute(bindings) for b in self.bracket_orders),
            tuple(m.substitute(bindings) for m in self.map_orders),
            self.truncation_order,
        )

    def registry(self):
        for b in self.bracket_orders:
            for _, coords in b.items():
                for c in coords:
                    if c.registry is not None:
                        return c.registry
        for m in self.map_orders:
            for row in m.rows:
                for c in row:
                    if c.registry is not None:
                        return c.registry
        return None


@dataclass(frozen=True)
class ExpansionReport:
    """Coefficient vectors of ``t^0 .. t^K`` for one basis triple."""

    triple: Tuple[int, int, int]
    per_order: Tuple[Vec, ...]

    @property
    def max_order(self) -> int:
        return len(self.per_order) - 1

    def order(self, m: int) -> Vec:
        if not 0 <= m < len(self.per_order):
            raise InputError(f"order {m} not in report (0..{self.max_order})")
        return self.per_order[m]


def _triple_vectors(d: Deformation, triple) -> Tuple[Vec, Vec, Vec]:
    triple = tuple(triple)
    n = d.dim
    if len(triple) != 3 or not all(isinstance(i, int) and 1 <= i <= n for i in triple):
        raise InputError(f"invalid basis triple {triple} for dimension {n}")
    return tuple(Vec.basis(n, i) for i in triple)


def _expand(d: Deformation, triple, max_order, maps) -> ExpansionReport:
    u, v, w = _triple_vectors(d, triple)
    K = d.max_degree() if max_order is None else max_order
    if K < 0:
        raise InputError("max_order must be >= 0")
    acc = [Vec.zero(d.dim) for _ in range(K + 1)]
    for a, alpha in maps:
        for b, inner in enumerate(d.bracket_orders):
            for c, outer in enumerate(d.bracket_orders):
                m = a + b + c
                if m <= K:
                    acc[m] = acc[m] + twisted_cyclic_sum(outer, inner, alpha, u, v, w)
    return ExpansionReport(tuple(triple), tuple(acc))


def expand_hom_jacobi(d: Deformation, triple=(1, 2, 3), max_order: int | None = None) -> ExpansionReport:
    """Coefficients of ``sum_cyc [alpha_t(x), [y, z]_t]_t`` in powers of t.

    The coefficient of ``t^m`` collects ``[alpha_a x, [y, z]_b]_c`` over
    ``a + b + c = m``.  ``max_order`` defaults to the largest possible degree.
    """
    return _expand(d, triple, max_order, enumerate(d.map_orders))


def expand_jacobi(d: Deformation, triple=(1, 2, 3), max_order: int | None = None) -> ExpansionReport:
    """Coefficients of the Jacobiator of ``[·,·]_t``; the twist is ignored."""
    if max_order is None:
        max_order = 2 * (len(d.bracket_orders) - 1)
    return _expand(d, triple, max_order, [(0, None)])


def expand_all(d: Deformation, identity: str = "hom_jacobi", max_order: int | None = None) -> List[ExpansionReport]:
    """Expansions over every basis triple ``i < j < k``."""
    fn = {"hom_jacobi": expand_hom_jacobi, "jacobi": expand_jacobi}[identity]
    return [fn(d, t, max_order) for t in basis_triples(d.dim)]


def vanishing_constraints(reports, orders: Iterable[int]) -> List[MultiPoly]:
    """Nonzero coordinates at the requested orders, read as equations ``= 0``.

    Accepts one report or a sequence of them; output is ordered by order, then
    report, then coordinate.
    """
    if isinstance(reports, ExpansionReport):
        reports = [reports]
    out: List[MultiPoly] = []
    for m in sorted(set(orders)):
        for rep in reports:
            out.extend(c for c in rep.order(m).coords if c)
    return out


def _require_unipotent(maps: PolySeries):
    head = maps[0]
    if not isinstance(head, PolyMatrix) or not head.is_identity():
        raise NotUnipotent("alpha_0 must be the identity (only unipotent twists are supported)")


def untwist(d: Deformation) -> Deformation:
    """Lie bracket ``{x, y}_t = alpha_t^{-1}([x, y]_t)`` modulo ``t^N``."""
    maps = d.map_series()
    _require_unipotent(maps)
    brackets = (maps.invert_unipotent() * d.bracket_series()).trimmed()
    return Deformation(d.basis, brackets.coefficients, (LinMap.identity(d.dim),), d.truncation_order)


def yau_twist(d: Deformation, maps) -> Deformation:
    """Twist the bracket of ``d`` by ``alpha_t``: ``[x, y]_t = alpha_t({x, y}_t)``.

    ``maps`` is a :class:`PolySeries` of matrices or a sequence of them.
    """
    if not isinstance(maps, PolySeries):
        maps = PolySeries(list(maps), d.truncation_order)
    _require_unipotent(maps)
    brackets = (maps * d.bracket_series()).trimmed()
    return Deformation(d.basis, brackets.coefficients, maps.trimmed().coefficients, d.truncation_order)
