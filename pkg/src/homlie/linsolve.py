"""Exact linear systems over Q in named unknowns.

Each row stores ``(c_1, ..., c_n, c_0)`` for the equation
``c_1 x_1 + ... + c_n x_n + c_0 = 0``.

Pivot rule: columns are scanned from the **last** declared unknown to the
first; in each column the first remaining row (in input order) with a
nonzero entry becomes the pivot row, swapped up only if needed.  Declaring
the unknowns you want to keep free first therefore makes them free:
``a11, a12, a13, a22, a23, a32, a21, a31, a33`` leaves the first six free.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .errors import InconsistentSystem, InputError, NonlinearConstraint
from .symcore import MultiPoly, Registry

Row = Tuple[Fraction, ...]


@dataclass(frozen=True)
class LinearSystem:
    params: Tuple[str, ...]
    rows: Tuple[Row, ...] = ()

    def __post_init__(self):
        params = tuple(self.params)
        if len(set(params)) != len(params):
            raise InputError("duplicate unknowns")
        rows = tuple(tuple(Fraction(c) for c in r) for r in self.rows)
        for r in rows:
            if len(r) != len(params) + 1:
                raise InputError(f"row length {len(r)} != {len(params) + 1}")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "rows", rows)

    def __len__(self):
        return len(self.rows)

    def union(self, other: "LinearSystem") -> "LinearSystem":
        _same_params(self, other)
        return LinearSystem(self.params, self.rows + other.rows)

    __or__ = union

    def as_polys(self, registry: Registry | None = None) -> List[MultiPoly]:
        reg = registry or Registry(self.params)
        out = []
        for r in self.rows:
            p = reg.const(r[-1])
            for name, c in zip(self.params, r):
                if c:
                    p = p + reg.var(name) * c
            out.append(p)
        return out


def _same_params(s1: LinearSystem, s2: LinearSystem):
    if s1.params != s2.params:
        raise InputError("systems are over different unknown lists")


def linearize(polys: Sequence[MultiPoly], unknowns) -> LinearSystem:
    """One row per polynomial, reading off the coefficient of each unknown."""
    params = tuple(unknowns)
    col = {name: k for k, name in enumerate(params)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * (len(params) + 1)
        for mono, coeff in p.terms:
            if len(mono) > 1:
                raise NonlinearConstraint(p)
            if not mono:
                row[-1] += coeff
                continue
            name = p.registry.names[mono[0]]
            if name not in col:
                raise NonlinearConstraint(p, f"depends on non-unknown parameter {name}")
            row[col[name]] += coeff
        rows.append(tuple(row))
    return LinearSystem(params, tuple(rows))


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Gauss-Jordan elimination on the first ``ncols`` columns.

    Returns the nonzero reduced rows (pivots normalized to 1, in pivot-finding
    order) and their pivot columns.  Any trailing columns are carried along.
    """
    m = [[Fraction(c) for c in r] for r in rows]
    pivots: List[int] = []
    top = 0
    for c in range(ncols - 1, -1, -1):
        for r in range(top, len(m)):
            if m[r][c] != 0:
                break
        else:
            continue
        if r != top:
            m[top], m[r] = m[r], m[top]
        piv = m[top][c]
        m[top] = [x / piv for x in m[top]]
        for r2 in range(len(m)):
            if r2 != top and m[r2][c] != 0:
                f = m[r2][c]
                m[r2] = [a - f * b for a, b in zip(m[r2], m[top])]
        pivots.append(c)
        top += 1
        if top == len(m):
            break
    return m[:top] + [r for r in m[top:] if any(r)], pivots


@dataclass(frozen=True)
class SolutionSpace:
    """Parametric solution: each pivot unknown as an affine form in the free ones.

    ``pivot_assignments[name] = (coefficients, constant)`` where
    ``coefficients`` maps free unknowns to rationals.
    """

    params: Tuple[str, ...]
    pivot_assignments: Mapping[str, Tuple[Mapping[str, Fraction], Fraction]]
    free_params: Tuple[str, ...]

    @property
    def pivots(self) -> Tuple[str, ...]:
        return tuple(p for p in self.params if p in self.pivot_assignments)

    def bindings(self, registry: Registry | None = None) -> Dict[str, MultiPoly]:
        """Pivot assignments as polynomials over ``registry``."""
        reg = registry or Registry(self.params)
        out = {}
        for name in self.pivots:
            coeffs, const = self.pivot_assignments[name]
            p = reg.const(const)
            for free, c in coeffs.items():
                p = p + reg.var(free) * c
            out[name] = p
        return out

    def extend(self, free_values: Mapping[str, Fraction]) -> Dict[str, Fraction]:
        """Complete a point from values of the free unknowns."""
        point = {name: Fraction(free_values[name]) for name in self.free_params}
        for name in self.pivots:
            coeffs, const = self.pivot_assignments[name]
            point[name] = const + sum((c * point[f] for f, c in coeffs.items()), Fraction(0))
        return point

    def residuals(self, system: LinearSystem) -> List[MultiPoly]:
        """Each row with the assignments substituted; all zero for a solution."""
        reg = Registry(self.params)
        b = self.bindings(reg)
        return [p.substitute(b) for p in system.as_polys(reg)]

    def describe(self) -> List[str]:
        b = self.bindings()
        return [f"{name} = {b[name]}" for name in self.pivots]


def solve(sys: LinearSystem) -> SolutionSpace:
    n = len(sys.params)
    reduced, pivots = rref(sys.rows, n)
    for r in reduced[len(pivots):]:
        if r[-1] != 0:
            raise InconsistentSystem(f"inconsistent system: 0 = {-r[-1]}")
    pivot_set = set(pivots)
    free = tuple(p for k, p in enumerate(sys.params) if k not in pivot_set)
    assignments = {}
    for row, c in zip(reduced, pivots):
        coeffs = {sys.params[k]: -row[k] for k in range(n) if k != c and row[k] != 0}
        assignments[sys.params[c]] = (coeffs, -row[-1])
    return SolutionSpace(sys.params, assignments, free)


def substitute_solution(sol: SolutionSpace, p: MultiPoly) -> MultiPoly:
    return p.substitute(sol.bindings(p.registry))


def rank(sys: LinearSystem) -> int:
    return len(rref(sys.rows, len(sys.params) + 1)[1])


def _reduces_to_zero(row: Sequence[Fraction], basis_rows, pivots) -> bool:
    r = list(row)
    for b, c in zip(basis_rows, pivots):
        if r[c] != 0:
            f = r[c]
            r = [x - f * y for x, y in zip(r, b)]
    return not any(r)


def systems_equivalent(s1: LinearSystem, s2: LinearSystem) -> bool:
    """True iff the augmented row spaces coincide."""
    _same_params(s1, s2)
    ncols = len(s1.params) + 1
    for a, b in ((s1, s2), (s2, s1)):
        basis_rows, pivots = rref(b.rows, ncols)
        if not all(_reduces_to_zero(r, basis_rows, pivots) for r in a.rows):
            return False
    return True
