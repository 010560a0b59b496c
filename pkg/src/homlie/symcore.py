"""Exact polynomial arithmetic over the rationals.

Every symbolic coefficient in the package is a :class:`MultiPoly` in the
parameters of an immutable :class:`Registry`.  A monomial is stored as the
sorted tuple of parameter indices, repeated by exponent, so in a registry
``("a", "b")`` the monomial ``a^2*b`` is ``(0, 0, 1)``.

Term order is graded lexicographic on that tuple: lower total degree first,
ties broken by comparing the index tuples.  With the registry ordered
``p1, p2, ..., r3`` this prints ``p1*r2 - p2*r1`` in that order.

Scalars are :class:`fractions.Fraction`; there is no floating point anywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Tuple, Union

from .errors import InputError, NotUnipotent, RegistryMismatch, UnknownParameter

Rational = Fraction

# Sorted tuple of parameter indices with repetition; () is the unit monomial.
Monomial = Tuple[int, ...]

Scalar = Union[int, Fraction]

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class ParamId(NamedTuple):
    name: str
    index: int


class Registry:
    """An ordered, immutable set of parameter names.

    Two registries are the same registry iff they list the same names in the
    same order.
    """

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str] = ()):
        names = tuple(names)
        index = {}
        for i, name in enumerate(names):
            if not isinstance(name, str) or not _IDENT.match(name):
                raise InputError(f"invalid parameter name {name!r}")
            if name in index:
                raise InputError(f"duplicate parameter name {name!r}")
            index[name] = i
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", index)

    def __setattr__(self, key, value):
        raise AttributeError("Registry is immutable")

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Registry):
            return NotImplemented
        return self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Registry({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownParameter(name) from None

    def param(self, name: str) -> ParamId:
        return ParamId(name, self.index(name))

    @property
    def params(self) -> Tuple[ParamId, ...]:
        return tuple(ParamId(n, i) for i, n in enumerate(self.names))

    def var(self, name: str) -> "MultiPoly":
        return MultiPoly._raw(self, {(self.index(name),): Fraction(1)})

    def vars(self, *names: str) -> Tuple["MultiPoly", ...]:
        return tuple(self.var(n) for n in names)

    def const(self, value: Scalar) -> "MultiPoly":
        return MultiPoly.constant(value, self)

    def zero(self) -> "MultiPoly":
        return MultiPoly._raw(self, {})


def join_registries(r1: Registry | None, r2: Registry | None) -> Registry | None:
    """Registry of a result combining operands from ``r1`` and ``r2``.

    ``None`` marks a registry-free constant and is compatible with anything.
    """
    if r1 is None:
        return r2
    if r2 is None or r1 is r2 or r1 == r2:
        return r1
    raise RegistryMismatch(f"cannot combine polynomials over {r1!r} and {r2!r}")


def monomial_key(m: Monomial) -> Tuple[int, Monomial]:
    return (len(m), m)


def monomial_exponents(m: Monomial) -> Dict[int, int]:
    """Sparse exponent map ``index -> exponent`` of a monomial."""
    out: Dict[int, int] = {}
    for i in m:
        out[i] = out.get(i, 0) + 1
    return out


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    return tuple(sorted(m1 + m2))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, _RationalABC)) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"expected an exact rational scalar, got {type(c).__name__}")


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, _RationalABC)) and not isinstance(x, bool)


class MultiPoly:
    """Sparse multivariate polynomial with rational coefficients.

    Instances are immutable and always canonical: no zero coefficients and
    terms held in increasing monomial order, so ``==`` is structural.
    """

    __slots__ = ("registry", "_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | Iterable = (), registry: Registry | None = None):
        acc: Dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, coeff in items:
            mono = tuple(sorted(mono))
            if mono and registry is None:
                raise InputError("a registry is required for non-constant polynomials")
            if mono and not (0 <= mono[0] and mono[-1] < len(registry)):
                raise InputError(f"monomial {mono} out of range for {registry!r}")
            acc[mono] = acc.get(mono, Fraction(0)) + _as_fraction(coeff)
        self._set(registry, acc)

    def _set(self, registry, acc):
        ordered = {m: acc[m] for m in sorted(acc, key=monomial_key) if acc[m] != 0}
        object.__setattr__(self, "registry", registry)
        object.__setattr__(self, "_terms", ordered)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, registry, acc: Dict[Monomial, Fraction]) -> "MultiPoly":
        p = cls.__new__(cls)
        p._set(registry, acc)
        return p

    @classmethod
    def constant(cls, value: Scalar, registry: Registry | None = None) -> "MultiPoly":
        return cls._raw(registry, {(): _as_fraction(value)})

    def __setattr__(self, key, value):
        raise AttributeError("MultiPoly is immutable")

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Tuple[Tuple[Monomial, Fraction], ...]:
        return tuple(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(sorted(mono)), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((len(m) for m in self._terms), default=-1)

    def degree_in(self, names: Iterable[str]) -> int:
        """Largest total degree in the given parameters over all terms."""
        if self.registry is None:
            return 0 if self._terms else -1
        idx = {self.registry.index(n) for n in names if n in self.registry}
        return max((sum(1 for i in m if i in idx) for m in self._terms), default=-1)

    def params(self) -> Tuple[str, ...]:
        """Names of the parameters that occur, in registry order."""
        used = sorted({i for m in self._terms for i in m})
        return tuple(self.registry.names[i] for i in used)

    def __eq__(self, other) -> bool:
        if _is_scalar(other):
            other = MultiPoly.constant(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if not self._compatible(other):
            return False
        return list(self._terms.items()) == list(other._terms.items())

    def _compatible(self, other: "MultiPoly") -> bool:
        try:
            join_registries(self.registry, other.registry)
        except RegistryMismatch:
            # constants compare by value across registries
            return self.is_constant() and other.is_constant()
        return True

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            return other
        if _is_scalar(other):
            return MultiPoly.constant(other, self.registry)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        reg = join_registries(self.registry, other.registry)
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, 0) + c
        return MultiPoly._raw(reg, acc)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.registry, {m: -c for m, c in self._terms.items()})

    def __pos__(self) -> "MultiPoly":
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if _is_scalar(other):
            c = _as_fraction(other)
            return MultiPoly._raw(self.registry, {m: a * c for m, a in self._terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        reg = join_registries(self.registry, other.registry)
        acc: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return MultiPoly._raw(reg, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise InputError("exponent must be a non-negative integer")
        result = MultiPoly.constant(1, self.registry)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- substitution and evaluation ---------------------------------------

    def substitute(self, bindings: Mapping) -> "MultiPoly":
        """Replace bound parameters by polynomials or scalars.

        Keys are parameter names or :class:`ParamId`; unbound parameters stay.
        """
        if not bindings or not self._terms:
            return self
        reg = self.registry
        table: Dict[int, MultiPoly] = {}
        for key, value in bindings.items():
            name = key.name if isinstance(key, ParamId) else key
            if reg is None or name not in reg:
                continue
            if not isinstance(value, MultiPoly):
                value = MultiPoly.constant(value, reg)
            reg = join_registries(reg, value.registry)
            table[self.registry.index(name)] = value
        if not table:
            return self
        result = MultiPoly._raw(reg, {})
        for mono, coeff in self._terms.items():
            kept: list = []
            term = MultiPoly.constant(coeff, reg)
            for i in mono:
                if i in table:
                    term = term * table[i]
                else:
                    kept.append(i)
            result = result + term * MultiPoly._raw(reg, {tuple(kept): Fraction(1)})
        return result

    def evaluate(self, point: Mapping) -> Fraction:
        """Exact value at a point binding every parameter that occurs."""
        values: Dict[int, Fraction] = {}
        if self.registry is not None:
            for key, value in point.items():
                name = key.name if isinstance(key, ParamId) else key
                if name in self.registry:
                    values[self.registry.index(name)] = _as_fraction(value)
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            v = coeff
            for i in mono:
                try:
                    v *= values[i]
                except KeyError:
                    raise UnknownParameter(self.registry.names[i]) from None
            total += v
        return total

    # -- printing -------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)!r})"


def format_monomial(m: Monomial, registry: Registry) -> str:
    parts = []
    for i, e in monomial_exponents(m).items():
        name = registry.names[i]
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    """Canonical text form: graded-lex term order, explicit ``*`` and ``^``.

    The output is accepted by :func:`homlie.exprparse.parse_poly`.
    """
    if not p._terms:
        return "0"
    out = []
    for k, (mono, coeff) in enumerate(p._terms.items()):
        neg = coeff < 0
        mag = -coeff if neg else coeff
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = format_monomial(mono, p.registry)
        else:
            body = f"{mag}*{format_monomial(mono, p.registry)}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


class PolyMatrix:
    """Square matrix of :class:`MultiPoly` entries (0-based storage)."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(_as_poly(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InputError("matrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, key, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int):
        return cls([[0] * n for _ in range(n)])

    def entry(self, i: int, j: int) -> MultiPoly:
        """Entry in row ``i``, column ``j`` (1-based)."""
        return self.rows[i - 1][j - 1]

    def is_identity(self) -> bool:
        n = self.dim
        return all(self.rows[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))

    def _same_dim(self, other):
        if other.dim != self.dim:
            raise InputError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        self._same_dim(other)
        return type(self)([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return type(self)([[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if _is_scalar(other) or isinstance(other, MultiPoly):
            return type(self)([[a * other for a in r] for r in self.rows])
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        self._same_dim(other)
        n = self.dim
        cols = list(zip(*other.rows))
        return type(self)(
            [[_dot(self.rows[i], cols[j]) for j in range(n)] for i in range(n)]
        )

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __bool__(self):
        return any(a for r in self.rows for a in r)

    def substitute(self, bindings: Mapping):
        return type(self)([[a.substitute(bindings) for a in r] for r in self.rows])

    def __repr__(self):
        body = "; ".join(", ".join(str(a) for a in r) for r in self.rows)
        return f"{type(self).__name__}([{body}])"


def _dot(xs, ys) -> MultiPoly:
    acc = MultiPoly.constant(0)
    for x, y in zip(xs, ys):
        if x and y:
            acc = acc + x * y
    return acc


def _as_poly(x) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    if _is_scalar(x):
        return MultiPoly.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


def _compose(a, b):
    # matrices act by composition / application, everything else by scaling
    if isinstance(a, PolyMatrix):
        return a @ b
    return a * b


class PolySeries:
    """Truncated power series in ``t`` with coefficients in a generic payload.

    ``coefficients[k]`` multiplies ``t**k``; anything of order
    ``>= truncation_order`` is discarded.  Payloads may be scalars,
    :class:`MultiPoly`, :class:`PolyMatrix` or any type supporting ``+`` and
    scaling by ``0``; a matrix coefficient acts on its partner via ``@``.
    """

    __slots__ = ("coefficients", "truncation_order")

    def __init__(self, coefficients: Iterable, truncation_order: int = 2):
        coefficients = tuple(coefficients)
        if not isinstance(truncation_order, int) or truncation_order < 1:
            raise InputError("truncation order must be an integer >= 1")
        if not coefficients:
            raise InputError("a series needs at least its order-0 coefficient")
        object.__setattr__(self, "coefficients", coefficients[:truncation_order])
        object.__setattr__(self, "truncation_order", truncation_order)

    def __setattr__(self, key, value):
        raise AttributeError("PolySeries is immutable")

    @classmethod
    def identity(cls, n: int, truncation_order: int = 2) -> "PolySeries":
        return cls([PolyMatrix.identity(n)], truncation_order)

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, k: int):
        return self.coefficients[k]

    def coefficient(self, k: int):
        """Coefficient of ``t**k``; zero-like past the stored length."""
        if k < len(self.coefficients):
            return self.coefficients[k]
        return self.coefficients[0] * 0

    def _check(self, other: "PolySeries"):
        if not isinstance(other, PolySeries):
            raise TypeError("expected a PolySeries")
        if other.truncation_order != self.truncation_order:
            raise InputError(
                f"truncation order mismatch: {self.truncation_order} vs {other.truncation_order}"
            )

    def __add__(self, other: "PolySeries") -> "PolySeries":
        self._check(other)
        n = max(len(self), len(other))
        return PolySeries([self.coefficient(k) + other.coefficient(k) for k in range(n)],
                          self.truncation_order)

    def __neg__(self) -> "PolySeries":
        return PolySeries([-c for c in self.coefficients], self.truncation_order)

    def __sub__(self, other: "PolySeries") -> "PolySeries":
        return self + (-other)

    def __mul__(self, other: "PolySeries") -> "PolySeries":
        """Cauchy product truncated at the common order."""
        self._check(other)
        N = self.truncation_order
        n = min(N, len(self) + len(other) - 1)
        out = [None] * n
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                if i + j >= n:
                    break
                term = _compose(a, b)
                out[i + j] = term if out[i + j] is None else out[i + j] + term
        zero = _compose(self.coefficients[0], other.coefficients[0]) * 0
        return PolySeries([zero if c is None else c for c in out], N)

    def __eq__(self, other):
        if not isinstance(other, PolySeries):
            return NotImplemented
        if self.truncation_order != other.truncation_order:
            return False
        n = max(len(self), len(other))
        return all(self.coefficient(k) == other.coefficient(k) for k in range(n))

    __hash__ = None

    def trimmed(self) -> "PolySeries":
        """Drop trailing zero coefficients, keeping order 0."""
        coeffs = list(self.coefficients)
        while len(coeffs) > 1 and not coeffs[-1]:
            coeffs.pop()
        return PolySeries(coeffs, self.truncation_order)

    def invert_unipotent(self) -> "PolySeries":
        """Two-sided inverse of a series of matrices whose order-0 term is the identity.

        Uses the geometric series ``sum_k (-E)^k`` with ``E = s - id``, which
        terminates because ``E`` has no order-0 part.
        """
        head = self.coefficients[0]
        if not isinstance(head, PolyMatrix) or not head.is_identity():
            raise NotUnipotent("order-0 coefficient must be the identity matrix")
        N = self.truncation_order
        ident = PolySeries.identity(head.dim, N)
        minus_e = ident - self
        result = ident
        power = ident
        for _ in range(1, N):
            power = power * minus_e
            result = result + power
        return result

    def __repr__(self):
        return f"PolySeries({list(self.coefficients)!r}, truncation_order={self.truncation_order})"


def series_mul(s: PolySeries, u: PolySeries) -> PolySeries:
    return s * u


def series_invert_unipotent(s: PolySeries) -> PolySeries:
    return s.invert_unipotent()
