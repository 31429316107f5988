"""Sparse multivariate polynomials with exact rational coefficients.

Every polynomial lives in a :class:`VarTable`: the fixed variable list
``X, Y, Z, u_a, ..., u_0`` together with the set of variables that may carry
negative exponents.  Terms are stored as ``{exponent tuple: coefficient}``
with coefficients kept as ``int`` when integral and ``Fraction`` otherwise,
which keeps the common integral case fast while staying exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from numbers import Rational
from operator import add

from .errors import NegativeExponentError, RingMismatch, DomainError

EXP_LIMIT = 2**31 - 1


def as_rational(value):
    """Coerce ``value`` to an exact rational in normal form (int when integral)."""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        return as_rational(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return as_rational(Fraction(value))
    raise TypeError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class VarTable:
    """Variable order ``X > Y > Z > u_a > ... > u_0`` plus Laurent flags."""

    a: int
    laurent: frozenset = None

    def __post_init__(self):
        if self.a < 1:
            raise ValueError("a must be >= 1")
        if self.laurent is None:
            object.__setattr__(self, "laurent", frozenset({f"u{self.a}"}))
        else:
            object.__setattr__(self, "laurent", frozenset(self.laurent))
        unknown = self.laurent - set(self.names)
        if unknown:
            raise ValueError(f"unknown Laurent variables {sorted(unknown)}")

    @property
    def names(self):
        return ("X", "Y", "Z") + tuple(f"u{j}" for j in range(self.a, -1, -1))

    @property
    def nvars(self):
        return self.a + 4

    def index(self, name):
        if name in ("X", "Y", "Z"):
            return "XYZ".index(name)
        if name.startswith("u") and name[1:].isdigit():
            j = int(name[1:])
            if 0 <= j <= self.a:
                return 3 + self.a - j
        raise KeyError(f"unknown variable {name!r} for a={self.a}")

    def u_index(self, j):
        return 3 + self.a - j

    def is_laurent(self, name):
        return name in self.laurent

    def with_laurent_z(self):
        return VarTable(self.a, self.laurent | {"Z"})

    def without_laurent_z(self):
        return VarTable(self.a, self.laurent - {"Z"})


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _cleared(terms):
    """Common denominator ``D`` and the terms scaled to integers by it."""
    den = lcm(*(c.denominator for c in terms.values() if type(c) is Fraction)) if terms else 1
    if den == 1:
        return 1, terms
    return den, {e: c.numerator * (den // c.denominator) if type(c) is Fraction else c * den
                 for e, c in terms.items()}


def _uncleared(n, den):
    if den == 1:
        return n
    return _norm(Fraction(n, den))


class MultiPoly:
    """Immutable sparse polynomial over the rationals in a fixed :class:`VarTable`."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: VarTable, terms=None):
        clean = {}
        n = ring.nvars
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != n:
                    raise ValueError(f"exponent vector {exps} has wrong length for {n} variables")
                coeff = as_rational(coeff)
                if coeff == 0:
                    continue
                for name, e in zip(ring.names, exps):
                    if e < 0 and name not in ring.laurent:
                        raise NegativeExponentError(f"negative exponent on non-Laurent variable {name}")
                    if abs(e) > EXP_LIMIT:
                        raise OverflowError("exponent out of range")
                clean[exps] = _norm(clean.get(exps, 0) + coeff)
                if clean[exps] == 0:
                    del clean[exps]
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # constructors --------------------------------------------------------
    @classmethod
    def zero(cls, ring):
        return cls._raw(ring, {})

    @classmethod
    def constant(cls, ring, c):
        c = as_rational(c)
        return cls._raw(ring, {(0,) * ring.nvars: c} if c != 0 else {})

    @classmethod
    def var(cls, ring, name, power=1):
        exps = [0] * ring.nvars
        exps[ring.index(name)] = power
        return cls(ring, {tuple(exps): 1})

    @classmethod
    def monomial(cls, ring, coeff=1, **powers):
        exps = [0] * ring.nvars
        for name, e in powers.items():
            exps[ring.index(name)] = e
        return cls(ring, {tuple(exps): coeff})

    # container protocol --------------------------------------------------
    @property
    def terms(self):
        """A copy of the term mapping."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self._terms.values()), 0)

    def sorted_terms(self):
        """Terms in canonical graded-lex descending order."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self._terms == other._terms
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.constant_value() == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        from .textio import format_poly

        return format_poly(self)

    # arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        try:
            return MultiPoly.constant(self.ring, other)
        except TypeError:
            return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm(s)
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.ring, {e: -c for e, c in self._terms.items()})

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
        if isinstance(other, MultiPoly):
            return self.mul(other)
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_rational(other)
        if c == 0:
            raise ZeroDivisionError("division of polynomial by zero")
        return self.scale(Fraction(1) / c)

    def scale(self, c):
        c = as_rational(c)
        if c == 0:
            return MultiPoly.zero(self.ring)
        if c == 1:
            return self
        return MultiPoly._raw(self.ring, {e: _norm(v * c) for e, v in self._terms.items()})

    def mul(self, other, zmax=None):
        """Exact product; with ``zmax`` set, terms of Z-degree above it are dropped."""
        other = self._coerce(other)
        _check_bounds(self, other)
        # integer arithmetic in the inner loop, one division per output term
        d1, t1 = _cleared(self._terms)
        d2, t2 = _cleared(other._terms)
        den = d1 * d2
        if len(t1) > len(t2):
            t1, t2 = t2, t1
        out = {}
        get = out.get
        if zmax is None:
            for e1, c1 in t1.items():
                for e2, c2 in t2.items():
                    e = tuple(map(add, e1, e2))
                    out[e] = get(e, 0) + c1 * c2
        else:
            items2 = sorted(t2.items(), key=lambda t: t[0][2])
            for e1, c1 in t1.items():
                room = zmax - e1[2]
                for e2, c2 in items2:
                    if e2[2] > room:
                        break
                    e = tuple(map(add, e1, e2))
                    out[e] = get(e, 0) + c1 * c2
        return MultiPoly._raw(self.ring, {e: _uncleared(c, den) for e, c in out.items() if c})

    def __pow__(self, n):
        return self.power(n)

    def power(self, n, zmax=None):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self._terms) != 1:
                raise NegativeExponentError("only monomials can be inverted")
            (e, c), = self._terms.items()
            return MultiPoly(self.ring, {tuple(n * x for x in e): Fraction(1) / Fraction(c) ** -n})
        result = MultiPoly.constant(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, zmax)
            n >>= 1
            if n:
                base = base.mul(base, zmax)
        return result

    # structure -----------------------------------------------------------
    def degree(self, var=None):
        """Total degree, or the degree in one variable; ``-1`` for zero."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        i = self.ring.index(var)
        return max(e[i] for e in self._terms)

    def min_degree(self, var):
        if not self._terms:
            return 0
        i = self.ring.index(var)
        return min(e[i] for e in self._terms)

    def degree_xy(self):
        """Total degree in X and Y only, other variables treated as coefficients."""
        if not self._terms:
            return -1
        return max(e[0] + e[1] for e in self._terms)

    def variables(self):
        names = self.ring.names
        seen = set()
        for e in self._terms:
            for i, x in enumerate(e):
                if x:
                    seen.add(names[i])
        return seen

    def coefficients_in(self, var):
        """Split as ``sum_k c_k * var^k``; returns ``{k: c_k}`` with ``c_k`` free of ``var``."""
        i = self.ring.index(var)
        parts = {}
        for e, c in self._terms.items():
            k = e[i]
            rest = e[:i] + (0,) + e[i + 1:]
            parts.setdefault(k, {})[rest] = c
        return {k: MultiPoly._raw(self.ring, t) for k, t in parts.items()}

    def coefficient(self, var, k):
        return self.coefficients_in(var).get(k, MultiPoly.zero(self.ring))

    def coefficient_of(self, **powers):
        """Rational coefficient of one exact monomial."""
        exps = [0] * self.ring.nvars
        for name, e in powers.items():
            exps[self.ring.index(name)] = e
        return self._terms.get(tuple(exps), 0)

    def homogeneous_xy(self, degree):
        """The part of (X,Y)-degree exactly ``degree``."""
        return MultiPoly._raw(self.ring, {e: c for e, c in self._terms.items() if e[0] + e[1] == degree})

    def with_ring(self, ring: VarTable):
        """Reinterpret in another table with the same ``a`` (Laurent flags may differ)."""
        if ring.a != self.ring.a:
            raise RingMismatch(f"cannot move polynomial from a={self.ring.a} to a={ring.a}")
        if ring == self.ring:
            return self
        return MultiPoly(ring, self._terms)

    # calculus ------------------------------------------------------------
    def derivative(self, var, times=1):
        i = self.ring.index(var)
        out = self._terms
        for _ in range(times):
            nxt = {}
            for e, c in out.items():
                k = e[i]
                if k < 0:
                    raise NegativeExponentError(f"derivative in {var} across a negative exponent")
                if k == 0:
                    continue
                ne = e[:i] + (k - 1,) + e[i + 1:]
                nxt[ne] = _norm(nxt.get(ne, 0) + k * c)
            out = {e: c for e, c in nxt.items() if c}
        return MultiPoly._raw(self.ring, out)

    def substitute(self, var, q, zmax=None):
        """Compose: replace ``var`` by the polynomial ``q`` (Horner scheme)."""
        q = self._coerce(q)
        if self.min_degree(var) < 0:
            raise NegativeExponentError(f"cannot substitute into a negative power of {var}")
        parts = self.coefficients_in(var)
        if not parts:
            return self
        top = max(parts)
        zero = MultiPoly.zero(self.ring)
        acc = zero
        for k in range(top, -1, -1):
            acc = acc.mul(q, zmax) if acc else acc
            c = parts.get(k)
            if c is not None:
                acc = acc + (c if zmax is None else c.truncate_z(zmax))
        return acc

    def substitute_many(self, images, zmax=None):
        """Simultaneous substitution ``{name: poly}``."""
        names = list(images)
        if not names:
            return self
        head, rest = names[0], {n: images[n] for n in names[1:]}
        q = self._coerce(images[head])
        if self.min_degree(head) < 0:
            raise NegativeExponentError(f"cannot substitute into a negative power of {head}")
        parts = self.coefficients_in(head)
        if not parts:
            return self
        acc = MultiPoly.zero(self.ring)
        for k in range(max(parts), -1, -1):
            acc = acc.mul(q, zmax) if acc else acc
            c = parts.get(k)
            if c is not None:
                acc = acc + c.substitute_many(rest, zmax)
        return acc if zmax is None else acc.truncate_z(zmax)

    def evaluate(self, values):
        """Replace the named variables by rationals; a zero value for a negative power is an error."""
        idx = {self.ring.index(n): as_rational(v) for n, v in values.items()}
        out = {}
        for e, c in self._terms.items():
            val = c
            ne = list(e)
            for i, v in idx.items():
                k = e[i]
                if k:
                    if k < 0 and v == 0:
                        raise ZeroDivisionError(f"{self.ring.names[i]} = 0 in a negative power")
                    val = val * (Fraction(v) ** k if k < 0 else v ** k)
                    ne[i] = 0
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + val
        return MultiPoly._raw(self.ring, {e: _norm(as_rational(c)) for e, c in out.items() if c})

    def evaluate_u(self, x):
        """Specialize ``u_j := x[j]`` for all j; ``x[a]`` must be nonzero."""
        a = self.ring.a
        if len(x) != a + 1:
            raise DomainError(f"expected {a + 1} values, got {len(x)}")
        if as_rational(x[a]) == 0:
            raise DomainError("u_a must specialize to a nonzero value")
        return self.evaluate({f"u{j}": x[j] for j in range(a + 1)})

    def truncate_z(self, n):
        """Drop every term whose Z-exponent exceeds ``n`` (negative exponents are kept)."""
        if n < 0:
            raise ValueError("truncation order must be >= 0")
        return MultiPoly._raw(self.ring, {e: c for e, c in self._terms.items() if e[2] <= n})

    def map_coefficients(self, fn):
        return MultiPoly(self.ring, {e: fn(c) for e, c in self._terms.items()})


def _check_bounds(p, q):
    if not p._terms or not q._terms:
        return
    bp = max(max(map(abs, e)) for e in p._terms)
    bq = max(max(map(abs, e)) for e in q._terms)
    if bp + bq > EXP_LIMIT:
        raise OverflowError("exponent overflow in product")


def u_poly(ring: VarTable):
    """The generic polynomial U(Y) = sum_j u_j Y^j."""
    y = ring.index("Y")
    terms = {}
    for j in range(ring.a + 1):
        e = [0] * ring.nvars
        e[y] = j
        e[ring.u_index(j)] = 1
        terms[tuple(e)] = 1
    return MultiPoly(ring, terms)


def poly_in_y(ring: VarTable, coeffs):
    """Univariate polynomial ``sum coeffs[j] * Y^j`` with rational coefficients."""
    y = ring.index("Y")
    terms = {}
    for j, c in enumerate(coeffs):
        e = [0] * ring.nvars
        e[y] = j
        terms[tuple(e)] = c
    return MultiPoly(ring, terms)


def mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p.mul(q)


def derivative(p: MultiPoly, var: str) -> MultiPoly:
    return p.derivative(var)


def substitute(p: MultiPoly, var: str, q: MultiPoly) -> MultiPoly:
    return p.substitute(var, q)


def evaluate_u(p: MultiPoly, x) -> MultiPoly:
    return p.evaluate_u(x)


def truncate_z(p: MultiPoly, n: int) -> MultiPoly:
    return p.truncate_z(n)
