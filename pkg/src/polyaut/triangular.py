"""Triangular and linear polynomials in R[Y], R = Q[u_0..u_{a-1}][u_a, 1/u_a].

``P = sum p_l Y^l`` of degree ``d >= a`` is m-triangular when, for
``d-a <= l <= d``, ``p_l = q_l u_a^(m-1) u_(a-d+l) + P_l`` with ``q_l > 0``
rational and ``P_l`` a polynomial in ``u_(a-d+l+1), ..., u_a`` only; the top
coefficient is then ``q_d u_a^m``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .algebra import MultiPoly, as_rational
from .errors import DomainError, NoRationalRoot, WitnessMissing


class Reason(enum.Enum):
    DegreeTooSmall = "DegreeTooSmall"
    LeadingNotPositiveMonomial = "LeadingNotPositiveMonomial"
    CoefficientNotPositiveRational = "CoefficientNotPositiveRational"
    ForbiddenLowVariable = "ForbiddenLowVariable"


@dataclass(frozen=True)
class TriangularWitness:
    d: int
    m: int
    q: tuple  # q_{d-a}, ..., q_d
    residuals: dict  # l -> P_l for d-a <= l < d

    def __bool__(self):
        return True

    @property
    def q_top(self):
        return self.q[-1]


@dataclass(frozen=True)
class TriangularFailure:
    reason: Reason
    l: int

    def __bool__(self):
        return False


def _check_in_RY(P):
    extra = {"X", "Z"} & P.variables()
    if extra:
        raise DomainError(f"polynomial must lie in R[Y], found {sorted(extra)}")


def check_m_triangular(P: MultiPoly, m: int, a: int | None = None):
    """Return a :class:`TriangularWitness`, or the first violated clause as a
    :class:`TriangularFailure` (both usable in a boolean context)."""
    ring = P.ring
    a = ring.a if a is None else a
    if a != ring.a:
        raise DomainError(f"a={a} does not match the ring (a={ring.a})")
    if m < 1:
        raise DomainError("m must be >= 1")
    _check_in_RY(P)
    d = P.degree("Y")
    if d < a:
        return TriangularFailure(Reason.DegreeTooSmall, d)
    coeffs = P.coefficients_in("Y")
    zero = MultiPoly.zero(ring)
    ua = ring.u_index(a)

    top = coeffs[d]
    items = list(top.items())
    if len(items) != 1:
        return TriangularFailure(Reason.LeadingNotPositiveMonomial, d)
    (e, c), = items
    want = [0] * ring.nvars
    want[ua] = m
    if e != tuple(want) or c <= 0:
        return TriangularFailure(Reason.LeadingNotPositiveMonomial, d)

    qs = {d: Fraction(c)}
    residuals = {}
    for l in range(d - 1, d - a - 1, -1):
        i = a - d + l
        p_l = coeffs.get(l, zero)
        low = [ring.u_index(j) for j in range(i)]
        if any(ex[k] for ex, _ in p_l.items() for k in low):
            return TriangularFailure(Reason.ForbiddenLowVariable, l)
        want = [0] * ring.nvars
        want[ua] += m - 1
        want[ring.u_index(i)] += 1
        q = p_l.terms.get(tuple(want), 0)
        if q <= 0:
            return TriangularFailure(Reason.CoefficientNotPositiveRational, l)
        rest = p_l - MultiPoly(ring, {tuple(want): q})
        iu = ring.u_index(i)
        if any(ex[iu] or ex[ua] < 0 for ex, _ in rest.items()):
            return TriangularFailure(Reason.ForbiddenLowVariable, l)
        qs[l] = Fraction(q)
        residuals[l] = rest
    return TriangularWitness(d, m, tuple(qs[l] for l in range(d - a, d + 1)), residuals)


def check_linear(P: MultiPoly, a: int | None = None):
    """``(True, [q_0..q_d])`` when ``p_l`` is a positive multiple of ``u_(a-d+l)``
    for every ``l`` and ``0 <= d <= a``; ``(False, None)`` otherwise."""
    ring = P.ring
    a = ring.a if a is None else a
    if a != ring.a:
        raise DomainError(f"a={a} does not match the ring (a={ring.a})")
    _check_in_RY(P)
    d = P.degree("Y")
    if d < 0 or d > a:
        return False, None
    coeffs = P.coefficients_in("Y")
    qs = []
    for l in range(d + 1):
        p_l = coeffs.get(l)
        if p_l is None or len(p_l) != 1:
            return False, None
        (e, c), = p_l.items()
        want = [0] * ring.nvars
        want[ring.u_index(a - d + l)] = 1
        if e != tuple(want) or c <= 0:
            return False, None
        qs.append(Fraction(c))
    return True, qs


def is_m_triangular(P, m, a=None) -> bool:
    return bool(check_m_triangular(P, m, a))


def is_linear(P, a=None) -> bool:
    return check_linear(P, a)[0]


def integer_root(n: int, m: int):
    """Exact ``m``-th root of ``n >= 0``, or ``None`` if it is not an integer."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // m)  # upper bound on the root
    while True:
        y = ((m - 1) * x + n // x ** (m - 1)) // m
        if y >= x:
            break
        x = y
    return x if x ** m == n else None


def rational_root(value, m: int):
    """Exact rational ``m``-th root of ``value``, or ``None``."""
    value = Fraction(value)
    if value < 0:
        if m % 2 == 0:
            return None
        r = rational_root(-value, m)
        return None if r is None else -r
    num = integer_root(value.numerator, m)
    den = integer_root(value.denominator, m)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def solve_top(P: MultiPoly, m: int, t, y, a: int | None = None, witness=None):
    """Find ``x`` with ``t_l * p_l(x) = y_l`` over the window ``d-a <= l <= d``.

    ``t`` and ``y`` are indexed from ``l = d-a``.  ``x_a`` is the rational
    ``m``-th root of ``y_d / (t_d q_d)``; the remaining ``x_i`` follow by
    back-substitution, each ``p_l`` being affine in ``u_(a-d+l)``.
    """
    ring = P.ring
    a = ring.a if a is None else a
    if witness is None:
        witness = check_m_triangular(P, m, a)
    if not witness:
        raise WitnessMissing(f"polynomial is not {m}-triangular: {witness}")
    t = [as_rational(v) for v in t]
    y = [as_rational(v) for v in y]
    if len(t) != a + 1 or len(y) != a + 1:
        raise DomainError(f"t and y need {a + 1} entries")
    if any(v == 0 for v in t):
        raise DomainError("every t_l must be nonzero")
    if y[a] == 0:
        raise DomainError("the top target y_d must be nonzero")
    d = witness.d
    radicand = Fraction(y[a]) / (t[a] * witness.q_top)
    xa = rational_root(radicand, m)
    if xa is None:
        raise NoRationalRoot(
            f"u_{a}^{m} = {radicand} has no rational solution; the target needs an "
            f"algebraically closed field (choose y_d = t_d*q_d*k^{m} for rational k)")
    x = {a: xa}
    coeffs = P.coefficients_in("Y")
    for l in range(d - 1, d - a - 1, -1):
        i = a - d + l
        known = {f"u{j}": x[j] for j in range(i + 1, a + 1)}
        known[f"u{i}"] = 0
        base = coeffs.get(l, MultiPoly.zero(ring)).evaluate(known).constant_value()
        q_l = witness.q[l - (d - a)]
        x[i] = (Fraction(y[l - (d - a)]) / t[l - (d - a)] - base) / (q_l * Fraction(xa) ** (m - 1))
    return tuple(as_rational(x[j]) for j in range(a + 1))
