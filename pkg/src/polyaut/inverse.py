"""Formal inverse of ``Y + Z*U(Y)^b`` and the polynomials attached to it.

``U`` is any polynomial in ``Y`` over the u-variables (the generic
``sum u_j Y^j`` or a rational specialization).  ``v_k`` is the coefficient of
``Z^k`` in ``U(I(Y,Z))`` and ``w_{n,lam}`` the auxiliary family with
``w_{0,lam} = 1/(lam+1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .algebra import MultiPoly, VarTable, u_poly
from .errors import DomainError


@dataclass(frozen=True)
class InverseSeries:
    a: int
    b: int
    order: int
    series: MultiPoly  # I(Y, Z) truncated mod Z^(order+1)

    @property
    def coeffs(self):
        parts = self.series.coefficients_in("Z")
        zero = MultiPoly.zero(self.series.ring)
        return [parts.get(k, zero) for k in range(self.order + 1)]


def _Z(ring):
    return MultiPoly.var(ring, "Z")


def _Y(ring):
    return MultiPoly.var(ring, "Y")


def formal_inverse(U: MultiPoly, b: int, order: int) -> InverseSeries:
    """Iterate ``I <- Y - Z*U(I)^b`` modulo ``Z^(order+1)`` until it is stable."""
    if b < 1 or order < 0:
        raise DomainError("need b >= 1 and order >= 0")
    ring = U.ring
    Y, Z = _Y(ring), _Z(ring)
    inv = Y
    # each pass fixes one more Z-coefficient, so order+1 passes always suffice
    for _ in range(order + 1):
        nxt = Y - Z.mul(U.substitute("Y", inv, zmax=order - 1).power(b, zmax=order - 1), zmax=order) \
            if order > 0 else Y
        if nxt == inv:
            break
        inv = nxt
    return InverseSeries(ring.a, b, order, inv)


def u_of_inverse(inv: InverseSeries, U: MultiPoly):
    """Z-coefficients of ``U(I(Y,Z))``: the independent route to ``v_0..v_N``."""
    composed = U.substitute("Y", inv.series, zmax=inv.order)
    parts = composed.coefficients_in("Z")
    zero = MultiPoly.zero(U.ring)
    return [parts.get(k, zero) for k in range(inv.order + 1)]


def v_sequence(U: MultiPoly, b: int, order: int):
    """``v_0 = U``, ``v_m = -sum_{j=1}^m U^{bj}/j! * v_{m-j}^{(j)}``."""
    if b < 1 or order < 0:
        raise DomainError("need b >= 1 and order >= 0")
    Ub = U.power(b)
    powers = [MultiPoly.constant(U.ring, 1)]
    for _ in range(order):
        powers.append(powers[-1] * Ub)
    vs = [U]
    for m in range(1, order + 1):
        acc = MultiPoly.zero(U.ring)
        for j in range(1, m + 1):
            acc = acc + powers[j] * vs[m - j].derivative("Y", j) * Fraction(1, factorial(j))
        vs.append(-acc)
    return vs


def w_recursive(n: int, lam: int, U: MultiPoly) -> MultiPoly:
    """``w_{n,lam}`` from ``w_{n,lam} = (lam-n+2) U' w_{n-1,lam} + U w_{n-1,lam}'``."""
    if n < 0 or lam < 0:
        raise DomainError("need n >= 0 and lam >= 0")
    dU = U.derivative("Y")
    w = MultiPoly.constant(U.ring, Fraction(1, lam + 1))
    for k in range(1, n + 1):
        w = dU * w * (lam - k + 2) + U * w.derivative("Y")
    return w


def index_set(n: int, a: int):
    """All ``(k_0..k_a) >= 0`` with ``sum k_j = n`` and ``sum j*k_j = n``."""
    out = []

    def rec(j, left_count, left_weight, acc):
        if j > a:
            if left_count == 0 and left_weight == 0:
                out.append(tuple(acc))
            return
        top = left_count if j == 0 else min(left_count, left_weight // j)
        for k in range(top + 1):
            rec(j + 1, left_count - k, left_weight - j * k, acc + [k])

    rec(0, n, n, [])
    return out


@dataclass(frozen=True)
class DerivBasisCoeffs:
    n: int
    lam: int
    a: int
    table: dict  # multi-index -> Fraction

    def expand(self, U: MultiPoly) -> MultiPoly:
        """``sum q_k * prod_j (U^{(j)})^{k_j}``."""
        return sum((derivative_monomial(U, k) * q for k, q in self.table.items()),
                   MultiPoly.zero(U.ring))

    def all_positive(self):
        return all(q > 0 for q in self.table.values())


def derivative_monomial(U: MultiPoly, ks) -> MultiPoly:
    result = MultiPoly.constant(U.ring, 1)
    der = U
    for k in ks:
        if k:
            result = result * der.power(k)
        der = der.derivative("Y")
    return result


def w_basis(n: int, lam: int, a: int) -> DerivBasisCoeffs:
    """Coefficients of ``w_{n,lam}`` in the derivative-monomial basis.

    From level ``n-1`` an entry ``k -> q`` contributes ``(lam-n+2) q`` at
    ``k + e_1`` and ``k_j q`` at ``k + e_0 - e_j + e_{j+1}`` for ``j < a``
    (``U^{(a+1)} = 0`` kills ``j = a``).
    """
    if n < 0 or lam < 0 or a < 1:
        raise DomainError("need n >= 0, lam >= 0, a >= 1")
    table = {(0,) * (a + 1): Fraction(1, lam + 1)}
    for level in range(1, n + 1):
        nxt = {}
        for k, q in table.items():
            up = list(k)
            up[1] += 1
            up = tuple(up)
            nxt[up] = nxt.get(up, 0) + (lam - level + 2) * q
            for j in range(a):
                if k[j]:
                    sh = list(k)
                    sh[0] += 1
                    sh[j] -= 1
                    sh[j + 1] += 1
                    sh = tuple(sh)
                    nxt[sh] = nxt.get(sh, 0) + k[j] * q
        table = nxt
    return DerivBasisCoeffs(n, lam, a, {k: Fraction(q) for k, q in sorted(table.items())})


def solve_exact(rows, rhs):
    """Gauss-Jordan solve over the rationals for a tall system.

    Returns the unique solution, or ``None`` if the columns are dependent or
    the system is inconsistent.
    """
    m = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    piv_row = 0
    for col in range(ncols):
        pivot = next((i for i in range(piv_row, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            return None
        m[piv_row], m[pivot] = m[pivot], m[piv_row]
        p = m[piv_row][col]
        m[piv_row] = [x / p for x in m[piv_row]]
        for i in range(len(m)):
            if i != piv_row and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [x - factor * y for x, y in zip(m[i], m[piv_row])]
        piv_row += 1
    if any(row[-1] != 0 for row in m[piv_row:]):
        return None
    return [m[i][-1] for i in range(ncols)]


def spot_check_basis(n: int, lam: int, a: int, rng, points=3):
    """Recover the basis coefficients numerically at random rational u-points.

    The Y-coefficients of each basis product at ``points`` random points form
    the columns of a linear system whose right side comes from
    ``w_recursive``; returns ``{multi-index: solved coefficient}`` or ``None``
    when the sampled system does not determine the coefficients.
    """
    ring = VarTable(a)
    keys = index_set(n, a)
    rows, rhs = [], []
    for _ in range(points):
        x = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(a)]
        x.append(Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5)))
        U = u_poly(ring).evaluate_u(x)
        cols = [derivative_monomial(U, k).coefficients_in("Y") for k in keys]
        target = w_recursive(n, lam, U).coefficients_in("Y")
        for deg in range(n * (a - 1) + 1):
            rows.append([c[deg].constant_value() if deg in c else 0 for c in cols])
            rhs.append(target[deg].constant_value() if deg in target else 0)
    sol = solve_exact(rows, rhs)
    if sol is None:
        return None
    return dict(zip(keys, sol))


def lemma_S(n: int, k: int, m: int, r: int, U: MultiPoly, b: int) -> MultiPoly:
    """``sum_{j=0}^m (-1)^j C(m,j) w_{k,(m+r-j)b}^{(n)}``, which vanishes identically."""
    if not (1 <= k <= m) or n < 0 or r < 0 or b < 1:
        raise DomainError("need 1 <= k <= m, n >= 0, r >= 0, b >= 1")
    acc = MultiPoly.zero(U.ring)
    for j in range(m + 1):
        w = w_recursive(k, (m + r - j) * b, U).derivative("Y", n)
        acc = acc + w * ((-1) ** j * comb(m, j))
    return acc


def v_closed(m: int, n: int, U: MultiPoly, b: int) -> MultiPoly:
    """``(-1)^m/m! * U^(bm-m-n+1) * w_{m+n,bm}``, the n-th derivative of ``v_m``."""
    if m < 0 or n < 0:
        raise DomainError("need m, n >= 0")
    e = b * m - m - n + 1
    if e < 0:
        raise DomainError(f"U-exponent {e} is negative; closed form is not a polynomial here")
    return U.power(e) * w_recursive(m + n, b * m, U) * Fraction((-1) ** m, factorial(m))


def closed_form_matches(m: int, n: int, U: MultiPoly, b: int, vm: MultiPoly) -> bool:
    """Check ``v_m^{(n)} = (-1)^m/m! U^(bm-m-n+1) w_{m+n,bm}`` for a given ``v_m``.

    Where the U-exponent is negative the identity is checked with the
    denominator cleared, ``(-1)^m m! U^k v_m^{(n)} = w_{m+n,bm}``.
    """
    e = b * m - m - n + 1
    lhs = vm.derivative("Y", n)
    if e >= 0:
        return lhs == v_closed(m, n, U, b)
    return lhs * U.power(-e) * ((-1) ** m * factorial(m)) == w_recursive(m + n, b * m, U)
