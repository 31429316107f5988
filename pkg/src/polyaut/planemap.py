"""Plane polynomial maps and their Jung-van der Kulk factorization.

A :class:`PlaneMap` ``(f, g)`` stands for the endomorphism ``X -> f, Y -> g``.
Products are written outermost-first: ``compose(s, t)`` substitutes ``t``
into ``s``, so the word ``t3 * pi * t2 * pi * t1`` is
``compose(t3, compose(pi, compose(t2, compose(pi, t1))))`` and its polydegree
is listed in that same left-to-right order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .algebra import MultiPoly, VarTable, as_rational
from .errors import RingMismatch, NotAutomorphism, NegativeZPower, DomainError


@dataclass(frozen=True)
class PlaneMap:
    f: MultiPoly
    g: MultiPoly

    def __post_init__(self):
        if self.f.ring != self.g.ring:
            raise RingMismatch("components of a plane map must share one ring")

    @property
    def ring(self) -> VarTable:
        return self.f.ring

    @classmethod
    def identity(cls, ring):
        return cls(MultiPoly.var(ring, "X"), MultiPoly.var(ring, "Y"))

    @classmethod
    def swap(cls, ring):
        """The involution ``pi = (Y, X)``."""
        return cls(MultiPoly.var(ring, "Y"), MultiPoly.var(ring, "X"))

    @classmethod
    def triangular(cls, ring, coeffs, r=1, s=1, t=0):
        """``(r*X + sum coeffs[j] Y^j, s*Y + t)``."""
        from .algebra import poly_in_y

        X = MultiPoly.var(ring, "X")
        Y = MultiPoly.var(ring, "Y")
        return cls(X * r + poly_in_y(ring, coeffs), Y * s + t)

    def degree(self):
        """max of the total (X,Y)-degrees of the components; other variables are coefficients."""
        return max(self.f.degree_xy(), self.g.degree_xy())

    def with_ring(self, ring):
        return PlaneMap(self.f.with_ring(ring), self.g.with_ring(ring))

    def evaluate(self, values):
        return PlaneMap(self.f.evaluate(values), self.g.evaluate(values))

    def __iter__(self):
        return iter((self.f, self.g))

    def __str__(self):
        return f"({self.f}, {self.g})"


def compose(outer: PlaneMap, inner: PlaneMap) -> PlaneMap:
    """``outer`` after ``inner``: substitute ``inner`` for ``(X, Y)`` in ``outer``."""
    if outer.ring != inner.ring:
        raise RingMismatch(f"{outer.ring} vs {inner.ring}")
    images = {"X": inner.f, "Y": inner.g}
    return PlaneMap(outer.f.substitute_many(images), outer.g.substitute_many(images))


def compose_all(maps):
    """Left-to-right product of a nonempty list of maps, outermost first."""
    maps = list(maps)
    return reduce(lambda acc, m: compose(m, acc), reversed(maps[:-1]), maps[-1])


def jacobian(sigma: PlaneMap) -> MultiPoly:
    f, g = sigma.f, sigma.g
    return f.derivative("X") * g.derivative("Y") - f.derivative("Y") * g.derivative("X")


def limit_mod_Z(sigma: PlaneMap) -> PlaneMap:
    """Image modulo Z; raises :class:`NegativeZPower` if a component has ``Z^-k``."""
    for comp in sigma:
        if comp.min_degree("Z") < 0:
            raise NegativeZPower("negative power of Z: the family does not extend over Z = 0")
    ring = sigma.ring.without_laurent_z()
    return PlaneMap(sigma.f.truncate_z(0).with_ring(ring), sigma.g.truncate_z(0).with_ring(ring))


def dimension(d) -> int:
    return sum(d) + 6


def preceq(d: int, e) -> bool:
    """Order between a length-one polydegree ``(d)`` and ``e`` of length 2 or 3."""
    e = tuple(e)
    if len(e) == 2:
        return d <= e[0] + e[1] - 1
    if len(e) == 3:
        return d <= e[0] + e[1] + e[2] - 2
    raise ValueError(f"preceq supports polydegrees of length 2 or 3, got {len(e)}")


@dataclass(frozen=True)
class Factor:
    kind: str  # "affine" or "triangular"
    map: PlaneMap

    @property
    def degree(self):
        return self.map.degree()


@dataclass(frozen=True)
class Factorization:
    factors: tuple
    polydegree: tuple = field(default=())

    def recompose(self) -> PlaneMap:
        return compose_all(f.map for f in self.factors)


def _leading_form(p):
    return p.homogeneous_xy(p.degree_xy())


def _power_ratio(lf, lg, k):
    """The scalar c with ``lf == c * lg**k``, or ``None``."""
    (ef, cf) = max(lf.items(), key=lambda t: t[0])
    (eg, cg) = max(lg.items(), key=lambda t: t[0])
    c = Fraction(cf) / Fraction(cg) ** k
    if lf == lg.power(k) * c:
        return c
    return None


def _require_plane(sigma):
    for comp in sigma:
        extra = comp.variables() - {"X", "Y"}
        if extra:
            raise DomainError(
                f"decompose works over the rationals; specialize {sorted(extra)} first")


def decompose(sigma: PlaneMap) -> Factorization:
    """Factor an automorphism of Q[X,Y] into affine and triangular pieces.

    Greedy leading-form reduction.  At each stage the component of larger
    degree is reduced by scalar multiples of powers of the other one; the
    subtracted powers of one chain form a single triangular factor.  A
    completed reduction ending in an invertible affine map is itself the
    proof of invertibility, so the Jacobian is only computed to explain a
    failure.
    """
    _require_plane(sigma)
    if sigma.f.degree_xy() <= 0 or sigma.g.degree_xy() <= 0:
        raise NotAutomorphism("a component is constant")
    try:
        steps = _reduce(sigma)
    except NotAutomorphism as exc:
        jac = jacobian(sigma)
        if not jac.is_constant() or jac.is_zero():
            raise NotAutomorphism(f"Jacobian {jac} is not a nonzero constant") from None
        raise exc

    merged = []
    for kind, m in steps:
        if merged and kind == "affine" and merged[-1][0] == "affine":
            merged[-1] = ("affine", compose(merged[-1][1], m))
        else:
            merged.append((kind, m))
    factors = tuple(Factor(kind, m) for kind, m in merged)
    poly = tuple(fa.degree for fa in factors if fa.kind == "triangular")
    result = Factorization(factors, poly)
    if result.recompose() != sigma:
        raise AssertionError("factorization does not recompose to the input")
    return result


def _reduce(sigma):
    """Steps ``(kind, map)``, outermost first, whose composite is ``sigma``."""
    ring = sigma.ring
    pi = PlaneMap.swap(ring)
    steps = []  # outermost first
    f, g = sigma.f, sigma.g
    while max(f.degree_xy(), g.degree_xy()) > 1:
        if f.degree_xy() < g.degree_xy():
            steps.append(("affine", pi))
            f, g = g, f
        chain = {}
        dg = g.degree_xy()
        lg = _leading_form(g)
        while f.degree_xy() >= 2 and f.degree_xy() >= dg:
            df = f.degree_xy()
            if df % dg:
                raise NotAutomorphism(f"degree {df} is not a multiple of {dg}")
            k = df // dg
            c = _power_ratio(_leading_form(f), lg, k)
            if c is None:
                raise NotAutomorphism("leading form is not a scalar multiple of a power")
            chain[k] = chain.get(k, 0) + c
            f = f - g.power(k) * c
        tri_coeffs = [0] * (max(chain) + 1)
        for k, c in chain.items():
            tri_coeffs[k] = c
        tri = PlaneMap.triangular(ring, tri_coeffs)
        steps.append(("triangular" if len(tri_coeffs) > 2 else "affine", tri))
        if f.degree_xy() <= 0:
            raise NotAutomorphism("reduction produced a constant component")
    last = PlaneMap(f, g)
    if jacobian(last).is_zero():
        raise NotAutomorphism("reduction ends in a singular affine map")
    steps.append(("affine", last))
    return steps


def polydegree(sigma: PlaneMap) -> tuple:
    return decompose(sigma).polydegree


def specialize_z(sigma: PlaneMap, z0) -> PlaneMap:
    """Evaluate Z at a nonzero rational and drop the Z Laurent flag."""
    z0 = as_rational(z0)
    if z0 == 0:
        raise DomainError("Z must specialize to a nonzero value")
    ring = sigma.ring.without_laurent_z()
    return PlaneMap(sigma.f.evaluate({"Z": z0}).with_ring(ring),
                    sigma.g.evaluate({"Z": z0}).with_ring(ring))
