"""Degeneration families: a triangular map of degree cd+a as the Z -> 0 limit
of maps of polydegree (cd-1, b, a).

Given ``tau = (rX + sum y_j Y^j, sY + t)`` of degree ``cd+a`` (with
``d = ab-1``), :func:`build_family` finds a specialization ``x`` of the
u-variables matching the top coefficients, then assembles

    tau1 = (Z^c X + Ubar(Y), Y)
    tau2 = (X + Z Y^b, Y)
    tau3 = (r Z^-c (X - V(Y,Z)) - E(Y) + Z Y^(cd-1), sY + t)
    sigma_Z = tau3 . pi . tau2 . pi . tau1

over the ring with Z Laurent.  :func:`verify_family` then checks, exactly,
that the negative powers of Z cancel and that the limit at Z = 0 is ``tau``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .algebra import MultiPoly, VarTable, as_rational, u_poly, poly_in_y
from .errors import DegreeMismatch, DomainError, NoRationalRoot, NotAutomorphism, NegativeZPower
from .inverse import v_sequence
from .planemap import (PlaneMap, compose_all, decompose, dimension, jacobian,
                       limit_mod_Z, preceq, specialize_z)
from .triangular import check_m_triangular, solve_top


@dataclass(frozen=True)
class FamilyParams:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a < 2 or self.b < 2 or self.c < 1:
            raise DomainError("need a, b >= 2 and c >= 1")

    @property
    def d(self):
        return self.a * self.b - 1

    @property
    def source_degree(self):
        return self.c * self.d + self.a

    @property
    def top_degree(self):
        """Degree of tau3, the outermost factor."""
        return self.c * self.d - 1

    @property
    def root_exponent(self):
        return self.b * self.c + 1

    @property
    def target_polydegree(self):
        return (self.top_degree, self.b, self.a)


@dataclass(frozen=True)
class TargetTriangular:
    """``(r X + sum y[j] Y^j, s Y + t)``."""

    r: Fraction
    y: tuple
    s: Fraction
    t: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "r", as_rational(self.r))
        object.__setattr__(self, "s", as_rational(self.s))
        object.__setattr__(self, "t", as_rational(self.t))
        object.__setattr__(self, "y", tuple(as_rational(v) for v in self.y))
        if self.r == 0 or self.s == 0:
            raise DomainError("r and s must be nonzero")
        if not self.y or self.y[-1] == 0:
            raise DomainError("leading coefficient y_top must be nonzero")

    @property
    def degree(self):
        return len(self.y) - 1

    def to_map(self, ring: VarTable) -> PlaneMap:
        return PlaneMap.triangular(ring, self.y, self.r, self.s, self.t)

    @classmethod
    def from_map(cls, m: PlaneMap):
        """Read off ``r, y, s, t``; raises :class:`DomainError` if ``m`` is not of that shape."""
        f, g = m.f, m.g
        if (f.variables() | g.variables()) - {"X", "Y"}:
            raise DomainError("target map must have rational coefficients in X, Y")
        if g.degree("X") > 0 or g.degree("Y") != 1 or g.degree() > 1:
            raise DomainError("second component must be s*Y + t")
        fx = f.coefficients_in("X")
        if set(fx) - {0, 1} or 1 not in fx or not fx[1].is_constant():
            raise DomainError("first component must be r*X + P(Y)")
        r = fx[1].constant_value()
        py = fx.get(0, MultiPoly.zero(f.ring)).coefficients_in("Y")
        deg = max(py) if py else 0
        y = [py[j].constant_value() if j in py else 0 for j in range(deg + 1)]
        gy = g.coefficients_in("Y")
        return cls(r, tuple(y), gy[1].constant_value(), gy[0].constant_value() if 0 in gy else 0)


@dataclass(frozen=True)
class FamilyResult:
    params: FamilyParams
    target: TargetTriangular
    x: tuple
    Ubar: MultiPoly
    vbar: tuple  # specialized v_0 .. v_c
    V: MultiPoly
    E: MultiPoly
    tau1: PlaneMap
    tau2: PlaneMap
    tau3: PlaneMap
    sigmaZ: PlaneMap

    @property
    def ring(self):
        return self.sigmaZ.ring


def family_ring(a: int) -> VarTable:
    return VarTable(a).with_laurent_z()


def _sign_fact(c):
    return (-1) ** c * factorial(c)


def top_witness(p: FamilyParams):
    """Symbolic ``v_0..v_c`` and the triangular witness of ``(-1)^c c! v_c``."""
    U = u_poly(VarTable(p.a))
    vs = v_sequence(U, p.b, p.c)
    P = vs[p.c] * _sign_fact(p.c)
    w = check_m_triangular(P, p.root_exponent)
    if not w:
        raise AssertionError(f"(-1)^c c! v_c failed the triangularity check: {w}")
    if w.d != p.source_degree:
        raise DegreeMismatch(f"deg v_c = {w.d}, expected {p.source_degree}")
    return U, vs, P, w


def solvability_condition(p: FamilyParams, r=1, k=1):
    """Text of the root condition and a valid leading coefficient for ``x_a = k``."""
    _, _, _, w = top_witness(p)
    r = as_rational(r)
    sf = _sign_fact(p.c)
    sample = as_rational(Fraction(r) * w.q_top * Fraction(k) ** p.root_exponent / sf)
    cond = (f"x_{p.a}^{p.root_exponent} = ({sf}) * y_{p.source_degree} / ({w.q_top} * r) "
            f"must have a rational solution")
    return cond, sample


def build_family(p: FamilyParams, tau: TargetTriangular) -> FamilyResult:
    if tau.degree != p.source_degree:
        raise DomainError(f"target has degree {tau.degree}, expected cd+a = {p.source_degree}")
    a, c = p.a, p.c
    U, vs, P, witness = top_witness(p)
    lo = c * p.d
    tl = Fraction(tau.r) / _sign_fact(c)
    try:
        x = solve_top(P, p.root_exponent, [tl] * (a + 1), tau.y[lo:lo + a + 1], witness=witness)
    except NoRationalRoot as exc:
        cond, sample = solvability_condition(p, tau.r)
        raise NoRationalRoot(f"{exc}. Condition: {cond}; e.g. y_{p.source_degree} = {sample}") from None
    return assemble_family(p, tau, x, vs)


def assemble_family(p: FamilyParams, tau: TargetTriangular, x, vs=None) -> FamilyResult:
    """Build all intermediates for a specialization ``x`` already matched to ``tau``."""
    a, b, c = p.a, p.b, p.c
    if vs is None:
        vs = v_sequence(u_poly(VarTable(a)), b, c)
    ring = family_ring(a)
    vbar = tuple(v.evaluate_u(x).with_ring(ring) for v in vs)
    Ubar = vbar[0]
    E = vbar[c] * tau.r - poly_in_y(ring, tau.y)
    if E.degree("Y") > p.top_degree:
        raise DegreeMismatch(f"deg E = {E.degree('Y')} exceeds cd-1 = {p.top_degree}")
    X = MultiPoly.var(ring, "X")
    Y = MultiPoly.var(ring, "Y")
    Z = MultiPoly.var(ring, "Z")
    V = sum((vbar[k] * Z ** k for k in range(c)), MultiPoly.zero(ring))
    tau1 = PlaneMap(Z ** c * X + Ubar, Y)
    tau2 = PlaneMap(X + Z * Y ** b, Y)
    tau3 = PlaneMap((X - V) * Z ** (-c) * tau.r - E + Z * Y ** p.top_degree, Y * tau.s + tau.t)
    pi = PlaneMap.swap(ring)
    sigma = compose_all([tau3, pi, tau2, pi, tau1])
    res = FamilyResult(p, tau, tuple(x), Ubar, vbar, V, E, tau1, tau2, tau3, sigma)
    if not cancellation_holds(res):
        raise AssertionError("Ubar(Y) - V(W, Z) != vbar_c(Y) Z^c mod Z^(c+1)")
    return res


def target_from_x(p: FamilyParams, x, r=1, s=1, t=0, tail=None) -> TargetTriangular:
    """A target of degree cd+a whose top coefficients are matched by ``x``.

    Coefficients ``cd..cd+a`` are ``r * vbar_c``; lower ones come from ``tail``
    (zeros when omitted).
    """
    U = u_poly(VarTable(p.a))
    if as_rational(x[p.a]) == 0:
        raise DomainError("x_a must be nonzero")
    vc = v_sequence(U, p.b, p.c)[p.c].evaluate_u(x) * r
    coeffs = vc.coefficients_in("Y")
    lo = p.c * p.d
    y = [0] * (p.source_degree + 1)
    for j in range(lo, p.source_degree + 1):
        y[j] = coeffs[j].constant_value() if j in coeffs else 0
    for j, v in enumerate(tail or ()):
        if j >= lo:
            raise DomainError("tail may only set coefficients below cd")
        y[j] = v
    return TargetTriangular(r, tuple(y), s, t)


def cancellation_holds(res: FamilyResult) -> bool:
    """``Ubar(Y) - V(W(Y,Z), Z) == vbar_c(Y) Z^c`` modulo ``Z^(c+1)``, with
    ``W = Y + Z (Z^c X + Ubar(Y))^b``."""
    p, ring = res.params, res.ring
    c = p.c
    X = MultiPoly.var(ring, "X")
    Y = MultiPoly.var(ring, "Y")
    Z = MultiPoly.var(ring, "Z")
    W = (Y + Z * (Z ** c * X + res.Ubar).power(p.b, zmax=c)).truncate_z(c)
    lhs = (res.Ubar - res.V.substitute("Y", W, zmax=c)).truncate_z(c)
    return lhs == res.vbar[c] * Z ** c


@dataclass
class Check:
    name: str
    status: str  # "pass", "fail" or "degenerate"
    detail: str = ""

    @property
    def passed(self):
        return self.status == "pass"


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, "pass" if ok else "fail", detail))

    def text(self):
        lines = [self.title]
        for i, c in enumerate(self.checks, start=1):
            lines.append(f"[{c.status.upper():>10}] ({i}) {c.name}: {c.detail}".rstrip(": "))
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)

    def key_values(self):
        lines = [f"{k}={v}" for k, v in self.values.items()]
        lines += [f"check.{c.name}={c.status}" for c in self.checks]
        lines.append(f"overall={'pass' if self.passed else 'fail'}")
        return "\n".join(lines)


def _fmt_seq(seq):
    return "(" + ",".join(str(v) for v in seq) + ")"


def sample_nonzero_rational(rng):
    num = rng.choice([-1, 1]) * rng.randint(1, 9)
    return Fraction(num, rng.randint(1, 4))


def verify_family(res: FamilyResult, tau: TargetTriangular | None = None, seed=0,
                  max_resamples=5) -> Report:
    """Seven exact checks on a built family, reported individually."""
    p = res.params
    tau = res.target if tau is None else tau
    sigma = res.sigmaZ
    rep = Report(f"family a={p.a} b={p.b} c={p.c} d={p.d}")
    rep.values.update(a=p.a, b=p.b, c=p.c, d=p.d, x=_fmt_seq(res.x))

    neg = [str(i) for i, comp in ((1, sigma.f), (2, sigma.g)) if comp.min_degree("Z") < 0]
    rep.add("z_polynomial", not neg,
            "no negative powers of Z" if not neg else f"negative Z powers in component(s) {','.join(neg)}")

    jac = jacobian(sigma)
    expected = as_rational(tau.r * tau.s)
    ok = jac.is_constant() and jac.constant_value() == expected
    rep.add("jacobian", ok, f"jacobian = {jac}, expected r*s = {expected}")

    try:
        lim = limit_mod_Z(sigma)
        want = tau.to_map(lim.ring)
        mism = [n for n, u, v in (("X", lim.f, want.f), ("Y", lim.g, want.g)) if u != v]
        rep.add("limit", not mism, f"limit = {lim}" if not mism
                else f"limit mismatch in component(s) {','.join(mism)}: {lim} vs {want}")
    except NegativeZPower as exc:
        rep.add("limit", False, f"limit mismatch: {exc}")

    degs = (res.tau1.degree(), res.tau2.degree(), res.tau3.degree())
    want_degs = (p.a, p.b, p.top_degree)
    rep.add("factor_degrees", degs == want_degs,
            f"deg(tau1, tau2, tau3) = {_fmt_seq(degs)}, expected {_fmt_seq(want_degs)}")

    total = sigma.degree()
    want_total = p.a * p.b * p.top_degree
    rep.add("total_degree", total == want_total, f"deg sigma_Z = {total}, expected {want_total}")

    rep.checks.append(_generic_polydegree(res, seed, max_resamples, want_total))

    try:
        pd = decompose(tau.to_map(VarTable(p.a))).polydegree
        rep.add("target_polydegree", pd == (p.source_degree,),
                f"polydegree(tau) = {_fmt_seq(pd)}, expected ({p.source_degree})")
    except NotAutomorphism as exc:
        rep.add("target_polydegree", False, str(exc))
    return rep


def _generic_polydegree(res, seed, max_resamples, want_total):
    p = res.params
    want = p.target_polydegree
    rng = random.Random(seed)
    tried = []
    for _ in range(max_resamples + 1):
        z0 = sample_nonzero_rational(rng)
        tried.append(str(z0))
        special = specialize_z(res.sigmaZ, z0)
        if special.degree() != want_total:
            continue
        try:
            pd = decompose(special).polydegree
        except NotAutomorphism as exc:
            return Check("generic_polydegree", "fail", f"z0={z0}: {exc}")
        return Check("generic_polydegree", "pass" if pd == want else "fail",
                     f"z0={z0}: polydegree {_fmt_seq(pd)}, expected {_fmt_seq(want)}")
    return Check("generic_polydegree", "degenerate",
                 f"every sampled z0 ({', '.join(tried)}) lowered the degree")


@dataclass(frozen=True)
class CounterexampleReport:
    a: int
    c: int
    source: tuple
    target: tuple
    source_dim: int
    target_dim: int
    preceq: bool

    @property
    def degree_excess(self):
        """How far the source degree exceeds the preceq bound ``sum(target) - 2``."""
        return self.source[0] - (sum(self.target) - 2)

    @property
    def dimension_gap(self):
        return self.target_dim - self.source_dim

    def text(self):
        t = self.target
        return "\n".join([
            f"a={self.a} b=2 c={self.c} d={2 * self.a - 1}",
            f"source polydegree: {_fmt_seq(self.source)}",
            f"target polydegree: {_fmt_seq(t)} (for inverse maps: {_fmt_seq(t[::-1])})",
            f"dimensions: {self.source_dim} vs {self.target_dim} (gap {self.dimension_gap})",
            f"preceq: {str(self.preceq).lower()} ({self.source[0]} > {sum(t) - 2})",
            "closure inclusion holds (degeneration family) while preceq fails: counterexample",
        ])

    def key_values(self):
        return "\n".join([
            f"source={_fmt_seq(self.source)}",
            f"target={_fmt_seq(self.target)}",
            f"dim_source={self.source_dim}",
            f"dim_target={self.target_dim}",
            f"preceq={str(self.preceq).lower()}",
        ])


def counterexample_report(a: int, c: int) -> CounterexampleReport:
    p = FamilyParams(a, 2, c)
    src = (p.source_degree,)
    tgt = p.target_polydegree
    return CounterexampleReport(a, c, src, tgt, dimension(src), dimension(tgt), preceq(src[0], tgt))
