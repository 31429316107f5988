"""Random generators and independent oracles shared by the test modules."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from polyaut.algebra import MultiPoly, VarTable, u_poly
from polyaut.planemap import PlaneMap, compose_all
from polyaut.triangular import check_m_triangular, is_linear, is_m_triangular

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def poly_strategy(ring, max_terms=5, max_exp=3, variables=None):
    """Hypothesis strategy for polynomials with small nonnegative exponents
    (and, for Laurent variables, small negative ones)."""
    names = ring.names if variables is None else variables
    idx = [ring.index(n) for n in names]

    def exps(vals):
        e = [0] * ring.nvars
        for i, v in zip(idx, vals):
            e[i] = v
        return tuple(e)

    one_exp = st.tuples(*[
        st.integers(-2 if ring.is_laurent(n) else 0, max_exp) for n in names
    ]).map(exps)
    return st.dictionaries(one_exp, small_rationals, max_size=max_terms).map(
        lambda t: MultiPoly(ring, t))


def random_poly(rng, ring, variables, nterms=4, max_exp=3, negative=()):
    terms = {}
    for _ in range(nterms):
        e = [0] * ring.nvars
        for v in variables:
            lo = -2 if v in negative else 0
            e[ring.index(v)] = rng.randint(lo, max_exp)
        terms[tuple(e)] = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
    return MultiPoly(ring, terms)


def random_m_triangular(rng, a, m, d, ring=None):
    """A random m-triangular polynomial of Y-degree d built straight from the
    coefficient pattern (window coefficients plus arbitrary lower ones)."""
    ring = ring or VarTable(a)
    Y = MultiPoly.var(ring, "Y")
    ua = MultiPoly.var(ring, f"u{a}")
    P = MultiPoly.zero(ring)
    for l in range(d - a, d + 1):
        i = a - d + l
        q = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        p_l = ua ** (m - 1) * MultiPoly.var(ring, f"u{i}") * q
        higher = [f"u{j}" for j in range(i + 1, a + 1)]
        if l < d and higher and rng.random() < 0.8:
            p_l = p_l + random_poly(rng, ring, higher, nterms=rng.randint(1, 3), max_exp=2)
        P = P + p_l * Y ** l
    for l in range(0, d - a):
        allu = [f"u{j}" for j in range(a + 1)]
        P = P + random_poly(rng, ring, allu, nterms=2, max_exp=2, negative={f"u{a}"}) * Y ** l
    return P


def random_linear(rng, a, ring=None):
    ring = ring or VarTable(a)
    d = rng.randint(0, a)
    Y = MultiPoly.var(ring, "Y")
    return sum((MultiPoly.var(ring, f"u{a - d + l}") * Fraction(rng.randint(1, 6), rng.randint(1, 3)) * Y ** l
                for l in range(d + 1)), MultiPoly.zero(ring))


def derivative_product(U, ks):
    out = MultiPoly.constant(U.ring, 1)
    for j, k in enumerate(ks):
        out = out * U.derivative("Y", j) ** k
    return out


def random_triangular_map(rng, ring, degree):
    coeffs = [Fraction(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(degree)]
    coeffs.append(Fraction(rng.choice([-3, -2, -1, 1, 2, 3])))
    r = rng.choice([1, -1, 2, Fraction(1, 2)])
    s = rng.choice([1, -1, 3])
    return PlaneMap.triangular(ring, coeffs, r, s, rng.randint(-2, 2))


def random_affine_nontriangular(rng, ring):
    """Invertible affine map outside the triangular subgroup (Y-image depends on X)."""
    X, Y = MultiPoly.var(ring, "X"), MultiPoly.var(ring, "Y")
    while True:
        al, be, de, ep = (rng.randint(-3, 3) for _ in range(4))
        if de != 0 and al * ep - be * de != 0:
            return PlaneMap(X * al + Y * be + rng.randint(-2, 2), X * de + Y * ep + rng.randint(-2, 2))


def random_word(rng, ring, length):
    """Alternating word A0 T1 A1 ... Tn An with nontriangular interior affines."""
    maps, degrees = [], []
    if rng.random() < 0.5:
        maps.append(random_affine_nontriangular(rng, ring))
    for i in range(length):
        deg = rng.randint(2, 4)
        degrees.append(deg)
        maps.append(random_triangular_map(rng, ring, deg))
        if i < length - 1 or rng.random() < 0.5:
            maps.append(random_affine_nontriangular(rng, ring))
    return compose_all(maps), tuple(degrees)


# sympy oracles ------------------------------------------------------------

def to_sympy(p):
    syms = sympy.symbols(" ".join(p.ring.names))
    expr = sympy.Integer(0)
    for e, c in p.items():
        term = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return sympy.expand(expr)


def sym_vars(a):
    X, Y, Z = sympy.symbols("X Y Z")
    us = sympy.symbols(" ".join(f"u{j}" for j in range(a + 1)))
    if a == 0:
        us = (us,)
    U = sum(us[j] * Y ** j for j in range(a + 1))
    return X, Y, Z, us, U


# triangular closure properties ---------------------------------------------
# each takes an rng, builds one random instance and returns True if the
# property holds on it

def _rand_q(rng):
    return Fraction(rng.randint(1, 9), rng.randint(1, 4))


def closure_sum(rng):
    a, m = rng.randint(1, 3), rng.randint(1, 3)
    d = rng.randint(a, a + 3)
    P, Q = random_m_triangular(rng, a, m, d), random_m_triangular(rng, a, m, d)
    w = check_m_triangular(P + Q, m)
    return bool(w) and w.d == d


def closure_product(rng):
    a, m, n = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3)
    P = random_m_triangular(rng, a, m, rng.randint(a, a + 2))
    Q = random_m_triangular(rng, a, n, rng.randint(a, a + 2))
    w = check_m_triangular(P * Q, m + n)
    return bool(w) and w.d == P.degree("Y") + Q.degree("Y")


def closure_scaling(rng):
    a, m = rng.randint(1, 3), rng.randint(1, 3)
    q = _rand_q(rng)
    P = random_m_triangular(rng, a, m, rng.randint(a, a + 3))
    Q = random_linear(rng, a)
    return is_m_triangular(P * q, m) and is_linear(Q * q)


def closure_derivative(rng):
    a, m = rng.randint(1, 3), rng.randint(1, 3)
    P = random_m_triangular(rng, a, m, rng.randint(a + 1, a + 4))
    Q = random_linear(rng, a)
    while Q.degree("Y") == 0:
        Q = random_linear(rng, a)
    return is_m_triangular(P.derivative("Y"), m) and is_linear(Q.derivative("Y"))


def closure_mixed_product(rng):
    a, m = rng.randint(1, 3), rng.randint(1, 3)
    P = random_m_triangular(rng, a, m, rng.randint(a, a + 3))
    Q = random_linear(rng, a)
    return is_m_triangular(P * Q, m + 1)


def closure_derivative_products(rng):
    """Both the general statement and the balanced special case with its degree."""
    from polyaut.inverse import index_set
    a, m = rng.randint(1, 3), rng.randint(1, 3)
    d = rng.randint(a, a + 2)
    ring = VarTable(a)
    P = random_m_triangular(rng, a, m, d, ring)
    U = u_poly(ring)
    ks = [rng.randint(0, 2) for _ in range(a + 1)]
    if not is_m_triangular(P * derivative_product(U, ks), m + sum(ks)):
        return False
    n = rng.randint(1, 4)
    ks = rng.choice(index_set(n, a))
    w = check_m_triangular(P * derivative_product(U, ks), m + n)
    return bool(w) and w.d == d + (a - 1) * n


CLOSURE_PROPERTIES = {
    "sum": closure_sum,
    "product": closure_product,
    "scaling": closure_scaling,
    "derivative": closure_derivative,
    "mixed product": closure_mixed_product,
    "derivative products": closure_derivative_products,
}
