from fractions import Fraction as Fr

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from exvoa.errors import SingularMatrix
from exvoa.kernel import (C, Matrix, RatFunc, UniPoly, as_fraction, bareiss, determinant,
                          poly_gcd, rational_roots, rational_roots_bruteforce, real_root_intervals,
                          solve_linear)

x = sympy.Symbol("x")

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(small, min_size=0, max_size=6).map(UniPoly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def to_sympy(p: UniPoly):
    return sum(sympy.Rational(a.numerator, a.denominator) * x**i for i, a in enumerate(p.coeffs))


def from_sympy(e) -> UniPoly:
    coeffs = sympy.Poly(e, x).all_coeffs()[::-1]
    return UniPoly([Fr(int(sympy.numer(a)), int(sympy.denom(a))) for a in coeffs])


def test_parse_fraction_strings():
    assert as_fraction("47/2") == Fr(47, 2)
    assert as_fraction(" -22/5 ") == Fr(-22, 5)
    assert as_fraction(3) == Fr(3)


def test_poly_basics():
    p = UniPoly([1, 2, 3])
    assert p.degree == 2 and p.lead == 3
    assert p(2) == 17
    assert (C * C - UniPoly.const(1)) == UniPoly.from_roots([1, -1])
    assert p.derivative() == UniPoly([2, 6])
    assert UniPoly().degree < 0 and not UniPoly()
    assert p(C + UniPoly.const(1)) == UniPoly([6, 8, 3])


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_mul_matches_sympy(a, b):
    prod = a * b
    if prod.is_zero():
        assert a.is_zero() or b.is_zero()
    else:
        assert prod == from_sympy(sympy.expand(to_sympy(a) * to_sympy(b)))


@given(polys, nonzero_polys)
@settings(max_examples=60, deadline=None)
def test_divmod_identity(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(nonzero_polys, nonzero_polys)
@settings(max_examples=40, deadline=None)
def test_gcd_matches_sympy(a, b):
    g = poly_gcd(a, b)
    ref = from_sympy(sympy.gcd(to_sympy(a), to_sympy(b)) + 0 * x) if a.degree or b.degree else None
    if ref is not None and not ref.is_zero():
        assert g.monic() == ref.monic()
    assert (a % g).is_zero() and (b % g).is_zero()


@given(nonzero_polys, nonzero_polys, nonzero_polys)
@settings(max_examples=40, deadline=None)
def test_ratfunc_field_laws(a, b, d):
    f, g = RatFunc(a, d), RatFunc(b, d)
    assert (f + g) - g == f
    assert (f * g) / g == f
    assert f * (g + RatFunc(1)) == f * g + f
    assert f.den.lead == 1


def test_ratfunc_reduction_and_poles():
    f = RatFunc(C * C - UniPoly.const(1), C - UniPoly.const(1))
    assert f.is_poly() and f.num == C + UniPoly.const(1)
    g = RatFunc(UniPoly.const(1), C)
    assert g(Fr(2)) == Fr(1, 2)
    with pytest.raises(ZeroDivisionError):
        g(0)


def _rand_matrix(rows):
    return Matrix.from_rows([[Fr(v) for v in r] for r in rows])


@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4))
@settings(max_examples=60, deadline=None)
def test_bareiss_determinant_matches_sympy(rows):
    m = _rand_matrix(rows)
    assert determinant(m) == int(sympy.Matrix(rows).det())


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-9, 9), min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_bareiss_solution(rows, rhs):
    m = _rand_matrix(rows)
    det = sympy.Matrix(rows).det()
    if det == 0:
        return
    y, _, d = bareiss(m, [Fr(v) for v in rhs])
    sol = [a / d for a in y]
    ref = sympy.Matrix(rows).LUsolve(sympy.Matrix(rhs))
    assert sol == [Fr(int(sympy.numer(v)), int(sympy.denom(v))) for v in ref]


def test_polynomial_matrix_solve():
    # [[c, 1], [1, c]] y = [1, 0]  ->  y = [c, -1]/(c^2 - 1)
    one = UniPoly.const(1)
    m = Matrix.from_rows([[C, one], [one, C]])
    sol, det = solve_linear(m, [one, UniPoly()])
    assert sol[0] == RatFunc(C, C * C - one)
    assert sol[1] == RatFunc(-one, C * C - one)
    assert det == RatFunc(C * C - one)


def test_singular_matrix_raises():
    m = Matrix.from_rows([[Fr(1), Fr(2)], [Fr(2), Fr(4)]])
    with pytest.raises(SingularMatrix):
        solve_linear(m, [Fr(1), Fr(1)])


roots = st.lists(st.fractions(min_value=-30, max_value=30, max_denominator=9), min_size=1, max_size=5)


@given(roots, st.lists(st.integers(-5, 5), min_size=0, max_size=3))
@settings(max_examples=60, deadline=None)
def test_rational_roots_recovered(rs, extra):
    # an irreducible-ish cofactor with no rational roots: x^2 + k^2 + 1
    p = UniPoly.from_roots(rs)
    for k in extra:
        p = p * (C * C + UniPoly.const(k * k + 1))
    assert rational_roots(p) == sorted(rs)  # with multiplicity


@given(st.lists(st.integers(-12, 12), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_rational_roots_two_routes(rs):
    p = UniPoly.from_roots([Fr(r, 3) for r in rs]) * (C * C - UniPoly.const(2))
    assert rational_roots(p) == rational_roots_bruteforce(p)


def test_real_root_intervals_isolate():
    p = (C * C - UniPoly.const(2)) * (C - UniPoly.const(5))
    iv = real_root_intervals(p, Fr(1, 10**6))
    assert len(iv) == 3
    for (lo, hi), r in zip(iv, sorted([-2 ** 0.5, 2 ** 0.5, 5.0])):
        assert float(lo) <= r <= float(hi) and hi - lo <= Fr(1, 10**6)
