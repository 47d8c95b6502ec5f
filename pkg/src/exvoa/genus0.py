"""Genus-zero derivation of p_l(c) from the correlator <a, Y(u_i, x) Y(u_i-bar, y) b>.

For integer lowest primary weight l the correlator is G(x, y)/(x^2l y^2l (x-y)^2l)
with G symmetric homogeneous of degree 4l, G = sum_r A_r x^(4l-r) y^r and
A_r = A_(4l-r).  A_0..A_(l-1) come from the expansion in xi = -y/(x-y) using the
Virasoro expansion of b(2l-m-1)u-bar; the zero modes B_n of the Casimir vectors
lambda^(n) on the primary b fix A_l..A_2l.  Requiring lambda^(2l+2) to lie in
the Virasoro vacuum module then gives one linear equation for p_l.

Every quantity is expressed in units of <a, b>; B_n is linear in the formal
scalar p_l and is stored as the coefficient of p_l.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import Inconsistent
from .kernel import Matrix, RatFunc, UniPoly, as_fraction, solve_linear
from .virasoro import FockVector, _verma, casimir_fock


def gbinom(n, k: int) -> Fraction:
    """Generalized binomial coefficient binom(n, k) for any rational n and integer k."""
    if k < 0:
        return Fraction(0)
    n = as_fraction(n)
    out = Fraction(1)
    for i in range(k):
        out *= n - i
    return out / factorial(k)


def mu_fock(l, m: int) -> FockVector:
    """b(2l-m-1) u-bar as a vacuum descendant, per unit <b, u-bar>.

    L(k) b(n) u-bar = ((l-1)(k+1) - n) b(n+k) u-bar for k > 0 reproduces the
    Casimir pairing chain, so this is the same Gram solve as casimir_fock.
    """
    return casimir_fock(as_fraction(l), m)


def _primary_mode_chain(l: Fraction, k: int, part: tuple) -> Fraction:
    """<a, u(k) L(-part)|0>> / <a, u> for a primary u of weight l."""
    if not part:
        return Fraction(1) if k == -1 else Fraction(0)
    n1 = part[0]
    # u(k) L(-n) = L(-n) u(k) - [L(-n), u(k)], and <a, L(-n) X> = 0
    factor = -((l - 1) * (1 - n1) - k)
    if not factor:
        return Fraction(0)
    return factor * _primary_mode_chain(l, k - n1, part[1:])


def xi_coefficient(l, m: int) -> RatFunc:
    """Coefficient of xi^m in y^2l F(a, b; x, y), i.e. <a, u(m-1) b(2l-m-1) u-bar>, for m < l."""
    l = as_fraction(l)
    vec = mu_fock(l, m)
    total = RatFunc(0)
    for part, coef in vec.terms:
        f = _primary_mode_chain(l, m - 1, part)
        if f:
            total = total + RatFunc.coerce(coef) * f
    return total


def a_coefficients(l) -> list[RatFunc]:
    """A_0..A_(l-1) from xi^m coefficient = (-1)^m sum_{r<=m} A_r binom(2l-r, m-r)."""
    l = as_fraction(l)
    out: list[RatFunc] = []
    for m in range(int(l)):
        val = xi_coefficient(l, m) * ((-1) ** m)
        for r in range(m):
            val = val - out[r] * gbinom(2 * l - r, m - r)
        out.append(val)
    return out


# ---------------------------------------------------------------------------
# zero modes on the primary b
# ---------------------------------------------------------------------------
def _zero_mode_table(l: Fraction):
    alg = _verma(l)

    @lru_cache(maxsize=None)
    def E(part: tuple, m: int, state: tuple) -> UniPoly:
        """<a, (L(-part)|0>)(m) S> with S = dict(state) a descendant of b."""
        if not part:
            if m != -1:
                return UniPoly()
            for p, coef in state:
                if not p:
                    return coef
            return UniPoly()
        n = part[0]
        rest = part[1:]
        sign = 1 if n % 2 == 0 else -1
        level = max((sum(p) for p, _ in state), default=0)
        total = UniPoly()
        for j in range(0, level + 2):
            b = gbinom(1 - n, j)
            if not b:
                continue
            image = alg.apply(j - 1, dict(state))
            if not image:
                continue
            sub = E(rest, m + 1 - n - j, tuple(sorted(image.items())))
            if sub:
                total = total + sub.scale(sign * (-1) ** j * b)
        return total

    return E


@lru_cache(maxsize=None)
def _zero_mode_fn(l: Fraction):
    return _zero_mode_table(l)


def zero_mode_on_primary(v: FockVector, l) -> RatFunc:
    """<a, o(v) b>/<a, b> for a vacuum descendant v, with o(v) = v(wt v - 1)."""
    l = as_fraction(l)
    E = _zero_mode_fn(l)
    start = (((), UniPoly.const(1)),)
    total = RatFunc(0)
    for part, coef in v.terms:
        val = E(tuple(part), v.level - 1, start)
        if val:
            total = total + RatFunc.coerce(coef) * RatFunc(val)
    return total


def b_coefficient(l, n: int) -> RatFunc:
    """B_n / (p_l <a, b>) = zero mode of lambda^(n)/p_l on b."""
    return zero_mode_on_primary(casimir_fock(as_fraction(l), n), l)


# ---------------------------------------------------------------------------
# the matrix M and its triangular factors
# ---------------------------------------------------------------------------
def m_entry(m: int, k: int) -> Fraction:
    return gbinom(m, 2 * k) + gbinom(-m, 2 * k)


def m_matrix(l: int) -> Matrix:
    """M[m][k] = binom(m, 2k) + binom(-m, 2k), m, k = 1..l."""
    return Matrix.from_rows([[m_entry(m, k) for k in range(1, l + 1)] for m in range(1, l + 1)])


def lu_m(l: int) -> tuple[Matrix, Matrix]:
    """Unit lower/upper triangular L, U with L U equal to the transpose of m_matrix(l).

    L[i][j] = binom(2i-j-1, j-1) for i >= j; U[j][k] = (k/j) binom(j+k-1, 2j-1) for j <= k.
    """
    L = [[gbinom(2 * i - j - 1, j - 1) if i >= j else Fraction(0) for j in range(1, l + 1)]
         for i in range(1, l + 1)]
    U = [[Fraction(k, j) * gbinom(j + k - 1, 2 * j - 1) if j <= k else Fraction(0)
          for k in range(1, l + 1)] for j in range(1, l + 1)]
    return Matrix.from_rows(L), Matrix.from_rows(U)


# ---------------------------------------------------------------------------
# derivation of p_l
# ---------------------------------------------------------------------------
class Genus0Result:
    def __init__(self, l, p, A, B_direct, B_reconstructed):
        self.l = l
        self.p = p
        self.A = A  # A_0..A_2l with p substituted
        self.B_direct = B_direct  # n -> B_n/<a,b> with p substituted
        self.B_reconstructed = B_reconstructed


def derive(l) -> Genus0Result:
    l = as_fraction(l)
    if l.denominator != 1 or l < 1:
        raise ValueError("the genus-zero system is implemented for integer l >= 1")
    L = int(l)
    sign = -1 if L % 2 else 1
    A_low = a_coefficients(l)  # constants (no p)
    beta = {2 * k: b_coefficient(l, 2 * k) for k in range(0, L + 2)}  # B_2k = p * beta
    # unknowns A_(2l-m), m = 1..l; equations k = 1..l.  Each side is affine in p: (coef of p, constant)
    rows = [[RatFunc(m_entry(m, k)) for m in range(1, L + 1)] for k in range(1, L + 1)]
    rhs_p = [beta[2 * k] for k in range(1, L + 1)]
    rhs_c = []
    for k in range(1, L + 1):
        acc = RatFunc(0)
        for m in range(L + 1, 2 * L + 1):
            acc = acc + A_low[2 * L - m] * m_entry(m, k)
        rhs_c.append(-acc)
    mat = Matrix.from_rows(rows)
    sol_p, _ = solve_linear(mat, rhs_p)
    sol_c, _ = solve_linear(mat, rhs_c)
    # A_(2l-m) = sol_p[m-1] p + sol_c[m-1]
    A_hi = {2 * L - m: (sol_p[m - 1], sol_c[m - 1]) for m in range(1, L + 1)}
    A_aff = {r: (RatFunc(0), A_low[r]) for r in range(L)}
    A_aff.update(A_hi)
    # reconstruct B_(2l+2) = alpha p + beta0
    alpha, const = RatFunc(0), RatFunc(0)
    for m in range(1, 2 * L + 1):
        ap, ac = A_aff[2 * L - m]
        e = m_entry(m, L + 1)
        if e:
            alpha = alpha + ap * e
            const = const + ac * e
    gamma = beta[2 * L + 2]
    denom = gamma - alpha
    if not denom:
        raise Inconsistent("the two expressions for B_(2l+2) are proportional")
    p = const / denom
    # A_2l from k = 0: B_0 = A_2l + 2 sum_{m=1}^{2l} A_(2l-m)
    A = [ac + ap * p for r in range(2 * L) for ap, ac in [A_aff[r]]]
    b0 = p * sign
    A.append(b0 - sum((A[2 * L - m] * 2 for m in range(1, 2 * L + 1)), RatFunc(0)))
    B_direct = {n: beta[n] * p for n in beta}
    B_rec = {n: reconstruct_b(A, L, n) for n in range(0, 2 * L + 5)}
    return Genus0Result(l, p, A, B_direct, B_rec)


def derive_pl(l) -> RatFunc:
    """p_l(c) from the genus-zero correlator."""
    return derive(l).p


def reconstruct_b(A: list, L: int, n: int) -> RatFunc:
    """Coefficient of zeta^n in g(1+zeta)(1+zeta)^(-2l) with g(y) = sum_r A_r y^r, A_r = A_(4l-r)."""
    total = RatFunc(0)
    for r in range(4 * L + 1):
        a = A[r] if r <= 2 * L else A[4 * L - r]
        coef = gbinom(r - 2 * L, n)
        if coef and a:
            total = total + a * coef
    return total


def odd_b_from_even(B: dict, k: int) -> RatFunc:
    """B_(2k+1) = (1/2) sum_{r=2}^{2k} binom(-r, 2k+1-r) (-1)^r B_r."""
    total = RatFunc(0)
    for r in range(2, 2 * k + 1):
        total = total + B[r] * (gbinom(-r, 2 * k + 1 - r) * (-1) ** r)
    return total * Fraction(1, 2)
