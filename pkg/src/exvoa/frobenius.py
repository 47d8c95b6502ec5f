"""Frobenius analysis of modular linear differential operators: indicial
polynomial, the symbolic partition-function solution over Q(c), specialized
series solutions and resonance / root-condition diagnostics.

Write an operator as sum_m g_m(q) D^m.  Since D^m q^y = q^y P_m(y, q) with
P_0 = 1 and P_{m+1} = (y + q d/dq + 2m E_2) P_m, the operator acting on
q^y is q^y T(y, q) with T = sum_m g_m P_m.  Expanding T(y, q) = sum_k T_k(y) q^{k d}
(d the step), a series sum_n a_n q^{x + n d} is annihilated iff
a_N T_0(x + N d) = -sum_{n<N} a_n T_{N-n}(x + n d); T_0 is the indicial polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import Degenerate, ResonantObstruction, ResonantSymbolic
from .kernel import C, RatFunc, UniPoly, as_fraction, poly_gcd, rational_roots
from .qseries import QSeries, eisenstein_series, partition_counts
from .zhu import ModLinOp, UNIT, ef_series

HALF = Fraction(1, 2)


def op_step(op: ModLinOp) -> Fraction:
    return HALF if op.twisted else Fraction(1)


# ---------------------------------------------------------------------------
# Polynomials in y with coefficients in a ring (lists, low degree first)
# ---------------------------------------------------------------------------
def _ypoly_add(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = out[i] + v
    return out


def _ypoly_scale(a: list, s) -> list:
    return [v * s for v in a]


def _ypoly_eval(a: list, y):
    acc = None
    for v in reversed(a):
        acc = v if acc is None else acc * y + v
    return acc if acc is not None else 0


def _t_series(op: ModLinOp, terms: int) -> list:
    """[T_0(y), T_1(y), ...] with T_k a y-polynomial (list of ring elements) for k*step < terms."""
    step = op_step(op)
    n = int(terms / step)
    zero = UniPoly() if op.c is None else Fraction(0)
    one = UniPoly.const(1) if op.c is None else Fraction(1)
    e2 = eisenstein_series(2, terms + 1).refine(step) if step != 1 else eisenstein_series(2, terms + 1)
    e2c = e2.coeffs
    # P_m as list over q-index of y-polys
    p = [[one]] + [[] for _ in range(n - 1)]
    total = [[] for _ in range(n)]

    def accumulate(pm, gm_series):
        g = gm_series.coeffs
        for i in range(n):
            gi = g[i] if i < len(g) else 0
            if not gi:
                continue
            for j in range(n - i):
                if pm[j]:
                    total[i + j] = _ypoly_add(total[i + j], _ypoly_scale(pm[j], gi))

    for m in range(op.order + 1):
        if op.coeffs[m]:
            gs = ef_series(op.coeffs[m], terms + 1)
            gs = gs.refine(step) if gs.step != step else gs
            accumulate(p, gs)
        if m == op.order:
            break
        # P_{m+1} = (y + q d/dq + 2m E_2) P_m
        nxt = []
        for j in range(n):
            cur = p[j]
            # y * P_m[j]
            out = [zero] + list(cur) if cur else []
            # q d/dq contributes (j * step) * P_m[j]
            if cur and j:
                out = _ypoly_add(out, _ypoly_scale(cur, j * step))
            if m:
                for i in range(j + 1):
                    if e2c[i] and p[j - i]:
                        out = _ypoly_add(out, _ypoly_scale(p[j - i], 2 * m * e2c[i]))
            nxt.append(out)
        p = nxt
    return total


# ---------------------------------------------------------------------------
# Indicial polynomial
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class IndicialPoly:
    """I(x) = sum_i coeffs[i] x^i; coefficients UniPoly in c, or Fraction when specialized."""

    coeffs: tuple
    c: Fraction | None = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return _ypoly_eval(list(self.coeffs), x)

    def at(self, c) -> "IndicialPoly":
        c = as_fraction(c)
        return IndicialPoly(tuple(v(c) if isinstance(v, (UniPoly, RatFunc)) else v for v in self.coeffs), c)

    def roots(self) -> list[Fraction]:
        """Rational roots with multiplicity (specialized polynomial only)."""
        if self.c is None:
            raise ValueError("specialize the indicial polynomial first")
        p = UniPoly(self.coeffs)
        if p.is_zero():
            raise Degenerate("indicial polynomial vanishes identically")
        return rational_roots(p)

    def all_roots_rational(self) -> bool:
        return len(self.roots()) == self.degree


def indicial(op: ModLinOp) -> IndicialPoly:
    """sum_m g_m(0) prod_{s<m} (x - s/6) with g_m the coefficient of D^m."""
    g0 = op.g0
    if not g0:
        raise Degenerate("leading coefficient g_0 vanishes")
    coeffs = op.indicial()
    return IndicialPoly(tuple(coeffs), op.c)


# ---------------------------------------------------------------------------
# Symbolic solution and primary counts
# ---------------------------------------------------------------------------
@lru_cache(maxsize=None)
def vacuum_dims(terms: int) -> tuple[int, ...]:
    """Graded dimensions of the generic Virasoro vacuum module: prod_{n>=2} (1 - q^n)^(-1)."""
    p = [0] * terms
    p[0] = 1
    for m in range(2, terms):
        for i in range(m, terms):
            p[i] += p[i - m]
    return tuple(p)


@dataclass
class DimensionProfile:
    l: Fraction
    dims: list  # signed coefficients a_n of q^{-c/24 + n*step} (RatFunc)
    step: Fraction
    p_funcs: dict = field(default_factory=dict)  # weight n -> RatFunc p_n(c)
    vosa: bool = False

    def dim(self, weight) -> RatFunc:
        idx = as_fraction(weight) / self.step
        return self.dims[int(idx)]


def _sigma_sign(weight: Fraction) -> int:
    return -1 if (2 * weight) % 2 else 1


def primary_counts(dims: list, step: Fraction, vosa: bool, upto) -> dict:
    """p_n = sign_n [q^n] (sum_N a_N q^{N step}) prod_{m>=1} (1 - q^m) + delta_{n,1}.

    Unsigns the sigma-trace for half-integral n in the VOSA case.
    """
    from .qseries import euler_product

    n_idx = len(dims)
    per_unit = int(1 / step)
    eul = euler_product(int(n_idx * step) + 2)
    out = {}
    for i in range(1, n_idx):
        wt = i * step
        if wt > upto:
            break
        acc = dims[i]
        # multiply by the Euler product, which lives on integer exponents only
        for k in range(1, int(wt) + 1):
            if eul[k]:
                acc = acc + dims[i - k * per_unit] * eul[k]
        if wt == 1:
            acc = acc + 1
        if vosa and _sigma_sign(wt) < 0:
            acc = -acc
        out[wt] = acc
    return out


def solve_symbolic(op: ModLinOp, l, vosa: bool | None = None, terms: int | None = None) -> DimensionProfile:
    """Frobenius solution at x = -c/24 over Q(c).

    When the recurrence factor vanishes identically below weight l, the
    coefficient is pinned to the Virasoro vacuum dimension; at or beyond weight
    l this raises ResonantSymbolic.
    """
    l = as_fraction(l)
    if op.c is not None:
        raise ValueError("solve_symbolic needs an unspecialized operator")
    if not op.g0:
        raise Degenerate("leading coefficient g_0 vanishes")
    if vosa is None:
        vosa = op.twisted
    step = op_step(op)
    if terms is None:
        terms = int(l) + 2
    n = int(terms / step)
    tser = _t_series(op, terms)
    x = C.scale(Fraction(-1, 24))
    vac = vacuum_dims(terms + 1)
    dims: list = [RatFunc(1)]
    for N in range(1, n):
        y = x + N * step
        factor = _ypoly_eval(tser[0], y)
        rhs = RatFunc(0)
        for k in range(1, N + 1):
            tk = tser[k]
            if not tk or not dims[N - k]:
                continue
            val = _ypoly_eval(tk, x + (N - k) * step)
            if val:
                rhs = rhs + dims[N - k] * RatFunc(val)
        wt = N * step
        if not factor:
            if wt < l:
                forced = vac[int(wt)] if wt.denominator == 1 else 0
                if rhs:
                    raise ResonantSymbolic(f"forced vacuum value is inconsistent at weight {wt}")
                dims.append(RatFunc(forced))
                continue
            raise ResonantSymbolic(f"recurrence factor vanishes identically at weight {wt}")
        dims.append(-rhs / RatFunc(factor))
    profile = DimensionProfile(l, dims, step, vosa=vosa)
    profile.p_funcs = primary_counts(dims, step, vosa, upto=Fraction(terms) - step)
    return profile


def p_function(l, n=None) -> RatFunc:
    """p_n(c) (default n = l) from the assembled operator for weight l."""
    from .zhu import assemble

    l = as_fraction(l)
    n = l if n is None else as_fraction(n)
    prof = solve_symbolic(assemble(l), l, terms=int(n) + 2)
    return prof.p_funcs[n]


# ---------------------------------------------------------------------------
# Specialized solutions
# ---------------------------------------------------------------------------
@dataclass
class SeriesSolution:
    root_x: Fraction
    h: Fraction
    coeffs: QSeries
    resonant: bool = False
    normalization: Fraction = Fraction(1)
    resonant_steps: tuple = ()


def solve_at(op: ModLinOp, x, terms: int = 20, forced: dict | None = None) -> SeriesSolution:
    """Pure q-series solution q^x (1 + ...) of a specialized operator.

    ``forced`` maps a step index N to a coefficient used when the recurrence
    factor vanishes there.  Otherwise a resonant step with a consistent (0 = 0)
    equation takes the free coefficient 0; an inconsistent one raises
    ResonantObstruction.
    """
    if op.c is None:
        raise ValueError("specialize the operator first")
    if not op.g0:
        raise Degenerate(f"g_0 vanishes at c = {op.c}")
    x = as_fraction(x)
    step = op_step(op)
    n = int(terms / step)
    tser = _t_series(op, terms)
    a = [Fraction(1)]
    resonant = []
    for N in range(1, n):
        factor = _ypoly_eval(tser[0], x + N * step)
        rhs = Fraction(0)
        for k in range(1, N + 1):
            if tser[k] and a[N - k]:
                rhs += a[N - k] * _ypoly_eval(tser[k], x + (N - k) * step)
        if factor == 0:
            resonant.append(N)
            if rhs:
                raise ResonantObstruction(f"no pure q-series solution at x = {x}: step {N} reads 0 = {-rhs}")
            a.append(as_fraction(forced.get(N, 0)) if forced else Fraction(0))
            continue
        a.append(-rhs / factor)
    series = QSeries(a, x, step)
    return SeriesSolution(x, x + op.c / 24, series, bool(resonant), Fraction(1), tuple(resonant))


def vacuum_forcing(op: ModLinOp, l) -> dict:
    """Forced coefficients (Virasoro vacuum dimensions) for steps below weight l."""
    l = as_fraction(l)
    step = op_step(op)
    vac = vacuum_dims(int(l) + 2)
    out = {}
    N = 1
    while N * step < l:
        wt = N * step
        out[N] = Fraction(vac[int(wt)]) if wt.denominator == 1 else Fraction(0)
        N += 1
    return out


def residual(op: ModLinOp, sol: SeriesSolution) -> QSeries:
    """The operator applied to the solution (zero to truncation for a true solution)."""
    return op.apply(sol.coeffs)


def check_solution(op: ModLinOp, sol: SeriesSolution) -> bool:
    return not any(residual(op, sol).coeffs)


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------
@dataclass
class RootConditionReport:
    l: Fraction
    identical_shifts: list  # m with I(m - c/24) = 0 identically in c
    violators: list


def root_condition_report(op: ModLinOp, l) -> RootConditionReport:
    """Shifts m for which x = m - c/24 solves the indicial equation for every c.

    The uniqueness argument needs m < l (integer l) or m <= l - 1/2 (half-integral l)
    for every such m other than 0.
    """
    l = as_fraction(l)
    ind = indicial(op)
    # substitute x = t - c/24 and collect by powers of t: coefficients are UniPolys in c
    shift = [C.scale(Fraction(-1, 24)), UniPoly.const(1)]  # as a t-polynomial
    total: list = []
    power = [UniPoly.const(1)]
    for i, a in enumerate(ind.coeffs):
        if i:
            power = _tpoly_mul(power, shift)
        total = _ypoly_add(total, [v * a for v in power])
    # regroup as polynomials in t, one per power of c
    maxc = max((v.degree for v in total if v), default=0)
    g = UniPoly()
    for j in range(maxc + 1):
        tp = UniPoly([v.coeffs[j] if j < len(v.coeffs) else 0 for v in total])
        g = poly_gcd(g, tp)
    shifts = sorted(set(rational_roots(g))) if g.degree > 0 else []
    step = op_step(op)
    shifts = [m for m in shifts if (m / step).denominator == 1]
    if op.twisted:
        viol = [m for m in shifts if m > l - HALF]
    else:
        viol = [m for m in shifts if m >= l]
    return RootConditionReport(l, shifts, viol)


def _tpoly_mul(a: list, b: list) -> list:
    out = [UniPoly()] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            out[i + j] = out[i + j] + u * v
    return out


def resonances(roots, twisted: bool) -> list[tuple[Fraction, Fraction]]:
    """Pairs of distinct indicial roots differing by a multiple of the step."""
    step = HALF if twisted else Fraction(1)
    rs = sorted(set(roots))
    out = []
    for i, a in enumerate(rs):
        for b in rs[i + 1:]:
            if ((b - a) / step).denominator == 1:
                out.append((a, b))
    if len(rs) < len(list(roots)):
        out.extend((r, r) for r in rs if list(roots).count(r) > 1)
    return out
