"""Rational (c, h) classification scans, AD-type and W(3k) catalogs, and
character oracles.

A scan looks for rational c with |p_l(c)| = N for N = 1..max_dim, keeps the
values whose vacuum character has nonnegative integral dimensions, and reports
h = x + c/24 for the rational indicial roots together with diagnostic flags
(including whether every indicial root is rational).

Rational roots of r(c) - N s(c) have denominators dividing the leading
coefficient of r (deg r = deg s + 1 for every p_l met so far, and the code
checks it).  The fast route locates every real solution numerically on the
monotone branches of p_l and tests the nearby fractions with such
denominators exactly; the exact route runs the rational root theorem for each N.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import ResonantObstruction
from .frobenius import indicial, op_step, resonances, solve_at, vacuum_forcing
from .kernel import (RatFunc, UniPoly, as_fraction, integer_divisors, rational_roots,
                     real_root_intervals)
from .qseries import QSeries, partition_counts
from .virasoro import minimal_model

HALF = Fraction(1, 2)


@dataclass
class ScanCandidate:
    c: Fraction
    p_l: int
    indicial_roots: list
    h_list: list
    dims: list
    flags: dict = field(default_factory=dict)
    signed_p: int | None = None
    step: Fraction = Fraction(1)
    twisted: bool = False

    def p_values(self, upto) -> dict:
        """Primary counts p_n at this c, read off the vacuum character."""
        from .frobenius import primary_counts

        return primary_counts(list(self.dims), self.step, self.twisted, as_fraction(upto))

    def as_row(self) -> dict:
        return {
            "c": str(self.c),
            "p_l": self.p_l,
            "signed_p": self.signed_p,
            "indicial_roots": [str(x) for x in self.indicial_roots],
            "h_list": [str(h) for h in self.h_list],
            "dims": [str(d) for d in self.dims],
            "flags": {k: _flag_json(v) for k, v in self.flags.items()},
        }


def _flag_json(v):
    if isinstance(v, tuple):
        return [str(a) for a in v]
    if isinstance(v, list):
        return [_flag_json(a) for a in v]
    if isinstance(v, Fraction):
        return str(v)
    return v


@dataclass(frozen=True)
class CatalogEntry:
    kind: str  # "AD" or "W3k"
    params: tuple
    c: Fraction
    l: Fraction
    h_list: frozenset


# ---------------------------------------------------------------------------
# Catalogs and oracles
# ---------------------------------------------------------------------------
def ad_catalog(l, pq_bound: int = 60) -> list[CatalogEntry]:
    """Coprime 2 <= p < q <= pq_bound with h_{1,p-1} = (p-2)(q-2)/4 = l."""
    l = as_fraction(l)
    out = []
    for p in range(2, pq_bound + 1):
        for q in range(p + 1, pq_bound + 1):
            if gcd(p, q) != 1 or Fraction((p - 2) * (q - 2), 4) != l:
                continue
            mm = minimal_model(p, q)
            out.append(CatalogEntry("AD", (p, q), mm.c_pq, l, mm.weight_grid))
    return out


def w3k_catalog(l) -> list[CatalogEntry]:
    """The W(3k) algebra with lowest primary weight 3k = l, central charge 1 - 24k.

    The family starts at k = 2 (VOA) and k = 3/2 (VOSA); smaller k give no
    integral vacuum character at weight l.
    """
    l = as_fraction(l)
    k = l / 3
    if (2 * k).denominator != 1 or k < (2 if k.denominator == 1 else Fraction(3, 2)):
        return []
    return [CatalogEntry("W3k", (k,), 1 - 24 * k, l, frozenset())]


def w3k_partition(k, terms: int = 20, signed: bool = False) -> QSeries:
    """q^(-c_k/24) sum_{n>=1} (q^((n^2-1)k) - q^((n^2-1)k + n^2)) / prod (1 - q^m), c_k = 1 - 24k.

    With ``signed`` the coefficients at half-integral exponents are negated
    (the fermion-parity graded trace).
    """
    k = as_fraction(k)
    step = HALF if k.denominator == 2 else Fraction(1)
    n_idx = int(terms / step)
    num = [0] * n_idx
    n = 1
    while (n * n - 1) * k < terms:
        for e, s in (((n * n - 1) * k, 1), ((n * n - 1) * k + n * n, -1)):
            idx = e / step
            if idx < n_idx:
                num[int(idx)] += s
        n += 1
    inv = partition_counts(terms + 1)
    out = []
    per = int(1 / step)
    for i in range(n_idx):
        acc = 0
        for j in range(0, i // per + 1):
            acc += inv[j] * num[i - j * per]
        if signed and step == HALF and i % 2:
            acc = -acc
        out.append(Fraction(acc))
    ck = 1 - 24 * k
    return QSeries(out, -ck / 24, step)


# ---------------------------------------------------------------------------
# Candidate evaluation
# ---------------------------------------------------------------------------
def _operator(l):
    from .zhu import assemble

    return assemble(as_fraction(l))


def dims_ok(dims: list, step: Fraction, vosa: bool) -> bool:
    for i, d in enumerate(dims):
        if vosa and (i * step).denominator == 2:
            d = -d
        if d.denominator != 1 or d < 0:
            return False
    return True


def evaluate_candidate(l, c, depth: int | None = None, signed_p: int | None = None) -> ScanCandidate | None:
    """Specialize the operator for weight l at c and compute roots, h-list, dims and flags.

    Returns None when g_0(c) = 0.
    """
    l = as_fraction(l)
    c = as_fraction(c)
    op = _operator(l)
    spec = op.specialize(c)
    if not spec.g0:
        return None
    ind = indicial(spec)
    roots = ind.roots()
    all_rational = len(roots) == ind.degree
    h_list = sorted({x + c / 24 for x in roots})
    step = op_step(op)
    if depth is None:
        depth = int(l) + 4
    flags: dict = {
        "g0_nonzero": True,
        "all_roots_rational": all_rational,
        "resonances": resonances(roots, op.twisted),
    }
    dims: list = []
    try:
        sol = solve_at(spec, -c / 24, depth + 1, vacuum_forcing(op, l))
        dims = list(sol.coeffs.coeffs[: int((depth + 1) / step)])
        flags["all_dims_nonneg_integer"] = dims_ok(dims, step, op.twisted)
        flags["solution_residual_zero"] = not any(spec.apply(sol.coeffs).coeffs)
    except ResonantObstruction:
        flags["all_dims_nonneg_integer"] = False
        flags["solution_residual_zero"] = False
    p_val = None
    if dims:
        from .frobenius import primary_counts

        p_val = primary_counts(dims, step, op.twisted, l).get(l)
    flags["odd_pl_irreducible"] = p_val is not None and p_val.denominator == 1 and p_val % 2 == 1
    flags["ad_type_match"] = next((e.params for e in ad_catalog(l) if e.c == c), None)
    flags["w3k_match"] = next((e.params[0] for e in w3k_catalog(l) if e.c == c), None)
    p_int = int(p_val) if p_val is not None and p_val.denominator == 1 else None
    return ScanCandidate(c, p_int, roots, h_list, dims, flags, signed_p, step, op.twisted)


# ---------------------------------------------------------------------------
# Solving |p_l(c)| = N
# ---------------------------------------------------------------------------
def pl_function(l) -> RatFunc:
    from .frobenius import p_function

    return p_function(as_fraction(l))


def _integer_pair(p: RatFunc) -> tuple[UniPoly, UniPoly]:
    """Integer-coefficient R, S with p = R/S."""
    from math import lcm

    den = 1
    for a in p.num.coeffs + p.den.coeffs:
        den = lcm(den, a.denominator)
    return p.num.scale(den), p.den.scale(den)


def solve_pl_exact(p: RatFunc, targets) -> dict:
    """{N: rational roots c of p(c) = N} by the rational root theorem, one N at a time."""
    R, S = _integer_pair(p)
    out = {}
    for N in targets:
        poly = R - S.scale(N)
        if poly.is_zero():
            continue
        roots = sorted(set(r for r in rational_roots(poly) if S(r) != 0))
        if roots:
            out[N] = roots
    return out


def _branches(p: RatFunc) -> list[tuple[Fraction | None, Fraction | None]]:
    """Open intervals on which p is continuous and monotone; None marks an infinite end."""
    R, S = _integer_pair(p)
    crit = R.derivative() * S - R * S.derivative()
    points = []
    for poly in (S, crit):
        if poly.degree > 0:
            for lo, hi in real_root_intervals(poly, Fraction(1, 10 ** 30)):
                points.append((lo + hi) / 2)
    points = sorted(set(points))
    ends = [None] + points + [None]
    return list(zip(ends[:-1], ends[1:]))


def _horner(coeffs: list, x):
    acc = np.zeros_like(x)
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def _eval_ld(R: UniPoly, S: UniPoly, x: np.ndarray) -> np.ndarray:
    rc = [np.longdouble(int(a)) for a in R.coeffs]
    sc = [np.longdouble(int(a)) for a in S.coeffs]
    with np.errstate(divide="ignore", invalid="ignore"):
        return _horner(rc, x) / _horner(sc, x)


_CHUNK = 1 << 18


def solve_pl_fast(p: RatFunc, max_dim: int, signs=(1,)) -> dict:
    """{N: rational c with p(c) = N} for 1 <= |N| <= max_dim, sign(N) in ``signs``.

    Each monotone branch is bisected in extended precision for every integer in
    its range at once; fractions a/b near the numerical roots with b dividing
    the leading coefficient of the cleared numerator are verified exactly.
    """
    R, S = _integer_pair(p)
    if R.degree != S.degree + 1:
        raise ValueError("fast scan assumes deg numerator = deg denominator + 1")
    lead = abs(int(R.lead))
    dens = integer_divisors(lead)
    found: dict = {}
    big = np.longdouble(max_dim + 2)
    for lo, hi in _branches(p):
        a, b = _branch_bracket(R, S, lo, hi, big)
        if a is None:
            continue
        va, vb = _eval_ld(R, S, np.array([a, b], dtype=np.longdouble))
        if not (np.isfinite(va) and np.isfinite(vb)):
            continue
        vmin, vmax = (va, vb) if va <= vb else (vb, va)
        increasing = vb >= va
        for sgn in signs:
            if sgn > 0:
                n_lo, n_hi = max(1, int(np.ceil(vmin))), min(max_dim, int(np.floor(vmax)))
            else:
                n_lo, n_hi = max(-max_dim, int(np.ceil(vmin))), min(-1, int(np.floor(vmax)))
            if n_lo > n_hi:
                continue
            for start in range(n_lo, n_hi + 1, _CHUNK):
                targets = np.arange(start, min(start + _CHUNK, n_hi + 1), dtype=np.int64)
                roots = _bisect(R, S, a, b, targets.astype(np.longdouble), increasing)
                _collect(found, roots, targets, dens, R, S)
    return {N: sorted(v) for N, v in sorted(found.items())}


def _branch_bracket(R, S, lo, hi, big):
    """Finite endpoints inside (lo, hi) beyond which |p| exceeds ``big`` (or the true extremum)."""
    def val(x):
        return _eval_ld(R, S, np.array([x], dtype=np.longdouble))[0]

    pts = []
    for end, direction in ((lo, 1), (hi, -1)):
        if end is None:
            other = hi if direction == 1 else lo
            base = np.longdouble(float(other)) if other is not None else np.longdouble(0)
            step = np.longdouble(1)
            x = base - direction * step
            for _ in range(400):
                v = val(x)
                if np.isfinite(v) and abs(v) > big:
                    break
                step *= 2
                x = base - direction * step
            pts.append(x)
        else:
            e = np.longdouble(end.numerator) / np.longdouble(end.denominator)
            if _is_pole(S, end):
                delta = np.longdouble(1e-3)
                x = e + direction * delta
                for _ in range(60):
                    v = val(x)
                    if np.isfinite(v) and abs(v) > big:
                        break
                    delta /= 4
                    x = e + direction * delta
                pts.append(x)
            else:
                pts.append(e)
    a, b = pts
    if not a < b:
        return None, None
    return a, b


def _is_pole(S: UniPoly, x: Fraction) -> bool:
    if S.degree <= 0:
        return False
    # x approximates a root of S when S changes sign in a tiny neighbourhood
    eps = Fraction(1, 10 ** 25)
    return (S(x - eps) > 0) != (S(x + eps) > 0) or S(x) == 0


def _bisect(R, S, a, b, targets: np.ndarray, increasing: bool, iters: int = 120) -> np.ndarray:
    lo = np.full(targets.shape, a, dtype=np.longdouble)
    hi = np.full(targets.shape, b, dtype=np.longdouble)
    for _ in range(iters):
        mid = (lo + hi) / 2
        v = _eval_ld(R, S, mid)
        below = (v < targets) if increasing else (v > targets)
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return (lo + hi) / 2


def _collect(found: dict, roots, targets, dens, R, S) -> None:
    rc = [int(x) for x in R.coeffs]
    sc = [int(x) for x in S.coeffs]
    dr, ds = R.degree, S.degree
    scale = np.maximum(np.abs(roots), 1)
    for b in dens:
        prod = roots * b
        a = np.rint(prod)
        ok = np.abs(prod - a) < np.longdouble(1e-11) * b * scale
        for idx in np.nonzero(ok)[0]:
            ai = int(a[idx])
            N = int(targets[idx])
            # b^dr R(a/b) == N b^dr S(a/b), with dr = ds + 1
            r_val = sum(co * ai ** i * b ** (dr - i) for i, co in enumerate(rc))
            s_val = sum(co * ai ** i * b ** (ds - i) for i, co in enumerate(sc))
            if s_val and r_val == N * s_val * b:
                found.setdefault(N, set()).add(Fraction(ai, b))


# ---------------------------------------------------------------------------
# Scan driver
# ---------------------------------------------------------------------------
def scan(l, max_dim: int = 1000, depth: int | None = None, exact: bool = False,
         require_integral: bool = True, require_rational_roots: bool = False) -> list[ScanCandidate]:
    """Candidates (c, |p_l|) sorted by c.

    Both signs of p_l(c) are scanned for half-integral l.  With
    ``require_integral`` only candidates whose dims to ``depth`` are integral and
    nonnegative (sigma-sign aware) are kept; ``require_rational_roots`` further
    drops values of c with an irrational indicial root.
    """
    l = as_fraction(l)
    p = pl_function(l)
    signs = (1, -1) if l.denominator == 2 else (1,)
    if exact:
        targets = [s * n for s in signs for n in range(1, max_dim + 1)]
        sols = solve_pl_exact(p, targets)
    else:
        sols = solve_pl_fast(p, max_dim, signs)
    seen: dict = {}
    for N, cs in sols.items():
        for c in cs:
            if c in seen:
                continue
            cand = evaluate_candidate(l, c, depth, signed_p=N)
            if cand is None:
                continue
            if require_rational_roots and not cand.flags["all_roots_rational"]:
                continue
            if require_integral and not cand.flags.get("all_dims_nonneg_integer"):
                continue
            if cand.p_l is None:
                cand.p_l = abs(N)
            seen[c] = cand
    return [seen[c] for c in sorted(seen)]


def find_candidate(candidates: list[ScanCandidate], c) -> ScanCandidate | None:
    c = as_fraction(c)
    return next((cand for cand in candidates if cand.c == c), None)


def row_matches(cand: ScanCandidate, p_values: dict, h_list) -> bool:
    """The candidate carries the given p-values (weight -> |p|) and every listed h."""
    p_values = {as_fraction(k): v for k, v in p_values.items()}
    if not cand.dims:
        return False
    counts = cand.p_values(max(p_values))
    if any(counts.get(k) != v for k, v in p_values.items()):
        return False
    return {as_fraction(h) for h in h_list} <= set(cand.h_list)
