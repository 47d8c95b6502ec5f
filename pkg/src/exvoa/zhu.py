"""Zhu reduction of Virasoro vacuum descendants to modular differential operators,
and assembly of the (twisted) modular linear differential equation satisfied by
the characters of an exceptional vertex operator (super)algebra.

A one-point function Z(v) of a vacuum descendant v is written as
sum_m f_m D^m Z, where D^m is the iterated Serre derivative and f_m is a
polynomial in Eisenstein series.  Those polynomials are stored as
:class:`EForm` dictionaries keyed by exponent tuples (e2, e4, e6, f): the
monomial E_2^e2 E_4^e4 E_6^e6, times the twisted series F_f = E_f[1, -1] when
f > 0.  F only ever appears linearly.
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from functools import lru_cache
from math import comb
from pathlib import Path
from threading import Lock

from .errors import Degenerate
from .kernel import RatFunc, UniPoly, as_fraction, lcm_poly, poly_gcd
from .qseries import (DEFAULT_TERMS, QSeries, eisenstein_basis, eisenstein_series,
                      twisted_eisenstein_series)
from .virasoro import _VACUUM, casimir_fock, fock_basis

Key = tuple[int, int, int, int]
UNIT: Key = (0, 0, 0, 0)
CACHE_VERSION = 1
CACHE_ENV = "EXVOA_CACHE_DIR"


# ---------------------------------------------------------------------------
# Eisenstein polynomials
# ---------------------------------------------------------------------------
def key_weight(k: Key) -> int:
    return 2 * k[0] + 4 * k[1] + 6 * k[2] + k[3]


def _mul_key(a: Key, b: Key) -> Key:
    if a[3] and b[3]:
        raise ValueError("products of two twisted series are not represented")
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def ef_add_into(acc: dict, key: Key, value) -> None:
    v = acc.get(key)
    v = value if v is None else v + value
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def ef_scale(f: dict, s) -> dict:
    out = {}
    for k, v in f.items():
        w = v * s
        if w:
            out[k] = w
    return out


def ef_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for k1, v1 in f.items():
        for k2, v2 in g.items():
            ef_add_into(out, _mul_key(k1, k2), v1 * v2)
    return out


@lru_cache(maxsize=None)
def eisenstein_form(n: int) -> tuple:
    """E_n as a polynomial in E_2, E_4, E_6 (E_2 only for n = 2; zero for odd n)."""
    if n % 2:
        return ()
    if n == 2:
        return (((1, 0, 0, 0), Fraction(1)),)
    if n == 4:
        return (((0, 1, 0, 0), Fraction(1)),)
    if n == 6:
        return (((0, 0, 1, 0), Fraction(1)),)
    return tuple(((0, a, b, 0), v) for (a, b), v in sorted(eisenstein_basis(n).items()))


def E(n: int) -> dict:
    return dict(eisenstein_form(n))


def Ftw(n: int) -> dict:
    """The twisted series F_n = E_n[1, -1] as a formal symbol."""
    return {(0, 0, 0, n): Fraction(1)}


# q d/dq of E2, E4, E6 in this normalization (E_n = -B_n/n! + ...)
_RAMANUJAN = {
    0: {(2, 0, 0, 0): Fraction(-1), (0, 1, 0, 0): Fraction(5)},
    1: {(1, 1, 0, 0): Fraction(-4), (0, 0, 1, 0): Fraction(14)},
    2: {(1, 0, 1, 0): Fraction(-6), (0, 2, 0, 0): Fraction(60, 7)},
}


def ef_qd(f: dict) -> dict:
    """q d/dq of an untwisted Eisenstein polynomial (product rule + Ramanujan)."""
    out: dict = {}
    for k, v in f.items():
        if k[3]:
            raise ValueError("derivative of a twisted series is not needed here")
        for i in range(3):
            e = k[i]
            if not e:
                continue
            lowered = list(k)
            lowered[i] -= 1
            for dk, dv in _RAMANUJAN[i].items():
                ef_add_into(out, _mul_key(tuple(lowered), dk), v * (dv * e))
    return out


def ef_series(f: dict, terms: int = DEFAULT_TERMS, c=None) -> QSeries:
    """q-expansion of an Eisenstein polynomial; coefficients are evaluated at c if given."""
    step = Fraction(1, 2) if any(k[3] for k in f) else Fraction(1)
    total = None
    for k, v in sorted(f.items()):
        s = _monomial_series(k, terms)
        coef = v
        if c is not None:
            coef = _eval_coeff(v, c)
        s = s.scale(coef)
        total = s if total is None else total + s
    if total is None:
        return QSeries([Fraction(0)] * int(terms / step), Fraction(0), step)
    return total


@lru_cache(maxsize=None)
def _monomial_series(k: Key, terms: int) -> QSeries:
    s = QSeries.one(terms)
    for n, e in zip((2, 4, 6), k[:3]):
        for _ in range(e):
            s = s * eisenstein_series(n, terms)
    if k[3]:
        s = s * twisted_eisenstein_series(k[3], 1, -1, terms)
    return s


def _eval_coeff(v, c):
    if isinstance(v, (RatFunc, UniPoly)):
        return v(as_fraction(c))
    return as_fraction(v)


def ef_str(f: dict, var: str = "c") -> str:
    if not f:
        return "0"
    parts = []
    for k, v in sorted(f.items(), key=lambda t: (t[0][3], t[0])):
        mono = []
        for name, e in zip(("E2", "E4", "E6"), k[:3]):
            if e == 1:
                mono.append(name)
            elif e:
                mono.append(f"{name}^{e}")
        if k[3]:
            mono.append(f"F{k[3]}")
        coef = v.to_str(var) if hasattr(v, "to_str") else str(v)
        parts.append(f"({coef})" + ("*" + "*".join(mono) if mono else ""))
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# Descendant operators
# ---------------------------------------------------------------------------
_op_lock = Lock()
_op_cache: dict = {}


def _op_add_into(acc: dict, op: dict, scale) -> None:
    for m, f in op.items():
        tgt = acc.setdefault(m, {})
        for k, v in f.items():
            ef_add_into(tgt, k, v * scale)
        if not tgt:
            del acc[m]


def _op_times_form(op: dict, form: dict) -> dict:
    out = {}
    for m, f in op.items():
        g = ef_mul(form, f)
        if g:
            out[m] = g
    return out


def partition_operator(part: tuple) -> dict:
    """Operator {m: f_m} with Z(L[-part]|0>) = sum_m f_m D^m Z, coefficients UniPoly in c.

    The outermost mode is stripped with Zhu's reduction:
      Z(L[-2]w) = (q d/dq + wt[w] E_2) Z(w) + sum_{s>=1} E_{2s+2} Z(L[2s]w),
      Z(L[-k]w) = (-1)^k sum_{r>=0} binom(k+r-1, k-2) E_{k+r} Z(L[r]w),  k >= 3.
    """
    part = tuple(part)
    hit = _op_cache.get(part)
    if hit is not None:
        return hit
    if not part:
        out = {0: {UNIT: UniPoly.const(1)}}
    else:
        n1, rest = part[0], part[1:]
        wt = sum(rest)
        out: dict = {}
        if n1 == 2:
            for m, f in partition_operator(rest).items():
                # (q d/dq + wt E_2)(f D^m Z) = (qd f + (wt - 2m) E_2 f) D^m Z + f D^{m+1} Z
                g = ef_qd(f)
                if wt - 2 * m:
                    for k, v in f.items():
                        ef_add_into(g, _mul_key((1, 0, 0, 0), k), v.scale(wt - 2 * m))
                if g:
                    tgt = out.setdefault(m, {})
                    for k, v in g.items():
                        ef_add_into(tgt, k, v)
                    if not tgt:
                        del out[m]
                tgt = out.setdefault(m + 1, {})
                for k, v in f.items():
                    ef_add_into(tgt, k, v)
                if not tgt:
                    del out[m + 1]
            for s in range(1, wt // 2 + 1):
                image = _VACUUM.apply_basis(2 * s, rest)
                if not image:
                    continue
                sub: dict = {}
                for p, coef in image.items():
                    _op_add_into(sub, partition_operator(p), coef)
                _op_add_into(out, _op_times_form(sub, E(2 * s + 2)), 1)
        else:
            sign = -1 if n1 % 2 else 1
            for r in range(0, wt + 1):
                if (n1 + r) % 2:
                    continue
                image = _VACUUM.apply_basis(r, rest)
                if not image:
                    continue
                sub = {}
                for p, coef in image.items():
                    _op_add_into(sub, partition_operator(p), coef)
                _op_add_into(out, _op_times_form(sub, E(n1 + r)), sign * comb(n1 + r - 1, n1 - 2))
    with _op_lock:
        _op_cache[part] = out
    return out


def descendant_operator(v) -> tuple[dict, UniPoly]:
    """Operator for a FockVector with RatFunc coefficients, as (numerator op, common denominator)."""
    items = v.terms
    den = lcm_poly(RatFunc.coerce(c).den for _, c in items) if items else UniPoly.const(1)
    out: dict = {}
    for p, c in items:
        c = RatFunc.coerce(c)
        scale = c.num * den.exact_div(c.den)
        _op_add_into(out, partition_operator(p), scale)
    return out, den


def casimir_operator(l, n: int) -> tuple[dict, UniPoly]:
    """Z(lambda^[n])/p_l as (numerator operator, denominator polynomial)."""
    return descendant_operator(casimir_fock(as_fraction(l), n))


# ---------------------------------------------------------------------------
# Modular linear differential operators
# ---------------------------------------------------------------------------
class ModLinOp:
    """sum_m coeffs[m] D^m with coeffs[m] an Eisenstein polynomial of weight 2(order - m).

    ``coeffs`` is indexed by the power of D.  The conventional g_j of the
    equation sum_m g_{order-m} D^m Z = 0 is available as :meth:`g`.
    Coefficients are UniPoly in c (symbolic) or Fraction (specialized).
    """

    def __init__(self, order: int, coeffs: list, twisted: bool, c=None):
        self.order = order
        self.coeffs = [dict(f) for f in coeffs]
        self.twisted = twisted
        self.c = None if c is None else as_fraction(c)

    def g(self, j: int) -> dict:
        return self.coeffs[self.order - j]

    @property
    def g0(self):
        return self.coeffs[self.order].get(UNIT, UniPoly() if self.c is None else Fraction(0))

    def weight_ok(self) -> bool:
        """Every monomial of coeffs[m] has weight 2(order - m) and g0 is q-independent."""
        for m, f in enumerate(self.coeffs):
            for k in f:
                if key_weight(k) != 2 * (self.order - m):
                    return False
        return set(self.coeffs[self.order]) <= {UNIT}

    def has_e2(self) -> bool:
        return any(k[0] for f in self.coeffs for k in f)

    def specialize(self, c) -> "ModLinOp":
        c = as_fraction(c)
        out = []
        for f in self.coeffs:
            g = {}
            for k, v in f.items():
                val = _eval_coeff(v, c)
                if val:
                    g[k] = val
            out.append(g)
        return ModLinOp(self.order, out, self.twisted, c)

    def coefficient_series(self, m: int, terms: int = DEFAULT_TERMS) -> QSeries:
        return ef_series(self.coeffs[m], terms)

    def apply(self, z: QSeries) -> QSeries:
        """sum_m coeffs[m](q) D^m z for a series with rational coefficients (specialized op)."""
        if self.c is None:
            raise ValueError("specialize the operator before applying it to a series")
        from .qseries import serre_step

        terms = int(z.truncation) + 1
        total = None
        dz = z
        for m in range(self.order + 1):
            if m:
                dz = serre_step(dz, m - 1)
            if self.coeffs[m]:
                term = ef_series(self.coeffs[m], terms) * dz
                total = term if total is None else total + term
        return total

    def indicial(self) -> list:
        """Coefficients, low degree first, of I(x) = sum_m coeffs[m](q=0) prod_{s<m}(x - s/6).

        Returned as a list of the ring elements (UniPoly in c when symbolic).
        """
        result: list = []
        basis = [Fraction(1)]  # prod_{s<m}(x - s/6), coefficients in x
        for m in range(self.order + 1):
            if m:
                s = Fraction(m - 1, 6)
                nxt = [Fraction(0)] * (len(basis) + 1)
                for i, a in enumerate(basis):
                    nxt[i + 1] += a
                    nxt[i] -= s * a
                basis = nxt
            const = constant_term(self.coeffs[m])
            if not const:
                continue
            while len(result) < len(basis):
                result.append(const * 0)
            for i, a in enumerate(basis):
                if a:
                    result[i] = result[i] + const * a
        return result

    def equivalent(self, other: "ModLinOp") -> bool:
        """Exact equality up to an overall scalar, by cross products over every (m, monomial)."""
        if self.order != other.order or self.twisted != other.twisted:
            return False
        entries_a, entries_b = {}, {}
        for m in range(self.order + 1):
            for k, v in self.coeffs[m].items():
                entries_a[(m, k)] = v
            for k, v in other.coeffs[m].items():
                entries_b[(m, k)] = v
        if set(entries_a) != set(entries_b):
            return False
        if not entries_a:
            return True
        ref = next(iter(entries_a))
        a0, b0 = entries_a[ref], entries_b[ref]
        return all(entries_a[k] * b0 == entries_b[k] * a0 for k in entries_a)

    def series_equivalent(self, other: "ModLinOp", terms: int = DEFAULT_TERMS) -> bool:
        """Equality up to scale comparing q-expansions of every coefficient."""
        if self.order != other.order:
            return False
        sa = [ef_series(f, terms) for f in self.coeffs]
        sb = [ef_series(f, terms) for f in other.coeffs]
        a0, b0 = self.g0, other.g0
        if not a0 or not b0:
            return False
        return all(x.scale(b0) == y.scale(a0) for x, y in zip(sa, sb))

    def to_json(self) -> dict:
        return {
            "version": CACHE_VERSION,
            "order": self.order,
            "twisted": self.twisted,
            "c": None if self.c is None else str(self.c),
            "coeffs": [
                [{"key": list(k), "value": _coeff_json(v)} for k, v in sorted(f.items())]
                for f in self.coeffs
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ModLinOp":
        if data.get("version") != CACHE_VERSION:
            raise ValueError("unsupported operator cache version")
        coeffs = [{tuple(e["key"]): _coeff_from_json(e["value"]) for e in f} for f in data["coeffs"]]
        return cls(data["order"], coeffs, data["twisted"], data.get("c"))

    def to_str(self, var: str = "c") -> str:
        parts = []
        for m in range(self.order, -1, -1):
            f = self.coeffs[m]
            if not f:
                continue
            dpart = "" if m == 0 else ("D" if m == 1 else f"D^{m}")
            parts.append(f"[{ef_str(f, var)}]" + (f" {dpart}" if dpart else ""))
        return " + ".join(parts) + " = 0"

    __str__ = to_str

    def __repr__(self) -> str:
        return f"ModLinOp(order={self.order}, twisted={self.twisted})"


def constant_term(f: dict):
    """Value of an Eisenstein polynomial at q = 0."""
    total = None
    for k, v in f.items():
        val = v * _monomial_series(k, 1).coeffs[0]
        total = val if total is None else total + val
    return total if total is not None else Fraction(0)


def _coeff_json(v):
    if isinstance(v, UniPoly):
        return [str(a) for a in v.coeffs]
    return str(v)


def _coeff_from_json(v):
    if isinstance(v, list):
        return UniPoly(v)
    return Fraction(v)


def _normalize(op: dict, order: int) -> list:
    """Clear denominators and polynomial/integer content; make g0's leading coefficient positive."""
    polys = [v for f in op.values() for v in f.values()]
    g = UniPoly()
    for p in polys:
        g = poly_gcd(g, p)
        if g.degree == 0:
            break
    if g.degree > 0:
        op = {m: {k: v.exact_div(g) for k, v in f.items()} for m, f in op.items()}
    polys = [v for f in op.values() for v in f.values()]
    # integer content across every coefficient
    from math import gcd, lcm

    den = 1
    for p in polys:
        for a in p.coeffs:
            den = lcm(den, a.denominator)
    num_g = 0
    for p in polys:
        for a in p.coeffs:
            num_g = gcd(num_g, (a * den).numerator)
    scale = Fraction(den, num_g) if num_g else Fraction(1)
    lead = op.get(order, {}).get(UNIT)
    if lead is not None and lead.lead < 0:
        scale = -scale
    return [{k: v.scale(scale) for k, v in op.get(m, {}).items()} for m in range(order + 1)]


def _combine(terms: list) -> dict:
    """sum of (numerator op, den, form multiplier, scalar) with a common denominator; returns numerator op."""
    common = lcm_poly(t[1] for t in terms)
    out: dict = {}
    for op, den, form, scalar in terms:
        mult = common.exact_div(den).scale(scalar)
        _op_add_into(out, _op_times_form(op, form) if form is not None else op, mult)
    return out


def _cache_path(kind: str, l: Fraction):
    d = os.environ.get(CACHE_ENV)
    if not d:
        return None
    tag = str(l).replace("/", "_")
    return Path(d) / f"{kind}_l{tag}_v{CACHE_VERSION}.json"


def _load_cached(kind: str, l: Fraction):
    path = _cache_path(kind, l)
    if path is None or not path.exists():
        return None
    try:
        return ModLinOp.from_json(json.loads(path.read_text()))
    except (ValueError, KeyError, json.JSONDecodeError):
        return None


def _store_cached(kind: str, l: Fraction, op: ModLinOp) -> None:
    path = _cache_path(kind, l)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(op.to_json()))
    tmp.replace(path)


_mlde_memo: dict = {}


def assemble_mlde(l: int) -> ModLinOp:
    """Order l+1 operator annihilating Z_N for an exceptional VOA of lowest primary weight l:
    Z(lambda^[2l+2]) - sum_{k<l} binom(2l-2k+1, 2) E_{2l-2k+2} Z(lambda^[2k])."""
    lf = as_fraction(l)
    if lf.denominator != 1 or lf < 1:
        raise ValueError("assemble_mlde needs a positive integer l")
    l = int(lf)
    if ("mlde", l) in _mlde_memo:
        return _mlde_memo[("mlde", l)]
    cached = _load_cached("mlde", lf)
    if cached is not None:
        _mlde_memo[("mlde", l)] = cached
        return cached
    top, top_den = casimir_operator(l, 2 * l + 2)
    terms = [(top, top_den, None, 1)]
    for k in range(l):
        op, den = casimir_operator(l, 2 * k)
        terms.append((op, den, E(2 * l - 2 * k + 2), -comb(2 * l - 2 * k + 1, 2)))
    result = _finish(_combine(terms), l + 1, twisted=False)
    _mlde_memo[("mlde", l)] = result
    _store_cached("mlde", lf, result)
    return result


def assemble_tmlde(l) -> ModLinOp:
    """Order l+1/2 operator for an exceptional VOSA of odd-parity lowest weight l in N + 1/2:
    Z(lambda^[2l+1]) + 2 sum_{r<=l-1/2} (l-r) F_{2(l-r)+1} Z(lambda^[2r])."""
    l = as_fraction(l)
    if l.denominator != 2 or l < 0:
        raise ValueError("assemble_tmlde needs l in N + 1/2")
    if ("tmlde", l) in _mlde_memo:
        return _mlde_memo[("tmlde", l)]
    cached = _load_cached("tmlde", l)
    if cached is not None:
        _mlde_memo[("tmlde", l)] = cached
        return cached
    top_n = int(2 * l + 1)
    top, top_den = casimir_operator(l, top_n)
    terms = [(top, top_den, None, 1)]
    for r in range(int(l - Fraction(1, 2)) + 1):
        op, den = casimir_operator(l, 2 * r)
        weight = int(2 * (l - r) + 1)
        terms.append((op, den, Ftw(weight), 2 * (l - r)))
    result = _finish(_combine(terms), int(l + Fraction(1, 2)), twisted=True)
    _mlde_memo[("tmlde", l)] = result
    _store_cached("tmlde", l, result)
    return result


def assemble(l) -> ModLinOp:
    l = as_fraction(l)
    return assemble_mlde(int(l)) if l.denominator == 1 else assemble_tmlde(l)


def _finish(op: dict, order: int, twisted: bool) -> ModLinOp:
    if max(op, default=-1) > order:
        raise ArithmeticError("operator order exceeds the expected order")
    lead = op.get(order, {})
    if not lead or not lead.get(UNIT):
        raise Degenerate("leading coefficient g_0(c) vanishes identically")
    result = ModLinOp(order, _normalize(op, order), twisted)
    if result.has_e2():
        raise ArithmeticError("quasi-modular E_2 terms failed to cancel")
    if not result.weight_ok():
        raise ArithmeticError("weight bookkeeping failed")
    return result


def reset_caches() -> None:
    """Drop in-memory operator caches (used by tests)."""
    _op_cache.clear()
    _mlde_memo.clear()
    eisenstein_form.cache_clear()


__all__ = [
    "ModLinOp", "E", "Ftw", "assemble", "assemble_mlde", "assemble_tmlde", "casimir_operator",
    "constant_term", "descendant_operator", "ef_qd", "ef_series", "partition_operator",
    "fock_basis",
]
