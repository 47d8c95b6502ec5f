"""Virasoro vacuum Fock space and primary Verma modules over Q(c).

States are sums over partitions: the partition (n1, ..., nk), n1 >= ... >= nk,
stands for L(-n1)...L(-nk) applied to the vacuum (parts >= 2) or to a primary
vector (parts >= 1).  Coefficients are UniPoly or RatFunc in the central
charge c.  Mode actions are computed by commuting annihilators to the right
with [L(m), L(n)] = (m - n) L(m + n) + c/12 (m^3 - m) delta_{m+n,0}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from threading import Lock

from .errors import NotCoprime
from .kernel import C, Matrix, RatFunc, UniPoly, as_fraction, solve_linear

Partition = tuple[int, ...]

_ZERO_POLY = UniPoly()
_ONE_POLY = UniPoly.const(1)


@lru_cache(maxsize=None)
def fock_basis(level: int, min_part: int = 2) -> tuple[Partition, ...]:
    """Partitions of ``level`` with parts >= min_part, lexicographically descending."""
    if level < 0:
        return ()

    def gen(n: int, largest: int):
        if n == 0:
            yield ()
            return
        for first in range(min(n, largest), min_part - 1, -1):
            for rest in gen(n - first, first):
                yield (first,) + rest

    return tuple(gen(level, level))


def _add_into(acc: dict, key, value) -> None:
    v = acc.get(key)
    v = value if v is None else v + value
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _central(m: int) -> UniPoly:
    return C.scale(Fraction(m ** 3 - m, 12))


class _ModeAlgebra:
    """Normal ordering of a single mode L(m) against a PBW monomial.

    ``weight`` is None for the vacuum module (L(k)|0> = 0 for k >= -1) and the
    lowest conformal weight h for a Verma module (L(k)v = 0 for k > 0,
    L(0)v = h v).
    """

    def __init__(self, weight=None):
        self.weight = None if weight is None else as_fraction(weight)
        self.min_part = 2 if weight is None else 1
        self._memo: dict = {}
        self._lock = Lock()

    def apply_basis(self, m: int, part: Partition) -> dict:
        key = (m, part)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = self._compute(m, part)
        with self._lock:
            self._memo[key] = out
        return out

    def _compute(self, m: int, part: Partition) -> dict:
        if not part:
            if self.weight is None:
                return {} if m >= -1 else {(-m,): _ONE_POLY}
            if m > 0:
                return {}
            if m == 0:
                return {(): UniPoly.const(self.weight)} if self.weight else {}
            return {(-m,): _ONE_POLY}
        n1, rest = part[0], part[1:]
        if m < 0 and -m >= n1:
            return {(-m,) + part: _ONE_POLY}
        if m == 0:
            lev = sum(part) + (self.weight or 0)
            return {part: UniPoly.const(lev)} if lev else {}
        out: dict = {}
        # L(m) L(-n1) R = L(-n1) L(m) R + (m + n1) L(m - n1) R + central
        for p, coef in self.apply_basis(m, rest).items():
            for p2, c2 in self.apply_basis(-n1, p).items():
                _add_into(out, p2, coef * c2)
        if m + n1:
            for p, coef in self.apply_basis(m - n1, rest).items():
                _add_into(out, p, coef.scale(m + n1))
        if m == n1:
            _add_into(out, rest, _central(m))
        return out

    def apply(self, m: int, vec: dict) -> dict:
        out: dict = {}
        for part, coef in vec.items():
            for p2, c2 in self.apply_basis(m, part).items():
                _add_into(out, p2, coef * c2)
        return out


_VACUUM = _ModeAlgebra(None)


@lru_cache(maxsize=None)
def _verma(weight) -> _ModeAlgebra:
    return _ModeAlgebra(weight)


@dataclass(frozen=True)
class FockVector:
    """Vacuum descendant sum_P coeff_P L(-P)|0> at a fixed level."""

    level: int
    terms: tuple  # ((partition, coefficient), ...) in basis order

    @classmethod
    def from_dict(cls, level: int, d: dict) -> "FockVector":
        order = {p: i for i, p in enumerate(fock_basis(level, 2))}
        items = sorted(((p, v) for p, v in d.items() if v), key=lambda t: order.get(t[0], -1))
        return cls(level, tuple(items))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def coefficient(self, part: Partition):
        return self.as_dict().get(tuple(part), RatFunc(0))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({v})*L{list(p)}" for p, v in self.terms)


@dataclass(frozen=True)
class PrimaryVector:
    """Descendant sum_P coeff_P L(-P) b of a primary b of weight ``weight_l``."""

    weight_l: Fraction
    terms: tuple

    def as_dict(self) -> dict:
        return dict(self.terms)

    @property
    def grading(self):
        levels = {sum(p) for p, _ in self.terms}
        return [self.weight_l + n for n in sorted(levels)]


def l_mode_apply(m: int, v):
    """Exact action of L(m) on a FockVector, PrimaryVector or raw dict."""
    if isinstance(v, FockVector):
        d = {p: (c.num if isinstance(c, RatFunc) and c.is_poly() else c) for p, c in v.terms}
        out = _apply_mixed(_VACUUM, m, d)
        lev = v.level - m
        if lev < 0:
            return FockVector(0, ())
        return FockVector.from_dict(lev, out)
    if isinstance(v, PrimaryVector):
        out = _apply_mixed(_verma(v.weight_l), m, v.as_dict())
        return PrimaryVector(v.weight_l, tuple(sorted(out.items(), reverse=True)))
    return _VACUUM.apply(m, v)


def _apply_mixed(alg: _ModeAlgebra, m: int, vec: dict) -> dict:
    out: dict = {}
    for part, coef in vec.items():
        for p2, c2 in alg.apply_basis(m, part).items():
            _add_into(out, p2, coef * c2 if not isinstance(coef, RatFunc) else coef * RatFunc(c2))
    return out


def apply_word(word, part: Partition = (), weight=None) -> dict:
    """L(w1) L(w2) ... L(wk) applied to L(-part)|v>, returned as a normal-ordered dict."""
    alg = _VACUUM if weight is None else _verma(as_fraction(weight))
    vec = {tuple(part): _ONE_POLY}
    for m in reversed(list(word)):
        vec = alg.apply(m, vec)
    return vec


# ---------------------------------------------------------------------------
# Gram (Shapovalov) matrices
# ---------------------------------------------------------------------------
_gram_lock = Lock()
_gram_cache: dict = {}


def _pairing(level: int, weight=None) -> dict:
    """Map (P, Q) -> <L(-P)v, L(-Q)v> for partitions of ``level``."""
    key = (level, weight)
    hit = _gram_cache.get(key)
    if hit is not None:
        return hit
    alg = _VACUUM if weight is None else _verma(weight)
    basis = fock_basis(level, alg.min_part)
    if level == 0:
        table = {((), ()): _ONE_POLY}
    else:
        table = {}
        for i, p in enumerate(basis):
            head, tail = p[0], p[1:]
            lower = _pairing(level - head, weight)
            for j in range(i, len(basis)):
                q = basis[j]
                acc = UniPoly()
                for r, coef in alg.apply_basis(head, q).items():
                    g = lower.get((tail, r))
                    if g:
                        acc = acc + coef * g
                table[(p, q)] = acc
                table[(q, p)] = acc
    with _gram_lock:
        _gram_cache[key] = table
    return table


def gram_matrix(level: int, weight=None) -> Matrix:
    """Gram matrix of the invariant form on the level-``level`` Fock basis.

    With ``weight`` given, the Verma module of that lowest weight is used
    (basis partitions with parts >= 1).  Normalization <v, v> = 1.
    """
    w = None if weight is None else as_fraction(weight)
    basis = fock_basis(level, 2 if w is None else 1)
    table = _pairing(level, w)
    return Matrix(len(basis), len(basis), [table[(p, q)] for p in basis for q in basis])


def gram_determinant(level: int, weight=None) -> UniPoly:
    from .kernel import determinant

    m = gram_matrix(level, weight)
    if m.rows == 0:
        return UniPoly.const(1)
    return determinant(m)


# ---------------------------------------------------------------------------
# Casimir vectors
# ---------------------------------------------------------------------------
def _sign(l: Fraction) -> int:
    """(-1)^l, read as (-1)^(l - 1/2) for half-integral l."""
    e = l if l.denominator == 1 else l - Fraction(1, 2)
    return -1 if int(e) % 2 else 1


def casimir_chain(l, part: Partition, n: int) -> Fraction:
    """<L(-part)|0>, lambda^(n)>/p_l via L(m) lambda^(k) = (k - m + l(m - 1)) lambda^(k - m)."""
    l = as_fraction(l)
    k = n
    val = Fraction(1)
    for m in part:
        val *= k - m + l * (m - 1)
        k -= m
        if k == 1 or not val:
            return Fraction(0)
    if k != 0:
        raise ValueError("partition level does not match n")
    return val * _sign(l)


def casimir_pairing_vector(l, n: int) -> list[Fraction]:
    """Pairings of every level-n Fock basis vector with lambda^(n)/p_l."""
    return [casimir_chain(l, p, n) for p in fock_basis(n, 2)]


_casimir_cache: dict = {}
_casimir_lock = Lock()


def casimir_fock(l, n: int) -> FockVector:
    """lambda^(n)/p_l as a vacuum descendant, assuming it lies in the Virasoro subalgebra."""
    l = as_fraction(l)
    key = (l, n)
    hit = _casimir_cache.get(key)
    if hit is not None:
        return hit
    basis = fock_basis(n, 2)
    if n == 0:
        vec = FockVector(0, (((), RatFunc(_sign(l))),))
    elif not basis:
        vec = FockVector(n, ())
    else:
        sol, _ = solve_linear(gram_matrix(n), casimir_pairing_vector(l, n))
        vec = FockVector(n, tuple((p, s) for p, s in zip(basis, sol) if s))
    with _casimir_lock:
        _casimir_cache[key] = vec
    return vec


def pair_with_basis(v: FockVector) -> list[RatFunc]:
    """The vector Gram(level) . coefficients(v)."""
    basis = fock_basis(v.level, 2)
    d = v.as_dict()
    coeffs = [RatFunc.coerce(d.get(p, 0)) for p in basis]
    g = gram_matrix(v.level)
    return [sum((RatFunc(g[i, j]) * coeffs[j] for j in range(len(basis)) if coeffs[j]), RatFunc(0))
            for i in range(len(basis))]


# ---------------------------------------------------------------------------
# Minimal models
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class MinimalModelData:
    p: int
    q: int
    c_pq: Fraction
    weight_grid: frozenset


def central_charge(p: int, q: int) -> Fraction:
    return 1 - Fraction(6 * (p - q) ** 2, p * q)


def weight_hrs(p: int, q: int, r: int, s: int) -> Fraction:
    return Fraction((p * r - q * s) ** 2 - (p - q) ** 2, 4 * p * q)


def minimal_model(p: int, q: int) -> MinimalModelData:
    if p < 2 or q < 2 or gcd(p, q) != 1:
        raise NotCoprime(f"({p}, {q}) is not a coprime pair with p, q >= 2")
    grid = frozenset(weight_hrs(p, q, r, s) for r in range(1, q) for s in range(1, p))
    return MinimalModelData(p, q, central_charge(p, q), grid)


def kac_vacuum_charges(level: int) -> set[Fraction]:
    """Central charges c_{p,q} with (p-1)(q-1) <= level, p < q coprime."""
    out = set()
    for p in range(2, level + 2):
        for q in range(p + 1, level + 2):
            if gcd(p, q) == 1 and (p - 1) * (q - 1) <= level:
                out.add(central_charge(p, q))
    return out
