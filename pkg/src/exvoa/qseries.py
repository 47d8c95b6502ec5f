"""Truncated q-series with integer or half-integer steps, Eisenstein series,
Bernoulli numbers and polynomials, eta products and the Serre derivative.

A :class:`QSeries` stores coefficients ``a_i`` of ``q^(offset + i*step)`` for
``0 <= i < len(coeffs)``; every exponent at or beyond ``offset + len*step`` is
unknown.  Coefficients may be Fractions, UniPolys or RatFuncs.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .kernel import as_fraction

HALF = Fraction(1, 2)
ONE = Fraction(1)
DEFAULT_TERMS = 30


def _zero_like(x):
    return x * 0


class QSeries:
    __slots__ = ("coeffs", "offset", "step")

    def __init__(self, coeffs, offset=0, step=1):
        self.coeffs = tuple(coeffs)
        self.offset = offset if not isinstance(offset, (int, str)) else as_fraction(offset)
        step = as_fraction(step)
        if step not in (ONE, HALF):
            raise ValueError("step must be 1 or 1/2")
        self.step = step

    # -- construction ------------------------------------------------------
    @classmethod
    def monomial(cls, exponent, terms: int, coeff=ONE, step=1) -> "QSeries":
        """``coeff * q^exponent`` known up to ``exponent + terms``."""
        step = as_fraction(step)
        n = int(as_fraction(terms) / step)
        return cls([coeff] + [_zero_like(coeff)] * (n - 1), exponent, step)

    @classmethod
    def one(cls, terms: int = DEFAULT_TERMS, step=1) -> "QSeries":
        return cls.monomial(Fraction(0), terms, ONE, step)

    # -- bookkeeping ----------------------------------------------------
    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def truncation(self):
        """Exponents at or above offset + truncation are unknown."""
        return len(self.coeffs) * self.step

    def exponents(self):
        return [self.offset + i * self.step for i in range(len(self.coeffs))]

    def items(self):
        return zip(self.exponents(), self.coeffs)

    def coefficient(self, exponent):
        """Coefficient of ``q^exponent``; exponent is given relative data
        ``offset + k`` when the offset is symbolic, so pass the *shift* k there."""
        rel = as_fraction(exponent) - self.offset if isinstance(self.offset, Fraction) else as_fraction(exponent)
        idx = rel / self.step
        if idx.denominator != 1:
            return _zero_like(self.coeffs[0]) if self.coeffs else Fraction(0)
        idx = int(idx)
        if idx < 0:
            return _zero_like(self.coeffs[0]) if self.coeffs else Fraction(0)
        if idx >= len(self.coeffs):
            raise IndexError(f"coefficient beyond truncation at relative exponent {rel}")
        return self.coeffs[idx]

    def shift_coefficient(self, k):
        """Coefficient of ``q^(offset + k)``."""
        idx = as_fraction(k) / self.step
        if idx.denominator != 1 or idx < 0:
            return _zero_like(self.coeffs[0])
        return self.coeffs[int(idx)]

    def refine(self, step) -> "QSeries":
        """Re-index on a finer step (1 -> 1/2) by interleaving zeros."""
        step = as_fraction(step)
        if step == self.step:
            return self
        if not (self.step == ONE and step == HALF):
            raise ValueError("can only refine from step 1 to step 1/2")
        out = []
        for a in self.coeffs:
            out.append(a)
            out.append(_zero_like(a))
        return QSeries(out, self.offset, HALF)

    def coarsen(self) -> "QSeries":
        """Step 1/2 -> 1 when every half-odd coefficient vanishes."""
        if self.step == ONE:
            return self
        if any(self.coeffs[1::2]):
            raise ValueError("series has half-integral exponents")
        return QSeries(self.coeffs[0::2], self.offset, ONE)

    def truncate(self, terms) -> "QSeries":
        n = int(as_fraction(terms) / self.step)
        if n > len(self.coeffs):
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.coeffs[:n], self.offset, self.step)

    def map(self, fn) -> "QSeries":
        return QSeries([fn(a) for a in self.coeffs], self.offset, self.step)

    def shift(self, delta) -> "QSeries":
        """Multiply by q^delta."""
        return QSeries(self.coeffs, self.offset + delta, self.step)

    # -- ring operations --------------------------------------------------
    def _align(self, other: "QSeries"):
        a, b = self, other
        if a.step != b.step:
            a, b = a.refine(HALF), b.refine(HALF)
        return a, b

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            # a constant added to a series with nonnegative rational offset
            if not isinstance(self.offset, Fraction) or self.offset > 0:
                return NotImplemented
            return self + QSeries.monomial(Fraction(0), self.truncation + self.offset, other, self.step)
        a, b = self._align(other)
        diff = b.offset - a.offset
        if not isinstance(diff, Fraction):
            # symbolic offsets must agree
            if diff:
                raise ValueError("cannot add series with different symbolic offsets")
            diff = Fraction(0)
        if diff < 0:
            a, b, diff = b, a, -diff
        k = diff / a.step
        if k.denominator != 1:
            raise ValueError("offsets are incompatible with the step")
        k = int(k)
        n = min(len(a.coeffs), k + len(b.coeffs))
        out = list(a.coeffs[:n])
        for i in range(k, n):
            out[i] = out[i] + b.coeffs[i - k]
        return QSeries(out, a.offset, a.step)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return self.map(lambda a: -a)

    def __sub__(self, other) -> "QSeries":
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def scale(self, k) -> "QSeries":
        return QSeries([a * k for a in self.coeffs], self.offset, self.step)

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        a, b = self._align(other)
        # relative truncation of the product is the smaller relative truncation
        n = min(len(a.coeffs), len(b.coeffs))
        ac, bc = a.coeffs, b.coeffs
        out = []
        for i in range(n):
            acc = None
            for j in range(i + 1):
                x = ac[j]
                if not x:
                    continue
                y = bc[i - j]
                if not y:
                    continue
                acc = x * y if acc is None else acc + x * y
            out.append(acc if acc is not None else _zero_like(ac[0] if ac else ONE) * (bc[0] if bc else ONE))
        return QSeries(out, a.offset + b.offset, a.step)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            one = _zero_like(self.coeffs[0]) + 1
            return QSeries([one] + [_zero_like(one)] * (len(self.coeffs) - 1), Fraction(0), self.step)
        out = None
        base = self
        while n:
            if n & 1:
                out = base if out is None else out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def inverse(self) -> "QSeries":
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("leading coefficient is zero")
        inv0 = 1 / c0
        n = len(self.coeffs)
        out = [inv0]
        for i in range(1, n):
            acc = 0
            for j in range(1, i + 1):
                if self.coeffs[j]:
                    acc = acc + self.coeffs[j] * out[i - j]
            out.append(-acc * inv0)
        return QSeries(out, -self.offset, self.step)

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return self * other.inverse()
        return self.scale(1 / as_fraction(other))

    def qd(self) -> "QSeries":
        """The Euler operator q d/dq."""
        out = [a * (self.offset + i * self.step) for i, a in enumerate(self.coeffs)]
        return QSeries(out, self.offset, self.step)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.step != other.step:
            a, b = self._align(other)
            return a == b
        return self.offset == other.offset and self.coeffs == other.coeffs

    def agrees_with(self, other: "QSeries", terms=None) -> bool:
        """Coefficientwise agreement on the common known range (or first ``terms``)."""
        a, b = self._align(other)
        if a.offset != b.offset:
            return False
        n = min(len(a.coeffs), len(b.coeffs))
        if terms is not None:
            n = min(n, int(as_fraction(terms) / a.step))
        return all(a.coeffs[i] == b.coeffs[i] for i in range(n))

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return f"QSeries(offset={self.offset}, step={self.step}, [{shown}{more}])"


class ModForm:
    """A q-series together with its modular weight."""

    __slots__ = ("series", "weight")

    def __init__(self, series: QSeries, weight: int):
        self.series = series
        self.weight = weight

    def __mul__(self, other) -> "ModForm":
        if isinstance(other, ModForm):
            return ModForm(self.series * other.series, self.weight + other.weight)
        return ModForm(self.series.scale(other), self.weight)

    __rmul__ = __mul__

    def __add__(self, other: "ModForm") -> "ModForm":
        if self.weight != other.weight:
            raise ValueError(f"cannot add weights {self.weight} and {other.weight}")
        return ModForm(self.series + other.series, self.weight)

    def __sub__(self, other: "ModForm") -> "ModForm":
        return self + other * -1

    def serre(self) -> "ModForm":
        return ModForm(serre_step(self.series, Fraction(self.weight, 2)), self.weight + 2)

    def __repr__(self) -> str:
        return f"ModForm(weight={self.weight}, {self.series!r})"


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials
# ---------------------------------------------------------------------------
@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n from z/(e^z - 1), so B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return ONE
    if n > 1 and n % 2:
        return Fraction(0)
    # sum_{k=0}^{n} binom(n+1, k) B_k = 0
    acc = Fraction(0)
    for k in range(n):
        acc += comb(n + 1, k) * bernoulli_number(k)
    return -acc / (n + 1)


def bernoulli_poly(n: int, kappa) -> Fraction:
    """B_n(kappa) = sum_k binom(n, k) B_k kappa^(n-k)."""
    kappa = as_fraction(kappa)
    return sum((comb(n, k) * bernoulli_number(k) * kappa ** (n - k) for k in range(n + 1)), Fraction(0))


# ---------------------------------------------------------------------------
# Eisenstein series
# ---------------------------------------------------------------------------
@lru_cache(maxsize=None)
def _divisor_power_sums(p: int, terms: int) -> tuple[int, ...]:
    out = [0] * terms
    for d in range(1, terms):
        dp = d ** p
        for m in range(d, terms, d):
            out[m] += dp
    return tuple(out)


@lru_cache(maxsize=None)
def eisenstein_series(n: int, terms: int = DEFAULT_TERMS) -> QSeries:
    """E_n(q) = -B_n/n! + 2/(n-1)! sum_k sigma_{n-1}(k) q^k; zero for odd n."""
    if n < 1:
        raise ValueError("weight must be positive")
    if n % 2:
        return QSeries([Fraction(0)] * terms, Fraction(0), 1)
    sig = _divisor_power_sums(n - 1, terms)
    pref = Fraction(2, factorial(n - 1))
    coeffs = [-bernoulli_number(n) / factorial(n)] + [pref * s for s in sig[1:]]
    return QSeries(coeffs, Fraction(0), 1)


def eisenstein(n: int, terms: int = DEFAULT_TERMS) -> ModForm:
    if n < 2 or n % 2:
        if n >= 1 and n % 2:
            return ModForm(eisenstein_series(n, terms), n)
        raise ValueError("eisenstein requires n >= 2")
    return ModForm(eisenstein_series(n, terms), n)


@lru_cache(maxsize=None)
def twisted_eisenstein_series(n: int, theta: int, phi: int, terms: int = DEFAULT_TERMS) -> QSeries:
    """E_n[theta, phi] = -B_n(kappa)/n! + 2/(n-1)! sum_{k in N+kappa} k^(n-1) theta q^k/(1 - theta q^k).

    kappa = 0 for phi = 1 and 1/2 for phi = -1; the sum runs over k > 0.
    The result is indexed with step 1/2 when kappa = 1/2.
    """
    if theta not in (1, -1) or phi not in (1, -1):
        raise ValueError("theta and phi must be +1 or -1")
    if n < 1:
        raise ValueError("weight must be positive")
    kappa = Fraction(0) if phi == 1 else HALF
    step = ONE if phi == 1 else HALF
    length = int(terms / step)
    coeffs = [Fraction(0)] * length
    coeffs[0] = -bernoulli_poly(n, kappa) / factorial(n)
    pref = Fraction(2, factorial(n - 1))
    k = kappa if kappa else ONE
    while k < terms:
        kp = k ** (n - 1)
        j = 1
        while j * k < terms:
            idx = int(j * k / step)
            coeffs[idx] += pref * kp * (theta ** j)
            j += 1
        k += 1
    return QSeries(coeffs, Fraction(0), step)


def twisted_eisenstein(n: int, theta: int, phi: int, terms: int = DEFAULT_TERMS) -> ModForm:
    return ModForm(twisted_eisenstein_series(n, theta, phi, terms), n)


def F(n: int, terms: int = DEFAULT_TERMS) -> QSeries:
    """Shorthand for E_n[1, -1]."""
    return twisted_eisenstein_series(n, 1, -1, terms)


# ---------------------------------------------------------------------------
# Eta products
# ---------------------------------------------------------------------------
@lru_cache(maxsize=None)
def euler_product(terms: int) -> tuple[int, ...]:
    """Coefficients of prod_{m>=1} (1 - q^m) below q^terms, by direct multiplication."""
    c = [0] * terms
    c[0] = 1
    for m in range(1, terms):
        for i in range(terms - 1, m - 1, -1):
            c[i] -= c[i - m]
    return tuple(c)


def partition_counts(terms: int) -> tuple[int, ...]:
    """Coefficients of prod (1 - q^m)^(-1)."""
    p = [0] * terms
    p[0] = 1
    for m in range(1, terms):
        for i in range(m, terms):
            p[i] += p[i - m]
    return tuple(p)


def dedekind_eta(terms: int = DEFAULT_TERMS) -> QSeries:
    """eta(tau) = q^(1/24) prod (1 - q^m)."""
    return QSeries([Fraction(a) for a in euler_product(terms)], Fraction(1, 24), 1)


def dedekind_eta_half(terms: int = DEFAULT_TERMS) -> QSeries:
    """eta(tau/2) = q^(1/48) prod (1 - q^(m/2)), indexed with step 1/2."""
    return QSeries([Fraction(a) for a in euler_product(2 * terms)], Fraction(1, 48), HALF)


def eta_quotient_fermion(m: int, terms: int = DEFAULT_TERMS) -> QSeries:
    """(eta(tau/2)/eta(tau))^m = q^(-m/48) prod_{n>=1} (1 - q^(n-1/2))^m."""
    base = dedekind_eta_half(terms) / dedekind_eta(terms)
    return base ** m if m >= 0 else base.inverse() ** (-m)


def pentagonal_coefficients(terms: int) -> tuple[int, ...]:
    """Euler's pentagonal number theorem, as an independent route to prod (1 - q^m)."""
    c = [0] * terms
    k = 0
    while True:
        k += 1
        done = True
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g < terms:
                c[g] += (-1) ** k
                done = False
        if done:
            break
    c[0] = 1
    return tuple(c)


# ---------------------------------------------------------------------------
# Derivatives and relations among Eisenstein series
# ---------------------------------------------------------------------------
def serre_step(z: QSeries, m, terms=None) -> QSeries:
    """(q d/dq + 2m E_2) z; iterating m = 0, 1, ..., M-1 gives D^M z."""
    m = as_fraction(m)
    n = terms if terms is not None else z.truncation
    e2 = eisenstein_series(2, int(-(-as_fraction(n) // 1)) + 1)
    out = z.qd()
    if m:
        out = out + (z * e2).scale(2 * m)
    return out


def serre_power(z: QSeries, order: int) -> QSeries:
    """D^order z with z regarded as weight 0."""
    for m in range(order):
        z = serre_step(z, m)
    return z


def ramanujan_identities() -> dict[str, dict[tuple[int, int, int], Fraction]]:
    """q d/dq of E_2, E_4, E_6 as polynomials in (E_2, E_4, E_6) for E_n = -B_n/n! + ... .

    Keys are exponent triples (a, b, d) standing for E_2^a E_4^b E_6^d.
    """
    return {
        "E2": {(2, 0, 0): Fraction(-1), (0, 1, 0): Fraction(5)},
        "E4": {(1, 1, 0): Fraction(-4), (0, 0, 1): Fraction(14)},
        "E6": {(1, 0, 1): Fraction(-6), (0, 2, 0): Fraction(60, 7)},
    }


@lru_cache(maxsize=None)
def eisenstein_basis(n: int) -> dict[tuple[int, int], Fraction]:
    """E_n (even n >= 4) as sum of coefficients times E_4^a E_6^b with 4a + 6b = n.

    Found by an exact linear solve on q-expansions and verified on further terms.
    """
    if n % 2 or n < 4:
        raise ValueError("need even n >= 4")
    from .kernel import Matrix, bareiss

    monos = [(a, (n - 4 * a) // 6) for a in range(n // 4 + 1) if (n - 4 * a) % 6 == 0]
    k = len(monos)
    check = k + 10
    terms = check + 1
    e4 = eisenstein_series(4, terms)
    e6 = eisenstein_series(6, terms)
    cols = [(e4 ** a) * (e6 ** b) for a, b in monos]
    target = eisenstein_series(n, terms)
    rows = [[cols[j].coeffs[i] for j in range(k)] for i in range(k)]
    num, _, det = bareiss(Matrix.from_rows(rows), [target.coeffs[i] for i in range(k)])
    sol = [Fraction(v) / det for v in num]
    for i in range(check):
        lhs = sum((sol[j] * cols[j].coeffs[i] for j in range(k)), Fraction(0))
        if lhs != target.coeffs[i]:
            raise ArithmeticError(f"E_{n} is not in the span of E4, E6 monomials")
    return {monos[j]: sol[j] for j in range(k) if sol[j]}
