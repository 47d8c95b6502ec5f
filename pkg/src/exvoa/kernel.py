"""Exact arithmetic: univariate polynomials and rational functions over Q,
dense matrices, fraction-free linear solving and rational root extraction.

Rationals are plain :class:`fractions.Fraction` values.  The indeterminate of
a :class:`UniPoly` is the central charge ``c`` unless stated otherwise.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Callable, Iterable, Sequence

from .errors import SingularMatrix

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and strings such as ``"47/2"`` or ``"-22/5"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def _common_den(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for a in coeffs:
        d = a.denominator
        if d != 1 and den % d:
            den = den * d // gcd(den, d)
    return [a.numerator * (den // a.denominator) for a in coeffs], den


def _from_ints(ints: Sequence[int], den: int) -> tuple[Fraction, ...]:
    if den == 1:
        return tuple(Fraction(a) for a in ints)
    return tuple(Fraction(a, den) for a in ints)


class UniPoly:
    """Dense univariate polynomial with rational coefficients (low degree first)."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(a) for a in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: Sequence[Fraction]) -> "UniPoly":
        p = cls.__new__(cls)
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        p.coeffs = tuple(cs)
        p._hash = None
        return p

    @classmethod
    def const(cls, a) -> "UniPoly":
        return cls._raw((as_fraction(a),))

    @classmethod
    def x(cls) -> "UniPoly":
        return cls._raw((_ZERO, _ONE))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        p = cls.const(1)
        for r in roots:
            p = p * cls._raw((-as_fraction(r), _ONE))
        return p

    # -- basic properties -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def const_term(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else _ZERO

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == ((Fraction(other),) if other else ())
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    # -- ring operations --------------------------------------------------
    def __add__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            if isinstance(other, (int, Fraction)):
                other = UniPoly.const(other)
            else:
                return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return UniPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly._raw([-a for a in self.coeffs])

    def __sub__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            if isinstance(other, (int, Fraction)):
                other = UniPoly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "UniPoly":
        return (-self) + other

    def scale(self, k) -> "UniPoly":
        k = as_fraction(k)
        if k == 0:
            return UniPoly._raw(())
        if k == 1:
            return self
        return UniPoly._raw([a * k for a in self.coeffs])

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return UniPoly._raw(())
            if len(a) == 1:
                return other.scale(a[0])
            if len(b) == 1:
                return self.scale(b[0])
            ia, da = _common_den(a)
            ib, db = _common_den(b)
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(ia):
                if x:
                    for j, y in enumerate(ib):
                        out[i + j] += x * y
            return UniPoly._raw(_from_ints(out, da * db))
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        out = UniPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        if len(r) - 1 < db:
            return UniPoly._raw(()), self
        inv = 1 / other.lead
        bc = other.coeffs
        q = [_ZERO] * (len(r) - db)
        for i in range(len(r) - 1, db - 1, -1):
            t = r[i] * inv
            if t:
                q[i - db] = t
                for j in range(db + 1):
                    r[i - db + j] -= t * bc[j]
        return UniPoly._raw(q), UniPoly._raw(r[:db])

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    # -- evaluation and calculus -----------------------------------------
    def __call__(self, x):
        """Horner evaluation; ``x`` may be a number or another UniPoly (composition)."""
        if isinstance(x, (int, Fraction)):
            acc = _ZERO
            for a in reversed(self.coeffs):
                acc = acc * x + a
            return acc
        acc = UniPoly._raw(())
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly._raw([i * a for i, a in enumerate(self.coeffs)][1:])

    def monic(self) -> "UniPoly":
        if not self.coeffs or self.lead == 1:
            return self
        return self.scale(1 / self.lead)

    def integer_form(self) -> tuple[list[int], Fraction]:
        """Return (primitive integer coefficients, content) with self = content * ints."""
        if not self.coeffs:
            return [], _ZERO
        ints, den = _common_den(self.coeffs)
        g = reduce(gcd, ints)
        if ints[-1] < 0:
            g = -g
        return [a // g for a in ints], Fraction(g, den)

    def primitive(self) -> "UniPoly":
        ints, _ = self.integer_form()
        return UniPoly._raw([Fraction(a) for a in ints])

    # -- display ----------------------------------------------------------
    def to_str(self, var: str = "c") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = -a if a < 0 else a
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"UniPoly({self.to_str()})"

    __str__ = to_str


C = UniPoly.x()


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor; ``gcd(0, 0) == 0``."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_const() or b.is_const():
        return UniPoly.const(1)
    a, b = a.primitive(), b.primitive()
    while b:
        r = a % b
        a, b = b, (r.primitive() if r else r)
    return a.monic()


class RatFunc:
    """Reduced quotient num/den of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced: bool = False):
        if not isinstance(num, UniPoly):
            num = UniPoly.const(num)
        if den is None:
            den = UniPoly.const(1)
        elif not isinstance(den, UniPoly):
            den = UniPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = UniPoly.const(1)
            elif not den.is_const():
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lead
            if lc != 1:
                num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, UniPoly):
            return cls(x, _reduced=True)
        return cls(UniPoly.const(x), _reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_const()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, UniPoly)):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other) -> "RatFunc":
        try:
            o = RatFunc.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if o.den.is_const():
            return RatFunc(self.num + o.num * self.den, self.den, _reduced=True)
        if self.den.is_const():
            return RatFunc(self.num * o.den + o.num, o.den, _reduced=True)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other) -> "RatFunc":
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFunc(UniPoly._raw(()), _reduced=True)
            return RatFunc(self.num.scale(other), self.den, _reduced=True)
        try:
            o = RatFunc.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        if o.den.is_const() and self.den.is_const():
            return RatFunc(self.num * o.num, _reduced=True)
        # cross-cancel before multiplying to keep degrees small
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = (self.num.exact_div(g1), o.den.exact_div(g1)) if g1.degree > 0 else (self.num, o.den)
        n2, d1 = (o.num.exact_div(g2), self.den.exact_div(g2)) if g2.degree > 0 else (o.num, self.den)
        return RatFunc(n1 * n2, d1 * d2, _reduced=False)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num, _reduced=False)

    def __truediv__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * RatFunc.coerce(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    def __call__(self, x):
        """Evaluate at a rational point (raises ZeroDivisionError at a pole)."""
        x = as_fraction(x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole of rational function at c = {x}")
        return self.num(x) / d

    def to_str(self, var: str = "c") -> str:
        if self.den.is_const():
            return self.num.to_str(var)
        return f"({self.num.to_str(var)})/({self.den.to_str(var)})"

    def __repr__(self) -> str:
        return f"RatFunc({self.to_str()})"

    __str__ = to_str


def equal_up_to_sign(a: RatFunc, b: RatFunc) -> bool:
    return a == b or a == -b


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------
class Matrix:
    """Dense row-major matrix over a ring (Fraction, UniPoly or RatFunc)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        if len(entries) != rows * cols:
            raise ValueError("entries length must equal rows * cols")
        self.rows, self.cols = rows, cols
        self.entries = list(entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int, one=_ONE, zero=_ZERO) -> "Matrix":
        return cls(n, n, [one if i == j else zero for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for j in range(other.cols):
                    acc = r[0] * other[0, j]
                    for k in range(1, self.cols):
                        acc = acc + r[k] * other[k, j]
                    out.append(acc)
            return Matrix(self.rows, other.cols, out)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        res = []
        for i in range(self.rows):
            r = self.row(i)
            acc = r[0] * vec[0]
            for k in range(1, self.cols):
                acc = acc + r[k] * vec[k]
            res.append(acc)
        return res

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"


def _exact_div(a, b):
    if isinstance(a, UniPoly):
        return a.exact_div(b)
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("inexact integer division")
        return q
    return Fraction(a) / b


def bareiss(m: Matrix, rhs: Sequence | None = None, zero=None) -> tuple[list, list | None, object]:
    """Fraction-free (Bareiss) elimination over an integral domain.

    Works for Fraction or UniPoly entries.  Returns ``(numerators, None, det)``
    where ``solution[i] = numerators[i] / det``; numerators are in the ring.
    Raises :class:`SingularMatrix` if the determinant vanishes.
    """
    n = m.rows
    if m.cols != n:
        raise ValueError("matrix must be square")
    a = [m.row(i) + ([rhs[i]] if rhs is not None else []) for i in range(n)]
    width = len(a[0]) if n else 0
    sign = 1
    prev = None
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise SingularMatrix("determinant is identically zero")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, width):
                v = akk * row_i[j] - aik * row_k[j]
                row_i[j] = _exact_div(v, prev) if prev is not None else v
            row_i[k] = akk * 0 if zero is None else zero
        prev = akk
    d = a[n - 1][n - 1] if n else _ONE
    det = -d if sign < 0 else d
    if rhs is None:
        return [], None, det
    # Fraction-free back substitution: y_i = d * x_i stays in the ring.
    y = [None] * n
    for i in range(n - 1, -1, -1):
        acc = d * a[i][n]
        for j in range(i + 1, n):
            acc = acc - a[i][j] * y[j]
        y[i] = _exact_div(acc, a[i][i])
    if sign < 0:
        y = [-v for v in y]
    return y, None, det


def determinant(m: Matrix):
    """Determinant over the entry ring; zero (not an exception) for singular m."""
    try:
        return bareiss(m)[2]
    except SingularMatrix:
        return m[0, 0] * 0


def solve_linear(m: Matrix, rhs: Sequence) -> tuple[list[RatFunc], RatFunc]:
    """Solve ``m x = rhs`` exactly over Q(c).

    Row denominators are cleared so elimination runs fraction-free over Q[c].
    Returns ``(solution, determinant)``.
    """
    n = m.rows
    rows = []
    rvec = []
    row_scale = RatFunc(1)
    for i in range(n):
        entries = [RatFunc.coerce(x) for x in m.row(i)] + [RatFunc.coerce(rhs[i])]
        den = UniPoly.const(1)
        for e in entries:
            if not e.den.is_const():
                den = den * e.den.exact_div(poly_gcd(den, e.den))
        rows.append([e.num * den.exact_div(e.den) for e in entries[:-1]])
        rvec.append(entries[-1].num * den.exact_div(entries[-1].den))
        row_scale = row_scale * RatFunc(den)
    y, _, det = bareiss(Matrix.from_rows(rows), rvec, zero=UniPoly._raw(()))
    sol = [RatFunc(v, det) for v in y]
    return sol, RatFunc(det) / row_scale


def solve_poly_system(m: Matrix, rhs: Sequence[UniPoly]) -> tuple[list[UniPoly], UniPoly]:
    """Bareiss solve for a polynomial matrix; returns (numerators, det) so x = num/det."""
    y, _, det = bareiss(m, list(rhs), zero=UniPoly._raw(()))
    return y, det


# ---------------------------------------------------------------------------
# Rational roots
# ---------------------------------------------------------------------------
def _int_eval(ints: Sequence[int], a: int, b: int) -> int:
    """b^d * P(a/b) for integer coefficients (low degree first)."""
    d = len(ints) - 1
    acc = 0
    bp = 1
    # Horner in homogeneous form
    acc = ints[d]
    for i in range(d - 1, -1, -1):
        bp *= b
        acc = acc * a + ints[i] * bp
    return acc


def _sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(r.scale(-1 / abs(r.lead)))
    return seq


def _sign_changes(seq: Sequence[UniPoly], x: Fraction) -> int:
    signs = []
    for p in seq:
        v = p(x)
        if v:
            signs.append(v > 0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _squarefree(p: UniPoly) -> UniPoly:
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g) if g.degree > 0 else p


def rational_roots(p: UniPoly) -> list[Fraction]:
    """All rational roots of ``p`` with multiplicity, sorted ascending.

    Candidates obey the rational root theorem on the primitive integer form:
    a root a/b in lowest terms has b | lead and a | constant term.  Real roots of
    the square-free part are isolated with a Sturm sequence and refined until
    the isolating interval is narrower than 1/(2 lead^2); a rational root is then
    the unique fraction of denominator <= |lead| inside it.
    """
    if p.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    roots: list[Fraction] = []
    q = p.primitive()
    while q.degree > 0 and q.coeffs[0] == 0:
        roots.append(_ZERO)
        q = UniPoly._raw(q.coeffs[1:])
    if q.degree <= 0:
        return sorted(roots)
    sf = _squarefree(q).primitive()
    ints, _ = sf.integer_form()
    lead = abs(ints[-1])
    const = abs(ints[0])
    found: list[Fraction] = []
    if sf.degree == 1:
        found.append(Fraction(-ints[0], ints[1]))
    else:
        seq = _sturm_sequence(sf)
        bound = 1 + max(abs(Fraction(a, ints[-1])) for a in ints[:-1])
        bound = Fraction(int(bound) + 1)
        width_goal = Fraction(1, 2 * lead * lead)
        stack = [(-bound, bound, _sign_changes(seq, -bound) - _sign_changes(seq, bound))]
        while stack:
            lo, hi, n = stack.pop()
            if n == 0:
                continue
            if n == 1:
                cand = _isolate_rational(sf, lo, hi, lead, width_goal)
                if cand is not None:
                    found.append(cand)
                continue
            mid = (lo + hi) / 2
            if sf(mid) == 0:
                found.append(mid)
            vlo, vmid, vhi = (_sign_changes(seq, x) for x in (lo, mid, hi))
            stack.append((lo, mid, vlo - vmid))
            stack.append((mid, hi, vmid - vhi))
    for r in set(found):
        if r.numerator and const % abs(r.numerator):
            continue
        if lead % r.denominator:
            continue
        lin = UniPoly._raw((-r, _ONE))
        while True:
            qq, rem = q.divmod(lin)
            if rem:
                break
            roots.append(r)
            q = qq
    return sorted(roots)


def _isolate_rational(p: UniPoly, lo: Fraction, hi: Fraction, lead: int, width_goal: Fraction):
    """p has exactly one real root in (lo, hi]; return it if it is rational with den | lead."""
    if p(hi) == 0:
        return hi
    slo = p(lo) > 0
    while hi - lo >= width_goal:
        mid = (lo + hi) / 2
        v = p(mid)
        if v == 0:
            return mid
        if (v > 0) == slo:
            lo = mid
        else:
            hi = mid
    cand = ((lo + hi) / 2).limit_denominator(lead)
    if lo < cand <= hi and p(cand) == 0:
        return cand
    return None


def integer_divisors(n: int) -> list[int]:
    """Positive divisors of ``n`` (n != 0)."""
    from sympy import divisors

    return [int(d) for d in divisors(abs(n))]


def rational_roots_bruteforce(p: UniPoly) -> list[Fraction]:
    """Oracle: enumerate every divisor pair (a | const, b | lead).  Small inputs only."""
    roots: list[Fraction] = []
    q = p.primitive()
    while q.degree > 0 and q.coeffs[0] == 0:
        roots.append(_ZERO)
        q = UniPoly._raw(q.coeffs[1:])
    if q.degree <= 0:
        return sorted(roots)
    ints, _ = q.integer_form()
    cands = {Fraction(s * a, b) for a in integer_divisors(ints[0])
             for b in integer_divisors(ints[-1]) for s in (1, -1)}
    for r in cands:
        while q.degree > 0 and _int_eval(q.integer_form()[0], r.numerator, r.denominator) == 0:
            roots.append(r)
            q = q.exact_div(UniPoly._raw((-r, _ONE)))
    return sorted(roots)


def lcm_poly(polys: Iterable[UniPoly]) -> UniPoly:
    out = UniPoly.const(1)
    for p in polys:
        if p.is_zero():
            continue
        out = out * p.exact_div(poly_gcd(out, p))
    return out.monic()


def content_gcd(polys: Iterable[UniPoly]) -> UniPoly:
    g = UniPoly._raw(())
    for p in polys:
        g = poly_gcd(g, p)
        if g.degree == 0:
            break
    return g


def fraction_lcm_den(values: Iterable[Fraction]) -> int:
    return reduce(lcm, (v.denominator for v in values), 1)


def map_coeffs(seq: Sequence, fn: Callable) -> list:
    return [fn(x) for x in seq]


def real_root_intervals(p: UniPoly, width) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (lo, hi], each holding exactly one distinct real root of p,
    refined until hi - lo < width.  Exact Sturm-sequence isolation."""
    if p.is_zero():
        raise ValueError("real_root_intervals of the zero polynomial")
    if p.degree <= 0:
        return []
    width = as_fraction(width)
    sf = _squarefree(p).primitive()
    if sf.degree == 1:
        r = -sf.coeffs[0] / sf.coeffs[1]
        return [(r, r)]
    seq = _sturm_sequence(sf)
    bound = Fraction(int(1 + max(abs(a / sf.lead) for a in sf.coeffs[:-1])) + 1)
    out = []
    stack = [(-bound, bound, _sign_changes(seq, -bound) - _sign_changes(seq, bound))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            if sf(hi) == 0:
                out.append((hi, hi))
                continue
            slo = sf(lo) > 0
            while hi - lo >= width:
                mid = (lo + hi) / 2
                v = sf(mid)
                if v == 0:
                    lo = hi = mid
                    break
                if (v > 0) == slo:
                    lo = mid
                else:
                    hi = mid
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        vlo, vmid, vhi = (_sign_changes(seq, x) for x in (lo, mid, hi))
        stack.append((lo, mid, vlo - vmid))
        stack.append((mid, hi, vmid - vhi))
    return sorted(out)
