"""Dense univariate polynomials over Q and exact resultants.

Coefficient lists are stored lowest degree first, as tuples of Fraction,
with no trailing zeros; the zero polynomial is the empty tuple.  Resultants
and discriminants are computed exactly through fraction-free (Bareiss)
elimination of the Sylvester matrix, with the rows of the first argument
placed on top:

    resultant(f, g) = lc(f)^deg(g) * prod g(alpha_i)   over the roots of f.

``binary_form_resultant`` evaluates the same determinant for homogeneous
binary forms of a stated formal degree d, so vanishing top coefficients are
kept (the determinant is then 0 exactly when the forms share a projective
root, including the point at infinity).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .errors import InputError


def _to_fraction_tuple(coeffs) -> tuple[Fraction, ...]:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class QPoly:
    """Polynomial over Q, coefficients ascending by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        object.__setattr__(self, "coeffs", _to_fraction_tuple(coeffs))

    def __setattr__(self, *args):
        raise AttributeError("QPoly is immutable")

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            raise InputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, QPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"QPoly({poly_str(self.coeffs)})"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "QPoly") -> "QPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPoly(out)

    def __neg__(self) -> "QPoly":
        return QPoly([-c for c in self.coeffs])

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __mul__(self, other: "QPoly") -> "QPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return QPoly(out)

    def scale(self, c) -> "QPoly":
        c = Fraction(c)
        return QPoly([ci * c for ci in self.coeffs])

    def __pow__(self, e: int) -> "QPoly":
        if e < 0:
            raise InputError("negative polynomial power")
        out = QPoly([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other: "QPoly"):
        if other.is_zero():
            raise InputError("polynomial division by zero")
        rem = list(self.coeffs)
        dn, dd = len(rem) - 1, other.degree
        if dn < dd:
            return QPoly(), self
        inv = 1 / other.lc
        quot = [Fraction(0)] * (dn - dd + 1)
        for i in range(dn - dd, -1, -1):
            c = rem[i + dd] * inv
            if c:
                quot[i] = c
                for j, oc in enumerate(other.coeffs):
                    rem[i + j] -= c * oc
        return QPoly(quot), QPoly(rem)

    def __floordiv__(self, other: "QPoly") -> "QPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "QPoly") -> "QPoly":
        return divmod(self, other)[1]

    # -- calculus and evaluation --------------------------------------------

    def derivative(self) -> "QPoly":
        return QPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "QPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def gcd(self, other: "QPoly") -> "QPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def integer_primitive(self) -> tuple[Fraction, tuple[int, ...]]:
        """Write self = scale * prim with prim integral, content 1, lc > 0."""
        if self.is_zero():
            return Fraction(0), ()
        den = lcm(*[c.denominator for c in self.coeffs])
        ints = [int(c * den) for c in self.coeffs]
        g = gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), tuple(c // g for c in ints)


def poly_str(coeffs, var: str = "T") -> str:
    """Readable rendering, highest degree first."""
    cs = _to_fraction_tuple(coeffs)
    if not cs:
        return "0"
    parts = []
    for i in range(len(cs) - 1, -1, -1):
        c = cs[i]
        if c == 0:
            continue
        if i == 0:
            term = str(c)
        else:
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            term = f"{mag}{var}" + (f"^{i}" if i > 1 else "")
            if c < 0:
                term = "-" + term
            elif parts:
                term = "+" + term
            parts.append(term)
            continue
        if c > 0 and parts:
            term = "+" + term
        parts.append(term)
    return "".join(parts) or "0"


# -- determinants ----------------------------------------------------------


def det_bareiss(rows: list[list[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i, row_k = m[i], m[k]
            mik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _sylvester_rows(f_desc: list[int], g_desc: list[int], rows_f: int, rows_g: int):
    size = rows_f + rows_g
    rows = []
    for i in range(rows_f):
        row = [0] * size
        for j, c in enumerate(f_desc):
            row[i + j] = c
        rows.append(row)
    for i in range(rows_g):
        row = [0] * size
        for j, c in enumerate(g_desc):
            row[i + j] = c
        rows.append(row)
    return rows


def resultant(f: QPoly, g: QPoly) -> Fraction:
    """Res(f, g) with true degrees; f's rows first in the Sylvester matrix."""
    if f.is_zero() or g.is_zero():
        raise InputError("resultant of the zero polynomial is undefined")
    n, m = f.degree, g.degree
    if n == 0 and m == 0:
        return Fraction(1)
    sf, fi = f.integer_primitive()
    sg, gi = g.integer_primitive()
    rows = _sylvester_rows(list(reversed(fi)), list(reversed(gi)), m, n)
    det = det_bareiss(rows)
    return det * sf**m * sg**n


def discriminant(f: QPoly) -> Fraction:
    """Disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f), for deg f >= 1."""
    n = f.degree
    if n < 1:
        raise InputError("discriminant requires degree >= 1")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


def binary_form_resultant(f_coeffs, g_coeffs, d: int) -> Fraction:
    """Resultant of two binary forms of formal degree d.

    Coefficient lists are ascending: entry i is the coefficient of
    X^i Y^(d-i).  The result is the determinant of the 2d x 2d Sylvester
    matrix built from the formal coefficient lists (F rows on top), which
    scales by lambda^(2d) when both forms are scaled by lambda.
    """
    if d < 1:
        raise InputError("formal degree must be >= 1")
    fc = [Fraction(c) for c in f_coeffs]
    gc = [Fraction(c) for c in g_coeffs]
    if len(fc) != d + 1 or len(gc) != d + 1:
        raise InputError(f"coefficient lists must have length d+1 = {d + 1}")
    den_f = lcm(*[c.denominator for c in fc]) if fc else 1
    den_g = lcm(*[c.denominator for c in gc]) if gc else 1
    fi = [int(c * den_f) for c in fc]
    gi = [int(c * den_g) for c in gc]
    rows = _sylvester_rows(list(reversed(fi)), list(reversed(gi)), d, d)
    det = det_bareiss(rows)
    return Fraction(det, den_f**d * den_g**d)
