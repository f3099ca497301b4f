"""Exact arithmetic over Q and Q(t), plus certified numerical root finding.

Polynomials are dense and generic over a coefficient field: either
``Fraction`` (so ``Polynomial`` is an element of Q[x]) or
``RationalFunction`` (an element of Q(t)[x], used for families).
Python ints are accepted anywhere a coefficient is expected.

Sign conventions: ``resultant`` is the Sylvester determinant
``Res(a, b) = lc(a)^deg(b) * prod b(alpha)`` over roots ``alpha`` of ``a``;
``discriminant_cubic(p, q)`` returns ``4p^3 + 27q^2``, the negative of the
classical discriminant of ``x^3 + px + q``.  Downstream code only uses zero
loci, so the sign never matters there.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
import numpy as np

from .errors import BothZero, DegenerateCurve, ParseError, PrecisionExhausted

DEFAULT_PRECISION = 128
MAX_PRECISION = 1024


def _coerce(c):
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return Fraction(c)
    return c


def _is_scalar(obj):
    return isinstance(obj, (int, Fraction, RationalFunction))


class Polynomial:
    """Dense univariate polynomial, coefficients indexed by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c=1):
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def _lift(self, other):
        if isinstance(other, Polynomial):
            return other
        if _is_scalar(other):
            return Polynomial((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if _is_scalar(other):
            other = _coerce(other)
            return Polynomial([c * other for c in self.coeffs])
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = Polynomial((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if _is_scalar(other):
            other = _coerce(other)
            if not other:
                raise ZeroDivisionError("polynomial divided by zero")
            return Polynomial([c / other for c in self.coeffs])
        if isinstance(other, Polynomial) and other.degree == 0:
            return self / other.coeffs[0]
        return NotImplemented

    def __divmod__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead = other.lc
        if len(rem) - 1 < db:
            return Polynomial(), Polynomial(rem)
        quo = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db]
            if not c:
                continue
            c = c / lead
            quo[k] = c
            for j, cb in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * cb
        return Polynomial(quo), Polynomial(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def __eq__(self, other):
        if _is_scalar(other):
            other = Polynomial((other,))
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0]) if self.coeffs else hash(0)
        return hash(("Polynomial", self.coeffs))

    def __call__(self, value):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * value + c
        return Fraction(0) if acc is None else acc

    def derivative(self):
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def monic(self):
        if self.is_zero():
            return self
        return self / self.lc

    def compose(self, inner):
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def map_coeffs(self, fn):
        return Polynomial([fn(c) for c in self.coeffs])

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if isinstance(c, RationalFunction) and not c.is_constant():
                cs = "(" + str(c) + ")"
            else:
                cs = str(c.constant_value() if isinstance(c, RationalFunction) else c)
                if "/" in cs:
                    cs = "(" + cs + ")"
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if mono and cs == "1":
                term = mono
            elif mono and cs == "-1":
                term = "-" + mono
            elif mono:
                term = f"{cs}*{mono}"
            else:
                term = cs
            terms.append(term)
        out = " + ".join(terms)
        return out.replace("+ -", "- ")

    def __str__(self):
        return self.to_str("x")

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over the coefficient field; gcd(0, 0) = 0."""
    while b:
        a, b = b, a % b
    return a.monic()


def poly_multiplicity(h: Polynomial, f: Polynomial) -> int:
    """Largest k with h^k dividing f (f nonzero, deg h >= 1)."""
    if f.is_zero():
        raise ValueError("multiplicity in the zero polynomial is unbounded")
    k = 0
    while True:
        q, r = divmod(f, h)
        if r:
            return k
        f = q
        k += 1


class RationalFunction:
    """Element of Q(t) kept as num/den with gcd 1 and monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=None):
        num = _as_qpoly(num)
        den = Polynomial((1,)) if den is None else _as_qpoly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = Polynomial((1,))
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        lead = den.lc
        if lead != 1:
            num = num / lead
            den = den / lead
        self.num = num
        self.den = den

    @classmethod
    def t(cls):
        return cls(Polynomial((0, 1)))

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction(Polynomial((other,)))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(RationalFunction)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return NotImplemented
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            return NotImplemented
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ValueError("exponent must be an integer")
        if n < 0:
            return RationalFunction(1) / self ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.den.degree == 0 and self.num == Polynomial((other,))
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash(("RationalFunction", self.num.coeffs, self.den.coeffs))

    def __call__(self, value):
        d = self.den(value)
        if isinstance(d, Fraction) and not d:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(value) / d

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.coeff(0)

    @property
    def degree(self) -> int:
        """Degree as a map P^1 -> P^1."""
        return max(self.num.degree, self.den.degree, 0)

    def derivative(self):
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def valuation(self, h: Polynomial) -> int | float:
        """Order of vanishing along the squarefree factor h (inf for zero)."""
        if self.num.is_zero():
            return math.inf
        return poly_multiplicity(h, self.num) - poly_multiplicity(h, self.den)

    def valuation_at_infinity(self) -> int | float:
        if self.num.is_zero():
            return math.inf
        return self.den.degree - self.num.degree

    def compose(self, inner: Polynomial):
        return RationalFunction(self.num.compose(inner), self.den.compose(inner))

    def __str__(self):
        if self.den.degree == 0:
            return self.num.to_str("t")
        return f"({self.num.to_str('t')})/({self.den.to_str('t')})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _as_qpoly(obj) -> Polynomial:
    if isinstance(obj, Polynomial):
        return obj
    if isinstance(obj, (int, Fraction)):
        return Polynomial((obj,))
    raise TypeError(f"cannot use {type(obj).__name__} as a polynomial over Q")


def as_rational_function(obj) -> RationalFunction:
    if isinstance(obj, RationalFunction):
        return obj
    if isinstance(obj, (int, Fraction, Polynomial)):
        return RationalFunction(obj)
    raise TypeError(f"cannot use {type(obj).__name__} as a rational function")


def as_bivariate(f: Polynomial) -> Polynomial:
    """Coerce the coefficients of f to rational functions of t."""
    return Polynomial([as_rational_function(c) for c in f.coeffs])


# ---------------------------------------------------------------- resultants

def resultant(a: Polynomial, b: Polynomial):
    """Sylvester resultant over the coefficient field of a and b.

    The zero polynomial is treated as sharing every root, so Res(0, b) = 0
    when b is nonzero.
    """
    if a.is_zero() and b.is_zero():
        raise BothZero("resultant of two zero polynomials")
    if a.is_zero() or b.is_zero():
        return Fraction(0)
    acc = Fraction(1)
    while True:
        m, n = a.degree, b.degree
        if n == 0:
            return acc * b.lc ** m
        if m == 0:
            return acc * a.lc ** n
        r = a % b
        if r.is_zero():
            return Fraction(0)
        k = r.degree
        if (m * n) % 2:
            acc = -acc
        acc = acc * b.lc ** (m - k)
        a, b = b, r


def discriminant(f: Polynomial):
    """Classical discriminant (-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree at least 1")
    r = resultant(f, f.derivative()) / f.lc
    return -r if (n * (n - 1) // 2) % 2 else r


def discriminant_cubic(p, q):
    """Return 4p^3 + 27q^2 (zero exactly when x^3 + px + q has a repeated root)."""
    return 4 * p ** 3 + 27 * q ** 2


def j_invariant(p, q):
    p = _coerce(p)
    q = _coerce(q)
    d = discriminant_cubic(p, q)
    if not d:
        raise DegenerateCurve("4p^3 + 27q^2 vanishes identically")
    return 1728 * 4 * p ** 3 / d


def squarefree_decomposition(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm over Q: f = lc * prod a_i^i with a_i squarefree, coprime."""
    if f.degree < 1:
        return []
    out = []
    fp = f.derivative()
    a0 = poly_gcd(f, fp)
    b = f.exact_div(a0)
    c = fp.exact_div(a0)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        if a.degree > 0:
            out.append((a.monic(), i))
        i += 1
    return out


def squarefree_part(f: Polynomial) -> Polynomial:
    if f.degree < 1:
        return Polynomial((1,))
    return f.exact_div(poly_gcd(f, f.derivative())).monic()


def gcd_free_basis(polys: Iterable[Polynomial]) -> list[Polynomial]:
    """Pairwise coprime monic squarefree polynomials whose products give back
    the radical of every input, up to multiplicities.

    Each input factors as a product of powers of basis elements, so the
    multiplicity of a basis element in an input is the same at each of its
    roots.  This replaces factorization into irreducibles.
    """
    basis = []
    for f in polys:
        basis.extend(a for a, _ in squarefree_decomposition(f))
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                g = poly_gcd(basis[i], basis[j])
                if g.degree > 0:
                    a = basis[i].exact_div(g)
                    b = basis[j].exact_div(g)
                    rest = [h for k, h in enumerate(basis) if k not in (i, j)]
                    basis = rest + [h.monic() for h in (a, g, b) if h.degree > 0]
                    changed = True
                    break
            if changed:
                break
    uniq = {h.coeffs: h for h in basis}
    return sorted(uniq.values(), key=lambda h: (h.degree, [str(c) for c in h.coeffs]))


def interpolate(points: Sequence[tuple[Fraction, Fraction]]) -> Polynomial:
    """Exact Lagrange interpolation through distinct abscissae (Newton form)."""
    xs = [Fraction(x) for x, _ in points]
    coef = [Fraction(y) for _, y in points]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    acc = Polynomial()
    for i in range(n - 1, -1, -1):
        acc = acc * Polynomial((-xs[i], 1)) + coef[i]
    return acc


def bivariate_discriminant_in_x(f: Polynomial) -> Polynomial:
    """Res_x(f, df/dx) for f in Q[t][x] (polynomial coefficients), as a
    polynomial in t, computed by evaluation at rational points and exact
    interpolation."""
    f = as_bivariate(f)
    for c in f.coeffs:
        if c.den.degree > 0:
            raise ValueError("coefficients must be polynomials in t")
    n = f.degree
    dmax = max(c.num.degree for c in f.coeffs if c)
    bound = (2 * n - 1) * max(dmax, 0)
    lead = f.lc.num
    pts = []
    k = 0
    while len(pts) < bound + 1:
        t0 = Fraction(k)
        k += 1
        if not lead(t0):
            continue
        spec = Polynomial([c.num(t0) for c in f.coeffs])
        pts.append((t0, resultant(spec, spec.derivative())))
    return interpolate(pts)


# ------------------------------------------------------------- numerics

@dataclass(frozen=True)
class ComplexRational:
    """Exact complex number with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def from_complex(cls, z, denominator: int = 2 ** 40):
        z = complex(z)
        return cls(Fraction(round(z.real * denominator), denominator),
                   Fraction(round(z.imag * denominator), denominator))

    def __add__(self, other):
        other = _as_cr(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_cr(other)
        return ComplexRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __mul__(self, other):
        other = _as_cr(other)
        return ComplexRational(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def to_mpc(self):
        return gmpy2.mpc(gmpy2.mpfr(gmpy2.mpq(self.re.numerator, self.re.denominator)),
                         gmpy2.mpfr(gmpy2.mpq(self.im.numerator, self.im.denominator)))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_json(self):
        return [str(self.re), str(self.im)]


def _as_cr(z) -> ComplexRational:
    if isinstance(z, ComplexRational):
        return z
    if isinstance(z, (int, Fraction)):
        return ComplexRational(Fraction(z))
    raise TypeError(f"cannot use {type(z).__name__} as an exact complex number")


@dataclass(frozen=True)
class ComplexValue:
    """Floating complex number at a recorded binary precision."""

    real: object
    imag: object
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < 1:
            raise ValueError("precision must be positive")
        if not (gmpy2.is_finite(gmpy2.mpfr(self.real)) and gmpy2.is_finite(gmpy2.mpfr(self.imag))):
            raise ValueError("complex value must be finite")

    @classmethod
    def from_mpc(cls, z):
        return cls(z.real, z.imag, z.precision[0])

    @property
    def value(self):
        with gmpy2.context(gmpy2.get_context(), precision=self.precision_bits):
            return gmpy2.mpc(self.real, self.imag)

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def __abs__(self):
        return abs(complex(self))

    def to_json(self, digits: int = 25):
        return [format_mpfr(self.real, digits), format_mpfr(self.imag, digits)]


def format_mpfr(x, digits: int = 25) -> str:
    x = gmpy2.mpfr(x)
    if x == 0:
        return "0"
    return format(x, f".{digits}g")


def to_mpfr(c):
    """Rational to mpfr at the ambient precision."""
    c = Fraction(c)
    return gmpy2.mpfr(gmpy2.mpq(c.numerator, c.denominator))


def horner_mpc(coeffs, z):
    """Value and derivative of sum coeffs[k] z^k."""
    n = len(coeffs) - 1
    p = coeffs[n]
    dp = gmpy2.mpc(0)
    for k in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[k]
    return p, dp


class _CertificationFailed(ArithmeticError):
    pass


def _initial_guesses(coeffs):
    vals = [complex(c) for c in coeffs]
    scale = max(abs(v) for v in vals)
    arr = np.array([v / scale for v in reversed(vals)], dtype=complex)
    guesses = list(np.roots(arr))
    n = len(coeffs) - 1
    while len(guesses) < n:
        guesses.append(complex(len(guesses) + 0.5, 0.25))
    # numpy may return exactly coincident guesses for clustered roots
    out = []
    for g in guesses:
        if not np.isfinite(g):
            g = complex(1.0, 0.5)
        while any(abs(g - h) < 1e-12 * (1 + abs(g)) for h in out):
            g = g * (1 + 1e-9) + 1e-9j
        out.append(g)
    return out


def simple_roots(coeffs, precision: int, guesses=None):
    """Roots of a polynomial with distinct roots, given by mpc coefficients.

    Runs Aberth iterations at ``precision`` bits and certifies each root by
    the Newton disk ``n |f/f'|``.  Returns (roots, radii).  Raises
    _CertificationFailed when the disks are not small and disjoint.
    """
    n = len(coeffs) - 1
    if n < 1:
        return [], []
    with gmpy2.context(gmpy2.get_context(), precision=precision):
        cs = [gmpy2.mpc(c) for c in coeffs]
        if n == 1:
            z = -cs[0] / cs[1]
            return [z], [gmpy2.mpfr(0)]
        if guesses is None:
            guesses = _initial_guesses(cs)
        z = [gmpy2.mpc(g) for g in guesses]
        tol = gmpy2.mpfr(2) ** (-(precision - 6))
        for _ in range(200):
            biggest = gmpy2.mpfr(0)
            for i in range(n):
                zi = z[i]
                p, dp = horner_mpc(cs, zi)
                if p == 0:
                    continue
                s = gmpy2.mpc(0)
                for j in range(n):
                    if j != i:
                        s += 1 / (zi - z[j])
                if dp == 0:
                    w = 1 / s
                else:
                    ratio = p / dp
                    w = ratio / (1 - ratio * s)
                z[i] = zi - w
                rel = abs(w) / (1 + abs(zi))
                if rel > biggest:
                    biggest = rel
            if biggest < tol:
                break
        radii = []
        for i in range(n):
            p, dp = horner_mpc(cs, z[i])
            if dp == 0:
                raise _CertificationFailed("vanishing derivative")
            radii.append(n * abs(p / dp))
        bound = gmpy2.mpfr(2) ** (-(precision // 2))
        for i in range(n):
            if not gmpy2.is_finite(radii[i]) or radii[i] > bound * max(1, abs(z[i])):
                raise _CertificationFailed("Newton disk too large")
            for j in range(i):
                if radii[i] + radii[j] >= abs(z[i] - z[j]):
                    raise _CertificationFailed("Newton disks overlap")
        return z, radii


def _sort_key(z):
    return (z.real, z.imag)


def certified_roots(f: Polynomial, precision: int = DEFAULT_PRECISION,
                    max_precision: int = MAX_PRECISION):
    """Roots with multiplicity of a nonzero polynomial over Q, with radii.

    Exact squarefree decomposition first, so only simple roots are refined
    numerically; a root of multiplicity k appears k times with one radius.
    """
    if f.is_zero():
        raise ValueError("zero polynomial has no finite root set")
    prec = precision
    while True:
        try:
            pairs = []
            with gmpy2.context(gmpy2.get_context(), precision=prec):
                for factor, mult in squarefree_decomposition(f):
                    cs = [to_mpfr(c) for c in factor.coeffs]
                    roots, radii = simple_roots(cs, prec)
                    for z, r in zip(roots, radii):
                        pairs.extend([(z, r)] * mult)
            pairs.sort(key=lambda zr: _sort_key(zr[0]))
            return [z for z, _ in pairs], [r for _, r in pairs], prec
        except _CertificationFailed:
            if prec >= max_precision:
                raise PrecisionExhausted("root certification failed", precision=prec)
            prec = min(2 * prec, max_precision)


def specialize(f: Polynomial, t) -> list:
    """Numerical coefficients of f in Q(t)[x] at a numeric t (ambient precision)."""
    out = []
    for c in f.coeffs:
        if isinstance(c, RationalFunction):
            num = gmpy2.mpc(0)
            for a in reversed(c.num.coeffs):
                num = num * t + to_mpfr(a)
            den = gmpy2.mpc(0)
            for a in reversed(c.den.coeffs):
                den = den * t + to_mpfr(a)
            out.append(num / den)
        else:
            out.append(gmpy2.mpc(to_mpfr(c)))
    return out


def roots_numeric(f: Polynomial, at=None, precision: int = DEFAULT_PRECISION,
                  max_precision: int = MAX_PRECISION) -> list[ComplexValue]:
    """All complex roots with multiplicity, sorted by (real, imag).

    ``f`` is either in Q[x] (``at`` omitted) or in Q(t)[x] and specialized
    at the numeric point ``at``; in the second case the specialization must
    have distinct roots.
    """
    if at is None and all(not isinstance(c, RationalFunction) or c.is_constant()
                          for c in f.coeffs):
        qf = Polynomial([c.constant_value() if isinstance(c, RationalFunction) else c
                         for c in f.coeffs])
        roots, _, prec = certified_roots(qf, precision, max_precision)
        return [ComplexValue.from_mpc(z) for z in roots]
    if at is None:
        raise ValueError("a specialization point is required for a bivariate polynomial")
    prec = precision
    while True:
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            t = at.value if isinstance(at, ComplexValue) else (
                at.to_mpc() if isinstance(at, ComplexRational) else gmpy2.mpc(at))
            cs = specialize(f, t)
            if cs[-1] == 0:
                raise ValueError("leading coefficient vanishes at the specialization")
            try:
                roots, _ = simple_roots(cs, prec)
                roots.sort(key=_sort_key)
                return [ComplexValue.from_mpc(z) for z in roots]
            except _CertificationFailed:
                if prec >= max_precision:
                    raise PrecisionExhausted("root certification failed", precision=prec)
        prec = min(2 * prec, max_precision)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r}", position=pos)
        if m.group(1):
            out.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            out.append(("op", op, m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    """Recursive descent:  expr := term (('+'|'-') term)*,
    term := unary (('*'|'/') unary)*,  unary := '-' unary | power,
    power := atom ('^' integer)?,  atom := integer | name | '(' expr ')'."""

    def __init__(self, text, env):
        self.toks = _tokenize(text)
        self.i = 0
        self.env = env

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(f"expected {op!r}", position=tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", position=0)
        val = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", position=tok[2])
        return val

    def expr(self):
        val = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                val = val * rhs
            else:
                val = _divide(val, rhs, tok[2])
        return val

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            val = self.unary()
            return -val if tok[1] == "-" else val
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                tok = self.take()
                raise ParseError("negative exponents are not allowed", position=tok[2])
            tok = self.take()
            if tok[0] != "num":
                raise ParseError("exponent must be a nonnegative integer literal",
                                 position=tok[2])
            return base ** tok[1]
        return base

    def atom(self):
        tok = self.take()
        if tok[0] == "num":
            return Fraction(tok[1])
        if tok[0] == "name":
            if tok[1] not in self.env:
                raise ParseError(f"unknown variable {tok[1]!r}", position=tok[2])
            return self.env[tok[1]]
        if tok[0] == "op" and tok[1] == "(":
            val = self.expr()
            self.expect(")")
            return val
        raise ParseError("unexpected end of input" if tok[0] == "end"
                         else f"unexpected token {tok[1]!r}", position=tok[2])


def _divide(a, b, pos):
    if isinstance(b, Polynomial):
        if b.degree > 0:
            raise ParseError("division by a polynomial in the main variable", position=pos)
        b = b.coeff(0)
    if not b:
        raise ParseError("division by zero", position=pos)
    return a / b


def parse_rational_function(text: str, var: str = "t") -> RationalFunction:
    """Parse an expression in one variable into an exact rational function."""
    val = _Parser(text, {var: RationalFunction.t()}).parse()
    return as_rational_function(val)


def parse_bivariate(text: str, main: str = "x", param: str = "t") -> Polynomial:
    """Parse into a polynomial in ``main`` with coefficients in Q(param)."""
    env = {main: Polynomial((RationalFunction(0), RationalFunction(1))),
           param: RationalFunction.t()}
    val = _Parser(text, env).parse()
    if isinstance(val, Polynomial):
        return as_bivariate(val)
    return Polynomial((as_rational_function(val),))


def parse_univariate(text: str, var: str = "x") -> Polynomial:
    """Parse a polynomial over Q in one variable."""
    env = {var: Polynomial((0, 1))}
    val = _Parser(text, env).parse()
    if isinstance(val, Polynomial):
        return val
    return Polynomial((val,))
