from fractions import Fraction

import gmpy2
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import sylvester_resultant
from monodromy.errors import BothZero, DegenerateCurve, ParseError
from monodromy.exact import (Polynomial, RationalFunction, certified_roots, discriminant,
                             discriminant_cubic, gcd_free_basis, interpolate, j_invariant,
                             parse_bivariate, parse_rational_function, parse_univariate,
                             poly_gcd, poly_multiplicity, resultant, roots_numeric,
                             squarefree_decomposition, squarefree_part)

X = Polynomial.x()
T = RationalFunction.t()

small = st.integers(-6, 6)
poly_st = st.lists(small, min_size=1, max_size=9).map(Polynomial)
nonzero_poly = poly_st.filter(lambda p: not p.is_zero())


# ---------------------------------------------------------------- examples

def test_discriminant_cubic_examples():
    assert discriminant_cubic(Fraction(0), Fraction(0)) == 0
    assert discriminant_cubic(Fraction(-3), Fraction(2)) == 0
    assert discriminant_cubic(T, RationalFunction(1)) == 4 * T ** 3 + 27


def test_j_invariant_examples():
    assert j_invariant(0, 1) == 0
    assert j_invariant(1, 0) == 1728
    assert j_invariant(1, 1) == Fraction(6912, 31)
    with pytest.raises(DegenerateCurve):
        j_invariant(-3, 2)


def test_resultant_examples():
    assert resultant(X - 1, X - 1) == 0
    assert resultant(X - 1, X + 1) == 2
    assert resultant(X ** 2 + 1, X) == 1
    assert resultant(Polynomial(()), X) == 0
    with pytest.raises(BothZero):
        resultant(Polynomial(()), Polynomial(()))


def test_roots_examples():
    r = roots_numeric(X ** 3 - X)
    assert [complex(z) for z in r] == pytest.approx([-1, 0, 1], abs=1e-30)
    r = roots_numeric(X ** 3 + X + 1)
    real = [z for z in r if abs(complex(z).imag) < 1e-20]
    assert len(real) == 1 and complex(real[0]).real == pytest.approx(-0.6823278038280193)
    pair = [complex(z) for z in r if z not in real]
    assert pair[0] == pytest.approx(pair[1].conjugate())
    r = roots_numeric((X - 2) ** 2)
    assert [complex(z) for z in r] == [2, 2]


def test_discriminant_matches_classical_cubic():
    # x^3 + p x + q: classical discriminant is -(4p^3 + 27q^2)
    for p, q in [(1, 1), (-3, 2), (2, -5), (0, 7)]:
        f = Polynomial((q, p, 0, 1))
        assert discriminant(f) == -discriminant_cubic(Fraction(p), Fraction(q))


def test_parser():
    assert parse_rational_function("t^2 - 1") == T ** 2 - 1
    assert parse_rational_function("(t+1)/(t^2-1)") == 1 / (T - 1)
    assert parse_rational_function("-2*t**3/4") == Fraction(-1, 2) * T ** 3
    assert parse_univariate("x^3 - x") == X ** 3 - X
    f = parse_bivariate("x^3 + t*x + 1")
    assert f.degree == 3 and f.coeff(1) == T
    for bad in ["t^", "t^-1", "(t+1", "t $ 1", "", "s+1", "1/0"]:
        with pytest.raises(ParseError):
            parse_rational_function(bad)


def test_interpolation_recovers_polynomial():
    f = Polynomial((3, -1, 0, Fraction(2, 3), 5))
    pts = [(Fraction(k), f(Fraction(k))) for k in range(5)]
    assert interpolate(pts) == f


def test_gcd_free_basis_separates_multiplicities():
    t3 = Polynomial((0, 0, 0, 1))
    f = t3 * Polynomial((-4, 0, 0, 1))
    basis = gcd_free_basis([f])
    assert sorted(h.degree for h in basis) == [1, 3]
    for h in basis:
        mult = poly_multiplicity(h, f)
        assert mult == (3 if h.degree == 1 else 1)


# -------------------------------------------------------------- properties

@given(poly_st, poly_st)
@settings(max_examples=150)
def test_resultant_equals_sylvester_determinant(a, b):
    if a.is_zero() or b.is_zero():
        return
    assert resultant(a, b) == sylvester_resultant(a.coeffs, b.coeffs)


@given(nonzero_poly, nonzero_poly)
@settings(max_examples=150)
def test_resultant_vanishes_iff_common_factor(a, b):
    if a.degree < 1 and b.degree < 1:
        return
    assert (resultant(a, b) == 0) == (poly_gcd(a, b).degree > 0)


@given(st.integers(-50, 50), st.integers(1, 50), st.integers(-50, 50), st.integers(1, 50))
@settings(max_examples=150)
def test_rational_arithmetic_exact(a, b, c, d):
    lhs = (Fraction(a, b) + Fraction(c, d)) * (b * d)
    assert lhs == a * d + c * b
    r = RationalFunction(Polynomial((a, 1)), Polynomial((c, d)))
    again = RationalFunction(r.num, r.den)
    assert (again.num, again.den) == (r.num, r.den)
    assert r.den.lc == 1


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(1, 3)), min_size=1, max_size=4))
@settings(max_examples=120)
def test_squarefree_decomposition_recomposes(factors):
    f = Polynomial((1,))
    for root, mult in factors:
        f = f * Polynomial((-root, 1)) ** mult
    parts = squarefree_decomposition(f)
    back = Polynomial((1,))
    for a, i in parts:
        back = back * a ** i
    assert back == f.monic()
    assert squarefree_part(f).degree == len({r for r, _ in factors})


@given(st.lists(st.integers(-9, 9), min_size=3, max_size=9).filter(lambda c: c[-1] != 0))
@settings(max_examples=120)
def test_certified_roots_residual_and_numpy(coeffs):
    f = Polynomial(coeffs)
    roots, radii, prec = certified_roots(f, 128)
    assert len(roots) == f.degree
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        for z, r in zip(roots, radii):
            val = 0
            for c in reversed(coeffs):
                val = val * z + c
            scale = sum(abs(c) for c in coeffs) * max(1, abs(z)) ** f.degree
            assert abs(val) <= scale * max(r, gmpy2.mpfr(2) ** (-prec // 2))
    ref = sorted(np.roots(list(reversed(coeffs))), key=lambda z: (z.real, z.imag))
    got = [complex(z) for z in roots]
    for z in ref:
        assert min(abs(z - w) for w in got) < 1e-4


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=120)
def test_cubic_discriminant_detects_collisions(a, b, c):
    # p = a + b t, q = c + t; check on the integer points t0 = -3..3
    p = RationalFunction(Polynomial((a, b)))
    q = RationalFunction(Polynomial((c, 1)))
    disc = discriminant_cubic(p, q)
    for t0 in range(-3, 4):
        d0 = disc(Fraction(t0))
        f = Polynomial((q(Fraction(t0)), p(Fraction(t0)), 0, 1))
        rts = [complex(z) for z in roots_numeric(f)]
        collide = any(abs(rts[i] - rts[j]) < 1e-12 for i in range(3) for j in range(i))
        assert collide == (d0 == 0)
