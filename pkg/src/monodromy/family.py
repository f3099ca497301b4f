"""Genus-1 families y^2 = x^3 + p(t) x + q(t) over the t-line.

The pipeline: exact puncture polynomials, certified puncture boxes, a
lasso system at a seeded basepoint, root tracking along every lasso,
braids, matrices in SL(2, Z), and finally index data and the inequality
checks relating index, degree of the J-map and fiber types.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import gmpy2

from .braid import (DEFAULT_MAX_STEP, Arc, BraidWord, Line, PathPlan, TrackedStrands,
                    braid_with_direction, mu3, mu4, track_many)
from .errors import (BudgetExceeded, DegenerateFamily, IsotrivialFamily, NonGenericPencil,
                     NonSmoothQuartic, ParseError, ZeroOnLoop, ZeroTwist)
from .exact import (DEFAULT_PRECISION, MAX_PRECISION, ComplexRational, ComplexValue,
                    Polynomial, RationalFunction, as_bivariate, as_rational_function,
                    bivariate_discriminant_in_x, certified_roots, discriminant_cubic,
                    gcd_free_basis, parse_bivariate, parse_rational_function,
                    squarefree_part, to_mpfr)
from .sl2 import IDENTITY, SL2Matrix, product
from .subgroup import (DEFAULT_MAX_COSETS, UNBOUNDED, SubgroupDescriptor, describe,
                       schreier_bound, twist_group)

TOOL_VERSION = "0.1.0"


@dataclass(frozen=True)
class FamilySpec:
    """y^2 = x^3 + p x + q with p, q in Q(t)."""

    p: RationalFunction
    q: RationalFunction
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "p", as_rational_function(self.p))
        object.__setattr__(self, "q", as_rational_function(self.q))
        if not discriminant_cubic(self.p, self.q):
            raise DegenerateFamily("4p^3 + 27q^2 vanishes identically", label=self.label)

    @classmethod
    def from_strings(cls, p: str, q: str, label: str = "") -> "FamilySpec":
        return cls(parse_rational_function(p), parse_rational_function(q), label)

    @classmethod
    def from_cubic(cls, a2, a1, a0, label: str = "") -> "FamilySpec":
        """Depress x^3 + a2 x^2 + a1 x + a0 by x -> x - a2/3."""
        a2, a1, a0 = (as_rational_function(c) for c in (a2, a1, a0))
        p = a1 - a2 * a2 / 3
        q = 2 * a2 ** 3 / 27 - a2 * a1 / 3 + a0
        return cls(p, q, label)

    @property
    def discriminant(self) -> RationalFunction:
        return discriminant_cubic(self.p, self.q)

    def cubic(self) -> Polynomial:
        return Polynomial((self.q, self.p, RationalFunction(0), RationalFunction(1)))

    def pullback(self, inner: Polynomial, label: str = "") -> "FamilySpec":
        return FamilySpec(self.p.compose(inner), self.q.compose(inner),
                          label or f"{self.label} pulled back")

    def to_json(self):
        return {"label": self.label, "p": str(self.p), "q": str(self.q)}


def legendre_family() -> FamilySpec:
    """y^2 = x (x - 1)(x - t) in depressed form."""
    t = RationalFunction.t()
    return FamilySpec.from_cubic(-(1 + t), t, 0, "legendre")


@dataclass(frozen=True)
class JMapData:
    j: RationalFunction
    deg_j: int
    m: int

    @property
    def isotrivial(self) -> bool:
        return self.j.is_constant()


def j_map(fam: FamilySpec) -> JMapData:
    """J(t) = 1728 * 4p^3 / (4p^3 + 27q^2); on a curve base m = deg J."""
    j = 1728 * 4 * fam.p ** 3 / fam.discriminant
    deg = 0 if j.is_constant() else j.degree
    return JMapData(j, deg, deg)


@dataclass(frozen=True)
class TwistSpec:
    d: RationalFunction

    def __post_init__(self):
        object.__setattr__(self, "d", as_rational_function(self.d))
        if not self.d:
            raise ZeroTwist("the twisting function must be nonzero")

    @classmethod
    def from_string(cls, text: str) -> "TwistSpec":
        return cls(parse_rational_function(text))


def quadratic_twist(fam: FamilySpec, tw: TwistSpec) -> FamilySpec:
    d = tw.d
    return FamilySpec(d * d * fam.p, d ** 3 * fam.q, f"{fam.label} twisted by {d}")


# -------------------------------------------------------------- punctures

@dataclass(frozen=True)
class Puncture:
    """A certified root ``center`` (within ``radius``) of the squarefree
    polynomial ``factor``."""

    center: ComplexValue
    radius: float
    factor: Polynomial

    @property
    def approx(self) -> complex:
        return complex(self.center)

    def to_json(self):
        return {"center": self.center.to_json(), "radius": f"{self.radius:.3e}",
                "factor": self.factor.to_str("t")}


def puncture_factors(fam: FamilySpec) -> list:
    """Pairwise coprime squarefree factors whose roots are the finite
    punctures: zeros of 4p^3 + 27q^2 and poles of p, q."""
    disc = fam.discriminant
    pieces = [fam.p.num, fam.p.den, fam.q.num, fam.q.den, disc.num, disc.den]
    basis = gcd_free_basis(pieces)
    bad = []
    for h in basis:
        if (disc.num.degree > 0 and (disc.num % h).is_zero()) or \
                (fam.p.den % h).is_zero() or (fam.q.den % h).is_zero():
            bad.append(h)
    return bad


def punctures_from_factors(factors: Sequence[Polynomial],
                           precision: int = DEFAULT_PRECISION) -> list:
    factors = gcd_free_basis(factors)
    out = []
    for h in factors:
        roots, radii, _ = certified_roots(h, precision)
        for z, r in zip(roots, radii):
            out.append(Puncture(ComplexValue.from_mpc(z), float(r), h))
    out.sort(key=lambda p: (float(p.center.real), float(p.center.imag)))
    return out


def punctures_of(fam: FamilySpec, precision: int = DEFAULT_PRECISION) -> list:
    return punctures_from_factors(puncture_factors(fam), precision)


# ------------------------------------------------------------ loop system

def _segment_distance(z: complex, a: complex, b: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(z - a)
    s = ((z - a) * ab.conjugate()).real / abs(ab) ** 2
    s = min(1.0, max(0.0, s))
    return abs(z - (a + s * ab))


def _rational(x: float, denominator: int = 2 ** 24) -> Fraction:
    return Fraction(round(x * denominator), denominator)


@dataclass(frozen=True)
class LoopSystem:
    """Lassos from one basepoint, one per puncture, in counterclockwise
    order as seen from the basepoint (starting from the direction of the
    origin).  Composed in this order they give a big counterclockwise
    circle around every puncture."""

    basepoint: ComplexRational
    punctures: tuple
    lassos: tuple
    radii: tuple
    ordering: str = "angle-from-basepoint"

    def big_circle(self) -> PathPlan:
        """Counterclockwise circle through the basepoint around the origin."""
        return PathPlan((Arc(ComplexRational(0), self.basepoint, 1),), self.basepoint)

    def to_json(self):
        return {"basepoint": self.basepoint.to_json(),
                "ordering": self.ordering,
                "punctures": [p.to_json() for p in self.punctures],
                "lasso_radii": [f"{r:.6g}" for r in self.radii]}


def _clearance(b: complex, centers: Sequence[complex]) -> float:
    """Smallest distance from a puncture to another puncture's segment,
    relative to the smallest distance between punctures."""
    n = len(centers)
    if n < 2:
        return 1.0
    closest = min(abs(centers[i] - centers[j]) for i in range(n) for j in range(i))
    worst = min(_segment_distance(centers[j], b, centers[k])
                for k in range(n) for j in range(n) if j != k)
    return worst / closest


def build_loop_system(punctures: Sequence[Puncture], seed: int = 0,
                      candidates: int = 16) -> LoopSystem:
    centers = [p.approx for p in punctures]
    radius = 2 * (1 + max((abs(c) for c in centers), default=0.0))
    rng = random.Random(seed)
    best = None
    for _ in range(candidates):
        theta = rng.uniform(0, 2 * math.pi)
        b = ComplexRational(_rational(radius * math.cos(theta), 2 ** 20),
                            _rational(radius * math.sin(theta), 2 ** 20))
        score = _clearance(complex(b), centers)
        if best is None or score > best[0] * 1.000001:
            best = (score, b)
        if not centers:
            break
    b = best[1]
    bc = complex(b)

    def angle_key(k):
        rel = (centers[k] - bc) / (-bc)
        return (round(cmath.phase(rel), 12), abs(centers[k] - bc))

    order = sorted(range(len(centers)), key=angle_key)
    lassos, radii, ordered = [], [], []
    for k in order:
        c = centers[k]
        rho = 0.4 * abs(bc - c)
        for j in range(len(centers)):
            if j == k:
                continue
            rho = min(rho, 0.4 * abs(centers[j] - c), 0.4 * _segment_distance(c, bc, centers[j]))
        ct = ComplexRational.from_complex(c)
        kappa = Fraction(rho / abs(bc - complex(ct))).limit_denominator(2 ** 20)
        a = ct + (b - ct) * kappa
        path = PathPlan((Line(b, a), Arc(ct, a, 1), Line(a, b)), b)
        lassos.append(path)
        radii.append(float(kappa) * abs(bc - complex(ct)))
        ordered.append(punctures[k])
    return LoopSystem(b, tuple(ordered), tuple(lassos), tuple(radii))


# ---------------------------------------------------------------- chi_D

def _shifted_taylor(cs, t0):
    """Coefficients of g(t0 + delta) in powers of delta."""
    a = list(cs)
    n = len(a)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            a[k] = a[k] + t0 * a[k + 1]
    return a


def winding_number(g: Polynomial, loop: PathPlan, precision: int = 64) -> int:
    """Winding number of g(t) around 0 along a closed path.

    The argument is accumulated over steps on which a Taylor bound proves
    that g stays within |g(t0)| of g(t0); each step then changes the
    argument by less than pi/2 and is read off without ambiguity.
    """
    if not loop.closed:
        raise ValueError("winding number needs a closed loop")
    if g.degree <= 0:
        if g.is_zero():
            raise ZeroOnLoop("zero function")
        return 0
    total = 0.0
    with gmpy2.context(gmpy2.get_context(), precision=precision):
        cs = [gmpy2.mpc(to_mpfr(c)) for c in g.coeffs]
        for seg in loop.segments:
            s = gmpy2.mpfr(0)
            h = gmpy2.mpfr(1) / 8
            t0 = seg.point(s)
            while s < 1:
                h = min(h, 1 - s)
                t1 = seg.point(s + h)
                if isinstance(seg, Arc):
                    # the arc piece lies in the disk around t0 through t1 plus the sagitta
                    r = abs(t1 - t0) * 2
                else:
                    r = abs(t1 - t0)
                a = _shifted_taylor(cs, t0)
                bound = gmpy2.mpfr(0)
                rk = gmpy2.mpfr(1)
                for k in range(1, len(a)):
                    rk *= r
                    bound += abs(a[k]) * rk
                if bound < abs(a[0]) * gmpy2.mpfr("0.5"):
                    v0 = complex(a[0])
                    v1 = complex(_eval_mpc(cs, t1))
                    total += cmath.phase(v1 / v0)
                    s += h
                    t0 = t1
                    h *= 2
                else:
                    h /= 2
                    if h < gmpy2.mpfr(2) ** -50:
                        raise ZeroOnLoop("function vanishes on or too near the loop")
    w = total / (2 * math.pi)
    k = round(w)
    assert abs(w - k) < 1e-6
    return k


def _eval_mpc(cs, t):
    v = cs[-1]
    for c in reversed(cs[:-1]):
        v = v * t + c
    return v


def chi_d(tw, loop: PathPlan) -> int:
    """(-1)^(winding number of D along the loop)."""
    d = tw.d if isinstance(tw, TwistSpec) else as_rational_function(tw)
    k = winding_number(d.num, loop) - winding_number(d.den, loop)
    return -1 if k % 2 else 1


# ------------------------------------------------------------ monodromy

@dataclass(frozen=True)
class MonodromyReport:
    label: str
    subgroup: SubgroupDescriptor
    matrices: tuple
    braids: tuple
    loops: LoopSystem
    direction: tuple
    deg_j: int
    m: int
    s: int
    r: int
    bounds_checked: dict
    consistency: dict
    config: dict

    @property
    def sl_index(self):
        return self.subgroup.sl_index

    @property
    def psl_index(self):
        return self.subgroup.psl_index

    def loop_product(self) -> SL2Matrix:
        return product(self.matrices)

    def to_json(self):
        return {
            "tool_version": TOOL_VERSION,
            "config": self.config,
            "label": self.label,
            "subgroup": self.subgroup.to_json(),
            "mod3_image_order": self.subgroup.mod3_image_order,
            "lassos": [{"braid": b.to_json(), "matrix": m.to_json(), "puncture": p.to_json()}
                       for b, m, p in zip(self.braids, self.matrices, self.loops.punctures)],
            "loop_system": self.loops.to_json(),
            "projection_direction": list(self.direction),
            "deg_J": self.deg_j,
            "m": self.m,
            "s": self.s,
            "r": self.r,
            "bounds_checked": self.bounds_checked,
            "consistency": self.consistency,
        }


def braid_monodromy(f: Polynomial, loops: LoopSystem, precision: int = DEFAULT_PRECISION,
                    seed: int = 0, max_step: float = DEFAULT_MAX_STEP,
                    max_precision: int = MAX_PRECISION, workers: int = 1):
    """Track f along every lasso; return (direction, braids, strands)."""
    strands = track_many(f, loops.lassos, precision, max_precision, max_step, workers)
    if not strands:
        return (1, 0), [], []
    direction, braids = braid_with_direction(strands, seed)
    return direction, braids, strands


def finite_group_order(mats: Sequence[SL2Matrix], cap: int = 10 ** 4) -> Optional[int]:
    seen = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for x in frontier:
            for g in mats:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        return None
        frontier = nxt
    return len(seen)


def _local_type_ok(matrix: SL2Matrix, place) -> bool:
    from .kodaira import local_monodromy_consistent
    return local_monodromy_consistent(matrix, place)


def monodromy_group(fam: FamilySpec, max_cosets: int = DEFAULT_MAX_COSETS,
                    precision: int = DEFAULT_PRECISION, seed: int = 0,
                    extra_punctures: Sequence[Polynomial] = (),
                    max_step: float = DEFAULT_MAX_STEP, workers: int = 1) -> MonodromyReport:
    """Monodromy of the family on H^1 of a fiber, with the bound checks.

    ``extra_punctures`` lists polynomials whose roots are removed from the
    base in addition to the singular places (their lassos then carry the
    identity matrix).
    """
    from . import kodaira

    jd = j_map(fam)
    factors = puncture_factors(fam)
    punct = punctures_from_factors(list(factors) + list(extra_punctures), precision)
    loops = build_loop_system(punct, seed)
    direction, braids, _ = braid_monodromy(fam.cubic(), loops, precision, seed, max_step,
                                           workers=workers)
    mats = tuple(mu3(b) for b in braids)
    config = {"precision": precision, "max_cosets": max_cosets, "seed": seed,
              "max_step": max_step}
    if jd.isotrivial:
        raise IsotrivialFamily("J is constant: the monodromy group is finite",
                               label=fam.label, j=str(jd.j),
                               matrices=[m.to_json() for m in mats],
                               group_order=finite_group_order(mats))
    desc = describe(mats, max_cosets)
    if not desc.closed:
        raise BudgetExceeded("coset enumeration did not close", max_cosets=max_cosets,
                             label=fam.label)

    places = kodaira.classify_all(fam)
    inf_place = places[-1]
    bad_finite = sum(1 for p in punct if any(h == p.factor for h in factors))
    s = bad_finite + (0 if inf_place.kodaira_type == "I0" else 1)
    r = s - 1
    sum_e, surf_bound, _ = kodaira.surface_bound(fam, places)
    sl, psl = desc.sl_index, desc.psl_index
    bounds = {
        "sl_index <= 2m": sl <= 2 * jd.m,
        "psl_index <= m": psl <= jd.m,
        "sl_index <= 2 deg_J": sl <= 2 * jd.deg_j,
        "sl_index <= 2 sum_e": sl <= surf_bound,
    }
    if r >= 2:
        bounds["sl_index <= 12(r-1)"] = sl <= schreier_bound(r)

    by_factor = {p.factor: p for p in places[:-1]}
    local = []
    for mat, pun in zip(mats, loops.punctures):
        place = by_factor.get(pun.factor)
        if place is None:
            local.append(mat == IDENTITY)
        else:
            local.append(_local_type_ok(mat, place))
    prod = product(mats)
    consistency = {
        "local_types": all(local),
        "product_law_at_infinity": _local_type_ok(prod, inf_place),
        "infinity_type": inf_place.kodaira_type,
        "loop_product_trace": prod.trace,
    }
    return MonodromyReport(fam.label, desc, mats, tuple(braids), loops, direction,
                           jd.deg_j, jd.m, s, r, bounds, consistency, config)


# ------------------------------------------------------- twist relation

def find_conjugator(source: Sequence[SL2Matrix], target: Sequence[SL2Matrix]):
    """g in SL(2, Z) with g P_i g^-1 = N_i for all i, when the solution space
    of N_i g = g P_i over Q is one-dimensional; otherwise None."""
    rows = []
    for p, n in zip(source, target):
        # unknown g = [[x, y], [z, w]]; entries of N g - g P
        na, nb, nc, nd = n.a, n.b, n.c, n.d
        pa, pb, pc, pd = p.a, p.b, p.c, p.d
        rows.append([na - pa, -pc, nb, 0])
        rows.append([-pb, na - pd, 0, nb])
        rows.append([nc, 0, nd - pa, -pc])
        rows.append([0, nc, -pb, nd - pd])
    null = _nullspace([[Fraction(v) for v in r] for r in rows], 4)
    if len(null) != 1:
        return None
    v = null[0]
    den = 1
    for c in v:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in v]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    x, y, z, w = ints
    det = x * w - y * z
    if det == 1:
        return SL2Matrix(x, y, z, w)
    return None


def _nullspace(rows, ncols):
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fcol]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class TwistReport:
    original: SubgroupDescriptor
    predicted: SubgroupDescriptor
    direct: SubgroupDescriptor
    classification: object
    chi: tuple
    conjugator: Optional[SL2Matrix]
    checks: dict
    loops: LoopSystem

    def to_json(self):
        return {
            "original": self.original.to_json(),
            "predicted": self.predicted.to_json(),
            "direct": self.direct.to_json(),
            "classification": None if self.classification is None
            else self.classification.to_json(),
            "chi": list(self.chi),
            "conjugator": None if self.conjugator is None else self.conjugator.to_json(),
            "checks": self.checks,
            "loop_system": self.loops.to_json(),
        }


def verify_twist_relation(fam: FamilySpec, tw: TwistSpec, max_cosets: int = DEFAULT_MAX_COSETS,
                          precision: int = DEFAULT_PRECISION, seed: int = 0,
                          max_step: float = DEFAULT_MAX_STEP, workers: int = 1) -> TwistReport:
    """Compare the twisted monodromy predicted from chi_D with a direct run.

    Both families are tracked on one loop system that removes the
    punctures of either family and the zeros and poles of D.
    """
    twisted = quadratic_twist(fam, tw)
    factors = list(puncture_factors(fam)) + list(puncture_factors(twisted))
    factors += [tw.d.num, tw.d.den]
    punct = punctures_from_factors(factors, precision)
    loops = build_loop_system(punct, seed)
    s1 = track_many(fam.cubic(), loops.lassos, precision, MAX_PRECISION, max_step, workers)
    s2 = track_many(twisted.cubic(), loops.lassos, precision, MAX_PRECISION, max_step, workers)
    _, braids = braid_with_direction(list(s1) + list(s2), seed)
    k = len(loops.lassos)
    mats = [mu3(b) for b in braids[:k]]
    direct_mats = [mu3(b) for b in braids[k:]]
    chi = tuple(chi_d(tw, loop) for loop in loops.lassos)
    original = describe(mats, max_cosets)
    predicted, cls = twist_group(mats, chi, max_cosets)
    direct = describe(direct_mats, max_cosets)
    conj = find_conjugator(predicted.generators, direct_mats)
    checks = {
        "closed": original.closed and predicted.closed and direct.closed,
        "conjugate_by_inner_automorphism": conj is not None,
        "predicted_index_data_equal": predicted.index_data() == direct.index_data(),
        "psl_index_equal": original.psl_index == direct.psl_index,
    }
    if checks["closed"]:
        ratio = Fraction(direct.sl_index, original.sl_index)
        checks["sl_ratio_in_half_one_two"] = ratio in (Fraction(1, 2), 1, 2)
        if original.sl_index == 1:
            checks["full_group_preserved"] = direct.sl_index == 1
    return TwistReport(original, predicted, direct, cls, chi, conj, checks, loops)


# ------------------------------------------------------- quartic pencil

def quartic_terms(quartic) -> dict:
    """{(i, j): c} for F = sum c x^i y^j, from text or a polynomial in x
    whose coefficients are polynomials in y."""
    if isinstance(quartic, str):
        quartic = parse_bivariate(quartic, main="x", param="y")
    terms = {}
    for i, c in enumerate(as_bivariate(quartic).coeffs):
        if c.den.degree > 0:
            raise ParseError("the quartic must be a polynomial in x and y")
        scale = c.den.lc
        for j, a in enumerate(c.num.coeffs):
            if a:
                terms[(i, j)] = Fraction(a) / scale
    return terms


def binary_quartic_invariants(g: Polynomial):
    """(I, J) of a s^4 + b s^3 + c s^2 + d s + e."""
    e, d, c, b, a = (g.coeff(k) for k in range(5))
    inv_i = 12 * a * e - 3 * b * d + c * c
    inv_j = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c ** 3
    return inv_i, inv_j


def cross_ratio_j(roots) -> complex:
    """j of the double cover branched at four points, via the cross-ratio."""
    r1, r2, r3, r4 = (complex(z) for z in roots)
    lam = ((r3 - r1) * (r4 - r2)) / ((r3 - r2) * (r4 - r1))
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (1 - lam) ** 2)


@dataclass(frozen=True)
class QuarticPencil:
    """Lines through the point ``base`` off the quartic, with slope t.

    A line meets the quartic in four points; in the coordinate s = 1/u on
    the line (x, y) = base + u (1, t) they are the roots of the monic
    quartic ``f`` below, whose leading term is F(base)."""

    terms: dict
    base: tuple
    f: Polynomial
    weierstrass: FamilySpec
    label: str = ""

    @property
    def discriminant(self) -> Polynomial:
        return bivariate_discriminant_in_x(self.f)


def _pencil_polynomial(terms: dict, x0: Fraction, y0: Fraction) -> Polynomial:
    t = RationalFunction.t()
    one = RationalFunction(1)
    xs = Polynomial((one, RationalFunction(x0)))
    ys = Polynomial((t, RationalFunction(y0)))
    s = Polynomial((RationalFunction(0), one))
    out = Polynomial(())
    for (i, j), c in terms.items():
        out = out + xs ** i * ys ** j * s ** (4 - i - j) * RationalFunction(c)
    lead = out.coeff(4)
    return out / lead


def pencil_at(terms: dict, base, label: str = "") -> QuarticPencil:
    x0, y0 = (Fraction(v) for v in base)
    value = sum(c * x0 ** i * y0 ** j for (i, j), c in terms.items())
    if value == 0:
        raise NonGenericPencil("the base point lies on the quartic", base=[str(x0), str(y0)])
    f = _pencil_polynomial(terms, x0, y0)
    disc = bivariate_discriminant_in_x(f)
    if disc.degree != 12 or squarefree_part(disc).degree != 12:
        raise NonGenericPencil("the pencil is not generic: the tangency polynomial is not "
                               "squarefree of degree 12", base=[str(x0), str(y0)],
                               degree=disc.degree)
    inv_i, inv_j = binary_quartic_invariants(f)
    wei = FamilySpec(-27 * inv_i, -27 * inv_j, f"{label} (Weierstrass model)")
    return QuarticPencil(terms, (x0, y0), f, wei, label)


def quartic_pencil_family(quartic, seed: int = 0, base=None, attempts: int = 16,
                          label: str = "") -> QuarticPencil:
    """Pencil of lines through a base point: the given one (NonGenericPencil
    if it is not generic) or the first generic one among seeded candidates
    (NonSmoothQuartic when none is, since a smooth quartic has class 12)."""
    terms = quartic_terms(quartic)
    if not terms or max(i + j for i, j in terms) != 4:
        raise NonSmoothQuartic("not a curve of total degree 4")
    if base is not None:
        return pencil_at(terms, base, label)
    rng = random.Random(seed)
    for _ in range(attempts):
        cand = (Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
                Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
        try:
            return pencil_at(terms, cand, label)
        except NonGenericPencil:
            continue
    raise NonSmoothQuartic("no generic pencil found; the quartic is likely singular",
                           attempts=attempts)


def _rf_at(rf: RationalFunction, z: ComplexRational) -> complex:
    def ev(poly):
        v = ComplexRational(0)
        for c in reversed(poly.coeffs):
            v = v * z + ComplexRational(c)
        return v
    num, den = ev(rf.num), ev(rf.den)
    return complex(num) / complex(den)


def _transvection_like(m: SL2Matrix) -> bool:
    return m.trace == 2 and math.gcd(math.gcd(m.a - 1, m.b), math.gcd(m.c, m.d - 1)) == 1


def quartic_monodromy(pencil: QuarticPencil, max_cosets: int = DEFAULT_MAX_COSETS,
                      precision: int = DEFAULT_PRECISION, seed: int = 0,
                      max_step: float = DEFAULT_MAX_STEP, workers: int = 1) -> MonodromyReport:
    """Monodromy on H^1 of the genus-1 double covers of the pencil lines
    branched at the four intersection points (B4 braids through mu4)."""
    punct = punctures_from_factors([pencil.discriminant], precision)
    loops = build_loop_system(punct, seed)
    direction, braids, strands = braid_monodromy(pencil.f, loops, precision, seed, max_step,
                                                 workers=workers)
    mats = tuple(mu4(b) for b in braids)
    desc = describe(mats, max_cosets)
    if not desc.closed:
        raise BudgetExceeded("coset enumeration did not close", max_cosets=max_cosets,
                             label=pencil.label)
    jd = j_map(pencil.weierstrass)
    prod = product(mats)
    s = len(punct) + (0 if prod == IDENTITY else 1)
    r = s - 1
    sl, psl = desc.sl_index, desc.psl_index
    bounds = {"sl_index <= 2m": sl <= 2 * jd.m, "psl_index <= m": psl <= jd.m}
    if r >= 2:
        bounds["sl_index <= 12(r-1)"] = sl <= schreier_bound(r)
    b = loops.basepoint
    roots = strands[0].sample_values(0) if strands else []
    j_cross = cross_ratio_j(roots) if len(roots) == 4 else None
    j_exact = _rf_at(jd.j, b)
    consistency = {
        "punctures": len(punct),
        "local_types": all(_transvection_like(m) for m in mats),
        "loop_product_trace": prod.trace,
        "j_cross_ratio_matches_weierstrass": (
            j_cross is not None and abs(j_cross - j_exact) <= 1e-6 * max(1.0, abs(j_exact))),
    }
    config = {"precision": precision, "max_cosets": max_cosets, "seed": seed,
              "max_step": max_step, "base_point": [str(v) for v in pencil.base]}
    return MonodromyReport(pencil.label, desc, mats, tuple(braids), loops, direction,
                           jd.deg_j, jd.m, s, r, bounds, consistency, config)
