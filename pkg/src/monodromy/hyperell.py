"""Mod-2 monodromy of hyperelliptic families y^2 = f(x, t).

The 2-torsion of the Jacobian of y^2 = f(x) is the F2-space of
even-cardinality subsets of the 2g+2 Weierstrass points modulo the full
set, with the intersection form |A n B| mod 2.  A monodromy permutation of
the Weierstrass points therefore acts symplectically on it.  Vectors are
bitmasks in the basis b_k = P_k + P_{k+1} (k = 0 .. 2g-1, zero-based), and
a matrix is the tuple of its column bitmasks.
"""
from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .braid import DEFAULT_MAX_STEP, track_many
from .errors import BudgetExceeded, DegenerateFamily, GenusTooSmall
from .exact import (DEFAULT_PRECISION, MAX_PRECISION, Polynomial, RationalFunction,
                    as_bivariate, bivariate_discriminant_in_x, discriminant,
                    parse_bivariate, squarefree_part)
from .family import build_loop_system, punctures_from_factors

CLOSURE_CAP = 10 ** 7


def sp2g_f2_order(g: int) -> int:
    """|Sp(2g, F2)| = 2^(g^2) (2^(2g) - 1)(2^(2g-2) - 1) ... (2^2 - 1)."""
    if g < 1:
        raise ValueError("genus must be at least 1")
    out = 2 ** (g * g)
    for i in range(1, g + 1):
        out *= 2 ** (2 * i) - 1
    return out


def hyperell_bound(g: int) -> Fraction:
    """|Sp(2g, F2)| / (2g+2)!: lower bound for the index of the mod-2 image."""
    if g < 3:
        raise GenusTooSmall("the bound is stated for genus at least 3", g=g)
    return Fraction(sp2g_f2_order(g), math.factorial(2 * g + 2))


@dataclass(frozen=True)
class Sp2gF2Element:
    g: int
    cols: tuple

    @classmethod
    def identity(cls, g: int) -> "Sp2gF2Element":
        return cls(g, tuple(1 << k for k in range(2 * g)))

    def apply(self, v: int) -> int:
        out = 0
        k = 0
        while v:
            if v & 1:
                out ^= self.cols[k]
            v >>= 1
            k += 1
        return out

    def __mul__(self, other: "Sp2gF2Element") -> "Sp2gF2Element":
        return Sp2gF2Element(self.g, tuple(self.apply(c) for c in other.cols))

    def rows(self):
        n = 2 * self.g
        return [[(self.cols[j] >> i) & 1 for j in range(n)] for i in range(n)]

    def is_symplectic(self) -> bool:
        n = 2 * self.g
        for i in range(n):
            for j in range(i + 1, n):
                if form(self.cols[i], self.cols[j], self.g) != form(1 << i, 1 << j, self.g):
                    return False
        return True

    def order(self) -> int:
        ident = Sp2gF2Element.identity(self.g)
        x, k = self, 1
        while x != ident:
            x = x * self
            k += 1
        return k


def form(u: int, v: int, g: int) -> int:
    """Intersection form: b_k . b_l = 1 exactly when |k - l| = 1."""
    mask = (1 << (2 * g)) - 1
    jv = ((v << 1) ^ (v >> 1)) & mask
    return bin(u & jv).count("1") & 1


def _subset_to_vector(subset: int, npoints: int) -> int:
    if subset >> (npoints - 1) & 1:
        subset ^= (1 << npoints) - 1
    v = 0
    acc = 0
    for k in range(npoints - 2):
        acc ^= (subset >> k) & 1
        if acc:
            v |= 1 << k
    return v


def permutation_to_sp(perm: Sequence[int]) -> Sp2gF2Element:
    """Matrix of P_i -> P_perm[i] on the even subsets modulo the full set."""
    npoints = len(perm)
    if npoints % 2 or npoints < 4:
        raise ValueError("need an even number of at least 4 points")
    g = (npoints - 2) // 2
    cols = []
    for k in range(2 * g):
        image = (1 << perm[k]) | (1 << perm[k + 1])
        cols.append(_subset_to_vector(image, npoints))
    return Sp2gF2Element(g, tuple(cols))


def closure(gens, identity, cap: int = CLOSURE_CAP) -> int:
    """Order of the finite group generated by ``gens`` (breadth-first)."""
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = s * x if not isinstance(x, tuple) else tuple(s[i] for i in x)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise BudgetExceeded("group closure exceeded its cap", cap=cap)
                queue.append(y)
    return len(seen)


def permutation_group_order(perms: Sequence[Sequence[int]], cap: int = CLOSURE_CAP) -> int:
    if not perms:
        return 1
    n = len(perms[0])
    gens = [tuple(p) for p in perms]
    return closure(gens, tuple(range(n)), cap)


def sp_group_order(mats: Sequence[Sp2gF2Element], g: int, cap: int = CLOSURE_CAP) -> int:
    return closure(list(mats), Sp2gF2Element.identity(g), cap)


@dataclass(frozen=True)
class HyperellFamilySpec:
    """y^2 = f(x, t), f monic in x of degree 2g+2 or 2g+1."""

    f: Polynomial
    g: int
    label: str = ""

    def __post_init__(self):
        f = as_bivariate(self.f)
        object.__setattr__(self, "f", f)
        if self.g < 1:
            raise ValueError("genus must be positive")
        if f.degree not in (2 * self.g + 1, 2 * self.g + 2):
            raise ValueError(f"degree {f.degree} does not match genus {self.g}")
        if f.lc != 1:
            raise ValueError("f must be monic in x")
        if not discriminant_in_t(f):
            raise DegenerateFamily("f has a repeated factor for every t", label=self.label)

    @classmethod
    def from_string(cls, text: str, g: int, label: str = "") -> "HyperellFamilySpec":
        return cls(parse_bivariate(text), g, label)

    @property
    def points(self) -> int:
        return 2 * self.g + 2


def discriminant_in_t(f: Polynomial) -> RationalFunction:
    f = as_bivariate(f)
    if all(c.den.degree == 0 for c in f.coeffs):
        return RationalFunction(bivariate_discriminant_in_x(f))
    return discriminant(f)


def puncture_factors(fam: HyperellFamilySpec) -> list:
    d = discriminant_in_t(fam.f)
    out = [d.num, d.den]
    for c in fam.f.coeffs:
        out.append(c.den)
    return [squarefree_part(h) for h in out if h.degree > 0]


@dataclass(frozen=True)
class HyperellReport:
    label: str
    g: int
    permutations: tuple
    group_order: int
    permutation_group_order: int
    ambient_order: int
    index: int
    bound: object
    checks: dict

    @property
    def sharp(self) -> bool:
        return self.bound is not None and self.index == self.bound

    def to_json(self):
        return {
            "label": self.label,
            "g": self.g,
            "permutations": [[i + 1 for i in p] for p in self.permutations],
            "group_order": self.group_order,
            "permutation_group_order": self.permutation_group_order,
            "ambient_order": self.ambient_order,
            "index": self.index,
            "bound": None if self.bound is None else str(self.bound),
            "sharp": self.sharp,
            "checks": self.checks,
        }


def weierstrass_permutations(fam: HyperellFamilySpec, precision: int = DEFAULT_PRECISION,
                             seed: int = 0, max_step: float = DEFAULT_MAX_STEP,
                             workers: int = 1):
    """Per-lasso permutation of the Weierstrass points (labels are the roots
    in (real, imag) order at the basepoint; for odd degree the point at
    infinity is the fixed last label)."""
    punct = punctures_from_factors(puncture_factors(fam), precision)
    loops = build_loop_system(punct, seed)
    strands = track_many(fam.f, loops.lassos, precision, MAX_PRECISION, max_step, workers)
    perms = []
    for s in strands:
        p = list(s.endpoint_matching)
        if fam.f.degree == 2 * fam.g + 1:
            p.append(len(p))
        perms.append(tuple(p))
    return loops, perms


def mod2_monodromy_order(fam: HyperellFamilySpec, precision: int = DEFAULT_PRECISION,
                         seed: int = 0, max_step: float = DEFAULT_MAX_STEP,
                         workers: int = 1, cap: int = CLOSURE_CAP) -> HyperellReport:
    if fam.g < 2:
        raise GenusTooSmall("mod-2 monodromy needs genus at least 2", g=fam.g)
    _, perms = weierstrass_permutations(fam, precision, seed, max_step, workers)
    mats = [permutation_to_sp(p) for p in perms]
    order = sp_group_order(mats, fam.g, cap)
    perm_order = permutation_group_order(perms, cap)
    ambient = sp2g_f2_order(fam.g)
    if ambient % order:
        raise AssertionError("subgroup order does not divide the ambient order")
    index = ambient // order
    bound = hyperell_bound(fam.g) if fam.g >= 3 else None
    checks = {
        "symplectic": all(m.is_symplectic() for m in mats),
        "orders_agree": order == perm_order,
    }
    if bound is not None and perm_order == math.factorial(fam.points):
        checks["index >= bound"] = index >= bound
    return HyperellReport(fam.label, fam.g, tuple(perms), order, perm_order, ambient,
                          index, bound, checks)


def universal_slice(g: int, seed: int = 0, spread: int = 5, attempts: int = 200) -> HyperellFamilySpec:
    """Random line t -> (c_k + d_k t) in the space of depressed monic
    polynomials x^(2g+2) + a_(2g) x^(2g) + ... + a_0, accepted when its
    discriminant in t is squarefree of degree 4g+1.  With no x^(2g+1) term
    the t^(4g+2) coefficient vanishes, so infinity is a branch point too."""
    rng = random.Random(seed)
    n = 2 * g + 2
    t = RationalFunction.t()
    for _ in range(attempts):
        coeffs = [RationalFunction(rng.randint(-spread, spread)) +
                  rng.randint(-spread, spread) * t for _ in range(n - 1)]
        f = Polynomial(coeffs + [RationalFunction(0), RationalFunction(1)])
        d = bivariate_discriminant_in_x(f)
        if d.degree == 2 * n - 3 and squarefree_part(d).degree == d.degree:
            return HyperellFamilySpec(f, g, f"universal slice g={g} seed={seed}")
    raise DegenerateFamily("no generic slice found", g=g, seed=seed)
