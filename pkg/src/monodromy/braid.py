"""Root continuation along paths, braid extraction, and the maps from
braid groups to SL(2, Z) and to permutations.

Conventions
-----------
Loops wind counterclockwise.  Braids are read by projecting roots onto a
direction d: the coordinate along d orders the strands into positions
1..n, and the coordinate along i*d decides the sign of a crossing.  When
the strands at positions i, i+1 swap and the one coming from the left
passes with the smaller transverse coordinate, the letter is sigma_i
(a counterclockwise half twist); otherwise sigma_i^-1.  With this choice
the roots of x^2 - t along a counterclockwise circle around 0 give
sigma_1.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import gmpy2

from .errors import DiscriminantHit, NonGenericProjection, PrecisionExhausted, WrongStrandCount
from .exact import (DEFAULT_PRECISION, MAX_PRECISION, ComplexRational, ComplexValue,
                    Polynomial, RationalFunction, _CertificationFailed, as_bivariate,
                    simple_roots, to_mpfr)
from .sl2 import IDENTITY, MU_A, MU_B, SL2Matrix

DEFAULT_MAX_STEP = 1 / 16
MIN_STEP = 2.0 ** -40


# ------------------------------------------------------------------ paths

@dataclass(frozen=True)
class Line:
    start: ComplexRational
    end: ComplexRational

    def point(self, s):
        a = self.start.to_mpc()
        return a + (self.end.to_mpc() - a) * s

    def velocity(self, s):
        return self.end.to_mpc() - self.start.to_mpc()

    def reversed(self):
        return Line(self.end, self.start)


@dataclass(frozen=True)
class Arc:
    """Circle arc around ``center`` starting at ``start``; ``turns`` > 0 is
    counterclockwise.  Only whole and half turns are allowed, so the end
    point stays exact."""

    center: ComplexRational
    start: ComplexRational
    turns: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "turns", Fraction(self.turns))
        if (2 * self.turns).denominator != 1 or self.turns == 0:
            raise ValueError("arc turns must be a nonzero multiple of 1/2")

    @property
    def end(self) -> ComplexRational:
        if self.turns.denominator == 1:
            return self.start
        return self.center * 2 - self.start

    def _angle(self):
        return 2 * gmpy2.const_pi() * to_mpfr(self.turns)

    def point(self, s):
        c = self.center.to_mpc()
        return c + (self.start.to_mpc() - c) * gmpy2.exp(gmpy2.mpc(0, self._angle() * s))

    def velocity(self, s):
        c = self.center.to_mpc()
        w = self._angle()
        return (self.start.to_mpc() - c) * gmpy2.exp(gmpy2.mpc(0, w * s)) * gmpy2.mpc(0, w)

    def reversed(self):
        return Arc(self.center, self.end, -self.turns)


@dataclass(frozen=True)
class PathPlan:
    segments: tuple
    basepoint: ComplexRational

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        here = self.basepoint
        for seg in segs:
            if seg.start != here:
                raise ValueError("consecutive segments must share endpoints")
            here = seg.end

    @property
    def end(self) -> ComplexRational:
        return self.segments[-1].end if self.segments else self.basepoint

    @property
    def closed(self) -> bool:
        return self.end == self.basepoint

    def reversed(self) -> "PathPlan":
        return PathPlan(tuple(s.reversed() for s in reversed(self.segments)), self.end)

    def __add__(self, other: "PathPlan") -> "PathPlan":
        if other.basepoint != self.end:
            raise ValueError("paths do not connect")
        return PathPlan(self.segments + other.segments, self.basepoint)

    def repeated(self, k: int) -> "PathPlan":
        if not self.closed:
            raise ValueError("only loops can be repeated")
        return PathPlan(self.segments * k, self.basepoint)

    def sample(self, count_per_segment: int = 64):
        """Float points along the path (for diagnostics and geometry checks)."""
        out = []
        with gmpy2.context(gmpy2.get_context(), precision=53):
            for seg in self.segments:
                for k in range(count_per_segment):
                    out.append(complex(seg.point(gmpy2.mpfr(k) / count_per_segment)))
        out.append(complex(self.end))
        return out


def circle_loop(center, radius, basepoint=None) -> PathPlan:
    """Counterclockwise circle with exact rational center and radius."""
    center = _cr(center)
    start = center + Fraction(radius) if basepoint is None else _cr(basepoint)
    return PathPlan((Arc(center, start, 1),), start)


def point_path(t) -> PathPlan:
    """Degenerate path that stays at t."""
    t = _cr(t)
    return PathPlan((Line(t, t),), t)


def _cr(z) -> ComplexRational:
    if isinstance(z, ComplexRational):
        return z
    if isinstance(z, complex):
        return ComplexRational.from_complex(z)
    return ComplexRational(Fraction(z))


# --------------------------------------------------------------- tracking

class _Compiled:
    """Coefficients of f in Q(t)[x] prepared for fast mpc evaluation."""

    def __init__(self, f: Polynomial):
        f = as_bivariate(f)
        if f.degree < 1:
            raise ValueError("need a polynomial of positive degree in x")
        self.n = f.degree
        self.coeffs = [(c.num.coeffs, c.den.coeffs) for c in f.coeffs]
        self.dcoeffs = []
        for c in f.coeffs:
            d = c.derivative()
            self.dcoeffs.append((d.num.coeffs, d.den.coeffs))

    @staticmethod
    def _eval(pairs, t):
        out = []
        for num, den in pairs:
            if not num:
                out.append(gmpy2.mpc(0))
                continue
            v = gmpy2.mpc(0)
            for a in reversed(num):
                v = v * t + a
            if len(den) > 1:
                w = gmpy2.mpc(0)
                for a in reversed(den):
                    w = w * t + a
                v = v / w
            out.append(v)
        return out

    def prepare(self):
        """Convert rationals to mpfr at the ambient precision."""
        conv = lambda pairs: [([to_mpfr(a) for a in num], [to_mpfr(a) for a in den])
                              for num, den in pairs]
        return conv(self.coeffs), conv(self.dcoeffs)


def _value_and_derivative(cs, z):
    n = len(cs) - 1
    p = cs[n]
    dp = gmpy2.mpc(0)
    for k in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + cs[k]
    return p, dp


def _poly_value(cs, z):
    p = cs[-1]
    for k in range(len(cs) - 2, -1, -1):
        p = p * z + cs[k]
    return p


def _min_separation(z):
    best = None
    for i in range(len(z)):
        for j in range(i):
            d = abs(z[i] - z[j])
            if best is None or d < best:
                best = d
    return best


@dataclass(frozen=True)
class TrackedStrands:
    """Root positions along a path.

    ``samples[k][i]`` is the position of strand i at the k-th accepted
    point; strand i starts at the i-th root in (real, imag) order.
    ``endpoint_matching[i] = j`` means strand i ends where strand j began.
    """

    path: PathPlan
    samples: tuple
    params: tuple
    radii: tuple
    steps: tuple
    precision: int
    endpoint_matching: Optional[tuple]

    @property
    def strands(self) -> int:
        return len(self.samples[0])

    def sample_values(self, k: int) -> list:
        return [ComplexValue.from_mpc(z) for z in self.samples[k]]

    def disks_disjoint(self) -> bool:
        for pts, rad in zip(self.samples, self.radii):
            for i in range(len(pts)):
                for j in range(i):
                    if rad[i] + rad[j] >= abs(pts[i] - pts[j]):
                        return False
        return True


def _track_once(comp: _Compiled, path: PathPlan, prec: int, max_step: float):
    n = comp.n
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        cf, dcf = comp.prepare()
        t = path.basepoint.to_mpc()
        c = _Compiled._eval(cf, t)
        if c[-1] == 0:
            raise ValueError("leading coefficient vanishes at the basepoint")
        try:
            z, rad = simple_roots(c, prec)
        except _CertificationFailed:
            raise _NeedPrecision()
        order = sorted(range(n), key=lambda i: (z[i].real, z[i].imag))
        z = [z[i] for i in order]
        rad = [rad[i] for i in order]
        start = list(z)
        samples = [tuple(z)]
        params = [(0, 0.0)]
        radii = [tuple(rad)]
        steps = []
        tol = gmpy2.mpfr(2) ** (-(prec - 16))
        for si, seg in enumerate(path.segments):
            s = 0.0
            h = max_step
            t = seg.point(0)
            c = _Compiled._eval(cf, t)
            dc = _Compiled._eval(dcf, t)
            while s < 1.0:
                h = min(h, max_step)
                last = 1.0 - s <= h
                s1 = 1.0 if last else s + h
                t1 = seg.point(gmpy2.mpfr(s1))
                dt = t1 - t
                sep = _min_separation(z)
                quarter = sep / 4
                ok = True
                pred = []
                for zi in z:
                    p, dp = _value_and_derivative(c, zi)
                    ft = _poly_value(dc, zi)
                    dz = -ft / dp * dt
                    if not abs(dz) < quarter:
                        ok = False
                        break
                    pred.append(zi + dz)
                new = []
                newrad = []
                if ok:
                    c1 = _Compiled._eval(cf, t1)
                    for i, w in enumerate(pred):
                        for _ in range(8):
                            p, dp = _value_and_derivative(c1, w)
                            if dp == 0:
                                break
                            delta = p / dp
                            w = w - delta
                            if abs(delta) <= tol * (1 + abs(w)):
                                break
                        else:
                            ok = False
                            break
                        if dp == 0 or not abs(w - z[i]) < quarter:
                            ok = False
                            break
                        p, dp = _value_and_derivative(c1, w)
                        r = n * abs(p / dp) if dp != 0 else gmpy2.inf()
                        new.append(w)
                        newrad.append(r)
                if ok:
                    for i in range(n):
                        for j in range(i):
                            if not newrad[i] + newrad[j] < abs(new[i] - new[j]):
                                ok = False
                                break
                        if not ok:
                            break
                if ok:
                    z = new
                    t = t1
                    c = c1
                    dc = _Compiled._eval(dcf, t1)
                    s = s1
                    samples.append(tuple(z))
                    params.append((si, s1))
                    radii.append(tuple(newrad))
                    steps.append(h)
                    h = 2 * h
                else:
                    h = h / 2
                    if h < MIN_STEP:
                        raise _NeedPrecision(t1)
        matching = None
        if path.closed:
            sep0 = _min_separation(start) if n > 1 else gmpy2.mpfr(1)
            matching = []
            for zi in z:
                dists = [abs(zi - w) for w in start]
                j = min(range(n), key=lambda k: dists[k])
                if not dists[j] < sep0 / 4:
                    raise _NeedPrecision()
                matching.append(j)
            if sorted(matching) != list(range(n)):
                raise _NeedPrecision()
            matching = tuple(matching)
        return TrackedStrands(path, tuple(samples), tuple(params), tuple(radii),
                              tuple(steps), prec, matching)


class _NeedPrecision(Exception):
    def __init__(self, where=None):
        super().__init__()
        self.where = where


def track_roots(f: Polynomial, path: PathPlan, precision: int = DEFAULT_PRECISION,
                max_precision: int = MAX_PRECISION,
                max_step: float = DEFAULT_MAX_STEP) -> TrackedStrands:
    """Continue the roots in x of f(x, t) along ``path``.

    A step of the predictor-corrector is accepted only when every root
    moves less than a quarter of the current minimal root separation and
    the Newton disks at the new point are pairwise disjoint; otherwise the
    step is halved.  When steps shrink below 2^-40 of a segment, the whole
    path is retried at doubled precision, and at the cap the path is
    declared to pass through (or too close to) the discriminant locus.
    """
    comp = _Compiled(f)
    prec = precision
    while True:
        try:
            return _track_once(comp, path, prec, max_step)
        except _NeedPrecision as exc:
            if prec >= max_precision:
                if exc.where is None:
                    raise PrecisionExhausted("could not certify roots along the path",
                                             precision=prec)
                raise DiscriminantHit("path passes too close to the discriminant locus",
                                      near=[str(complex(exc.where))])
            prec = min(2 * prec, max_precision)


def _track_job(args):
    f, path, precision, max_precision, max_step = args
    return track_roots(f, path, precision, max_precision, max_step)


def track_many(f: Polynomial, paths: Sequence[PathPlan], precision: int = DEFAULT_PRECISION,
               max_precision: int = MAX_PRECISION, max_step: float = DEFAULT_MAX_STEP,
               workers: int = 1) -> list:
    """track_roots over several independent paths, optionally in processes."""
    jobs = [(f, p, precision, max_precision, max_step) for p in paths]
    if workers <= 1 or len(jobs) <= 1:
        return [_track_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_track_job, jobs))


# ------------------------------------------------------------------ braids

@dataclass(frozen=True)
class BraidWord:
    """Word in the Artin generators; letter +i is sigma_i, -i its inverse."""

    strands: int
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.strands < 2:
            raise ValueError("a braid needs at least two strands")
        for x in self.letters:
            if x == 0 or abs(x) >= self.strands:
                raise ValueError(f"letter {x} out of range for {self.strands} strands")

    def free_reduced(self) -> "BraidWord":
        out = []
        for x in self.letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return BraidWord(self.strands, tuple(out))

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-x for x in reversed(self.letters)))

    def __add__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise WrongStrandCount("cannot concatenate braids on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def to_json(self):
        return list(self.letters)


def random_direction(rng: random.Random) -> tuple:
    while True:
        a = rng.randint(-1000, 1000)
        b = rng.randint(-1000, 1000)
        if a or b:
            return (a, b)


def _float_samples(strands: TrackedStrands):
    return [[complex(z) for z in pts] for pts in strands.samples]


def initial_positions(strands: TrackedStrands, direction) -> list:
    """Strand labels listed by increasing projected coordinate at the start."""
    a, b = direction
    rot = complex(a, -b)
    first = [complex(z) * rot for z in strands.samples[0]]
    return sorted(range(len(first)), key=lambda i: first[i].real)


def _extract(samples, n, direction) -> BraidWord:
    a, b = direction
    rot = complex(a, -b) / abs(complex(a, b))
    w = [[z * rot for z in pts] for pts in samples]
    scale = max(abs(v) for pts in w for v in pts) + 1.0
    eps = 1e-12 * scale
    order = sorted(range(n), key=lambda i: w[0][i].real)
    xs0 = sorted(v.real for v in w[0])
    for k in range(n - 1):
        if xs0[k + 1] - xs0[k] <= eps:
            raise NonGenericProjection("strands share a projected coordinate at the start")
    pos = [0] * n
    for p, i in enumerate(order):
        pos[i] = p
    letters = []
    for k in range(len(w) - 1):
        u, v = w[k], w[k + 1]
        events = []
        for i in range(n):
            for j in range(i + 1, n):
                d0 = u[i].real - u[j].real
                d1 = v[i].real - v[j].real
                if abs(d1) <= eps:
                    raise NonGenericProjection("projected coordinates coincide at a sample")
                if (d0 > 0) != (d1 > 0):
                    tau = d0 / (d0 - d1)
                    events.append((tau, i, j))
        if not events:
            continue
        events.sort()
        for e in range(len(events) - 1):
            t0, i0, j0 = events[e]
            t1, i1, j1 = events[e + 1]
            if t1 - t0 < 1e-9 and {i0, j0} & {i1, j1}:
                raise NonGenericProjection("simultaneous crossings")
        for tau, i, j in events:
            if abs(pos[i] - pos[j]) != 1:
                raise NonGenericProjection("crossing between non-adjacent strands")
            left, right = (i, j) if pos[i] < pos[j] else (j, i)
            yl = u[left].imag + tau * (v[left].imag - u[left].imag)
            yr = u[right].imag + tau * (v[right].imag - u[right].imag)
            if abs(yl - yr) <= eps:
                raise NonGenericProjection("strands meet in projection")
            p = pos[left]
            letters.append((p + 1) if yl < yr else -(p + 1))
            pos[left], pos[right] = pos[right], pos[left]
    return BraidWord(n, tuple(letters))


def extract_braid(strands: TrackedStrands, direction=None, seed: int = 0,
                  retries: int = 8) -> BraidWord:
    """Braid word of tracked strands, read in projection to ``direction``.

    With an explicit direction a non-generic projection raises at once;
    otherwise up to ``retries`` seeded random rational directions are tried.
    """
    samples = _float_samples(strands)
    n = strands.strands
    if direction is not None:
        return _extract(samples, n, direction)
    rng = random.Random(seed)
    last = None
    for _ in range(retries):
        try:
            return _extract(samples, n, random_direction(rng))
        except NonGenericProjection as exc:
            last = exc
    raise last


def braid_with_direction(strands_list: Sequence[TrackedStrands], seed: int = 0,
                         retries: int = 16):
    """Extract every loop's braid with one common direction, so the words
    refer to the same position labels at the shared basepoint."""
    rng = random.Random(seed)
    cache = [_float_samples(s) for s in strands_list]
    last = None
    for _ in range(retries):
        d = random_direction(rng)
        try:
            return d, [_extract(c, s.strands, d) for c, s in zip(cache, strands_list)]
        except NonGenericProjection as exc:
            last = exc
    raise last


def _represent(word: BraidWord, images) -> SL2Matrix:
    inv = [m.inverse() for m in images]
    out = IDENTITY
    for x in word.letters:
        out = out * (images[x - 1] if x > 0 else inv[-x - 1])
    return out


def mu3(word: BraidWord) -> SL2Matrix:
    """sigma_1 -> [[1,0],[-1,1]], sigma_2 -> [[1,1],[0,1]]."""
    if word.strands != 3:
        raise WrongStrandCount("mu3 needs a 3-strand braid", strands=word.strands)
    return _represent(word, (MU_A, MU_B))


def mu4(word: BraidWord) -> SL2Matrix:
    """sigma_1, sigma_3 -> [[1,0],[-1,1]], sigma_2 -> [[1,1],[0,1]]."""
    if word.strands != 4:
        raise WrongStrandCount("mu4 needs a 4-strand braid", strands=word.strands)
    return _represent(word, (MU_A, MU_B, MU_A))


def permutation_of(word: BraidWord) -> tuple:
    """Endpoint map: the strand starting at position i ends at position perm[i]."""
    at = list(range(word.strands))  # at[p] = starting position of the strand now at p
    for x in word.letters:
        p = abs(x) - 1
        at[p], at[p + 1] = at[p + 1], at[p]
    perm = [0] * word.strands
    for p, origin in enumerate(at):
        perm[origin] = p
    return tuple(perm)


def compose_permutations(p: Sequence[int], q: Sequence[int]) -> tuple:
    """First p, then q (as endpoint maps of concatenated paths)."""
    return tuple(q[p[i]] for i in range(len(p)))


def invert_permutation(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)
