"""Kodaira fiber types of y^2 = x^3 + p x + q over Q(t), place by place.

In residue characteristic 0 Tate's algorithm reduces to a table lookup on
the valuations of (c4, c6, Delta) after minimalization.  For the
depressed model c4 and c6 are constant multiples of p and q, so their
valuations are those of p and q.  A finite place is represented by a
squarefree factor h of the gcd-free basis; all roots of h share the same
valuations, so each such class is classified once and counted deg(h)
times.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import IsotrivialFamily, UnclassifiablePlace
from .exact import ComplexValue, Polynomial
from .sl2 import IDENTITY, MINUS_I, SL2Matrix

INFINITY = "inf"

TRACE_OF_TYPE = {"I0": 2, "II": 1, "III": 0, "IV": -1, "I0*": -2,
                 "IV*": -1, "III*": 0, "II*": 1}


@dataclass(frozen=True)
class KodairaPlace:
    place: str
    degree: int
    ord_c4: object
    ord_c6: object
    ord_disc: int
    kodaira_type: str
    e_value: int
    factor: Optional[Polynomial] = None

    @property
    def n(self) -> int:
        """The index n of I_n or I_n* (0 for other types)."""
        kt = self.kodaira_type
        if kt.startswith("I") and kt not in ("II", "III", "IV", "II*", "III*", "IV*"):
            return int(kt[1:].rstrip("*"))
        return 0

    def is_minimal(self) -> bool:
        return not (self.ord_c4 >= 4 and self.ord_c6 >= 6 and self.ord_disc >= 12)

    def to_json(self):
        def o(v):
            return "inf" if v == math.inf else v
        return {"place": self.place, "places_in_class": self.degree,
                "ord_c4": o(self.ord_c4), "ord_c6": o(self.ord_c6),
                "ord_disc": self.ord_disc, "type": self.kodaira_type, "e": self.e_value}


def kodaira_type(a, b, d) -> str:
    """Type from (ord c4, ord c6, ord Delta) of a minimal model."""
    if d == 0:
        return "I0"
    if a == 0 and b == 0:
        return f"I{d}"
    if d == 2 and b == 1 and a >= 1:
        return "II"
    if d == 3 and a == 1 and b >= 2:
        return "III"
    if d == 4 and b == 2 and a >= 2:
        return "IV"
    if d == 6 and a >= 2 and b >= 3:
        return "I0*"
    if d > 6 and a == 2 and b == 3:
        return f"I{d - 6}*"
    if d == 8 and b == 4 and a >= 3:
        return "IV*"
    if d == 9 and a == 3 and b >= 5:
        return "III*"
    if d == 10 and b == 5 and a >= 4:
        return "II*"
    raise UnclassifiablePlace(f"no Kodaira type for valuations {(a, b, d)}")


def e_value(kt: str, d: int) -> int:
    if kt == "I0" or kt == "I0*":
        return 0
    if kt.startswith("I") and kt[1].isdigit():
        return d - 6 if kt.endswith("*") else d
    return 0


def _minimalize(vp, vq, vd):
    shifts = []
    if vp != math.inf:
        shifts.append(-((vp) // 4))  # ceil(-vp / 4)
    if vq != math.inf:
        shifts.append(-((vq) // 6))
    k = max(shifts)
    a = vp + 4 * k if vp != math.inf else math.inf
    b = vq + 6 * k if vq != math.inf else math.inf
    return a, b, vd + 12 * k


def _classify(fam, vp, vq, vd, place, degree, factor):
    a, b, d = _minimalize(vp, vq, vd)
    kt = kodaira_type(a, b, d)
    out = KodairaPlace(place, degree, a, b, d, kt, e_value(kt, d), factor)
    assert out.is_minimal()
    return out


def classify_place(fam, place) -> KodairaPlace:
    """Kodaira type at ``place``: INFINITY, a rational number, a squarefree
    factor from the family's gcd-free basis, or a numeric point."""
    disc = fam.discriminant
    if place == INFINITY:
        return _classify(fam, fam.p.valuation_at_infinity(), fam.q.valuation_at_infinity(),
                         disc.valuation_at_infinity(), INFINITY, 1, None)
    if isinstance(place, (int, Fraction)):
        h = Polynomial((-Fraction(place), 1))
        return _classify(fam, fam.p.valuation(h), fam.q.valuation(h), disc.valuation(h),
                         str(Fraction(place)), 1, h)
    if isinstance(place, Polynomial):
        return _classify(fam, fam.p.valuation(place), fam.q.valuation(place),
                         disc.valuation(place), place.to_str("t"), place.degree, place)
    z = complex(place) if isinstance(place, ComplexValue) else complex(place)
    from .family import puncture_factors, punctures_from_factors
    for pun in punctures_from_factors(puncture_factors(fam)):
        if abs(pun.approx - z) <= max(1e-9, 10 * pun.radius):
            kp = classify_place(fam, pun.factor)
            return KodairaPlace(f"{z}", 1, kp.ord_c4, kp.ord_c6, kp.ord_disc,
                                kp.kodaira_type, kp.e_value, kp.factor)
    return KodairaPlace(f"{z}", 1, 0, 0, 0, "I0", 0, None)


def classify_all(fam) -> list:
    """Every finite bad place class, then the place at infinity (last)."""
    from .family import puncture_factors
    out = [classify_place(fam, h) for h in puncture_factors(fam)]
    out.append(classify_place(fam, INFINITY))
    return out


def surface_bound(fam, places=None):
    """(sum of e over all places, 2 * that sum, deg J), checking sum e = deg J."""
    from .family import j_map
    jd = j_map(fam)
    if jd.isotrivial:
        raise IsotrivialFamily("J is constant", label=fam.label, j=str(jd.j))
    if places is None:
        places = classify_all(fam)
    total = sum(p.degree * p.e_value for p in places)
    if total != jd.deg_j:
        raise AssertionError(f"sum of e = {total} differs from deg J = {jd.deg_j}")
    return total, 2 * total, jd.deg_j


def _content(a, b, c, d) -> int:
    return math.gcd(math.gcd(a, b), math.gcd(c, d))


def local_monodromy_consistent(m: SL2Matrix, place: KodairaPlace) -> bool:
    """Is m a possible local monodromy (up to conjugacy and inversion) at a
    fiber of this type?  For I_n the entries of m - I have gcd n; for I_n*
    the same holds for -m - I."""
    kt = place.kodaira_type
    if kt == "I0":
        return m == IDENTITY
    if kt == "I0*":
        return m == MINUS_I
    n = place.n
    if n and kt.endswith("*"):
        return m.trace == -2 and _content(-m.a - 1, -m.b, -m.c, -m.d - 1) == n
    if n:
        return m.trace == 2 and _content(m.a - 1, m.b, m.c, m.d - 1) == n
    return m.trace == TRACE_OF_TYPE[kt]


def report_json(fam) -> dict:
    places = classify_all(fam)
    out = {"label": fam.label, "places": [p.to_json() for p in places]}
    try:
        sum_e, bound, deg_j = surface_bound(fam, places)
        out.update({"sum_e": sum_e, "bound": bound, "deg_J": deg_j})
    except IsotrivialFamily:
        out.update({"isotrivial": True})
    return out
