import random

import pytest
from hypothesis import given, settings, strategies as st

import cache
from test_properties import random_family
from monodromy.errors import IsotrivialFamily, UnclassifiablePlace
from monodromy.exact import RationalFunction
from monodromy.family import FamilySpec, legendre_family
from monodromy.kodaira import (INFINITY, TRACE_OF_TYPE, KodairaPlace, classify_all, classify_place, e_value,
                               kodaira_type, local_monodromy_consistent, surface_bound)
from monodromy.sl2 import IDENTITY, SL2Matrix

T = RationalFunction.t()


def _j_direct(fam):
    p, q = fam.p, fam.q
    return 6912 * p ** 3 / (4 * p ** 3 + 27 * q ** 2)


def _pole_order(j, place):
    v = j.valuation_at_infinity() if place.place == INFINITY else j.valuation(place.factor)
    return max(0, -v)


def test_type_table_examples():
    assert kodaira_type(0, 0, 0) == "I0"
    assert kodaira_type(0, 0, 5) == "I5"
    assert kodaira_type(1, 1, 2) == "II"
    assert kodaira_type(1, 2, 3) == "III"
    assert kodaira_type(2, 2, 4) == "IV"
    assert kodaira_type(2, 3, 6) == "I0*"
    assert kodaira_type(2, 3, 9) == "I3*"
    assert kodaira_type(3, 4, 8) == "IV*"
    assert kodaira_type(3, 5, 9) == "III*"
    assert kodaira_type(4, 5, 10) == "II*"
    with pytest.raises(UnclassifiablePlace):
        kodaira_type(1, 1, 5)


def test_e_value_rule():
    assert [e_value(k, d) for k, d in [("I0", 0), ("I4", 4), ("I0*", 6), ("I3*", 9)]] == [0, 4, 0, 3]
    assert all(e_value(k, d) == 0 for k, d in [("II", 2), ("III", 3), ("IV", 4),
                                               ("IV*", 8), ("III*", 9), ("II*", 10)])


def test_simple_zero_is_i1_and_infinity_is_ii_star():
    fam = FamilySpec.from_strings("1", "t")
    places = classify_all(fam)
    finite = places[:-1]
    assert len(finite) == 1 and finite[0].kodaira_type == "I1" and finite[0].degree == 2
    inf = places[-1]
    assert inf.kodaira_type == "II*"
    assert (inf.ord_c4, inf.ord_c6, inf.ord_disc) == (4, 5, 10)
    assert surface_bound(fam) == (2, 4, 2)


def test_legendre_places():
    fam = legendre_family()
    assert classify_place(fam, 0).kodaira_type == "I2"
    assert classify_place(fam, 1).kodaira_type == "I2"
    assert classify_place(fam, INFINITY).kodaira_type == "I2*"
    assert classify_place(fam, 5).kodaira_type == "I0"
    assert surface_bound(fam) == (6, 12, 6)


def test_isotrivial_bound_raises():
    with pytest.raises(IsotrivialFamily):
        surface_bound(FamilySpec.from_strings("0", "t"))


def test_minimalization_shifts_valuations():
    # t^4 p and t^6 q differ from the original by a change of variables
    fam = FamilySpec(T ** 5, T ** 7 + T ** 6)
    kp = classify_place(fam, 0)
    assert kp.is_minimal()
    assert (kp.ord_c4, kp.ord_c6) == (1, 0)
    assert kp.kodaira_type == "I0"


def test_numeric_place_lookup():
    fam = legendre_family()
    assert classify_place(fam, complex(1, 0)).kodaira_type == "I2"
    assert classify_place(fam, complex(0.3, 0.2)).kodaira_type == "I0"


def test_local_consistency_with_tracked_matrices():
    rep, _ = cache.legendre()
    i2 = classify_place(legendre_family(), 0)
    assert all(local_monodromy_consistent(m, i2) for m in rep.matrices)
    assert not local_monodromy_consistent(IDENTITY, i2)
    full, _ = cache.full_index_one()
    i1 = classify_all(FamilySpec.from_strings("t", "1"))[0]
    assert all(local_monodromy_consistent(m, i1) for m in full.matrices)
    assert local_monodromy_consistent(full.loop_product().inverse(),
                                      classify_place(FamilySpec.from_strings("t", "1"), INFINITY))


def test_local_consistency_trace_table():
    m = SL2Matrix(1, 1, -1, 0)
    for kt, tr in TRACE_OF_TYPE.items():
        if kt in ("I0", "I0*"):
            continue
        kp = KodairaPlace("x", 1, 0, 0, 0, kt, 0)
        assert local_monodromy_consistent(m, kp) == (tr == m.trace)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=120)
def test_sum_e_equals_deg_j_and_pole_orders(seed):
    fam = random_family(random.Random(seed))
    places = classify_all(fam)
    j = _j_direct(fam)
    deg_j = max(j.num.degree, j.den.degree)
    total, bound, dj = surface_bound(fam, places)
    assert total == dj == deg_j and bound == 2 * total
    for kp in places:
        assert kp.is_minimal()
        assert kp.e_value == _pole_order(j, kp)
        assert kp.e_value == e_value(kp.kodaira_type, kp.ord_disc)
