import math
from fractions import Fraction

import numpy as np
import pytest

import cache
from oracles import sl_index_oracle
from monodromy.braid import circle_loop
from monodromy.errors import IsotrivialFamily, NonGenericPencil, NonSmoothQuartic, ZeroTwist
from monodromy.exact import Polynomial, RationalFunction
from monodromy.family import (FamilySpec, TwistSpec, binary_quartic_invariants, chi_d,
                              cross_ratio_j, j_map, legendre_family, monodromy_group,
                              punctures_of, quadratic_twist, quartic_pencil_family,
                              verify_twist_relation)
from monodromy.sl2 import IDENTITY

T = RationalFunction.t()


def test_punctures_of_examples():
    pts = punctures_of(FamilySpec.from_strings("t", "1"))
    got = sorted((complex(p.approx) for p in pts), key=lambda z: (z.real, z.imag))
    ref = sorted(np.roots([4, 0, 0, 27]), key=lambda z: (z.real, z.imag))
    assert len(got) == 3
    assert np.allclose(got, ref, atol=1e-12)
    assert punctures_of(FamilySpec.from_strings("0", "1")) == []
    assert [complex(p.approx) for p in punctures_of(legendre_family())] == [0, 1]


def test_j_map_examples():
    assert j_map(FamilySpec.from_strings("t", "1")).deg_j == 3
    lam = T
    legendre_j = 256 * (lam ** 2 - lam + 1) ** 3 / (lam ** 2 * (1 - lam) ** 2)
    jd = j_map(legendre_family())
    assert jd.j == legendre_j
    assert jd.deg_j == 6 == jd.m
    assert j_map(FamilySpec.from_strings("0", "t")).isotrivial


def test_legendre_pq_strings_match_depressed_cubic():
    fam = FamilySpec.from_strings("-(t^2 - t + 1)/3", "-(t - 2)*(2*t - 1)*(t + 1)/27")
    ref = legendre_family()
    assert (fam.p, fam.q) == (ref.p, ref.q)


def test_isotrivial_family_raises():
    with pytest.raises(IsotrivialFamily) as info:
        monodromy_group(FamilySpec.from_strings("0", "1"))
    assert info.value.details["matrices"] == []
    with pytest.raises(IsotrivialFamily) as info:
        monodromy_group(FamilySpec.from_strings("t^2", "t^3"))
    assert info.value.details["group_order"] == 2


def test_legendre_group_is_free_so_minus_identity_is_absent():
    """Two lassos generate the group; their PSL image has index 6 and no
    torsion (no fixed points of s or u on cosets), so it is free of rank 2.
    A 2-generated group mapping onto F2 is itself F2, so -I is absent and
    the SL index is twice the PSL index."""
    rep, _ = cache.legendre()
    assert len(rep.matrices) == 2
    tab = rep.subgroup.coset_table
    assert tab.size == 6
    assert all(tab.perm_s[c] != c for c in range(6))
    assert all(tab.perm_u[c] != c for c in range(6))
    assert rep.subgroup.contains_minus_I is False
    assert rep.sl_index == 12 == sl_index_oracle(rep.matrices)
    assert rep.subgroup.mod2_image_order == 1


def test_full_index_report_fields():
    rep, _ = cache.full_index_one()
    assert rep.deg_j == 3 and rep.s == 4 and rep.r == 3
    assert all(rep.bounds_checked.values())
    assert rep.consistency["product_law_at_infinity"]
    assert rep.consistency["infinity_type"] == "III*"
    assert rep.loop_product().trace == 0


def test_quadratic_twist_examples():
    fam = FamilySpec.from_strings("t", "1")
    same = quadratic_twist(fam, TwistSpec(1))
    assert (same.p, same.q) == (fam.p, fam.q)
    tw = quadratic_twist(fam, TwistSpec(T))
    assert (tw.p, tw.q) == (T ** 3, T ** 3)
    twice = quadratic_twist(tw, TwistSpec(T))
    assert j_map(twice).j == j_map(fam).j
    with pytest.raises(ZeroTwist):
        TwistSpec(0)


def test_chi_d_examples():
    loop = circle_loop(0, 1)
    assert chi_d(TwistSpec(T), loop) == -1
    assert chi_d(TwistSpec(T ** 2), loop) == 1
    assert chi_d(TwistSpec(7), loop) == 1
    assert chi_d(TwistSpec(1 / (T - Fraction(1, 2))), loop) == -1
    assert chi_d(TwistSpec(T - 3), loop) == 1


def test_trivial_twist_gives_identical_groups():
    rep = verify_twist_relation(FamilySpec.from_strings("t^2+1", "t"), TwistSpec(1))
    assert rep.original.index_data() == rep.direct.index_data()
    assert rep.classification.case == "Equal"
    assert set(rep.chi) == {1}


def test_twist_of_legendre_halves_or_doubles():
    rep = verify_twist_relation(legendre_family(), TwistSpec(T))
    assert rep.checks["closed"] and rep.checks["predicted_index_data_equal"]
    assert rep.checks["psl_index_equal"] and rep.checks["sl_ratio_in_half_one_two"]
    assert rep.checks["conjugate_by_inner_automorphism"]


@pytest.mark.parametrize("fam", [FamilySpec.from_strings("t", "1"), legendre_family()],
                         ids=["x3_tx_1", "legendre"])
def test_restriction_stability(fam):
    base = monodromy_group(fam)
    extra = monodromy_group(fam, extra_punctures=[Polynomial((-5, 1)), Polynomial((3, 0, 1))])
    assert extra.subgroup.index_data() == base.subgroup.index_data()
    assert sum(1 for m in extra.matrices if m == IDENTITY) >= 3


@pytest.mark.parametrize("fam", [FamilySpec.from_strings("t", "1"), legendre_family()],
                         ids=["x3_tx_1", "legendre"])
def test_pullback_index_at_most_double(fam):
    base = monodromy_group(fam)
    pulled = monodromy_group(fam.pullback(Polynomial((0, 0, 1))))
    ratio = Fraction(pulled.sl_index, base.sl_index)
    assert ratio in (1, 2)


def test_quartic_pencil_twelve_punctures_and_j_routes():
    (pencil, rep), _ = cache.fermat_quartic()
    assert rep.consistency["punctures"] == 12
    assert rep.consistency["j_cross_ratio_matches_weierstrass"]
    assert rep.consistency["local_types"]
    assert all(rep.bounds_checked.values())


def test_quartic_weierstrass_model_has_same_index():
    (pencil, rep), _ = cache.fermat_quartic()
    wei = monodromy_group(pencil.weierstrass)
    assert wei.sl_index == rep.sl_index == 1


def test_cross_ratio_j_examples():
    assert cross_ratio_j([0, 1, -1, 2 ** 0.5 * 1e9]) == pytest.approx(1728, rel=1e-6)
    w = complex(-0.5, math.sqrt(3) / 2)
    assert abs(cross_ratio_j([1, w, w * w, 0])) < 1e-9
    # invariants of s^4 - 1 give j = 1728
    i, j = binary_quartic_invariants(Polynomial((-1, 0, 0, 0, 1)))
    assert Fraction(6912) * i ** 3 / (4 * i ** 3 - j ** 2) == 1728


def test_quartic_errors():
    with pytest.raises(NonSmoothQuartic):
        quartic_pencil_family("x^4 + y^4 + x^2 - y^2 + x^3")
    with pytest.raises(NonSmoothQuartic):
        quartic_pencil_family("x^3 + y^3 + 1")
    with pytest.raises(NonGenericPencil):
        quartic_pencil_family("x^4 + y^4 - 2", base=(1, 1))
