"""Numbered acceptance criteria.

Each test carries ``@pytest.mark.criterion(n)``; the terminal summary
prints one PASS/FAIL line per criterion (see conftest.py).  Criterion 9
lives in test_properties.py.  Running this file directly does the same.
"""
import json
import math
import time
from fractions import Fraction

import pytest

import cache
from oracles import brute_image_order, brute_sl2_order, sl_index_oracle
from monodromy import kodaira
from monodromy.cli import RunConfig, compute, corpus_files
from monodromy.family import FamilySpec
from monodromy.hyperell import hyperell_bound, permutation_group_order, sp2g_f2_order
from monodromy.sl2 import IDENTITY, MINUS_I, MU_A, MU_B

# ------------------------------------------------------------ criterion 1


@pytest.mark.criterion(1)
def test_braid_relation_and_cube_exact():
    a, b = MU_A, MU_B
    assert a * b * a == b * a * b
    assert (a * b) ** 3 == MINUS_I
    assert (a * b) ** 6 == IDENTITY


@pytest.mark.criterion(1)
def test_braid_relation_under_one_millisecond():
    reps = 200
    start = time.perf_counter()
    for _ in range(reps):
        ok = MU_A * MU_B * MU_A == MU_B * MU_A * MU_B and (MU_A * MU_B) ** 3 == MINUS_I
    per_call = (time.perf_counter() - start) / reps
    assert ok
    assert per_call < 1e-3

# ------------------------------------------------------------ criterion 2


@pytest.mark.criterion(2)
def test_full_monodromy_index_one():
    rep, elapsed = cache.full_index_one()
    assert rep.sl_index == 1
    assert rep.psl_index == 1
    assert elapsed < 60


@pytest.mark.criterion(2)
def test_full_monodromy_finite_images_surjective():
    rep, _ = cache.full_index_one()
    assert brute_image_order(rep.matrices, 2) == brute_sl2_order(2) == 6
    assert brute_image_order(rep.matrices, 3) == brute_sl2_order(3) == 24
    assert rep.subgroup.mod2_image_order == 6
    assert rep.subgroup.mod3_image_order == 24


@pytest.mark.criterion(2)
def test_full_monodromy_coset_oracle():
    rep, _ = cache.full_index_one()
    assert sl_index_oracle(rep.matrices) == 1

# ------------------------------------------------------------ criterion 3


@pytest.mark.criterion(3)
def test_legendre_psl_index_six():
    rep, elapsed = cache.legendre()
    assert rep.psl_index == 6
    assert elapsed < 60


@pytest.mark.criterion(3)
def test_legendre_sl_index_six():
    rep, _ = cache.legendre()
    assert rep.sl_index == 6


@pytest.mark.criterion(3)
def test_legendre_mod2_image_trivial():
    rep, _ = cache.legendre()
    assert rep.subgroup.mod2_image_order == 1
    assert brute_image_order(rep.matrices, 2) == 1


@pytest.mark.criterion(3)
def test_legendre_bounds_with_deg_j_six():
    rep, _ = cache.legendre()
    assert rep.deg_j == 6 and rep.m == 6
    assert rep.bounds_checked["sl_index <= 2m"]
    assert rep.bounds_checked["psl_index <= m"]
    assert rep.sl_index <= 12 and rep.psl_index <= 6

# ------------------------------------------------------------ criterion 4


@pytest.mark.criterion(4)
def test_twist_relation_predicted_equals_direct():
    rep, elapsed = cache.twist_by_t()
    assert rep.checks["closed"]
    assert rep.checks["predicted_index_data_equal"]
    assert rep.checks["conjugate_by_inner_automorphism"]
    assert elapsed < 120


@pytest.mark.criterion(4)
def test_twist_relation_indices():
    rep, _ = cache.twist_by_t()
    assert rep.original.psl_index == rep.direct.psl_index
    ratio = Fraction(rep.direct.sl_index, rep.original.sl_index)
    assert ratio in (Fraction(1, 2), Fraction(1), Fraction(2))
    assert rep.original.sl_index == 1
    assert rep.direct.sl_index == 1
    assert sl_index_oracle(rep.direct.generators) == 1

# ------------------------------------------------------------ criterion 5


@pytest.mark.criterion(5)
def test_kodaira_audit_x3_x_t():
    start = time.perf_counter()
    fam = FamilySpec.from_strings("1", "t")
    places = kodaira.classify_all(fam)
    finite, inf = places[:-1], places[-1]
    assert [(p.kodaira_type, p.degree) for p in finite] == [("I1", 2)]
    assert inf.place == kodaira.INFINITY and inf.kodaira_type == "II*"
    sum_e, bound, deg_j = kodaira.surface_bound(fam, places)
    assert (sum_e, bound, deg_j) == (2, 4, 2)
    rep, _ = cache.x3_x_t()
    assert rep.sl_index <= 4
    assert rep.bounds_checked["sl_index <= 2 deg_J"]
    assert time.perf_counter() - start < 10

# ------------------------------------------------------------ criterion 6


def _analyze_files():
    out = []
    for path in corpus_files():
        data = json.loads(path.read_text())
        if data.get("command", "analyze") == "analyze":
            out.append(pytest.param(data, id=path.name))
    return out


@pytest.mark.criterion(6)
@pytest.mark.parametrize("data", _analyze_files())
def test_schreier_bound_over_corpus(data):
    rep = compute(RunConfig("analyze"), data)
    sl = rep["subgroup"]["sl_index"]
    assert isinstance(sl, int)
    if rep["r"] >= 2:
        assert sl <= 12 * (rep["r"] - 1)
        assert rep["bounds_checked"]["sl_index <= 12(r-1)"]

# ------------------------------------------------------------ criterion 7


@pytest.mark.criterion(7)
def test_hyperelliptic_genus_three_slice():
    rep, elapsed = cache.hyperell_g3()
    assert rep.permutation_group_order == math.factorial(8) == 40320
    assert permutation_group_order(rep.permutations) == 40320
    assert rep.ambient_order == sp2g_f2_order(3) == 2 ** 9 * 63 * 15 * 3 == 1451520
    assert rep.group_order == 40320
    assert rep.index == 36
    assert hyperell_bound(3) == 36 and rep.sharp
    assert elapsed < 600

# ------------------------------------------------------------ criterion 8


@pytest.mark.criterion(8)
def test_quartic_pencil_fermat():
    (pencil, rep), elapsed = cache.fermat_quartic()
    assert pencil.discriminant.degree == 12
    assert rep.consistency["punctures"] == 12
    assert rep.sl_index == 1
    assert sl_index_oracle(rep.matrices) == 1
    assert elapsed < 600


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "tests/test_properties.py", "-q"]))
