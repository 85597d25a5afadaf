import numpy as np
import pytest

from trinv.errors import UsageError
from trinv.fields import FieldSpec, get_field
from trinv.invariants import build_generators, build_set, sig, tr
from trinv.report import FAIL, PASS
from trinv.spans import (
    GradedSpans,
    SampleSet,
    characteristic_split,
    check_sigma2_identity,
    decomposable_margin,
    independent_mod_decomposables,
    is_decomposable,
    multidegrees_up_to,
    verify_generation,
    verify_minimality,
)
from trinv.words import Word

from conftest import CHAR3, MAIN_SPECS, SURROGATE, spec_id


def test_products_are_decomposable():
    F = get_field(SURROGATE)
    assert is_decomposable(tr(F, 1) * tr(F, 2))
    assert is_decomposable(tr(F, 1, 2) * tr(F, 3) + tr(F, 1) * tr(F, 2, 3).scale(5))


def test_zero_is_decomposable():
    F = get_field(SURROGATE)
    assert is_decomposable(tr(F, 1) - tr(F, 1))


def test_generators_are_not_decomposable():
    F = get_field(SURROGATE)
    for e in (tr(F, 1, 2), tr(F, 1, 2, 3), tr(F, 1, 1, 2, 2, 1, 2)):
        assert not is_decomposable(e)


def test_trace_of_cube_free_relations():
    F = get_field(SURROGATE)
    # tr(X1 X2) + tr(X2 X1) differs from 2 tr(X1 X2) by nothing
    assert is_decomposable(tr(F, 1, 2) + tr(F, 2, 1) - tr(F, 1, 2).scale(2))
    # σ2(X1) = (tr(X1)^2 - tr(X1^2)) / 2 outside characteristic 2
    half = F.inv(F.from_int(2))
    assert is_decomposable(sig(F, 2, 1) + tr(F, 1, 1).scale(half))


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
def test_one_letter_generators(spec):
    F = get_field(spec)
    assert not is_decomposable(sig(F, 3, 1))
    assert not is_decomposable(sig(F, 2, 1))
    # tr(X^2) = tr(X)^2 - 2 σ2(X) is a square in characteristic 2
    assert is_decomposable(tr(F, 1, 1)) == (spec.characteristic == 2)


def test_mixed_multidegrees_rejected():
    F = get_field(SURROGATE)
    with pytest.raises(UsageError):
        decomposable_margin([tr(F, 1), tr(F, 2)])


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
def test_sigma2_identity(spec):
    assert check_sigma2_identity(Word((1,)), Word((2,)), spec=spec).status == PASS
    assert check_sigma2_identity(Word((1, 2)), Word((3,)), spec=spec).status == PASS


def test_sigma2_identity_control():
    rep = check_sigma2_identity(Word((1,)), Word((2,)), spec=SURROGATE, coefficient=2)
    assert rep.status == FAIL


@pytest.mark.parametrize("spec", MAIN_SPECS + [FieldSpec.small_char(5)], ids=spec_id)
def test_characteristic_split(spec):
    items = characteristic_split(spec)
    assert [it["status"] for it in items] == [PASS, PASS]
    assert items[0]["independent"] == (spec.characteristic == 3)


def test_split_relation_holds_in_char_three():
    # the relation does not need p != 3; recorded in the ledger
    items = characteristic_split(CHAR3)
    assert items[1]["decomposable"]


def test_minimality_pair_examples():
    F = get_field(SURROGATE)
    assert independent_mod_decomposables([tr(F, 1, 2, 3), tr(F, 1, 3, 2)])
    assert not independent_mod_decomposables([tr(F, 1, 2, 3), tr(F, 1, 3, 2), tr(F, 1, 2) * tr(F, 3)])


def test_multidegrees_up_to():
    mds = multidegrees_up_to(3, 2)
    assert len(mds) == 9
    assert (1, 1, 0) in mds and (0, 0, 0) not in mds


def test_sample_set_values_match_exact_evaluation():
    from trinv.matrices import Matrix

    F = get_field(SURROGATE)
    S = SampleSet(SURROGATE, 3, 3, 5, seed=7)
    e = tr(F, 1, 1, 2) * tr(F, 3) - sig(F, 2, 2, 3)
    vals = S.values(e)
    for s in range(5):
        mats = [Matrix(F, [[S.X[r, s, i, j] for j in range(3)] for i in range(3)]) for r in range(3)]
        assert vals[s] == e.evaluate(mats)


# frozen ranks ----------------------------------------------------------------------------------

def test_indecomposable_count_at_degree_six():
    # 48 indecomposable multidegree classes up to degree six, the size of Gi
    spans = GradedSpans(SampleSet(SURROGATE, 3, 3, 400, seed=11))
    total = sum(spans.full(m).rank - spans.decomposable(m).rank for m in multidegrees_up_to(3, 6))
    assert total == 48
    assert spans.full((2, 2, 2)).rank == 81


def test_generation_control_fails_at_222():
    rep = verify_generation(build_set("G1", SURROGATE), 6)
    assert rep.status == FAIL
    failing = [tuple(it["multidegree"]) for it in rep.failing_items()]
    assert (2, 2, 2) in failing and len(failing) == 10
    item = next(it for it in rep.items if it["multidegree"] == [2, 2, 2])
    assert (item["full_rank"], item["generated_rank"]) == (81, 80)
    assert rep.reproducer["item"] == "m=(0, 3, 3)"


def test_generation_small_bound(spec):
    rep = verify_generation(build_generators(spec), 4)
    assert rep.status == PASS


def test_minimality_fails_with_duplicate():
    gens = build_set("Gi", SURROGATE)
    F = get_field(SURROGATE)
    bad = gens.replace(4, tr(F, 1, 2) + tr(F, 1) * tr(F, 2))
    assert verify_minimality(bad).status == FAIL


def test_gi_generation_in_char_three_fails():
    # when p = 3 the squares pair is independent, so Gi misses an indecomposable at (2,2,2)
    rep = verify_generation(build_set("Gi", CHAR3), 6)
    assert rep.status == FAIL
    assert [2, 2, 2] in [it["multidegree"] for it in rep.failing_items()]


def test_rank_stability_across_seeds():
    a = verify_generation(build_set("G1", SURROGATE), 4, seed=1)
    b = verify_generation(build_set("G1", SURROGATE), 4, seed=2)
    assert [(i["full_rank"], i["generated_rank"]) for i in a.items] == \
        [(i["full_rank"], i["generated_rank"]) for i in b.items]
    assert np.all([i["status"] != "inconclusive" for i in a.items])


@pytest.mark.parametrize("spec", [SURROGATE, CHAR3], ids=spec_id)
def test_canonical_atoms_match_all_necklaces(spec):
    gens = build_set("Gi", spec)
    a = verify_generation(gens, 4, seed=1)
    b = verify_generation(gens, 4, seed=1, words="all")
    assert [(i["full_rank"], i["generated_rank"]) for i in a.items] == \
        [(i["full_rank"], i["generated_rank"]) for i in b.items]
