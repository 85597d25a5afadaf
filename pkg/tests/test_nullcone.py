import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trinv.errors import UsageError
from trinv.fields import FieldSpec, get_field
from trinv.invariants import build_hsop
from trinv.matrices import Matrix, conjugate, jordan_j1, jordan_j2
from trinv.nullcone import (
    NOT_NILPOTENT,
    RANK_ONE,
    RANK_TWO,
    ZERO,
    classify_nilpotent,
    conjugate_to_jordan,
    jacobian_independence,
    lemmaI_completeness,
    nullcone_vanishing,
    planted_dependence,
    planted_dependence_control,
    random_invertible,
    verify_lemmaI_families,
    verify_lemmaII,
    verify_rank1_identity,
    verify_teranishi,
)
from trinv.report import PASS

from conftest import MAIN_SPECS, SURROGATE, spec_id


def test_classify_examples():
    F = get_field(SURROGATE)
    assert classify_nilpotent(Matrix.zeros(F, 3)) == ZERO
    assert classify_nilpotent(jordan_j1(F)) == RANK_ONE
    assert classify_nilpotent(jordan_j2(F)) == RANK_TWO
    assert classify_nilpotent(Matrix.identity(F, 3)) == NOT_NILPOTENT
    assert classify_nilpotent(jordan_j1(F).transpose()) == RANK_ONE
    with pytest.raises(UsageError):
        classify_nilpotent(Matrix.zeros(F, 4))


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.sampled_from(MAIN_SPECS), st.sampled_from([jordan_j1, jordan_j2]))
def test_conjugate_to_jordan_round_trip(seed, spec, jordan):
    F = get_field(spec)
    g = random_invertible(F, np.random.default_rng(seed))
    A = conjugate(g, jordan(F))
    T, J = conjugate_to_jordan(A)
    assert J == jordan(F)
    assert conjugate(T, J) == A
    assert classify_nilpotent(A) == classify_nilpotent(J)


def test_conjugate_to_jordan_rejects_non_nilpotent():
    F = get_field(SURROGATE)
    with pytest.raises(UsageError):
        conjugate_to_jordan(Matrix.identity(F, 3))
    with pytest.raises(UsageError):
        conjugate_to_jordan(Matrix.zeros(F, 3))


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
def test_symbolic_identities(spec):
    assert verify_teranishi(spec).status == PASS
    assert verify_rank1_identity(spec, trials=50).status == PASS
    assert verify_lemmaII(spec, trials=100).status == PASS
    assert verify_lemmaI_families(spec, completeness=()).status == PASS


def test_teranishi_items_are_symbolic():
    rep = verify_teranishi(SURROGATE)
    assert all(it["status"] == PASS for it in rep.items)
    assert any("control" in it["id"] for it in rep.items)


def _admissible_count(p):
    # independent count of g in GL3(GF(p)) with tr(J2 B) = tr(J2^2 B^2) = 0 for B = g J2 g^-1
    F = get_field(FieldSpec(p))
    J = jordan_j2(F)
    count = 0
    for entries in itertools.product(range(p), repeat=9):
        g = Matrix.from_ints(F, [entries[0:3], entries[3:6], entries[6:9]])
        if F.is_zero(g.det()):
            continue
        B = conjugate(g, J)
        if F.is_zero((J @ B).trace()) and F.is_zero((J @ J @ B @ B).trace()):
            count += 1
    return count


def test_lemmaI_completeness_gf2():
    item = lemmaI_completeness(2)
    assert item["status"] == PASS
    assert item["admissible"] == _admissible_count(2) == 40
    assert item["counts"] == {"family 1": 8, "family 2": 16, "family 3": 16, "unmatched": 0}


@pytest.mark.slow
def test_lemmaI_completeness_gf3():
    item = lemmaI_completeness(3)
    assert item["status"] == PASS
    assert item["counts"] == {"family 1": 216, "family 2": 648, "family 3": 648, "unmatched": 0}


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
def test_jacobian_ranks(spec):
    for target, size in (("R33", 19), ("R32", 10), ("R42", 17)):
        rep = jacobian_independence(build_hsop(target, None, spec), 3)
        assert rep.status == PASS
        assert max(rep.items[0]["ranks"]) == size


def test_planted_dependence_never_full_rank():
    rep = planted_dependence_control(SURROGATE, points=20)
    assert rep.status == PASS
    assert rep.items[0]["max_rank"] == 18
    assert len(planted_dependence(SURROGATE)) == 19


def test_nullcone_vanishing_small():
    rep = nullcone_vanishing(SURROGATE, trials=50, hunt=300)
    assert rep.status == PASS
    assert rep.parameters["hunt_violations"] == 0
    assert rep.parameters["verdict"] == "consistent"


def test_strict_upper_samples_are_nilpotent():
    F = get_field(SURROGATE)
    rng = np.random.default_rng(4)
    z = F.zero
    for _ in range(20):
        A = Matrix(F, [[z, F.random(rng), F.random(rng)], [z, z, F.random(rng)], [z, z, z]])
        assert classify_nilpotent(A) in (ZERO, RANK_ONE, RANK_TWO)
