from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trinv.errors import ParameterError, UsageError
from trinv.fields import FieldSpec, get_field
from trinv.invariants import (
    InvariantExpr,
    ParamSet,
    build_generators,
    build_hsop,
    build_set,
    count_msog,
    evaluation_matrix,
    graded_family,
    sig,
    tr,
    transcendence_degree,
)
from trinv.matrices import Matrix, conjugate, jordan_j1, jordan_j2
from trinv.poly import matrix_var

from conftest import CHAR3, MAIN_SPECS, SURROGATE, spec_id


def random_matrix(F, rng, n=3):
    return Matrix(F, [[F.random(rng) for _ in range(n)] for _ in range(n)])


def random_invertible(F, rng, n=3):
    while True:
        g = random_matrix(F, rng, n)
        if not F.is_zero(g.det()):
            return g


# sizes --------------------------------------------------------------------------------------

@pytest.mark.parametrize("label,size", [("G1", 38), ("G2", 10), ("G3", 20), ("Gi", 48), ("Gii", 58)])
def test_named_set_sizes(label, size):
    assert len(build_set(label, SURROGATE)) == size


def test_main_set_depends_on_characteristic(spec):
    gens = build_generators(spec)
    assert len(gens) == (58 if spec.characteristic == 3 else 48)
    assert gens.label == ("Gii" if spec.characteristic == 3 else "Gi")


def test_generators_are_homogeneous_and_distinct(spec):
    gens = build_generators(spec)
    assert all(e.is_homogeneous(3) for e in gens)
    assert len({str(e) for e in gens}) == len(gens)


def test_count_msog_table():
    assert [count_msog(d) for d in range(1, 7)] == [3, 11, 48, 189, 607, 1635]


def test_count_msog_matches_letter_grouping():
    # a set for d letters is a union over letter subsets; sizes per subset are read off Gi
    gens = build_set("Gi", SURROGATE)
    by_support: dict[int, int] = {}
    for e in gens:
        k = len(gens.letters_used(e))
        by_support[k] = by_support.get(k, 0) + 1
    assert by_support == {1: 9, 2: 15, 3: 24}
    for d in (1, 2, 3):
        assert count_msog(d) == 3 * d + 5 * comb(d, 2) + 24 * comb(d, 3)


def test_restriction_to_one_letter():
    gens = build_set("Gi", SURROGATE)
    assert [str(e) for e in gens.restricted_to([1])] == ["tr(X1)", "sigma2(X1)", "sigma3(X1)"]


def test_count_msog_rejects_nonpositive():
    with pytest.raises(UsageError):
        count_msog(0)


@pytest.mark.parametrize("target,n,d,size", [("R33", 3, 3, 19), ("R32", 3, 2, 10), ("R42", 4, 2, 17)])
def test_parameter_system_sizes(target, n, d, size):
    P = build_hsop(target, None, SURROGATE)
    assert len(P) == size == transcendence_degree(n, d)
    assert P.n == n and P.d == d


@pytest.mark.parametrize("label,size", [("Q3", 23), ("Q4", 22), ("Q5", 20)])
def test_nullcone_set_sizes(label, size):
    assert len(build_set(label, SURROGATE)) == size


def test_unknown_labels():
    with pytest.raises(UsageError):
        build_set("G4", SURROGATE)
    with pytest.raises(UsageError):
        build_hsop("R34", None, SURROGATE)
    with pytest.raises(UsageError):
        transcendence_degree(3, 1)


# parameters -----------------------------------------------------------------------------------

def test_default_params_valid(spec):
    ParamSet.default(spec).validate(get_field(spec))


def test_all_ones_rejected_in_char_three():
    F = get_field(CHAR3)
    with pytest.raises(ParameterError):
        ParamSet().validate(F)
    with pytest.raises(ParameterError):
        build_hsop("R33", ParamSet(), CHAR3)


def test_zero_parameter_rejected():
    with pytest.raises(ParameterError):
        ParamSet(0, 1, 1, 1, 1).validate(get_field(SURROGATE))


def test_param_parse():
    assert ParamSet.parse("1,2,3,4,5").as_tuple() == (1, 2, 3, 4, 5)
    for bad in ("1,2", "a,b,c,d,e"):
        with pytest.raises(UsageError):
            ParamSet.parse(bad)


def test_params_enter_the_system():
    P = build_hsop("R33", ParamSet(1, 1, 1, 5, 1), SURROGATE)
    assert str(P.elements[14]) == "tr(X1^2 X3) - 5*tr(X1 X2^2)"


# evaluation ----------------------------------------------------------------------------------

def test_evaluate_examples():
    F = get_field(SURROGATE)
    J1, J2 = jordan_j1(F), jordan_j2(F)
    assert tr(F, 1, 2).evaluate([J1, J1.transpose()]) == F.one
    assert F.is_zero(sig(F, 2, 1).evaluate([J2]))
    assert F.is_zero(sig(F, 3, 1).evaluate([J2]))
    E = Matrix.identity(F, 3)
    assert tr(F, 1).evaluate([E]) == F.from_int(3)
    assert sig(F, 2, 1).evaluate([E]) == F.from_int(3)


def test_evaluate_errors():
    F = get_field(SURROGATE)
    with pytest.raises(UsageError):
        tr(F, 1, 2).evaluate([jordan_j1(F)])
    with pytest.raises(UsageError):
        tr(F, 1).evaluate([])
    with pytest.raises(UsageError):
        tr(F, 1).evaluate([jordan_j1(get_field(FieldSpec(5)))])


def test_evaluation_matrix_examples():
    F = get_field(SURROGATE)
    E = Matrix.identity(F, 3)
    assert evaluation_matrix([tr(F, 1)], [[E, E, E]]) == [[F.from_int(3)]]
    rng = np.random.default_rng(1)
    samples = [[random_matrix(F, rng) for _ in range(3)] for _ in range(4)]
    M = Matrix(F, evaluation_matrix([tr(F, 1, 2, 3), tr(F, 1, 3, 2)], samples))
    assert M.rank() == 2


def test_generators_vanish_on_strictly_upper(spec):
    F = get_field(spec)
    rng = np.random.default_rng(3)
    z = F.zero
    mats = [Matrix(F, [[z, F.random(rng), F.random(rng)], [z, z, F.random(rng)], [z, z, z]]) for _ in range(3)]
    assert all(F.is_zero(e.evaluate(mats)) for e in build_generators(spec))


@settings(max_examples=8)
@given(st.integers(0, 2**32 - 1), st.sampled_from(MAIN_SPECS))
def test_conjugation_invariance(seed, spec):
    F = get_field(spec)
    rng = np.random.default_rng(seed)
    mats = [random_matrix(F, rng) for _ in range(3)]
    g = random_invertible(F, rng)
    conj = [conjugate(g, A) for A in mats]
    for label in ("Gi", "Gii", "P", "Q3", "Q5"):
        for e in build_set(label, spec):
            assert e.evaluate(mats) == e.evaluate(conj), (label, str(e))


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
def test_to_poly_agrees_with_evaluate(spec):
    F = get_field(spec)
    rng = np.random.default_rng(5)
    mats = [random_matrix(F, rng) for _ in range(3)]
    point = {matrix_var(i + 1, j + 1, r + 1): mats[r].rows[i][j]
             for r in range(3) for i in range(3) for j in range(3)}
    for e in (tr(F, 1, 1, 2, 3), sig(F, 2, 1, 2) * tr(F, 3), build_hsop("R33", None, spec).elements[14]):
        assert e.to_poly(3, 3).evaluate(point) == e.evaluate(mats)


# expression algebra ---------------------------------------------------------------------------

def test_expression_arithmetic():
    F = get_field(SURROGATE)
    a, b = tr(F, 1), tr(F, 2, 1)
    assert (a + b) - b == a
    assert (a * b) == (b * a)
    assert (a - a).is_zero()
    assert tr(F, 2, 1) == tr(F, 1, 2)
    assert (a * b).multidegree(3) == (2, 1, 0)
    assert not (a + b).is_homogeneous(3)
    assert InvariantExpr.constant(F, 2) * a == a.scale(2)


# graded families ------------------------------------------------------------------------------

def test_graded_family_examples():
    assert len(graded_family((1, 0, 0))) == 1
    assert [str(e) for e in graded_family((2, 0, 0))] == ["tr(X1)*tr(X1)", "tr(X1^2)", "sigma2(X1)"]
    full = graded_family((2, 2, 2))
    dec = graded_family((2, 2, 2), min_factors=2)
    assert (len(full), len(dec)) == (127, 123)


def test_graded_family_from_generator_set():
    gens = build_set("Gi", SURROGATE)
    fam = graded_family((1, 1, 0), gens)
    assert [str(e) for e in fam] == ["tr(X1)*tr(X2)", "tr(X1 X2)"]


def test_graded_family_bound():
    with pytest.raises(UsageError):
        graded_family((3, 3, 3))
    with pytest.raises(UsageError):
        graded_family((1, 0, 0), bound=9)
