import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from trinv.errors import SingularMatrixError, UsageError
from trinv.fields import FieldSpec, get_field
from trinv.matrices import (
    Matrix,
    batch_det,
    batch_sigma,
    cayley_hamilton_residual,
    charpoly_coefficients,
    conjugate,
    generic,
    jordan_j1,
    jordan_j2,
    leibniz_det,
    sigma,
    toeplitz_l,
    word_product,
)

from conftest import MAIN_SPECS, spec_id

CH_SPECS = [FieldSpec.rationals(), FieldSpec(2), FieldSpec(3), FieldSpec.surrogate()]


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("spec", CH_SPECS, ids=spec_id)
def test_cayley_hamilton_generic(spec, n):
    assert cayley_hamilton_residual(generic(1, n, 1, spec)).is_zero()


@pytest.mark.parametrize("spec", [FieldSpec.rationals(), FieldSpec(2), FieldSpec(3)], ids=spec_id)
def test_sigma_matches_characteristic_polynomial(spec):
    X = generic(1, 3, 1, spec)
    coeffs = charpoly_coefficients(X)
    for k in range(1, 4):
        s = sigma(k, X)
        assert coeffs[k] == (s if k % 2 == 0 else -s)
    assert coeffs[0] == X.ring.one


@given(rows=st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4))
def test_det_matches_sympy(rows):
    F = get_field(FieldSpec.rationals())
    M = Matrix.from_ints(F, rows)
    assert M.det() == sympy.Matrix(rows).det()
    assert leibniz_det(M) == M.det()


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
@given(seed=st.integers(0, 2**31))
def test_sigma_conjugation_invariant(spec, seed):
    F = get_field(spec)
    rng = np.random.default_rng(seed)
    A = Matrix(F, F.vrandom(rng, (3, 3)).tolist())
    g = Matrix(F, F.vrandom(rng, (3, 3)).tolist())
    if F.is_zero(g.det()):
        return
    B = conjugate(g, A)
    assert [sigma(k, A) for k in (1, 2, 3)] == [sigma(k, B) for k in (1, 2, 3)]


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
@given(seed=st.integers(0, 2**31))
def test_stabiliser_of_j2(spec, seed):
    F = get_field(spec)
    rng = np.random.default_rng(seed)
    a = F.random_nonzero(rng)
    L = toeplitz_l(F, a, F.random(rng), F.random(rng))
    assert L @ jordan_j2(F) @ L.inverse() == jordan_j2(F)


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
def test_batch_kernels_match_scalar(spec):
    F = get_field(spec)
    rng = np.random.default_rng(11)
    A = F.vrandom(rng, (8, 3, 3))
    dets = batch_det(F, A)
    s2 = batch_sigma(F, A, 2)
    for i in range(8):
        M = Matrix(F, A[i].tolist())
        assert dets[i] == M.det()
        assert s2[i] == sigma(2, M)


def test_inverse_and_singular():
    F = get_field(FieldSpec.surrogate())
    M = Matrix.from_ints(F, [[2, 1, 0], [0, 1, 0], [1, 0, 1]])
    assert M @ M.inverse() == Matrix.identity(F, 3)
    with pytest.raises(SingularMatrixError):
        jordan_j2(F).inverse()


def test_jordan_shapes():
    F = get_field(FieldSpec.surrogate())
    J1, J2 = jordan_j1(F), jordan_j2(F)
    assert (J1 @ J1).is_zero() and J1.rank() == 1
    assert not (J2 @ J2).is_zero() and (J2 @ J2 @ J2).is_zero()
    assert (J1 @ J1.transpose()).trace() == F.one


def test_word_product_and_errors():
    F = get_field(FieldSpec.surrogate())
    J1, J2 = jordan_j1(F), jordan_j2(F)
    assert word_product((1, 2), [J1, J2]) == J1 @ J2
    assert word_product((2, 2), {2: J2}) == J2 @ J2
    with pytest.raises(UsageError):
        word_product((3,), [J1, J2])
    with pytest.raises(UsageError):
        word_product((), [J1])


def test_generic_matrices_have_disjoint_variables():
    spec = FieldSpec.surrogate()
    X1, X2 = generic(1, 3, 2, spec), generic(2, 3, 2, spec)
    v1 = set().union(*(e.variables() for r in X1.rows for e in r))
    v2 = set().union(*(e.variables() for r in X2.rows for e in r))
    assert len(v1) == len(v2) == 9 and not v1 & v2
