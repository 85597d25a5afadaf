from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from trinv.fields import FieldSpec, get_field
from trinv.linalg import Echelon, exact_rank, field_matmul, nullspace, row_reduce

from conftest import MAIN_SPECS, spec_id

small = st.integers(-3, 3)


def sympy_rank(rows, p):
    dom = QQ if p == 0 else GF(p)
    return DomainMatrix([[dom(int(x)) for x in r] for r in rows], (len(rows), len(rows[0])), dom).rank()


@pytest.mark.parametrize("p", [0, 2, 3, 5, 2**31 - 1])
@given(rows=st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=7))
def test_rank_matches_sympy(p, rows):
    spec = FieldSpec.rationals() if p == 0 else FieldSpec(p)
    F = get_field(spec)
    elems = [[F.from_int(x) for x in r] for r in rows]
    assert exact_rank(elems, F) == sympy_rank(rows, p)


def test_rank_of_large_low_rank_matrix():
    F = get_field(FieldSpec.surrogate())
    rng = np.random.default_rng(1)
    A, B = F.vrandom(rng, (40, 7)), F.vrandom(rng, (7, 60))
    assert exact_rank(field_matmul(A, B, F), F) == 7


def test_bareiss_rationals():
    F = get_field(FieldSpec.rationals())
    rows = [[Fraction(1, 2), 1, 3], [1, 2, 6], [0, 1, 1]]
    assert exact_rank([[Fraction(x) for x in r] for r in rows], F) == 2


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
def test_echelon_incremental_rank(spec):
    F = get_field(spec)
    rng = np.random.default_rng(3)
    V = F.vrandom(rng, (5, 30))
    combo = F.vadd(V[0], F.vmul(V[1], F.vconst(F.from_int(7), (30,))))
    E = Echelon(F, 30)
    assert E.extend(V[:3]) == 3
    assert E.contains(combo)
    assert E.greedy_independent(np.vstack([combo[None], V[3:]])) == [1, 2]
    assert E.rank == 3
    E2 = E.copy()
    E2.extend(V[3:])
    assert (E.rank, E2.rank) == (3, 5)


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
def test_nullspace_and_row_reduce(spec):
    F = get_field(spec)
    rng = np.random.default_rng(5)
    A = F.vrandom(rng, (3, 6))
    for v in nullspace(A.tolist(), F):
        v = F.asarray(v)
        assert F.vis_zero(field_matmul(A, v[:, None], F)).all()
    assert len(nullspace(A.tolist(), F)) == 6 - exact_rank(A, F)
    assert len(row_reduce(A, F)) == 3
