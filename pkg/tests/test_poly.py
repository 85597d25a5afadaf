import numpy as np
import pytest
from hypothesis import given, strategies as st

from trinv.errors import UsageError
from trinv.fields import FieldSpec, get_field
from trinv.poly import MultiPoly, PolyRing, matrix_ring, parse_poly

from conftest import MAIN_SPECS, spec_id

NAMES = ("x", "y", "z")


def ring_for(spec):
    return PolyRing(get_field(spec), NAMES)


def poly_strategy(R):
    F = R.field
    term = st.tuples(st.tuples(*[st.integers(0, 3)] * len(NAMES)), st.integers(-5, 5))
    return st.lists(term, max_size=5).map(
        lambda ts: MultiPoly(R, {e: F.from_int(c) for e, c in dict(ts).items()}))


def point_for(R, seed):
    F = R.field
    rng = np.random.default_rng(seed)
    return {n: F.random(rng) for n in R.names}


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
@given(data=st.data())
def test_ring_laws_and_evaluation_homomorphism(spec, data):
    R = ring_for(spec)
    F = R.field
    a, b, c = (data.draw(poly_strategy(R)) for _ in range(3))
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    pt = point_for(R, data.draw(st.integers(0, 2**31)))
    assert (a * b).evaluate(pt) == F.mul(a.evaluate(pt), b.evaluate(pt))
    assert (a + b).evaluate(pt) == F.add(a.evaluate(pt), b.evaluate(pt))


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
@given(data=st.data())
def test_exact_division_roundtrip(spec, data):
    R = ring_for(spec)
    a, b = data.draw(poly_strategy(R)), data.draw(poly_strategy(R))
    if b.is_zero():
        return
    q = (a * b).divide_exact(b)
    assert q == a


@pytest.mark.parametrize("spec", MAIN_SPECS, ids=spec_id)
@given(data=st.data())
def test_batch_evaluation_matches_pointwise(spec, data):
    R = ring_for(spec)
    F = R.field
    a = data.draw(poly_strategy(R))
    rng = np.random.default_rng(data.draw(st.integers(0, 1000)))
    pts = {n: F.vrandom(rng, (6,)) for n in NAMES}
    batch = a.evaluate_batch(pts, (6,))
    for i in range(6):
        assert batch[i] == a.evaluate({n: pts[n][i] for n in NAMES})


def test_divide_exact_reports_remainder():
    R = ring_for(FieldSpec.surrogate())
    x, y = R.var("x"), R.var("y")
    assert (x * x + y).divide_exact(x) is None
    assert (x * x * y - x * y).divide_exact(x - R.one) == x * y


def test_derivative_reduces_multipliers_in_characteristic():
    R = ring_for(FieldSpec.small_char(3))
    x = R.var("x")
    assert (x**3).diff("x").is_zero()
    assert (x**4).diff("x") == x**3


def test_substitution_and_parse():
    R = ring_for(FieldSpec.surrogate())
    p = parse_poly("x^2*y - 3*z + 1", R)
    x, y, z = R.vars("x", "y", "z")
    assert p == x * x * y - z.scale(R.field.from_int(3)) + R.one
    assert p.subs({"y": z + R.one}) == x * x * (z + R.one) - z.scale(R.field.from_int(3)) + R.one
    with pytest.raises(UsageError):
        parse_poly("w + 1", R)


def test_matrix_ring_is_shared():
    s = FieldSpec.surrogate()
    assert matrix_ring(s, 3, 2) is matrix_ring(s, 3, 2, ())
    R = matrix_ring(s, 3, 2)
    assert R.nvars == 18
