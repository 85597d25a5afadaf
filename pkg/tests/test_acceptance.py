"""One test per acceptance criterion; the terminal summary prints a PASS/FAIL line for each."""

import functools

import pytest

import conftest
from conftest import CHAR2, CHAR3, MAIN_SPECS, SURROGATE
from trinv.cases import run_all_cases, run_case_script, shipped_scripts
from trinv.fields import FieldSpec
from trinv.invariants import build_generators, build_hsop, build_set, count_msog, transcendence_degree
from trinv.matrices import cayley_hamilton_residual, generic
from trinv.nullcone import (
    jacobian_independence,
    nullcone_vanishing,
    planted_dependence_control,
    verify_lemmaI_families,
    verify_lemmaII,
    verify_teranishi,
)
from trinv.report import PASS
from trinv.rewrite_suite import rewrite_suite
from trinv.spans import characteristic_split, verify_generation, verify_minimality

pytestmark = pytest.mark.acceptance


def criterion(number: int, text: str):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                conftest.ACCEPTANCE_RESULTS[number] = (False, text)
                raise
            conftest.ACCEPTANCE_RESULTS[number] = (True, text)
        return inner
    return wrap


@criterion(1, "generator cardinalities 48 / 58")
def test_criterion_01_cardinalities():
    for spec in MAIN_SPECS + [FieldSpec.rationals(), FieldSpec.small_char(5)]:
        assert len(build_generators(spec)) == (58 if spec.characteristic == 3 else 48)


@criterion(2, "count_msog table 3, 11, 48, 189, 607, 1635")
def test_criterion_02_counts():
    assert [count_msog(d) for d in range(1, 7)] == [3, 11, 48, 189, 607, 1635]


@criterion(3, "parameter systems of sizes 19 / 10 / 17 equal to (d-1)n^2+1")
def test_criterion_03_parameter_sizes():
    for spec in MAIN_SPECS:
        for target, n, d, size in (("R33", 3, 3, 19), ("R32", 3, 2, 10), ("R42", 4, 2, 17)):
            assert len(build_hsop(target, None, spec)) == size == transcendence_degree(n, d)


@pytest.mark.slow
@criterion(4, "generation: Gi bound 6 (surrogate), Gii bound 8 (GF(3^10)), G1 control fails at (2,2,2)")
def test_criterion_04_generation():
    rep = verify_generation(build_generators(SURROGATE), 6, seed=20240601)
    assert rep.status == PASS, rep.failing_items()
    assert len(rep.seeds) == 3
    rep = verify_generation(build_generators(CHAR3), 8, seed=20240601)
    assert rep.status == PASS, rep.failing_items()
    control = verify_generation(build_set("G1", SURROGATE), 6, seed=20240601)
    failing = [tuple(it["multidegree"]) for it in control.failing_items()]
    assert (2, 2, 2) in failing


@pytest.mark.slow
@criterion(5, "minimality of Gi (surrogate, GF(2^16)) and Gii (GF(3^10)); characteristic split")
def test_criterion_05_minimality():
    for spec in (SURROGATE, CHAR2, CHAR3):
        rep = verify_minimality(build_generators(spec), seed=20240601)
        assert rep.status == PASS, (spec, rep.failing_items())
        items = characteristic_split(spec, seed=20240601)
        assert items[0]["independent"] == (spec.characteristic == 3)
        if spec.characteristic != 3:
            assert items[1]["decomposable"]


@pytest.mark.slow
@criterion(6, "rewriting: exhaustive degree 8, 10^4 substitutions, identities and bridge")
def test_criterion_06_rewriting():
    for spec in MAIN_SPECS:
        rep = rewrite_suite(spec, bound=8, samples=10_000, seed=20240601)
        assert rep.status == PASS, (spec, rep.failing_items())
        by_id = {it["id"]: it for it in rep.items}
        assert by_id["exhaustive degree <= 8"]["words"] == sum(3 ** k for k in range(1, 9))
        assert by_id["strictly upper triangular representation"]["substitutions"] == 10_000


@criterion(7, "Cayley-Hamilton residual zero for generic 3x3 and 4x4 over QQ, F2, F3")
def test_criterion_07_cayley_hamilton():
    for spec in (FieldSpec.rationals(), FieldSpec(2), FieldSpec(3)):
        for n in (3, 4):
            assert cayley_hamilton_residual(generic(1, n, 1, spec)).is_zero()


@criterion(8, "nine case scripts, hypothesis residuals, symbolic identity checks")
def test_criterion_08_cases():
    want = {"(2,3)": "(alpha2*beta2 + alpha1 + beta1) / ((b3) * (beta1) * (beta2) * (c2))",
            "(3,2)b": "(alpha2*beta2 + alpha1 + beta1) / ((b2) * (beta1))"}
    for spec in MAIN_SPECS:
        rep = run_all_cases(spec)
        assert rep.status == PASS, (spec, rep.failing_items())
        assert len(shipped_scripts()) == 9
        got = {it["id"]: it["residual"] for s in shipped_scripts() for it in run_case_script(s, spec)
               if it["id"] in want}
        assert got == want
        assert verify_teranishi(spec).status == PASS
        assert verify_lemmaII(spec).status == PASS
        assert verify_lemmaI_families(spec).status == PASS


@criterion(9, "Jacobian ranks 19 / 10 / 17 in 10 points; planted control never full rank in 100")
def test_criterion_09_independence():
    for spec in MAIN_SPECS:
        for target, size in (("R33", 19), ("R32", 10), ("R42", 17)):
            rep = jacobian_independence(build_hsop(target, None, spec), 10, seed=20240601)
            assert rep.status == PASS and max(rep.items[0]["ranks"]) == size
        control = planted_dependence_control(spec, 100, seed=20240601)
        assert control.status == PASS
        assert control.items[0]["full_rank_points"] == 0


@pytest.mark.slow
@criterion(10, "nullcone vanishing on 10^3 strict upper triples and conjugates; hunt 10^4 with 0 violations")
def test_criterion_10_nullcone():
    for spec in MAIN_SPECS:
        rep = nullcone_vanishing(spec, trials=1000, hunt=10_000, seed=20240601)
        assert rep.status == PASS, (spec, rep.failing_items())
        assert rep.parameters["hunt_samples"] >= 10_000
        assert rep.parameters["hunt_violations"] == 0
        for label in ("strictly upper triangular", "random conjugates"):
            item = next(it for it in rep.items if it["id"] == label)
            assert item["samples"] == 1000 and item["nonzero_P"] == 0
