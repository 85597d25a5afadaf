import os

import pytest
from hypothesis import HealthCheck, settings

from trinv.fields import FieldSpec

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SURROGATE = FieldSpec.surrogate()
CHAR2 = FieldSpec.small_char(2)
CHAR3 = FieldSpec.small_char(3)
RATIONALS = FieldSpec.rationals()

MAIN_SPECS = [SURROGATE, CHAR2, CHAR3]
ALL_SPECS = MAIN_SPECS + [RATIONALS, FieldSpec.small_char(5), FieldSpec(2), FieldSpec(3)]


def spec_id(spec):
    return spec.describe().split(" ")[0]


@pytest.fixture(params=MAIN_SPECS, ids=spec_id)
def spec(request):
    return request.param


@pytest.fixture(params=ALL_SPECS, ids=spec_id)
def any_spec(request):
    return request.param


ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, text = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {text}")
