"""One test per acceptance criterion, each at its stated tolerance and time limit.

Every criterion maps to a named suite of :mod:`weylkit.suites`; the suite
carries the tolerances and the limit in seconds. A PASS/FAIL line per
criterion is printed and repeated in the terminal summary.
"""

import pytest

from weylkit.suites import ACCEPTANCE, SUITES, run_suite

from conftest import ACCEPTANCE_LINES

SEED = 42


@pytest.mark.parametrize("name", ACCEPTANCE, ids=lambda n: f"{SUITES[n].criterion:02d}-{n}")
def test_criterion(name):
    suite = SUITES[name]
    rep = run_suite(name, SEED)
    in_time = rep.wall_time < suite.limit
    ok = rep.passed and in_time
    line = (
        f"criterion {suite.criterion:2d} {'PASS' if ok else 'FAIL'} {name}: "
        f"{len(rep.checks)} checks, {len(rep.failures)} failed, "
        f"{rep.wall_time:.1f}s of {suite.limit:g}s ({suite.doc})"
    )
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert rep.passed, [c.record() for c in rep.failures]
    assert in_time, f"{name} took {rep.wall_time:.1f}s, limit {suite.limit}s"
