"""Acceptance criteria, one test each.

Every criterion is exact (finite or symbolic computation), so the only
tolerances are the time limits below.  Each test prints a PASS/FAIL line.
"""

import time

import pytest

from epiworks import acceptance

# seconds; None means no limit was set for that criterion
TIME_LIMITS = {1: 20, 2: 10, 3: 15, 4: 10, 5: 2, 6: 2, 7: 10, 8: 10, 9: 5, 10: None}


@pytest.mark.parametrize("cid", sorted(TIME_LIMITS))
def test_criterion(cid, capsys):
    start = time.perf_counter()
    result = acceptance.CRITERIA[cid - 1]()
    elapsed = time.perf_counter() - start
    limit = TIME_LIMITS[cid]
    in_time = limit is None or elapsed < limit
    ok = result["passed"] and in_time
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        budget = "" if limit is None else f" (limit {limit}s)"
        print(f"\n{status} criterion {cid}: {result['title']}: {result['detail']} [{elapsed:.2f}s{budget}]")
    assert result["id"] == cid
    assert result["passed"], result["detail"]
    assert in_time, f"took {elapsed:.2f}s, limit {limit}s"
