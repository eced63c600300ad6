"""Acceptance suite: one PASS/FAIL line per criterion.

Run directly (`python tests/test_acceptance.py`) or via pytest with `-s` to
see the lines.  Tolerances live in sfab.acceptance and are not relaxed here.
"""
import json
import sys

import pytest

from sfab import acceptance as acc

KEYS = [k for k, _, _ in acc.CRITERIA]


def test_pinned_tolerances():
    assert acc.ORTHO_TOL == 1e-8 and acc.TRIPLE_TOL == 1e-8
    assert acc.NORM_REL == 0.01 and acc.NEG_CONTROL == 1e-3
    assert len(KEYS) == 10


@pytest.mark.parametrize("key", KEYS)
def test_criterion(key, capsys):
    res = acc.run_criterion(key, "full")
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, json.dumps(res.detail, default=str)[:2000]


if __name__ == "__main__":
    results = acc.run_suite("full", echo=print)
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    sys.exit(0 if all(r.passed for r in results) else 1)
