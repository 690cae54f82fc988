"""One test per acceptance criterion. Each prints its PASS/FAIL/SKIP line, and
the full list is repeated in the terminal summary."""

import pytest

from tdgroups import acceptance as A

from .conftest import ACCEPTANCE_LINES

_cache: dict[int, A.CriterionResult] = {}


def result(k: int) -> A.CriterionResult:
    if k not in _cache:
        r = A.CRITERIA[k]()
        _cache[k] = r
        ACCEPTANCE_LINES[k] = r.line()
        print(r.line())
    return _cache[k]


def test_criterion_1_socle_part():
    r = result(1)
    d = r.details
    assert d["socle_exact"] and d["literal_agree"] and d["undecided"] == 0
    assert d["enumerate"] == [(15, 1, 15)]
    # the one class found outside T: order 12 in the coset of phi
    assert [(o["order"], o["coset"], o["size"]) for o in d["outside_T"]] == [(12, 2, 326400)]


@pytest.mark.xfail(strict=True, reason="an order-12 class in the coset T.phi of Sp4(4):4 is also "
                                       "totally deranged; see test_finding.py")
def test_criterion_1_full_group():
    assert result(1).passed


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 7])
def test_criterion(k):
    r = result(k)
    assert r.passed is True, r.line()


def test_criterion_8_skipped():
    r = result(8)
    assert r.passed is None
    pytest.skip(r.summary)
