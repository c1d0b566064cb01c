import json

import pytest

from etaq import verify
from etaq.modforms import SpaceLabel, g_series
from etaq.verify import (
    CheckGroup,
    CongruenceReport,
    SuiteSpec,
    g_coefficients,
    mode_agreement,
    run_suite,
    suite_ak_cong,
    suite_bd_equality,
    suite_crank,
    suite_h_divisibility,
    suite_identities,
    suite_ramanujan,
    suite_rank,
    suite_spt_main,
    suite_tech,
    suite_tech_three,
    suite_wy,
    tech_grid,
)
from etaq.identities import identity_data
from etaq.partitions import PartitionStatsConfig, build_stat_table


@pytest.fixture(scope="module")
def table():
    return build_stat_table(PartitionStatsConfig(600, 10))


def test_check_group():
    g = CheckGroup({"x": 1})
    assert g.check(3, 10, 3, 7)
    assert g.check(3, 10, 10, None)
    assert g.check(3, 10, 4, 1)  # vacuous
    assert not g.check(4, 10, 4, 7)
    assert g.checked == 4 and g.violations == [{"n": 4, "lhs": "10", "rhs": "4", "modulus": "7"}]


def test_spec_validation():
    with pytest.raises(ValueError):
        SuiteSpec("ak", primes=(9,))
    with pytest.raises(ValueError):
        SuiteSpec("ak", mode="approx")
    with pytest.raises(ValueError):
        SuiteSpec("ak", m_values=(-1,))


def test_g_coefficients_exact_and_mod():
    sp = SpaceLabel(6, 1)
    g = g_series(sp, 24 * 200)
    ns = [-1, 23, 24 * 30 - 1, 24 * 199 - 1]
    exact = g_coefficients({sp: ns}, {})[sp]
    assert exact == {n: g.coeff(n) for n in ns}
    mod = g_coefficients({sp: ns}, {sp: 125})[sp]
    assert mod == {n: g.coeff(n) % 125 for n in ns}


def test_ramanujan(table):
    rep = suite_ramanujan(SuiteSpec("ramanujan", (5, 7, 11), (1, 2), n_max=600))
    assert rep.passed and rep.checked > 0


def test_ramanujan_detects_wrong_exponent(monkeypatch):
    monkeypatch.setattr(verify, "ramanujan_exponent", lambda ell, m: m + 1)
    rep = suite_ramanujan(SuiteSpec("ramanujan", (5,), (1,), n_max=600))
    assert not rep.passed


@pytest.mark.parametrize("ell,ms", [(5, (1,)), (7, (1,)), (3, (1,))])
def test_ak_small(ell, ms):
    rep = suite_ak_cong(SuiteSpec("ak", (ell,), ms, n_max=120))
    assert rep.passed, rep.summary()
    assert rep.checked > 0


def test_bd_small():
    rep = suite_bd_equality(SuiteSpec("bd", (5, 7), (1,), n_max=200))
    assert rep.passed and rep.checked > 0


def test_wy_small_with_sharpness():
    rep = suite_wy(SuiteSpec("wy", (5,), (1,), n_max=400, odd_n_max=200, sharpness=True))
    assert rep.passed
    (w,) = rep.sharpness
    assert w["holds"] and int(w["modulus"]) == 29**6


def test_tech_one_cell():
    cells = [c for c in tech_grid(primes=(5,), ms=(1,)) if c[0] == SpaceLabel(4, 1)][:1]
    rep = suite_tech(SuiteSpec("tech", (5,), (1,), d_samples=((SpaceLabel(4, 1), 1),)), cells=cells)
    assert rep.passed and rep.checked > 0


def test_tech_grid_skips_square_multiples():
    cells = tech_grid()
    assert cells
    for sp, D, ell, m in cells:
        assert D % (ell * ell)


def test_tech_three():
    rep = suite_tech_three(SuiteSpec("tech", (3,), (1,)))
    assert rep.passed and rep.checked > 0


def test_table_suites(table):
    for fn in (suite_crank, suite_rank, suite_spt_main):
        rep = fn(SuiteSpec(fn.__name__, (5, 7), (1,), n_max=600), table)
        assert rep.passed, rep.summary()
        assert rep.checked > 0


def test_h_and_identity_suites(table):
    data = identity_data(600, table)
    assert suite_h_divisibility(SuiteSpec("hdiv", (5, 7, 11), (1,), n_max=600), data).passed
    rep = suite_identities(SuiteSpec("identities", (5, 7), (1,), n_max=600, plain_n_max=100), data)
    # SPT2_shifted as transcribed is the only failing group
    bad = {g.params["id"] for g in rep.groups if g.violations}
    assert bad == {"SPT2_shifted"}


def test_report_schema():
    rep = suite_ramanujan(SuiteSpec("ramanujan", (5,), (1,), n_max=100))
    doc = json.loads(rep.to_json())
    assert {"suite", "params", "counts", "violations", "groups", "sharpness", "pass"} <= set(doc)
    assert doc["pass"] is True and doc["violations"] == []


def test_merge():
    a = CongruenceReport("x")
    a.group(i=1).check(1, 1, 2, None)
    b = CongruenceReport("x")
    b.group(i=2).check(1, 1, 1, None)
    a.merge(b)
    assert a.checked == 2 and a.n_violations == 1 and not a.passed


def test_deterministic():
    spec = SuiteSpec("ak", (5,), (1,), n_max=80)
    assert run_suite(spec).to_dict() == run_suite(spec).to_dict()


def test_jobs_match_serial():
    spec = SuiteSpec("ramanujan", (5, 7), (1,), n_max=300)
    par = SuiteSpec("ramanujan", (5, 7), (1,), n_max=300, jobs=2)
    a, b = run_suite(spec).to_dict(), run_suite(par).to_dict()
    a.pop("params"), b.pop("params")
    assert a == b


def test_mode_agreement():
    n, bad = mode_agreement(SuiteSpec("ak", (5,), (1,), n_max=100), fraction=0.2)
    assert n > 30 and bad == []
