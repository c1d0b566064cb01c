from collections import defaultdict
from fractions import Fraction
import pytest
from hypothesis import given
from hypothesis import strategies as st

from etaq.partitions import (
    EnumerationTooLarge,
    PartitionStatsConfig,
    StatTable,
    build_stat_table,
    crank,
    crank_gf_moments,
    enumerate_spt,
    enumerate_stats,
    iter_partitions,
    partition_p,
    partitions_upto,
    rank,
    rank_gf_moments,
    spt_direct,
    spt_j,
    spt_series,
    symmetrized_moments,
)
from etaq.partitions import _lambert_moment

CUT = 26  # enumeration oracle range used in the fast tests


@pytest.fixture(scope="module")
def table():
    return build_stat_table(PartitionStatsConfig(200, 10, enum_cutoff=CUT))


# ---------------------------------------------------------------------------
# independent bivariate oracles: Laurent polynomials in z as dicts


def _mul_z(a, b, N):
    """Product of q-series whose coefficients are {z-power: count} dicts."""
    out = [defaultdict(int) for _ in range(N + 1)]
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j in range(N + 1 - i):
            bj = b[j]
            if not bj:
                continue
            for za, ca in ai.items():
                for zb, cb in bj.items():
                    out[i + j][za + zb] += ca * cb
    return [{k: v for k, v in d.items() if v} for d in out]


def _geom_inverse(zpow, r, N):
    """1 / (1 - z^zpow q^r) truncated at q^N."""
    out = [dict() for _ in range(N + 1)]
    k = 0
    while k * r <= N:
        out[k * r] = {zpow * k: 1}
        k += 1
    return out


def rank_counts_from_gf(N):
    """N(m, n) from sum_n q^(n^2) / ((zq;q)_n (z^-1 q;q)_n)."""
    total = [defaultdict(int) for _ in range(N + 1)]
    total[0][0] += 1
    k = 1
    while k * k <= N:
        term = [dict() for _ in range(N + 1)]
        term[k * k] = {0: 1}
        for i in range(1, k + 1):
            term = _mul_z(term, _geom_inverse(1, i, N), N)
            term = _mul_z(term, _geom_inverse(-1, i, N), N)
        for n in range(N + 1):
            for z, c in term[n].items():
                total[n][z] += c
        k += 1
    return total


def crank_counts_from_gf(N):
    """M(m, n) from prod (1 - q^n) / ((1 - z q^n)(1 - z^-1 q^n))."""
    series = [dict() for _ in range(N + 1)]
    series[0] = {0: 1}
    for r in range(1, N + 1):
        factor = [dict() for _ in range(N + 1)]
        factor[0] = {0: 1}
        factor[r] = {0: -1}
        series = _mul_z(series, factor, N)
        series = _mul_z(series, _geom_inverse(1, r, N), N)
        series = _mul_z(series, _geom_inverse(-1, r, N), N)
    return series


def spt_from_spec_gf(N):
    """sum_r q^r/(1-q^r)^2 prod_{m>r} 1/(1-q^m)."""
    total = [0] * (N + 1)
    for r in range(1, N + 1):
        term = [0] * (N + 1)
        for k in range(1, N // r + 1):
            term[k * r] = k  # q^r/(1-q^r)^2 = sum k q^(kr)
        for m in range(r + 1, N + 1):
            for i in range(m, N + 1):
                term[i] += term[i - m]
        for i in range(N + 1):
            total[i] += term[i]
    return total


# ---------------------------------------------------------------------------


def test_partition_p_examples():
    assert partition_p(0) == 1
    assert partition_p(4) == 5
    assert partition_p(-3) == 0
    assert partition_p(Fraction(7, 2)) == 0
    assert partition_p(Fraction(8, 2)) == 5
    assert partition_p(100) == 190569292


def test_partition_p_matches_enumeration():
    for n in range(CUT + 1):
        assert partition_p(n) == sum(1 for _ in iter_partitions(n))


def test_rank_counts_at_4():
    stats = enumerate_stats(4)
    ranks = {m: v[0] for m, v in stats.items() if v[0]}
    assert ranks == {-3: 1, -1: 1, 0: 1, 1: 1, 3: 1}
    assert sum(v[1] for v in stats.values()) == 5


def test_rank_and_crank_of_single_partitions():
    assert rank([1, 1, 2]) == -1
    assert crank([4]) == 4
    assert crank([1, 1, 2]) == -2
    assert crank([1, 3, 3]) == 1


def test_enumeration_cutoff():
    with pytest.raises(EnumerationTooLarge):
        enumerate_stats(30, cutoff=20)
    with pytest.raises(EnumerationTooLarge):
        enumerate_spt(30, cutoff=20)


@pytest.mark.parametrize("n", range(2, CUT + 1))
def test_enumeration_symmetry_and_totals(n):
    stats = enumerate_stats(n)
    assert sum(v[0] for v in stats.values()) == partition_p(n)
    assert sum(v[1] for v in stats.values()) == partition_p(n)
    for m, (N, M) in stats.items():
        assert stats.get(-m, (0, 0)) == (N, M)


def test_enumeration_matches_bivariate_gfs():
    N = 20
    rk, cr = rank_counts_from_gf(N), crank_counts_from_gf(N)
    for n in range(N + 1):
        stats = enumerate_stats(n)
        assert {m: v[0] for m, v in stats.items() if v[0]} == rk[n]
        assert {m: v[1] for m, v in stats.items() if v[1]} == cr[n]  # includes the n = 1 convention


def test_gf_moments_match_enumeration(table):
    cfg = PartitionStatsConfig(CUT, 10, enum_cutoff=CUT)
    cr, rk = crank_gf_moments(cfg), rank_gf_moments(cfg)
    for n in range(CUT + 1):
        stats = enumerate_stats(n)
        for j in range(11):
            assert rk.moment(j, n) == sum(m**j * v[0] for m, v in stats.items())
            assert cr.moment(j, n) == sum(m**j * v[1] for m, v in stats.items())


def test_odd_moments_vanish():
    cfg = PartitionStatsConfig(60)
    for ms in (crank_gf_moments(cfg), rank_gf_moments(cfg)):
        for j in (1, 3, 5, 7, 9):
            assert not any(ms.moments[j])
        assert ms.scaled(4, 10) == Fraction(ms.moment(4, 10), 24)


def test_crank_lambert_oracle():
    """Crank moments from the Lambert-series form sum_m M(m,n) q^n = P sum_r (-1)^(r+1) q^(r(r-1)/2 + |m| r)(1 - q^r)."""
    from etaq.qseries import convolve

    N = 300
    p = partitions_upto(N)
    cr = crank_gf_moments(PartitionStatsConfig(N))
    for j in (2, 4, 6, 8, 10):
        assert list(cr.moments[j]) == convolve(p, _lambert_moment(N, j, 1), N + 1)


def test_n2_spt_identity(table):
    for n in range(201):
        assert table.get("N2", n) == 2 * n * table.get("p", n) - 2 * table.get("spt", n)


def test_spt_examples_and_oracles(table):
    assert spt_direct(4) == 10
    assert spt_direct(1) == 1
    oracle = spt_from_spec_gf(200)
    assert spt_series(200) == oracle
    assert [enumerate_spt(n) for n in range(1, CUT + 1)] == oracle[1 : CUT + 1]
    assert spt_direct(150, enum_cutoff=CUT) == oracle[150]


def test_symmetrized_moment_examples(table):
    for n in range(201):
        assert table.get("mu2", n) - table.get("eta2", n) == table.get("spt", n)
        assert spt_j(table, 1, n) == table.get("spt", n)
    for j in range(1, 6):
        assert table.get(f"eta{2 * j}", 0) == 0
    stats = enumerate_stats(4)
    assert table.get("mu4", 4) == sum(_gen_binom(m + 1, 4) * v[1] for m, v in stats.items())


def _gen_binom(x, k):
    """binom(x, k) for any integer x (zero when 0 <= x < k)."""
    num = 1
    for i in range(k):
        num *= x - i
    den = 1
    for i in range(1, k + 1):
        den *= i
    return num // den


@pytest.mark.parametrize("n", [2, 5, 9, 14, 20, 26])
def test_symmetrized_moments_match_enumeration(table, n):
    stats = enumerate_stats(n)
    for j in range(1, 6):
        mu = sum(_gen_binom(m + j - 1, 2 * j) * v[1] for m, v in stats.items())
        eta = sum(_gen_binom(m + j - 1, 2 * j) * v[0] for m, v in stats.items())
        assert table.get(f"mu{2 * j}", n) == mu
        assert table.get(f"eta{2 * j}", n) == eta


def test_sharpness_values():
    t = build_stat_table(PartitionStatsConfig(124, 10, enum_cutoff=20))
    assert spt_j(t, 3, 124) % 5 == 1
    assert spt_j(t, 4, 96) % 7 == 4


def test_stat_table_csv_and_roundtrip(table):
    csv = table.to_csv().splitlines()
    header = csv[0].split(",")
    assert header[:3] == ["n", "p", "spt"]
    assert header[-5:] == ["spt1", "spt2", "spt3", "spt4", "spt5"]
    row4 = dict(zip(header, csv[5].split(",")))
    assert row4["p"] == "5" and row4["spt"] == "10"
    row1 = dict(zip(header, csv[2].split(",")))
    assert row1["M2"] == "2"  # GF convention: M(+-1, 1) = 1, M(0, 1) = -1
    assert StatTable.from_dict(table.to_dict()) == table


def test_config_validation():
    with pytest.raises(ValueError):
        PartitionStatsConfig(10, 3)
    with pytest.raises(ValueError):
        PartitionStatsConfig(10, 10, enum_cutoff=11)
    assert PartitionStatsConfig(500).enum_cutoff == 70


@given(st.integers(0, 10), st.integers(1, 5))
def test_symmetrized_moments_integral(seed, j):
    cfg = PartitionStatsConfig(40 + seed)
    vals = symmetrized_moments(crank_gf_moments(cfg), j)
    assert all(isinstance(v, int) for v in vals)
