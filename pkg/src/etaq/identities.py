"""Exact identities between partition statistics, a_{k,1}, h and p.

Every identity is stored once, as data, in :data:`CONSTANTS`: for each factor
(a coefficient of g_{k,1}, p, N_2, spt or h_{l^2m}) a polynomial in a named
variable.  A coefficient is either a rational number or a pair ``(c, e)``
standing for ``c * l^(e*m)``.

Plain identities are evaluated at a partition argument n, with a_k meaning
a_{k,1}(24n - 1).  Shifted identities fix (l, m) and are evaluated at n with
(-n|l) = 1 and l^(2m) n = 24N - 1; then a_k means a_{k,1}(l^(2m) n), every
statistic is taken at N, and h_{l^2m}(n) = h(l^(2m) n) / l^m.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction as F
from functools import lru_cache

from .arith import is_prime, kronecker
from .modforms import SpaceLabel, g_series
from .partitions import PartitionStatsConfig, StatTable, build_stat_table
from .qseries import PrecisionExceeded

__all__ = [
    "CONSTANTS",
    "PLAIN_IDS",
    "SHIFTED_IDS",
    "DivisibilityFailure",
    "HSeries",
    "IdentityData",
    "IdentityReport",
    "h_series",
    "h_ell2m",
    "a_table",
    "identity_data",
    "evaluate",
    "check_identity",
    "triangle_residual",
    "check_triangle",
]


class DivisibilityFailure(ArithmeticError):
    """l^m does not divide h(l^(2m) n)."""


# var: the polynomial variable; lhs: the statistic on the left
CONSTANTS: dict[str, dict] = {
    "M4": {
        "lhs": "M4",
        "var": "n",
        "a4": [F(1, 20)],
        "p": [F(-1, 20), 2, -12],
    },
    "M6": {
        "lhs": "M6",
        "var": "n",
        "a6": [F(-11, 378)],
        "a4": [F(1, 14), F(-3, 14)],
        "p": [F(-8, 189), F(11, 6), -20, 40],
    },
    "N4": {
        "lhs": "N4",
        "var": "n",
        "a4": [F(2, 15)],
        "p": [F(-2, 15), 4, -36],
        "N2": [1, -12],
    },
    "N2": {
        "lhs": "N2",
        "var": "n",
        "p": [0, 2],
        "spt": [-2],
    },
    "SPT4": {
        "lhs": "spt4",
        "var": "n",
        "a8": [F(-67, 191600640)],
        "a6": [F(-19, 3991680), F(-43, 2993760)],
        "a4": [F(-431, 8709120), F(-73, 181440), F(-23, 60480)],
        "N2": [0, F(1, 140), F(1, 35), F(3, 140)],
        "p": [F(317, 5806080), F(-1271, 544320), F(223, 60480), F(121, 1260), F(59, 630)],
    },
    "SPT5": {
        "lhs": "spt5",
        "var": "n",
        "a10": [F(551, 93405312000)],
        "a8": [F(4043, 43110144000), F(2831, 14370048000)],
        "a6": [F(3281, 3736212480), F(19, 4717440), F(151, 77837760)],
        "a4": [F(355, 43110144), F(485, 6386688), F(85, 798336), F(71, 1995840)],
        "N2": [0, F(-1, 840), F(-3, 560), F(-1, 168), F(-1, 560)],
        "p": [F(-2407, 261273600), F(751, 1935360), F(-61, 155520), F(-349, 20160), F(-8, 315), F(-107, 12600)],
    },
    "N2_shifted": {
        "lhs": "N2",
        "var": "n",
        "p": [F(1, 12), (F(1, 4), 2)],
        "hl": [(F(1, 6), 1)],
    },
    "SPT2_shifted": {
        "lhs": "spt2",
        "var": "n",
        "a4": [F(-1, 288)],
        "hl": [(F(1, 288), 1), (F(1, 288), 3)],
        "p": [F(-1, 90), (F(1, 288), 2), (F(1, 144), 4)],
    },
    "SPT3_shifted": {
        "lhs": "spt3",
        "var": "n",
        "a4": [F(1, 2304), (F(1, 11520), 2)],
        "a6": [F(1, 38880)],
        "hl": [(F(-1, 2560), 1), (F(-1, 2304), 3), (F(-1, 23040), 5)],
        "p": [0, (F(-1, 2560), 2), (F(-1, 1152), 4), (F(-13, 124416), 6)],
    },
    "SPT4_shifted": {
        "lhs": "spt4",
        "var": "n",
        "a8": [F(-67, 191600640)],
        "a6": [F(-1, 186624), (F(-43, 71850240), 2)],
        "a4": [F(-37, 552960), (F(-1, 55296), 2), (F(-23, 34836480), 4)],
        "hl": [(F(5, 86016), 1), (F(37, 552960), 3), (F(1, 110592), 5), (F(1, 3870720), 7)],
        "p": [0, (F(5, 86016), 2), (F(37, 276480), 4), (F(65, 2985984), 6), (F(1, 1492992), 8)],
    },
    "MU6_shifted": {
        "lhs": "mu6",
        "var": "L+1",
        "a6": [F(-11, 272160)],
        "a4": [F(-1, 4032), F(-1, 80640)],
        "p": [F(157, 544320), F(-1, 103680), F(1, 10368), F(1, 248832)],
    },
}

PLAIN_IDS = ("M4", "M6", "N4", "N2", "SPT4", "SPT5")
SHIFTED_IDS = ("N2_shifted", "SPT2_shifted", "SPT3_shifted", "SPT4_shifted", "MU6_shifted")

_A_WEIGHTS = (4, 6, 8, 10)


# ---------------------------------------------------------------------------
# h
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HSeries:
    """h(24N - 1) for N = 0..N_max, with h(-1) = 1."""

    values: tuple[int, ...]

    @property
    def precision(self) -> int:
        return 24 * len(self.values) - 1

    def __call__(self, n: int) -> int:
        if n % 24 != 23:
            return 0
        if n >= self.precision:
            raise PrecisionExceeded(f"h({n}) requested, known below {self.precision}")
        if n < -1:
            return 0
        return self.values[(n + 1) // 24]


def h_series(table: StatTable) -> HSeries:
    """h from spt and p: h(-1) = 1, h(24N - 1) = -(12 spt(N) + (24N - 1) p(N))."""
    p = table.columns["p"]
    spt = table.columns["spt"]
    vals = [1] + [-(12 * spt[N] + (24 * N - 1) * p[N]) for N in range(1, table.n_max + 1)]
    return HSeries(tuple(vals))


def h_ell2m(hs: HSeries, ell: int, m: int, n: int) -> int:
    """h_{l^2m}(n) = h(l^(2m) n) / l^m, which must be an integer."""
    if ell < 5 or not is_prime(ell):
        raise ValueError(f"ell={ell} must be a prime >= 5")
    if m < 1:
        raise ValueError("m must be >= 1")
    if kronecker(-n, ell) != 1:
        raise ValueError(f"(-{n}|{ell}) != 1")
    value = hs(ell ** (2 * m) * n)
    q, r = divmod(value, ell**m)
    if r:
        raise DivisibilityFailure(f"{ell}^{m} does not divide h({ell ** (2 * m) * n}) = {value}")
    return q


# ---------------------------------------------------------------------------
# data bundle
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def a_table(k: int, N_max: int) -> tuple[int, ...]:
    """a_{k,1}(24N - 1) for N = 0..N_max."""
    g = g_series(SpaceLabel(k, 1), 24 * N_max + 23)
    return tuple(g.int_coeff(24 * N - 1) for N in range(N_max + 1))


@dataclass
class IdentityData:
    table: StatTable
    hs: HSeries
    a: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def n_max(self) -> int:
        return self.table.n_max


def identity_data(N_max: int, table: StatTable | None = None) -> IdentityData:
    if table is None:
        table = build_stat_table(PartitionStatsConfig(N_max))
    elif table.n_max < N_max:
        raise PrecisionExceeded(f"table reaches {table.n_max}, need {N_max}")
    return IdentityData(table, h_series(table), {k: a_table(k, N_max) for k in _A_WEIGHTS})


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _poly(coeffs: list, x, ell: int, m: int) -> F:
    total = F(0)
    xp = 1
    for c in coeffs:
        if isinstance(c, tuple):
            c = F(c[0]) * F(ell) ** (c[1] * m)
        if c:
            total += c * xp
        xp *= x
    return total


def evaluate(ident: str, data: IdentityData, n: int, ell: int | None = None, m: int | None = None) -> tuple[F, F]:
    """(left side, right side) of an identity, exactly."""
    spec = CONSTANTS[ident]
    shifted = ident in SHIFTED_IDS
    if shifted:
        if ell is None or m is None:
            raise ValueError(f"{ident} needs ell and m")
        L = ell ** (2 * m) * n
        if (L + 1) % 24:
            raise ValueError(f"{ell}^{2 * m}*{n} + 1 is not divisible by 24")
        N = (L + 1) // 24
    else:
        ell, m, N, L = 0, 0, n, 24 * n - 1
    if N > data.n_max or N < 0:
        raise PrecisionExceeded(f"argument {N} outside table range 0..{data.n_max}")
    var = {"n": n, "L": L, "L+1": L + 1}[spec["var"]]
    factors = {
        "p": data.table.get("p", N),
        "spt": data.table.get("spt", N),
        "N2": data.table.get("N2", N),
    }
    for k in _A_WEIGHTS:
        factors[f"a{k}"] = data.a[k][N]
    rhs = F(0)
    for name, coeffs in spec.items():
        if name in ("lhs", "var"):
            continue
        if name == "hl":
            value = h_ell2m(data.hs, ell, m, n)
        else:
            value = factors[name]
        rhs += _poly(coeffs, var, ell, m) * value
    lhs = F(data.table.get(spec["lhs"], N))
    return lhs, rhs


def qualifying_shifted(ell: int, m: int, arg_max: int) -> list[int]:
    """n with (-n|l) = 1 and (l^(2m) n + 1)/24 an integer in 1..arg_max."""
    L2 = ell ** (2 * m)
    out = []
    n = 23
    while (L2 * n + 1) // 24 <= arg_max:
        if kronecker(-n, ell) == 1:
            out.append(n)
        n += 24
    return out


@dataclass
class IdentityReport:
    ident: str
    lo: int
    hi: int
    checked: int = 0
    witness: dict | None = None
    params: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.witness is None

    def to_dict(self) -> dict:
        doc = {"id": self.ident, "range": [self.lo, self.hi], "status": "ok" if self.ok else "fail", "checked": self.checked}
        if self.params:
            doc["params"] = self.params
        if self.witness is not None:
            doc["witness"] = {k: str(v) for k, v in self.witness.items()}
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def check_identity(
    ident: str,
    data: IdentityData,
    lo: int,
    hi: int,
    ell: int | None = None,
    m: int | None = None,
) -> IdentityReport:
    """Check an identity for n in [lo, hi].

    For plain identities n is the partition argument.  For shifted ones [lo, hi]
    bounds the partition argument (l^(2m) n + 1)/24, and only n with (-n|l) = 1
    are used.
    """
    if ident not in CONSTANTS:
        raise KeyError(f"unknown identity {ident!r}")
    params = {"ell": ell, "m": m} if ident in SHIFTED_IDS else {}
    report = IdentityReport(ident, lo, hi, params=params)
    if ident in SHIFTED_IDS:
        points = [n for n in qualifying_shifted(ell, m, hi) if (ell ** (2 * m) * n + 1) // 24 >= lo]
    else:
        points = range(lo, hi + 1)
    for n in points:
        lhs, rhs = evaluate(ident, data, n, ell, m)
        report.checked += 1
        if lhs != rhs:
            report.witness = {"n": n, "lhs": lhs, "rhs": rhs}
            break
    return report


# ---------------------------------------------------------------------------
# consistency triangle
# ---------------------------------------------------------------------------


def triangle_residual(data: IdentityData, n: int) -> F:
    """[N4 - (8/3) M4]_identities - [N2 (1 - 12n) - (4/3) n p - 4 n^2 p]_table.

    The a_{4,1} terms must cancel between the two identities, and the remainder
    must match the closed form built from the table; zero means the two sets of
    constants are consistent with each other.
    """
    a4_coeff = F(CONSTANTS["N4"]["a4"][0]) - F(8, 3) * F(CONSTANTS["M4"]["a4"][0])
    if a4_coeff:
        return a4_coeff
    _, n4 = evaluate("N4", data, n)
    _, m4 = evaluate("M4", data, n)
    p = data.table.get("p", n)
    n2 = data.table.get("N2", n)
    closed = n2 * (1 - 12 * n) - F(4, 3) * n * p - 4 * n * n * p
    return (n4 - F(8, 3) * m4) - closed


def check_triangle(data: IdentityData, lo: int, hi: int) -> IdentityReport:
    report = IdentityReport("triangle", lo, hi)
    for n in range(lo, hi + 1):
        report.checked += 1
        r = triangle_residual(data, n)
        if r:
            report.witness = {"n": n, "residual": r}
            break
    return report
