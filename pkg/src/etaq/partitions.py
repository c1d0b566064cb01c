"""Partition statistics: p(n), spt(n), rank and crank moments, symmetrized moments, spt_j.

Two independent engines are provided.  Enumeration walks every partition of n
and is used as an oracle for small n.  The generating-function engine works in
power series in q and scales to n in the thousands:

* crank moments come from substituting z = e^t in the crank product.  Taking
  logarithms gives log C = log P(q) + sum_i gamma_i(q) t^(2i)/(2i)! with
  gamma_i = 2 sum_N sigma_(2i-1)(N) q^N, and the exponential is expanded with
  the usual recurrence for exp of a power series in t;
* rank moments use sum_n N(m,n) q^n = P(q) sum_{r>=1} (-1)^(r+1) q^(r(3r-1)/2 + |m| r)(1 - q^r);
* spt uses sum_r q^r (q;q)_(r-1) / (1 - q^r), times P(q).
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from math import comb, factorial
from operator import sub
from typing import Iterator

from .arith import divisor_sums_upto
from .qseries import convolve

__all__ = [
    "EnumerationTooLarge",
    "PartitionStatsConfig",
    "MomentSeries",
    "StatTable",
    "partition_p",
    "partitions_upto",
    "iter_partitions",
    "enumerate_stats",
    "enumerate_spt",
    "crank",
    "rank",
    "crank_gf_moments",
    "rank_gf_moments",
    "spt_series",
    "spt_direct",
    "symmetrized_polynomial",
    "symmetrized_moments",
    "spt_j",
    "build_stat_table",
]

DEFAULT_ENUM_CUTOFF = 70


class EnumerationTooLarge(ValueError):
    pass


# ---------------------------------------------------------------------------
# p(n)
# ---------------------------------------------------------------------------

_P = [1]


def _extend_p(n_max: int) -> None:
    p = _P
    for n in range(len(p), n_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            term = p[n - g1]
            g2 = g1 + k  # k(3k+1)/2
            if g2 <= n:
                term += p[n - g2]
            total += term if k % 2 else -term
            k += 1
        p.append(total)


def partition_p(n) -> int:
    """p(n) by Euler's pentagonal recurrence; 0 for negative or non-integral n."""
    if isinstance(n, Fraction):
        if n.denominator != 1:
            return 0
        n = n.numerator
    if n < 0:
        return 0
    if n >= len(_P):
        _extend_p(n)
    return _P[n]


def partitions_upto(n_max: int) -> list[int]:
    """[p(0), ..., p(n_max)]."""
    if n_max >= len(_P):
        _extend_p(n_max)
    return _P[: n_max + 1]


# ---------------------------------------------------------------------------
# enumeration oracle
# ---------------------------------------------------------------------------


def iter_partitions(n: int) -> Iterator[list[int]]:
    """All partitions of n as ascending lists (Kelleher's accelerated generator)."""
    if n == 0:
        yield []
        return
    a = [0] * (n + 1)
    k = 1
    y = n - 1
    while k != 0:
        x = a[k - 1] + 1
        k -= 1
        while 2 * x <= y:
            a[k] = x
            y -= x
            k += 1
        lim = k + 1
        while x <= y:
            a[k] = x
            a[lim] = y
            yield a[: k + 2]
            x += 1
            y -= 1
        a[k] = x + y
        y = x + y - 1
        yield a[: k + 1]


def rank(parts: list[int]) -> int:
    """Largest part minus number of parts."""
    return (max(parts) - len(parts)) if parts else 0


def crank(parts: list[int]) -> int:
    """Largest part if there are no ones, else (#parts > #ones) - #ones."""
    ones = parts.count(1)
    if ones == 0:
        return max(parts) if parts else 0
    return sum(1 for x in parts if x > ones) - ones


def _check_cutoff(n: int, cutoff: int) -> None:
    if n > cutoff:
        raise EnumerationTooLarge(f"enumeration of partitions of {n} exceeds cutoff {cutoff}")


def enumerate_stats(n: int, cutoff: int = DEFAULT_ENUM_CUTOFF) -> dict[int, tuple[int, int]]:
    """{m: (N(m,n), M(m,n))} by listing every partition of n.

    At n = 1 the crank counts follow the generating function: M(-1,1) = M(1,1) = 1, M(0,1) = -1.
    """
    _check_cutoff(n, cutoff)
    ranks: Counter[int] = Counter()
    cranks: Counter[int] = Counter()
    for parts in iter_partitions(n):
        ranks[rank(parts)] += 1
        if n != 1:
            cranks[crank(parts)] += 1
    if n == 1:
        cranks.update({-1: 1, 0: -1, 1: 1})
    keys = sorted(set(ranks) | set(cranks))
    return {m: (ranks.get(m, 0), cranks.get(m, 0)) for m in keys}


def enumerate_spt(n: int, cutoff: int = DEFAULT_ENUM_CUTOFF) -> int:
    """Total number of appearances of the smallest part, over partitions of n."""
    _check_cutoff(n, cutoff)
    total = 0
    for parts in iter_partitions(n):
        if parts:
            total += parts.count(parts[0])
    return total


# ---------------------------------------------------------------------------
# generating-function engines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionStatsConfig:
    n_max: int
    order: int = 10
    enum_cutoff: int | None = None

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")
        if self.order not in (2, 4, 6, 8, 10):
            raise ValueError(f"moment order must be one of 2,4,6,8,10, got {self.order}")
        if self.enum_cutoff is None:
            object.__setattr__(self, "enum_cutoff", min(DEFAULT_ENUM_CUTOFF, self.n_max))
        elif self.enum_cutoff > self.n_max:
            raise ValueError(f"enum_cutoff {self.enum_cutoff} exceeds n_max {self.n_max}")


@dataclass(frozen=True)
class MomentSeries:
    """Power moments sum_m m^j c(m, n) for j = 0..order and n = 0..n_max."""

    kind: str
    n_max: int
    order: int
    moments: tuple[tuple[int, ...], ...]

    def moment(self, j: int, n: int) -> int:
        return self.moments[j][n]

    def scaled(self, j: int, n: int) -> Fraction:
        """sum_m c(m,n) m^j / j!, the t^j coefficient at z = e^t."""
        return Fraction(self.moments[j][n], factorial(j))


def _zero(n: int) -> list[int]:
    return [0] * (n + 1)


def crank_gf_moments(cfg: PartitionStatsConfig) -> MomentSeries:
    N, J = cfg.n_max, cfg.order
    p = partitions_upto(N)
    half = J // 2
    gammas = [None] + [[2 * v for v in divisor_sums_upto(2 * i - 1, N)] for i in range(1, half + 1)]
    # exp(G) = sum_j beta_j t^(2j)/(2j)!
    betas = [[1] + [0] * N]
    for j in range(1, half + 1):
        acc = [0] * (N + 1)
        for i in range(1, j + 1):
            c = comb(2 * j - 1, 2 * i - 1)
            prod = convolve(gammas[i], betas[j - i], N + 1)
            for n in range(N + 1):
                acc[n] += c * prod[n]
        betas.append(acc)
    moments = [list(p)]
    for j in range(1, J + 1):
        moments.append(convolve(p, betas[j // 2], N + 1) if j % 2 == 0 else _zero(N))
    return MomentSeries("crank", N, J, tuple(tuple(m) for m in moments))


def _lambert_moment(N: int, power: int, step: int) -> list[int]:
    """2 sum_{r>=1} (-1)^(r+1) q^(r(step*r+1)/2) (1 - q^r) sum_{m>=1} m^power q^(r(m-1)).

    The first exponent r(step*r + 1)/2 is r(3r+1)/2 for ranks (step 3) and
    r(r+1)/2 for cranks (step 1).
    """
    out = [0] * (N + 1)
    r = 1
    while True:
        e0 = r * (step * r + 1) // 2
        if e0 > N:
            break
        sign = 2 if r % 2 else -2
        m = 1
        e = e0
        while e <= N:
            v = sign * m**power
            out[e] += v
            if e + r <= N:
                out[e + r] -= v
            m += 1
            e += r
        r += 1
    return out


def rank_gf_moments(cfg: PartitionStatsConfig) -> MomentSeries:
    N, J = cfg.n_max, cfg.order
    p = partitions_upto(N)
    moments = [list(p)]
    for j in range(1, J + 1):
        if j % 2:
            moments.append(_zero(N))
        else:
            moments.append(convolve(p, _lambert_moment(N, j, 3), N + 1))
    return MomentSeries("rank", N, J, tuple(tuple(m) for m in moments))


def spt_series(N: int) -> list[int]:
    """[spt(0), ..., spt(N)] from P(q) sum_r q^r (q;q)_(r-1)/(1 - q^r)."""
    total = [0] * (N + 1)
    poch = [1] + [0] * N  # (q;q)_(r-1), truncated to degree N - r
    for r in range(1, N + 1):
        if r >= 2:
            d = r - 1
            keep = N - r + 1
            poch = poch[:keep]
            if d < keep:
                poch[d:] = list(map(sub, poch[d:], poch[: keep - d]))
        width = N - r + 1
        term = poch[:width]
        # divide by 1 - q^r: running sums along each residue class mod r
        for c in range(min(r, width)):
            term[c::r] = list(accumulate(term[c::r]))
        for i, v in enumerate(term):
            if v:
                total[r + i] += v
    return convolve(partitions_upto(N), total, N + 1)


_SPT_CACHE: list[int] = [0]


def spt_direct(n: int, enum_cutoff: int = DEFAULT_ENUM_CUTOFF) -> int:
    """spt(n): enumeration up to ``enum_cutoff``, the generating function beyond."""
    if n < 1:
        raise ValueError("spt needs n >= 1")
    if n <= enum_cutoff:
        return enumerate_spt(n, enum_cutoff)
    global _SPT_CACHE
    if n >= len(_SPT_CACHE):
        _SPT_CACHE = spt_series(max(n, 2 * len(_SPT_CACHE)))
    return _SPT_CACHE[n]


# ---------------------------------------------------------------------------
# symmetrized moments
# ---------------------------------------------------------------------------


def symmetrized_polynomial(j: int) -> list[Fraction]:
    """Coefficients c_r with binom(m + j - 1, 2j) = sum_r c_r m^(2r) + (odd in m).

    The binomial is m (m - j) prod_{i<j} (m^2 - i^2) / (2j)!; the odd part cancels
    against the symmetry c(m, n) = c(-m, n).
    """
    poly = [Fraction(0), Fraction(1)]  # x = m^2
    for i in range(1, j):
        nxt = [Fraction(0)] * (len(poly) + 1)
        for r, c in enumerate(poly):
            nxt[r + 1] += c
            nxt[r] -= c * i * i
        poly = nxt
    f = factorial(2 * j)
    return [c / f for c in poly]


def symmetrized_moments(ms: MomentSeries, j: int) -> list[int]:
    """[sum_m binom(m + j - 1, 2j) c(m, n) for n = 0..n_max] from the power moments."""
    if 2 * j > ms.order:
        raise ValueError(f"order {ms.order} is too small for the 2j = {2 * j} symmetrized moment")
    coeffs = symmetrized_polynomial(j)
    out = []
    for n in range(ms.n_max + 1):
        v = sum(c * ms.moments[2 * r][n] for r, c in enumerate(coeffs) if c)
        if v.denominator != 1:
            raise ArithmeticError(f"non-integral symmetrized moment at n={n}: {v}")
        out.append(int(v))
    return out


# ---------------------------------------------------------------------------
# the table
# ---------------------------------------------------------------------------


@dataclass
class StatTable:
    n_max: int
    order: int
    columns: dict[str, list[int]] = field(default_factory=dict)

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def get(self, name: str, n: int) -> int:
        col = self.columns[name]
        if not 0 <= n <= self.n_max:
            raise IndexError(f"n={n} outside table range 0..{self.n_max}")
        return col[n]

    def row(self, n: int) -> dict[str, int]:
        return {name: col[n] for name, col in self.columns.items()}

    def spt_j(self, j: int, n: int) -> int:
        return self.get(f"spt{j}", n)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = self.names
        w.writerow(["n"] + names)
        for n in range(self.n_max + 1):
            w.writerow([n] + [self.columns[c][n] for c in names])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"n_max": self.n_max, "order": self.order, "columns": {k: [str(v) for v in col] for k, col in self.columns.items()}}

    @classmethod
    def from_dict(cls, doc: dict) -> "StatTable":
        cols = {k: [int(v) for v in col] for k, col in doc["columns"].items()}
        return cls(int(doc["n_max"]), int(doc["order"]), cols)


def spt_j(table: StatTable, j: int, n: int) -> int:
    """spt_j(n) = mu_2j(n) - eta_2j(n)."""
    if not 1 <= j <= table.order // 2:
        raise ValueError(f"spt_j needs 1 <= j <= {table.order // 2}")
    return table.get(f"mu{2 * j}", n) - table.get(f"eta{2 * j}", n)


def build_stat_table(cfg: PartitionStatsConfig) -> StatTable:
    N, J = cfg.n_max, cfg.order
    cr = crank_gf_moments(cfg)
    rk = rank_gf_moments(cfg)
    cols: dict[str, list[int]] = {}
    cols["p"] = list(partitions_upto(N))
    cols["spt"] = spt_series(N)
    for j in range(2, J + 1, 2):
        cols[f"N{j}"] = list(rk.moments[j])
    for j in range(2, J + 1, 2):
        cols[f"M{j}"] = list(cr.moments[j])
    for j in range(1, J // 2 + 1):
        cols[f"mu{2 * j}"] = symmetrized_moments(cr, j)
    for j in range(1, J // 2 + 1):
        cols[f"eta{2 * j}"] = symmetrized_moments(rk, j)
    for j in range(1, J // 2 + 1):
        cols[f"spt{j}"] = [a - b for a, b in zip(cols[f"mu{2 * j}"], cols[f"eta{2 * j}"])]
    return StatTable(N, J, cols)
