"""Congruence and equality suites over finite (l, m, n) grids.

Each suite takes a :class:`SuiteSpec` and returns a :class:`CongruenceReport`
listing, per parameter group, how many instances were checked and every
violation with its residues.  Coefficient tables are built once per suite,
before any check runs.

In ``mod`` mode the coefficients of g_{k,s} are computed in Z/l^e with e just
large enough for the congruences being checked; ``exact`` mode uses integers
throughout.  Equalities (the bd suite, tech suite and identities) always run
exactly.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .arith import divisor_sums_upto, exact_power, kronecker, lcm
from .hecke import HeckeContext, f_dm_sequence, input_precision
from .identities import (
    PLAIN_IDS,
    SHIFTED_IDS,
    IdentityData,
    check_identity,
    check_triangle,
    h_ell2m,
    identity_data,
)
from .modforms import EISENSTEIN_CONSTANTS, Z_SPACES, PoleLabel, SpaceLabel, eta_series, f_basis
from .partitions import StatTable, partitions_upto
from .qseries import Q24Series, invert, mul

__all__ = [
    "SUITES",
    "SuiteSpec",
    "CheckGroup",
    "CongruenceReport",
    "g_coefficients",
    "suite_ramanujan",
    "suite_ak_cong",
    "suite_bd_equality",
    "suite_wy",
    "suite_crank",
    "suite_rank",
    "suite_spt_main",
    "suite_h_divisibility",
    "suite_identities",
    "suite_tech",
    "suite_tech_three",
    "tech_grid",
    "run_suite",
    "mode_agreement",
]

MODES = ("exact", "mod")


@dataclass(frozen=True)
class SuiteSpec:
    suite: str
    primes: tuple[int, ...] = ()
    m_values: tuple[int, ...] = (1,)
    n_max: int = 200
    spaces: tuple[SpaceLabel, ...] | None = None
    mode: str = "mod"
    sharpness: bool = True
    jobs: int = 1
    # extra knobs used by individual suites
    d_samples: tuple[tuple[SpaceLabel, int], ...] = ()
    d_n_max: int = 200
    odd_n_max: int | None = None
    plain_n_max: int = 300

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        for ell in self.primes:
            if ell < 3 or any(ell % d == 0 for d in range(2, int(ell**0.5) + 1)):
                raise ValueError(f"{ell} is not an admissible prime")
        if any(m < 0 for m in self.m_values):
            raise ValueError("m values must be nonnegative")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["spaces"] = None if self.spaces is None else [[sp.k, sp.s] for sp in self.spaces]
        d["d_samples"] = [[sp.k, sp.s, D] for sp, D in self.d_samples]
        return d


@dataclass
class CheckGroup:
    params: dict
    checked: int = 0
    violations: list[dict] = field(default_factory=list)

    def check(self, n: int, lhs, rhs, modulus: int | None) -> bool:
        """Record one instance; ``modulus`` None means exact equality, 1 means vacuous."""
        self.checked += 1
        if modulus is None:
            ok = lhs == rhs
        else:
            ok = (lhs - rhs) % modulus == 0
        if not ok:
            self.violations.append(
                {"n": n, "lhs": str(lhs), "rhs": str(rhs), "modulus": "exact" if modulus is None else str(modulus)}
            )
        return ok

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class CongruenceReport:
    suite: str
    spec: dict = field(default_factory=dict)
    groups: list[CheckGroup] = field(default_factory=list)
    sharpness: list[dict] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return sum(g.checked for g in self.groups)

    @property
    def n_violations(self) -> int:
        return sum(len(g.violations) for g in self.groups)

    @property
    def passed(self) -> bool:
        return self.n_violations == 0 and all(w["holds"] for w in self.sharpness)

    def group(self, **params) -> CheckGroup:
        g = CheckGroup(params)
        self.groups.append(g)
        return g

    def merge(self, other: "CongruenceReport") -> None:
        self.groups.extend(other.groups)
        self.sharpness.extend(other.sharpness)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.spec,
            "counts": {"checked": self.checked, "violations": self.n_violations, "groups": len(self.groups)},
            "groups": [{"params": g.params, "checked": g.checked, "violations": g.violations} for g in self.groups],
            "violations": [{**v, "params": g.params} for g in self.groups for v in g.violations],
            "sharpness": self.sharpness,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.suite}: {status} ({self.checked} checks, {self.n_violations} violations, {len(self.groups)} groups)"


# ---------------------------------------------------------------------------
# coefficient tables
# ---------------------------------------------------------------------------


def _support(s: int, lo: int, hi: int) -> range:
    """Exponents n = -s mod 24 with lo <= n <= hi."""
    start = lo + (-s - lo) % 24
    return range(start, hi + 1, 24)


def _reduce(f: Q24Series, modulus: int | None) -> Q24Series:
    if modulus is None or f.modulus == modulus:
        return f
    return f.reduce(modulus)


def g_coefficients(
    requests: dict[SpaceLabel, Iterable[int]],
    moduli: dict[SpaceLabel, int | None] | None = None,
) -> dict[SpaceLabel, dict[int, int]]:
    """Selected coefficients of g_{k,s} for many spaces, sharing the powers of 1/eta.

    ``moduli`` gives, per space, the modulus for its values (None for exact).
    1/eta^s is built as 1/eta * (1/eta^2)^((s-1)/2), reduced at each step to
    the least common multiple of the moduli still ahead.
    """
    reqs = {sp: sorted(set(ns)) for sp, ns in requests.items() if ns}
    out: dict[SpaceLabel, dict[int, int]] = {sp: {} for sp in requests}
    if not reqs:
        return out
    moduli = moduli or {}
    exact = any(moduli.get(sp) is None for sp in reqs)
    if exact and any(moduli.get(sp) is not None for sp in reqs):
        # mixed request: run the two kinds separately
        ex = {sp: ns for sp, ns in reqs.items() if moduli.get(sp) is None}
        md = {sp: ns for sp, ns in reqs.items() if moduli.get(sp) is not None}
        out.update(g_coefficients(ex, {}))
        out.update(g_coefficients(md, moduli))
        return out
    P = max(max(ns) for ns in reqs.values()) + 1
    by_s: dict[int, list[SpaceLabel]] = {}
    for sp in reqs:
        by_s.setdefault(sp.s, []).append(sp)
    s_max = max(by_s)

    def chain_modulus(s: int) -> int | None:
        if exact:
            return None
        return lcm(*[moduli[sp] for sp in reqs if sp.s >= s])

    top = chain_modulus(1)
    Pc = P + 24 + 24  # room for E_k * eta^-s (E starts at 0, eta^-s at -s)
    inv1 = invert(eta_series(Pc + 2, top))
    inv2 = mul(inv1, inv1) if s_max > 1 else None
    eis: dict[int, list[int]] = {}

    def eisenstein_nums(k: int, slots: int) -> list[int]:
        if k not in eis:
            sig = divisor_sums_upto(k - 1, slots - 1, top)
            c = EISENSTEIN_CONSTANTS[k]
            nums = [1] + [c * v for v in sig[1:]]
            eis[k] = [v % top for v in nums] if top else nums
        return eis[k]

    cur = inv1
    for s in range(1, s_max + 1, 2):
        M = chain_modulus(s)
        if s > 1:
            cur = mul(_reduce(cur, M), _reduce(inv2, M))
        for sp in by_s.get(s, ()):
            Msp = moduli.get(sp)
            base = _reduce(cur, Msp)
            if sp.k == 0:
                g = base
            else:
                slots = (P + 23) // 24 + 2
                E = Q24Series(0, 0, 24 * slots, eisenstein_nums(sp.k, slots), 1, top)
                g = mul(_reduce(E, Msp), base)
            for n in reqs[sp]:
                out[sp][n] = g.int_coeff(n) if Msp is None else g.coeff(n)
        if s >= s_max:
            break
    return out


def _pole_coefficients(space: SpaceLabel, D: int, ns: Iterable[int], modulus: int | None) -> dict[int, int]:
    ns = sorted(set(ns))
    if not ns:
        return {}
    f = f_basis(PoleLabel(space, D), max(ns) + 1, modulus)
    return {n: (f.int_coeff(n) if modulus is None else f.coeff(n)) for n in ns}


def _sign(space: SpaceLabel, ell: int) -> int:
    return kronecker(-1, ell) ** ((space.s + 1) // 2)


def _mod(ell: int, e: int) -> int:
    """ell^e as a modulus; 1 (vacuous) when e <= 0."""
    return ell**e if e > 0 else 1


# ---------------------------------------------------------------------------
# Ramanujan
# ---------------------------------------------------------------------------


def ramanujan_exponent(ell: int, m: int) -> int:
    if ell in (5, 11):
        return m
    if ell == 7:
        return m // 2 + 1
    raise ValueError(f"no Ramanujan congruence for ell={ell}")


def suite_ramanujan(spec: SuiteSpec) -> CongruenceReport:
    rep = CongruenceReport("ramanujan", spec.to_dict())
    p = partitions_upto(spec.n_max)
    for ell in spec.primes or (5, 7, 11):
        for m in spec.m_values:
            if m < 1:
                continue
            g = rep.group(ell=ell, m=m)
            M = ell ** ramanujan_exponent(ell, m)
            L = ell**m
            # 24N = L n + 1  <=>  N = 24^-1 mod L
            start = pow(24, -1, L)
            for N in range(start, spec.n_max + 1, L):
                g.check((24 * N - 1) // L, p[N], 0, M)
    return rep


# ---------------------------------------------------------------------------
# coefficient congruences for a_{k,s} and b_{D,k,s}
# ---------------------------------------------------------------------------


def _ak_spaces(spec: SuiteSpec) -> tuple[SpaceLabel, ...]:
    if spec.spaces is not None:
        return spec.spaces
    return tuple(sp for sp in Z_SPACES if 2 * sp.k > sp.s + 2)


def suite_ak_cong(spec: SuiteSpec) -> CongruenceReport:
    """The four coefficient congruences for a_{k,s} (D = s) and sampled b_{D,k,s}."""
    rep = CongruenceReport("ak", spec.to_dict())
    spaces = _ak_spaces(spec)
    for ell in spec.primes or (5, 7, 13):
        if ell == 3:
            rep.merge(_ak_three(spec, [sp for sp in spaces if sp.s % 3 == 0]))
        else:
            rep.merge(_ak_prime(spec, ell, spaces))
    for sp, D in spec.d_samples:
        for ell in spec.primes or (5, 7, 13):
            if ell >= 5 and D % (ell * ell) and 2 * sp.k > sp.s + 2:
                rep.merge(_bd_congruences(spec, ell, sp, D))
    return rep


def _ak_prime(spec: SuiteSpec, ell: int, spaces: Iterable[SpaceLabel]) -> CongruenceReport:
    rep = CongruenceReport("ak")
    L = ell * ell
    ms = sorted(m for m in spec.m_values if m >= 1)
    requests: dict[SpaceLabel, set[int]] = {}
    moduli: dict[SpaceLabel, int | None] = {}
    for sp in spaces:
        ns = _support(sp.s, -sp.s, spec.n_max)
        need = set()
        for n in ns:
            need.update((n, L * n))
            for m in ms:
                need.update((L**m * n, L ** (m + 1) * n))
        requests[sp] = need
        moduli[sp] = None if spec.mode == "exact" else ell ** (sp.top_exponent * max(ms + [1]))
    coeffs = g_coefficients(requests, moduli)
    for sp in spaces:
        a = coeffs[sp]
        e1, e2 = sp.mid_exponent, sp.top_exponent
        sgn = _sign(sp, ell)
        chi12 = kronecker(12, ell)
        g = rep.group(line="l2", k=sp.k, s=sp.s, ell=ell)
        M = _mod(ell, e2)
        for n in _support(sp.s, -sp.s, spec.n_max):
            rhs = ell**e1 * chi12 * sgn * (kronecker(-sp.s, ell) - kronecker(n, ell)) * a[n]
            g.check(n, a[L * n], rhs, M)
        c2 = ell**e1 * sgn * kronecker(-12 * sp.s, ell)
        for m in ms:
            g = rep.group(line="l2m", k=sp.k, s=sp.s, ell=ell, m=m)
            M = _mod(ell, e2 * m)
            for n in _support(sp.s, -sp.s, spec.n_max):
                g.check(n, a[L ** (m + 1) * n], c2 * a[L**m * n], M)
    return rep


def _ak_three(spec: SuiteSpec, spaces: list[SpaceLabel]) -> CongruenceReport:
    """The l = 3 analogues for 3 | s (3 | n is automatic on the support)."""
    rep = CongruenceReport("ak")
    ms = sorted(m for m in spec.m_values if m >= 1)
    requests, moduli = {}, {}
    for sp in spaces:
        need = set()
        for n in _support(sp.s, -sp.s, spec.n_max):
            need.update((n, 9 * n))
            for m in ms:
                need.update((9**m * n, 9 ** (m + 1) * n))
        requests[sp] = need
        moduli[sp] = None if spec.mode == "exact" else 3 ** (sp.top_exponent * max(ms + [1]))
    coeffs = g_coefficients(requests, moduli)
    for sp in spaces:
        a = coeffs[sp]
        e1, e2 = sp.mid_exponent, sp.top_exponent
        sgn = _sign(sp, 3)
        chiD = kronecker(-(sp.s // 3), 3)
        g = rep.group(line="3-l2", k=sp.k, s=sp.s, ell=3)
        M = _mod(3, e2)
        for n in _support(sp.s, -sp.s, spec.n_max):
            rhs = 3**e1 * sgn * (chiD - kronecker(n // 3, 3)) * a[n]
            g.check(n, a[9 * n], rhs, M)
        for m in ms:
            g = rep.group(line="3-l2m", k=sp.k, s=sp.s, ell=3, m=m)
            M = _mod(3, e2 * m)
            for n in _support(sp.s, -sp.s, spec.n_max):
                g.check(n, a[9 ** (m + 1) * n], 3**e1 * sgn * chiD * a[9**m * n], M)
    return rep


def _bd_congruences(spec: SuiteSpec, ell: int, sp: SpaceLabel, D: int) -> CongruenceReport:
    """The two congruences for b_{D,k,s} with general D, l^2 not dividing D."""
    rep = CongruenceReport("ak")
    L = ell * ell
    ms = sorted(m for m in spec.m_values if m >= 1)
    modulus = None if spec.mode == "exact" else ell ** (sp.top_exponent * max(ms + [1]))
    ns = list(_support(sp.s, -D, spec.d_n_max))
    need = set()
    for n in ns:
        need.update((n, L * n))
        for m in ms:
            need.update((L**m * n, L ** (m + 1) * n))
    b = _pole_coefficients(sp, D, need, modulus)
    e1, e2 = sp.mid_exponent, sp.top_exponent
    sgn = _sign(sp, ell)
    g = rep.group(line="bD-l2", k=sp.k, s=sp.s, D=D, ell=ell)
    for n in ns:
        rhs = ell**e1 * kronecker(12, ell) * sgn * (kronecker(-D, ell) - kronecker(n, ell)) * b[n]
        g.check(n, b[L * n], rhs, _mod(ell, e2))
    c2 = ell**e1 * sgn * kronecker(-12 * D, ell)
    for m in ms:
        g = rep.group(line="bD-l2m", k=sp.k, s=sp.s, D=D, ell=ell, m=m)
        for n in ns:
            g.check(n, b[L ** (m + 1) * n], c2 * b[L**m * n], _mod(ell, e2 * m))
    return rep


# ---------------------------------------------------------------------------
# exact equalities a(l^2m n) = l^((2k-s-2)m) b_{l^2m s}(n)
# ---------------------------------------------------------------------------


def _bd_qualifies(n: int, s: int, ell: int) -> bool:
    if kronecker(-n * s, ell) == 1:
        return True
    return n % ell == 0 and n % (ell * ell) != 0 and s % ell == 0 and s % (ell * ell) != 0


def suite_bd_equality(spec: SuiteSpec) -> CongruenceReport:
    rep = CongruenceReport("bd", spec.to_dict())
    spaces = spec.spaces or (SpaceLabel(4, 1), SpaceLabel(6, 5))
    primes = spec.primes or (5, 7)
    ms = sorted(m for m in spec.m_values if m >= 0)
    requests = {}
    for sp in spaces:
        need = set()
        for ell in primes:
            for m in ms:
                for n in _support(sp.s, -sp.s, spec.n_max):
                    if _bd_qualifies(n, sp.s, ell):
                        need.add(ell ** (2 * m) * n)
        requests[sp] = need
    a_all = g_coefficients(requests, {})
    for sp in spaces:
        a = a_all[sp]
        for ell in primes:
            for m in ms:
                D = ell ** (2 * m) * sp.s
                ns = [n for n in _support(sp.s, -sp.s, spec.n_max) if _bd_qualifies(n, sp.s, ell)]
                b = _pole_coefficients(sp, D, ns, None)
                scale = exact_power(ell, sp.top_exponent * m)
                g = rep.group(k=sp.k, s=sp.s, ell=ell, m=m)
                for n in ns:
                    g.check(n, a[ell ** (2 * m) * n], scale * b[n], None)
    return rep


# ---------------------------------------------------------------------------
# the corollary: three congruence families and a sharpness witness
# ---------------------------------------------------------------------------

DEFAULT_WY_WITNESSES = ((SpaceLabel(4, 1), 29, 1, 23, 6),)


def suite_wy(spec: SuiteSpec, witnesses=DEFAULT_WY_WITNESSES) -> CongruenceReport:
    rep = CongruenceReport("wy", spec.to_dict())
    spaces = spec.spaces or (SpaceLabel(4, 1),)
    primes = spec.primes or (5, 7)
    ms = sorted(m for m in spec.m_values if m >= 1)
    odd_max = spec.odd_n_max if spec.odd_n_max is not None else spec.n_max
    for ell in primes:
        L = ell * ell
        requests, moduli = {}, {}
        for sp in spaces:
            need = set()
            for n in _support(sp.s, -sp.s, spec.n_max):
                for m in ms:
                    need.add(L**m * n)
            for n in _odd_support(sp.s, ell, odd_max):
                for m in ms:
                    need.update((ell ** (2 * m + 1) * n, ell ** (2 * m - 1) * n))
            requests[sp] = need
            e = max([sp.mid_exponent] + [sp.top_exponent * m for m in ms])
            moduli[sp] = None if spec.mode == "exact" else _mod(ell, e)
        coeffs = g_coefficients(requests, moduli)
        for sp in spaces:
            a = coeffs[sp]
            e1, e2 = sp.mid_exponent, sp.top_exponent
            for m in ms:
                # needs 2k > s + 3, i.e. a positive power of l
                if e1 > 0:
                    g = rep.group(line="1.1", k=sp.k, s=sp.s, ell=ell, m=m)
                    for n in _support(sp.s, -sp.s, spec.n_max):
                        g.check(n, a[L**m * n], 0, ell**e1)
                if e2 * m > 0:
                    g = rep.group(line="2.8i", k=sp.k, s=sp.s, ell=ell, m=m)
                    for n in _support(sp.s, -sp.s, spec.n_max):
                        if _bd_qualifies(n, sp.s, ell):
                            g.check(n, a[L**m * n], 0, ell ** (e2 * m))
                    g = rep.group(line="2.8ii", k=sp.k, s=sp.s, ell=ell, m=m)
                    c = exact_power(ell, e1) * _sign(sp, ell) * kronecker(-12 * sp.s, ell)
                    for n in _odd_support(sp.s, ell, odd_max):
                        g.check(n, a[ell ** (2 * m + 1) * n], c * a[ell ** (2 * m - 1) * n], ell ** (e2 * m))
    if spec.sharpness:
        for sp, ell, m, n, e in witnesses:
            N = ell ** (2 * m) * n
            a = g_coefficients({sp: [N]}, {})[sp][N]
            r = a % ell**e
            rep.sharpness.append(
                {
                    "claim": f"a_{{{sp.k},{sp.s}}}({ell}^{2 * m}*{n}) != 0 mod {ell}^{e}",
                    "value_mod": str(r),
                    "modulus": str(ell**e),
                    "holds": r != 0,
                }
            )
    return rep


def _odd_support(s: int, ell: int, n_max: int) -> list[int]:
    """n with l*n = -s mod 24, l not dividing n, -s <= l n and n <= n_max."""
    r = (-s * ell) % 24  # l^2 = 1 mod 24
    start = r - 24 * ((r + s) // 24 + 1)
    return [n for n in range(start, n_max + 1, 24) if n % ell and ell * n >= -s]


# ---------------------------------------------------------------------------
# partition statistics
# ---------------------------------------------------------------------------


def _shift_points(ell: int, m: int, arg_max: int) -> list[tuple[int, int]]:
    """[(n, N)] with (-n|l) = 1 and N = (l^(2m) n + 1)/24 <= arg_max."""
    L = ell ** (2 * m)
    out = []
    n = 23
    while (L * n + 1) // 24 <= arg_max:
        if kronecker(-n, ell) == 1:
            out.append((n, (L * n + 1) // 24))
        n += 24
    return out


def _table(spec: SuiteSpec, table: StatTable | None) -> StatTable:
    from .partitions import PartitionStatsConfig, build_stat_table

    if table is not None and table.n_max >= spec.n_max:
        return table
    return build_stat_table(PartitionStatsConfig(spec.n_max))


def suite_crank(spec: SuiteSpec, table: StatTable | None = None) -> CongruenceReport:
    rep = CongruenceReport("crank", spec.to_dict())
    T = _table(spec, table)
    a4 = _a41(spec.n_max)
    for ell in spec.primes or (5, 7):
        for m in spec.m_values:
            if m < 1:
                continue
            pts = _shift_points(ell, m, spec.n_max)
            strong = ell ** (5 * m)
            weak = ell ** (2 * m)
            lines = [
                ("M4", 240, "M4", (3, 10, -5), strong),
                ("M6", 12096, "M6", (27, 189, -315), strong),
                ("mu4", 5760, "mu4", (-17, -10, -5), strong),
                ("mu6", 967680, "mu6", (367, 189, 105), strong),
                ("M4-weak", 80, "M4", (1, 0, 0), weak),
                ("M6-weak", 448, "M6", (1, 0, 0), weak),
                ("mu4-weak", 5760, "mu4", (-17, 0, 0), weak),
                ("mu6-weak", 967680, "mu6", (367, 0, 0), weak),
            ]
            for name, c, col, (c0, c1, c2), M in lines:
                g = rep.group(line=name, ell=ell, m=m)
                for n, N in pts:
                    L = ell ** (2 * m) * n
                    g.check(n, c * T.get(col, N), (c0 + c1 * L + c2 * L * L) * T.get("p", N), M)
            g = rep.group(line="a4-p-mod20", ell=ell, m=m)
            for n, N in pts:
                g.check(n, a4[N], T.get("p", N), 20)
    return rep


def suite_rank(spec: SuiteSpec, table: StatTable | None = None) -> CongruenceReport:
    rep = CongruenceReport("rank", spec.to_dict())
    T = _table(spec, table)
    for ell in spec.primes or (5, 7):
        for m in spec.m_values:
            if m < 1:
                continue
            M = ell**m
            pts = _shift_points(ell, m, spec.n_max)
            for name, c, col, r in (
                ("N2", 12, "N2", 1),
                ("N4", 80, "N4", 1),
                ("N6", 448, "N6", 1),
                ("eta4", 5760, "eta4", -17),
                ("eta6", 967680, "eta6", 367),
                ("mu4-eta4", 5760, None, 0),
                ("mu6-eta6", 967680, None, 0),
            ):
                g = rep.group(line=name, ell=ell, m=m)
                for n, N in pts:
                    if col is None:
                        j = 4 if "4" in name else 6
                        g.check(n, c * T.get(f"mu{j}", N), c * T.get(f"eta{j}", N), M)
                    else:
                        g.check(n, c * T.get(col, N), r * T.get("p", N), M)
    return rep


SPT_SHARPNESS = ((3, 124, 5, 1), (4, 96, 7, 4))


def spt_exponents(ell: int, m: int) -> dict[int, int]:
    d5, d7 = int(ell == 5), int(ell == 7)
    return {2: m, 3: m - d5, 4: m + d5 - d7, 5: m + d5 + d7}


def suite_spt_main(spec: SuiteSpec, table: StatTable | None = None) -> CongruenceReport:
    rep = CongruenceReport("spt", spec.to_dict())
    T = _table(spec, table)
    for ell in spec.primes or (5, 7, 11):
        for m in spec.m_values:
            if m < 1:
                continue
            pts = _shift_points(ell, m, spec.n_max)
            for j, e in spt_exponents(ell, m).items():
                g = rep.group(line=f"spt{j}", ell=ell, m=m, exponent=e)
                for n, N in pts:
                    g.check(n, T.spt_j(j, N), 0, _mod(ell, e))
            g = rep.group(line="spt", ell=ell, m=m, exponent=m)
            for n, N in pts:
                g.check(n, T.get("spt", N), 0, ell**m)
    if spec.sharpness:
        for j, N, ell, expected in SPT_SHARPNESS:
            if N <= T.n_max:
                v = T.spt_j(j, N) % ell
                rep.sharpness.append(
                    {"claim": f"spt_{j}({N}) = {expected} mod {ell}", "value_mod": str(v), "modulus": str(ell), "holds": v == expected}
                )
    return rep


def suite_h_divisibility(spec: SuiteSpec, data: IdentityData | None = None) -> CongruenceReport:
    """h(l^2m n) = 0 mod l^m for (-n|l) = 1, via the exact division h_{l^2m}(n)."""
    rep = CongruenceReport("hdiv", spec.to_dict())
    from .identities import DivisibilityFailure, h_series

    if data is not None and data.n_max >= spec.n_max:
        hs = data.hs
    else:
        hs = h_series(_table(spec, None))
    for ell in spec.primes or (5, 7, 11, 13):
        for m in spec.m_values:
            if m < 1:
                continue
            g = rep.group(ell=ell, m=m)
            for n, N in _shift_points(ell, m, spec.n_max):
                try:
                    h_ell2m(hs, ell, m, n)
                    g.check(n, 0, 0, None)
                except DivisibilityFailure:
                    g.check(n, hs(ell ** (2 * m) * n), 0, ell**m)
    return rep


def _a41(N_max: int) -> tuple[int, ...]:
    from .identities import a_table

    return a_table(4, N_max)


def suite_identities(spec: SuiteSpec, data: IdentityData | None = None) -> CongruenceReport:
    rep = CongruenceReport("identities", spec.to_dict())
    if data is None or data.n_max < spec.n_max:
        data = identity_data(spec.n_max)
    plain_hi = min(spec.plain_n_max, data.n_max)
    for ident in PLAIN_IDS:
        r = check_identity(ident, data, 0, plain_hi)
        rep.groups.append(_from_identity(r))
    rep.groups.append(_from_identity(check_triangle(data, 0, plain_hi)))
    grid = {
        "SPT2_shifted": [(5, 1), (5, 2)],
        "SPT3_shifted": [(5, 1), (7, 1)],
        "SPT4_shifted": [(5, 1), (7, 1)],
        "MU6_shifted": [(5, 1), (7, 1)],
        "N2_shifted": [(5, 1), (7, 1)],
    }
    primes = set(spec.primes) if spec.primes else None
    for ident in SHIFTED_IDS:
        for ell, m in grid[ident]:
            if primes is not None and ell not in primes:
                continue
            r = check_identity(ident, data, 1, spec.n_max, ell, m)
            rep.groups.append(_from_identity(r))
    return rep


def _from_identity(r) -> CheckGroup:
    g = CheckGroup({"id": r.ident, "range": [r.lo, r.hi], **r.params}, checked=r.checked)
    if r.witness is not None:
        w = r.witness
        g.violations.append(
            {"n": int(w["n"]), "lhs": str(w.get("lhs", "")), "rhs": str(w.get("rhs", w.get("residual", ""))), "modulus": "exact"}
        )
    return g


# ---------------------------------------------------------------------------
# Hecke identities behind everything
# ---------------------------------------------------------------------------

TECH_SPACES = (SpaceLabel(4, 1), SpaceLabel(6, 1), SpaceLabel(4, 3), SpaceLabel(0, 1), SpaceLabel(14, 1))

# coefficients of the Hecke side compared beyond the pole
TECH_WINDOW = 2400
TECH_POSITIVE = 48


def tech_grid(spaces=TECH_SPACES, primes=(5, 7), ms=(1, 2), offsets=(0, 24, 72)) -> list[tuple[SpaceLabel, int, int, int]]:
    """(space, D, l, m) with l^2 not dividing D, largest l^2m D first per space."""
    out = []
    for sp in spaces:
        cells = [(sp, sp.s + o, ell, m) for o in offsets for ell in primes for m in ms]
        cells = [c for c in cells if c[1] % (c[2] * c[2])]
        cells.sort(key=lambda c: -(c[2] ** (2 * c[3]) * c[1]))
        out.extend(cells)
    return out


def tech_precision(ell: int, m: int, D: int) -> int:
    """Window: the first 100 stored slots, extended to a few positive exponents."""
    return max(-(ell ** (2 * m)) * D + TECH_WINDOW, TECH_POSITIVE)


def suite_tech(spec: SuiteSpec, cells=None) -> CongruenceReport:
    """F_D^(m) = l^((2k-s-2)m) f_{l^2m D}, the recursion for F_D^(m) and the three lemmas."""
    rep = CongruenceReport("tech", spec.to_dict())
    primes = spec.primes or (5, 7)
    if cells is None:
        big = tuple(ell for ell in primes if ell >= 5)
        cells = tech_grid(spec.spaces or TECH_SPACES, big, tuple(m for m in spec.m_values if m >= 1) or (1, 2))
    for sp, D, ell, m in cells:
        ctx = HeckeContext(sp, ell)
        P = tech_precision(ell, m, D)
        Dm = ell ** (2 * m) * D
        R = f_basis(PoleLabel(sp, Dm), P)  # largest pole first, so the cached 1/g is reused
        F = f_dm_sequence(ctx, D, m, P)[m]
        scale = exact_power(ell, sp.top_exponent * m)
        g = rep.group(line="main", k=sp.k, s=sp.s, D=D, ell=ell, m=m, precision=P)
        for n in range(-Dm, P, 24):
            g.check(n, F.coeff(n), scale * R.coeff(n), None)
    for sp, D, ell in _lemma_cells(spec):
        rep.merge(_tech_lemmas(sp, D, ell))
    if 3 in primes:
        rep.merge(suite_tech_three(SuiteSpec("tech3", (3,), spec.m_values, spaces=None)))
    return rep


LEMMA_BUDGET = 400_000


def _lemma_cells(spec: SuiteSpec):
    if spec.d_samples:
        base = spec.d_samples
    else:
        base = ((SpaceLabel(4, 1), 1), (SpaceLabel(4, 1), 73), (SpaceLabel(6, 1), 25), (SpaceLabel(0, 1), 1), (SpaceLabel(4, 3), 27))
    for sp, D in base:
        for ell in spec.primes or (5, 7):
            if ell >= 5 and D % (ell * ell):
                yield sp, D, ell


def _tech_lemmas(sp: SpaceLabel, D: int, ell: int, m_top: int = 2, budget: int = LEMMA_BUDGET) -> CongruenceReport:
    """The three lemmas relating c_D^(m) to b_D, and the recursion for F_D^(m), for m <= m_top.

    Each identity reads b_D up to some l^(2j) n; n runs over the support up to
    the point where that argument reaches ``budget``.
    """
    from .hecke import t_ell2

    rep = CongruenceReport("tech")
    L = ell * ell
    f = f_basis(PoleLabel(sp, D), budget + 1)
    ctx = HeckeContext(sp, ell)
    reach = budget // L**m_top
    Fs = f_dm_sequence(ctx, D, m_top, reach, base=f)

    def b(n: int):
        return f.coeff(n)

    def c(m: int, n: int):
        return Fs[m].coeff(n)

    t = exact_power(ell, sp.mid_exponent) * _sign(sp, ell)
    top = exact_power(ell, sp.top_exponent)
    chiD = kronecker(-12 * D, ell)
    ns = list(_support(sp.s, -D, reach - 1))
    for m in range(1, m_top + 1):
        reach1 = budget // L ** (m + 1)
        if reach1 > -D:
            far = f_dm_sequence(ctx, D, m, L * reach1, base=f)
            g = rep.group(line="lemma1", k=sp.k, s=sp.s, D=D, ell=ell, m=m)
            for n in _support(sp.s, -D, reach1 - 1):
                lhs = far[m].coeff(L * n) - top * far[m - 1].coeff(n)
                g.check(n, lhs, b(L ** (m + 1) * n) - t * chiD * b(L**m * n), None)
        g = rep.group(line="lemma2", k=sp.k, s=sp.s, D=D, ell=ell, m=m)
        for n in ns:
            if n % ell == 0 and n % L:
                g.check(n, c(m, n), b(L**m * n) - t * chiD * b(L ** (m - 1) * n), None)
        g = rep.group(line="lemma3", k=sp.k, s=sp.s, D=D, ell=ell, m=m)
        for n in ns:
            if n % ell:
                u = t * kronecker(12 * n, ell)
                tail = sum(u**j * b(L ** (m - j) * n) for j in range(1, m + 1))
                g.check(n, c(m, n), b(L**m * n) + (1 - kronecker(-D * n, ell)) * tail, None)
        if m >= 2:
            g = rep.group(line="recursion", k=sp.k, s=sp.s, D=D, ell=ell, m=m)
            prev = f_dm_sequence(ctx, D, m - 1, L * (reach - 1) + 1, base=f)
            step = t_ell2(ctx, prev[m - 1])
            for n in range(-(L**m) * D, reach, 24):
                g.check(n, c(m, n), step.coeff(n) - top * prev[m - 2].coeff(n), None)
    return rep


def suite_tech_three(spec: SuiteSpec) -> CongruenceReport:
    """The l = 3 composite: F = 3^((2k-s-2)m) f_{9^m D} for spaces with 3 | s, 9 not dividing D."""
    rep = CongruenceReport("tech3", spec.to_dict())
    spaces = spec.spaces or tuple(sp for sp in Z_SPACES if sp.s % 3 == 0 and sp.k in (4, 6, 14))
    for sp in spaces:
        ctx = HeckeContext(sp, 3)
        for D in (sp.s, sp.s + 24):
            if D % 9 == 0:
                continue
            for m in (tuple(x for x in spec.m_values if x >= 1) or (1, 2)):
                P = max(-(9**m) * D + TECH_WINDOW, TECH_POSITIVE)
                Dm = 9**m * D
                F = f_dm_sequence(ctx, D, m, P)[m]
                R = f_basis(PoleLabel(sp, Dm), P)
                scale = exact_power(3, sp.top_exponent * m)
                g = rep.group(line="main-3", k=sp.k, s=sp.s, D=D, ell=3, m=m)
                for n in range(-Dm, P, 24):
                    g.check(n, F.coeff(n), scale * R.coeff(n), None)
    return rep


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

SUITES: dict[str, Callable[[SuiteSpec], CongruenceReport]] = {
    "ramanujan": suite_ramanujan,
    "ak": suite_ak_cong,
    "bd": suite_bd_equality,
    "wy": suite_wy,
    "tech": suite_tech,
    "tech3": suite_tech_three,
    "crank": suite_crank,
    "rank": suite_rank,
    "spt": suite_spt_main,
    "hdiv": suite_h_divisibility,
    "identities": suite_identities,
}


def _run_one(spec: SuiteSpec) -> CongruenceReport:
    return SUITES[spec.suite](spec)


def run_suite(spec: SuiteSpec) -> CongruenceReport:
    """Run a suite; with jobs > 1 the primes are split across worker processes."""
    if spec.suite not in SUITES:
        raise KeyError(f"unknown suite {spec.suite!r}")
    primes = spec.primes
    if spec.jobs <= 1 or len(primes) <= 1:
        return _run_one(spec)
    parts = [SuiteSpec(**{**_fields(spec), "primes": (ell,), "jobs": 1}) for ell in primes]
    with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
        reports = list(pool.map(_run_one, parts))
    merged = CongruenceReport(spec.suite, spec.to_dict())
    for r in reports:  # pool.map keeps the canonical order of primes
        merged.merge(r)
    return merged


def _fields(spec: SuiteSpec) -> dict:
    return {f: getattr(spec, f) for f in spec.__dataclass_fields__}


def mode_agreement(spec: SuiteSpec, fraction: float = 0.1, seed: int = 0) -> tuple[int, list[tuple]]:
    """Compare sampled g_{k,s} residues between exact and modular computation.

    Returns (number compared, mismatches).  Uses the same requests the ak suite
    would make, sampled at ``fraction``.
    """
    rng = random.Random(seed)
    spaces = _ak_spaces(spec)
    ms = sorted(m for m in spec.m_values if m >= 1) or [1]
    compared, bad = 0, []
    for ell in spec.primes or (5, 7):
        requests, moduli = {}, {}
        L = 9 if ell == 3 else ell * ell
        for sp in spaces:
            if ell == 3 and sp.s % 3:
                continue
            need = set()
            for n in _support(sp.s, -sp.s, spec.n_max):
                need.update((n, L * n))
                for m in ms:
                    need.update((L**m * n, L ** (m + 1) * n))
            picked = sorted(x for x in need if rng.random() < fraction)
            if picked:
                requests[sp] = picked
                moduli[sp] = ell ** (sp.top_exponent * max(ms))
        if not requests:
            continue
        exact = g_coefficients(requests, {})
        modular = g_coefficients(requests, moduli)
        for sp, ns in requests.items():
            for n in ns:
                compared += 1
                if exact[sp][n] % moduli[sp] != modular[sp][n]:
                    bad.append((sp.k, sp.s, ell, n))
    return compared, bad
