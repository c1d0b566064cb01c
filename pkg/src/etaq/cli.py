"""Command-line front end: ``etaq series | stats | verify``.

Exit codes: 0 success (or all checks pass), 1 some check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import qseries
from .cache import Cache
from .identities import identity_data
from .modforms import (
    EISENSTEIN_CONSTANTS,
    InvalidPole,
    InvalidSpace,
    PoleLabel,
    SpaceLabel,
    UnsupportedWeight,
    eisenstein,
    eta_series,
    f_basis,
    g_series,
)
from .partitions import PartitionStatsConfig, StatTable, build_stat_table
from .verify import SUITES, CongruenceReport, SuiteSpec, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUITE_CHOICES = ("ramanujan", "ak", "bd", "wy", "tech", "crank", "rank", "spt", "hdiv", "identities", "all")
TABLE_SUITES = ("crank", "rank", "spt", "identities", "hdiv")

# per-suite defaults, roughly the acceptance grids
SUITE_DEFAULTS = {
    "ramanujan": {"primes": (5, 7, 11), "m_values": (1, 2, 3), "n_max": 2500},
    "ak": {"primes": (5, 7, 13), "m_values": (1,), "n_max": 2000},
    "bd": {"primes": (5, 7), "m_values": (1, 2), "n_max": 1200},
    "wy": {"primes": (5, 7), "m_values": (1, 2), "n_max": 5000, "odd_n_max": 600},
    "tech": {"primes": (5, 7), "m_values": (1, 2), "n_max": 100},
    "crank": {"primes": (5, 7), "m_values": (1,), "n_max": 2500},
    "rank": {"primes": (5, 7), "m_values": (1,), "n_max": 2500},
    "spt": {"primes": (5, 7, 11), "m_values": (1,), "n_max": 2500},
    "hdiv": {"primes": (5, 7, 11, 13), "m_values": (1,), "n_max": 2500},
    "identities": {"primes": (5, 7), "m_values": (1,), "n_max": 2500},
}


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="etaq", description="Eta-quotient q-series, Hecke operators and partition congruences.")
    ap.add_argument("--cache-dir", help="cache directory (default: $ETAQ_CACHE_DIR or the platform cache dir)")
    ap.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    sub = ap.add_subparsers(dest="command")

    s = sub.add_parser("series", help="print coefficients of a series")
    kind = s.add_mutually_exclusive_group(required=True)
    kind.add_argument("--g", action="store_true", help="g_{k,s} = E_k / eta^s")
    kind.add_argument("--f", action="store_true", help="basis element f_{D,k,s}")
    kind.add_argument("--eta", action="store_true", help="eta^s (s may be negative)")
    kind.add_argument("--eisenstein", action="store_true", help="E_k")
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--s", type=int, default=1)
    s.add_argument("--D", type=int)
    s.add_argument("--terms", type=int, default=10, help="number of stored coefficients to print")
    s.add_argument("--modulus", type=int)
    s.add_argument("--json", action="store_true", help="emit the serialized series")

    t = sub.add_parser("stats", help="partition statistic table")
    t.add_argument("--n-max", type=int, required=True)
    t.add_argument("--j", type=int, default=10, help="highest moment order (even)")
    t.add_argument("--json", action="store_true")
    t.add_argument("--out")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", help="one of " + ", ".join(SUITE_CHOICES))
    v.add_argument("--ell", type=_ints, help="primes, comma separated")
    v.add_argument("--m", type=_ints, help="m values, comma separated")
    v.add_argument("--n-max", type=int)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--mod-domain", action="store_true", help="compute coefficients modulo l^e")
    v.add_argument("--sharpness", action="store_true", help="also check the sharpness witnesses")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", help="write the JSON report here")
    v.add_argument("--json", action="store_true", help="print the JSON report")
    return ap


def _cache(args) -> Cache | None:
    return None if args.no_cache else Cache(args.cache_dir)


def _series(args, cache: Cache | None) -> qseries.Q24Series:
    if args.terms < 1:
        raise UsageError("--terms must be positive")
    try:
        if args.g:
            space = SpaceLabel(args.k, args.s)
            lo, build = -args.s, lambda P: g_series(space, P, args.modulus)
            kind, params = "g", {"k": args.k, "s": args.s}
        elif args.f:
            if args.D is None:
                raise UsageError("--f needs --D")
            label = PoleLabel(SpaceLabel(args.k, args.s), args.D)
            lo, build = -args.D, lambda P: f_basis(label, P, args.modulus)
            kind, params = "f", {"k": args.k, "s": args.s, "D": args.D}
        elif args.eta:
            from .modforms import eta_inverse_power

            if args.s == 0:
                raise UsageError("--eta needs a nonzero --s")
            if args.s > 0:
                lo = args.s
                build = lambda P: qseries.pow_nonneg(eta_series(P, args.modulus), args.s)  # noqa: E731
            else:
                lo = args.s
                build = lambda P: eta_inverse_power(-args.s, P, args.modulus)  # noqa: E731
            kind, params = "eta", {"s": args.s}
        else:
            if args.k not in EISENSTEIN_CONSTANTS:
                raise UsageError(f"E_k available for k in {sorted(EISENSTEIN_CONSTANTS)}")
            lo, build = 0, lambda P: eisenstein(args.k, P, args.modulus)
            kind, params = "eisenstein", {"k": args.k}
    except (InvalidSpace, InvalidPole, UnsupportedWeight) as exc:
        raise UsageError(str(exc))
    P = lo + 24 * args.terms
    params = {**params, "modulus": args.modulus}
    try:
        if cache is None:
            f = build(P)
        else:
            f = cache.series(kind, params, P, lambda: build(P))
    except (InvalidSpace, InvalidPole, UnsupportedWeight) as exc:
        raise UsageError(str(exc))
    return f.with_min_exp(lo).truncate(P)


def cmd_series(args, out) -> int:
    f = _series(args, _cache(args))
    if args.json:
        print(qseries.to_json(f), file=out)
    else:
        pairs = []
        for n, c in f.items():
            pairs.append(f"({n}, {c})")
        print(", ".join(pairs), file=out)
    return EXIT_OK


def _stat_table(n_max: int, order: int, cache: Cache | None) -> StatTable:
    build = lambda: build_stat_table(PartitionStatsConfig(n_max, order))  # noqa: E731
    if cache is None:
        return build()
    return cache.stats(order, n_max, build)


def cmd_stats(args, out) -> int:
    if args.n_max < 0:
        raise UsageError("--n-max must be nonnegative")
    if args.j < 2 or args.j % 2:
        raise UsageError("--j must be an even integer >= 2")
    table = _stat_table(args.n_max, args.j, _cache(args))
    if table.n_max > args.n_max:
        table = StatTable(args.n_max, table.order, {k: v[: args.n_max + 1] for k, v in table.columns.items()})
    text = json.dumps(table.to_dict()) if args.json else table.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


def _suite_spec(name: str, args) -> SuiteSpec:
    d = dict(SUITE_DEFAULTS[name])
    if args.ell:
        d["primes"] = args.ell
    if args.m:
        d["m_values"] = args.m
    if args.n_max is not None:
        d["n_max"] = args.n_max
        if "odd_n_max" in d:
            d["odd_n_max"] = min(d["odd_n_max"], args.n_max)
    return SuiteSpec(
        suite=name,
        mode="mod" if args.mod_domain else "exact",
        sharpness=args.sharpness,
        jobs=max(1, args.jobs),
        **d,
    )


def _run(spec: SuiteSpec, cache: Cache | None) -> CongruenceReport:
    if spec.suite in TABLE_SUITES:
        from .verify import suite_crank, suite_h_divisibility, suite_identities, suite_rank, suite_spt_main

        table = _stat_table(spec.n_max, 10, cache)
        if spec.suite in ("identities", "hdiv"):
            data = identity_data(spec.n_max, table)
            if spec.suite == "hdiv":
                return suite_h_divisibility(spec, data)
            return suite_identities(spec, data)
        return {"crank": suite_crank, "rank": suite_rank, "spt": suite_spt_main}[spec.suite](spec, table)
    return run_suite(spec)


def cmd_verify(args, out) -> int:
    if args.suite not in SUITE_CHOICES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITE_CHOICES)}")
    names = [s for s in SUITE_CHOICES if s != "all"] if args.suite == "all" else [args.suite]
    try:
        specs = [_suite_spec(n, args) for n in names]
    except ValueError as exc:
        raise UsageError(str(exc))
    cache = _cache(args)
    reports = []
    for spec in specs:
        t0 = time.perf_counter()
        try:
            rep = _run(spec, cache)
        except ValueError as exc:
            raise UsageError(f"{spec.suite}: {exc}")
        reports.append(rep)
        print(f"{rep.summary()} [{time.perf_counter() - t0:.1f}s]", file=sys.stderr)
    doc = reports[0].to_dict() if len(reports) == 1 else {"suites": [r.to_dict() for r in reports], "pass": all(r.passed for r in reports)}
    text = json.dumps(doc, indent=1, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text)
    if args.json:
        print(text, file=out)
    else:
        for r in reports:
            print(r.summary(), file=out)
            for w in r.sharpness:
                print(f"  sharpness: {w['claim']}: {'holds' if w['holds'] else 'FAILS'} (value {w['value_mod']} mod {w['modulus']})", file=out)
            for g in r.groups:
                for v in g.violations[:5]:
                    print(f"  violation {g.params}: n={v['n']} lhs={v['lhs']} rhs={v['rhs']} mod {v['modulus']}", file=out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


COMMANDS = {"series": cmd_series, "stats": cmd_stats, "verify": cmd_verify}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"etaq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
