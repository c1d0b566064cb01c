"""Hecke operators T(l^2), T(9), T(l^2m) on coefficient series, and the composite F_D^(m).

Operators work on a plain :class:`Q24Series` together with a
:class:`HeckeContext` naming the space (k, s) and the prime.  When one of the
powers k - (s+3)/2 or 2k - s - 2 is negative the output is an exact rational
series.

Precision: an input known below ``P`` gives an output known below
``ceil(P / l^2)`` when P > 0 and below ``l^2 * P`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import exact_power, is_prime, kronecker
from .modforms import InvalidPole, PoleLabel, SpaceLabel, f_basis
from .qseries import PrecisionExceeded, Q24Series, add, scale

__all__ = [
    "HeckeContext",
    "InvalidContext",
    "output_precision",
    "input_precision",
    "t_ell2",
    "t_9",
    "t_ell2m",
    "f_dm",
    "f_dm_sequence",
]


class InvalidContext(ValueError):
    pass


@dataclass(frozen=True)
class HeckeContext:
    space: SpaceLabel
    ell: int

    def __post_init__(self):
        if not is_prime(self.ell):
            raise InvalidContext(f"ell={self.ell} is not prime")
        if self.ell == 3:
            if self.space.s % 3:
                raise InvalidContext(f"T(9) needs 3 | s, got s={self.space.s}")
        elif self.ell < 5:
            raise InvalidContext(f"ell must be >= 5 (or 3 when 3 | s), got {self.ell}")

    @property
    def sign(self) -> int:
        """(-1|l)^((s+1)/2)."""
        return kronecker(-1, self.ell) ** ((self.space.s + 1) // 2)

    def middle_char(self, n: int) -> int:
        """The character in the middle Hecke term: (12n|l), or (n/3|3) when l = 3."""
        if self.ell == 3:
            return kronecker(n // 3, 3)
        return kronecker(12 * n, self.ell)

    def pole_char(self, D: int) -> int:
        """The character of the composite operator: (-12D|l), or (-D/3|3) when l = 3."""
        if self.ell == 3:
            return kronecker(-(D // 3), 3)
        return kronecker(-12 * D, self.ell)


def output_precision(ell: int, P: int, m: int = 1) -> int:
    for _ in range(m):
        L = ell * ell
        P = -(-P // L) if P > 0 else P * L
    return P


def input_precision(ell: int, P: int, m: int = 1) -> int:
    """Smallest input precision whose m-fold image is known below P."""
    L = ell ** (2 * m)
    if P > 0:
        return L * (P - 1) + 1
    return -(-P // L)


def _apply(ctx: HeckeContext, f: Q24Series) -> Q24Series:
    ell = ctx.ell
    L = ell * ell
    k_mid = ctx.space.mid_exponent
    k_top = ctx.space.top_exponent
    if f.residue != ctx.space.residue:
        raise ValueError(f"series residue {f.residue} does not match space {ctx.space}")
    mod = f.modulus
    # scale everything by l^E so the three terms have integer weights
    E = max(0, -k_mid, -k_top)
    if E and mod and mod % ell == 0:
        raise ValueError(f"negative power of {ell} has no image mod {mod}")
    w_lead = ell**E
    w_mid = ell ** (E + k_mid) * ctx.sign
    w_top = ell ** (E + k_top)

    P = f.precision
    P_out = output_precision(ell, P)
    lo = f.min_exp
    bound = min(-(-lo // L), lo, L * lo)
    r = f.residue
    lo_out = bound - (bound - r) % 24
    size = max(0, (P_out - lo_out + 23) // 24)
    nums = f.nums
    n_in = len(nums)
    out = [0] * size

    def a(n: int) -> int:
        # n / 9 can leave the residue class when l = 3
        i, off = divmod(n - lo, 24)
        return nums[i] if off == 0 and 0 <= i < n_in else 0

    if ell == 3:
        char = [kronecker(x, 3) for x in range(3)]
        mid = lambda n: char[(n // 3) % 3]  # noqa: E731
    else:
        char = [kronecker(12 * x, ell) for x in range(ell)]
        mid = lambda n: char[n % ell]  # noqa: E731
    for i in range(size):
        n = lo_out + 24 * i
        v = w_lead * a(L * n)
        x = a(n)
        if x:
            c = mid(n)
            if c:
                v += c * w_mid * x
        if n % L == 0:
            v += w_top * a(n // L)
        out[i] = v
    return Q24Series(r, lo_out, P_out, out, f.den * w_lead, mod)


def t_ell2(ctx: HeckeContext, f: Q24Series) -> Q24Series:
    """f | T(l^2) for a prime l >= 5."""
    if ctx.ell < 5:
        raise InvalidContext("t_ell2 needs ell >= 5; use t_9 for ell = 3")
    return _apply(ctx, f)


def t_9(ctx: HeckeContext, f: Q24Series) -> Q24Series:
    """f | T(9), defined when 3 | s."""
    if ctx.ell != 3:
        raise InvalidContext("t_9 needs ell = 3")
    return _apply(ctx, f)


def _top_factor(ctx: HeckeContext) -> int | Fraction:
    return exact_power(ctx.ell, ctx.space.top_exponent)


def t_ell2m(ctx: HeckeContext, f: Q24Series, m: int) -> Q24Series:
    """f | T(l^(2m)) from T(l^(2j+2)) = T(l^2) T(l^(2j)) - l^(2k-s-2) T(l^(2j-2)), T(1) = id."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return _hecke_powers(ctx, f, m)[m]


def _hecke_powers(ctx: HeckeContext, f: Q24Series, m: int) -> list[Q24Series]:
    """[f|T(1), f|T(l^2), ..., f|T(l^(2m))]."""
    c = _top_factor(ctx)
    seq = [f, _apply(ctx, f)]
    for _ in range(2, m + 1):
        seq.append(add(_apply(ctx, seq[-1]), scale(-c, seq[-2])))
    return seq


def _composite(ctx: HeckeContext, D: int, powers: list[Q24Series], m: int) -> Q24Series:
    if m == 0:
        return powers[0]
    c = exact_power(ctx.ell, ctx.space.mid_exponent) * ctx.sign * ctx.pole_char(D)
    if c == 0:
        return powers[m]
    return add(powers[m], scale(-c, powers[m - 1]))


def _check_pole(ctx: HeckeContext, D: int) -> None:
    PoleLabel(ctx.space, D)  # raises InvalidPole
    if D % (ctx.ell * ctx.ell) == 0:
        raise InvalidPole(f"{ctx.ell}^2 divides D={D}")


def f_dm(
    ctx: HeckeContext,
    D: int,
    m: int,
    P: int,
    modulus: int | None = None,
    base: Q24Series | None = None,
) -> Q24Series:
    """F_D^(m) = f_D | (T(l^2m) - l^(k-(s+3)/2) (-1|l)^((s+1)/2) chi(D) T(l^(2m-2))), known below P.

    ``base`` may supply f_D (at any sufficient precision) to avoid rebuilding it.
    """
    return f_dm_sequence(ctx, D, m, P, modulus, base)[m]


def f_dm_sequence(
    ctx: HeckeContext,
    D: int,
    m: int,
    P: int,
    modulus: int | None = None,
    base: Q24Series | None = None,
) -> list[Q24Series]:
    """[F_D^(0), ..., F_D^(m)], each truncated to P (F^(j) for j < m is known further)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    _check_pole(ctx, D)
    P_in = input_precision(ctx.ell, P, m)
    if base is None:
        base = f_basis(PoleLabel(ctx.space, D), max(P_in, -D + 24), modulus)
    elif base.precision < P_in:
        raise PrecisionExceeded(f"f_D known below {base.precision}, need {P_in}")
    powers = _hecke_powers(ctx, base, m) if m else [base]
    out = []
    for j in range(m + 1):
        F = _composite(ctx, D, powers, j)
        if F.precision < P:
            raise PrecisionExceeded(f"F^({j}) known below {F.precision}, need {P}")
        out.append(F.truncate(P))
    return out
