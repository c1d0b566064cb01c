"""The named forms: eta, E_k, Delta, j, g_{k,s} = E_k/eta^s and f_{D,k,s}.

Every constructor takes a target precision ``P`` (exponents in 24ths) and an
optional ``modulus``; the returned series is exact below ``P`` and carries
exactly that precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arith import divisor_sums_upto
from .qseries import PrecisionExceeded, Q24Series, invert, mul, pow_nonneg, scale

__all__ = [
    "WEIGHTS",
    "EISENSTEIN_CONSTANTS",
    "SpaceLabel",
    "PoleLabel",
    "UnsupportedWeight",
    "InvalidSpace",
    "InvalidPole",
    "Z_SPACES",
    "eta_series",
    "eisenstein",
    "eta_inverse_power",
    "g_series",
    "delta_series",
    "j_series",
    "faber_coefficient",
    "f_basis",
    "f_basis_elimination",
]

WEIGHTS = (0, 4, 6, 8, 10, 14)

# -2k/B_k for the weights that occur
EISENSTEIN_CONSTANTS = {4: 240, 6: -504, 8: 480, 10: -264, 14: -24}


class UnsupportedWeight(ValueError):
    pass


class InvalidSpace(ValueError):
    pass


class InvalidPole(ValueError):
    pass


@dataclass(frozen=True)
class SpaceLabel:
    """A pair (k, s) with k in {0,4,6,8,10,14}, 0 < s < 24 odd."""

    k: int
    s: int

    def __post_init__(self):
        if self.k not in WEIGHTS:
            raise InvalidSpace(f"weight k={self.k} not in {WEIGHTS}")
        if not (0 < self.s < 24 and self.s % 2 == 1):
            raise InvalidSpace(f"s={self.s} must be odd with 0 < s < 24")

    @property
    def residue(self) -> int:
        return -self.s % 24

    @property
    def mid_exponent(self) -> int:
        """k - (s+3)/2, the power of ell in the middle Hecke term."""
        return self.k - (self.s + 3) // 2

    @property
    def top_exponent(self) -> int:
        """2k - s - 2, the power of ell in the last Hecke term."""
        return 2 * self.k - self.s - 2

    def __str__(self) -> str:
        return f"({self.k},{self.s})"


Z_SPACES = tuple(SpaceLabel(k, s) for k in WEIGHTS for s in range(1, 24, 2))


@dataclass(frozen=True)
class PoleLabel:
    space: SpaceLabel
    D: int

    def __post_init__(self):
        if self.D <= 0 or (self.D - self.space.s) % 24:
            raise InvalidPole(f"D={self.D} must be positive and congruent to s={self.space.s} mod 24")

    @property
    def t(self) -> int:
        return (self.D - self.space.s) // 24


# ---------------------------------------------------------------------------


def eta_series(P: int, modulus: int | None = None) -> Q24Series:
    """q^(1/24) prod (1 - q^n) = sum_j (-1)^j q^((6j+1)^2/24)."""
    if P <= 1:
        raise ValueError("eta_series needs P > 1")
    coeffs = {}
    j = 0
    while (6 * j + 1) ** 2 < P or (6 * -j + 1) ** 2 < P:
        for jj in {j, -j}:
            n = (6 * jj + 1) ** 2
            if n < P:
                coeffs[n] = -1 if jj % 2 else 1
        j += 1
    return Q24Series.from_dict(coeffs, P, residue=1, min_exp=1, modulus=modulus)


@lru_cache(maxsize=32)
def _sigma_table(r: int, n_max: int, modulus: int | None) -> tuple[int, ...]:
    return tuple(divisor_sums_upto(r, n_max, modulus))


def eisenstein(k: int, P: int, modulus: int | None = None) -> Q24Series:
    """E_k with E_0 := 1; coefficient of q^n is c_k sigma_{k-1}(n) for n >= 1."""
    if k not in WEIGHTS:
        raise UnsupportedWeight(f"no Eisenstein series of weight {k} here")
    n_terms = max(0, (P + 23) // 24)
    if k == 0 or n_terms <= 1:
        return Q24Series(0, 0, P, [1] if n_terms else [], 1, modulus)
    c = EISENSTEIN_CONSTANTS[k]
    sig = _sigma_table(k - 1, n_terms - 1, modulus)
    nums = [1] + [c * sig[n] for n in range(1, n_terms)]
    return Q24Series(0, 0, P, nums, 1, modulus)


_ETA_INVERSE: dict[tuple[int, int | None], Q24Series] = {}


def eta_inverse_power(s: int, P: int, modulus: int | None = None) -> Q24Series:
    """eta^(-s) to precision P (min_exp -s).  The longest expansion per (s, modulus) is kept."""
    key = (s, modulus)
    have = _ETA_INVERSE.get(key)
    if have is None or have.precision < P:
        eta_s = pow_nonneg(eta_series(P + 2 * s + 24, modulus), s)
        have = invert(eta_s).truncate(P)
        _ETA_INVERSE[key] = have
    return have.truncate(P)


def g_series(space: SpaceLabel, P: int, modulus: int | None = None) -> Q24Series:
    """g_{k,s} = E_k / eta^s."""
    inv = eta_inverse_power(space.s, P + space.s + 24, modulus)
    E = eisenstein(space.k, P + space.s + 24, modulus)
    return mul(E, inv).truncate(P)


def delta_series(P: int, modulus: int | None = None) -> Q24Series:
    return pow_nonneg(eta_series(max(P, 2), modulus), 24).truncate(P)


@lru_cache(maxsize=4)
def j_series(P: int, modulus: int | None = None) -> Q24Series:
    """j = E_4^3 / Delta = q^-1 + 744 + 196884 q + ..."""
    D = delta_series(P + 48, modulus)
    E4 = eisenstein(4, P + 48, modulus)
    return mul(pow_nonneg(E4, 3), invert(D)).truncate(P)


_J_COEFFS: dict[int | None, list[int]] = {}


def _j_coefficients(n_max: int, modulus: int | None) -> list[int]:
    """[c(0), ..., c(n_max)] for j - 744 = q^-1 + sum c(n) q^n (c(0) = 0), grown on demand."""
    have = _J_COEFFS.get(modulus)
    if have is None or len(have) <= n_max:
        j = j_series(24 * (n_max + 1), modulus)
        have = [j.int_coeff(24 * n) if not modulus else j.coeff(24 * n) for n in range(n_max + 1)]
        have[0] = 0
        _J_COEFFS[modulus] = have
    return have


def faber_coefficient(c: list[int], m: int, n: int) -> int:
    """Coefficient of q^n (n >= 1) in j_m = q^-m + O(q), from the coefficients c of j - 744.

    j_m is the image of j - 744 under the weight-zero Hecke operator, so
    c_m(n) = sum_{d | (m, n)} (m/d) c(mn/d^2).
    """
    total = 0
    for d in range(1, min(m, n) + 1):
        if m % d == 0 and n % d == 0:
            total += (m // d) * c[m * n // (d * d)]
    return total


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
        d += 1
    return out


_G_INVERSE: dict[tuple[SpaceLabel, int | None], list[int]] = {}


def _g_inverse(space: SpaceLabel, n: int, modulus: int | None) -> list[int]:
    """First n coefficients of 1/g_{k,s} = q^(s/24)(1 + ...), kept per space and grown on demand."""
    key = (space, modulus)
    have = _G_INVERSE.get(key)
    if have is None or len(have) < n:
        g = g_series(space, -space.s + 24 * n, modulus)
        inv = invert(g)
        have = [inv.int_coeff(space.s + 24 * i) for i in range(n)]
        _G_INVERSE[key] = have
    return have[:n]


# below this many positive output slots the product g * W is formed coefficientwise
_DIRECT_SLOTS = 32


def f_basis(label: PoleLabel, P: int, modulus: int | None = None) -> Q24Series:
    """f_{D,k,s}: the form in the space of g_{k,s} with principal part q^(-D/24).

    Writes f = g_{k,s} * W with W a polynomial in j, expanded in the Faber basis
    j_i = q^-i + O(q).  Since g * j_i has principal part [g q^-i]_{<=0}, the
    coefficients of W are the polar and constant terms of q^(-D/24)/g, and the
    positive part of W is assembled from the j coefficients.
    """
    space, D, t = label.space, label.D, label.t
    if P <= -D:
        raise PrecisionExceeded(f"precision {P} does not reach the pole at {-D}")
    if t == 0:
        return g_series(space, P, modulus)
    m_max = max(0, (P + space.s - 1) // 24)
    if m_max == 0:
        # nothing above the principal part is requested
        return Q24Series.from_dict({-D: 1}, P, residue=space.residue, min_exp=-D, modulus=modulus)
    # x_i = coefficient of q^-i in q^(-D/24) / g, i = 0..t
    inv = _g_inverse(space, t + 1, modulus)
    x = [inv[t - i] for i in range(t + 1)]
    # positive part of W = sum_i x_i j_i: exponents 24m with 24m - s < P
    w = [x[i] for i in range(t, 0, -1)] + [x[0]]
    if m_max:
        c = _j_coefficients(t * m_max, modulus)
        for m in range(1, m_max + 1):
            acc = 0
            for d in _divisors(m):
                # i runs over multiples of d: i = d*i', contribution (i/d) c(i m / d^2)
                md = m // d
                for ip in range(1, t // d + 1):
                    xi = x[d * ip]
                    if xi:
                        acc += xi * ip * c[ip * md]
            w.append(acc % modulus if modulus else acc)
    if m_max > _DIRECT_SLOTS:
        g = g_series(space, max(P, 0) + 24 * t + 24, modulus)
        W = Q24Series(0, -24 * t, 24 * m_max + 24, w, 1, modulus)
        return mul(g, W).truncate(P)
    # The polar slots are q^(-D/24) exactly, by the choice of x.  The positive
    # slot at 24m - s is sum over r + c = m of W(24r) g(24c - s).
    g = g_series(space, -space.s + 24 * (t + m_max + 1), modulus)
    gn = [g.int_coeff(-space.s + 24 * c) for c in range(t + m_max + 1)]
    coeffs = {-D: 1}
    for m in range(1, m_max + 1):
        acc = 0
        for idx in range(t + m + 1):  # W exponent 24*(idx - t)
            wv = w[idx]
            if wv:
                acc += wv * gn[m + t - idx]
        if acc:
            coeffs[24 * m - space.s] = acc % modulus if modulus else acc
    return Q24Series.from_dict(coeffs, P, residue=space.residue, min_exp=-D, modulus=modulus)


def f_basis_elimination(label: PoleLabel, P: int) -> Q24Series:
    """Reference construction of f_{D,k,s} by integer elimination over g * j^i.

    Quadratic in t and only meant for small D; :func:`f_basis` is the working path.
    """
    space, D, t = label.space, label.D, label.t
    P0 = max(P, 24)
    g = g_series(space, P0 + 24 * t + 24)
    j = j_series(P0 + 24 * t + space.s + 48)
    basis = [g]
    for _ in range(t):
        basis.append(mul(basis[-1], j))
    f = basis[t]
    # clear every negative exponent other than -D, from the top pole down
    for i in range(t - 1, -1, -1):
        n = -(space.s + 24 * i)
        c = f.coeff(n)
        if c:
            f = f - scale(c, basis[i])
    if f.precision < P:
        raise PrecisionExceeded(f"elimination reached precision {f.precision} < {P}")
    return f.truncate(P)
