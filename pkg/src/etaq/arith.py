"""Exact scalar arithmetic and elementary number theory.

Everything here works on Python ints and :class:`fractions.Fraction`; nothing
ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = [
    "Fraction",
    "kronecker",
    "divisor_sum",
    "divisor_sums_upto",
    "is_prime",
    "factorize",
    "valuation",
    "exact_power",
]

# Deterministic Miller-Rabin witnesses; correct for n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), extended to every integer a and n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # strip powers of two from n
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a|n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 by trial division, as ((p, e), ...)."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def divisor_sum(k: int, n: int) -> int:
    """sigma_k(n) = sum of d**k over the positive divisors d of n."""
    if n < 1:
        raise ValueError(f"divisor_sum needs n >= 1, got {n}")
    total = 1
    for p, e in factorize(n):
        if k == 0:
            total *= e + 1
        else:
            pk = p**k
            total *= (pk ** (e + 1) - 1) // (pk - 1)
    return total


def divisor_sums_upto(k: int, n_max: int, modulus: int | None = None) -> list[int]:
    """[sigma_k(0), ..., sigma_k(n_max)] with sigma_k(0) := 0, by a multiplicative sieve.

    With ``modulus`` every entry is reduced into [0, modulus).
    """
    sig = [0] * (n_max + 1)
    if n_max < 1:
        return sig
    spf = list(range(n_max + 1))
    i = 2
    while i * i <= n_max:
        if spf[i] == i:
            for j in range(i * i, n_max + 1, i):
                if spf[j] == j:
                    spf[j] = i
        i += 1
    # ppow[n] = sigma_k of the full power of spf(n) dividing n
    ppow = [0] * (n_max + 1)
    rest = [0] * (n_max + 1)
    sig[1] = 1
    for n in range(2, n_max + 1):
        p = spf[n]
        m = n // p
        pk = pow(p, k, modulus) if modulus else p**k
        if m % p:
            ppow[n] = 1 + pk
            rest[n] = m
        else:
            ppow[n] = 1 + pk * ppow[m]
            rest[n] = rest[m]
        val = ppow[n] * sig[rest[n]]
        sig[n] = val % modulus if modulus else val
    return sig


def valuation(p: int, n: int) -> int:
    """p-adic valuation of a nonzero int or Fraction."""
    if n == 0:
        raise ValueError("valuation of zero")
    q = Fraction(n)
    num, den = q.numerator, q.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def exact_power(base: int, e: int) -> Fraction | int:
    """base**e as an int for e >= 0 and an exact Fraction for e < 0."""
    return base**e if e >= 0 else Fraction(1, base ** (-e))


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
