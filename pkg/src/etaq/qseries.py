"""Truncated series in q^(1/24) supported on one residue class mod 24.

A :class:`Q24Series` stores the coefficients of ``sum a(n) q^(n/24)`` for every
``n`` congruent to ``residue`` mod 24 with ``min_exp <= n < precision``.  Storage
is dense, stepped by 24, as a list of integer numerators over one common
denominator, so the exact domain is the rationals without paying for a
``Fraction`` per coefficient.  A series may instead carry a ``modulus``, in which
case the coefficients live in Z/modulus and the denominator is always 1.

Two multiplication kernels are available.  ``schoolbook`` is the reference
convolution; ``kronecker`` packs both operands into one big integer each,
multiplies with GMP and unpacks.  :func:`convolve` picks between them by size
and the two are cross-checked in the test-suite.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping

import gmpy2

_mpz = gmpy2.mpz

__all__ = [
    "Q24Series",
    "PrecisionExceeded",
    "ResidueMismatch",
    "ZeroLeadingCoefficient",
    "SerializationError",
    "convolve",
    "schoolbook",
    "kronecker_product",
    "coeff",
    "mul",
    "add",
    "scale",
    "pow_nonneg",
    "invert",
    "equal_upto",
    "to_json",
    "from_json",
]

FORMAT_VERSION = 1

# below this many terms in the shorter factor the quadratic loop wins
_SCHOOLBOOK_CUTOFF = 24


class PrecisionExceeded(ValueError):
    """A coefficient at or beyond the known precision was requested."""


class ResidueMismatch(ValueError):
    """Two series on different residue classes were added."""


class ZeroLeadingCoefficient(ZeroDivisionError):
    """Inversion of a series whose coefficient at min_exp is not a unit."""


class SerializationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer convolution kernels
# ---------------------------------------------------------------------------


def schoolbook(a: list[int], b: list[int], n: int, modulus: int | None = None) -> list[int]:
    """First n coefficients of the product of integer sequences a and b."""
    if len(a) > len(b):
        a, b = b, a
    out = [0] * n
    lb = len(b)
    for i, x in enumerate(a):
        if i >= n:
            break
        if not x:
            continue
        lim = min(lb, n - i)
        for j in range(lim):
            out[i + j] += x * b[j]
    if modulus:
        out = [v % modulus for v in out]
    return out


def _pack(seq: list[int], nb: int, half: int) -> int:
    if half:
        blob = b"".join((x + half).to_bytes(nb, "little") for x in seq)
        return int.from_bytes(blob, "little") - int.from_bytes(half.to_bytes(nb, "little") * len(seq), "little")
    return int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in seq), "little")


def kronecker_product(a: list[int], b: list[int], n: int, modulus: int | None = None) -> list[int]:
    """First n coefficients of a*b by Kronecker substitution.

    Signed digits are handled with a constant offset of half the slot range,
    so no borrow propagation is needed while unpacking.  With a modulus the
    inputs must already be reduced into [0, modulus).
    """
    a = a[:n]
    b = b[:n]
    if not a or not b or n <= 0:
        return [0] * max(n, 0)
    if modulus:
        ma = mb = modulus - 1
    else:
        ma = max(map(abs, a))
        mb = max(map(abs, b))
    if ma == 0 or mb == 0:
        return [0] * n
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 1
    nb = bits // 8 + 1
    half = 0 if modulus else 1 << (8 * nb - 1)
    x = _mpz(_pack(a, nb, half))
    y = _mpz(_pack(b, nb, half))
    z = x * y
    width = 8 * nb * n
    if half:
        z += int.from_bytes(half.to_bytes(nb, "little") * n, "little")
    z = int(gmpy2.f_mod_2exp(z, width))
    data = z.to_bytes(nb * n, "little")
    fb = int.from_bytes
    if half:
        return [fb(data[i : i + nb], "little") - half for i in range(0, nb * n, nb)]
    return [fb(data[i : i + nb], "little") % modulus for i in range(0, nb * n, nb)]


def convolve(a: list[int], b: list[int], n: int, modulus: int | None = None) -> list[int]:
    """First n coefficients of a*b, choosing the cheaper kernel."""
    if n <= 0:
        return []
    la, lb = min(len(a), n), min(len(b), n)
    if la == 0 or lb == 0:
        return [0] * n
    short, long_ = (a[:la], b[:lb]) if la <= lb else (b[:lb], a[:la])
    nnz = sum(1 for v in short if v)
    if nnz <= _SCHOOLBOOK_CUTOFF or len(short) <= _SCHOOLBOOK_CUTOFF:
        return schoolbook(short, long_, n, modulus)
    return kronecker_product(a, b, n, modulus)


def _inverse_seq(h: list[int], n: int, modulus: int | None) -> list[int]:
    """First n terms of 1/h for an integer sequence whose head is a unit (+-1 or mod-invertible)."""
    c0 = h[0]
    if modulus:
        inv0 = pow(c0, -1, modulus)
    else:
        inv0 = c0  # c0 is +-1
    if n <= 64:
        g = [0] * n
        g[0] = inv0 % modulus if modulus else inv0
        for i in range(1, n):
            acc = 0
            for j in range(1, min(i, len(h) - 1) + 1):
                hj = h[j]
                if hj:
                    acc += hj * g[i - j]
            v = -acc * inv0
            g[i] = v % modulus if modulus else v
        return g
    # Newton iteration: g <- g - q^prec * g * (h*g - 1)/q^prec
    g = _inverse_seq(h, 64, modulus)
    prec = 64
    while prec < n:
        prec2 = min(2 * prec, n)
        e = convolve(h[:prec2], g, prec2, modulus)
        err = e[prec:prec2]
        corr = convolve(g, err, prec2 - prec, modulus)
        if modulus:
            g = g + [(-c) % modulus for c in corr]
        else:
            g = g + [-c for c in corr]
        prec = prec2
    return g


# ---------------------------------------------------------------------------
# the series type
# ---------------------------------------------------------------------------


def _slots(lo: int, hi: int) -> int:
    """Number of exponents n = lo, lo+24, ... strictly below hi."""
    return max(0, (hi - lo + 23) // 24)


class Q24Series:
    """Immutable truncated series sum a(n) q^(n/24), n = residue mod 24.

    Coefficients are exact for every n < precision.  ``nums[i] / den`` is the
    coefficient at ``min_exp + 24*i``.
    """

    __slots__ = ("residue", "min_exp", "precision", "nums", "den", "modulus")

    def __init__(
        self,
        residue: int,
        min_exp: int,
        precision: int,
        nums: Iterable[int],
        den: int = 1,
        modulus: int | None = None,
        _normalized: bool = False,
    ):
        residue %= 24
        if (min_exp - residue) % 24:
            raise ValueError(f"min_exp {min_exp} is not congruent to residue {residue} mod 24")
        if precision < min_exp:
            precision = min_exp
        nums = list(nums)
        size = _slots(min_exp, precision)
        if len(nums) < size:
            nums.extend([0] * (size - len(nums)))
        elif len(nums) > size:
            del nums[size:]
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if modulus is not None:
            if modulus < 2:
                raise ValueError("modulus must be >= 2")
            if den != 1:
                inv = pow(den, -1, modulus)
                nums = [x * inv % modulus for x in nums]
                den = 1
            elif not _normalized:
                nums = [x % modulus for x in nums]
        elif not _normalized:
            if den < 0:
                den = -den
                nums = [-x for x in nums]
            if den != 1:
                g = den
                for x in nums:
                    if x:
                        g = gcd(g, x)
                        if g == 1:
                            break
                if g > 1:
                    den //= g
                    nums = [x // g for x in nums]
        self.residue = residue
        self.min_exp = min_exp
        self.precision = precision
        self.nums = nums
        self.den = den
        self.modulus = modulus

    def __eq__(self, other) -> bool:
        if not isinstance(other, Q24Series):
            return NotImplemented
        return (
            self.residue == other.residue
            and self.precision == other.precision
            and self.modulus == other.modulus
            and dict(self.nonzero_items()) == dict(other.nonzero_items())
        )

    __hash__ = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_dict(
        cls,
        coeffs: Mapping[int, int | Fraction],
        precision: int,
        residue: int | None = None,
        min_exp: int | None = None,
        modulus: int | None = None,
    ) -> "Q24Series":
        """Build from a sparse {exponent: coefficient} map."""
        keys = [n for n, c in coeffs.items() if c and n < precision]
        if residue is None:
            if not keys:
                raise ValueError("residue is required for an empty series")
            residue = keys[0] % 24
        if any((n - residue) % 24 for n in keys):
            raise ResidueMismatch("exponents on more than one residue class")
        if min_exp is None:
            # an empty series sits at the last on-residue exponent <= precision
            min_exp = min(keys) if keys else precision - (precision - residue) % 24
        den = 1
        for n in keys:
            den = den * Fraction(coeffs[n]).denominator // gcd(den, Fraction(coeffs[n]).denominator)
        nums = [0] * _slots(min_exp, precision)
        for n in keys:
            if n < min_exp:
                raise ValueError(f"exponent {n} below min_exp {min_exp}")
            c = Fraction(coeffs[n])
            nums[(n - min_exp) // 24] = c.numerator * (den // c.denominator)
        return cls(residue, min_exp, precision, nums, den, modulus)

    @classmethod
    def one(cls, precision: int, modulus: int | None = None) -> "Q24Series":
        return cls(0, 0, precision, [1], 1, modulus)

    @classmethod
    def zero(cls, residue: int, min_exp: int, precision: int, modulus: int | None = None) -> "Q24Series":
        return cls(residue, min_exp, precision, [], 1, modulus)

    # -- access --------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.nums)

    def exponents(self) -> range:
        return range(self.min_exp, self.precision, 24)

    def _index(self, n: int) -> int | None:
        if n >= self.precision:
            raise PrecisionExceeded(f"coefficient q^({n}/24) requested, precision is {self.precision}")
        if n < self.min_exp or (n - self.residue) % 24:
            return None
        return (n - self.min_exp) // 24

    def coeff(self, n: int) -> Fraction | int:
        """Coefficient of q^(n/24): a Fraction in the exact domain, an int mod ``modulus`` otherwise."""
        i = self._index(n)
        if i is None:
            return 0 if self.modulus else Fraction(0)
        if self.modulus:
            return self.nums[i]
        return Fraction(self.nums[i], self.den)

    def int_coeff(self, n: int) -> int:
        """Coefficient as a plain int; raises if it is not integral."""
        i = self._index(n)
        if i is None:
            return 0
        x = self.nums[i]
        if self.den == 1:
            return x
        q, r = divmod(x, self.den)
        if r:
            raise ValueError(f"coefficient at {n} is not integral: {Fraction(x, self.den)}")
        return q

    __getitem__ = coeff

    def items(self) -> Iterator[tuple[int, Fraction | int]]:
        """(exponent, coefficient) pairs for every stored slot."""
        for i, x in enumerate(self.nums):
            n = self.min_exp + 24 * i
            yield n, (x if self.modulus else Fraction(x, self.den))

    def nonzero_items(self) -> Iterator[tuple[int, Fraction | int]]:
        for n, c in self.items():
            if c:
                yield n, c

    def is_integral(self) -> bool:
        return self.modulus is not None or self.den == 1

    def leading_exponent(self) -> int | None:
        for i, x in enumerate(self.nums):
            if x:
                return self.min_exp + 24 * i
        return None

    def principal_part(self) -> dict[int, Fraction | int]:
        """Nonzero coefficients at exponents n <= 0."""
        return {n: c for n, c in self.nonzero_items() if n <= 0}

    def __repr__(self) -> str:
        head = ", ".join(f"({n}, {c})" for n, c in list(self.items())[:4])
        dom = f", mod {self.modulus}" if self.modulus else ""
        return f"Q24Series(residue={self.residue}, min_exp={self.min_exp}, precision={self.precision}{dom}: {head}, ...)"

    # -- structural helpers --------------------------------------------------

    def _compatible(self, other: "Q24Series") -> int | None:
        if self.modulus != other.modulus:
            raise ValueError(f"coefficient domains differ: mod {self.modulus} vs mod {other.modulus}")
        return self.modulus

    def truncate(self, precision: int) -> "Q24Series":
        if precision > self.precision:
            raise PrecisionExceeded(f"cannot raise precision {self.precision} to {precision}")
        return Q24Series(self.residue, self.min_exp, precision, self.nums, self.den, self.modulus, _normalized=True)

    def with_min_exp(self, min_exp: int) -> "Q24Series":
        """Same series re-based at a lower (or equal) min_exp, padding zeros."""
        if min_exp > self.min_exp:
            lead = self.leading_exponent()
            if lead is not None and lead < min_exp:
                raise ValueError("would drop nonzero coefficients")
            drop = (min_exp - self.min_exp) // 24
            return Q24Series(self.residue, min_exp, self.precision, self.nums[drop:], self.den, self.modulus, True)
        pad = (self.min_exp - min_exp) // 24
        return Q24Series(self.residue, min_exp, self.precision, [0] * pad + self.nums, self.den, self.modulus, True)

    def shift(self, k: int) -> "Q24Series":
        """Multiply by q^(k/24)."""
        return Q24Series(self.residue + k, self.min_exp + k, self.precision + k, self.nums, self.den, self.modulus, True)

    def reduce(self, modulus: int) -> "Q24Series":
        """Image in Z/modulus.  The denominator must be a unit mod ``modulus``."""
        if self.modulus is not None:
            if self.modulus % modulus:
                raise ValueError(f"cannot reduce mod {self.modulus} series to mod {modulus}")
            return Q24Series(self.residue, self.min_exp, self.precision, self.nums, 1, modulus)
        return Q24Series(self.residue, self.min_exp, self.precision, self.nums, self.den, modulus)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Q24Series") -> "Q24Series":
        return add(self, other)

    def __sub__(self, other: "Q24Series") -> "Q24Series":
        return add(self, scale(-1, other))

    def __neg__(self) -> "Q24Series":
        return scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, Q24Series):
            return mul(self, other)
        return scale(other, self)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Q24Series":
        if e < 0:
            return pow_nonneg(invert(self), -e)
        return pow_nonneg(self, e)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def coeff(f: Q24Series, n: int) -> Fraction | int:
    return f.coeff(n)


def mul(f: Q24Series, g: Q24Series) -> Q24Series:
    """Cauchy product; precision = min(f.P + g.min_exp, g.P + f.min_exp)."""
    modulus = f._compatible(g)
    lo = f.min_exp + g.min_exp
    hi = min(f.precision + g.min_exp, g.precision + f.min_exp)
    size = _slots(lo, hi)
    nums = convolve(f.nums, g.nums, size, modulus)
    return Q24Series(f.residue + g.residue, lo, hi, nums, f.den * g.den, modulus)


def add(f: Q24Series, g: Q24Series) -> Q24Series:
    modulus = f._compatible(g)
    if f.residue != g.residue:
        raise ResidueMismatch(f"residues {f.residue} and {g.residue} differ")
    lo = min(f.min_exp, g.min_exp)
    hi = min(f.precision, g.precision)
    size = _slots(lo, hi)
    den = f.den * g.den // gcd(f.den, g.den)
    out = [0] * size
    for s in (f, g):
        off = (s.min_exp - lo) // 24
        mult = den // s.den
        src = s.nums
        for i in range(min(len(src), size - off)):
            out[off + i] += src[i] * mult
    return Q24Series(f.residue, lo, hi, out, den, modulus)


def scale(c: int | Fraction, f: Q24Series) -> Q24Series:
    c = Fraction(c)
    if f.modulus:
        m = f.modulus
        factor = c.numerator * pow(c.denominator, -1, m) % m
        return Q24Series(f.residue, f.min_exp, f.precision, [x * factor % m for x in f.nums], 1, m, True)
    if c == 0:
        return Q24Series(f.residue, f.min_exp, f.precision, [], 1)
    return Q24Series(f.residue, f.min_exp, f.precision, [x * c.numerator for x in f.nums], f.den * c.denominator)


def pow_nonneg(f: Q24Series, e: int) -> Q24Series:
    """f**e by repeated squaring, with the precision rule of :func:`mul` at each step."""
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    result: Q24Series | None = None
    base = f
    while e:
        if e & 1:
            result = base if result is None else mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    if result is None:
        # f**0 = 1; known wherever f is (1 has no error term)
        return Q24Series.one(f.precision - f.min_exp, f.modulus)
    return result


def invert(f: Q24Series) -> Q24Series:
    """1/f, exact up to precision f.precision - 2*f.min_exp."""
    size = len(f.nums)
    lo = -f.min_exp
    hi = f.precision - 2 * f.min_exp
    modulus = f.modulus
    if size == 0 or f.nums[0] == 0 or (modulus and gcd(f.nums[0], modulus) != 1):
        raise ZeroLeadingCoefficient(f"coefficient at min_exp {f.min_exp} is not invertible")
    h = f.nums
    c0 = h[0]
    if modulus or c0 in (1, -1):
        g = _inverse_seq(h, size, modulus)
        # 1/f = den / h
        return Q24Series(-f.residue, lo, hi, g, 1, modulus) if f.den == 1 else scale(f.den, Q24Series(-f.residue, lo, hi, g, 1, modulus))
    # general rational head: G_i / c0^(i+1) with integer G_i
    G = [0] * size
    G[0] = 1
    for i in range(1, size):
        acc = 0
        cpow = 1
        for j in range(1, i + 1):
            if j < len(h) and h[j]:
                acc += h[j] * G[i - j] * cpow
            cpow *= c0
        G[i] = -acc
    top = c0**size
    nums = [G[i] * c0 ** (size - 1 - i) * f.den for i in range(size)]
    return Q24Series(-f.residue, lo, hi, nums, top)


def equal_upto(f: Q24Series, g: Q24Series, bound: int) -> bool:
    """True iff every coefficient with exponent below ``bound`` agrees."""
    if bound > min(f.precision, g.precision):
        raise PrecisionExceeded(f"bound {bound} exceeds precisions {f.precision}, {g.precision}")
    if f.modulus != g.modulus:
        raise ValueError("coefficient domains differ")
    if f.residue == g.residue and f.den == g.den:
        lo = min(f.min_exp, g.min_exp)
        fa = f.with_min_exp(lo).nums
        ga = g.with_min_exp(lo).nums
        k = _slots(lo, bound)
        return fa[:k] == ga[:k]
    a = {n: c for n, c in f.nonzero_items() if n < bound}
    b = {n: c for n, c in g.nonzero_items() if n < bound}
    return a == b


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def to_dict(f: Q24Series) -> dict:
    doc = {
        "version": FORMAT_VERSION,
        "residue": f.residue,
        "min_exp": f.min_exp,
        "precision": f.precision,
        "coeffs": [[str(c.numerator), str(c.denominator)] if not f.modulus else [str(c), "1"] for _, c in f.items()],
    }
    if f.modulus:
        doc["modulus"] = str(f.modulus)
    return doc


def from_dict(doc: Mapping) -> Q24Series:
    if doc.get("version") != FORMAT_VERSION:
        raise SerializationError(f"unsupported format version {doc.get('version')!r}")
    try:
        residue = int(doc["residue"])
        min_exp = int(doc["min_exp"])
        precision = int(doc["precision"])
        pairs = [(int(a), int(b)) for a, b in doc["coeffs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise SerializationError(f"malformed series document: {exc}") from exc
    modulus = int(doc["modulus"]) if doc.get("modulus") is not None else None
    if len(pairs) != _slots(min_exp, precision):
        raise SerializationError("coefficient count does not match min_exp/precision")
    den = 1
    for _, b in pairs:
        den = den * b // gcd(den, b)
    nums = [a * (den // b) for a, b in pairs]
    return Q24Series(residue, min_exp, precision, nums, den, modulus)


def to_json(f: Q24Series) -> str:
    return json.dumps(to_dict(f), separators=(",", ":"))


def from_json(text: str) -> Q24Series:
    return from_dict(json.loads(text))
