"""
Exact dense, Laurent and cyclic polynomial arithmetic over the integers.

Coefficients are Python ints throughout. A dense polynomial is a tuple of
coefficients starting with the constant term, so 1 - 2q + q^3 is
``DensePoly((1, -2, 0, 1))``. Trailing zeros are always trimmed, which makes
equality structural.

Large products go through Kronecker substitution: the coefficient vector is
packed into one big integer with a fixed number of bits per slot, so the
multiplication itself is a single integer product (or, for a binomial factor
1 - q^m, a single shift-and-subtract). The result is bit-identical to the
schoolbook product, which is kept as :func:`poly_mul_schoolbook`.
"""
from __future__ import annotations

import dataclasses
from array import array
from typing import Iterable, Sequence, Union

from gmpy2 import mpz

# Below this many coefficient pairs schoolbook is faster than packing.
_SCHOOLBOOK_CUTOFF = 4096


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


@dataclasses.dataclass(frozen=True, init=False)
class DensePoly:
    """Polynomial with integer coefficients; ``coeffs[i]`` multiplies q^i.

    >>> DensePoly([1, -1, 0, 0])
    DensePoly((1, -1))
    >>> DensePoly([1, -1]) * DensePoly([1, 0, -1])
    DensePoly((1, -1, -1, 1))
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _trim(list(coeffs)))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> DensePoly:
        if degree < 0:
            raise ValueError("monomial degree must be nonnegative")
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree of the leading term; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: DensePoly) -> DensePoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return DensePoly(out)

    def __neg__(self) -> DensePoly:
        return DensePoly([-c for c in self.coeffs])

    def __sub__(self, other: DensePoly) -> DensePoly:
        return self + (-other)

    def __mul__(self, other: DensePoly) -> DensePoly:
        return poly_mul(self, other)

    def __repr__(self) -> str:
        return f"DensePoly({self.coeffs!r})"


@dataclasses.dataclass(frozen=True, init=False)
class LaurentPoly:
    """Laurent polynomial: ``coeffs[i]`` multiplies q^(offset + i).

    Both ends of ``coeffs`` are nonzero; the zero polynomial has offset 0.

    >>> LaurentPoly(-1, [0, -1, 1])
    LaurentPoly(offset=0, coeffs=(-1, 1))
    """

    offset: int
    coeffs: tuple[int, ...]

    def __init__(self, offset: int, coeffs: Iterable[int]):
        cs = list(coeffs)
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        cs = _trim(cs[start:])
        object.__setattr__(self, "offset", offset + start if cs else 0)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_dense(cls, poly: DensePoly, shift: int = 0) -> LaurentPoly:
        return cls(shift, poly.coeffs)

    @property
    def top(self) -> int:
        """Highest exponent present (offset - 1 for the zero polynomial)."""
        return self.offset + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, exponent: int) -> int:
        i = exponent - self.offset
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def items(self):
        """Pairs (exponent, coefficient) for the nonzero coefficients."""
        return [(self.offset + i, c) for i, c in enumerate(self.coeffs) if c]

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        prod = poly_mul(DensePoly(self.coeffs), DensePoly(other.coeffs))
        return LaurentPoly(self.offset + other.offset, prod.coeffs)

    def __repr__(self) -> str:
        return f"LaurentPoly(offset={self.offset}, coeffs={self.coeffs!r})"


@dataclasses.dataclass(frozen=True, init=False)
class CyclicPoly:
    """Element of Z[q]/(q^d - 1), stored as exactly d coefficients."""

    modulus: int
    coeffs: tuple[int, ...]

    def __init__(self, modulus: int, coeffs: Iterable[int] = ()):
        if modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        cs = list(coeffs)
        if len(cs) > modulus:
            raise ValueError(f"{len(cs)} coefficients do not fit modulus {modulus}")
        cs.extend([0] * (modulus - len(cs)))
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def one(cls, modulus: int) -> CyclicPoly:
        return cls(modulus, [1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __getitem__(self, residue: int) -> int:
        return self.coeffs[residue % self.modulus]

    def __mul__(self, other: CyclicPoly) -> CyclicPoly:
        return cyclic_mul(self, other)


# -- Kronecker packing -------------------------------------------------------


def _slot_bytes(bound: int) -> int:
    """Bytes per slot so that every |c| <= bound fits as a balanced digit."""
    return (bound.bit_length() + 2 + 7) // 8


def _bias(nbytes: int, length: int) -> int:
    # Sum of 2^(K-1) * 2^(K*i), i.e. the midpoint added to every slot.
    slot = b"\x00" * (nbytes - 1) + b"\x80"
    return int.from_bytes(slot * length, "little")


def _pack(coeffs: Sequence[int], nbytes: int) -> mpz:
    half = 1 << (8 * nbytes - 1)
    raw = b"".join((c + half).to_bytes(nbytes, "little") for c in coeffs)
    return mpz(int.from_bytes(raw, "little") - _bias(nbytes, len(coeffs)))


def _unpack(value: mpz, nbytes: int, length: int) -> list[int]:
    half = 1 << (8 * nbytes - 1)
    raw = int(value + _bias(nbytes, length)).to_bytes(nbytes * length, "little")
    from_bytes = int.from_bytes
    return [
        from_bytes(raw[i : i + nbytes], "little") - half
        for i in range(0, nbytes * length, nbytes)
    ]


def _max_abs(coeffs: Sequence[int]) -> int:
    return max((abs(c) for c in coeffs), default=0)


# -- products ----------------------------------------------------------------


def poly_mul_schoolbook(a: DensePoly, b: DensePoly) -> DensePoly:
    """Quadratic reference product; every fast path must agree with it."""
    if a.is_zero() or b.is_zero():
        return DensePoly()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a.coeffs):
        if x == 0:
            continue
        for j, y in enumerate(b.coeffs):
            out[i + j] += x * y
    return DensePoly(out)


def poly_mul(a: DensePoly, b: DensePoly) -> DensePoly:
    """Exact product of two dense polynomials.

    >>> poly_mul(DensePoly([1, -1]), DensePoly([1, 0, -1]))
    DensePoly((1, -1, -1, 1))
    """
    if a.is_zero() or b.is_zero():
        return DensePoly()
    if len(a) * len(b) <= _SCHOOLBOOK_CUTOFF or min(len(a), len(b)) <= 2:
        return poly_mul_schoolbook(a, b)
    bound = _max_abs(a.coeffs) * _max_abs(b.coeffs) * min(len(a), len(b))
    nbytes = _slot_bytes(bound)
    length = len(a) + len(b) - 1
    prod = _pack(a.coeffs, nbytes) * _pack(b.coeffs, nbytes)
    return DensePoly(_unpack(prod, nbytes, length))


class BinomialAccumulator:
    """Running product of binomials (1 - q^x), kept in packed form.

    ``max_factors`` caps how many factors will ever be multiplied in; it
    fixes the slot width, since a product of f binomials has coefficient
    l1-norm at most 2^f. Snapshots can be taken at any point, which lets a
    sweep over n reuse the product for n - 1.
    """

    def __init__(self, max_factors: int):
        self.max_factors = max_factors
        self.nfactors = 0
        # whole 64-bit words per slot keep the packed whole-vector checks cheap
        self._nbytes = -(-_slot_bytes(1 << max_factors) // 8) * 8
        self._packed = mpz(1)
        self._offset = 0
        self._span = 0
        self._zero = False

    def multiply(self, x: int, power: int = 1) -> None:
        if self.nfactors + power > self.max_factors:
            raise ValueError(f"more than {self.max_factors} factors")
        self.nfactors += power
        if x == 0 and power:
            self._zero = True
            return
        k = 8 * self._nbytes
        for _ in range(power):
            if x > 0:
                self._packed -= self._packed << (k * x)
            else:
                self._packed = (self._packed << (-k * x)) - self._packed
                self._offset += x
            self._span += abs(x)

    def snapshot(self) -> LaurentPoly:
        if self._zero:
            return LaurentPoly(0, [])
        return LaurentPoly(
            self._offset, _unpack(self._packed, self._nbytes, self._span + 1)
        )

    def packed(self, sign: int = 1) -> PackedPoly:
        """The current product (times ``sign``) without unpacking it."""
        if self._zero:
            return PackedPoly(0, self._nbytes, 0, mpz(0))
        return PackedPoly(self._offset, self._nbytes, self._span + 1, sign * self._packed)


@dataclasses.dataclass(frozen=True)
class PackedPoly:
    """A Laurent polynomial kept as one integer, sum c_r 2^(8 nbytes r).

    Slot r holds the coefficient of q^(offset + r) as a balanced digit. The
    l1 norm of the coefficients must stay below 2^(8 nbytes - 2), which is
    what lets the whole-vector checks below run without unpacking.
    Two PackedPoly values with equal fields have equal coefficient vectors.
    """

    offset: int
    nbytes: int
    length: int
    value: mpz

    def slots(self) -> bytes:
        """Slot r as an nbytes-wide two's-complement integer, little-endian."""
        size = self.nbytes * self.length
        bias = mpz.from_bytes((b"\x00" * (self.nbytes - 1) + b"\x80") * self.length, "little")
        # value + bias is offset binary per slot; flipping each top bit gives two's complement
        return ((self.value + bias) ^ bias).to_bytes(size, "little")

    def coefficient(self, r: int) -> int:
        """c_r, the coefficient of q^(offset + r)."""
        if not 0 <= r < self.length:
            return 0
        raw = (self.value + _bias(self.nbytes, r + 1)) >> (8 * self.nbytes * r)
        return int(raw & ((1 << (8 * self.nbytes)) - 1)) - (1 << (8 * self.nbytes - 1))

    def is_palindromic(self) -> bool:
        """c_r == c_(length-1-r) for every r, compared slot by slot."""
        raw = self.slots()
        code = "Q" if self.nbytes % 8 == 0 and array("Q").itemsize == 8 else "B"
        words = array(code, raw)
        k = self.nbytes // words.itemsize
        # word j of every slot, in slot order; all must read the same backwards
        return all(words[j::k] == words[j::k][::-1] for j in range(k))

    def coefficient_sum(self) -> int:
        """Value at q = 1, read off modulo 2^K - 1 (q = 2^K is 1 there)."""
        mod = (mpz(1) << (8 * self.nbytes)) - 1
        total = self.value % mod
        return int(total - mod if total > mod >> 1 else total)

    def to_laurent(self) -> LaurentPoly:
        if not self.length:
            return LaurentPoly(0, [])
        return LaurentPoly(self.offset, _unpack(self.value, self.nbytes, self.length))


def poly_pow(a: DensePoly, s: int) -> DensePoly:
    """a^s by repeated multiplication, all inside one packed integer."""
    if s < 0:
        raise ValueError("exponent must be nonnegative")
    if s == 0:
        return DensePoly([1])
    if s == 1 or a.is_zero():
        return a
    if len(a) ** 2 <= _SCHOOLBOOK_CUTOFF:
        out = a
        for _ in range(s - 1):
            out = poly_mul_schoolbook(out, a)
        return out
    bound = _max_abs(a.coeffs) ** s * len(a) ** (s - 1)
    nbytes = _slot_bytes(bound)
    base = _pack(a.coeffs, nbytes)
    packed = base
    for _ in range(s - 1):
        packed *= base
    return DensePoly(_unpack(packed, nbytes, s * (len(a) - 1) + 1))


def binomial_product(exponents: Iterable[int], power: int = 1) -> LaurentPoly:
    """Expand prod over x in ``exponents`` of (1 - q^x)^power.

    Exponents may be negative (a Laurent product) and are multiplied in the
    order given. Each factor costs one shift-and-subtract on the packed
    coefficient vector.

    >>> binomial_product([-1, 2])
    LaurentPoly(offset=-1, coeffs=(-1, 1, 1, -1))
    """
    if power < 0:
        raise ValueError("power must be nonnegative")
    xs = list(exponents)
    acc = BinomialAccumulator(len(xs) * power)
    for x in xs:
        acc.multiply(x, power)
    return acc.snapshot()


def eval_at_one(a: DensePoly | LaurentPoly) -> int:
    """Sum of the coefficients.

    >>> eval_at_one(DensePoly([1, -1, -1, 1]))
    0
    """
    return sum(a.coeffs)


# -- cyclic ring -------------------------------------------------------------


def cyclic_mul(a: CyclicPoly, b: CyclicPoly) -> CyclicPoly:
    """Product in Z[q]/(q^d - 1); exponents add modulo d."""
    if a.modulus != b.modulus:
        raise ValueError(f"modulus mismatch: {a.modulus} != {b.modulus}")
    d = a.modulus
    out = [0] * d
    for i, x in enumerate(a.coeffs):
        if x == 0:
            continue
        for j, y in enumerate(b.coeffs):
            if y:
                out[(i + j) % d] += x * y
    return CyclicPoly(d, out)


def reduce_cyclic(a: Union[DensePoly, LaurentPoly], d: int) -> CyclicPoly:
    """Fold exponents modulo d: entry b is the sum of coefficients at i = b mod d.

    >>> reduce_cyclic(LaurentPoly(-1, [1]), 6).coeffs
    (0, 0, 0, 0, 0, 1)
    """
    if d < 1:
        raise ValueError(f"modulus must be positive, got {d}")
    offset = a.offset if isinstance(a, LaurentPoly) else 0
    cs = a.coeffs
    out = [0] * d
    for r in range(min(d, len(cs))):
        out[(offset + r) % d] = sum(cs[r::d])
    return CyclicPoly(d, out)


def cyclic_binomial_product(exponents: Iterable[int], power: int, d: int) -> CyclicPoly:
    """Fold prod (1 - q^x)^power into Z[q]/(q^d - 1) one factor at a time.

    Never materializes the dense product. The ring maps into the integers
    modulo 2^(Kd) - 1 by q -> 2^K, where multiplying by 1 - q^m is one
    rotation and one subtraction. K is wide enough that every coefficient
    is recovered exactly at the end.

    >>> cyclic_binomial_product([1, 2], 1, 6).coeffs
    (1, -1, -1, 1, 0, 0)
    """
    if d < 1:
        raise ValueError(f"modulus must be positive, got {d}")
    shifts = [x % d for x in exponents]
    if power and 0 in shifts:
        return CyclicPoly(d)
    nbytes = _slot_bytes(1 << (power * len(shifts)))
    k = 8 * nbytes
    width = k * d
    modulus = (mpz(1) << width) - 1
    value = mpz(1)
    for m in shifts:
        for _ in range(power):
            rotated = ((value << (k * m)) & modulus) + (value >> (width - k * m))
            value -= rotated
            if value < 0:
                value += modulus
    # the true value has |.| < modulus / 2; pick that representative
    if value > modulus >> 1:
        value -= modulus
    return CyclicPoly(d, _unpack(value, nbytes, d))
