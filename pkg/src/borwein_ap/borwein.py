"""
Borwein-type polynomials and their Laurent normalization.

For an odd prime p and positive integers s, n the Borwein polynomial is

    prod_{j=1..n} prod_{k=1..p-1} (1 - q^(pj - k))^s
        = ((q;q)_{pn} / (q^p;q^p)_n)^s,

of degree s n^2 p (p - 1) / 2. Pulling q^(pj-k) out of the factors with
pj - k large turns it into a signed, shifted copy of the Laurent product
over the balanced exponent set

    D = {pj - k : -(n-1) <= j <= n, 1 <= k <= (p-1)/2}.
"""
from __future__ import annotations

import dataclasses
from typing import Iterator, NamedTuple, Optional, Sequence

from .polyarith import (
    BinomialAccumulator,
    DensePoly,
    LaurentPoly,
    PackedPoly,
    binomial_product,
    poly_pow,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclasses.dataclass(frozen=True)
class BorweinParams:
    """Validated triple (p, s, n): p an odd prime, s >= 1, n >= 1."""

    p: int
    s: int
    n: int

    def __post_init__(self):
        for name in ("p", "s", "n"):
            if not isinstance(getattr(self, name), int) or isinstance(getattr(self, name), bool):
                raise TypeError(f"{name} must be an int")
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.s < 1:
            raise ValueError(f"s must be positive, got {self.s}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")

    @property
    def degree(self) -> int:
        return self.s * self.n**2 * self.p * (self.p - 1) // 2

    @property
    def modulus(self) -> int:
        """The common difference 2pn of the main theorem."""
        return 2 * self.p * self.n


@dataclasses.dataclass(frozen=True)
class ExponentSet:
    elements: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements


class ShiftData(NamedTuple):
    e: int
    sign: int


class SignPattern(NamedTuple):
    holds: bool
    first_violation: Optional[int]


def q_pochhammer(n: int, step: int = 1) -> DensePoly:
    """prod_{k=1..n} (1 - q^(step*k)).

    This is the usual (q^step; q^step)_n, with the product running up to n.

    >>> q_pochhammer(2)
    DensePoly((1, -1, -1, 1))
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if step < 1:
        raise ValueError("step must be positive")
    return DensePoly(binomial_product([step * k for k in range(1, n + 1)]).coeffs)


def borwein_exponents(params: BorweinParams) -> list[int]:
    """The exponents pj - k, j = 1..n, k = 1..p-1, in increasing order."""
    p, n = params.p, params.n
    return sorted(p * j - k for j in range(1, n + 1) for k in range(1, p))


def exponent_set(params: BorweinParams) -> ExponentSet:
    """The set D, sorted increasingly.

    >>> exponent_set(BorweinParams(5, 1, 1)).elements
    (-2, -1, 3, 4)
    """
    p, n = params.p, params.n
    half = (p - 1) // 2
    return ExponentSet(
        tuple(sorted(p * j - k for j in range(-(n - 1), n + 1) for k in range(1, half + 1)))
    )


def shift_data(params: BorweinParams) -> ShiftData:
    """Shift e and sign relating the Borwein and Laurent coefficients.

    a_i = sign * b_(i - e) with e = sn(p-1)(2pn+1-p)/8 and
    sign = (-1)^(sn(p-1)/2).
    """
    p, s, n = params.p, params.s, params.n
    num = s * n * (p - 1) * (2 * p * n + 1 - p)
    if num % 8:
        raise ArithmeticError(f"shift is not integral for {params}")
    return ShiftData(num // 8, -1 if (s * n * (p - 1) // 2) % 2 else 1)


def _laurent_power(base: LaurentPoly, s: int) -> LaurentPoly:
    body = poly_pow(DensePoly(base.coeffs), s)
    return LaurentPoly(s * base.offset, body.coeffs)


def borwein_poly(params: BorweinParams) -> DensePoly:
    """Expand the Borwein polynomial.

    The s = 1 product is built factor by factor in increasing exponent order;
    the s-th power is then taken by repeated multiplication.

    >>> borwein_poly(BorweinParams(3, 1, 1))
    DensePoly((1, -1, -1, 1))
    """
    base = DensePoly(binomial_product(borwein_exponents(params)).coeffs)
    return poly_pow(base, params.s)


def borwein_poly_by_division(params: BorweinParams) -> DensePoly:
    """Same polynomial via (q;q)_{pn}^s with (1 - q^(pk))^s divided out.

    Each division by 1 - q^m is a strided running sum, exact because the
    divisor is known to divide.
    """
    p, s, n = params.p, params.s, params.n
    num = list(poly_pow(q_pochhammer(p * n), s).coeffs)
    for k in range(1, n + 1):
        m = p * k
        for _ in range(s):
            for i in range(m, len(num)):
                num[i] += num[i - m]
    out = DensePoly(num)
    if len(out) != params.degree + 1:
        raise ArithmeticError("division by (q^p;q^p)_n^s was not exact")
    return out


def laurent_borwein(params: BorweinParams) -> LaurentPoly:
    """Expand prod_{x in D} (1 - q^x)^s as a Laurent polynomial.

    >>> laurent_borwein(BorweinParams(3, 1, 1))
    LaurentPoly(offset=-1, coeffs=(-1, 1, 1, -1))
    """
    return _laurent_power(binomial_product(exponent_set(params)), params.s)


def iter_borwein_packed(p: int, s: int, n_max: int) -> Iterator[tuple[BorweinParams, PackedPoly]]:
    """Yield (params, packed borwein_poly(params)) for n = 1..n_max.

    The product for n is extended to n + 1 by multiplying in the p - 1 new
    factors, each s times. Every step is a shift and a subtraction on the
    packed integer, so a sweep costs about as much as its last step.
    """
    acc = BinomialAccumulator(s * n_max * (p - 1))
    for n in range(1, n_max + 1):
        for k in range(p - 1, 0, -1):
            acc.multiply(p * n - k, power=s)
        yield BorweinParams(p, s, n), acc.packed()


def iter_laurent_borwein_packed(
    p: int, s: int, n_max: int, signed: bool = False
) -> Iterator[tuple[BorweinParams, PackedPoly]]:
    """Yield (params, packed laurent_borwein(params)) for n = 1..n_max.

    With ``signed`` the product is multiplied by the sign of the shift
    identity, so it should coincide slot for slot with the packed Borwein
    polynomial from :func:`iter_borwein_packed` (same slot width).
    """
    half = (p - 1) // 2
    acc = BinomialAccumulator(s * n_max * (p - 1))
    for n in range(1, n_max + 1):
        params = BorweinParams(p, s, n)
        for j in (n, -(n - 1)):
            for k in range(1, half + 1):
                acc.multiply(p * j - k, power=s)
        yield params, acc.packed(shift_data(params).sign if signed else 1)


def iter_borwein(p: int, s: int, n_max: int) -> Iterator[tuple[BorweinParams, DensePoly]]:
    """Yield (params, borwein_poly(params)) for n = 1..n_max."""
    for params, packed in iter_borwein_packed(p, s, n_max):
        yield params, DensePoly(packed.to_laurent().coeffs)


def iter_laurent_borwein(p: int, s: int, n_max: int) -> Iterator[tuple[BorweinParams, LaurentPoly]]:
    """Yield (params, laurent_borwein(params)) for n = 1..n_max."""
    for params, packed in iter_laurent_borwein_packed(p, s, n_max):
        yield params, packed.to_laurent()


def decompose_mod_p(poly: DensePoly, p: int) -> list[DensePoly]:
    """Split poly into sum_t sign_t q^t C_t(q^p), t = 0..p-1.

    sign_0 = +1 and sign_t = -1 otherwise, so the Borwein conjectures read
    "every C_t has nonnegative coefficients".

    >>> decompose_mod_p(DensePoly([1, -1, -1, 1]), 3)
    [DensePoly((1, 1)), DensePoly((1,)), DensePoly((1,))]
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    cs = poly.coeffs
    return [
        DensePoly(cs[t::p] if t == 0 else [-c for c in cs[t::p]]) for t in range(p)
    ]


def recompose_mod_p(components: Sequence[DensePoly]) -> DensePoly:
    """Inverse of :func:`decompose_mod_p`."""
    p = len(components)
    size = max((len(c) for c in components), default=0) * p
    out = [0] * size
    for t, comp in enumerate(components):
        sign = 1 if t == 0 else -1
        for j, c in enumerate(comp.coeffs):
            out[p * j + t] = sign * c
    return DensePoly(out)


def sign_pattern(poly: DensePoly, p: int) -> SignPattern:
    """Check the +-...- sign pattern: a_i >= 0 iff p | i, coefficient-wise.

    ``first_violation`` is the smallest exponent i where it fails.
    """
    for i, c in enumerate(poly.coeffs):
        if (c < 0) if i % p == 0 else (c > 0):
            return SignPattern(False, i)
    return SignPattern(True, None)


def check_sign_pattern(params: BorweinParams) -> SignPattern:
    """Whether every component of :func:`decompose_mod_p` is nonnegative.

    For (p, s) outside (3, 1), (3, 2), (5, 1) this just reports the observed
    signs; no conjecture is claimed there.
    """
    return sign_pattern(borwein_poly(params), params.p)
