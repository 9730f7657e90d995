"""
Coefficient sums over arithmetic progressions and the bounds they obey.

S_{d,b} is the sum of the Borwein coefficients a_i over i = b (mod d). The
fast path folds every factor into Z[q]/(q^d - 1) as it goes; the dense path
expands the whole polynomial first and serves as the oracle.

Every verdict is decided in integer arithmetic. The bound p^(sn/2) is
irrational when sn is odd, so |S - v p^sn / d| <= p^(sn/2) is checked as

    (d S - v p^sn)^2 <= d^2 p^sn.
"""
from __future__ import annotations

import dataclasses
from fractions import Fraction

import mpmath

from .borwein import BorweinParams, borwein_exponents, borwein_poly, is_prime
from .polyarith import DensePoly, cyclic_binomial_product, reduce_cyclic


@dataclasses.dataclass(frozen=True)
class ProgressionRecord:
    params: BorweinParams
    d: int
    b: int
    sum: int
    main_term: Fraction
    bound: str
    within_bound: bool

    @property
    def deviation(self) -> Fraction:
        return abs(self.sum - self.main_term)


def v_of(b: int, p: int) -> int:
    """Main-term weight: p - 1 if p divides b, else -1."""
    return p - 1 if b % p == 0 else -1


def progression_sums(params: BorweinParams, d: int) -> tuple[int, ...]:
    """All S_{d,b} for b = 0..d-1, via the cyclic fold."""
    return cyclic_binomial_product(borwein_exponents(params), params.s, d).coeffs


def progression_sum(params: BorweinParams, d: int, b: int) -> int:
    """S_{d,b}; b may be any integer and is reduced mod d.

    >>> [progression_sum(BorweinParams(3, 1, 1), 6, b) for b in range(6)]
    [1, -1, -1, 1, 0, 0]
    """
    if d < 1:
        raise ValueError(f"modulus must be positive, got {d}")
    return progression_sums(params, d)[b % d]


def progression_sums_dense(params: BorweinParams, d: int, poly: DensePoly | None = None) -> tuple[int, ...]:
    """Oracle: expand the polynomial, then add up each residue class."""
    if poly is None:
        poly = borwein_poly(params)
    return reduce_cyclic(poly, d).coeffs


def main_term(params: BorweinParams, d: int, b: int) -> Fraction:
    return Fraction(v_of(b, params.p) * params.p ** (params.s * params.n), d)


def within_sqrt_bound(params: BorweinParams, d: int, b: int, total: int) -> bool:
    """|total - v(b) p^sn / d| <= p^(sn/2), decided exactly."""
    p, sn = params.p, params.s * params.n
    lhs = d * total - v_of(b, p) * p**sn
    return lhs * lhs <= d * d * p**sn


def _record(params: BorweinParams, d: int, b: int, total: int) -> ProgressionRecord:
    p, s, n = params.p, params.s, params.n
    return ProgressionRecord(
        params=params,
        d=d,
        b=b,
        sum=total,
        main_term=main_term(params, d, b),
        bound=f"{p}^({s * n}/2)",
        within_bound=within_sqrt_bound(params, d, b, total),
    )


def theorem_main_records(params: BorweinParams) -> list[ProgressionRecord]:
    """One record per residue b mod 2pn, sharing a single cyclic fold."""
    d = params.modulus
    sums = progression_sums(params, d)
    return [_record(params, d, b, sums[b]) for b in range(d)]


def theorem_main_check(params: BorweinParams, b: int) -> ProgressionRecord:
    """Check |S_{2pn,b} - v(b) p^sn / (2pn)| <= p^(sn/2)."""
    d = params.modulus
    b %= d
    return _record(params, d, b, progression_sum(params, d, b))


def gp_check(params: BorweinParams, b: int) -> ProgressionRecord:
    """The same bound at the smaller modulus pn."""
    d = params.p * params.n
    b %= d
    return _record(params, d, b, progression_sum(params, d, b))


def li_check(n: int, b: int) -> ProgressionRecord:
    """p = 3, s = 1, modulus 3n: |S_{3n,b} - v(b) 3^n / (3n)| <= 2^n."""
    params = BorweinParams(3, 1, n)
    d = 3 * n
    b %= d
    total = progression_sum(params, d, b)
    main = main_term(params, d, b)
    return ProgressionRecord(
        params, d, b, total, main, f"2^{n}", abs(total - main) <= li_bound(n)
    )


def li_bound(n: int) -> int:
    return 2**n


def gp_bound(params: BorweinParams) -> mpmath.mpf:
    """p^(sn/2) as a float-like value; display only."""
    return mpmath.mpf(params.p) ** (mpmath.mpf(params.s * params.n) / 2)


def zaharescu_bound(p: int, q: int, s: int, n: int, bits: int = 128) -> mpmath.mpf:
    """(p-1)(q-1) p^(s[n/q]-1) 2^(sq(p-1){n/q}) / q, at ``bits`` of precision.

    Display only; no verdict depends on it. The theorem assumes q != p, but
    the formula itself is evaluated for any prime q <= n.
    """
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    if q > n:
        raise ValueError(f"q must not exceed n, got q={q}, n={n}")
    whole, frac = divmod(Fraction(n, q), 1)
    with mpmath.workprec(bits):
        return (
            mpmath.mpf((p - 1) * (q - 1))
            * mpmath.mpf(p) ** (s * int(whole) - 1)
            * mpmath.mpf(2) ** (mpmath.mpf(s * q * (p - 1)) * mpmath.mpf(frac.numerator) / frac.denominator)
            / q
        )


def corollary_holds_at(p: int, s: int, n: int, divisible: bool) -> bool:
    """Strict inequality (p-1) p^(sn/2-1) > 2n (or p^(sn/2-1) > 2n), squared."""
    lead = (p - 1) ** 2 if divisible else 1
    # p^(sn-2) may be fractional for sn < 2: multiply both sides by p^2
    return lead * p ** (s * n) > 4 * n * n * p * p


def corollary_threshold(p: int, s: int, divisible: bool) -> int:
    """Least n >= 1 at which the sign of S_{2pn,b} is forced by the bound.

    >>> corollary_threshold(3, 1, True)
    5
    """
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if s < 1:
        raise ValueError(f"s must be positive, got {s}")
    n = 1
    while not corollary_holds_at(p, s, n, divisible):
        n += 1
    return n


def expected_sign(b: int, p: int) -> int:
    return 1 if b % p == 0 else -1


def refinement_holds(params: BorweinParams) -> bool:
    """S_{pn,b} equals S_{2pn,b} + S_{2pn,b+pn} for every b."""
    half = params.p * params.n
    coarse = progression_sums(params, half)
    fine = progression_sums(params, 2 * half)
    return all(coarse[b] == fine[b] + fine[b + half] for b in range(half))
