"""
Characters of Z/gZ, the Li-Wan sieve, and the character formula for N_D(b).

N_D(b) is the size-alternating count of s-tuples of subsets of D whose
elements add up to b modulo g = 2pn; equivalently the coefficient of q^b in
prod_{x in D} (1 - q^x)^s folded mod q^g - 1. Writing the indicator of
"sum = b" with characters and collapsing the distinct-coordinate sums with
the Li-Wan sieve leaves only characters whose order is divisible by p:

    N_D(b) = 1/g * sum_{chi : p | o(chi)} conj(chi)(b)
                   * prod_{k=1..(p-1)/2} (1 - conj(chi)^(o/p)(k))^(s g / o).

Complex quantities are evaluated in mpmath interval arithmetic, so every
rounding to an integer is certified rather than trusted.
"""
from __future__ import annotations

import contextlib
import dataclasses
import itertools
import math
import random
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

import mpmath
from mpmath import iv

from .borwein import BorweinParams, exponent_set, shift_data
from .polyarith import cyclic_binomial_product

MAX_TUPLE_DOMAIN = 12
MAX_TUPLE_LENGTH = 4
MAX_SUBSET_BITS = 22
MAX_SIEVE_LENGTH = 7


class PrecisionError(ArithmeticError):
    """Interval evaluation could not certify an integer even at the top precision."""


@dataclasses.dataclass(frozen=True)
class PrecisionPolicy:
    bits: int = 128
    residual_tol: float = 2.0**-20
    max_escalation: int = 4

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError(f"need at least 64 bits, got {self.bits}")
        if not 0 < self.residual_tol <= 2.0**-20:
            raise ValueError(f"residual_tol must be in (0, 2^-20], got {self.residual_tol}")

    @classmethod
    def for_params(cls, params: BorweinParams, **kwargs) -> PrecisionPolicy:
        """max(128, ceil(sn log2 p) + 64) bits: enough headroom over |N_D| <= p^sn."""
        need = math.ceil(params.s * params.n * math.log2(params.p)) + 64
        return cls(bits=max(128, need), **kwargs)

    def ladder(self) -> list[int]:
        """Precisions to try: bits, 2 bits, ... up to max_escalation times bits."""
        out, b = [], self.bits
        while b <= self.bits * self.max_escalation:
            out.append(b)
            b *= 2
        return out


class Certified(NamedTuple):
    """Midpoint of a complex interval plus a rigorous radius around it.

    ``bits`` is the precision the midpoint was stored at; comparisons are
    carried out at that precision and pad the result by its rounding error.
    """

    value: mpmath.mpc
    radius: mpmath.mpf
    bits: int = 53

    def _slack(self, *magnitudes) -> mpmath.mpf:
        return (sum(magnitudes) + 1) * mpmath.mpf(2) ** (4 - self.bits)

    def distance_to(self, target) -> mpmath.mpf:
        """Upper bound on |z - target| for every z in the enclosure."""
        with mpmath.workprec(self.bits):
            target = mpmath.mpmathify(target)
            gap = abs(self.value - target)
            return gap + self.radius + self._slack(abs(self.value), abs(target))

    def modulus_distance_to(self, target) -> mpmath.mpf:
        """Upper bound on ||z| - target| for every z in the enclosure."""
        with mpmath.workprec(self.bits):
            target = mpmath.mpmathify(target)
            gap = abs(abs(self.value) - target)
            return gap + self.radius + self._slack(abs(self.value), abs(target))

    def distance_bound(self, other: Certified) -> mpmath.mpf:
        """Upper bound on the distance between the two enclosed values."""
        with mpmath.workprec(min(self.bits, other.bits)):
            return self.distance_to(other.value) + other.radius


@contextlib.contextmanager
def _interval_precision(bits: int):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _hi(x) -> mpmath.mpf:
    return mpmath.mpf(x._mpi_[1])


def _certify(z) -> Certified:
    bits = iv.prec
    with mpmath.workprec(bits):
        re, im = z.real, z.imag
        mid = mpmath.mpc(mpmath.mpf(re.mid._mpi_[0]), mpmath.mpf(im.mid._mpi_[0]))
        # mid lies inside the box, so |z - mid| <= width_re + width_im;
        # the factor covers rounding in the addition itself
        radius = (_hi(re.delta) + _hi(im.delta)) * (1 + mpmath.mpf(2) ** (2 - bits))
        return Certified(mid, radius, bits)


def _root(frac: Fraction):
    """exp(2 pi i frac) as a complex interval at the current iv precision."""
    frac = frac - math.floor(frac)
    if frac == 0:
        return iv.mpc(1)
    angle = 2 * iv.pi * frac.numerator / frac.denominator
    return iv.mpc(iv.cos(angle), iv.sin(angle))


# -- characters --------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Character:
    """chi_t(x) = exp(2 pi i t x / g) on Z/gZ."""

    group_order: int
    index: int

    def __post_init__(self):
        if self.group_order < 1:
            raise ValueError("group order must be positive")
        if not 0 <= self.index < self.group_order:
            raise ValueError(f"index must lie in [0, {self.group_order})")

    @property
    def order(self) -> int:
        return self.group_order // math.gcd(self.index, self.group_order)

    def phase(self, x: int) -> Fraction:
        """chi(x) = exp(2 pi i * phase)."""
        return Fraction(self.index * x % self.group_order, self.group_order)

    def power(self, k: int) -> Character:
        return Character(self.group_order, self.index * k % self.group_order)

    def conj(self) -> Character:
        return self.power(-1)

    def value(self, x: int):
        """Complex interval enclosing chi(x) at the current interval precision."""
        return _root(self.phase(x))


def characters(g: int) -> list[Character]:
    return [Character(g, t) for t in range(g)]


def count_order_p_characters(params: BorweinParams) -> tuple[int, int]:
    """(# characters of order exactly p, # with p | order) on Z/2pnZ."""
    p = params.p
    chars = characters(params.modulus)
    return (
        sum(1 for c in chars if c.order == p),
        sum(1 for c in chars if c.order % p == 0),
    )


# -- cycle types and Z_m -----------------------------------------------------


def cycle_types(m: int) -> Iterator[tuple[int, ...]]:
    """Every (c_1, ..., c_m) with sum i c_i = m, i.e. the partitions of m."""

    def parts(rest: int, largest: int):
        if rest == 0:
            yield []
            return
        for k in range(min(rest, largest), 0, -1):
            for tail in parts(rest - k, k):
                yield [k] + tail

    for partition in parts(m, m):
        counts = [0] * m
        for k in partition:
            counts[k - 1] += 1
        yield tuple(counts)


def permutation_count(counts: Sequence[int]) -> int:
    """Number of permutations of m = sum i c_i points with c_i cycles of length i.

    >>> permutation_count((1, 0, 1, 0))
    8
    """
    m = sum(i * c for i, c in enumerate(counts, start=1))
    denom = 1
    for i, c in enumerate(counts, start=1):
        denom *= i**c * math.factorial(c)
    return math.factorial(m) // denom


def z_m(t_values: Sequence) -> object:
    """Z_m(t_1, ..., t_m) from m Z_m = sum_{i=1..m} t_i Z_{m-i}, Z_0 = 1.

    Exact for Fraction or int input; works with any field-like values.

    >>> z_m([Fraction(1), Fraction(1), Fraction(1)])
    Fraction(1, 1)
    """
    m = len(t_values)
    z = [Fraction(1)]
    for k in range(1, m + 1):
        acc = sum((t_values[i - 1] * z[k - i] for i in range(1, k + 1)), Fraction(0))
        z.append(acc / k)
    return z[m]


def z_m_by_cycle_types(t_values: Sequence) -> object:
    """Z_m from its definition: (1/m!) sum over cycle types N(c) prod t_i^c_i."""
    m = len(t_values)
    total = Fraction(0)
    for counts in cycle_types(m):
        term = Fraction(permutation_count(counts))
        for t, c in zip(t_values, counts):
            term *= t**c
        total += term
    return total / math.factorial(m)


def _generalized_binom(alpha: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out = out * (alpha - j) / (j + 1)
    return out


def binom_series_coeff(ell: int, a: int, m: int) -> Fraction:
    """[u^m] (1 - u^ell)^(-a/ell), exactly.

    >>> binom_series_coeff(2, -4, 2)
    Fraction(-2, 1)
    """
    if ell < 1 or m < 0:
        raise ValueError("need ell >= 1 and m >= 0")
    if m % ell:
        return Fraction(0)
    k = m // ell
    return (-1) ** k * _generalized_binom(Fraction(-a, ell), k)


def binom_product_series_coeff(ell: int, a: int, points: Iterable[Fraction], m: int) -> Fraction:
    """[u^m] prod_{z in points} (1 - z^ell u^ell)^(-a/ell), exactly."""
    if ell < 1 or m < 0:
        raise ValueError("need ell >= 1 and m >= 0")
    series = [Fraction(0)] * (m + 1)
    series[0] = Fraction(1)
    for z in points:
        w = Fraction(z) ** ell
        factor = [Fraction(0)] * (m + 1)
        for k in range(m // ell + 1):
            factor[k * ell] = (-w) ** k * _generalized_binom(Fraction(-a, ell), k)
        series = [
            sum((series[i] * factor[j - i] for i in range(j + 1)), Fraction(0))
            for j in range(m + 1)
        ]
    return series[m]


# -- Li-Wan sieve ------------------------------------------------------------


def _cycles(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycle, i = [], start
        while not seen[i]:
            seen[i] = True
            cycle.append(i)
            i = perm[i]
        out.append(cycle)
    return out


def li_wan_check(
    domain_size: int,
    X: Iterable[tuple[int, ...]],
    f: Mapping[tuple[int, ...], Fraction] | Callable[[tuple[int, ...]], Fraction],
    m: int,
) -> tuple[Fraction, Fraction]:
    """Both sides of the Li-Wan sieve for an explicit X inside A^m.

    lhs sums f over the tuples of X with pairwise distinct coordinates. rhs
    sums sign(tau) f(x) over permutations tau of m points and x in X fixed by
    tau (constant on each cycle of tau). X_tau depends on tau itself, not just
    its cycle type, so every permutation is visited; X_tau is listed by
    assigning one value of A per cycle and keeping assignments that lie in X.
    """
    if m > MAX_SIEVE_LENGTH:
        raise ValueError(f"m = {m} exceeds the sieve guard {MAX_SIEVE_LENGTH}")
    points = set(X)
    for x in points:
        if len(x) != m or any(not 0 <= c < domain_size for c in x):
            raise ValueError(f"{x!r} is not an {m}-tuple over range({domain_size})")
    value = f if callable(f) else f.__getitem__

    lhs = sum((Fraction(value(x)) for x in points if len(set(x)) == m), Fraction(0))

    rhs = Fraction(0)
    for perm in itertools.permutations(range(m)):
        cycles = _cycles(perm)
        sign = -1 if (m - len(cycles)) % 2 else 1
        inner = Fraction(0)
        for colours in itertools.product(range(domain_size), repeat=len(cycles)):
            x = [0] * m
            for colour, cycle in zip(colours, cycles):
                for i in cycle:
                    x[i] = colour
            x = tuple(x)
            if x in points:
                inner += Fraction(value(x))
        rhs += sign * inner
    return lhs, rhs


def distinct_power_sum(power_sums: Sequence, m: int):
    """Sieve over cycle types for a product function on a full cube.

    With X = A^m and f(x) = prod h(x_i), the sum of f over distinct tuples is
    sum over cycle types of sign * N(c) * prod_i P_i^c_i, where P_i is the
    sum of h(a)^i over A and ``power_sums[i-1]`` holds P_i.
    """
    total = 0
    for counts in cycle_types(m):
        sign = -1 if (m - sum(counts)) % 2 else 1
        term = sign * permutation_count(counts)
        for ps, c in zip(power_sums, counts):
            if c:
                term = term * ps**c
        total = total + term
    return total


def random_sieve_instance(rng: random.Random, max_domain: int = 6, max_m: int = 5):
    """A random (domain_size, X, f, m) with rational f."""
    domain_size = rng.randint(1, max_domain)
    m = rng.randint(1, max_m)
    cube = list(itertools.product(range(domain_size), repeat=m))
    density = rng.random()
    X = [x for x in cube if rng.random() < density]
    f = {x: Fraction(rng.randint(-20, 20), rng.randint(1, 12)) for x in X}
    return domain_size, X, f, m


# -- character sums S_m(chi) -------------------------------------------------


def _check_group(params: BorweinParams, chi: Character) -> None:
    if chi.group_order != params.modulus:
        raise ValueError(
            f"character lives on Z/{chi.group_order}Z, expected Z/{params.modulus}Z"
        )


def _poly_mul_iv(a: list, b: list) -> list:
    out = [iv.mpc(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _s_m_chi_closed_iv(params: BorweinParams, chi: Character, m: int):
    p = params.p
    g = params.modulus
    size_d = params.n * (p - 1)
    o = chi.order
    sign = -1 if m % 2 else 1
    if o % p:
        if (2 * params.n) % o:
            raise ArithmeticError(f"order {o} does not divide 2n")
        exact = sign * binom_series_coeff(o, -size_d, m)
        return iv.mpc(iv.mpf(exact.numerator) / exact.denominator)
    ell = o // p
    if m % ell:
        return iv.mpc(0)
    exponent = g // o
    chi_ell_bar = chi.power(ell).conj()
    # polynomial in v = u^ell
    poly = [iv.mpc(1)]
    for k in range(1, (p - 1) // 2 + 1):
        root = chi_ell_bar.value(k)
        factor = [iv.mpc(1), -root]
        for _ in range(exponent):
            poly = _poly_mul_iv(poly, factor)
    k = m // ell
    coeff = poly[k] if k < len(poly) else iv.mpc(0)
    return sign * coeff


def s_m_chi_closed(params: BorweinParams, chi: Character, m: int, prec: PrecisionPolicy | None = None) -> Certified:
    """Closed form for S_m(chi) on Z/2pnZ.

    For p not dividing o(chi) it is (-1)^m [u^m] (1 - u^o)^(|D|/o), an exact
    integer. Otherwise it is (-1)^m times the u^m coefficient of
    prod_k (1 - conj(chi)^(o/p)(k) u^(o/p))^(2pn/o).
    """
    _check_group(params, chi)
    if m < 0:
        raise ValueError("m must be nonnegative")
    prec = prec or PrecisionPolicy.for_params(params)
    with _interval_precision(prec.bits):
        return _certify(_s_m_chi_closed_iv(params, chi, m))


def _s_m_chi_brute_iv(params: BorweinParams, chi: Character, m: int):
    elements = exponent_set(params).elements
    g = params.modulus
    histogram = [0] * g
    for tup in itertools.permutations(elements, m):
        histogram[sum(tup) % g] += 1
    total = iv.mpc(0)
    for r, count in enumerate(histogram):
        if count:
            total = total + count * chi.value(r)
    return total / math.factorial(m)


def s_m_chi_brute(params: BorweinParams, chi: Character, m: int, prec: PrecisionPolicy | None = None) -> Certified:
    """S_m(chi) from its definition: (1/m!) sum over distinct m-tuples of D."""
    _check_group(params, chi)
    if len(exponent_set(params)) > MAX_TUPLE_DOMAIN or m > MAX_TUPLE_LENGTH:
        raise ValueError(
            f"brute force limited to |D| <= {MAX_TUPLE_DOMAIN}, m <= {MAX_TUPLE_LENGTH}"
        )
    if m < 0:
        raise ValueError("m must be nonnegative")
    prec = prec or PrecisionPolicy.for_params(params)
    with _interval_precision(prec.bits):
        return _certify(_s_m_chi_brute_iv(params, chi, m))


def s_m_chi_sieve(params: BorweinParams, chi: Character, m: int, prec: PrecisionPolicy | None = None) -> Certified:
    """S_m(chi) through the cycle-type sieve with power sums sum_D chi^i(x)."""
    _check_group(params, chi)
    prec = prec or PrecisionPolicy.for_params(params)
    elements = exponent_set(params).elements
    with _interval_precision(prec.bits):
        power_sums = []
        for i in range(1, m + 1):
            ci = chi.power(i)
            acc = iv.mpc(0)
            for x in elements:
                acc = acc + ci.value(x)
            power_sums.append(acc)
        total = distinct_power_sum(power_sums, m) if m else iv.mpc(1)
        return _certify(total / math.factorial(m))


# -- N_D ---------------------------------------------------------------------


def _subset_sum_histograms(elements: Sequence[int], g: int) -> list[list[int]]:
    """histograms[k][r] = number of k-subsets with element sum = r mod g."""
    out = [[0] * g for _ in range(len(elements) + 1)]
    for k in range(len(elements) + 1):
        row = out[k]
        for combo in itertools.combinations(elements, k):
            row[sum(combo) % g] += 1
    return out


def _check_subset_guard(params: BorweinParams) -> None:
    bits = params.s * len(exponent_set(params))
    if bits > MAX_SUBSET_BITS:
        raise ValueError(
            f"subset enumeration limited to s|D| <= {MAX_SUBSET_BITS}, got {bits}"
        )


def n_d_subsets_brute(params: BorweinParams, m_values: Sequence[int], b: int) -> int:
    """Count s-tuples (V_1..V_s) of subsets of D, |V_i| = m_i, total sum = b mod 2pn.

    Each V_i ranges over explicitly enumerated subsets; the s coordinates are
    combined by convolving their subset-sum histograms.
    """
    _check_subset_guard(params)
    if len(m_values) != params.s:
        raise ValueError(f"expected {params.s} cardinalities, got {len(m_values)}")
    elements = exponent_set(params).elements
    g = params.modulus
    if any(not 0 <= m <= len(elements) for m in m_values):
        return 0
    hist = _subset_sum_histograms(elements, g)
    acc = [1] + [0] * (g - 1)
    for m in m_values:
        row = hist[m]
        acc = [sum(acc[i] * row[(r - i) % g] for i in range(g)) for r in range(g)]
    return acc[b % g]


def n_d_alternating_enumerated(params: BorweinParams) -> list[int]:
    """All N_D(b), b mod 2pn, as the signed sum over cardinality vectors."""
    _check_subset_guard(params)
    size = len(exponent_set(params))
    g = params.modulus
    out = [0] * g
    for m_values in itertools.product(range(size + 1), repeat=params.s):
        sign = -1 if sum(m_values) % 2 else 1
        for b in range(g):
            out[b] += sign * n_d_subsets_brute(params, m_values, b)
    return out


def n_d_alternating_folded(params: BorweinParams) -> list[int]:
    """All N_D(b): prod_{x in D} (1 - q^x)^s folded mod q^(2pn) - 1."""
    return list(cyclic_binomial_product(exponent_set(params), params.s, params.modulus).coeffs)


def n_d_alternating(params: BorweinParams, b: int, method: str = "fold") -> int:
    """N_D(b) by the cyclic fold (``"fold"``) or by subset enumeration (``"enumerate"``)."""
    if method == "fold":
        values = n_d_alternating_folded(params)
    elif method == "enumerate":
        values = n_d_alternating_enumerated(params)
    else:
        raise ValueError(f"unknown method {method!r}")
    return values[b % params.modulus]


def _char_terms_iv(params: BorweinParams) -> list[tuple[Character, object]]:
    p, s = params.p, params.s
    g = params.modulus
    half = (p - 1) // 2
    out = []
    for chi in characters(g):
        o = chi.order
        if o % p:
            continue
        chi_ell_bar = chi.power(o // p).conj()
        prod = iv.mpc(1)
        for k in range(1, half + 1):
            prod = prod * (1 - chi_ell_bar.value(k))
        out.append((chi, prod ** (s * g // o)))
    return out


def _round_certified(z, tol: float) -> int | None:
    re, im = z.real, z.imag
    lo, hi = mpmath.mpf(re._mpi_[0]), mpmath.mpf(re._mpi_[1])
    nearest = int(mpmath.nint((lo + hi) / 2))
    if hi - nearest >= tol or nearest - lo >= tol:
        return None
    if _hi(abs(im)) >= tol:
        return None
    return nearest


def n_d_char_formula_all(params: BorweinParams, prec: PrecisionPolicy | None = None) -> list[int]:
    """N_D(b) for every b mod 2pn from the character formula.

    Each value is rounded to the nearest integer only once its enclosing
    interval lies within ``prec.residual_tol`` of it; otherwise the precision
    is doubled, up to ``prec.max_escalation`` times the starting bits.
    """
    prec = prec or PrecisionPolicy.for_params(params)
    g = params.modulus
    for bits in prec.ladder():
        with _interval_precision(bits):
            terms = _char_terms_iv(params)
            values = []
            for b in range(g):
                total = iv.mpc(0)
                for chi, weight in terms:
                    total = total + chi.conj().value(b) * weight
                values.append(_round_certified(total / g, prec.residual_tol))
        if all(v is not None for v in values):
            return values
    raise PrecisionError(f"could not certify N_D(b) for {params} at {bits} bits")


def n_d_char_formula(params: BorweinParams, b: int, prec: PrecisionPolicy | None = None) -> int:
    return n_d_char_formula_all(params, prec)[b % params.modulus]


class MainTerm(NamedTuple):
    value: Fraction
    condition: bool


def n_d_main_term(params: BorweinParams, b: int) -> MainTerm:
    """Main term of N_D(b), selected by b + sn(p^2-1)/8 = 0 (mod p)."""
    p, s, n = params.p, params.s, params.n
    sign = shift_data(params).sign
    cond = (b + s * n * (p * p - 1) // 8) % p == 0
    weight = p - 1 if cond else -1
    return MainTerm(Fraction(sign * weight * p ** (s * n), 2 * p * n), cond)


def n_d_within_bound(params: BorweinParams, b: int, value: int) -> bool:
    """|N_D(b) - main term| <= p^(sn/2), decided in integers."""
    main = n_d_main_term(params, b).value
    g = params.modulus
    dev = g * value - int(main * g)
    return dev * dev <= g * g * params.p ** (params.s * params.n)


def shifted_progression_sums(params: BorweinParams, values: Sequence[int] | None = None) -> list[int]:
    """S_{2pn,b} = sign * N_D(b - e) for every b, using character-formula values."""
    if values is None:
        values = n_d_char_formula_all(params)
    e, sign = shift_data(params)
    g = params.modulus
    return [sign * values[(b - e) % g] for b in range(g)]


# -- root-of-unity product ---------------------------------------------------


def lemma_d_product(p: int, r: int, bits: int = 128) -> tuple[Certified, Certified]:
    """Both sides of prod_{k=1..(p-1)/2} (1 - e^(2 pi i k r/p))^2 = p e^(pi i ((p^2-1) r/(4p) + (p-1)/2))."""
    if not 1 <= r <= p - 1:
        raise ValueError(f"r must lie in [1, {p - 1}]")
    with _interval_precision(bits):
        lhs = iv.mpc(1)
        for k in range(1, (p - 1) // 2 + 1):
            w = 1 - _root(Fraction(k * r, p))
            lhs = lhs * w * w
        # e^(pi i x) = e^(2 pi i x/2)
        phase = Fraction((p * p - 1) * r, 4 * p) + Fraction(p - 1, 2)
        rhs = p * _root(phase / 2)
        return _certify(lhs), _certify(rhs)


def order_p_factor_modulus(params: BorweinParams, chi: Character, bits: int = 128) -> Certified:
    """|prod_{k=1..(p-1)/2} (1 - conj(chi)^(o/p)(k))| for chi with p | o(chi)."""
    _check_group(params, chi)
    if chi.order % params.p:
        raise ValueError("character order is not divisible by p")
    base = chi.power(chi.order // params.p).conj()
    with _interval_precision(bits):
        prod = iv.mpc(1)
        for k in range(1, (params.p - 1) // 2 + 1):
            prod = prod * (1 - base.value(k))
        return _certify(iv.mpc(abs(prod)))
