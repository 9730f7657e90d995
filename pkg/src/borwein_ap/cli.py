"""
Command-line front end.

    borwein-ap expand --p 3 --s 1 --n 2
    borwein-ap sum --p 3 --s 1 --n 2 --d 12
    borwein-ap verify --p 3,5 --s 1,2 --n-max 4
    borwein-ap sweep --p 3 --s 1 --n 1-10 --q 3
    borwein-ap sieve-test --seed 7

Exit status: 0 when every check passes, 1 when a mathematical disagreement
is found, 2 for usage or configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

import mpmath

from . import charsieve, progsum
from .borwein import BorweinParams, borwein_poly, decompose_mod_p, is_prime, sign_pattern
from .charsieve import PrecisionPolicy

OUTPUT_DIR_ENV = "BORWEIN_AP_OUTPUT_DIR"
COMMANDS = ("expand", "decompose", "sum", "verify", "sieve-test", "sweep")
DEFAULT_MAX_DEGREE = 10**6

# cross-check guards for `verify`
DENSE_CHECK_MAX_DEGREE = 50_000
CHAR_CHECK_MAX_MODULUS = 150

CONJECTURE_CASES = {(3, 1), (3, 2), (5, 1)}


class UsageError(Exception):
    pass


# -- configuration -----------------------------------------------------------


def parse_int_list(text: str) -> list[int]:
    """'3,5,7' -> [3, 5, 7]; '1-4' or '1..4' -> [1, 2, 3, 4]."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        for sep in ("..", "-"):
            if sep in part[1:]:
                lo, hi = part.split(sep, 1) if sep == ".." else part.rsplit("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
                break
        else:
            out.append(int(part))
    return out


def read_config(path: str) -> dict[str, str]:
    """Flat key = value file; '#' starts a comment."""
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


_CONFIG_KEYS = {"p", "s", "n", "n_max", "d", "b", "q", "format", "out", "bits", "seed", "max_degree", "trials"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="borwein-ap",
        description="Arithmetic-progression sums of Borwein-type polynomials.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--p", help="odd prime(s), e.g. 3 or 3,5")
    parser.add_argument("--s", help="exponent(s) s, e.g. 1 or 1,2")
    parser.add_argument("--n", help="n value(s): 4, 1-6 or 1,2,5")
    parser.add_argument("--n-max", type=int, help="shorthand for --n 1-N")
    parser.add_argument("--d", type=int, help="modulus (default 2pn)")
    parser.add_argument("--b", type=int, help="single residue (default: all)")
    parser.add_argument("--q", type=int, help="prime for the Zaharescu column of `sweep`")
    parser.add_argument("--format", choices=("csv", "jsonl"))
    parser.add_argument("--out", help="output file (default: stdout or $%s)" % OUTPUT_DIR_ENV)
    parser.add_argument("--bits", type=int, help="starting interval precision")
    parser.add_argument("--seed", type=int, help="seed for randomized sieve trials")
    parser.add_argument("--trials", type=int, help="number of randomized sieve trials")
    parser.add_argument("--max-degree", type=int, help="refuse to expand beyond this degree")
    parser.add_argument("--config", help="flat key=value file; flags take precedence")
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge the config file under the flags and normalize the grids."""
    merged = dict(vars(args))
    if args.config:
        for key, value in read_config(args.config).items():
            if key not in _CONFIG_KEYS:
                raise UsageError(f"unknown config key {key!r}")
            if merged.get(key) is None:
                merged[key] = value
    try:
        cfg = argparse.Namespace(
            command=args.command,
            p_list=parse_int_list(merged["p"]) if merged.get("p") is not None else [],
            s_list=parse_int_list(merged["s"]) if merged.get("s") is not None else [],
            n_list=(
                parse_int_list(merged["n"])
                if merged.get("n") is not None
                else list(range(1, int(merged["n_max"]) + 1))
                if merged.get("n_max") is not None
                else []
            ),
            d=int(merged["d"]) if merged.get("d") is not None else None,
            b=int(merged["b"]) if merged.get("b") is not None else None,
            q=int(merged["q"]) if merged.get("q") is not None else None,
            format=merged.get("format") or "csv",
            out=merged.get("out"),
            bits=int(merged["bits"]) if merged.get("bits") is not None else None,
            seed=int(merged["seed"]) if merged.get("seed") is not None else 0,
            trials=int(merged["trials"]) if merged.get("trials") is not None else 100,
            max_degree=int(merged["max_degree"]) if merged.get("max_degree") is not None else DEFAULT_MAX_DEGREE,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if cfg.format not in ("csv", "jsonl"):
        raise UsageError(f"unknown format {cfg.format!r}")
    if cfg.d is not None and cfg.d < 1:
        raise UsageError("--d must be positive")
    if cfg.bits is not None and cfg.bits < 64:
        raise UsageError("--bits must be at least 64")
    return cfg


def grid(cfg) -> list[BorweinParams]:
    """Validated parameter grid sorted by (p, s, n); rejects bad points up front."""
    try:
        points = [
            BorweinParams(p, s, n)
            for p in sorted(set(cfg.p_list))
            for s in sorted(set(cfg.s_list))
            for n in sorted(set(cfg.n_list))
        ]
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    return points


def single(cfg) -> BorweinParams:
    points = grid(cfg)
    if len(points) != 1:
        raise UsageError(f"`{cfg.command}` needs exactly one (p, s, n), got {len(points)}")
    return points[0]


# -- output ------------------------------------------------------------------


def _cell(value) -> object:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(value, 15)
    return value


class Table:
    """Rows with a fixed column order, rendered as CSV or JSON lines."""

    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        self.rows: list[dict] = []

    def add(self, **row) -> None:
        self.rows.append({c: row.get(c) for c in self.columns})

    def render(self, fmt: str) -> str:
        buf = io.StringIO()
        if fmt == "csv":
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow(["" if row[c] is None else _cell(row[c]) for c in self.columns])
        else:
            for row in self.rows:
                record = {c: (None if row[c] is None else _cell(row[c])) for c in self.columns}
                buf.write(json.dumps(record) + "\n")
        return buf.getvalue()


def emit(table: Table, cfg) -> None:
    text = table.render(cfg.format)
    target = cfg.out
    if target is None and os.environ.get(OUTPUT_DIR_ENV):
        ext = "csv" if cfg.format == "csv" else "jsonl"
        target = str(Path(os.environ[OUTPUT_DIR_ENV]) / f"{cfg.command}.{ext}")
    if target is None or target == "-":
        sys.stdout.write(text)
    else:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_text(text)


# -- commands ----------------------------------------------------------------


def cmd_expand(cfg) -> int:
    params = single(cfg)
    if params.degree > cfg.max_degree:
        raise UsageError(
            f"degree {params.degree} exceeds the cap {cfg.max_degree}; raise --max-degree"
        )
    table = Table(["i", "a_i"])
    for i, c in enumerate(borwein_poly(params).coeffs):
        if c:
            table.add(i=i, a_i=c)
    emit(table, cfg)
    return 0


def cmd_decompose(cfg) -> int:
    params = single(cfg)
    if params.degree > cfg.max_degree:
        raise UsageError(f"degree {params.degree} exceeds the cap {cfg.max_degree}")
    poly = borwein_poly(params)
    table = Table(["t", "j", "coeff"])
    for t, comp in enumerate(decompose_mod_p(poly, params.p)):
        for j, c in enumerate(comp.coeffs):
            if c:
                table.add(t=t, j=j, coeff=c)
    emit(table, cfg)
    verdict = sign_pattern(poly, params.p)
    if not verdict.holds and (params.p, params.s) in CONJECTURE_CASES:
        print(f"sign pattern fails at q^{verdict.first_violation} for {params}", file=sys.stderr)
        return 1
    return 0


def cmd_sum(cfg) -> int:
    params = single(cfg)
    d = cfg.d or params.modulus
    sums = progsum.progression_sums(params, d)
    residues = [cfg.b % d] if cfg.b is not None else range(d)
    table = Table(["p", "s", "n", "d", "b", "S"])
    for b in residues:
        table.add(p=params.p, s=params.s, n=params.n, d=d, b=b, S=sums[b])
    emit(table, cfg)
    return 0


VERIFY_COLUMNS = [
    "p", "s", "n", "b", "S", "main_num", "main_den", "within_bound",
    "dense_check", "char_check", "enum_check",
]


def _verdict(ok: Optional[bool]) -> str:
    return "skip" if ok is None else ("pass" if ok else "fail")


def cmd_verify(cfg) -> int:
    table = Table(VERIFY_COLUMNS)
    failures = []
    for params in grid(cfg):
        g = params.modulus
        records = progsum.theorem_main_records(params)
        dense = None
        if params.degree <= DENSE_CHECK_MAX_DEGREE:
            dense = progsum.progression_sums_dense(params, g)
        shifted = None
        if g <= CHAR_CHECK_MAX_MODULUS:
            prec = PrecisionPolicy.for_params(params)
            if cfg.bits:
                prec = PrecisionPolicy(bits=max(cfg.bits, 64))
            shifted = charsieve.shifted_progression_sums(
                params, charsieve.n_d_char_formula_all(params, prec)
            )
        enum = None
        if params.s * params.n * (params.p - 1) <= charsieve.MAX_SUBSET_BITS:
            enum = charsieve.shifted_progression_sums(
                params, charsieve.n_d_alternating_enumerated(params)
            )
        residues = [cfg.b % g] if cfg.b is not None else range(g)
        for b in residues:
            rec = records[b]
            checks = [
                None if dense is None else dense[b] == rec.sum,
                None if shifted is None else shifted[b] == rec.sum,
                None if enum is None else enum[b] == rec.sum,
            ]
            row = dict(
                p=params.p, s=params.s, n=params.n, b=b, S=rec.sum,
                main_num=rec.main_term.numerator, main_den=rec.main_term.denominator,
                within_bound=rec.within_bound,
                dense_check=_verdict(checks[0]), char_check=_verdict(checks[1]),
                enum_check=_verdict(checks[2]),
            )
            table.add(**row)
            if not rec.within_bound or False in checks:
                failures.append(row)
    emit(table, cfg)
    for row in failures:
        print("FAILED: " + json.dumps({k: _cell(v) for k, v in row.items()}), file=sys.stderr)
    return 1 if failures else 0


SWEEP_COLUMNS = [
    "p", "s", "n", "max_dev_2pn", "main_bound", "within_main",
    "max_dev_pn", "gp_bound", "within_gp", "li_bound", "within_li",
    "q", "max_dev_pq", "zaharescu_bound",
]


def _max_deviation(params: BorweinParams, d: int) -> Fraction:
    sums = progsum.progression_sums(params, d)
    return max(abs(sums[b] - progsum.main_term(params, d, b)) for b in range(d))


def _sqrt_bound_holds(params: BorweinParams, dev: Fraction) -> bool:
    # dev <= p^(sn/2)  <=>  dev^2 <= p^sn
    return dev * dev <= params.p ** (params.s * params.n)


def cmd_sweep(cfg) -> int:
    table = Table(SWEEP_COLUMNS)
    bad = False
    for params in grid(cfg):
        p, s, n = params.p, params.s, params.n
        dev_main = _max_deviation(params, params.modulus)
        dev_pn = _max_deviation(params, p * n)
        row = dict(
            p=p, s=s, n=n,
            max_dev_2pn=dev_main, main_bound=progsum.gp_bound(params),
            within_main=_sqrt_bound_holds(params, dev_main),
            max_dev_pn=dev_pn, gp_bound=progsum.gp_bound(params),
            within_gp=_sqrt_bound_holds(params, dev_pn),
        )
        bad |= not (row["within_main"] and row["within_gp"])
        if p == 3 and s == 1:
            row["li_bound"] = progsum.li_bound(n)
            row["within_li"] = dev_pn <= progsum.li_bound(n)
            bad |= not row["within_li"]
        q = cfg.q
        if q is not None and q <= n and q != p and is_prime(q):
            row["q"] = q
            row["max_dev_pq"] = _max_deviation(params, p * q)
            row["zaharescu_bound"] = progsum.zaharescu_bound(p, q, s, n, bits=cfg.bits or 128)
        table.add(**row)
    emit(table, cfg)
    return 1 if bad else 0


def cmd_sieve_test(cfg) -> int:
    """Randomized sieve trials plus the identity suites, as one report."""
    table = Table(["suite", "case", "result", "detail"])
    ok = True
    rng = random.Random(cfg.seed)
    for trial in range(cfg.trials):
        domain, X, f, m = charsieve.random_sieve_instance(rng)
        lhs, rhs = charsieve.li_wan_check(domain, X, f, m)
        ok &= lhs == rhs
        table.add(suite="li-wan", case=f"trial={trial} |A|={domain} m={m} |X|={len(X)}",
                  result=_verdict(lhs == rhs), detail=f"{lhs}")

    tol = mpmath.mpf("1e-10")
    worst = mpmath.mpf(0)
    for p in [q for q in range(3, 24) if is_prime(q)]:
        for r in range(1, p):
            lhs, rhs = charsieve.lemma_d_product(p, r, bits=cfg.bits or 128)
            worst = max(worst, lhs.distance_bound(rhs), lhs.modulus_distance_to(p))
    ok &= worst < tol
    table.add(suite="root-product", case="p<=23", result=_verdict(worst < tol),
              detail=mpmath.nstr(worst, 6))

    worst = mpmath.mpf(0)
    for p in (3, 5):
        for n in (1, 2):
            params = BorweinParams(p, 1, n)
            for chi in charsieve.characters(params.modulus):
                for m in range(4):
                    closed = charsieve.s_m_chi_closed(params, chi, m)
                    brute = charsieve.s_m_chi_brute(params, chi, m)
                    worst = max(worst, closed.distance_bound(brute))
    ok &= worst < tol
    table.add(suite="char-sum", case="p in {3,5}, n in {1,2}, m<=3", result=_verdict(worst < tol),
              detail=mpmath.nstr(worst, 6))

    z_ok = all(
        charsieve.z_m([Fraction(a) if i % ell == 0 else Fraction(0) for i in range(1, m + 1)])
        == charsieve.binom_series_coeff(ell, a, m)
        for ell in range(1, 5) for a in range(-8, 9) for m in range(13)
    )
    ok &= z_ok
    table.add(suite="z-m", case="ell<=4 |a|<=8 m<=12", result=_verdict(z_ok), detail="")
    emit(table, cfg)
    return 0 if ok else 1


HANDLERS = {
    "expand": cmd_expand,
    "decompose": cmd_decompose,
    "sum": cmd_sum,
    "verify": cmd_verify,
    "sieve-test": cmd_sieve_test,
    "sweep": cmd_sweep,
}


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(None if argv is None else list(argv))
    try:
        cfg = resolve(args)
        return HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"borwein-ap: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
