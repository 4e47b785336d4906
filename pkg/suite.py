"""Reproduction checks run by ``cli.py verify``.

Each check compares a claimed value with the measured one and yields a CheckResult;
nothing here raises on a mismatch.
"""
from __future__ import annotations

import json
import logging
import random
from fractions import Fraction

from algebra import SKEW, SYMMETRIC, classify_anti_involution, fixed_space_dim, random_invertible
from models import CheckResult, PairReport, RunConfig
from report import analyze_pair, iter_reports

log = logging.getLogger(__name__)

TORUS = "gl-torus(1,1)"
TORUS_Q = (3, 5, 7)
TREND_Q = (3, 5, 7, 9)
CATALOG_RUNS = (
    (TORUS, 3), (TORUS, 5), (TORUS, 7), (TORUS, 9),
    ("gl-orthogonal", 3), ("gl-orthogonal", 5),
    ("gl-symplectic", 3), ("gl-symplectic", 5),
    ("gl-galois", 3),
    ("gl-torus(1,2)", 3),
)
# |G| above the exhaustive involution-check limit
SAMPLED_RUNS = (("gl-galois", 3), ("gl-torus(1,2)", 3))
ALGEBRA_DIMS = range(2, 7)
ALGEBRA_TRIALS = 50


def _collect(workers: int, seed: int = 0) -> dict[tuple[str, int], PairReport]:
    out: dict[tuple[str, int], PairReport] = {}
    for pid in dict.fromkeys(p for p, _ in CATALOG_RUNS):
        qs = [q for p, q in CATALOG_RUNS if p == pid]
        for r in iter_reports(RunConfig(pairs=[pid], q=qs, workers=workers, seed=seed)):
            out[(pid, r.q)] = r
    return out


def _check(results: list[CheckResult], criterion: int, name: str, claim: str, measured, passed: bool) -> None:
    results.append(CheckResult(criterion, name, claim, str(measured), bool(passed)))


def check_torus_counts(reports, results) -> None:
    for q in TORUS_Q:
        r = reports[(TORUS, q)]
        _check(results, 1, f"torus counts q={q}", f"|Z|={q + 4}, |Z^sigma|={q + 2}",
               f"|Z|={r.Z_count}, |Z^sigma|={r.Z_sigma_count}",
               r.Z_count == q + 4 and r.Z_sigma_count == q + 2)


def check_steinberg(reports, results) -> None:
    for q in TORUS_Q:
        r = reports[(TORUS, q)]
        doubles = [(d, m) for _, d, m in r.multiplicities if m == 2]
        others_ok = all(m in (1, 2) for _, _, m in r.multiplicities)
        sum_sq = sum(m * m for _, _, m in r.multiplicities)
        _check(results, 2, f"Steinberg twice q={q}", f"one m=2 of degree {q}; sum m^2={q + 4}",
               f"m=2 at degrees {[d for d, _ in doubles]}; sum m^2={sum_sq}",
               doubles == [(q, 2)] and others_ok and sum_sq == q + 4)


def check_non_gelfand(reports, results) -> None:
    for q in TORUS_Q:
        r = reports[(TORUS, q)]
        _check(results, 3, f"torus not Gelfand q={q}", "hecke commutative = False",
               f"hecke commutative = {r.hecke_commutative}", not r.hecke_commutative)
    for (pid, q), r in reports.items():
        free = all(m <= 1 for _, _, m in r.multiplicities)
        _check(results, 3, f"commutative iff multiplicity-free {pid} q={q}", "equivalent",
               f"commutative={r.hecke_commutative}, multiplicity-free={free}",
               r.hecke_commutative == free)


def check_eps_bound(reports, results) -> None:
    for (pid, q), r in reports.items():
        _check(results, 4, f"eps-Gelfand {pid} q={q}", f">= {r.eps_gelfand_bound}",
               r.mult_one_fraction, r.mult_one_fraction >= r.eps_gelfand_bound)
    r = reports[(TORUS, 3)]
    _check(results, 4, "eps-Gelfand values torus q=3", "3/4 >= 3/7",
           f"{r.mult_one_fraction} >= {r.eps_gelfand_bound}",
           r.mult_one_fraction == Fraction(3, 4) and r.eps_gelfand_bound == Fraction(3, 7))


def check_cross_module(reports, results) -> None:
    for (pid, q), r in reports.items():
        sum_sq = sum(m * m for _, _, m in r.multiplicities)
        sum_md = sum(m * d for _, d, m in r.multiplicities)
        _check(results, 5, f"sum m^2 = |Z|, sum m d = [G:H] {pid} q={q}",
               f"{r.Z_count}, {r.index}", f"{sum_sq}, {sum_md}",
               sum_sq == r.Z_count and sum_md == r.index)


def check_matrix_algebra(results, seed: int = 0) -> None:
    rng = random.Random(seed)
    for n in ALGEBRA_DIMS:
        top = n * (n + 1) // 2
        general = [fixed_space_dim(n, random_invertible(n, rng)) for _ in range(ALGEBRA_TRIALS)]
        _check(results, 6, f"dim M^sigma <= n(n+1)/2, n={n}", f"<= {top}", f"max {max(general)}",
               max(general) <= top)
        sym = [random_invertible(n, rng, SYMMETRIC) for _ in range(ALGEBRA_TRIALS)]
        ok = all(classify_anti_involution(n, g) == SYMMETRIC and fixed_space_dim(n, g) == top for g in sym)
        _check(results, 6, f"symmetric g, n={n}", f"= {top}", "all equal" if ok else "mismatch", ok)
        if n % 2 == 0:
            skew = [random_invertible(n, rng, SKEW) for _ in range(ALGEBRA_TRIALS)]
            low = n * (n - 1) // 2
            ok = all(classify_anti_involution(n, g) == SKEW and fixed_space_dim(n, g) == low for g in skew)
            _check(results, 6, f"skew g, n={n}", f"= {low}", "all equal" if ok else "mismatch", ok)


def check_rank_one(reports, results) -> None:
    for (pid, q), r in reports.items():
        _check(results, 7, f"rank-one bound {pid} q={q}", f">= {r.rank_one_bound}",
               r.num_mult_one, r.rank_one_holds)
    r = reports[(TORUS, 3)]
    _check(results, 7, "rank-one bound tight torus q=3", "3 >= 3",
           f"{r.num_mult_one} >= {r.rank_one_bound}", r.num_mult_one == r.rank_one_bound == 3)


def check_semisimple(reports, results) -> None:
    for q in TORUS_Q:
        r = reports[(TORUS, q)]
        _check(results, 8, f"semisimple cosets are sigma-fixed q={q}", "0 counterexamples",
               len(r.semisimple_counterexamples), not r.semisimple_counterexamples)


def check_trend(reports, results) -> None:
    fractions = [reports[(TORUS, q)].mult_one_fraction for q in TREND_Q]
    monotone = all(a <= b for a, b in zip(fractions, fractions[1:]))
    _check(results, 9, "mult-one fraction non-decreasing in q", "non-decreasing",
           ", ".join(map(str, fractions)), monotone)
    for q, f in zip(TREND_Q, fractions):
        floor = 1 - Fraction(4, q + 4)
        _check(results, 9, f"mult-one fraction floor q={q}", f">= {floor}", f, f >= floor)


def check_determinism(reports, results, seed: int = 0) -> None:
    first = json.dumps(reports[(TORUS, 3)].to_dict(), sort_keys=True)
    again = json.dumps(analyze_pair(TORUS, 3, seed=seed).to_dict(), sort_keys=True)
    _check(results, 10, "reports identical across runs", "identical",
           "identical" if first == again else "differ", first == again)


def check_integrity(reports, results) -> None:
    for (pid, q), r in reports.items():
        failed = sorted(name for name, ok in r.integrity.items() if not ok)
        _check(results, 11, f"integrity {pid} q={q}", f"{len(r.integrity)} checks pass",
               ", ".join(failed) or "all pass", bool(r.integrity) and not failed)
    for key in SAMPLED_RUNS:
        r = reports.get(key)
        if r is None:
            continue
        _check(results, 11, f"sampled involution check {key[0]} q={key[1]}", "sampled regime",
               "sampled" if "involution_sampled" in r.integrity else "not sampled",
               "involution_sampled" in r.integrity)


def run_suite(workers: int = 1, seed: int = 0) -> tuple[list[CheckResult], list[PairReport]]:
    """Check results, and the catalog reports they were measured on."""
    reports = _collect(workers, seed)
    results: list[CheckResult] = []
    check_torus_counts(reports, results)
    check_steinberg(reports, results)
    check_non_gelfand(reports, results)
    check_eps_bound(reports, results)
    check_cross_module(reports, results)
    check_matrix_algebra(results, seed)
    check_rank_one(reports, results)
    check_semisimple(reports, results)
    check_trend(reports, results)
    check_determinism(reports, results, seed)
    check_integrity(reports, results)
    failed = sum(1 for r in results if not r.passed)
    log.info("Suite: %d checks, %d failed", len(results), failed)
    return results, list(reports.values())


def format_table(results: list[CheckResult]) -> str:
    header = ("#", "check", "claim", "measured", "status")
    rows = [(str(r.criterion), r.name, r.claim, r.measured, "PASS" if r.passed else "FAIL") for r in results]
    widths = [max(len(row[i]) for row in [header, *rows]) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *rows]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
