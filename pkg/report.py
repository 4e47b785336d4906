"""Full pipeline for one (pair, q) and the report writers."""
from __future__ import annotations

import csv
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from algebra import eps_gelfand_check, hecke_profile, rank_one_lower_bound
from chartab import CharacterTable, check_orthogonality, dixon_table, multiplicities, permutation_character
from cosets import (
    DoubleCosetPartition,
    HeckeAlgebra,
    SigmaOnZ,
    check_associativity,
    check_bi_invariance,
    enumerate_double_cosets,
    hecke_structure,
    is_commutative,
    semisimple_coset_report,
    sigma_fixed_dim,
    sigma_on_cosets,
    sigma_reverses_product,
)
from errors import InternalAssertion
from matgrp import EXHAUSTIVE_CHECK_LIMIT, conjugacy_classes, verify_group
from models import SCHEMA_VERSION, PairReport, RunConfig
from sympair import (
    EXHAUSTIVE_LIMIT,
    SymPair,
    check_involution,
    pair_from_id,
    symmetrization_equivariant,
    symmetrization_injective,
)

log = logging.getLogger(__name__)

# Hecke associativity is re-derived from the structure constants up to this |Z|
ASSOCIATIVITY_LIMIT = 12


class _Stopwatch:
    def __init__(self):
        self.stages: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.stages[name] = self.stages.get(name, 0.0) + time.perf_counter() - start


def integrity_checks(
    pair: SymPair,
    part: DoubleCosetPartition,
    z: SigmaOnZ,
    hecke: HeckeAlgebra,
    table: CharacterTable,
    seed: int = 0,
) -> dict[str, bool]:
    """Structural self-checks of one run; a check outside its size regime is left out."""
    out: dict[str, bool] = {}
    for label, group in (("G", pair.G), ("H", pair.H)):
        if group.order <= EXHAUSTIVE_CHECK_LIMIT:
            out[f"{label}_closure"] = verify_group(group)
    inv = check_involution(pair, seed=seed)
    out[f"involution_{'exhaustive' if inv.exhaustive else 'sampled'}"] = inv.ok
    if pair.G_order <= EXHAUSTIVE_LIMIT:
        out["symmetrization_injective"] = symmetrization_injective(pair)
    out["symmetrization_equivariant"] = symmetrization_equivariant(pair, seed=seed)
    out["hecke_bi_invariance"] = check_bi_invariance(pair, part, hecke, seed=seed)
    if part.count <= ASSOCIATIVITY_LIMIT:
        out["hecke_associativity"] = check_associativity(hecke)
    out["sigma_reverses_product"] = sigma_reverses_product(hecke, z)
    out["character_orthogonality"] = check_orthogonality(table)
    return out


def analyze_pair(
    pair_id: str,
    q: int,
    cap_group: int = 20_000,
    cap_cosets: int = 400,
    timings: bool = False,
    seed: int = 0,
) -> PairReport:
    watch = _Stopwatch()
    with watch.stage("groups"):
        pair = pair_from_id(pair_id, q, group_cap=cap_group)
    with watch.stage("double_cosets"):
        part = enumerate_double_cosets(pair, cap=cap_cosets)
        z = sigma_on_cosets(pair, part)
        fixed_dim = sigma_fixed_dim(z)
    with watch.stage("hecke"):
        hecke = hecke_structure(pair, part)
        commutative = is_commutative(hecke)
    with watch.stage("characters"):
        cd = conjugacy_classes(pair.G)
        table = dixon_table(pair.G, cd)
        mults = multiplicities(table, permutation_character(pair, cd))
    if mults.sum_m_deg != pair.index:
        raise InternalAssertion(f"sum m*d = {mults.sum_m_deg} != [G:H] = {pair.index}")
    with watch.stage("semisimple"):
        ss = semisimple_coset_report(pair, part, z)
    with watch.stage("integrity"):
        integrity = integrity_checks(pair, part, z, hecke, table, seed)
    failed = [name for name, ok in integrity.items() if not ok]
    if failed:
        log.warning("%s q=%d: integrity checks failed: %s", pair.pair_id, q, ", ".join(failed))

    profile = hecke_profile(mults, fixed_dim, z_count=part.count)
    eg = eps_gelfand_check(profile)
    r1 = rank_one_lower_bound(profile)
    ratio = Fraction(z.fixed_count, part.count)

    report = PairReport(
        pair_id=pair.pair_id,
        q=q,
        n=pair.theta.n,
        G_order=pair.G_order,
        H_order=pair.H_order,
        index=pair.index,
        Z_count=part.count,
        Z_sigma_count=z.fixed_count,
        sigma_fixed_dim=fixed_dim,
        epsilon=profile.epsilon,
        sigma_fixed_ratio=ratio,
        empirical_C=q * (1 - ratio),
        hecke_commutative=commutative,
        multiplicities=[t for t in mults.mults if t[2] > 0],
        num_constituents=mults.num_constituents,
        num_mult_one=mults.num_mult_one,
        mult_one_fraction=eg.fraction,
        eps_gelfand_bound=eg.bound,
        bound_holds=eg.holds,
        rank_one_bound=r1.bound,
        rank_one_holds=r1.holds,
        semisimple_contingency=ss.contingency,
        semisimple_counterexamples=list(ss.counterexamples),
        connectedness_trusted=pair.trusted,
        integrity=integrity,
        timing=watch.stages if timings else None,
    )
    log.info(
        "%s q=%d: |Z|=%d |Z^sigma|=%d mult-one %d/%d (bound %s)",
        report.pair_id, q, report.Z_count, report.Z_sigma_count,
        report.num_mult_one, report.num_constituents, report.eps_gelfand_bound,
    )
    return report


def _analyze_job(job: tuple) -> PairReport:
    return analyze_pair(*job)


def iter_reports(cfg: RunConfig) -> Iterator[PairReport]:
    """Reports in config order (pairs outer, q inner); parallel when workers > 1."""
    jobs = [(pid, q, cfg.cap_group, cfg.cap_cosets, cfg.timings, cfg.seed) for pid in cfg.pairs for q in cfg.q]
    for idx, job in enumerate(jobs, start=1):
        log.info("[%d/%d] queued %s at q=%d", idx, len(jobs), job[0], job[1])
    if cfg.workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            yield _analyze_job(job)
        return
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        yield from pool.map(_analyze_job, jobs)


def run_many(cfg: RunConfig) -> list[PairReport]:
    return list(iter_reports(cfg))


# ─── Writers ────────────────────────────────────────────────────────────

def _safe_write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_json(payload), encoding="utf-8")


def render_json(payload: dict) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def reports_payload(cfg: RunConfig, reports: list[PairReport]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.to_dict(),
        "reports": [r.to_dict() for r in reports],
    }


def write_reports(cfg: RunConfig, reports: list[PairReport]) -> None:
    """JSON (canonical) or CSV to cfg.out; JSON to stdout when no path is given."""
    if cfg.format == "csv":
        rows = [r.to_row() for r in reports]
        if cfg.out:
            path = Path(cfg.out)
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w", newline="", encoding="utf-8") as fp:
                _write_csv(fp, rows)
        else:
            _write_csv(sys.stdout, rows)
        return
    payload = reports_payload(cfg, reports)
    if cfg.out:
        _safe_write_json(Path(cfg.out), payload)
    else:
        sys.stdout.write(render_json(payload))


def _write_csv(fp, rows: list[dict]) -> None:
    if not rows:
        return
    writer = csv.DictWriter(fp, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
