"""Seeded Monte-Carlo comparison of DP-similarity clustering and spectral clustering.

A cell is one ``(b, u)`` pair. Sample ``s`` of cell ``c`` is generated from
:func:`sample_seed` ``(base_seed, c, s)`` and the same instance is handed to
every algorithm and every ``M``, so curves over ``M`` are paired.

Per-cell summaries exclude failed samples from the mean and standard
deviation. In the best-solution ratio a sample counts 1 for the algorithm
with the strictly smaller tinf, 0.5 to each on a tie (or when both failed),
and 1 for the other algorithm when one of them failed.
"""

from __future__ import annotations

import csv
import itertools
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import IO, Iterable, Iterator

import numpy as np

from .assign import dp_similarity_clustering
from .errors import ParameterError, UndefinedRatioError
from .generator import GeneratorConfig, Instance, generate
from .metrics import tinf_value
from .model import ClusterSystem, validate_if_cluster
from .spectral import spectral_cluster

ALGORITHMS = ("dp", "spectral")
JOBS_ENV = "IFCLUSTER_JOBS"
OK = "ok"
UNDEFINED_TINF = "undefined-tinf"

CSV_COLUMNS = (
    "cell", "b", "u", "M", "sample", "seed", "algorithm", "status", "tinf",
    "valid", "isolated_users", "time_ms", "bs_sizes", "user_sizes",
)


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def sample_seed(base_seed: int, cell: int, sample: int) -> int:
    """64-bit instance seed: ``SeedSequence(base_seed, spawn_key=(cell, sample))``."""
    ss = np.random.SeedSequence(base_seed, spawn_key=(cell, sample))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class BenchPlan:
    bs: tuple[int, ...]
    us: tuple[int, ...]
    Ms: tuple[int, ...]
    samples: int = 100
    algorithms: tuple[str, ...] = ALGORITHMS
    base_seed: int = 0
    jobs: int = field(default_factory=default_jobs)
    repeats: int = 1
    side: float = 1000.0
    dist_min: float = 1.0
    dist_max: float = 200.0
    alpha: float = 2.0

    def __post_init__(self):
        if self.samples < 1 or self.repeats < 1 or self.jobs < 1:
            raise ParameterError("samples, repeats and jobs must be positive")
        bad = set(self.algorithms) - set(ALGORITHMS)
        if bad:
            raise ParameterError(f"unknown algorithm(s) {sorted(bad)}")
        if not self.Ms or min(self.Ms) < 1:
            raise ParameterError("M values must be positive")

    def cells(self) -> list[tuple[int, int]]:
        return list(itertools.product(self.bs, self.us))

    def config(self, b: int, u: int, seed: int) -> GeneratorConfig:
        return GeneratorConfig(b, u, self.side, self.dist_min, self.dist_max, self.alpha, seed)


@dataclass(frozen=True)
class BenchRecord:
    cell: int
    b: int
    u: int
    M: int
    sample: int
    seed: int
    algorithm: str
    status: str
    tinf: float | None
    valid: bool
    isolated_users: int
    time_ms: float
    bs_sizes: tuple[int, ...] = ()
    user_sizes: tuple[int, ...] = ()

    @property
    def failed(self) -> bool:
        return self.status != OK

    def row(self) -> list:
        d = asdict(self)
        d["tinf"] = "" if self.tinf is None else repr(self.tinf)
        d["valid"] = int(self.valid)
        d["time_ms"] = f"{self.time_ms:.4f}"
        d["bs_sizes"] = ";".join(map(str, self.bs_sizes))
        d["user_sizes"] = ";".join(map(str, self.user_sizes))
        return [d[c] for c in CSV_COLUMNS]


def _timed(fn, repeats: int):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times) * 1000.0


def _score(system: ClusterSystem, inst: Instance) -> tuple[str, float | None, bool]:
    valid = validate_if_cluster(system, inst.weights).valid
    try:
        return OK, tinf_value(system, inst.weights), valid
    except UndefinedRatioError:
        return UNDEFINED_TINF, None, valid


def run_algorithm(alg: str, inst: Instance, M: int, seed: int, repeats: int = 1):
    """Run one algorithm; returns ``(status, tinf, valid, time_ms, system)``."""
    W = inst.weights
    if alg == "dp":
        system, ms = _timed(lambda: dp_similarity_clustering(W, M), repeats)
    else:
        out, ms = _timed(lambda: spectral_cluster(W, M, seed=seed), repeats)
        if out.failed:
            return out.failure, None, False, ms, None
        system = out.system
    status, value, valid = _score(system, inst)
    return status, value, valid, ms, system


def _run_sample(plan: BenchPlan, cell: int, b: int, u: int, sample: int) -> list[BenchRecord]:
    seed = sample_seed(plan.base_seed, cell, sample)
    inst = generate(plan.config(b, u, seed))
    isolated = len(inst.weights.isolated_users())
    records = []
    for M in plan.Ms:
        for alg in plan.algorithms:
            if (alg == "dp" and M > b) or M > b + u:
                continue
            status, value, valid, ms, system = run_algorithm(alg, inst, M, seed, plan.repeats)
            sizes = system.sizes() if system is not None else ((), ())
            records.append(BenchRecord(
                cell, b, u, M, sample, seed, alg, status, value, valid, isolated, ms,
                tuple(sizes[0]), tuple(sizes[1]),
            ))
    return records


def _run_task(args) -> list[BenchRecord]:
    return _run_sample(*args)


def run_bench(plan: BenchPlan) -> Iterator[BenchRecord]:
    """Yield records sorted by (cell, sample, M, algorithm order), independent of scheduling."""
    tasks = [
        (plan, c, b, u, s)
        for c, (b, u) in enumerate(plan.cells())
        for s in range(plan.samples)
    ]
    if plan.jobs == 1:
        for t in tasks:
            yield from _run_task(t)
        return
    with ProcessPoolExecutor(max_workers=plan.jobs) as pool:
        for recs in pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * plan.jobs))):
            yield from recs


@dataclass(frozen=True)
class CellSummary:
    b: int
    u: int
    M: int
    algorithm: str
    samples: int
    failures: int
    failure_ratio: float
    mean_tinf: float | None
    std_tinf: float | None
    mean_time_ms: float
    median_time_ms: float
    best_ratio: float | None = None  # share of samples where this algorithm gave the better solution
    wins_nonfailed: float | None = None  # strict wins among samples where both algorithms succeeded


def summarize(records: Iterable[BenchRecord]) -> list[CellSummary]:
    groups: dict[tuple[int, int, int], dict[str, dict[int, BenchRecord]]] = {}
    for r in records:
        groups.setdefault((r.b, r.u, r.M), {}).setdefault(r.algorithm, {})[r.sample] = r

    out = []
    for (b, u, M), by_alg in sorted(groups.items()):
        head = _head_to_head(by_alg) if len(by_alg) == 2 else {}
        for alg in (a for a in ALGORITHMS if a in by_alg):
            recs = list(by_alg[alg].values())
            ok = [r.tinf for r in recs if not r.failed]
            times = [r.time_ms for r in recs]
            out.append(CellSummary(
                b, u, M, alg, len(recs), len(recs) - len(ok), (len(recs) - len(ok)) / len(recs),
                statistics.fmean(ok) if ok else None,
                statistics.stdev(ok) if len(ok) > 1 else None,
                statistics.fmean(times), statistics.median(times),
                *head.get(alg, (None, None)),
            ))
    return out


def _head_to_head(by_alg: dict[str, dict[int, BenchRecord]]) -> dict[str, tuple[float, float | None]]:
    a, c = ALGORITHMS
    score = {a: 0.0, c: 0.0}
    strict = {a: 0, c: 0}
    both_ok = 0
    common = sorted(set(by_alg[a]) & set(by_alg[c]))
    for s in common:
        ra, rc = by_alg[a][s], by_alg[c][s]
        if ra.failed and rc.failed:
            score[a] += 0.5
            score[c] += 0.5
        elif ra.failed or rc.failed:
            score[a if rc.failed else c] += 1.0
        else:
            both_ok += 1
            if ra.tinf < rc.tinf:
                score[a] += 1.0
                strict[a] += 1
            elif rc.tinf < ra.tinf:
                score[c] += 1.0
                strict[c] += 1
            else:
                score[a] += 0.5
                score[c] += 0.5
    n = len(common)
    return {
        alg: (score[alg] / n if n else math.nan, strict[alg] / both_ok if both_ok else None)
        for alg in (a, c)
    }


def write_csv(records: Iterable[BenchRecord], f: IO[str]) -> list[BenchRecord]:
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    kept = []
    for r in records:
        writer.writerow(r.row())
        kept.append(r)
    return kept
