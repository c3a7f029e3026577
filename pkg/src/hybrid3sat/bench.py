"""Experiment harness: instance grid, per-run pipeline, aggregation.

One run takes a unique-solution random instance, compiles it to a QUBO,
anneals it, and prices three searches for the true solution: plain Grover
over the whole space, Hamming search and cyclical search seeded with the
annealed state.
"""
from __future__ import annotations

import csv
import io
import logging
from collections import defaultdict
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from functools import lru_cache
from statistics import fmean
from typing import Iterable, Sequence

import numpy as np

from .analytic import grover_iterations, plan_cyclical, plan_hamming
from .anneal import AnnealConfig, Sampler, SimulatedAnnealingSampler
from .formula import Assignment, CnfFormula, generate_random, solution_indices
from .metrics import cyclical, hamming
from .qubo import compile_formula

log = logging.getLogger(__name__)

DENSITIES = (4.0, 4.3, 4.55)
N_RANGE = tuple(range(7, 23))
INSTANCES = 10
SEEDS = 5

CSV_HEADER = (
    "n", "density", "instance", "seed", "k_f", "d_f", "grover", "ham_unk",
    "ham_known", "cyc_unk", "cyc_known", "anneal_value", "solved",
)


@dataclass(frozen=True)
class TestCase:
    n: int
    density: float
    instance: int = 0
    seed: int = 0

    __test__ = False  # not a pytest class


def full_grid(
    ns: Iterable[int] = N_RANGE,
    densities: Iterable[float] = DENSITIES,
    instances: int = INSTANCES,
    seeds: int = SEEDS,
) -> list[TestCase]:
    return [
        TestCase(n, float(d), i, s)
        for d in densities
        for n in ns
        for i in range(instances)
        for s in range(seeds)
    ]


def _derive_seed(*parts: int) -> int:
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


def _density_key(density: float) -> int:
    return int(Fraction(str(density)) * 1000)


@lru_cache(maxsize=512)
def instance_for(n: int, density: float, instance: int, base_seed: int = 0) -> CnfFormula:
    seed = _derive_seed(base_seed, n, _density_key(density), instance)
    return generate_random(n, str(density), unique_solution=True, seed=seed)


@dataclass(frozen=True)
class RunRecord:
    n: int
    density: float
    instance: int
    seed: int
    k_f: int
    d_f: int
    grover: int
    ham_unk: int
    ham_known: int
    cyc_unk: int
    cyc_known: int
    anneal_value: Fraction
    solved: bool

    @property
    def cyc_exec_only(self) -> int:
        """Cyclical total counting ``s_f`` executions rather than ``s_f + 1``."""
        return self.cyc_unk - self.cyc_known

    def row(self) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool):
                out.append("1" if v else "0")
            elif isinstance(v, float):
                out.append(repr(v))
            else:
                out.append(str(v))
        return out


def run_pipeline(
    tc: TestCase,
    cfg: AnnealConfig | None = None,
    sampler: Sampler | None = None,
    penalty: object = "auto",
    base_seed: int = 0,
) -> RunRecord:
    f = instance_for(tc.n, tc.density, tc.instance, base_seed)
    q = compile_formula(f, penalty)
    if sampler is None:
        cfg = cfg or AnnealConfig()
        run_seed = _derive_seed(cfg.seed, tc.n, _density_key(tc.density), tc.instance, tc.seed)
        sampler = SimulatedAnnealingSampler(replace(cfg, seed=run_seed))
    sampleset = sampler.sample(q)
    gamma = sampleset.best
    tau = int(solution_indices(f)[0])
    g = gamma.index
    k_f = hamming(gamma, Assignment.from_index(tau, tc.n))
    d_f = cyclical(g, tau, tc.n)
    solved = k_f == 0
    ham = plan_hamming(tc.n, k_f)
    if solved:
        cyc_unk = cyc_known = 0
    else:
        cyc = plan_cyclical(tc.n, g, tau)
        cyc_unk, cyc_known = cyc.total_unknown, cyc.total_known
    return RunRecord(
        n=tc.n,
        density=tc.density,
        instance=tc.instance,
        seed=tc.seed,
        k_f=k_f,
        d_f=d_f,
        grover=grover_iterations(tc.n),
        ham_unk=ham.total_unknown,
        ham_known=ham.total_known,
        cyc_unk=cyc_unk,
        cyc_known=cyc_known,
        anneal_value=sampleset.first.value,
        solved=solved,
    )


def run_grid(
    cases: Sequence[TestCase],
    cfg: AnnealConfig | None = None,
    penalty: object = "auto",
    base_seed: int = 0,
) -> list[RunRecord]:
    records = []
    for i, tc in enumerate(cases):
        records.append(run_pipeline(tc, cfg, penalty=penalty, base_seed=base_seed))
        if (i + 1) % 50 == 0:
            log.info("%d/%d runs done", i + 1, len(cases))
    return records


def records_to_csv(records: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def records_from_csv(text: str) -> list[RunRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected records header {reader.fieldnames}")
    out = []
    for row in reader:
        out.append(
            RunRecord(
                n=int(row["n"]),
                density=float(row["density"]),
                instance=int(row["instance"]),
                seed=int(row["seed"]),
                k_f=int(row["k_f"]),
                d_f=int(row["d_f"]),
                grover=int(row["grover"]),
                ham_unk=int(row["ham_unk"]),
                ham_known=int(row["ham_known"]),
                cyc_unk=int(row["cyc_unk"]),
                cyc_known=int(row["cyc_known"]),
                anneal_value=Fraction(row["anneal_value"]),
                solved=row["solved"] == "1",
            )
        )
    return out


@dataclass(frozen=True)
class DistanceRow:
    n: int
    count: int
    hamming: float
    cyclical: float


@dataclass(frozen=True)
class IterationRow:
    n: int
    density: float
    count: int
    solved: float
    grover: float
    ham_unk: float
    ham_known: float
    cyc_unk: float
    cyc_known: float
    cyc_exec_only: float


def pct_delta(x: float, baseline: float) -> float:
    """Signed change against the Grover column; negative is a saving."""
    return 100.0 * (x - baseline) / baseline


def _delta_cell(x: float, baseline: float) -> str:
    return f"{x:.2f} ({pct_delta(x, baseline):+.2f}%)"


@dataclass(frozen=True)
class Summary:
    distances: tuple[DistanceRow, ...]
    iterations: tuple[IterationRow, ...]

    def iteration_row(self, n: int, density: float) -> IterationRow:
        for row in self.iterations:
            if row.n == n and row.density == density:
                return row
        raise KeyError((n, density))

    def to_markdown(self, scenarios: Sequence[str] = ("grover", "hamming", "cyclical")) -> str:
        lines = [
            "### Average distances of the annealed state to the solution",
            "",
            "| n | runs | Hamming | Cyclical |",
            "|---:|---:|---:|---:|",
        ]
        lines += [
            f"| {r.n} | {r.count} | {r.hamming:.2f} | {r.cyclical:.2f} |" for r in self.distances
        ]
        head = ["n", "density", "runs", "solved"]
        if "grover" in scenarios:
            head.append("Grover")
        if "hamming" in scenarios:
            head += ["Hamming unknown", "Hamming known"]
        if "cyclical" in scenarios:
            head += ["Cyclical unknown", "Cyclical known", "Cyclical (s_f terms)"]
        lines += [
            "",
            "### Mean total iterations (delta vs Grover)",
            "",
            "| " + " | ".join(head) + " |",
            "|" + "|".join("---:" for _ in head) + "|",
        ]
        for r in self.iterations:
            cells = [str(r.n), f"{r.density}", str(r.count), f"{r.solved:.0%}"]
            if "grover" in scenarios:
                cells.append(f"{r.grover:.1f}")
            if "hamming" in scenarios:
                cells += [_delta_cell(x, r.grover) for x in (r.ham_unk, r.ham_known)]
            if "cyclical" in scenarios:
                cells += [_delta_cell(x, r.grover) for x in (r.cyc_unk, r.cyc_known, r.cyc_exec_only)]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"


def aggregate(records: Sequence[RunRecord]) -> Summary:
    if not records:
        raise ValueError("cannot aggregate an empty record list")
    by_n: dict[int, list[RunRecord]] = defaultdict(list)
    by_cell: dict[tuple[int, float], list[RunRecord]] = defaultdict(list)
    for rec in records:
        by_n[rec.n].append(rec)
        by_cell[(rec.n, rec.density)].append(rec)
    distances = tuple(
        DistanceRow(n, len(rs), fmean(r.k_f for r in rs), fmean(r.d_f for r in rs))
        for n, rs in sorted(by_n.items())
    )
    iterations = tuple(
        IterationRow(
            n=n,
            density=d,
            count=len(rs),
            solved=fmean(r.solved for r in rs),
            grover=fmean(r.grover for r in rs),
            ham_unk=fmean(r.ham_unk for r in rs),
            ham_known=fmean(r.ham_known for r in rs),
            cyc_unk=fmean(r.cyc_unk for r in rs),
            cyc_known=fmean(r.cyc_known for r in rs),
            cyc_exec_only=fmean(r.cyc_exec_only for r in rs),
        )
        for (n, d), rs in sorted(by_cell.items())
    )
    return Summary(distances, iterations)
