"""Simulated annealing over QUBO models.

The sampler minimizes the energy ``-value`` with single-bit-flip Metropolis
sweeps under a geometric inverse-temperature schedule, restarting
``num_reads`` times from random states. Anything exposing
``sample(model) -> SampleSet`` can stand in for it in the pipeline, e.g. a
client for a hardware annealer.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import reduce
from typing import Protocol

import numba
import numpy as np

from .formula import Assignment
from .qubo import QuboModel


@dataclass(frozen=True)
class AnnealConfig:
    num_reads: int | None = None
    num_sweeps: int = 1000
    num_sweeps_per_beta: int = 1
    beta_range: tuple[float, float] | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_reads is not None and self.num_reads < 1:
            raise ValueError("num_reads must be >= 1")
        if self.num_sweeps < 1 or self.num_sweeps_per_beta < 1:
            raise ValueError("num_sweeps and num_sweeps_per_beta must be >= 1")
        if self.beta_range is not None:
            lo, hi = self.beta_range
            if not 0 <= lo < hi:
                raise ValueError(f"beta_range must satisfy 0 <= beta_min < beta_max, got {self.beta_range}")
            object.__setattr__(self, "beta_range", (float(lo), float(hi)))

    def reads_for(self, q: QuboModel) -> int:
        # one restart per QUBO variable unless overridden
        return self.num_reads if self.num_reads is not None else q.num_vars

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "AnnealConfig":
        doc = json.loads(text)
        if doc.get("beta_range") is not None:
            doc["beta_range"] = tuple(doc["beta_range"])
        return cls(**doc)


@dataclass(frozen=True)
class Sample:
    bits: tuple[int, ...]
    value: Fraction


@dataclass(frozen=True)
class SampleSet:
    """Samples sorted best-first (highest value, then earliest restart)."""

    samples: tuple[Sample, ...]
    num_original: int

    @property
    def first(self) -> Sample:
        return self.samples[0]

    @property
    def best(self) -> Assignment:
        return Assignment(self.first.bits[: self.num_original])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["bits", "value"])
        for s in self.samples:
            writer.writerow(["".join(map(str, s.bits)), str(s.value)])
        return buf.getvalue()


class Sampler(Protocol):
    def sample(self, q: QuboModel) -> SampleSet: ...


def default_beta_range(q: QuboModel) -> tuple[float, float]:
    """Hot end accepts the largest possible uphill flip half the time, cold
    end accepts the smallest one 1% of the time."""
    if not q.coeffs:
        raise ValueError("cannot derive a temperature range for an all-zero model")
    row = np.zeros(q.num_vars)
    for (i, j), c in q.coeffs.items():
        row[i] += abs(float(c))
        if i != j:
            row[j] += abs(float(c))
    de_max = float(row.max())
    de_min = min(abs(float(c)) for c in q.coeffs.values())
    return math.log(2) / de_max, math.log(100) / de_min


def _energy_csr(q: QuboModel) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Linear energies and symmetric couplings of ``-value`` in CSR form."""
    n = q.num_vars
    h = np.zeros(n)
    nbrs: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (i, j), c in q.coeffs.items():
        if i == j:
            h[i] -= float(c)
        else:
            nbrs[i].append((j, -float(c)))
            nbrs[j].append((i, -float(c)))
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(x) for x in nbrs])
    indices = np.array([j for x in nbrs for j, _ in x], dtype=np.int64)
    weights = np.array([w for x in nbrs for _, w in x], dtype=np.float64)
    return h, indptr, indices, weights


@numba.njit(cache=True)
def _anneal_reads(h, indptr, indices, weights, betas, sweeps_per_beta, seeds):
    n = h.shape[0]
    out = np.empty((seeds.shape[0], n), dtype=np.int8)
    field = np.empty(n)
    for r in range(seeds.shape[0]):
        np.random.seed(seeds[r])
        x = np.empty(n, dtype=np.int8)
        for i in range(n):
            x[i] = 1 if np.random.random() < 0.5 else 0
        for i in range(n):
            acc = h[i]
            for p in range(indptr[i], indptr[i + 1]):
                acc += weights[p] * x[indices[p]]
            field[i] = acc
        for b in range(betas.shape[0]):
            beta = betas[b]
            for _ in range(sweeps_per_beta):
                for i in range(n):
                    delta = 1 - 2 * x[i]
                    de = delta * field[i]
                    if de <= 0.0 or np.random.random() < math.exp(-beta * de):
                        x[i] += delta
                        for p in range(indptr[i], indptr[i + 1]):
                            field[indices[p]] += weights[p] * delta
        out[r] = x
    return out


def _exact_values(q: QuboModel, states: np.ndarray) -> list[Fraction]:
    denom = reduce(math.lcm, (c.denominator for c in q.coeffs.values()), q.offset.denominator)
    mat = np.zeros((q.num_vars, q.num_vars), dtype=np.int64)
    for (i, j), c in q.coeffs.items():
        mat[i, j] = c.numerator * (denom // c.denominator)
    s = states.astype(np.int64)
    raw = np.einsum("ri,ij,rj->r", s, mat, s)
    base = q.offset * denom
    return [Fraction(int(v) + int(base), denom) for v in raw]


def sample(q: QuboModel, cfg: AnnealConfig | None = None) -> SampleSet:
    cfg = cfg or AnnealConfig()
    if q.num_vars == 0:
        raise ValueError("cannot sample an empty model")
    reads = cfg.reads_for(q)
    if q.coeffs:
        beta_min, beta_max = cfg.beta_range or default_beta_range(q)
        betas = np.geomspace(max(beta_min, 1e-12), beta_max, cfg.num_sweeps)
    else:
        betas = np.ones(cfg.num_sweeps)
    seeds = np.random.SeedSequence(cfg.seed).generate_state(reads).astype(np.int64)
    h, indptr, indices, weights = _energy_csr(q)
    states = _anneal_reads(h, indptr, indices, weights, betas, cfg.num_sweeps_per_beta, seeds)
    values = _exact_values(q, states)
    order = sorted(range(reads), key=lambda r: -values[r])
    samples = tuple(Sample(tuple(int(b) for b in states[r]), values[r]) for r in order)
    return SampleSet(samples, q.num_original)


class SimulatedAnnealingSampler:
    def __init__(self, config: AnnealConfig | None = None) -> None:
        self.config = config or AnnealConfig()

    def sample(self, q: QuboModel) -> SampleSet:
        return sample(q, self.config)

