"""Distances between an annealing output state and the solution state."""
from __future__ import annotations

from dataclasses import dataclass

from .formula import Assignment


@dataclass(frozen=True)
class DistanceReport:
    hamming: int
    cyclical: int


def _as_index(a: Assignment | int) -> int:
    return a.index if isinstance(a, Assignment) else int(a)


def hamming(gamma: Assignment, tau: Assignment) -> int:
    if gamma.n != tau.n:
        raise ValueError(f"length mismatch: {gamma.n} vs {tau.n}")
    return sum(a != b for a, b in zip(gamma.bits, tau.bits))


def cyclical(gamma: Assignment | int, tau: Assignment | int, n: int) -> int:
    """Ring distance between basis indices modulo ``2**n``."""
    g, t = _as_index(gamma), _as_index(tau)
    size = 1 << n
    if not (0 <= g < size and 0 <= t < size):
        raise ValueError(f"indices {g}, {t} out of range for n={n}")
    diff = abs(g - t)
    return min(diff, size - diff)


def distances(gamma: Assignment, tau: Assignment) -> DistanceReport:
    return DistanceReport(hamming(gamma, tau), cyclical(gamma, tau, gamma.n))
