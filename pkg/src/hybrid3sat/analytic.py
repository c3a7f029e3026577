"""Closed-form iteration counts for Grover, Hamming-neighbourhood and
cyclical-range searches started from an annealed guess ``gamma``.

Hamming search runs attempts ``k = 1, 2, ...`` with a biased superposition
whose per-qubit flip probability is ``k/n``. Attempt ``k`` cannot know the
true distance, so it runs the iteration count that would be optimal if the
solution sat exactly ``k`` flips away; its success probability is then set
by the true distance ``k_f``. Attempts stop once the cumulative success
probability reaches 90%.

Cyclical search sweeps disjoint ring segments of ``2**r`` states around
``gamma``, each searched with a plain Grover count for ``2**r`` states.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .metrics import cyclical

SUCCESS_TARGET = 0.9


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def _uniform_iterations(r: int) -> int:
    return round_half_away(math.pi / (4 * math.asin(2.0 ** (-r / 2))) - 0.5)


def grover_iterations(n: int) -> int:
    """Optimal Grover count for one marked state among ``2**n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _uniform_iterations(n)


def hamming_amp(n: int, k: int, k_f: int) -> float:
    """|<tau| H_alpha^n |gamma>| for ``alpha = n/k`` and Hamming distance ``k_f``."""
    if not 1 <= k <= n or not 0 <= k_f <= n:
        raise ValueError(f"need 1 <= k <= n and 0 <= k_f <= n, got n={n} k={k} k_f={k_f}")
    p = k / n
    return math.sqrt((1 - p) ** (n - k_f)) * math.sqrt(p**k_f)


def hamming_t_alpha(n: int, k: int, k_f: int) -> tuple[float, int]:
    amp = hamming_amp(n, k, k_f)
    if amp == 0.0:
        raise ValueError(f"distance {k_f} unreachable with k={k} on {n} qubits")
    real = math.pi / (4 * math.asin(min(amp, 1.0))) - 0.5
    return real, max(0, round_half_away(real))


def success_probability(iterations: int, amp: float) -> float:
    return math.sin((2 * iterations + 1) * math.asin(min(amp, 1.0))) ** 2


@dataclass(frozen=True)
class HammingStep:
    k: int
    theta: float
    t_real: float
    t: int
    p_hit: float


@dataclass(frozen=True)
class HammingPlan:
    n: int
    k_f: int
    k_i: int
    per_k: tuple[HammingStep, ...]
    p_sol: float
    total_unknown: int
    total_known: int
    capped: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def _hamming_step(n: int, k: int, k_f: int) -> HammingStep:
    t_real, t = hamming_t_alpha(n, k, k)
    amp = hamming_amp(n, k, k_f)
    return HammingStep(k, math.asin(min(amp, 1.0)), t_real, t, success_probability(t, amp))


def p_sol(k_i: int, k_f: int, n: int) -> float:
    """Probability that one of attempts ``1..k_i`` measures the solution."""
    if k_i < 1:
        raise ValueError("k_i must be >= 1")
    miss = 1.0
    for k in range(1, min(k_i, n) + 1):
        miss *= 1.0 - _hamming_step(n, k, k_f).p_hit
    return 1.0 - miss


def plan_hamming(n: int, k_f: int) -> HammingPlan:
    if not 0 <= k_f <= n:
        raise ValueError(f"k_f={k_f} outside [0, {n}]")
    if k_f == 0:
        return HammingPlan(n, 0, 0, (), 1.0, 0, 0)
    steps: list[HammingStep] = []
    miss = 1.0
    for k in range(1, n + 1):
        step = _hamming_step(n, k, k_f)
        steps.append(step)
        miss *= 1.0 - step.p_hit
        if 1.0 - miss >= SUCCESS_TARGET:
            break
    reached = 1.0 - miss >= SUCCESS_TARGET
    known = hamming_t_alpha(n, k_f, k_f)[1]
    return HammingPlan(
        n=n,
        k_f=k_f,
        k_i=len(steps),
        per_k=tuple(steps),
        p_sol=1.0 - miss,
        total_unknown=sum(s.t for s in steps),
        total_known=known,
        capped=not reached,
    )


@dataclass(frozen=True)
class CyclicalPlan:
    n: int
    r: int
    gamma: int
    tau: int
    d_f: int
    direction: str
    s_f: int
    t_r: int
    total_unknown: int
    total_executions_only: int
    total_known: int
    wraps: bool

    def to_dict(self) -> dict:
        return asdict(self)


def plan_cyclical(n: int, gamma: int, tau: int, r: int | None = None) -> CyclicalPlan:
    """Executions and iterations of the ring-segment search.

    ``total_unknown`` sums ``t_r`` over ``s = 0..s_f`` inclusive;
    ``total_executions_only`` counts ``s_f`` executions instead.
    """
    if r is None:
        r = max(1, n - 1)
    if not 1 <= r <= n:
        raise ValueError(f"r={r} outside [1, {n}]")
    d = cyclical(gamma, tau, n)
    half = 2 ** (r - 1)
    if gamma >= tau:
        s_f = -(-(d + 1) // half)
    else:
        s_f = -(-d // half)
    t_r = _uniform_iterations(r)
    return CyclicalPlan(
        n=n,
        r=r,
        gamma=gamma,
        tau=tau,
        d_f=d,
        direction="gamma>=tau" if gamma >= tau else "gamma<tau",
        s_f=s_f,
        t_r=t_r,
        total_unknown=(s_f + 1) * t_r,
        total_executions_only=s_f * t_r,
        total_known=t_r,
        wraps=abs(gamma - tau) > 2 ** (n - 1),
    )
