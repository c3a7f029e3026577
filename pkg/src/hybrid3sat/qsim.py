"""Operator-level statevector simulation of the two Grover variants.

Qubit ``i`` is bit ``i`` of the basis index (little-endian). Operators act
in place on ``StateVector.amps`` and return the same object. Reflections
about the prepared state are applied as rank-1 updates; state preparation,
oracle, controlled-NOT cascades and increments are applied gate by gate.

Amplitudes are stored in extended precision: amplification runs reach
~10^5 iterations for small-amplitude targets and float64 rounding would
drift by ~1e-10 over that many reflections.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .formula import Assignment

MAX_QUBITS = 20
DTYPE = np.clongdouble


@dataclass
class StateVector:
    n: int
    amps: np.ndarray

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "StateVector":
        if n > MAX_QUBITS:
            raise ValueError(f"{n} qubits exceeds simulator cap {MAX_QUBITS}")
        if not 0 <= index < 2**n:
            raise ValueError(f"basis index {index} out of range for {n} qubits")
        amps = np.zeros(2**n, dtype=DTYPE)
        amps[index] = 1.0
        return cls(n, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amps, self.amps).real))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def support(self, atol: float = 1e-12) -> set[int]:
        return {int(i) for i in np.flatnonzero(np.abs(self.amps) > atol)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "probability"])
        for i, p in enumerate(self.probabilities()):
            writer.writerow([i, f"{p:.12g}"])
        return buf.getvalue()


@dataclass(frozen=True)
class Oracle:
    solution_set: frozenset[int]

    @classmethod
    def of(cls, indices: Iterable[int]) -> "Oracle":
        return cls(frozenset(int(i) for i in indices))

    def single(self) -> int:
        if len(self.solution_set) != 1:
            raise ValueError(f"expected exactly one solution, oracle marks {len(self.solution_set)}")
        return next(iter(self.solution_set))


def apply_1q(psi: StateVector, gate: np.ndarray, qubit: int) -> StateVector:
    view = psi.amps.reshape(2 ** (psi.n - 1 - qubit), 2, 2**qubit)
    view[:] = np.einsum("ab,ibj->iaj", gate, view)
    return psi


def h_alpha_matrix(alpha: float | Fraction) -> np.ndarray:
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if isinstance(alpha, Fraction):
        p = np.longdouble(alpha.denominator) / np.longdouble(alpha.numerator)
    else:
        p = 1 / np.longdouble(alpha)
    stay, flip = np.sqrt(1 - p), np.sqrt(p)
    return np.array([[stay, flip], [flip, -stay]], dtype=np.longdouble)


def apply_h_alpha(psi: StateVector, alpha: float | Fraction) -> StateVector:
    gate = h_alpha_matrix(alpha)
    for q in range(psi.n):
        apply_1q(psi, gate, q)
    return psi


def apply_hadamards(psi: StateVector, qubits: Iterable[int]) -> StateVector:
    gate = h_alpha_matrix(2.0)
    for q in qubits:
        apply_1q(psi, gate, q)
    return psi


def apply_oracle(psi: StateVector, oracle: Oracle) -> StateVector:
    for s in oracle.solution_set:
        psi.amps[s] = -psi.amps[s]
    return psi


def reflect_about(psi: StateVector, prepared: StateVector) -> StateVector:
    """``(2|p><p| - I) psi``, with the projector normalized by ``<p|p>``."""
    overlap = np.vdot(prepared.amps, psi.amps) / np.vdot(prepared.amps, prepared.amps).real
    psi.amps[:] = 2 * overlap * prepared.amps - psi.amps
    return psi


def apply_mcx(psi: StateVector, controls: Sequence[int], target: int) -> StateVector:
    """Multi-controlled X: swap amplitudes across ``target`` where all controls are 1."""
    idx = np.arange(2**psi.n)
    mask = sum(1 << c for c in controls)
    lo = idx[((idx & mask) == mask) & ((idx >> target) & 1 == 0)]
    hi = lo | (1 << target)
    psi.amps[lo], psi.amps[hi] = psi.amps[hi].copy(), psi.amps[lo].copy()
    return psi


def increment(psi: StateVector, low: int = 0) -> StateVector:
    """``+1 mod 2**(n-low)`` on qubits ``low..n-1``, i.e. ``b -> b + 2**low mod 2**n``.

    Built as the usual cascade: the top qubit flips when every lower qubit
    of the slice is 1, then the next one down, and so on to a bare X.
    """
    if not 0 <= low < psi.n:
        raise ValueError(f"empty increment slice for low={low}, n={psi.n}")
    for target in range(psi.n - 1, low - 1, -1):
        apply_mcx(psi, range(low, target), target)
    return psi


def displace(psi: StateVector, disp: int) -> StateVector:
    """Add ``disp mod 2**n`` using one increment per set bit, lowest first."""
    disp %= 2**psi.n
    for bit in range(psi.n):
        if (disp >> bit) & 1:
            increment(psi, bit)
    return psi


def range_displacement(gamma: int, r: int, s: int) -> int:
    return gamma - (s + 1) * 2 ** (r - 1) + 1


def _check_range_args(n: int, r: int, s: int, gamma: int) -> None:
    if not 1 <= r <= n:
        raise ValueError(f"r={r} outside [1, {n}]")
    if not 0 <= s < 2 ** (n - r):
        raise ValueError(f"segment s={s} does not fit: need 0 <= s < {2 ** (n - r)}")
    if not 0 <= gamma < 2**n:
        raise ValueError(f"gamma={gamma} out of range for n={n}")


def range_splitter(n: int, r: int, s: int, gamma: int) -> StateVector:
    """Uniform superposition over the ``s``-th ring segment around ``gamma``.

    Hadamards on the low ``r`` qubits, then ``s`` is written onto the high
    ``n-r`` qubits controlled by qubit ``r-1`` (moving the upper half of the
    block up by ``s * 2**r``), then the whole register is displaced.
    """
    _check_range_args(n, r, s, gamma)
    psi = StateVector.basis(n, 0)
    apply_hadamards(psi, range(r))
    for bit in range(n - r):
        if (s >> bit) & 1:
            apply_mcx(psi, [r - 1], r + bit)
    return displace(psi, range_displacement(gamma, r, s))


def segment_states(n: int, r: int, s: int, gamma: int) -> list[int]:
    """Direct enumeration of the states ``range_splitter`` should cover."""
    _check_range_args(n, r, s, gamma)
    half = 2 ** (r - 1)
    size = 2**n
    left = [(gamma - (s + 1) * half + 1 + i) % size for i in range(half)]
    right = [(gamma + s * half + 1 + i) % size for i in range(half)]
    return left + right


def segment_state(n: int, r: int, s: int, gamma: int) -> StateVector:
    psi = StateVector(n, np.zeros(2**n, dtype=DTYPE))
    psi.amps[segment_states(n, r, s, gamma)] = np.longdouble(2) ** (-np.longdouble(r) / 2)
    return psi


def _amplify(prepared: StateVector, oracle: Oracle, t: int) -> StateVector:
    psi = prepared.copy()
    for _ in range(t):
        apply_oracle(psi, oracle)
        reflect_about(psi, prepared)
    return psi


def amplification_trace(prepared: StateVector, oracle: Oracle, t_max: int) -> np.ndarray:
    """Solution probability after ``0..t_max`` Grover iterations."""
    tau = oracle.single()
    psi = prepared.copy()
    out = np.empty(t_max + 1)
    out[0] = abs(psi.amps[tau]) ** 2
    for t in range(1, t_max + 1):
        apply_oracle(psi, oracle)
        reflect_about(psi, prepared)
        out[t] = abs(psi.amps[tau]) ** 2
    return out


def hamming_initial_state(gamma: Assignment | int, n: int, k: int) -> StateVector:
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    g = gamma.index if isinstance(gamma, Assignment) else int(gamma)
    return apply_h_alpha(StateVector.basis(n, g), Fraction(n, k))


def grover_hamming(gamma: Assignment | int, oracle: Oracle, n: int, k: int, t: int) -> float:
    tau = oracle.single()
    prepared = hamming_initial_state(gamma, n, k)
    return float(abs(_amplify(prepared, oracle, t).amps[tau]) ** 2)


def grover_cyclical(
    gamma: Assignment | int, oracle: Oracle, n: int, r: int, s: int, t: int
) -> float:
    tau = oracle.single()
    g = gamma.index if isinstance(gamma, Assignment) else int(gamma)
    prepared = range_splitter(n, r, s, g)
    return float(abs(_amplify(prepared, oracle, t).amps[tau]) ** 2)
