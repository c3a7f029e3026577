"""3-SAT instances: representation, DIMACS I/O, evaluation and generation.

Variables are 0-based internally and little-endian: variable ``i`` is bit
``i`` of a basis-state index, so ``|x_{n-1} ... x_0>`` reads index bits
from most to least significant.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

import numpy as np

BRUTE_FORCE_CAP = 24
UNIQUE_RETRY_BUDGET = 10_000


class FormulaError(ValueError):
    """Raised for malformed or out-of-range 3-SAT input."""


@dataclass(frozen=True)
class Literal:
    var: int
    negated: bool = False

    def value(self, bits: Sequence[int]) -> bool:
        return bool(bits[self.var]) != self.negated

    def to_dimacs(self) -> int:
        return -(self.var + 1) if self.negated else self.var + 1

    @classmethod
    def from_dimacs(cls, lit: int) -> "Literal":
        if lit == 0:
            raise FormulaError("0 is not a literal")
        return cls(abs(lit) - 1, lit < 0)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, Literal, Literal]

    def __post_init__(self) -> None:
        if len(self.literals) != 3:
            raise FormulaError(f"clause must have exactly 3 literals, got {len(self.literals)}")
        if len({lit.var for lit in self.literals}) != 3:
            raise FormulaError(f"repeated variable in clause {self.to_dimacs()}")

    @classmethod
    def of(cls, *lits: int) -> "Clause":
        """Build a clause from DIMACS-style signed 1-based integers."""
        return cls(tuple(Literal.from_dimacs(x) for x in lits))

    @property
    def variables(self) -> tuple[int, int, int]:
        return tuple(lit.var for lit in self.literals)

    def key(self) -> frozenset[tuple[int, bool]]:
        # identity up to literal reordering
        return frozenset((lit.var, lit.negated) for lit in self.literals)

    def satisfied(self, bits: Sequence[int]) -> bool:
        return any(lit.value(bits) for lit in self.literals)

    def to_dimacs(self) -> list[int]:
        return [lit.to_dimacs() for lit in self.literals]


@dataclass(frozen=True)
class Assignment:
    """A truth assignment, equivalently a basis state ``|index>``."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("assignment bits must be 0 or 1")

    @classmethod
    def from_index(cls, index: int, n: int) -> "Assignment":
        if not 0 <= index < 2**n:
            raise ValueError(f"index {index} out of range for {n} variables")
        return cls(tuple((index >> i) & 1 for i in range(n)))

    @classmethod
    def from_bits(cls, bits: Iterable[int | bool]) -> "Assignment":
        return cls(tuple(int(bool(b)) for b in bits))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def index(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    def ket(self) -> str:
        return "|" + "".join(str(b) for b in reversed(self.bits)) + ">"


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise FormulaError("a formula needs at least one variable")
        object.__setattr__(self, "clauses", tuple(self.clauses))
        for c in self.clauses:
            for v in c.variables:
                if v >= self.num_vars:
                    raise FormulaError(f"variable {v + 1} out of range 1..{self.num_vars}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def density(self) -> float:
        return self.num_clauses / self.num_vars

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Clause variables and negation flags as ``(m, 3)`` arrays."""
        vars_ = np.array([c.variables for c in self.clauses], dtype=np.int64).reshape(-1, 3)
        negs = np.array(
            [[lit.negated for lit in c.literals] for c in self.clauses], dtype=bool
        ).reshape(-1, 3)
        return vars_, negs


def _check_length(f: CnfFormula, a: Assignment) -> None:
    if a.n != f.num_vars:
        raise ValueError(f"assignment has {a.n} bits, formula has {f.num_vars} variables")


def eval_bool(f: CnfFormula, a: Assignment) -> bool:
    _check_length(f, a)
    return all(c.satisfied(a.bits) for c in f.clauses)


def eval_count(f: CnfFormula, a: Assignment) -> int:
    """Number of satisfied clauses (the Max-3SAT objective)."""
    _check_length(f, a)
    return sum(c.satisfied(a.bits) for c in f.clauses)


def satisfied_counts(f: CnfFormula) -> np.ndarray:
    """Satisfied-clause count for every basis index, shape ``(2**n,)``."""
    if f.num_vars > BRUTE_FORCE_CAP:
        raise FormulaError(f"brute force limited to {BRUTE_FORCE_CAP} variables")
    idx = np.arange(2**f.num_vars, dtype=np.int64)
    counts = np.zeros(idx.shape, dtype=np.int32)
    for c in f.clauses:
        sat = np.zeros(idx.shape, dtype=bool)
        for lit in c.literals:
            bit = ((idx >> lit.var) & 1).astype(bool)
            sat |= ~bit if lit.negated else bit
        counts += sat
    return counts


def solution_indices(f: CnfFormula, cap: int = BRUTE_FORCE_CAP) -> np.ndarray:
    if f.num_vars > cap:
        raise FormulaError(f"{f.num_vars} variables exceeds brute-force cap {cap}")
    return np.flatnonzero(satisfied_counts(f) == f.num_clauses)


def brute_force_solutions(f: CnfFormula, cap: int = BRUTE_FORCE_CAP) -> list[Assignment]:
    """All models of ``f`` in ascending index order."""
    return [Assignment.from_index(int(i), f.num_vars) for i in solution_indices(f, cap)]


def num_clauses_for(n: int, density: float | str | Fraction) -> int:
    """``round(density * n)`` with halves rounded away from zero."""
    exact = Fraction(str(density)) * n
    return int(exact + Fraction(1, 2)) if exact >= 0 else -int(-exact + Fraction(1, 2))


def _draw_formula(n: int, m: int, rng: random.Random) -> CnfFormula:
    seen: set[frozenset[tuple[int, bool]]] = set()
    clauses: list[Clause] = []
    while len(clauses) < m:
        vs = rng.sample(range(n), 3)
        clause = Clause(tuple(Literal(v, rng.random() < 0.5) for v in vs))
        if clause.key() in seen:
            continue
        seen.add(clause.key())
        clauses.append(clause)
    return CnfFormula(n, tuple(clauses))


def generate_random(
    n: int,
    density: float | str | Fraction,
    unique_solution: bool = False,
    seed: int = 0,
    retry_budget: int = UNIQUE_RETRY_BUDGET,
) -> CnfFormula:
    """Uniform random 3-CNF with ``round(density * n)`` distinct clauses.

    With ``unique_solution`` whole instances are redrawn from the same
    stream until exactly one model exists.
    """
    if n < 3:
        raise FormulaError("random 3-SAT needs n >= 3")
    m = num_clauses_for(n, density)
    if m < 1:
        raise FormulaError(f"density {density} gives no clauses for n={n}")
    max_distinct = 8 * n * (n - 1) * (n - 2) // 6
    if m > max_distinct:
        raise FormulaError(f"{m} distinct clauses impossible over {n} variables")
    rng = random.Random(seed)
    if not unique_solution:
        return _draw_formula(n, m, rng)
    for _ in range(retry_budget):
        f = _draw_formula(n, m, rng)
        if len(solution_indices(f)) == 1:
            return f
    raise FormulaError(
        f"no unique-solution instance for n={n}, density={density} in {retry_budget} draws"
    )


def parse_dimacs(text: str | TextIO) -> CnfFormula:
    if not isinstance(text, str):
        text = text.read()
    header: tuple[int, int] | None = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise FormulaError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as exc:
                raise FormulaError(f"line {lineno}: malformed header {line!r}") from exc
            continue
        if header is None:
            raise FormulaError(f"line {lineno}: clause before 'p cnf' header")
        try:
            tokens.extend(int(t) for t in line.split())
        except ValueError as exc:
            raise FormulaError(f"line {lineno}: bad literal in {line!r}") from exc
    if header is None:
        raise FormulaError("missing 'p cnf' header")
    n, m = header
    if n < 1 or m < 0:
        raise FormulaError(f"malformed header values n={n}, m={m}")

    clauses: list[Clause] = []
    current: list[int] = []
    for tok in tokens:
        if tok != 0:
            if abs(tok) > n:
                raise FormulaError(f"variable {abs(tok)} out of range 1..{n}")
            current.append(tok)
            continue
        if len(current) != 3:
            raise FormulaError(f"clause {current} has {len(current)} literals, expected 3")
        clauses.append(Clause.of(*current))
        current = []
    if current:
        raise FormulaError(f"unterminated clause {current}")
    if len(clauses) != m:
        raise FormulaError(f"header declares {m} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(clauses))


def emit_dimacs(f: CnfFormula, seed: int | None = None, density: object = None) -> str:
    shown = density if density is not None else f"{f.density():g}"
    lines = [
        f"c n={f.num_vars} m={f.num_clauses} density={shown}"
        + (f" seed={seed}" if seed is not None else ""),
        f"p cnf {f.num_vars} {f.num_clauses}",
    ]
    lines += [" ".join(str(x) for x in c.to_dimacs()) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"
