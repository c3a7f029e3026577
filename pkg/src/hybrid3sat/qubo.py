"""Max-3SAT to QUBO compilation.

Each clause becomes a 0/1 polynomial counting whether it is satisfied; the
sum is the Max-3SAT objective. Cubic monomials are quadratized by
substituting an auxiliary ``y_pq = x_p x_q`` and subtracting the penalty
``M (x_p x_q - 2 x_p y_pq - 2 x_q y_pq + 3 y_pq)``, which is zero exactly
when the auxiliary is consistent. Models are kept in maximize sense with
exact rational coefficients.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .formula import Clause, CnfFormula

Monomial = tuple[int, ...]


class Polynomial:
    """Multilinear pseudo-Boolean polynomial with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Iterable[int], object] | None = None) -> None:
        self.terms: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            self._add_term(tuple(mono), Fraction(coeff))

    def _add_term(self, mono: Monomial, coeff: Fraction) -> None:
        # x_i**2 == x_i on booleans
        key = tuple(sorted(set(mono)))
        total = self.terms.get(key, Fraction(0)) + coeff
        if total:
            self.terms[key] = total
        else:
            self.terms.pop(key, None)

    @classmethod
    def constant(cls, c: object) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, i: int) -> "Polynomial":
        return cls({(i,): 1})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = self.copy()
        for mono, c in other.terms.items():
            out._add_term(mono, c)
        return out

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out = Polynomial()
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out._add_term(m1 + m2, c1 * c2)
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"Polynomial({self.terms!r})"

    def copy(self) -> "Polynomial":
        out = Polynomial()
        out.terms = dict(self.terms)
        return out

    def scale(self, k: object) -> "Polynomial":
        k = Fraction(k)
        return Polynomial({m: c * k for m, c in self.terms.items()})

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def coeff(self, *mono: int) -> Fraction:
        return self.terms.get(tuple(sorted(mono)), Fraction(0))

    def evaluate(self, bits: Sequence[int]) -> Fraction:
        return sum(
            (c for m, c in self.terms.items() if all(bits[i] for i in m)), Fraction(0)
        )


def clause_polynomial(c: Clause) -> Polynomial:
    """0/1 indicator polynomial of a clause, selected by its negation count."""
    lits = sorted(c.literals, key=lambda lit: lit.negated)
    i, j, k = (lit.var for lit in lits)
    negations = sum(lit.negated for lit in lits)
    if negations == 0:
        terms = {(i,): 1, (j,): 1, (k,): 1, (i, j): -1, (i, k): -1, (j, k): -1, (i, j, k): 1}
    elif negations == 1:
        terms = {(): 1, (k,): -1, (i, k): 1, (j, k): 1, (i, j, k): -1}
    elif negations == 2:
        terms = {(): 1, (j, k): -1, (i, j, k): 1}
    else:
        terms = {(): 1, (i, j, k): -1}
    return Polynomial(terms)


def to_max3sat_poly(f: CnfFormula) -> Polynomial:
    total = Polynomial()
    for c in f.clauses:
        total = total + clause_polynomial(c)
    return total


@dataclass(frozen=True)
class QuboModel:
    """Upper-triangular QUBO in maximize sense.

    Variables ``0..num_original-1`` are the formula's; auxiliaries follow.
    ``aux_map`` lists ``(aux_index, (p, q))`` with ``y_aux = x_p x_q``.
    """

    num_original: int
    num_aux: int
    coeffs: Mapping[tuple[int, int], Fraction]
    offset: Fraction = Fraction(0)
    aux_map: tuple[tuple[int, tuple[int, int]], ...] = ()
    sense: str = field(default="maximize")

    def __post_init__(self) -> None:
        folded: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in self.coeffs.items():
            key = (i, j) if i <= j else (j, i)
            if key[0] < 0 or key[1] >= self.num_vars:
                raise ValueError(f"coefficient index {key} out of range")
            folded[key] = folded.get(key, Fraction(0)) + Fraction(c)
        object.__setattr__(self, "coeffs", {k: v for k, v in sorted(folded.items()) if v})
        object.__setattr__(self, "offset", Fraction(self.offset))
        aux = tuple((int(k), (int(p), int(q))) for k, (p, q) in self.aux_map)
        object.__setattr__(self, "aux_map", aux)
        if len({k for k, _ in aux}) != len(aux) or len({pq for _, pq in aux}) != len(aux):
            raise ValueError("aux_map entries must have distinct indices and pairs")

    @property
    def num_vars(self) -> int:
        return self.num_original + self.num_aux

    def value(self, bits: Sequence[int]) -> Fraction:
        return eval_qubo(self, bits)

    def consistent_completion(self, x: Sequence[int]) -> list[int]:
        """Extend original bits with ``y_pq = x_p x_q`` for every auxiliary."""
        bits = list(x) + [0] * self.num_aux
        for k, (p, q) in self.aux_map:
            bits[k] = bits[p] & bits[q]
        return bits

    def to_dense(self) -> np.ndarray:
        """Upper-triangular float matrix; only for the sampler boundary."""
        mat = np.zeros((self.num_vars, self.num_vars))
        for (i, j), c in self.coeffs.items():
            mat[i, j] = float(c)
        return mat

    def to_text(self) -> str:
        lines = [
            f"# qubo sense={self.sense} original={self.num_original} aux={self.num_aux}",
            f"# offset {_fmt(self.offset)}",
        ]
        lines += [f"# aux {k} {p} {q}" for k, (p, q) in self.aux_map]
        lines += [f"{i} {j} {_fmt(c)}" for (i, j), c in self.coeffs.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "QuboModel":
        num_original = num_aux = None
        offset = Fraction(0)
        aux: list[tuple[int, tuple[int, int]]] = []
        coeffs: dict[tuple[int, int], Fraction] = {}
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "#":
                if len(parts) >= 2 and parts[1] == "qubo":
                    kv = dict(p.split("=", 1) for p in parts[2:])
                    num_original, num_aux = int(kv["original"]), int(kv["aux"])
                elif parts[1:2] == ["offset"]:
                    offset = Fraction(parts[2])
                elif parts[1:2] == ["aux"]:
                    aux.append((int(parts[2]), (int(parts[3]), int(parts[4]))))
                continue
            i, j, c = int(parts[0]), int(parts[1]), Fraction(parts[2])
            coeffs[(i, j)] = coeffs.get((i, j), Fraction(0)) + c
        if num_original is None:
            raise ValueError("missing '# qubo' header line")
        return cls(num_original, num_aux, coeffs, offset, tuple(aux))

    def to_json(self) -> str:
        doc = {
            "num_original": self.num_original,
            "num_aux": self.num_aux,
            "sense": self.sense,
            "offset": _json_num(self.offset),
            "aux_map": [[k, p, q] for k, (p, q) in self.aux_map],
            "coeffs": [[i, j, _json_num(c)] for (i, j), c in self.coeffs.items()],
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "QuboModel":
        doc = json.loads(text)
        return cls(
            doc["num_original"],
            doc["num_aux"],
            {(i, j): Fraction(str(c)) for i, j, c in doc["coeffs"]},
            Fraction(str(doc["offset"])),
            tuple((k, (p, q)) for k, p, q in doc["aux_map"]),
            doc.get("sense", "maximize"),
        )


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _json_num(c: Fraction) -> int | str:
    return c.numerator if c.denominator == 1 else _fmt(c)


def eval_qubo(q: QuboModel, bits: Sequence[int]) -> Fraction:
    if len(bits) != q.num_vars:
        raise ValueError(f"expected {q.num_vars} bits, got {len(bits)}")
    total = q.offset
    for (i, j), c in q.coeffs.items():
        if bits[i] and bits[j]:
            total += c
    return total


def _pick_pairs(cubics: list[Monomial]) -> dict[Monomial, tuple[int, int]]:
    """Greedy cover of cubic monomials by pairs, most-shared pair first."""
    chosen: dict[Monomial, tuple[int, int]] = {}
    pending = list(cubics)
    while pending:
        counts = Counter(pair for mono in pending for pair in combinations(mono, 2))
        best = max(counts.values())
        pair = min(p for p, cnt in counts.items() if cnt == best)
        keep = []
        for mono in pending:
            if pair[0] in mono and pair[1] in mono:
                chosen[mono] = pair
            else:
                keep.append(mono)
        pending = keep
    return chosen


def aux_coupling_bound(q: QuboModel) -> Fraction:
    """Largest one-sided coupling of any auxiliary to non-pair originals.

    An auxiliary only interacts with original variables, so flipping it
    away from ``x_p x_q`` gains at most this much while the penalty costs
    at least ``M``. Any ``M`` at least this large preserves the maximum.
    """
    bound = Fraction(0)
    for y, pair in q.aux_map:
        pos = neg = Fraction(0)
        for (i, j), c in q.coeffs.items():
            if i == j or y not in (i, j):
                continue
            other = j if i == y else i
            if other in pair:
                continue
            if c > 0:
                pos += c
            else:
                neg -= c
        bound = max(bound, pos, neg)
    return bound


def sound_penalty_weight(p: Polynomial, num_original: int | None = None) -> Fraction:
    """Smallest uniform ``M >= 1`` keeping every auxiliary honest at the optimum."""
    probe = reduce_cubics(p, 1, num_original)
    return max(Fraction(1), aux_coupling_bound(probe))


def reduce_cubics(
    p: Polynomial, M: object = 1, num_original: int | None = None
) -> QuboModel:
    """Quadratize a degree-3 polynomial with shared auxiliaries.

    ``M="auto"`` selects :func:`sound_penalty_weight`.
    """
    if p.degree > 3:
        raise ValueError(f"polynomial degree {p.degree} exceeds 3")
    if M == "auto":
        M = sound_penalty_weight(p, num_original)
    M = Fraction(M)
    if M <= 0:
        raise ValueError("penalty weight M must be positive")
    n = num_original
    if n is None:
        n = max((i + 1 for mono in p.terms for i in mono), default=0)

    cubics = [m for m in p.terms if len(m) == 3]
    pair_of = _pick_pairs(cubics)
    aux_index: dict[tuple[int, int], int] = {}
    for mono in cubics:
        pair = pair_of[mono]
        if pair not in aux_index:
            aux_index[pair] = n + len(aux_index)

    coeffs: dict[tuple[int, int], Fraction] = {}
    offset = Fraction(0)

    def add(i: int, j: int, c: Fraction) -> None:
        key = (i, j) if i <= j else (j, i)
        coeffs[key] = coeffs.get(key, Fraction(0)) + c

    for mono, c in p.terms.items():
        if len(mono) == 0:
            offset += c
        elif len(mono) == 1:
            add(mono[0], mono[0], c)
        elif len(mono) == 2:
            add(mono[0], mono[1], c)
        else:
            a, b = pair_of[mono]
            (rest,) = set(mono) - {a, b}
            add(aux_index[(a, b)], rest, c)

    for (a, b), y in aux_index.items():
        add(a, b, -M)
        add(a, y, 2 * M)
        add(b, y, 2 * M)
        add(y, y, -3 * M)

    aux_map = tuple((y, pair) for pair, y in aux_index.items())
    return QuboModel(n, len(aux_index), coeffs, offset, aux_map)


def compile_formula(f: CnfFormula, M: object = 1) -> QuboModel:
    """CNF -> Max-3SAT polynomial -> QUBO (maximize, value = satisfied clauses).

    The unit penalty reproduces the hand-worked reduction but is not sound
    for every instance: when one auxiliary carries several cubic terms an
    inconsistent auxiliary can outscore the penalty. Pass ``M="auto"`` for
    a weight that provably keeps the maximizer on the Max-3SAT optimum.
    """
    return reduce_cubics(to_max3sat_poly(f), M, num_original=f.num_vars)


compile = compile_formula  # noqa: A001
