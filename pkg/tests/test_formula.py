from __future__ import annotations

import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybrid3sat.formula import (
    Assignment,
    Clause,
    CnfFormula,
    FormulaError,
    Literal,
    brute_force_solutions,
    emit_dimacs,
    eval_bool,
    eval_count,
    generate_random,
    num_clauses_for,
    parse_dimacs,
    satisfied_counts,
)

from oracles import EXAMPLE_CLAUSES, EXAMPLE_DIMACS, count_satisfied, dimacs_of, models


@pytest.fixture
def example():
    return parse_dimacs(EXAMPLE_DIMACS)


@st.composite
def formulas(draw, max_n=8, max_m=12):
    n = draw(st.integers(3, max_n))
    m = draw(st.integers(0, max_m))
    clauses = []
    for _ in range(m):
        vs = draw(st.lists(st.integers(0, n - 1), min_size=3, max_size=3, unique=True))
        negs = draw(st.lists(st.booleans(), min_size=3, max_size=3))
        clauses.append(Clause(tuple(Literal(v, s) for v, s in zip(vs, negs))))
    return CnfFormula(n, tuple(clauses))


class TestAssignment:
    def test_little_endian(self):
        a = Assignment.from_index(2, 5)
        assert a.bits == (0, 1, 0, 0, 0)
        assert a.ket() == "|00010>"

    @given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1))))
    def test_index_round_trip(self, nv):
        n, idx = nv
        a = Assignment.from_index(idx, n)
        assert a.index == idx
        assert Assignment.from_bits(a.bits) == a

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Assignment.from_index(32, 5)
        with pytest.raises(ValueError):
            Assignment((0, 2))


class TestClause:
    def test_repeated_variable(self):
        with pytest.raises(FormulaError):
            Clause.of(1, 1, 2)

    def test_wrong_length(self):
        with pytest.raises(FormulaError):
            Clause((Literal(0), Literal(1)))

    def test_key_ignores_order(self):
        assert Clause.of(1, -2, 3).key() == Clause.of(3, 1, -2).key()


class TestParse:
    def test_single_clause(self):
        f = parse_dimacs("p cnf 3 1\n1 -2 3 0\n")
        assert f.num_vars == 3
        (c,) = f.clauses
        assert c.literals == (Literal(0, False), Literal(1, True), Literal(2, False))

    def test_example(self, example):
        assert example.num_vars == 5 and example.num_clauses == 5
        assert dimacs_of(example) == EXAMPLE_CLAUSES

    def test_stream_and_comments(self):
        f = parse_dimacs(io.StringIO("c hello\np cnf 4 2\n1 2 3 0 -1\n-2 4 0\n"))
        assert dimacs_of(f) == [(1, 2, 3), (-1, -2, 4)]

    @pytest.mark.parametrize(
        "text",
        [
            "p cnf 3 1\n1 1 2 0\n",
            "p cnf 3 1\n1 2 0\n",
            "p cnf 3 1\n1 2 3 4 0\n",
            "p cnf 3 1\n1 2 4 0\n",
            "p cnf 3 2\n1 2 3 0\n",
            "p dnf 3 1\n1 2 3 0\n",
            "1 2 3 0\n",
            "",
            "p cnf 3 1\n1 2 x 0\n",
            "p cnf 3 1\n1 2 3\n",
        ],
    )
    def test_errors(self, text):
        with pytest.raises(FormulaError):
            parse_dimacs(text)

    @given(formulas())
    def test_round_trip(self, f):
        back = parse_dimacs(emit_dimacs(f, seed=3))
        assert back == f

    def test_header_comment(self, example):
        first = emit_dimacs(example, seed=7, density="1").splitlines()[0]
        assert first == "c n=5 m=5 density=1 seed=7"


class TestEvaluate:
    def test_example_points(self, example):
        x1 = Assignment.from_index(2, 5)
        zero = Assignment.from_index(0, 5)
        assert eval_bool(example, x1) and eval_count(example, x1) == 5
        assert not eval_bool(example, zero) and eval_count(example, zero) == 4

    def test_empty_formula(self):
        f = CnfFormula(3)
        assert all(eval_bool(f, Assignment.from_index(i, 3)) for i in range(8))

    def test_length_mismatch(self, example):
        with pytest.raises(ValueError):
            eval_bool(example, Assignment.from_index(0, 4))
        with pytest.raises(ValueError):
            eval_count(example, Assignment.from_index(0, 6))

    @settings(max_examples=50)
    @given(formulas())
    def test_count_matches_oracle_and_bool(self, f):
        clauses = dimacs_of(f)
        counts = satisfied_counts(f)
        for idx in range(2**f.num_vars):
            a = Assignment.from_index(idx, f.num_vars)
            c = eval_count(f, a)
            assert c == count_satisfied(clauses, a.bits) == counts[idx]
            assert c <= f.num_clauses
            assert eval_bool(f, a) == (c == f.num_clauses)


class TestBruteForce:
    def test_example_models(self, example):
        got = [a.index for a in brute_force_solutions(example)]
        assert got == models(EXAMPLE_CLAUSES, 5)
        assert 2 in got

    def test_single_clause_has_seven(self):
        assert len(brute_force_solutions(parse_dimacs("p cnf 3 1\n1 2 3 0\n"))) == 7

    def test_unsatisfiable(self):
        lines = [
            f"{a} {b} {c} 0" for a in (1, -1) for b in (2, -2) for c in (3, -3)
        ]
        f = parse_dimacs("p cnf 3 8\n" + "\n".join(lines))
        assert brute_force_solutions(f) == []

    def test_cap(self, example):
        with pytest.raises(FormulaError):
            brute_force_solutions(example, cap=4)


class TestGenerate:
    def test_clause_count(self):
        assert generate_random(10, 4.3, seed=1).num_clauses == 43

    def test_rounding_half_away(self):
        assert num_clauses_for(2, 1.25) == 3
        assert num_clauses_for(7, 4.55) == 32
        assert num_clauses_for(10, "4.55") == 46

    def test_unique_solution(self):
        f = generate_random(7, 4.0, unique_solution=True, seed=5)
        assert len(models(dimacs_of(f), 7)) == 1

    def test_deterministic(self):
        assert generate_random(9, 4.3, seed=11) == generate_random(9, 4.3, seed=11)
        assert generate_random(9, 4.3, seed=11) != generate_random(9, 4.3, seed=12)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(5, 14), st.sampled_from([1.0, 4.0, 4.3, 4.55]), st.integers(0, 10**6))
    def test_structure(self, n, density, seed):
        f = generate_random(n, density, seed=seed)
        assert abs(f.num_clauses / n - density) <= 0.5 / n
        assert len({c.key() for c in f.clauses}) == f.num_clauses
        for c in f.clauses:
            assert len(set(c.variables)) == 3

    @pytest.mark.parametrize("n", range(7, 15))
    def test_unique_for_bench_sizes(self, n):
        f = generate_random(n, 4.3, unique_solution=True, seed=n)
        assert len(brute_force_solutions(f)) == 1

    def test_errors(self):
        with pytest.raises(FormulaError):
            generate_random(2, 4.0)
        with pytest.raises(FormulaError):
            generate_random(5, 0.01)
        with pytest.raises(FormulaError):
            generate_random(3, 3.0)  # only 8 distinct clauses exist
        with pytest.raises(FormulaError):
            generate_random(5, 10.0, unique_solution=True, retry_budget=1)
