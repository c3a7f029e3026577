"""3-SAT to QUBO compilation, simulated annealing, and Grover-variant
search planning and simulation seeded by the annealed assignment."""
from __future__ import annotations

from .analytic import (
    CyclicalPlan,
    HammingPlan,
    grover_iterations,
    hamming_t_alpha,
    p_sol,
    plan_cyclical,
    plan_hamming,
)
from .anneal import AnnealConfig, Sample, SampleSet, SimulatedAnnealingSampler
from .bench import RunRecord, TestCase, aggregate, run_pipeline
from .formula import (
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
    parse_dimacs,
)
from .metrics import cyclical, distances, hamming
from .qubo import QuboModel, compile_formula, eval_qubo, reduce_cubics, to_max3sat_poly

__version__ = "0.1.0"

__all__ = [
    "AnnealConfig",
    "Assignment",
    "Clause",
    "CnfFormula",
    "CyclicalPlan",
    "FormulaError",
    "HammingPlan",
    "Literal",
    "QuboModel",
    "RunRecord",
    "Sample",
    "SampleSet",
    "SimulatedAnnealingSampler",
    "TestCase",
    "aggregate",
    "brute_force_solutions",
    "compile_formula",
    "cyclical",
    "distances",
    "emit_dimacs",
    "eval_bool",
    "eval_count",
    "eval_qubo",
    "generate_random",
    "grover_iterations",
    "hamming",
    "hamming_t_alpha",
    "p_sol",
    "parse_dimacs",
    "plan_cyclical",
    "plan_hamming",
    "reduce_cubics",
    "run_pipeline",
    "to_max3sat_poly",
]
