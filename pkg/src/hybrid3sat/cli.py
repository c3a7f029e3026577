"""Command-line entry point: ``hybrid3sat <command> [options]``."""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from . import analytic, bench, qsim
from .anneal import AnnealConfig, SimulatedAnnealingSampler
from .formula import Assignment, emit_dimacs, parse_dimacs
from .metrics import cyclical, hamming
from .qubo import QuboModel, compile_formula

log = logging.getLogger("hybrid3sat")

SCENARIOS = ("grover", "hamming", "cyclical")
SCENARIO_HELP = """\
scenarios:
  grover    plain Grover over all 2^n states (baseline)
  hamming   simulated annealing, then Hamming-neighbourhood search
  cyclical  simulated annealing, then cyclical-range search
  quantum-annealer variants of the hamming/cyclical pipelines
  requires external sampler plugin; not implemented
"""


def parse_int_range(text: str) -> list[int]:
    """``"7..10"`` (inclusive), ``"7,9,11"`` or ``"7"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            a, b = int(lo), int(hi)
            if b < a:
                raise ValueError
            return list(range(a, b + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}; use A..B or A,B,C") from None


def parse_densities(text: str) -> list[float]:
    try:
        out = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad density list {text!r}") from None
    if not out or any(d <= 0 for d in out):
        raise argparse.ArgumentTypeError(f"densities must be positive, got {text!r}")
    return out


def parse_penalty(text: str) -> object:
    if text == "auto":
        return text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"penalty must be a number or 'auto', got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("penalty must be positive")
    return int(value) if value.is_integer() else text


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)


def _anneal_config(args: argparse.Namespace) -> AnnealConfig:
    cfg = AnnealConfig()
    if getattr(args, "config", None):
        cfg = AnnealConfig.from_json(Path(args.config).read_text())
    overrides = {}
    if args.sweeps is not None:
        overrides["num_sweeps"] = args.sweeps
    if args.reads is not None:
        overrides["num_reads"] = args.reads
    if getattr(args, "sweeps_per_beta", None) is not None:
        overrides["num_sweeps_per_beta"] = args.sweeps_per_beta
    if getattr(args, "beta_range", None) is not None:
        overrides["beta_range"] = tuple(args.beta_range)
    if args.seed is not None:
        overrides["seed"] = args.seed
    return replace(cfg, **overrides)


def cmd_generate(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    count = 0
    for d in args.density:
        for n in args.n:
            for i in range(args.instances):
                f = bench.instance_for(n, d, i, args.seed)
                path = out / f"n{n}_d{d:g}_i{i}.cnf"
                path.write_text(emit_dimacs(f, seed=args.seed, density=f"{d:g}"))
                count += 1
    print(f"wrote {count} instances to {out}")
    return 0


def cmd_reduce(args: argparse.Namespace) -> int:
    for src in args.files:
        src = Path(src)
        f = parse_dimacs(src.read_text())
        q = compile_formula(f, args.penalty)
        dest = Path(args.out) if args.out else src.parent
        dest.mkdir(parents=True, exist_ok=True)
        if args.format in ("text", "both"):
            (dest / f"{src.stem}.qubo").write_text(q.to_text())
        if args.format in ("json", "both"):
            (dest / f"{src.stem}.json").write_text(q.to_json())
        print(f"{src}: n={q.num_original} aux={q.num_aux} terms={len(q.coeffs)}")
    return 0


def _load_qubo(path: Path) -> QuboModel:
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return QuboModel.from_json(text)
    return QuboModel.from_text(text)


def cmd_anneal(args: argparse.Namespace) -> int:
    q = _load_qubo(Path(args.file))
    cfg = _anneal_config(args)
    result = SimulatedAnnealingSampler(cfg).sample(q)
    _write(result.to_csv(), args.out)
    log.info("best value %s at %s", result.first.value, result.best.ket())
    return 0


def _check_index(name: str, value: int, n: int) -> None:
    if not 0 <= value < 2**n:
        raise ValueError(f"{name}={value} out of range for n={n}")


def cmd_plan(args: argparse.Namespace) -> int:
    n = args.n
    _check_index("gamma", args.gamma, n)
    _check_index("tau", args.tau, n)
    g, t = Assignment.from_index(args.gamma, n), Assignment.from_index(args.tau, n)
    doc: dict[str, object] = {
        "n": n,
        "gamma": args.gamma,
        "tau": args.tau,
        "k_f": hamming(g, t),
        "d_f": cyclical(g, t, n),
    }
    scenarios = args.scenario or list(SCENARIOS)
    if "grover" in scenarios:
        doc["grover"] = {"total": analytic.grover_iterations(n)}
    if "hamming" in scenarios:
        plan = analytic.plan_hamming(n, doc["k_f"])
        doc["hamming"] = {"total": plan.total_unknown, **plan.to_dict()}
    if "cyclical" in scenarios:
        plan = analytic.plan_cyclical(n, args.gamma, args.tau, args.r)
        doc["cyclical"] = {"total": plan.total_unknown, **plan.to_dict()}
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _simulate_displacement(args: argparse.Namespace) -> int:
    _check_index("start", args.start, args.n)
    psi = qsim.displace(qsim.StateVector.basis(args.n, args.start), args.disp)
    (final,) = psi.support()
    expected = (args.start + args.disp) % 2**args.n
    print(f"start {args.start} displaced by {args.disp} on {args.n} qubits: final basis {final}")
    return 0 if final == expected else 1


def _simulate_range_splitter(args: argparse.Namespace) -> int:
    r = args.r if args.r is not None else args.n - 1
    psi = qsim.range_splitter(args.n, r, args.s, args.gamma)
    direct = qsim.segment_state(args.n, r, args.s, args.gamma)
    err = float(abs(psi.amps - direct.amps).max())
    print(f"segment s={args.s} around {args.gamma} (r={r}): {sorted(psi.support())} max error {err:.3g}")
    if args.out:
        _write(psi.to_csv(), args.out)
    return 0 if err < 1e-12 else 1


def _simulate_hamming(args: argparse.Namespace) -> int:
    _check_index("gamma", args.gamma, args.n)
    _check_index("tau", args.tau, args.n)
    k_f = hamming(Assignment.from_index(args.gamma, args.n), Assignment.from_index(args.tau, args.n))
    k = args.k if args.k is not None else max(k_f, 1)
    t = args.t if args.t is not None else analytic.hamming_t_alpha(args.n, k, k)[1]
    oracle = qsim.Oracle.of([args.tau])
    sim = qsim.grover_hamming(args.gamma, oracle, args.n, k, t)
    closed = analytic.success_probability(t, analytic.hamming_amp(args.n, k, k_f))
    print(f"hamming k={k} k_f={k_f} t={t}: simulated {sim:.12f} closed form {closed:.12f}")
    if args.out:
        prepared = qsim.hamming_initial_state(args.gamma, args.n, k)
        _write(qsim._amplify(prepared, oracle, t).to_csv(), args.out)
    return 0 if abs(sim - closed) <= 1e-10 else 1


def _simulate_cyclical(args: argparse.Namespace) -> int:
    _check_index("tau", args.tau, args.n)
    r = args.r if args.r is not None else args.n - 1
    t = args.t if args.t is not None else analytic._uniform_iterations(r)
    oracle = qsim.Oracle.of([args.tau])
    sim = qsim.grover_cyclical(args.gamma, oracle, args.n, r, args.s, t)
    inside = args.tau in qsim.segment_states(args.n, r, args.s, args.gamma)
    closed = math.sin((2 * t + 1) * math.asin(2.0 ** (-r / 2))) ** 2 if inside else 0.0
    print(f"cyclical r={r} s={args.s} t={t} solution in segment={inside}: "
          f"simulated {sim:.12f} closed form {closed:.12f}")
    if args.out:
        prepared = qsim.range_splitter(args.n, r, args.s, args.gamma)
        _write(qsim._amplify(prepared, oracle, t).to_csv(), args.out)
    return 0 if abs(sim - closed) <= 1e-10 else 1


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.n > qsim.MAX_QUBITS:
        raise ValueError(f"n={args.n} exceeds simulator cap {qsim.MAX_QUBITS}")
    if args.check_displacement:
        return _simulate_displacement(args)
    if args.range_splitter:
        return _simulate_range_splitter(args)
    if args.hamming:
        return _simulate_hamming(args)
    return _simulate_cyclical(args)


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _anneal_config(args)
    cases = bench.full_grid(args.n, args.density, args.instances, args.seeds)
    log.info("running %d cases", len(cases))
    records = bench.run_grid(cases, cfg, penalty=args.penalty, base_seed=cfg.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "records.csv").write_text(bench.records_to_csv(records))
    tables = bench.aggregate(records).to_markdown(args.scenario or SCENARIOS)
    (out / "tables.md").write_text(tables)
    print(f"wrote {len(records)} records to {out / 'records.csv'} and tables to {out / 'tables.md'}")
    return 0


def _add_anneal_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sweeps", type=int, help="sweeps per read (default 1000)")
    p.add_argument("--reads", type=int, help="restarts (default: one per QUBO variable)")
    p.add_argument("--sweeps-per-beta", type=int, dest="sweeps_per_beta")
    p.add_argument("--beta-range", type=float, nargs=2, metavar=("MIN", "MAX"), dest="beta_range")
    p.add_argument("--config", help="JSON file with AnnealConfig fields; flags override it")
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybrid3sat",
        description="Random 3-SAT to QUBO, simulated annealing, and seeded Grover search planning.",
        epilog=SCENARIO_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write unique-solution random 3-SAT instances as DIMACS")
    p.add_argument("--n", type=parse_int_range, default=list(bench.N_RANGE))
    p.add_argument("--density", type=parse_densities, default=list(bench.DENSITIES))
    p.add_argument("--instances", type=int, default=bench.INSTANCES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="instances")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("reduce", help="compile DIMACS files to QUBO text and JSON")
    p.add_argument("files", nargs="+")
    p.add_argument("--penalty", type=parse_penalty, default="auto",
                   help="auxiliary penalty weight, or 'auto' for the smallest sound weight")
    p.add_argument("--format", choices=("text", "json", "both"), default="both")
    p.add_argument("--out", help="output directory (default: next to each input)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("anneal", help="sample a QUBO file, write samples as CSV")
    p.add_argument("file")
    _add_anneal_flags(p)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_anneal)

    p = sub.add_parser("plan", help="iteration plans for a given guess and solution, as JSON",
                       epilog=SCENARIO_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=int, required=True, help="annealed guess as basis index")
    p.add_argument("--tau", type=int, required=True, help="solution as basis index")
    p.add_argument("--r", type=int, help="superposed qubits for cyclical search (default n-1)")
    p.add_argument("--scenario", action="append", choices=SCENARIOS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="statevector checks of the search circuits")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--check-displacement", action="store_true", dest="check_displacement")
    mode.add_argument("--range-splitter", action="store_true", dest="range_splitter")
    mode.add_argument("--hamming", action="store_true")
    mode.add_argument("--cyclical", action="store_true")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--disp", type=int, default=0)
    p.add_argument("--gamma", type=int, default=0)
    p.add_argument("--tau", type=int, default=0)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--t", type=int)
    p.add_argument("--out", help="CSV dump of final basis probabilities")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="run the experiment grid, write records CSV and Markdown tables",
                       epilog=SCENARIO_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=parse_int_range, default=list(bench.N_RANGE))
    p.add_argument("--density", type=parse_densities, default=list(bench.DENSITIES))
    p.add_argument("--instances", type=int, default=bench.INSTANCES)
    p.add_argument("--seeds", type=int, default=bench.SEEDS)
    p.add_argument("--penalty", type=parse_penalty, default="auto")
    p.add_argument("--scenario", action="append", choices=SCENARIOS,
                   help="columns to include in tables (repeatable; default all)")
    p.add_argument("--out", default="bench_out")
    _add_anneal_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    for name in ("instances", "seeds"):
        if getattr(args, name, 1) < 1:
            print(f"hybrid3sat: error: --{name} must be >= 1", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"hybrid3sat: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
