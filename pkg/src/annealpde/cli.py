"""Command line entry point: ``annealpde {solve,sweep,oracle}``.

Exit codes: 0 success, 1 bad arguments or config, 2 output I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from .annealer import AnnealParams
from .errors import AnnealPDEError, InvalidParameter, OutputUnwritable
from .geneig import SolverConfig
from .harness import SweepConfig, rmse, run_sweep
from .linalg import cholesky_solve
from .pde import KINDS, PoissonProblem, discretize, exact_solution, solve_pde

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="annealpde", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solve = sub.add_parser("solve", help="solve one Poisson problem by annealing")
    solve.add_argument("--problem", choices=KINDS, required=True)
    solve.add_argument("--n", type=int, required=True, help="interior points per dimension")
    solve.add_argument("--b", type=int, default=4, help="bits per component")
    solve.add_argument("--steps", type=int, default=1000, help="annealing temperature steps")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--eta-mode", choices=("b-dep", "const"), default="b-dep")
    solve.add_argument("--eta", type=float, default=0.1)
    solve.add_argument("--epsilon0", type=float, default=1e-8)
    solve.add_argument("--n-rpt", type=int, default=0)
    solve.add_argument("--out", help="write the JSON result here instead of stdout")

    sweep = sub.add_parser("sweep", help="run a seeded experiment grid to CSV")
    sweep.add_argument("--config", required=True, help="JSON file with SweepConfig fields")
    sweep.add_argument("--out", required=True, help="trial CSV; a *_summary.csv goes alongside")
    sweep.add_argument("--workers", type=int, default=1)

    oracle = sub.add_parser("oracle", help="classical and exact solutions of a problem")
    oracle.add_argument("--problem", choices=KINDS, required=True)
    oracle.add_argument("--n", type=int, required=True)
    return parser


def _emit(payload: dict, out) -> None:
    text = json.dumps(payload, indent=2)
    if out is None:
        print(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    except OSError as exc:
        raise OutputUnwritable(str(exc)) from exc


def _cmd_solve(args) -> int:
    prob = PoissonProblem(args.problem, args.n)
    cfg = SolverConfig(b=args.b, epsilon0=args.epsilon0, eta_mode=args.eta_mode,
                       eta=args.eta, n_rpt=args.n_rpt, anneal=AnnealParams(n_steps=args.steps))
    u, sol = solve_pde(prob, cfg, rng=np.random.default_rng(args.seed))
    sle = discretize(prob)
    trace = asdict(sol.trace)
    _emit({
        "problem": args.problem,
        "n": args.n,
        "u": u.tolist(),
        "lambda_min": sol.lambda_min,
        "trace": trace,
        "rmse_vs_classical": rmse(u, cholesky_solve(sle.K, sle.f)),
    }, args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    try:
        with open(args.config) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"annealpde: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not isinstance(data, dict):
        print("annealpde: config must be a JSON object", file=sys.stderr)
        return EXIT_USAGE
    data.pop("output", None)
    cfg = SweepConfig.from_dict(data)
    records = run_sweep(cfg, out=args.out, workers=args.workers)
    print(f"wrote {len(records)} trials to {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    prob = PoissonProblem(args.problem, args.n)
    sle = discretize(prob)
    u_cls = cholesky_solve(sle.K, sle.f)
    u_ex = exact_solution(prob)
    _emit({"problem": args.problem, "n": args.n, "classical": u_cls.tolist(),
           "exact": u_ex.tolist(), "rmse": rmse(u_cls, u_ex)}, None)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"solve": _cmd_solve, "sweep": _cmd_sweep, "oracle": _cmd_oracle}[args.command]
    try:
        return handler(args)
    except OutputUnwritable as exc:
        print(f"annealpde: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InvalidParameter, TypeError) as exc:
        print(f"annealpde: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AnnealPDEError as exc:
        print(f"annealpde: solver failed: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
