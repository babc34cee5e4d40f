"""Solve discretized PDEs by annealing-based minimisation of a generalized
Rayleigh quotient, refined to arbitrary precision at a fixed bit count."""

from .annealer import (
    AnnealParams,
    ExhaustiveSampler,
    SampleResult,
    SimulatedAnnealingSampler,
    anneal,
    auto_beta_range,
    exhaustive_ground_state,
)
from .geneig import GepProblem, GepSolution, SolverConfig, SolverTrace, solve_gep
from .harness import SweepConfig, TrialRecord, rmse, run_sweep, run_trial, theoretical_updates
from .linalg import cholesky_solve, normalize, rayleigh_quotient
from .pde import PoissonProblem, discretize, exact_solution, recover_solution, sle_to_gep, solve_pde
from .qubo import QuboProblem, build_descent_qubo, build_initial_qubo, decode, energy, make_encoding

__version__ = "0.1.0"
