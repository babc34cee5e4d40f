"""Seeded experiment runner: single trials, parameter sweeps and CSV output."""

from __future__ import annotations

import csv
import hashlib
import itertools
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .annealer import AnnealParams
from .errors import AnnealPDEError, InvalidParameter, LengthMismatch, OutputUnwritable
from .geneig import SolverConfig
from .linalg import cholesky_solve
from .pde import KINDS, PoissonProblem, discretize, solve_pde

__all__ = [
    "SweepConfig",
    "TrialRecord",
    "CSV_COLUMNS",
    "SUMMARY_COLUMNS",
    "rmse",
    "theoretical_updates",
    "max_precision_updates",
    "run_trial",
    "trial_seed",
    "run_sweep",
    "summarize",
    "summary_path",
]

CSV_COLUMNS = (
    "problem", "n", "b", "n_step", "trial_index", "seed", "iters_initial",
    "iters_descent", "n_precision_updates", "lambda_final", "rmse", "success",
    "wall_time_ms",
)
SUMMARY_COLUMNS = (
    "problem", "n", "b", "n_step", "mean_iters_descent", "sd_iters_descent",
    "mean_updates", "success_rate",
)


@dataclass(frozen=True)
class SweepConfig:
    """A grid of experiments. Field names double as the JSON config keys."""

    problems: Tuple[str, ...] = ("sym1d",)
    n_values: Tuple[int, ...] = (9,)
    b_values: Tuple[int, ...] = (4,)
    n_step_values: Tuple[int, ...] = (1000,)
    trials: int = 1000
    base_seed: int = 0
    epsilon0: float = 1e-8
    epsilon1: float = 1e-8
    n_rpt: int = 0
    eta_mode: str = "b-dep"
    eta: float = 0.1
    sweeps_per_step: int = 1
    num_reads: int = 1
    output: Optional[str] = None

    def __post_init__(self):
        for name in ("problems", "n_values", "b_values", "n_step_values"):
            value = getattr(self, name)
            if isinstance(value, (str, int)):
                value = (value,)
            value = tuple(value)
            if not value:
                raise InvalidParameter(f"{name} must be non-empty")
            object.__setattr__(self, name, value)
        unknown = set(self.problems) - set(KINDS)
        if unknown:
            raise InvalidParameter(f"unknown problem kinds {sorted(unknown)}")
        if self.trials < 1:
            raise InvalidParameter("trials must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise InvalidParameter(f"unknown config keys {sorted(extra)}")
        return cls(**data)

    def solver_config(self, b: int, n_step: int) -> SolverConfig:
        return SolverConfig(
            b=b,
            epsilon0=self.epsilon0,
            eta_mode=self.eta_mode,
            eta=self.eta,
            n_rpt=self.n_rpt,
            anneal=AnnealParams(n_steps=n_step, sweeps_per_step=self.sweeps_per_step,
                                num_reads=self.num_reads),
        )

    def tuples(self) -> List[Tuple[str, int, int, int]]:
        return list(itertools.product(self.problems, self.n_values, self.b_values,
                                      self.n_step_values))


@dataclass(frozen=True)
class TrialRecord:
    problem: str
    n: int
    b: int
    n_step: int
    trial_index: int
    seed: int
    iters_initial: int
    iters_descent: int
    n_precision_updates: int
    lambda_final: float
    rmse: float
    success: bool
    wall_time_ms: float

    def csv_row(self) -> List[str]:
        row = []
        for name in CSV_COLUMNS:
            value = getattr(self, name)
            if isinstance(value, bool):
                row.append("1" if value else "0")
            elif isinstance(value, float):
                row.append(_fmt(value))
            else:
                row.append(str(value))
        return row


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def rmse(u, u_ref) -> float:
    u = np.asarray(u, dtype=float)
    u_ref = np.asarray(u_ref, dtype=float)
    if u.shape != u_ref.shape or u.size == 0:
        raise LengthMismatch(f"shapes {u.shape} and {u_ref.shape}")
    return float(np.sqrt(np.mean((u - u_ref) ** 2)))


def theoretical_updates(r: float, r_ini: float, eta: float) -> float:
    """Mesh reductions needed to go from ``r_ini`` to ``r`` at rate ``eta``.

    With ``r_ini = eta = 2**(1-b)`` this is ``log2(1/r)/(b-1) - 1``.
    """
    if not (0 < r < r_ini and 0 < eta < 1):
        raise InvalidParameter(f"need 0 < r < r_ini and 0 < eta < 1, got {r}, {r_ini}, {eta}")
    return (math.log2(r) - math.log2(r_ini)) / math.log2(eta)


def max_precision_updates(r: float, r_ini: float, eta: float) -> int:
    """Integer count of reductions until the mesh first reaches ``r``."""
    return math.ceil(theoretical_updates(r, r_ini, eta) - 1e-9)


def run_trial(problem: str, n: int, b: int, n_step: int, seed: int,
              cfg: SweepConfig, trial_index: int = 0, sampler=None) -> TrialRecord:
    """Solve one problem instance from a fresh ``seed``-ed random source.

    Solver errors do not propagate; they yield a failed record with
    ``rmse = inf``.
    """
    prob = PoissonProblem(problem, n)
    sle = discretize(prob)
    u_ref = cholesky_solve(sle.K, sle.f)
    solver_cfg = cfg.solver_config(b, n_step)
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    try:
        u, sol = solve_pde(prob, solver_cfg, sampler, rng)
    except AnnealPDEError:
        elapsed = 1e3 * (time.perf_counter() - start)
        return TrialRecord(problem, n, b, n_step, trial_index, seed, 0, 0, 0,
                           math.nan, math.inf, False, elapsed)
    elapsed = 1e3 * (time.perf_counter() - start)
    err = rmse(u, u_ref)
    tr = sol.trace
    return TrialRecord(problem, n, b, n_step, trial_index, seed, tr.iters_initial,
                       tr.iters_descent, tr.n_precision_updates, sol.lambda_min, err,
                       bool(err < cfg.epsilon1), elapsed)


def trial_seed(base_seed: int, params: Sequence, trial_index: int) -> int:
    """Deterministic per-trial seed, stable across processes and runs."""
    key = repr((tuple(params), int(trial_index))).encode()
    digest = int.from_bytes(hashlib.sha256(key).digest()[:4], "little")
    return (int(base_seed) + digest) % 2**32


def _trial_job(args):
    params, idx, seed, cfg = args
    return run_trial(*params, seed, cfg, trial_index=idx)


def _jobs(cfg: SweepConfig) -> Iterator:
    for params in cfg.tuples():
        for idx in range(cfg.trials):
            yield params, idx, trial_seed(cfg.base_seed, params, idx), cfg


def summarize(records: Iterable[TrialRecord]) -> List[dict]:
    """Per-parameter-tuple means, standard deviation and success rate."""
    groups = {}
    for rec in records:
        groups.setdefault((rec.problem, rec.n, rec.b, rec.n_step), []).append(rec)
    rows = []
    for (problem, n, b, n_step), recs in groups.items():
        iters = [r.iters_descent for r in recs]
        rows.append(dict(
            problem=problem, n=n, b=b, n_step=n_step,
            mean_iters_descent=statistics.fmean(iters),
            sd_iters_descent=statistics.pstdev(iters),
            mean_updates=statistics.fmean(r.n_precision_updates for r in recs),
            success_rate=sum(r.success for r in recs) / len(recs),
        ))
    return rows


def summary_path(out: Path) -> Path:
    out = Path(out)
    return out.with_name(out.stem + "_summary" + (out.suffix or ".csv"))


def run_sweep(cfg: SweepConfig, out=None, workers: int = 1) -> List[TrialRecord]:
    """Run every trial of the grid, streaming records to ``out`` in order.

    Records come out in (parameter tuple, trial index) order regardless of
    ``workers``. When ``out`` is given a companion ``*_summary.csv`` is
    written next to it.
    """
    out = out if out is not None else cfg.output
    records: List[TrialRecord] = []
    handle = None
    if out is not None:
        try:
            Path(out).parent.mkdir(parents=True, exist_ok=True)
            handle = open(out, "w", newline="")
        except OSError as exc:
            raise OutputUnwritable(f"cannot write {out}: {exc}") from exc
    try:
        writer = csv.writer(handle, lineterminator="\n") if handle else None
        if writer:
            writer.writerow(CSV_COLUMNS)
        if workers > 1:
            pool = ProcessPoolExecutor(max_workers=workers)
            results = pool.map(_trial_job, _jobs(cfg), chunksize=4)
        else:
            pool = None
            results = map(_trial_job, _jobs(cfg))
        try:
            for rec in results:
                records.append(rec)
                if writer:
                    writer.writerow(rec.csv_row())
                    handle.flush()
        finally:
            if pool is not None:
                pool.shutdown()
    except OSError as exc:
        raise OutputUnwritable(f"failed writing {out}: {exc}") from exc
    finally:
        if handle:
            handle.close()

    if out is not None:
        _write_summary(summary_path(out), summarize(records))
    return records


def _write_summary(path: Path, rows: List[dict]) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(SUMMARY_COLUMNS)
            for row in rows:
                writer.writerow([_fmt(row[c]) if isinstance(row[c], float) else row[c]
                                 for c in SUMMARY_COLUMNS])
    except OSError as exc:
        raise OutputUnwritable(f"cannot write {path}: {exc}") from exc
