"""Solver configuration defaults.

All iterative routines take an optional :class:`SolverConfig`; the defaults
below are tuned so that unit geometry (bodies with diameter of order 1/lambda)
resolves supports and projections to ~1e-8 absolute.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SolverConfig:
    #: absolute tolerance for supports, projections and membership slack
    tol: float = 1e-8
    #: infeasibility threshold: a stalled feasibility sweep with residual
    #: above 10*gap_tol is declared empty, below it ambiguous
    gap_tol: float = 1e-7
    #: global iteration cap for iterative solvers
    max_iters: int = 100_000
    #: multi-start count for farthest-point ascent on generic bodies
    multi_starts: int = 32
    #: margin used by the open-hemisphere test (min-norm-point threshold)
    hemi_eps: float = 1e-9


DEFAULT_CONFIG = SolverConfig()
