"""LP relaxation of the offloading ILP and a dense two-phase simplex solver.

The relaxation keeps the two load rows as equalities with explicit slack
columns ``s1`` (ED) and ``s2`` (ES) followed by one assignment row per job::

    sum_{i<=m, j} p_ij x_ij + s1 = T
    sum_j p_(m+1)j x_(m+1)j + s2 = T
    sum_i x_ij = 1                      for every job j

Variable ``x_ij`` (1-based model i, 0-based job j) lives in column
``(i - 1) * n + j``; the two slacks are the last two columns.

The solver pivots with Bland's rule, so it always terminates and always
returns a vertex. A vertex has at most ``n + 2`` nonzero entries, which is
what bounds the number of split jobs by two.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InternalError
from .model import EPS, Instance

PIVOT_TOL = 1e-10


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True, eq=False)
class StandardLp:
    """``maximize c @ x  s.t.  A @ x == b, x >= 0`` with ``b >= 0``."""

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    n_jobs: int
    n_models: int  # m + 1

    @property
    def shape(self):
        return self.A.shape


@dataclass(frozen=True, eq=False)
class BasicSolution:
    values: np.ndarray
    basis: tuple
    objective: float
    status: LpStatus
    pivots: int = 0

    def assignment_matrix(self, n_models: int, n_jobs: int) -> np.ndarray:
        """The (m+1) x n block of relaxed assignment values."""
        return self.values[: n_models * n_jobs].reshape(n_models, n_jobs)


def build_relaxation(instance: Instance) -> StandardLp:
    m1, n = instance.m + 1, instance.n
    nvars = m1 * n + 2
    A = np.zeros((n + 2, nvars))
    # ED load row covers models 1..m, ES row covers model m+1
    A[0, : (m1 - 1) * n] = instance.times[:-1].ravel()
    A[0, nvars - 2] = 1.0
    A[1, (m1 - 1) * n : m1 * n] = instance.times[-1]
    A[1, nvars - 1] = 1.0
    for j in range(n):
        A[2 + j, j : m1 * n : n] = 1.0
    b = np.concatenate([[instance.deadline, instance.deadline], np.ones(n)])
    c = np.zeros(nvars)
    c[: m1 * n] = np.repeat(instance.accuracies, n)
    return StandardLp(c=c, A=A, b=b, n_jobs=n, n_models=m1)


class _Tableau:
    """Row-reduced form ``B^-1 [A | b]`` plus a reduced-cost row (minimization)."""

    def __init__(self, A: np.ndarray, b: np.ndarray, basis: list):
        self.body = np.hstack([A, b[:, None]]).astype(float)
        self.basis = list(basis)
        self.cost_row = None
        self.pivots = 0

    def set_costs(self, cost: np.ndarray):
        # reduced costs d = cost - cost_B B^-1 A; last entry is -objective
        full = np.append(cost, 0.0)
        self.cost_row = full - cost[self.basis] @ self.body

    def pivot(self, row: int, col: int):
        body = self.body
        body[row] /= body[row, col]
        column = body[:, col].copy()
        column[row] = 0.0
        body -= np.outer(column, body[row])
        self.cost_row -= self.cost_row[col] * body[row]
        self.basis[row] = col
        self.pivots += 1

    def entering(self, allowed: int):
        # Bland: lowest-index column with a negative reduced cost
        neg = np.flatnonzero(self.cost_row[:allowed] < -EPS)
        return int(neg[0]) if neg.size else None

    def leaving(self, col: int):
        column = self.body[:, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return None
        ratios = self.body[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12]
        # Bland: among tied rows, the one whose basic variable has the lowest index
        return int(min(ties, key=lambda r: self.basis[r]))

    def run(self, allowed: int, max_pivots: int) -> bool:
        """Pivot to optimality; False if the LP is unbounded."""
        while True:
            col = self.entering(allowed)
            if col is None:
                return True
            row = self.leaving(col)
            if row is None:
                return False
            if self.pivots >= max_pivots:
                raise InternalError("simplex exceeded its pivot budget")
            self.pivot(row, col)


def _initial_basis(A: np.ndarray):
    """Per row, an existing identity column if there is one, else None."""
    rows, cols = A.shape
    basis = [None] * rows
    for col in range(cols):
        column = A[:, col]
        nz = np.flatnonzero(column)
        if nz.size == 1 and column[nz[0]] == 1.0 and basis[nz[0]] is None:
            basis[nz[0]] = col
    return basis


def simplex_solve(lp: StandardLp) -> BasicSolution:
    A, b, c = lp.A, lp.b, lp.c
    rows, nvars = A.shape
    if np.any(b < 0):
        raise InternalError("standard form requires a nonnegative right-hand side")
    max_pivots = 50 * (rows + nvars) + 1000

    basis = _initial_basis(A)
    missing = [r for r in range(rows) if basis[r] is None]
    art = np.zeros((rows, len(missing)))
    for k, r in enumerate(missing):
        art[r, k] = 1.0
        basis[r] = nvars + k
    tab = _Tableau(np.hstack([A, art]), b, basis)

    # Phase I: minimize the sum of artificials
    phase1 = np.concatenate([np.zeros(nvars), np.ones(len(missing))])
    tab.set_costs(phase1)
    tab.run(nvars + len(missing), max_pivots)
    infeas = -tab.cost_row[-1]
    if infeas > EPS:
        return BasicSolution(np.zeros(nvars), (), float("nan"), LpStatus.INFEASIBLE, tab.pivots)

    # drive zero-valued artificials out of the basis
    for r in range(rows):
        if tab.basis[r] >= nvars:
            cands = np.flatnonzero(np.abs(tab.body[r, :nvars]) > PIVOT_TOL)
            if cands.size == 0:
                raise InternalError(f"constraint matrix is rank deficient (row {r})")
            tab.pivot(r, int(cands[0]))
    tab.body = np.delete(tab.body, np.s_[nvars : nvars + len(missing)], axis=1)

    # Phase II on -c
    tab.set_costs(-c)
    if not tab.run(nvars, max_pivots):
        return BasicSolution(np.zeros(nvars), tuple(tab.basis), float("inf"), LpStatus.UNBOUNDED, tab.pivots)

    basis = tuple(tab.basis)
    x = np.zeros(nvars)
    # re-solve on the final basis to shed accumulated pivoting error
    x[list(basis)] = np.linalg.solve(A[:, basis], b)
    return BasicSolution(x, basis, float(c @ x), LpStatus.OPTIMAL, tab.pivots)


def fractional_jobs(solution: BasicSolution, instance: Instance) -> set:
    """0-based indices of jobs split across models in the relaxed solution."""
    x = solution.assignment_matrix(instance.m + 1, instance.n)
    split = (x > EPS) & (x < 1.0 - EPS)
    return set(np.flatnonzero(split.any(axis=0)).tolist())


def solve_relaxation(instance: Instance) -> BasicSolution:
    return simplex_solve(build_relaxation(instance))
