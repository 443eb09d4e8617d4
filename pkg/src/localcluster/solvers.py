"""Conjugate gradients and deflated inverse iteration.

These are the only linear solvers in the package. They work on operator
callbacks (no matrices are formed), count matrix-vector products against
a shared budget, and raise ConvergenceError with the residual actually
achieved when the budget runs out.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ConvergenceError, ParameterError

__all__ = ["MatvecBudget", "conjugate_gradient", "smallest_eigenpair"]

DEFAULT_MATVEC_CAP = 1_000_000


class MatvecBudget:
    """Shared counter for matrix-vector products with a hard cap."""

    def __init__(self, cap: int = DEFAULT_MATVEC_CAP):
        self.cap = cap
        self.used = 0

    def spend(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.cap:
            raise _BudgetExceeded()


class _BudgetExceeded(Exception):
    pass


def conjugate_gradient(
    apply_a: Callable[[np.ndarray], np.ndarray],
    b: np.ndarray,
    *,
    rel_tol: float,
    budget: MatvecBudget,
    project: Callable[[np.ndarray], np.ndarray] | None = None,
) -> np.ndarray:
    """Solve A x = b for symmetric positive definite A.

    ``project``, when given, restricts the iteration to a subspace (used
    for deflating known null directions); it must be an orthogonal
    projector commuting with the operator on its range. Raises
    ParameterError if the operator turns out indefinite on the subspace.
    """
    r = b.astype(np.float64, copy=True)
    if project is not None:
        r = project(r)
    x = np.zeros_like(r)
    b_norm = float(np.linalg.norm(r))
    if b_norm == 0.0:
        return x
    p = r.copy()
    rs = float(r @ r)
    while True:
        ap = apply_a(p)
        budget.spend()
        if project is not None:
            ap = project(ap)
        p_ap = float(p @ ap)
        if p_ap <= 0.0:
            raise ParameterError("operator is not positive definite on the search space")
        step = rs / p_ap
        x += step * p
        r -= step * ap
        rs_new = float(r @ r)
        if np.sqrt(rs_new) <= rel_tol * b_norm:
            return x
        p = r + (rs_new / rs) * p
        rs = rs_new


def smallest_eigenpair(
    apply_a: Callable[[np.ndarray], np.ndarray],
    n: int,
    *,
    tol: float,
    residual_fn: Callable[[float, np.ndarray, np.ndarray], float] | None = None,
    project: Callable[[np.ndarray], np.ndarray] | None = None,
    budget: MatvecBudget | None = None,
    cg_rel_tol: float = 1e-12,
    max_outer: int = 1000,
    seed: int = 0,
) -> tuple[float, np.ndarray, float]:
    """Smallest eigenpair of a symmetric PD operator by inverse iteration.

    Each outer step solves A z = y by CG and renormalizes. Convergence is
    judged by ``residual_fn(lam, y, a_y)`` (defaults to the plain
    eigen-residual norm), compared against ``tol``. Returns
    (eigenvalue, unit eigenvector, achieved residual).

    Deterministic: the start vector comes from a fixed-seed generator.
    """
    if budget is None:
        budget = MatvecBudget()
    if residual_fn is None:
        residual_fn = lambda lam, y, a_y: float(np.linalg.norm(a_y - lam * y))

    rng = np.random.default_rng(seed)
    y = rng.standard_normal(n)
    if project is not None:
        y = project(y)
    nrm = float(np.linalg.norm(y))
    if nrm == 0.0:
        raise ParameterError("projector annihilated the start vector")
    y /= nrm

    res = float("inf")
    try:
        for _ in range(max_outer):
            z = conjugate_gradient(
                apply_a, y, rel_tol=cg_rel_tol, budget=budget, project=project
            )
            nz = float(np.linalg.norm(z))
            if nz == 0.0:
                raise ConvergenceError("inverse iteration collapsed to zero", achieved=res)
            y = z / nz
            if project is not None:
                y = project(y)
                y /= float(np.linalg.norm(y))
            a_y = apply_a(y)
            budget.spend()
            lam = float(y @ a_y)
            res = residual_fn(lam, y, a_y)
            if res <= tol:
                return lam, y, res
    except _BudgetExceeded:
        raise ConvergenceError(
            f"matvec budget exhausted ({budget.cap}); residual {res:.3e}", achieved=res
        ) from None
    raise ConvergenceError(
        f"no convergence in {max_outer} inverse-iteration steps; residual {res:.3e}",
        achieved=res,
    )
