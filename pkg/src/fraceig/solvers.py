"""Nonlinear Dirichlet solves, torsion constants, and monotone iteration.

solve_dirichlet minimizes the strictly convex energy functional with a damped
Newton descent (regularized Jacobian, Armijo backtracking); convergence is
always declared on the unregularized residual of the operator equation.
solve_subhomogeneous wraps it in the decreasing iteration from an explicit
discrete supersolution for right-hand sides g(x) u^alpha with alpha < m-1.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .domain import build_grid
from .fracop import KernelMatrix, apply_operator, assemble, energy, newton_matrix

ARMIJO_C = 1e-4
MAX_BACKTRACKS = 60


class ConvergenceError(RuntimeError):
    """A solver failed to reach its tolerance within its iteration budget."""


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Outcome of a nonlinear solve.

    converged implies residual_inf <= tol (the absolute residual threshold
    recorded here).
    """

    u: np.ndarray
    residual_inf: float
    iterations: int
    converged: bool
    tol: float
    iterates: list | None = field(default=None, repr=False)

    def require(self) -> np.ndarray:
        if not self.converged:
            raise ConvergenceError(
                f"solve stopped at residual {self.residual_inf:.3e} "
                f"(tol {self.tol:.3e}) after {self.iterations} iterations")
        return self.u


def solve_dirichlet(K: KernelMatrix, f: np.ndarray, tol: float,
                    max_iter: int = 200,
                    u0: np.ndarray | None = None) -> SolveReport:
    """Solve apply_operator(K, u) = f, the discrete Dirichlet problem.

    Descent on J(u) = E(u) - h <f, u> with Newton directions from the
    regularized Jacobian and backtracking that enforces monotone decrease.
    u0 is an optional warm start; it never changes the minimizer.
    """
    f = np.ascontiguousarray(f, dtype=float)
    n = K.grid.n
    if f.shape != (n,):
        raise ValueError(f"expected forcing of length {n}, got {f.shape}")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    h, m = K.grid.h, K.m

    if u0 is None:
        # diagonal estimate, exact on a single-node grid: phi_m^{-1}(f / row)
        row = K.W.sum(axis=1) + K.tau
        y = f / row
        u = np.sign(y) * np.abs(y) ** (1.0 / (m - 1.0))
    else:
        u = np.ascontiguousarray(u0, dtype=float).copy()

    r = apply_operator(K, u) - f
    res = float(np.abs(r).max())
    if res <= tol:
        return SolveReport(u=u, residual_inf=res, iterations=0,
                           converged=True, tol=tol)

    # Phase 1 descends the convex objective with strict Armijo backtracking.
    # Near the minimum the objective comparisons drop below summation noise
    # (and for m < 2 the objective barely sees the kink modes the residual
    # lives in), so once Armijo stops certifying decrease we switch to a line
    # search that must shrink the residual itself.
    obj = energy(K, u) - h * float(f @ u)
    polishing = False
    for it in range(1, max_iter + 1):
        eps = 1e-8 * (1.0 + float(np.abs(u).max()))
        J = newton_matrix(K, u, eps)
        try:
            d = cho_solve(cho_factor(J, lower=True), -r)
        except np.linalg.LinAlgError:
            d = np.linalg.solve(J, -r)
        slope = h * float(r @ d)
        accepted = False
        if not polishing and slope < 0.0:
            # decreases below the rounding noise of the energy sums are not
            # certifiable; require clearance so noise steps cannot be accepted
            noise = 1e-13 * (abs(obj) + h * float(np.abs(f) @ np.abs(u)) + 1.0)
            t = 1.0
            for _ in range(MAX_BACKTRACKS):
                u_try = u + t * d
                obj_try = energy(K, u_try) - h * float(f @ u_try)
                if obj_try <= obj + ARMIJO_C * t * slope - noise:
                    accepted = True
                    break
                t *= 0.5
        if not accepted:
            polishing = True
            t = 1.0
            for _ in range(MAX_BACKTRACKS):
                u_try = u + t * d
                r_try = apply_operator(K, u_try) - f
                res_try = float(np.abs(r_try).max())
                if res_try < res * (1.0 - 0.01 * t):
                    accepted = True
                    break
                t *= 0.5
            if not accepted:  # residual floor reached
                return SolveReport(u=u, residual_inf=res, iterations=it,
                                   converged=res <= tol, tol=tol)
            u, r, res = u_try, r_try, res_try
            obj = energy(K, u) - h * float(f @ u)
        else:
            u, obj = u_try, obj_try
            r = apply_operator(K, u) - f
            res = float(np.abs(r).max())
        if res <= tol:
            return SolveReport(u=u, residual_inf=res, iterations=it,
                               converged=True, tol=tol)
    return SolveReport(u=u, residual_inf=res, iterations=max_iter,
                       converged=False, tol=tol)


@dataclass(frozen=True)
class TorsionConstant:
    """Sup of the solution of apply = 1 on the unit ball (-1, 1)."""

    s: float
    m: float
    value: float
    n_used: int
    iterations: int


def torsion_constant(s: float, m: float, n: int, tol: float = 1e-10,
                     max_iter: int = 300) -> TorsionConstant:
    """Compute the torsion constant on (-1, 1) at resolution n."""
    grid = build_grid(-1.0, 1.0, n)
    K = assemble(grid, s, m)
    rep = solve_dirichlet(K, np.ones(n), tol, max_iter=max_iter)
    u = rep.require()
    return TorsionConstant(s=float(s), m=float(m), value=float(u.max()),
                           n_used=int(n), iterations=rep.iterations)


def _torsion_key(s: float, m: float, n: int) -> str:
    return f"s={float(s):.17g}|m={float(m):.17g}|n={int(n)}"


def load_torsion_cache(path: str) -> dict:
    if not os.path.exists(path):
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def save_torsion_cache(path: str, cache: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(cache, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def torsion_constant_cached(s: float, m: float, n: int, tol: float = 1e-10,
                            cache_path: str | None = None) -> TorsionConstant:
    """Torsion constant with an optional JSON cache keyed by (s, m, n)."""
    if cache_path is None:
        return torsion_constant(s, m, n, tol)
    cache = load_torsion_cache(cache_path)
    key = _torsion_key(s, m, n)
    if key in cache:
        e = cache[key]
        return TorsionConstant(s=e["s"], m=e["m"], value=e["value"],
                               n_used=e["n"], iterations=e["iterations"])
    tc = torsion_constant(s, m, n, tol)
    cache[key] = {"s": tc.s, "m": tc.m, "n": tc.n_used, "value": tc.value,
                  "iterations": tc.iterations}
    save_torsion_cache(cache_path, cache)
    return tc


def solve_subhomogeneous(K: KernelMatrix, alpha: float, g: np.ndarray,
                         tol: float, max_iter: int = 200,
                         inner_tol: float | None = None,
                         u0_hint: np.ndarray | None = None,
                         trace: bool = False) -> SolveReport:
    """Positive solution of apply_operator(K, u) = g * u^alpha.

    Requires 0 <= alpha < m - 1 and g >= 0 with some positive entry.  Starts
    from the explicit supersolution t * T(g) with t^(m-1-alpha) = ||T(g)||^alpha
    (T the Dirichlet solve) and iterates w_k = T(g * w_{k-1}^alpha); the
    iterates are nonincreasing.  Converged means both the iterate change and
    the residual of the defining equation passed.
    """
    m = K.m
    alpha = float(alpha)
    if not 0.0 <= alpha < m - 1.0:
        raise ValueError("alpha must satisfy 0 <= alpha < m - 1")
    g = np.ascontiguousarray(g, dtype=float)
    if g.shape != (K.grid.n,):
        raise ValueError("g has the wrong length")
    if np.any(g < 0.0):
        raise ValueError("g must be nonnegative")
    if not np.any(g > 0.0):
        raise ValueError("g must not vanish identically (only the trivial "
                         "solution exists)")
    if inner_tol is None:
        inner_tol = tol / 10.0

    rep0 = solve_dirichlet(K, g, inner_tol, u0=u0_hint)
    base = rep0.require()
    total_iters = rep0.iterations
    scale = float(np.abs(base).max())
    t = scale ** (alpha / (m - 1.0 - alpha)) if alpha > 0.0 else 1.0
    w = t * base
    history = [w.copy()] if trace else None

    if alpha == 0.0:
        res = rep0.residual_inf
        res_tol = tol * (1.0 + float(np.abs(g).max()))
        return SolveReport(u=w, residual_inf=res, iterations=total_iters,
                           converged=res <= res_tol, tol=res_tol,
                           iterates=history)

    res = math.inf
    res_tol = math.inf
    for _ in range(max_iter):
        rhs = g * w**alpha
        rep = solve_dirichlet(K, rhs, inner_tol, u0=w)
        w_next = rep.require()
        total_iters += rep.iterations
        diff = float(np.abs(w_next - w).max())
        w = w_next
        if trace:
            history.append(w.copy())
        rhs_now = g * w**alpha
        res = float(np.abs(apply_operator(K, w) - rhs_now).max())
        res_tol = tol * (1.0 + float(np.abs(rhs_now).max()))
        if diff <= tol and res <= res_tol:
            return SolveReport(u=w, residual_inf=res, iterations=total_iters,
                               converged=True, tol=res_tol, iterates=history)
    return SolveReport(u=w, residual_inf=res, iterations=total_iters,
                       converged=False, tol=res_tol, iterates=history)
