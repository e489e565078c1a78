"""Principal eigenpair computation for the coupled system.

The two solution maps send one component to the positive solution of the
other component's equation; their composition is 1-homogeneous under the
compatibility condition, so a normalized fixed-point iteration converges to
the unique (up to scaling) positive fixed vector.  The fixed-point factor is
rescaled into the curve constant, and any point of the principal curve gets a
concrete eigenfunction pair by closed-form scaling of the base pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import SystemParams
from .fracop import KernelMatrix, apply_operator
from .solvers import solve_subhomogeneous


def phi_power(t: np.ndarray | float, m: float):
    """Odd power map |t|^(m-2) t."""
    return np.sign(t) * np.abs(t) ** (m - 1.0)


@dataclass(frozen=True, eq=False)
class EigenResult:
    """Converged fixed-point data and the principal curve constant.

    u0 is normalized to sup norm 1; v0 is the image of u0 under the second
    solution map, so (u0, v0) solves the system at (lambda0**theta, 1).
    """

    lambda1_factor: float
    lambda0: float
    u0: np.ndarray
    v0: np.ndarray
    iterations: int
    fp_residual: float
    pde_residuals: tuple[float, float]
    converged: bool


def solve_u_given_v(v: np.ndarray, P: SystemParams, K_p: KernelMatrix,
                    tol: float, u_hint: np.ndarray | None = None) -> np.ndarray:
    """Positive solution u of apply_p(u) = a u^alpha1 v^beta1 for given v >= 0."""
    v = _require_nonneg(v, "v")
    g = P.a.values * v**P.beta1
    rep = solve_subhomogeneous(K_p, P.alpha1, g, tol, u0_hint=u_hint)
    return rep.require()


def solve_v_given_u(u: np.ndarray, P: SystemParams, K_q: KernelMatrix,
                    tol: float, v_hint: np.ndarray | None = None) -> np.ndarray:
    """Positive solution v of apply_q(v) = b v^alpha2 u^beta2 for given u >= 0."""
    u = _require_nonneg(u, "u")
    g = P.b.values * u**P.beta2
    rep = solve_subhomogeneous(K_q, P.alpha2, g, tol, u0_hint=v_hint)
    return rep.require()


def principal_pair(P: SystemParams, K_p: KernelMatrix, K_q: KernelMatrix,
                   tol: float = 1e-10, max_iter: int = 200,
                   start: np.ndarray | None = None) -> EigenResult:
    """Normalized fixed-point iteration for the composed solution map.

    Iterates u <- C(u)/||C(u)|| with C = (first map) o (second map) from a
    positive start (default all ones); the fixed-point factor is the sup norm
    of C at the fixed vector, well defined by 1-homogeneity.  Stops when both
    the iterate change and the fixed-point residual fall below tol.  The curve
    constant is lambda1 ** (-sqrt(beta2/(q-1-alpha2))), verified a posteriori
    through the recorded residuals of both system equations.
    """
    n = K_p.grid.n
    if start is None:
        u = np.ones(n)
    else:
        u = np.ascontiguousarray(start, dtype=float)
        if u.shape != (n,) or np.any(u <= 0.0):
            raise ValueError("start vector must be positive of length n")
        u = u / np.abs(u).max()
    inner_tol = tol / 10.0

    v = None
    w = None
    converged = False
    iterations = 0
    fp_res = math.inf
    for iterations in range(1, max_iter + 1):
        v = solve_v_given_u(u, P, K_q, inner_tol, v_hint=v)
        w = solve_u_given_v(v, P, K_p, inner_tol, u_hint=w)
        lam1 = float(np.abs(w).max())
        fp_res = float(np.abs(w - lam1 * u).max())
        u_next = w / lam1
        diff = float(np.abs(u_next - u).max())
        u = u_next
        if fp_res <= tol and diff <= tol:
            converged = True
            break

    # recompute the pair at the final iterate so the reported factor,
    # eigenfunctions and residuals are mutually consistent
    v0 = solve_v_given_u(u, P, K_q, inner_tol, v_hint=v)
    w = solve_u_given_v(v0, P, K_p, inner_tol, u_hint=w)
    lam1 = float(np.abs(w).max())
    fp_res = float(np.abs(w - lam1 * u).max())
    lam0 = lam1 ** (-math.sqrt(P.beta2 / (P.q - 1.0 - P.alpha2)))

    lam_star = lam0**P.theta
    res1, res2 = system_residuals(u, v0, lam_star, 1.0, P, K_p, K_q)
    return EigenResult(lambda1_factor=lam1, lambda0=lam0, u0=u, v0=v0,
                       iterations=iterations, fp_residual=fp_res,
                       pde_residuals=(res1, res2), converged=converged)


def eigenpair_for_lambda(lam: float, R: EigenResult,
                         P: SystemParams) -> tuple[float, np.ndarray, np.ndarray]:
    """Eigenfunction pair for the curve point with first coordinate lam.

    mu = (lambda0 / lam^(1/theta))^zeta, and (u0, mu^(1/(q-1-alpha2)) v0)
    solves the system at (lam, mu): scaling v0 by sigma moves the pair to
    (lam_base sigma^(-beta1), sigma^(q-1-alpha2)), which sweeps the curve.
    """
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    if not R.converged:
        raise ValueError("eigen result did not converge")
    mu = (R.lambda0 / lam ** (1.0 / P.theta)) ** P.zeta
    sigma = mu ** (1.0 / (P.q - 1.0 - P.alpha2))
    return mu, R.u0.copy(), sigma * R.v0


def system_residuals(u: np.ndarray, v: np.ndarray, lam: float, mu: float,
                     P: SystemParams, K_p: KernelMatrix,
                     K_q: KernelMatrix) -> tuple[float, float]:
    """Sup-norm residuals of both coupled equations at (u, v; lam, mu)."""
    rhs1 = lam * P.a.values * np.abs(u) ** P.alpha1 * phi_power(v, P.beta1 + 1.0)
    rhs2 = mu * P.b.values * np.abs(v) ** P.alpha2 * phi_power(u, P.beta2 + 1.0)
    res1 = float(np.abs(apply_operator(K_p, u) - rhs1).max())
    res2 = float(np.abs(apply_operator(K_q, v) - rhs2).max())
    return res1, res2


def _require_nonneg(x: np.ndarray, name: str) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError(f"{name} must be nonnegative")
    return x
