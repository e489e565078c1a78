"""Discrete fractional m-Laplacian on an interval with zero exterior data.

The operator at node i is

    (A u)_i = sum_{j != i} W_ij phi_m(u_i - u_j) + tau_i phi_m(u_i),

with phi_m(t) = |t|^(m-2) t.  W_ij integrates the singular kernel
|x_i - y|^(-1-s*m) exactly over cell j (closed-form antiderivative), tau_i
integrates it over the exterior of the interval, and the diagonal cell
contributes zero by the principal-value symmetry of the midpoint cell.  The
normalization constant of the continuum operator is omitted throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .domain import Grid


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Cell-integrated kernel weights and exterior tail for one (s, m) pair."""

    grid: Grid
    s: float
    m: float
    sm: float
    W: np.ndarray
    tau: np.ndarray


def cell_weight(x: float, a: float, b: float, sm: float) -> float:
    """Exact integral of |x - y|^(-1-sm) over a cell [a, b] not containing x."""
    if a >= x:
        return ((a - x) ** -sm - (b - x) ** -sm) / sm
    if b <= x:
        return ((x - b) ** -sm - (x - a) ** -sm) / sm
    raise ValueError("cell must lie entirely to one side of x")


def assemble(grid: Grid, s: float, m: float) -> KernelMatrix:
    """Assemble kernel weights and exterior tail coefficients.

    On a uniform grid W_ij depends only on |i - j|, so the matrix is built
    from a single row of closed-form cell integrals and is exactly symmetric.
    """
    s = float(s)
    m = float(m)
    if not 0.0 < s < 1.0:
        raise ValueError("order s must lie in (0, 1)")
    if m <= 1.0:
        raise ValueError("exponent m must exceed 1")
    sm = s * m
    n, h = grid.n, grid.h
    k = np.arange(1, n, dtype=float)
    band = ((k - 0.5) ** -sm - (k + 0.5) ** -sm) * h**-sm / sm
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    W = np.zeros((n, n))
    if n > 1:
        off = idx > 0
        W[off] = band[idx[off] - 1]
    left = grid.nodes - grid.x_lo
    right = grid.x_hi - grid.nodes
    tau = (left**-sm + right**-sm) / sm
    W.flags.writeable = False
    tau.flags.writeable = False
    return KernelMatrix(grid=grid, s=s, m=m, sm=sm, W=W, tau=tau)


def apply_operator(K: KernelMatrix, u: np.ndarray) -> np.ndarray:
    """Apply the discrete operator to a node vector."""
    u = _as_node_vector(K, u)
    return backend.apply_phi(K.W, K.tau, u, K.m)


def energy(K: KernelMatrix, u: np.ndarray) -> float:
    """Variational energy whose gradient is h * apply_operator(K, u).

    E(u) = (h/m) [ sum_{i<j} W_ij |u_i - u_j|^m + sum_i tau_i |u_i|^m ].
    """
    u = _as_node_vector(K, u)
    return K.grid.h / K.m * backend.energy_terms(K.W, K.tau, u, K.m)


def newton_matrix(K: KernelMatrix, u: np.ndarray, eps: float) -> np.ndarray:
    """Regularized Jacobian of apply_operator at u (symmetric positive definite).

    eps regularizes the weight |t|^(m-2) as (t^2 + eps^2)^((m-2)/2); for m = 2
    the result is the exact (constant) operator matrix.
    """
    u = _as_node_vector(K, u)
    return backend.newton_matrix(K.W, K.tau, u, K.m, float(eps))


def _as_node_vector(K: KernelMatrix, u: np.ndarray) -> np.ndarray:
    u = np.ascontiguousarray(u, dtype=float)
    if u.shape != (K.grid.n,):
        raise ValueError(f"expected node vector of length {K.grid.n}, "
                         f"got shape {u.shape}")
    return u
