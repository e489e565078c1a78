"""Pure-numpy implementation of the hot operator kernels.

Import-time fallback for :mod:`fraceig._kernels_cy`; both modules expose the
same three functions with identical semantics.  All inputs are float64 arrays,
``W`` is the (n, n) cell-integrated kernel weight matrix with zero diagonal
and ``tau`` the length-n exterior tail coefficients.
"""

from __future__ import annotations

import numpy as np


def apply_phi(W, tau, u, m):
    """Nonlinear nonlocal operator: sum_j W_ij*phi_m(u_i-u_j) + tau_i*phi_m(u_i).

    phi_m(t) = |t|^(m-2) t.  The tail term encodes the zero exterior condition.
    """
    if m == 2.0:
        # phi_2 is the identity; skip the pow calls
        return W.sum(axis=1) * u - W @ u + tau * u
    d = u[:, None] - u[None, :]
    pd = np.sign(d) * np.abs(d) ** (m - 1.0)
    return (W * pd).sum(axis=1) + tau * np.sign(u) * np.abs(u) ** (m - 1.0)


def energy_terms(W, tau, u, m):
    """Raw energy sums: sum_{i<j} W_ij|u_i-u_j|^m + sum_i tau_i|u_i|^m.

    Uses the symmetry of W (uniform grids) to fold the ordered pair sum.
    """
    d = np.abs(u[:, None] - u[None, :])
    pair = 0.5 * float((W * d**m).sum())
    tail = float(tau @ np.abs(u) ** m)
    return pair + tail


def newton_matrix(W, tau, u, m, eps):
    """Regularized Jacobian of apply_phi at u.

    Off-diagonal (i, j): -(m-1) W_ij g(u_i-u_j); diagonal i:
    (m-1) [sum_j W_ij g(u_i-u_j) + tau_i g(u_i)] with
    g(t) = (t^2 + eps^2)^((m-2)/2).  Symmetric and strictly diagonally
    dominant, hence positive definite.  Exact (eps-independent) for m = 2.
    """
    n = u.shape[0]
    if m == 2.0:
        g = W.copy()
    else:
        d = u[:, None] - u[None, :]
        g = W * (d * d + eps * eps) ** ((m - 2.0) / 2.0)
    if m == 2.0:
        gt = tau.copy()
    else:
        gt = tau * (u * u + eps * eps) ** ((m - 2.0) / 2.0)
    J = -g
    J[np.arange(n), np.arange(n)] = g.sum(axis=1) + gt
    J *= m - 1.0
    return J
