"""Grids, weight fields, and validated system parameters.

A grid is a uniform midpoint partition of an interval; weights are sampled
pointwise at the nodes and must be strictly positive; system parameters carry
the exponents of the coupled system together with the derived quantities used
by the curve and bound formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

#: Relative tolerance for the compatibility condition beta1*beta2 =
#: (p-1-alpha1)*(q-1-alpha2); parameters arrive as floating point.
COMPAT_RTOL = 1e-12

#: Recognized analytic weight descriptors (name -> arity).
WEIGHT_WHITELIST = {"const": 1, "affine": 2, "sin_offset": 1}


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform midpoint grid on (x_lo, x_hi) with exterior zero extension."""

    x_lo: float
    x_hi: float
    n: int
    h: float
    nodes: np.ndarray
    diam: float


def build_grid(x_lo: float, x_hi: float, n: int) -> Grid:
    """Midpoint grid with n cells tiling (x_lo, x_hi) exactly.

    Nodes sit at the cell centers x_lo + (i + 1/2) h, strictly interior.
    """
    x_lo = float(x_lo)
    x_hi = float(x_hi)
    if not (math.isfinite(x_lo) and math.isfinite(x_hi)) or x_lo >= x_hi:
        raise ValueError(f"degenerate interval ({x_lo}, {x_hi})")
    n = int(n)
    if n < 1:
        raise ValueError("node count must be >= 1")
    h = (x_hi - x_lo) / n
    nodes = x_lo + (np.arange(n) + 0.5) * h
    nodes.flags.writeable = False
    return Grid(x_lo=x_lo, x_hi=x_hi, n=n, h=h, nodes=nodes, diam=x_hi - x_lo)


@dataclass(frozen=True, eq=False)
class WeightField:
    """Per-node samples of a strictly positive weight function."""

    values: np.ndarray
    inf_value: float
    sup_value: float


def sample_weight(weight: Callable[[np.ndarray], np.ndarray] | str,
                  grid: Grid) -> WeightField:
    """Sample a weight function (callable or descriptor string) at the nodes.

    Rejects any nonpositive or non-finite sample; the discrete sup norm is the
    sample maximum.
    """
    if isinstance(weight, str):
        weight = weight_from_spec(weight)
    values = np.asarray(weight(grid.nodes), dtype=float)
    values = np.broadcast_to(values, grid.nodes.shape).copy()
    if not np.all(np.isfinite(values)):
        raise ValueError("weight produced a non-finite sample")
    if np.any(values <= 0.0):
        raise ValueError("weight samples must be strictly positive")
    values.flags.writeable = False
    return WeightField(values=values,
                       inf_value=float(values.min()),
                       sup_value=float(values.max()))


def weight_from_spec(spec: str) -> Callable[[np.ndarray], np.ndarray]:
    """Parse a whitelisted weight descriptor.

    Forms: ``const:c``, ``affine:c0,c1`` (c0 + c1*x), ``sin_offset:c``
    (c + sin(x)).
    """
    name, _, argstr = spec.partition(":")
    name = name.strip()
    if name not in WEIGHT_WHITELIST:
        raise ValueError(f"unknown weight descriptor {name!r}; "
                         f"expected one of {sorted(WEIGHT_WHITELIST)}")
    try:
        args = [float(a) for a in argstr.split(",")] if argstr.strip() else []
    except ValueError as exc:
        raise ValueError(f"bad weight arguments in {spec!r}") from exc
    if len(args) != WEIGHT_WHITELIST[name]:
        raise ValueError(f"{name} takes {WEIGHT_WHITELIST[name]} argument(s), "
                         f"got {len(args)}")
    if name == "const":
        c = args[0]
        return lambda x: np.full_like(x, c)
    if name == "affine":
        c0, c1 = args
        return lambda x: c0 + c1 * x
    c = args[0]
    return lambda x: c + np.sin(x)


@dataclass(frozen=True, eq=False)
class SystemParams:
    """Validated exponents and weights of the coupled system.

    theta = sqrt(beta1 (p-1-alpha1)) and zeta = sqrt(beta2 (q-1-alpha2)) are
    the curve exponents; omega = (p-1)/beta1 is the comparison scaling power.
    """

    p: float
    q: float
    s1: float
    s2: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    a: WeightField
    b: WeightField
    theta: float = field(init=False)
    zeta: float = field(init=False)
    omega: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "theta",
                           math.sqrt(self.beta1 * (self.p - 1 - self.alpha1)))
        object.__setattr__(self, "zeta",
                           math.sqrt(self.beta2 * (self.q - 1 - self.alpha2)))
        object.__setattr__(self, "omega", (self.p - 1) / self.beta1)

    @property
    def homogeneous(self) -> bool:
        """Whether alpha_i + beta_i = m_i - 1 holds for both equations."""
        return (abs(self.alpha1 + self.beta1 - (self.p - 1)) <= 1e-12
                and abs(self.alpha2 + self.beta2 - (self.q - 1)) <= 1e-12)


def validate_params(p: float, q: float, s1: float, s2: float,
                    alpha1: float, alpha2: float,
                    beta1: float, beta2: float,
                    a: WeightField, b: WeightField) -> SystemParams:
    """Check exponent ranges and the compatibility condition.

    Requires p, q > 1, s1, s2 in (0, 1), 0 <= alpha_i < m_i - 1, beta_i > 0
    and beta1*beta2 = (p-1-alpha1)*(q-1-alpha2) to relative tolerance 1e-12.
    """
    p, q = float(p), float(q)
    s1, s2 = float(s1), float(s2)
    alpha1, alpha2 = float(alpha1), float(alpha2)
    beta1, beta2 = float(beta1), float(beta2)
    if p <= 1.0 or q <= 1.0:
        raise ValueError("exponents p, q must exceed 1")
    if not (0.0 < s1 < 1.0 and 0.0 < s2 < 1.0):
        raise ValueError("orders s1, s2 must lie in (0, 1)")
    if alpha1 < 0.0 or alpha2 < 0.0:
        raise ValueError("alpha1, alpha2 must be nonnegative")
    if beta1 <= 0.0 or beta2 <= 0.0:
        raise ValueError("beta1, beta2 must be positive")
    if alpha1 >= p - 1.0:
        raise ValueError("alpha1 must satisfy alpha1 < p - 1")
    if alpha2 >= q - 1.0:
        raise ValueError("alpha2 must satisfy alpha2 < q - 1")
    lhs = beta1 * beta2
    rhs = (p - 1.0 - alpha1) * (q - 1.0 - alpha2)
    if abs(lhs - rhs) > COMPAT_RTOL * lhs:
        raise ValueError(
            f"compatibility violated: beta1*beta2 = {lhs!r} but "
            f"(p-1-alpha1)*(q-1-alpha2) = {rhs!r}")
    return SystemParams(p=p, q=q, s1=s1, s2=s2, alpha1=alpha1, alpha2=alpha2,
                        beta1=beta1, beta2=beta2, a=a, b=b)
