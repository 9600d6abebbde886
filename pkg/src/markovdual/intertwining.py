"""Intertwining operators between generators and duality transport through them.

An operator Lam mapping functions on the space of L to functions on the space
of Ltilde (matrix shape ntilde x n) intertwines the two when
Ltilde @ Lam == Lam @ L; a duality for (Lhat, L) then pushes to a duality for
(Lhat, Ltilde) by applying Lam to the primal variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULTS
from .core import RateMatrix, StateSpace
from .duality import DualityFunction, make_duality, residual as duality_residual
from .errors import PreconditionFailedError, ShapeMismatchError
from .linalg import max_abs

__all__ = [
    "IntertwiningOperator",
    "intertwining_residual",
    "push_duality",
    "push_duality_left",
    "lumping_operator",
    "inverse_intertwiner",
]


@dataclass(frozen=True)
class IntertwiningOperator:
    """Rectangular operator Lambda between two state spaces.

    from_space is the space of L (size n), to_space the space of Ltilde
    (size ntilde); the matrix is ntilde x n.  `stochastic` is derived:
    nonnegative rows summing to one.
    """

    from_space: StateSpace
    to_space: StateSpace
    matrix: np.ndarray
    stochastic: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (self.to_space.n, self.from_space.n):
            raise ShapeMismatchError(
                f"operator shape {m.shape} does not match spaces "
                f"({self.to_space.n}, {self.from_space.n})"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        is_stochastic = bool(
            m.min(initial=0.0) >= -1e-12 and max_abs(m.sum(axis=1) - 1.0) <= 1e-12
        )
        object.__setattr__(self, "stochastic", is_stochastic)

    @classmethod
    def from_matrix(cls, matrix) -> "IntertwiningOperator":
        m = np.asarray(matrix, dtype=float)
        return cls(StateSpace(m.shape[1]), StateSpace(m.shape[0]), m)


def intertwining_residual(ltilde: RateMatrix, l: RateMatrix, op: IntertwiningOperator) -> float:
    """Max-abs entry of Ltilde Lambda - Lambda L."""
    lam = np.asarray(op.matrix)
    if lam.shape != (ltilde.n, l.n):
        raise ShapeMismatchError(
            f"operator shape {lam.shape}, expected ({ltilde.n}, {l.n})"
        )
    return max_abs(np.asarray(ltilde.entries) @ lam - lam @ np.asarray(l.entries))


def push_duality(
    d: DualityFunction,
    op: IntertwiningOperator,
    ltilde: RateMatrix,
    l: RateMatrix,
    lhat: RateMatrix,
    tol: float = DEFAULTS.residual,
) -> DualityFunction:
    """Push a duality for (lhat, l) through Lambda to a duality for (lhat, ltilde).

    (Lambda_right D)(xhat, xtilde) = sum_x Lambda(xtilde, x) D(xhat, x), i.e.
    D @ Lambda^T.  The intertwining and duality preconditions are validated;
    the theorem's conclusion is false without them.
    """
    inter_res = intertwining_residual(ltilde, l, op)
    if inter_res > tol:
        raise PreconditionFailedError(f"intertwining residual {inter_res:.3e} exceeds {tol:.3e}")
    dual_res = duality_residual(lhat, l, d.matrix)
    if dual_res > tol:
        raise PreconditionFailedError(f"duality residual {dual_res:.3e} exceeds {tol:.3e}")
    pushed = np.asarray(d.matrix) @ np.asarray(op.matrix).T
    return make_duality(lhat, ltilde, pushed)


def push_duality_left(
    d: DualityFunction,
    op: IntertwiningOperator,
    ltilde: RateMatrix,
    lhat: RateMatrix,
    l: RateMatrix,
    tol: float = DEFAULTS.residual,
) -> DualityFunction:
    """Companion of push_duality acting on the dual variable.

    With Lambda intertwining ltilde and lhat (dual side), a duality for
    (lhat, l) maps to Lambda @ D, a duality for (ltilde, l).
    """
    inter_res = intertwining_residual(ltilde, lhat, op)
    if inter_res > tol:
        raise PreconditionFailedError(f"intertwining residual {inter_res:.3e} exceeds {tol:.3e}")
    dual_res = duality_residual(lhat, l, d.matrix)
    if dual_res > tol:
        raise PreconditionFailedError(f"duality residual {dual_res:.3e} exceeds {tol:.3e}")
    pushed = np.asarray(op.matrix) @ np.asarray(d.matrix)
    return make_duality(ltilde, l, pushed)


def lumping_operator(pi: Sequence[int], small: StateSpace | int) -> IntertwiningOperator:
    """Deterministic kernel induced by a projection map pi: big space -> small space.

    Row xtilde carries a single 1 in column pi(xtilde); always stochastic.
    """
    small_space = small if isinstance(small, StateSpace) else StateSpace(int(small))
    pi = list(pi)
    big_space = StateSpace(len(pi))
    m = np.zeros((big_space.n, small_space.n))
    for row, target in enumerate(pi):
        if not 0 <= target < small_space.n:
            raise ValueError(f"projection value {target} outside the small space")
        m[row, target] = 1.0
    return IntertwiningOperator(small_space, big_space, m)


def inverse_intertwiner(sep_space, ladder_space=None) -> IntertwiningOperator:
    """Stochastic inverse of the ladder lumping for exclusion processes.

    Row eta spreads uniform weight 1 / prod_x C(gamma, eta(x)) over the ladder
    configurations compatible with eta (those projecting to it), so row sums
    are exactly one.  Intertwines the SEP generator with the ladder generator:
    L_sep @ Lam == Lam @ L_ladder for matching rates.
    """
    from .models import ConfigurationSpace, SpaceKind  # deferred: models builds on duality

    if not isinstance(sep_space, ConfigurationSpace) or sep_space.kind is not SpaceKind.SEP:
        raise ValueError("inverse_intertwiner expects a SEP configuration space")
    if ladder_space is None:
        ladder_space = ConfigurationSpace.ladder(sep_space.vertices, sep_space.gamma)
    if ladder_space.kind is not SpaceKind.LADDER or ladder_space.gamma != sep_space.gamma or (
        ladder_space.vertices != sep_space.vertices
    ):
        raise ValueError("ladder space does not match the SEP space")
    gamma = sep_space.gamma
    m = np.zeros((sep_space.size, ladder_space.size))
    weights = {
        eta: 1.0 / math.prod(math.comb(gamma, k) for k in eta) for eta in sep_space.configs
    }
    for col, tilde in enumerate(ladder_space.configs):
        eta = ladder_space.occupancy(tilde)
        m[sep_space.index(eta), col] = weights[eta]
    return IntertwiningOperator(
        ladder_space.state_space(), sep_space.state_space(), m
    )
