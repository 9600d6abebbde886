"""Siegmund duality on totally ordered finite state spaces.

The duality function is the order indicator D_s(x,y) = 1{x >= y}; the dual of
a generator L_hat is built entrywise from

    L(y,x) = sum_{x'>=y} [L_hat(x,x') - L_hat(x-1,x')],   L_hat(row 0) := 0,

(1-indexed formula; arrays here are 0-based).  The dual is a sub-generator
exactly when L_hat generates a monotone chain, which this module also checks
directly via the cumulative-rate condition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .core import MatrixKind, RateMatrix, classify_matrix
from .errors import AlreadyConservativeError, NotBiorthogonalError, ShapeMismatchError
from .linalg import max_abs

__all__ = [
    "SiegmundPair",
    "siegmund_matrix",
    "siegmund_dual",
    "check_monotone",
    "cumulative_transform",
    "reconstruct_siegmund",
    "extend_with_cemetery",
]


@dataclass(frozen=True)
class SiegmundPair:
    """A generator and its Siegmund dual, with classification and residual.

    The residual is max-abs of L_hat D_s - D_s L^T; `monotone` records the
    cumulative-rate condition on L_hat, which holds iff `l` is a
    (sub-)generator.
    """

    lhat: RateMatrix
    l: RateMatrix
    n: int
    monotone: bool
    residual: float


def siegmund_matrix(n: int) -> np.ndarray:
    """Order indicator matrix, entry (x,y) = 1 iff x >= y."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.tril(np.ones((n, n)))


def _cumulative_rate_sums(lhat: np.ndarray) -> np.ndarray:
    """S[y, x] = sum_{x'>=y} lhat[x, x'] - lhat[x-1, x'] (row -1 treated as zero)."""
    n = lhat.shape[0]
    padded = np.vstack([np.zeros((1, n)), lhat])
    diff = padded[1:] - padded[:-1]  # diff[x] = lhat[x] - lhat[x-1]
    tails = np.cumsum(diff[:, ::-1], axis=1)[:, ::-1]  # tails[x, y] = sum_{x'>=y} diff[x, x']
    return tails.T


def siegmund_dual(lhat: RateMatrix, tol: float = DEFAULTS.row) -> SiegmundPair:
    """Build the Siegmund dual of a generator on the ordered space {0..n-1}.

    The construction is total: validity of the dual as a (sub-)generator is
    reported through its `kind`, never enforced.
    """
    if lhat.kind is not MatrixKind.GENERATOR:
        raise ValueError("siegmund_dual requires a generator")
    entries = np.asarray(lhat.entries)
    dual = _cumulative_rate_sums(entries)
    kind = classify_matrix(dual, tol)
    l = RateMatrix.from_entries(dual, kind=None if kind is MatrixKind.INVALID else kind, row_tol=tol)
    ds = siegmund_matrix(lhat.n)
    res = max_abs(entries @ ds - ds @ dual.T)
    return SiegmundPair(lhat=lhat, l=l, n=lhat.n, monotone=check_monotone(lhat, tol), residual=res)


def check_monotone(lhat: RateMatrix, tol: float = DEFAULTS.row) -> bool:
    """Cumulative-rate monotonicity: sum_{x'>=y} [L(x,x') - L(x-1,x')] >= 0 for x != y."""
    sums = _cumulative_rate_sums(np.asarray(lhat.entries))
    off = sums.copy()
    np.fill_diagonal(off, 0.0)
    return bool(off.min(initial=0.0) >= -tol)


def cumulative_transform(w: np.ndarray) -> np.ndarray:
    """Tail sums u(x) = sum_{y >= x} w(y).

    Maps k-th order generalized eigenfunctions of L_hat^T to ones of the
    Siegmund dual L, eigenvalue by eigenvalue.
    """
    w = np.asarray(w)
    return np.cumsum(w[::-1])[::-1]


def reconstruct_siegmund(
    uhats: np.ndarray,
    us: np.ndarray,
    tol: float = DEFAULTS.residual,
    validate: bool = True,
) -> np.ndarray:
    """Assemble sum_i uhat_i(x) u_i(y) from eigenfunction families (columns).

    The u_i must come from cumulative_transform of a family w_i that is
    bi-orthogonal to the uhat_i under counting measure; with `validate` the
    w_i are recovered by differencing and the pairing checked
    (NotBiorthogonalError on failure).  Under the preconditions the result
    equals siegmund_matrix(n).
    """
    uhats = np.atleast_2d(np.asarray(uhats, dtype=float))
    us = np.atleast_2d(np.asarray(us, dtype=float))
    if uhats.shape != us.shape or uhats.shape[0] != uhats.shape[1]:
        raise ShapeMismatchError("expected two square eigenfunction families of equal shape")
    if validate:
        # w_i(y) = u_i(y) - u_i(y+1) inverts the tail-sum transform
        w = us - np.vstack([us[1:], np.zeros((1, us.shape[1]))])
        gram = w.T @ uhats
        defect = max_abs(gram - np.eye(us.shape[1]))
        if defect > max(tol, 1e-8):
            raise NotBiorthogonalError(f"bi-orthogonality defect {defect:.3e}")
    return uhats @ us.T


def extend_with_cemetery(l: RateMatrix, allow_conservative: bool = False, tol: float = DEFAULTS.row) -> RateMatrix:
    """Close a sub-generator into a generator by routing leak rates to a new absorbing state.

    The new state (index n) is absorbing; row x gains the entry -rowsum(x).
    Raises AlreadyConservativeError when every row already sums to zero
    (the extension would only add an isolated absorbing state) unless
    `allow_conservative` is set.
    """
    if l.kind not in (MatrixKind.SUB_GENERATOR, MatrixKind.GENERATOR):
        raise ValueError("extend_with_cemetery requires a (sub-)generator")
    entries = np.asarray(l.entries)
    leaks = -entries.sum(axis=1)
    leaks[np.abs(leaks) <= tol] = 0.0
    if not np.any(leaks > 0):
        if not allow_conservative:
            raise AlreadyConservativeError("row sums already vanish; extension is a no-op")
    out = np.zeros((l.n + 1, l.n + 1))
    out[: l.n, : l.n] = entries
    out[: l.n, l.n] = leaks
    return RateMatrix.from_entries(out, kind=MatrixKind.GENERATOR, row_tol=max(tol, 1e-9))
