"""Foundational types and checks for finite-state Markov generators.

Conventions: a generator L has L(x,y) >= 0 for x != y and zero row sums; a
sub-generator relaxes the row sums to <= 0 (mass may leave the state space).
States are indexed 0..n-1 throughout the package; formulas quoted from the
1-indexed literature are translated accordingly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from .config import DEFAULTS
from .errors import NoPositiveSolutionError, NotIrreducibleError, ShapeMismatchError
from .linalg import max_abs


class MatrixKind(enum.Enum):
    GENERATOR = "generator"
    SUB_GENERATOR = "sub-generator"
    RAW = "raw"
    INVALID = "invalid"


@dataclass(frozen=True)
class StateSpace:
    """Finite state space of size n with optional distinct labels."""

    n: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"state space size must be >= 1, got {self.n}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.n:
                raise ValueError("labels length does not match state space size")
            if len(set(self.labels)) != self.n:
                raise ValueError("labels must be distinct")


def _frozen_array(entries, dtype=float) -> np.ndarray:
    arr = np.array(entries, dtype=dtype)
    arr.setflags(write=False)
    return arr


def classify_matrix(entries, row_tol: float = DEFAULTS.row) -> MatrixKind:
    """Classify a square matrix as GENERATOR, SUB_GENERATOR or INVALID.

    Off-diagonal entries must be >= -row_tol for either class; row sums must
    vanish within row_tol for a generator and be <= row_tol for a sub-generator.
    """
    m = np.asarray(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeMismatchError(f"expected a square matrix, got shape {m.shape}")
    off = m - np.diag(np.diag(m))
    if off.size and off.min(initial=0.0) < -row_tol:
        return MatrixKind.INVALID
    row_sums = m.sum(axis=1)
    if np.all(np.abs(row_sums) <= row_tol):
        return MatrixKind.GENERATOR
    if np.all(row_sums <= row_tol):
        return MatrixKind.SUB_GENERATOR
    return MatrixKind.INVALID


@dataclass(frozen=True)
class RateMatrix:
    """Square rate matrix over an indexed state space.

    kind GENERATOR / SUB_GENERATOR certify the sign and row-sum constraints;
    RAW carries no constraint and is used for adjoints and intermediates.
    """

    space: StateSpace
    entries: np.ndarray
    kind: MatrixKind

    def __post_init__(self):
        entries = _frozen_array(self.entries)
        if entries.ndim != 2 or entries.shape != (self.space.n, self.space.n):
            raise ShapeMismatchError(
                f"entries shape {entries.shape} does not match state space size {self.space.n}"
            )
        if self.kind is MatrixKind.INVALID:
            raise ValueError("a RateMatrix cannot be constructed with kind INVALID; use RAW")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_entries(
        cls,
        entries,
        kind: MatrixKind | None = None,
        labels: Sequence[str] | None = None,
        row_tol: float = DEFAULTS.row,
    ) -> "RateMatrix":
        """Build a RateMatrix, auto-classifying when `kind` is not given.

        An explicit GENERATOR/SUB_GENERATOR kind is validated against the
        entries; unclassifiable matrices fall back to RAW when kind is None.
        """
        arr = np.array(entries, dtype=float)
        found = classify_matrix(arr, row_tol)
        if kind is None:
            kind = found if found is not MatrixKind.INVALID else MatrixKind.RAW
        elif kind is MatrixKind.GENERATOR and found is not MatrixKind.GENERATOR:
            raise ValueError(f"matrix classifies as {found.value}, not generator")
        elif kind is MatrixKind.SUB_GENERATOR and found not in (
            MatrixKind.GENERATOR,
            MatrixKind.SUB_GENERATOR,
        ):
            raise ValueError(f"matrix classifies as {found.value}, not sub-generator")
        space = StateSpace(arr.shape[0], tuple(labels) if labels is not None else None)
        return cls(space, arr, kind)

    @property
    def n(self) -> int:
        return self.space.n


def generator(entries, labels: Sequence[str] | None = None, row_tol: float = DEFAULTS.row) -> RateMatrix:
    """Strict constructor: raises if `entries` is not a generator."""
    return RateMatrix.from_entries(entries, kind=MatrixKind.GENERATOR, labels=labels, row_tol=row_tol)


@dataclass(frozen=True)
class Measure:
    """Strictly positive weight vector over a state space."""

    space: StateSpace
    weights: np.ndarray
    normalized: bool = field(default=False)

    def __post_init__(self):
        w = _frozen_array(self.weights)
        if w.ndim != 1 or w.shape[0] != self.space.n:
            raise ShapeMismatchError("weights length does not match state space size")
        if np.any(w <= 0):
            raise ValueError("measure weights must be strictly positive")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "normalized", bool(abs(w.sum() - 1.0) <= 1e-12))

    @classmethod
    def from_weights(cls, weights, labels: Sequence[str] | None = None) -> "Measure":
        w = np.asarray(weights, dtype=float)
        return cls(StateSpace(w.shape[0], tuple(labels) if labels is not None else None), w)


def is_irreducible(l: RateMatrix, row_tol: float = DEFAULTS.row) -> bool:
    """Strong connectivity of the digraph with edges where the rate exceeds row_tol."""
    adj = (np.asarray(l.entries) > row_tol).astype(np.int8)
    np.fill_diagonal(adj, 0)
    ncomp, _ = scipy.sparse.csgraph.connected_components(
        scipy.sparse.csr_matrix(adj), directed=True, connection="strong"
    )
    return ncomp == 1


def stationary_measure(l: RateMatrix, tol: float = DEFAULTS.residual) -> Measure:
    """Unique stationary measure mu > 0 with mu^T L = 0, normalized to sum 1.

    The kernel vector is taken from a rank-revealing SVD of L^T and
    sign-normalized by its largest-magnitude entry, so the output is
    deterministic.
    """
    if l.kind is not MatrixKind.GENERATOR:
        raise ValueError("stationary_measure requires a generator")
    if not is_irreducible(l):
        raise NotIrreducibleError("rate digraph is not strongly connected")
    m = np.asarray(l.entries)
    _, _, vh = np.linalg.svd(m.T)
    mu = vh[-1].real
    mu = mu * np.sign(mu[np.argmax(np.abs(mu))])
    if np.any(mu <= 0):
        raise NoPositiveSolutionError("kernel vector has a non-positive entry")
    mu = mu / mu.sum()
    if max_abs(mu @ m) > tol:
        raise NoPositiveSolutionError(f"stationary residual {max_abs(mu @ m):.3e} exceeds {tol:.3e}")
    return Measure(l.space, mu)


def check_detailed_balance(l: RateMatrix, mu: Measure, tol: float = DEFAULTS.residual) -> bool:
    """True iff mu(x) L(x,y) == mu(y) L(y,x) for all x, y, within tol."""
    if mu.space.n != l.n:
        raise ShapeMismatchError("measure and matrix sizes differ")
    w = np.asarray(mu.weights)
    flux = w[:, None] * np.asarray(l.entries)
    return max_abs(flux - flux.T) <= tol


def adjoint(l: RateMatrix, mu: Measure) -> RateMatrix:
    """Adjoint of L in L^2(mu): entries mu(y) L(y,x) / mu(x).

    An involution; when mu is stationary for a generator L the result
    classifies as a generator again.
    """
    if mu.space.n != l.n:
        raise ShapeMismatchError("measure and matrix sizes differ")
    w = np.asarray(mu.weights)
    entries = (np.asarray(l.entries) * w[:, None]).T / w[:, None]
    return RateMatrix.from_entries(entries, labels=l.space.labels)
