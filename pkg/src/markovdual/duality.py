"""Duality functions for pairs of rate matrices: L_hat D = D L^T.

The module offers two independent routes to the same objects: the full
solution space obtained from the kernel of the Kronecker-structured linear map
D -> L_hat D - D L^T (robust, oracle-grade), and constructors assembling D
from eigenfunctions, conjugate pairs, Jordan chains or whole spectral
decompositions (the structured route).  Residuals are always the max-abs
entry of L_hat D - D L^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .core import Measure, RateMatrix, StateSpace
from .errors import (
    ComplexResidueError,
    NotChainError,
    NotConjugateClosedError,
    NotEigenpairError,
    NotOrthonormalError,
    ShapeMismatchError,
)
from .linalg import max_abs, numerical_rank, rank_threshold
from .spectral import SpectralData, Witness, reversible_eigenbasis

__all__ = [
    "DualityFunction",
    "DualitySpace",
    "residual",
    "make_duality",
    "solve_duality_space",
    "max_duality_rank",
    "cheap_duality",
    "tensor_duality",
    "complex_pair_duality",
    "chain_duality",
    "orthogonal_selfduality",
    "compose_dualities",
    "factor_check",
    "build_from_spectra",
]


@dataclass(frozen=True)
class DualityFunction:
    """A duality matrix D indexed by (dual state, primal state).

    residual is recorded against the generator pair the matrix was built
    for; rank is the numerical rank at the default singular-value threshold.
    """

    dual_space: StateSpace
    primal_space: StateSpace
    matrix: np.ndarray
    residual: float
    rank: int

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (self.dual_space.n, self.primal_space.n):
            raise ShapeMismatchError(
                f"duality matrix shape {m.shape} does not match spaces "
                f"({self.dual_space.n}, {self.primal_space.n})"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class DualitySpace:
    """Basis of the linear space {D : L_hat D = D L^T}."""

    dual_space: StateSpace
    primal_space: StateSpace
    basis: tuple[np.ndarray, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def residual(lhat: RateMatrix, l: RateMatrix, d: np.ndarray) -> float:
    """Max-abs entry of L_hat D - D L^T."""
    d = np.asarray(d)
    if d.shape != (lhat.n, l.n):
        raise ShapeMismatchError(f"D shape {d.shape}, expected ({lhat.n}, {l.n})")
    return max_abs(np.asarray(lhat.entries) @ d - d @ np.asarray(l.entries).T)


def make_duality(lhat: RateMatrix, l: RateMatrix, d: np.ndarray, rank_rtol: float | None = None) -> DualityFunction:
    """Wrap a matrix as a DualityFunction, recording residual and rank."""
    d = np.asarray(d, dtype=float)
    return DualityFunction(
        dual_space=lhat.space,
        primal_space=l.space,
        matrix=d,
        residual=residual(lhat, l, d),
        rank=numerical_rank(d, rank_rtol),
    )


def solve_duality_space(
    lhat: RateMatrix, l: RateMatrix, rank_rtol: float | None = None
) -> DualitySpace:
    """Kernel of D -> L_hat D - D L^T via the Kronecker matrix I (x) L_hat - L (x) I.

    Column-stacked vec convention; acts as the brute-force oracle against
    which the spectral constructions are cross-validated.
    """
    nh, n = lhat.n, l.n
    k = np.kron(np.eye(n), np.asarray(lhat.entries)) - np.kron(np.asarray(l.entries), np.eye(nh))
    _, s, vh = np.linalg.svd(k)
    cutoff = rank_threshold(s, k.shape, rank_rtol)
    dim = int(np.sum(s <= cutoff))
    basis = tuple(vh[len(s) - 1 - i].reshape((n, nh)).T.copy() for i in range(dim))
    return DualitySpace(lhat.space, l.space, basis)


def max_duality_rank(
    space: DualitySpace, samples: int = 8, seed: int = 0, rank_rtol: float = 1e-8
) -> int:
    """Max numerical rank over the space, via random basis combinations.

    Generic combinations attain the maximum with probability one; the fixed
    seed keeps results deterministic.  The rank cutoff is looser than the
    plain SVD default because basis elements inherit O(eps * ||K||) noise
    from the kernel extraction.
    """
    if space.dimension == 0:
        return 0
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(samples):
        coeffs = rng.standard_normal(space.dimension)
        combo = sum(c * b for c, b in zip(coeffs, space.basis))
        best = max(best, numerical_rank(combo, rank_rtol))
    return best


def cheap_duality(mu: Measure) -> DualityFunction:
    """Diagonal duality D(x,y) = delta_xy / mu(y).

    Exact duality between adjoint(L, mu) and L for every L, and a self-duality
    whenever detailed balance holds, so the residual is recorded as zero.
    """
    d = np.diag(1.0 / np.asarray(mu.weights))
    return DualityFunction(mu.space, mu.space, d, residual=0.0, rank=mu.space.n)


def _validate_eigenpair(l: RateMatrix, u: np.ndarray, tol: float) -> complex:
    """Rayleigh estimate of the eigenvalue, validated to ||Lu - lam u|| <= tol."""
    u = np.asarray(u)
    norm2 = np.vdot(u, u)
    if norm2 == 0:
        raise NotEigenpairError("zero vector is not an eigenfunction")
    lam = complex(np.vdot(u, np.asarray(l.entries) @ u) / norm2)
    defect = max_abs(np.asarray(l.entries) @ u - lam * u)
    if defect > tol * max(1.0, max_abs(u)):
        raise NotEigenpairError(f"eigenpair defect {defect:.3e} exceeds {tol:.3e}")
    return lam


def tensor_duality(
    lhat: RateMatrix,
    l: RateMatrix,
    uhats: np.ndarray,
    us: np.ndarray,
    coefficients,
    tol: float = DEFAULTS.residual,
) -> DualityFunction:
    """D(xh, x) = sum_i a_i uhat_i(xh) u_i(x) from shared real eigenpairs.

    uhats/us hold the eigenfunctions as columns; column i of both must belong
    to a common eigenvalue (validated via Rayleigh quotients).
    """
    uhats = np.atleast_2d(np.asarray(uhats, dtype=float))
    us = np.atleast_2d(np.asarray(us, dtype=float))
    a = np.asarray(coefficients, dtype=float)
    if uhats.shape != (lhat.n, a.size) or us.shape != (l.n, a.size):
        raise ShapeMismatchError("eigenfunction columns must match spaces and coefficient count")
    for i in range(a.size):
        lam_hat = _validate_eigenpair(lhat, uhats[:, i], tol)
        lam = _validate_eigenpair(l, us[:, i], tol)
        if abs(lam_hat - lam) > tol * max(1.0, abs(lam)):
            raise NotEigenpairError(
                f"column {i}: eigenvalues {lam_hat:.6g} and {lam:.6g} do not match"
            )
    d = (uhats * a) @ us.T
    return make_duality(lhat, l, d)


def complex_pair_duality(
    lhat: RateMatrix,
    l: RateMatrix,
    uhat: np.ndarray,
    u: np.ndarray,
    a: float,
    tol: float = DEFAULTS.residual,
) -> DualityFunction:
    """Real duality a uhat u + a uhat* u* = 2a Re(uhat (x) u) from a conjugate eigenpair."""
    uhat = np.asarray(uhat, dtype=complex)
    u = np.asarray(u, dtype=complex)
    lam_hat = _validate_eigenpair(lhat, uhat, tol)
    lam = _validate_eigenpair(l, u, tol)
    if abs(lam_hat - lam) > tol * max(1.0, abs(lam)):
        raise NotEigenpairError(f"eigenvalues {lam_hat:.6g} and {lam:.6g} do not match")
    if abs(lam.imag) <= tol:
        raise NotConjugateClosedError("eigenvalue is real; use tensor_duality instead")
    d = 2.0 * a * np.real(np.outer(uhat, u))
    return make_duality(lhat, l, d)


def _validate_chain(l: RateMatrix, chain: np.ndarray, tol: float) -> complex:
    """Validate L u^(k) = lam u^(k) + u^(k-1); returns the shared eigenvalue."""
    try:
        lam = _validate_eigenpair(l, chain[:, 0], tol)
    except NotEigenpairError as exc:
        raise NotChainError(f"first chain element is not an eigenfunction: {exc}") from exc
    m = np.asarray(l.entries)
    scale = max(1.0, max_abs(chain))
    for k in range(1, chain.shape[1]):
        defect = max_abs(m @ chain[:, k] - lam * chain[:, k] - chain[:, k - 1])
        if defect > tol * scale:
            raise NotChainError(f"chain defect {defect:.3e} at order {k + 1}")
    return lam


def chain_duality(
    lhat: RateMatrix,
    l: RateMatrix,
    uhat_chain: np.ndarray,
    u_chain: np.ndarray,
    tol: float = DEFAULTS.residual,
) -> DualityFunction:
    """Order-reversed chain pairing D = sum_k uhat^(k) (x) u^(m+1-k).

    Both arguments hold Jordan chains as columns (eigenvector first) for a
    common eigenvalue; the order reversal is what makes the cross terms cancel.
    """
    uhat_chain = np.atleast_2d(np.asarray(uhat_chain, dtype=float))
    u_chain = np.atleast_2d(np.asarray(u_chain, dtype=float))
    if uhat_chain.ndim != 2 or u_chain.ndim != 2 or uhat_chain.shape[1] != u_chain.shape[1]:
        raise ShapeMismatchError("chains must have the same length")
    lam_hat = _validate_chain(lhat, uhat_chain, tol)
    lam = _validate_chain(l, u_chain, tol)
    if abs(lam_hat - lam) > tol * max(1.0, abs(lam)):
        raise NotChainError(f"chain eigenvalues {lam_hat:.6g} and {lam:.6g} do not match")
    m = uhat_chain.shape[1]
    d = sum(np.outer(uhat_chain[:, k], u_chain[:, m - 1 - k]) for k in range(m))
    return make_duality(lhat, l, d)


def orthogonal_selfduality(
    data: SpectralData,
    mu: Measure,
    tilde_us: np.ndarray,
    tol: float = DEFAULTS.residual,
) -> DualityFunction:
    """Orthogonal self-duality D = sum_i tilde_u_i (x) u_i for a reversible generator.

    u_i is the mu-orthonormal eigenbasis derived from `data.source`; tilde_us
    (columns) must be mu-orthonormal eigenfunctions for the same eigenvalues,
    in the same descending order.  The result satisfies row-orthogonality
    <D(x,.), D(x',.)>_mu = delta_xx' / mu(x').
    """
    l = data.source
    lams, u = reversible_eigenbasis(l, mu)
    tilde = np.atleast_2d(np.asarray(tilde_us, dtype=float))
    if tilde.shape != (l.n, l.n):
        raise ShapeMismatchError("tilde_us must be a full square eigenbasis")
    w = np.asarray(mu.weights)
    gram = (tilde.T * w) @ tilde
    if max_abs(gram - np.eye(l.n)) > max(tol, 1e-8):
        raise NotOrthonormalError("tilde_us is not orthonormal in L^2(mu)")
    for i in range(l.n):
        lam = _validate_eigenpair(l, tilde[:, i], max(tol, 1e-8))
        if abs(lam - lams[i]) > max(tol, 1e-8) * max(1.0, abs(lams[i])):
            raise NotEigenpairError(
                f"column {i}: tilde eigenvalue {lam:.6g} differs from {lams[i]:.6g}"
            )
    d = tilde @ u.T
    return make_duality(l, l, d)


def compose_dualities(
    d1: DualityFunction, d2: DualityFunction, mu: Measure, lhat: RateMatrix
) -> DualityFunction:
    """Inner product of dualities: D''(x, x') = sum_y D1(x,y) D2(x',y) mu(y).

    Both inputs must share the primal space and its reversible reference
    measure mu; the result is recorded as a self-duality for `lhat`.
    """
    if d1.primal_space.n != d2.primal_space.n or d1.primal_space.n != mu.space.n:
        raise ShapeMismatchError("composed dualities must share the primal space and measure")
    if d1.dual_space.n != lhat.n or d2.dual_space.n != lhat.n:
        raise ShapeMismatchError("dual spaces must match the supplied generator")
    w = np.asarray(mu.weights)
    d = (np.asarray(d1.matrix) * w) @ np.asarray(d2.matrix).T
    return make_duality(lhat, lhat, d)


def factor_check(
    d: DualityFunction, lhat: RateMatrix, l: RateMatrix, tol: float = DEFAULTS.residual
):
    """Extract (f, g, lam) from a rank-1 duality D = f (x) g, or None.

    Uses the leading singular triple; validates that f and g are
    eigenfunctions of lhat and l for a common eigenvalue.  Total function:
    returns None when D is not numerically rank 1 or validation fails.
    """
    m = np.asarray(d.matrix)
    u, s, vh = np.linalg.svd(m)
    if int(np.sum(s > rank_threshold(s, m.shape))) != 1:
        return None
    f = u[:, 0] * s[0]
    g = vh[0]
    try:
        lam_hat = _validate_eigenpair(lhat, f, tol)
        lam = _validate_eigenpair(l, g, tol)
    except NotEigenpairError:
        return None
    if abs(lam_hat - lam) > tol * max(1.0, abs(lam)):
        return None
    return f, g, lam_hat


def build_from_spectra(
    hat_data: SpectralData,
    primal_data: SpectralData,
    witness: Witness,
    coefficients,
    tol: float = DEFAULTS.residual,
) -> DualityFunction:
    """Duality D = Uhat (sum_u c_u T_u) B_J U^T from matched Jordan blocks.

    Each matched block pair contributes c_u * sum_{i=1..k} uhat^(i) (x) u^(k+1-i)
    built from the first k chain columns on both sides.  Coefficients of
    conjugate block pairs must be tied (equal) so the combined matrix is real;
    otherwise ComplexResidueError is raised.
    """
    a = np.asarray(coefficients, dtype=float)
    if a.size != len(witness.matched):
        raise ShapeMismatchError(
            f"need {len(witness.matched)} coefficients, got {a.size}"
        )
    d = np.zeros((hat_data.n, primal_data.n), dtype=complex)
    for c, unit in zip(a, witness.matched):
        if c == 0.0:
            continue
        k = unit.size
        uh = hat_data.U[:, unit.hat_offset : unit.hat_offset + k]
        up = primal_data.U[:, unit.offset : unit.offset + k]
        for i in range(k):
            d += c * np.outer(uh[:, i], up[:, k - 1 - i])
    imag = max_abs(d.imag)
    if imag > tol * max(1.0, max_abs(d.real)):
        raise ComplexResidueError(
            f"imaginary residue {imag:.3e}: conjugate blocks are not tied"
        )
    return make_duality(hat_data.source, primal_data.source, d.real)
