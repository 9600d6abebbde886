"""Concrete processes with explicitly known spectra and duality families.

Contains the two boundary-variant symmetric random walks (closed-form
eigenfunctions), exclusion-process generators over exhaustively enumerated
configuration spaces, and the single-site self-duality tables of the
factorized SEP families, each backed by an independent brute-force evaluator.

Convention: 0^0 = 1 throughout product-form duality evaluation (required for
the indicator families to emerge from the product formula).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULTS, max_states
from .core import MatrixKind, RateMatrix, StateSpace
from .duality import DualityFunction, make_duality
from .errors import (
    DegenerateHypergeometricError,
    DomainError,
    ShapeMismatchError,
    SpaceTooLargeError,
)
from .siegmund import SiegmundPair, siegmund_dual
from .spectral import SpectralData, spectral_from_eigenbasis

__all__ = [
    "SpaceKind",
    "ConfigurationSpace",
    "SingleSiteDualityParams",
    "ReflectedAbsorbedRW",
    "BlockedAbsorbedRW",
    "rw_reflected_absorbed",
    "rw_blocked_absorbed",
    "sep_generator",
    "ladder_sep_generator",
    "ladder_projection",
    "ssep_selfduality",
    "classify_regime",
    "single_site_duality",
    "single_site_duality_bruteforce",
    "ladder_bracket_sum",
    "factorized_duality",
]


class SpaceKind(enum.Enum):
    SEP = "sep"
    LADDER = "ladder"


@dataclass(frozen=True, eq=False)
class ConfigurationSpace:
    """Exhaustively enumerated particle configurations over a vertex set.

    SEP: occupation vectors over V with entries 0..gamma, lexicographic order.
    LADDER: 0/1 vectors over V x {1..gamma}, site-major flat index x*gamma + a.
    """

    kind: SpaceKind
    vertices: tuple
    gamma: int
    configs: tuple[tuple[int, ...], ...]
    _index: dict = field(repr=False)

    @classmethod
    def sep(cls, vertices, gamma: int, cap: int | None = None) -> "ConfigurationSpace":
        vertices = cls._vertex_tuple(vertices)
        cap = cap or max_states()
        size = (gamma + 1) ** len(vertices)
        if size > cap:
            raise SpaceTooLargeError(f"SEP space size {size} exceeds cap {cap}")
        configs = tuple(itertools.product(range(gamma + 1), repeat=len(vertices)))
        return cls(SpaceKind.SEP, vertices, gamma, configs, {c: i for i, c in enumerate(configs)})

    @classmethod
    def ladder(cls, vertices, gamma: int, cap: int | None = None) -> "ConfigurationSpace":
        vertices = cls._vertex_tuple(vertices)
        cap = cap or max_states()
        size = 2 ** (gamma * len(vertices))
        if size > cap:
            raise SpaceTooLargeError(f"ladder space size {size} exceeds cap {cap}")
        configs = tuple(itertools.product((0, 1), repeat=gamma * len(vertices)))
        return cls(SpaceKind.LADDER, vertices, gamma, configs, {c: i for i, c in enumerate(configs)})

    @staticmethod
    def _vertex_tuple(vertices) -> tuple:
        if isinstance(vertices, int):
            return tuple(range(vertices))
        return tuple(vertices)

    @property
    def size(self) -> int:
        return len(self.configs)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def index(self, config) -> int:
        return self._index[tuple(config)]

    def occupancy(self, config) -> tuple[int, ...]:
        """Per-vertex particle counts of a ladder configuration (the lumping map)."""
        if self.kind is not SpaceKind.LADDER:
            raise ValueError("occupancy is defined on ladder configurations")
        g = self.gamma
        return tuple(sum(config[x * g : (x + 1) * g]) for x in range(self.n_vertices))

    def state_space(self) -> StateSpace:
        return StateSpace(self.size)


def _rate_table(p, m: int) -> np.ndarray:
    """Normalize a rate argument (callable, matrix, or scalar) to an m x m array."""
    if callable(p):
        table = np.array([[float(p(x, y)) for y in range(m)] for x in range(m)])
    elif np.isscalar(p):
        table = float(p) * (1.0 - np.eye(m))
    else:
        table = np.array(p, dtype=float)
        if table.shape != (m, m):
            raise ShapeMismatchError(f"rate table shape {table.shape}, expected ({m}, {m})")
    if np.any(table < 0):
        raise ValueError("rates must be nonnegative")
    np.fill_diagonal(table, 0.0)
    return table


def sep_generator(space: ConfigurationSpace, p=1.0) -> RateMatrix:
    """SEP(gamma) generator: particles hop x->y at rate p(x,y) eta(x) (gamma - eta(y)).

    Rows sum to zero exactly for small integer rates; the generator is
    block-diagonal across total-particle-number sectors.
    """
    if space.kind is not SpaceKind.SEP:
        raise ValueError("sep_generator expects a SEP configuration space")
    m = space.n_vertices
    rates = _rate_table(p, m)
    gamma = space.gamma
    gen = np.zeros((space.size, space.size))
    for i, eta in enumerate(space.configs):
        for x in range(m):
            for y in range(m):
                if x == y:
                    continue
                for (src, dst) in ((x, y), (y, x)):
                    rate = rates[x, y] * eta[src] * (gamma - eta[dst])
                    if rate:
                        nxt = list(eta)
                        nxt[src] -= 1
                        nxt[dst] += 1
                        gen[i, space.index(nxt)] += rate
    np.fill_diagonal(gen, gen.diagonal() - gen.sum(axis=1))
    return RateMatrix(space.state_space(), gen, MatrixKind.GENERATOR)


def ladder_sep_generator(space: ConfigurationSpace, p=1.0) -> RateMatrix:
    """gamma-ladder SEP: exclusion on V x {1..gamma} with rung-blind rates p(x,y)."""
    if space.kind is not SpaceKind.LADDER:
        raise ValueError("ladder_sep_generator expects a ladder configuration space")
    m = space.n_vertices
    rates = _rate_table(p, m)
    gamma = space.gamma
    gen = np.zeros((space.size, space.size))
    flat = lambda x, a: x * gamma + a
    for i, eta in enumerate(space.configs):
        for x in range(m):
            for y in range(m):
                if x == y or rates[x, y] == 0.0:
                    continue
                for a in range(gamma):
                    for b in range(gamma):
                        for (src, dst) in ((flat(x, a), flat(y, b)), (flat(y, b), flat(x, a))):
                            if eta[src] and not eta[dst]:
                                nxt = list(eta)
                                nxt[src], nxt[dst] = 0, 1
                                gen[i, space.index(nxt)] += rates[x, y]
    np.fill_diagonal(gen, gen.diagonal() - gen.sum(axis=1))
    return RateMatrix(space.state_space(), gen, MatrixKind.GENERATOR)


def ladder_projection(ladder_space: ConfigurationSpace, sep_space: ConfigurationSpace) -> list[int]:
    """Index map of the occupancy projection, for use with lumping_operator."""
    return [sep_space.index(ladder_space.occupancy(c)) for c in ladder_space.configs]


def _power(base: float, expo: float) -> float:
    """Real power with the 0^0 = 1 convention; raises DomainError when undefined."""
    if base == 0.0:
        if expo == 0.0:
            return 1.0
        if expo > 0.0:
            return 0.0
        raise DomainError("0 raised to a negative power")
    if base < 0.0 and expo != int(expo):
        raise DomainError(f"negative base {base} with non-integer exponent {expo}")
    return float(base) ** float(expo)


@dataclass(frozen=True)
class SingleSiteDualityParams:
    """Parameters (alpha, beta, epsilon, delta) of the product-form family at ladder width gamma."""

    alpha: float
    beta: float
    epsilon: float
    delta: float
    gamma: int

    def __post_init__(self):
        if self.gamma < 1:
            raise ValueError("gamma must be >= 1")


def ssep_selfduality(
    space: ConfigurationSpace,
    params: SingleSiteDualityParams,
    generator: RateMatrix,
    tol: float = DEFAULTS.residual,
) -> DualityFunction:
    """Product self-duality of the ladder exclusion process.

    D(xi, eta) = prod_site (alpha + beta eta_site)^(epsilon + delta xi_site),
    evaluated with 0^0 = 1.  Residual recorded against (generator, generator).
    """
    if space.kind is not SpaceKind.LADDER:
        raise ValueError("ssep_selfduality expects a ladder configuration space")
    if params.gamma != space.gamma:
        raise ValueError("params.gamma does not match the configuration space")
    # one 2x2 site factor table: rows xi in {0,1}, cols eta in {0,1}
    site = np.array(
        [
            [
                _power(params.alpha + params.beta * v_eta, params.epsilon + params.delta * v_xi)
                for v_eta in (0, 1)
            ]
            for v_xi in (0, 1)
        ]
    )
    configs = np.array(space.configs)
    d = np.ones((space.size, space.size))
    for s in range(configs.shape[1]):
        d *= site[configs[:, s][:, None], configs[:, s][None, :]]
    return make_duality(generator, generator, d)


def classify_regime(params: SingleSiteDualityParams) -> str:
    """Exact parameter-regime detection (no snapping of near-degenerate values)."""
    if params.delta == 0.0:
        return "constant-exponent"
    if params.alpha == 0.0 and params.epsilon == 0.0:
        return "classical"
    if params.alpha == 0.0:
        return "top-indicator"
    if params.beta == 0.0:
        return "beta-zero"
    if params.alpha == -params.beta:
        return "bottom-indicator"
    return "orthogonal"


def _pochhammer(a: float, j: int) -> float:
    out = 1.0
    for t in range(j):
        out *= a + t
    return out


def _hyp2f1_terminating(k: int, n: int, gamma: int, z: float) -> float:
    """2F1(-k, -n; -gamma; z) as the terminating sum over j = 0..min(k,n)."""
    terms = []
    for j in range(min(k, n) + 1):
        denom = _pochhammer(-gamma, j) * math.factorial(j)
        if denom == 0.0:
            raise DegenerateHypergeometricError(
                f"(-gamma)_{j} vanished before the series terminated"
            )
        terms.append(_pochhammer(-k, j) * _pochhammer(-n, j) / denom * z**j)
    return math.fsum(terms)


def single_site_duality(params: SingleSiteDualityParams) -> np.ndarray:
    """Closed-form single-site table d(k, n), k, n in 0..gamma.

    Regime is detected exactly from the parameters; the generic regime is
    evaluated through the terminating hypergeometric sum with argument
    z = 1 - (1 + beta/alpha)^delta.  Non-integer delta is admitted only where
    every power involved has a positive base (DomainError otherwise).
    """
    a, b, e, dl, g = params.alpha, params.beta, params.epsilon, params.delta, params.gamma
    k_idx = np.arange(g + 1)
    table = np.zeros((g + 1, g + 1))
    regime = classify_regime(params)
    if regime == "constant-exponent":
        row = [_power(a + b, e * n) * _power(a, e * (g - n)) for n in range(g + 1)]
        table[:] = np.array(row)[None, :]
    elif regime == "classical":
        bd = _power(b, dl)
        for k in k_idx:
            for n in range(g + 1):
                if n >= k:
                    table[k, n] = (
                        bd**k
                        * math.factorial(g - k)
                        / math.factorial(g)
                        * math.factorial(n)
                        / math.factorial(n - k)
                    )
    elif regime == "top-indicator":
        col = [_power(b, e * g + dl * k) for k in k_idx]
        table[:, g] = col
    elif regime == "beta-zero":
        col = np.array([_power(a, e * g + dl * k) for k in k_idx])
        table[:] = col[:, None]
    elif regime == "bottom-indicator":
        col = [_power(a, e * g + dl * k) for k in k_idx]
        table[:, 0] = col
    else:  # orthogonal / generic
        z = 1.0 - _power(1.0 + b / a, dl)
        for k in k_idx:
            for n in range(g + 1):
                table[k, n] = (
                    _power(a, e * g - e * n + dl * k)
                    * _power(a + b, e * n)
                    * _hyp2f1_terminating(int(k), int(n), g, z)
                )
    return table


def ladder_bracket_sum(
    k: int,
    n: int,
    gamma: int,
    alpha: float,
    beta: float,
    delta: float,
    xi_pattern: Sequence[int] | None = None,
) -> float:
    """Brute-force bracket: (1/C(gamma,n)) sum_{|eta|=n} prod_a (alpha + beta eta_a)^(delta xi_a).

    xi_pattern defaults to k ones followed by zeros; the value depends on the
    pattern only through its total (a property the tests assert).  Equals 1
    for delta = 0 by the Vandermonde convolution.
    """
    if xi_pattern is None:
        xi_pattern = [1] * k + [0] * (gamma - k)
    xi_pattern = list(xi_pattern)
    if len(xi_pattern) != gamma or sum(xi_pattern) != k:
        raise ValueError("xi_pattern must have length gamma and total k")
    total = 0.0
    for eta in itertools.product((0, 1), repeat=gamma):
        if sum(eta) != n:
            continue
        value = 1.0
        for site_xi, site_eta in zip(xi_pattern, eta):
            value *= _power(alpha + beta * site_eta, delta * site_xi)
        total += value
    return total / math.comb(gamma, n)


def single_site_duality_bruteforce(params: SingleSiteDualityParams) -> np.ndarray:
    """Independent oracle: evaluate the single-site table by exhaustive ladder sums."""
    a, b, e, dl, g = params.alpha, params.beta, params.epsilon, params.delta, params.gamma
    table = np.zeros((g + 1, g + 1))
    for k in range(g + 1):
        for n in range(g + 1):
            prefactor = _power(a + b, e * n) * _power(a, e * (g - n))
            table[k, n] = prefactor * ladder_bracket_sum(k, n, g, a, b, dl)
    return table


def factorized_duality(
    tables: Sequence[np.ndarray],
    space: ConfigurationSpace,
    generator: RateMatrix,
    tol: float = DEFAULTS.residual,
) -> DualityFunction:
    """Product duality D(xi, eta) = prod_x d_x(xi(x), eta(x)) over a SEP space."""
    if space.kind is not SpaceKind.SEP:
        raise ValueError("factorized_duality expects a SEP configuration space")
    tables = [np.asarray(t, dtype=float) for t in tables]
    if len(tables) != space.n_vertices:
        raise ShapeMismatchError(f"need one table per vertex ({space.n_vertices})")
    expected = (space.gamma + 1, space.gamma + 1)
    for t in tables:
        if t.shape != expected:
            raise ShapeMismatchError(f"table shape {t.shape}, expected {expected}")
    configs = np.array(space.configs)
    d = np.ones((space.size, space.size))
    for x in range(space.n_vertices):
        d *= tables[x][configs[:, x][:, None], configs[:, x][None, :]]
    return make_duality(generator, generator, d)


# ---------------------------------------------------------------------------
# one-dimensional symmetric random walks with closed-form spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReflectedAbsorbedRW:
    """Reflected/absorbed walk pair on {1..n} with analytic spectral data.

    l reflects at the left boundary and is absorbed (frozen) at the right;
    lhat mirrors this.  Both share the spectrum lambda_1 = 0,
    lambda_i = 2(cos theta_i - 1) with theta_i = (i - 1/2) pi / (n-1).
    """

    n: int
    l: RateMatrix
    lhat: RateMatrix
    lambdas: np.ndarray
    thetas: np.ndarray
    u: np.ndarray
    uhat: np.ndarray
    spectral: SpectralData
    spectral_hat: SpectralData


def rw_reflected_absorbed(n: int, tol: float = DEFAULTS.residual) -> ReflectedAbsorbedRW:
    """Build the reflected-left/absorbed-right walk and its mirror, with spectra.

    Eigenfunctions: u_i(x) = cos(theta_i (x-1)) / sqrt(n) for l,
    uhat_i(x) = sin(theta_i (x-1)) / sqrt(n) for lhat, plus the constant
    1/sqrt(n) at eigenvalue zero.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    l = np.zeros((n, n))
    lhat = np.zeros((n, n))
    for x in range(1, n - 1):
        for mat in (l, lhat):
            mat[x, x - 1] = mat[x, x + 1] = 1.0
            mat[x, x] = -2.0
    l[0, 1] = 2.0
    l[0, 0] = -2.0  # reflected left; row n-1 stays zero (absorbed right)
    lhat[n - 1, n - 2] = 2.0
    lhat[n - 1, n - 1] = -2.0  # reflected right; row 0 stays zero (absorbed left)
    thetas = (np.arange(1, n) - 0.5) * np.pi / (n - 1)
    lambdas = np.concatenate([[0.0], 2.0 * (np.cos(thetas) - 1.0)])
    x = np.arange(1, n + 1)
    u = np.empty((n, n))
    uhat = np.empty((n, n))
    u[:, 0] = 1.0 / np.sqrt(n)
    uhat[:, 0] = 1.0 / np.sqrt(n)
    for i, theta in enumerate(thetas, start=1):
        u[:, i] = np.cos(theta * (x - 1)) / np.sqrt(n)
        uhat[:, i] = np.sin(theta * (x - 1)) / np.sqrt(n)
    l_rm = RateMatrix.from_entries(l)
    lhat_rm = RateMatrix.from_entries(lhat)
    return ReflectedAbsorbedRW(
        n=n,
        l=l_rm,
        lhat=lhat_rm,
        lambdas=lambdas,
        thetas=thetas,
        u=u,
        uhat=uhat,
        spectral=spectral_from_eigenbasis(l_rm, lambdas, u, tol),
        spectral_hat=spectral_from_eigenbasis(lhat_rm, lambdas, uhat, tol),
    )


@dataclass(frozen=True)
class BlockedAbsorbedRW:
    """Blocked walk, its absorbed Siegmund dual, and the analytic eigenbases.

    uhat columns are counting-measure-orthonormal eigenfunctions of the
    (symmetric) blocked generator; u columns are their tail sums, eigen for
    the absorbed sub-generator at the same eigenvalues.
    """

    n: int
    pair: SiegmundPair
    lambdas: np.ndarray
    thetas: np.ndarray
    u: np.ndarray
    uhat: np.ndarray
    spectral: SpectralData
    spectral_hat: SpectralData


def rw_blocked_absorbed(n: int, tol: float = DEFAULTS.residual) -> BlockedAbsorbedRW:
    """Blocked-boundary walk and its Siegmund dual (absorbed walk with a leak).

    Spectrum lambda_1 = 0, lambda_i = 2(cos theta_i - 1), theta_i = (i-1) pi / n
    for i = 2..n; the dual's eigenfunctions are tail sums of the blocked
    walk's, including u_1(x) = (n + 1 - x)/sqrt(n) at eigenvalue zero.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    lhat = np.zeros((n, n))
    for x in range(1, n - 1):
        lhat[x, x - 1] = lhat[x, x + 1] = 1.0
        lhat[x, x] = -2.0
    lhat[0, 0], lhat[0, 1] = -1.0, 1.0
    lhat[n - 1, n - 2], lhat[n - 1, n - 1] = 1.0, -1.0
    thetas = (np.arange(2, n + 1) - 1) * np.pi / n
    lambdas = np.concatenate([[0.0], 2.0 * (np.cos(thetas) - 1.0)])
    x = np.arange(1, n + 1)
    uhat = np.empty((n, n))
    u = np.empty((n, n))
    uhat[:, 0] = 1.0 / np.sqrt(n)
    u[:, 0] = (n + 1 - x) / np.sqrt(n)
    for i, theta in enumerate(thetas, start=1):
        norm = 1.0 / np.sqrt(n * (1.0 - np.cos(theta)))
        uhat[:, i] = norm * (
            -np.sin(theta) * np.cos(theta * (x - 1))
            + (1.0 - np.cos(theta)) * np.sin(theta * (x - 1))
        )
        u[:, i] = norm * np.sin(theta * (x - 1))
    lhat_rm = RateMatrix.from_entries(lhat, kind=MatrixKind.GENERATOR)
    pair = siegmund_dual(lhat_rm)
    return BlockedAbsorbedRW(
        n=n,
        pair=pair,
        lambdas=lambdas,
        thetas=thetas,
        u=u,
        uhat=uhat,
        spectral=spectral_from_eigenbasis(pair.l, lambdas, u, tol),
        spectral_hat=spectral_from_eigenbasis(lhat_rm, lambdas, uhat, tol),
    )
