"""Jordan-form machinery for small dense real matrices.

decompose() produces eigenvalue clusters, Jordan chains and the inverse-row
functions; build_bj() and check_r_similar() provide the block-anti-diagonal
involution and the rank-r similarity test that turn shared spectral structure
into duality functions (see markovdual.duality.build_from_spectra).

Chains are stored eigenvector-first, so M @ U == U @ J with J upper bidiagonal
(ones on the superdiagonal inside each block).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .config import DEFAULTS
from .core import Measure, RateMatrix
from .errors import DecompositionFailedError, NotOrthonormalError, ShapeMismatchError
from .linalg import EPS, max_abs

__all__ = [
    "JordanBlock",
    "JordanStructure",
    "SpectralData",
    "Witness",
    "MatchedBlock",
    "decompose",
    "build_bj",
    "match_jordan_blocks",
    "check_r_similar",
    "check_biorthogonal",
    "reversible_eigenbasis",
    "spectral_from_eigenbasis",
]


class JordanBlock(NamedTuple):
    eigenvalue: complex
    size: int


def _canonical_key(block: JordanBlock):
    # fixes the "unique up to permutations" freedom: Re desc, Im desc, size desc
    return (-block.eigenvalue.real, -block.eigenvalue.imag, -block.size)


@dataclass(frozen=True)
class JordanStructure:
    """Ordered Jordan blocks (eigenvalue, size) in canonical order."""

    blocks: tuple[JordanBlock, ...]

    def __post_init__(self):
        blocks = tuple(JordanBlock(complex(ev), int(m)) for ev, m in self.blocks)
        if any(b.size < 1 for b in blocks):
            raise ValueError("block sizes must be positive")
        object.__setattr__(self, "blocks", tuple(sorted(blocks, key=_canonical_key)))

    @property
    def n(self) -> int:
        return sum(b.size for b in self.blocks)

    @property
    def offsets(self) -> tuple[int, ...]:
        """Column offset of each block inside U."""
        out, pos = [], 0
        for b in self.blocks:
            out.append(pos)
            pos += b.size
        return tuple(out)

    def jordan_matrix(self) -> np.ndarray:
        """Assemble J: eigenvalues on the diagonal, ones on in-block superdiagonals."""
        j = np.zeros((self.n, self.n), dtype=complex)
        pos = 0
        for ev, m in self.blocks:
            for i in range(m):
                j[pos + i, pos + i] = ev
                if i + 1 < m:
                    j[pos + i, pos + i + 1] = 1.0
            pos += m
        return j

    def is_diagonalizable(self) -> bool:
        return all(b.size == 1 for b in self.blocks)


@dataclass(frozen=True)
class SpectralData:
    """Jordan decomposition M = U J U^{-1} of a rate matrix.

    Columns of U are (generalized) eigenfunctions grouped by block in chain
    order; rows of Uinv are the dual functions w_i with <w_i, u_j> = delta_ij.
    residual = max of the reconstruction and inversion defects (max-abs entry).
    """

    source: RateMatrix
    structure: JordanStructure
    U: np.ndarray
    Uinv: np.ndarray
    residual: float

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues with algebraic multiplicity, in block order."""
        return np.concatenate([[b.eigenvalue] * b.size for b in self.structure.blocks])


def _cluster_eigenvalues(eigs: np.ndarray, tol: float) -> list[list[int]]:
    """Greedy merge of eigenvalues within tol of a group's running mean."""
    order = np.lexsort((eigs.imag, eigs.real))
    groups: list[list[int]] = []
    for idx in order:
        for g in groups:
            if abs(eigs[idx] - np.mean(eigs[g])) <= tol:
                g.append(idx)
                break
        else:
            groups.append([idx])
    return groups


def _null_basis_sequence(a: np.ndarray, m_alg: int, spread: float):
    """Null dims and orthonormal bases of a^k, k = 1.., for one cluster.

    The terminal null dimension is pinned to the known algebraic multiplicity;
    `spread` (cluster radius) widens the singular-value cutoff because the
    shifted matrix inherits that much error from the cluster representative.
    """
    n = a.shape[0]
    opnorm = float(np.linalg.norm(a, 2))
    dims, bases = [0], []
    ak = np.eye(n, dtype=a.dtype)
    for k in range(1, m_alg + 1):
        ak = ak @ a
        _, s, vh = np.linalg.svd(ak)
        smax = float(s[0]) if s[0] > 0 else 1.0
        cutoff = max(
            n * EPS * smax,
            np.sqrt(EPS) * smax,
            20.0 * k * spread * max(1.0, opnorm) ** (k - 1),
        )
        d = int(np.sum(s <= cutoff))
        d = min(max(d, dims[-1]), m_alg)
        if k == m_alg and d < m_alg:
            # generalized eigenspace dimension equals the algebraic multiplicity
            d = m_alg
        bases.append(vh[len(s) - d :].conj().T if d else np.zeros((n, 0), dtype=a.dtype))
        dims.append(d)
        if d == m_alg:
            break
    return dims, bases


def _jordan_chains(m: np.ndarray, lam: complex, m_alg: int, spread: float) -> list[list[np.ndarray]]:
    """Jordan chains for one eigenvalue cluster, each chain eigenvector-first.

    Top vectors are picked per level (descending) from Null((M-lam I)^k),
    ordered by descending norm after projecting off Null((M-lam I)^{k-1}) and
    the level-k members of already-chosen chains, which makes the output
    deterministic.
    """
    n = m.shape[0]
    if lam.imag == 0.0 and not np.iscomplexobj(m):
        a = m - lam.real * np.eye(n)
    else:
        a = m.astype(complex) - lam * np.eye(n, dtype=complex)
    if m_alg == 1:
        _, _, vh = np.linalg.svd(a)
        return [[vh[-1].conj()]]
    dims, bases = _null_basis_sequence(a, m_alg, spread)
    chains: list[list[np.ndarray]] = []
    for level in range(len(bases), 0, -1):
        want = (dims[level] - dims[level - 1]) - sum(1 for c in chains if len(c) >= level)
        if want <= 0:
            continue
        avoid = []
        if level >= 2:
            avoid.append(bases[level - 2])
        members = [c[level - 1] for c in chains if len(c) >= level]
        if members:
            avoid.append(np.array(members).T)
        q = None
        if avoid:
            q, _ = np.linalg.qr(np.hstack([x.astype(a.dtype) for x in avoid]))
        candidates = bases[level - 1]
        picked: list[np.ndarray] = []
        for _ in range(want):
            best, best_norm = None, -1.0
            for j in range(candidates.shape[1]):
                v = candidates[:, j].astype(a.dtype).copy()
                if q is not None:
                    v -= q @ (q.conj().T @ v)
                for w in picked:
                    v -= w * (w.conj() @ v)
                norm = float(np.linalg.norm(v))
                if norm > best_norm:
                    best, best_norm = v, norm
            if best is None or best_norm <= 0.0:
                raise DecompositionFailedError("could not complete a Jordan chain basis")
            top = best / best_norm
            picked.append(top)
            chain = [top]
            for _ in range(level - 1):
                chain.append(a @ chain[-1])
            chain.reverse()
            chains.append(chain)
    return chains


def decompose(
    m: RateMatrix | np.ndarray,
    tol_cluster: float = DEFAULTS.cluster,
    tol_residual: float = DEFAULTS.residual,
) -> SpectralData:
    """Jordan decomposition of a real square matrix.

    Eigenvalues within tol_cluster are merged before chain construction, so
    floating-point splits of designed Jordan blocks are re-absorbed (size-2
    blocks split by ~sqrt(eps), within the default; deeper blocks need a
    looser tol_cluster).  Complex clusters are processed once and mirrored,
    so conjugate blocks carry exactly conjugate columns.

    Raises DecompositionFailedError if the reconstruction or inversion
    residual exceeds tol_residual.
    """
    source = m if isinstance(m, RateMatrix) else RateMatrix.from_entries(m)
    mat = np.asarray(source.entries, dtype=float)
    n = mat.shape[0]
    eigs = np.linalg.eigvals(mat)
    groups = _cluster_eigenvalues(eigs, tol_cluster)
    reps = [complex(np.mean(eigs[g])) for g in groups]
    done = [False] * len(groups)
    blocks: list[tuple[complex, list[np.ndarray]]] = []
    for gi in range(len(groups)):
        if done[gi]:
            continue
        lam = reps[gi]
        if abs(lam.imag) <= tol_cluster:
            lam = complex(lam.real, 0.0)
            spread = max(abs(eigs[j] - lam) for j in groups[gi])
            for chain in _jordan_chains(mat, lam, len(groups[gi]), spread):
                blocks.append((lam, chain))
            done[gi] = True
        else:
            candidates = [j for j in range(len(groups)) if not done[j] and j != gi]
            partner = min(candidates, key=lambda j: abs(reps[j] - lam.conjugate()), default=None)
            if partner is None or abs(reps[partner] - lam.conjugate()) > 10 * tol_cluster:
                raise DecompositionFailedError(
                    f"no conjugate partner for eigenvalue cluster at {lam:.6g}"
                )
            upper = gi if lam.imag > 0 else partner
            lam = reps[upper]
            spread = max(abs(eigs[j] - lam) for j in groups[upper])
            for chain in _jordan_chains(mat, lam, len(groups[upper]), spread):
                blocks.append((lam, chain))
                blocks.append((lam.conjugate(), [v.conj() for v in chain]))
            done[gi] = done[partner] = True
    blocks.sort(key=lambda b: _canonical_key(JordanBlock(b[0], len(b[1]))))
    structure = JordanStructure(tuple(JordanBlock(ev, len(chain)) for ev, chain in blocks))
    u = np.array([v for _, chain in blocks for v in chain], dtype=complex).T
    try:
        uinv = np.linalg.inv(u)
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailedError("generalized eigenbasis is numerically singular") from exc
    j = structure.jordan_matrix()
    residual = max(max_abs(mat @ u - u @ j), max_abs(uinv @ u - np.eye(n)))
    if residual > tol_residual:
        raise DecompositionFailedError(
            f"decomposition residual {residual:.3e} exceeds tolerance {tol_residual:.3e}"
        )
    return SpectralData(source, structure, u, uinv, residual)


def spectral_from_eigenbasis(
    source: RateMatrix,
    eigenvalues: Sequence[complex],
    u: np.ndarray,
    tol_residual: float = DEFAULTS.residual,
) -> SpectralData:
    """SpectralData from a known eigenbasis (all blocks size 1), validated."""
    structure = JordanStructure(tuple(JordanBlock(complex(ev), 1) for ev in eigenvalues))
    u = np.asarray(u, dtype=complex)
    keys = [_canonical_key(JordanBlock(complex(ev), 1)) for ev in eigenvalues]
    order = sorted(range(len(keys)), key=keys.__getitem__)
    # re-sort columns so they line up with the canonical block order
    ordered = u[:, order]
    uinv = np.linalg.inv(ordered)
    j = structure.jordan_matrix()
    residual = max(
        max_abs(np.asarray(source.entries) @ ordered - ordered @ j),
        max_abs(uinv @ ordered - np.eye(source.n)),
    )
    if residual > tol_residual:
        raise DecompositionFailedError(
            f"analytic eigenbasis residual {residual:.3e} exceeds {tol_residual:.3e}"
        )
    return SpectralData(source, structure, ordered, uinv, residual)


def build_bj(structure: JordanStructure) -> np.ndarray:
    """Block-diagonal of anti-identity blocks H_m, one per Jordan block.

    Satisfies B^T = B^{-1} = B and J B = B J^T for the J assembled from the
    same structure.
    """
    n = structure.n
    b = np.zeros((n, n))
    pos = 0
    for _, m in structure.blocks:
        b[pos : pos + m, pos : pos + m] = np.fliplr(np.eye(m))
        pos += m
    return b


class MatchedBlock(NamedTuple):
    """One matched Jordan-block pair contributing `size` to a duality rank.

    hat_offset/offset are column offsets into the hat/primal U matrices;
    hat_size/primal_size the full block sizes, size = the matched chain length
    (min of the two, possibly truncated to hit a requested rank).
    """

    eigenvalue: complex
    hat_offset: int
    hat_size: int
    offset: int
    primal_size: int
    size: int


def match_jordan_blocks(
    hat: JordanStructure, primal: JordanStructure, tol: float = DEFAULTS.cluster
) -> list[MatchedBlock]:
    """Greedy maximal block matching between two structures.

    Per shared eigenvalue (within tol), block size lists are sorted descending
    and paired elementwise; each pair supports a chain overlap of min(sizes).
    For equal size lists this reduces to counting shared eigenvalues with
    multiplicity.
    """
    hat_offsets = hat.offsets
    primal_offsets = primal.offsets
    hat_used = [False] * len(hat.blocks)
    primal_used = [False] * len(primal.blocks)
    matches: list[MatchedBlock] = []
    for hi, hb in enumerate(hat.blocks):
        if hat_used[hi]:
            continue
        # collect all hat/primal blocks at this eigenvalue
        hat_group = [k for k, b in enumerate(hat.blocks) if not hat_used[k] and abs(b.eigenvalue - hb.eigenvalue) <= tol]
        primal_group = [k for k, b in enumerate(primal.blocks) if not primal_used[k] and abs(b.eigenvalue - hb.eigenvalue) <= tol]
        for k in hat_group:
            hat_used[k] = True
        if not primal_group:
            continue
        for k in primal_group:
            primal_used[k] = True
        hat_group.sort(key=lambda k: -hat.blocks[k].size)
        primal_group.sort(key=lambda k: -primal.blocks[k].size)
        for hk, pk in zip(hat_group, primal_group):
            hblock, pblock = hat.blocks[hk], primal.blocks[pk]
            matches.append(
                MatchedBlock(
                    eigenvalue=hblock.eigenvalue,
                    hat_offset=hat_offsets[hk],
                    hat_size=hblock.size,
                    offset=primal_offsets[pk],
                    primal_size=pblock.size,
                    size=min(hblock.size, pblock.size),
                )
            )
    matches.sort(key=lambda u: (-u.eigenvalue.real, -u.eigenvalue.imag, -u.size, u.hat_offset))
    return matches


@dataclass(frozen=True)
class Witness:
    """Rank-r similarity witness: hat_side T satisfying Jhat T = T J."""

    t_matrix: np.ndarray
    matched: tuple[MatchedBlock, ...]
    rank: int


def check_r_similar(
    hat: SpectralData, primal: SpectralData, r: int, tol: float = DEFAULTS.cluster
) -> Witness | None:
    """Witness that the two matrices are r-similar, or None.

    The witness T maps the first `size` chain positions of each matched hat
    block onto the last `size` positions of the matched primal block, so that
    Jhat T = T J holds exactly for the assembled Jordan matrices (up to the
    eigenvalue matching tolerance).
    """
    if r < 1 or r > min(hat.n, primal.n):
        raise ValueError(f"rank r={r} out of range 1..{min(hat.n, primal.n)}")
    matches = match_jordan_blocks(hat.structure, primal.structure, tol)
    total = sum(u.size for u in matches)
    if total < r:
        return None
    kept: list[MatchedBlock] = []
    remaining = r
    for u in matches:
        if remaining == 0:
            break
        take = min(u.size, remaining)
        kept.append(u._replace(size=take))
        remaining -= take
    t = np.zeros((hat.n, primal.n))
    for u in kept:
        for i in range(u.size):
            t[u.hat_offset + i, u.offset + u.primal_size - u.size + i] = 1.0
    return Witness(t_matrix=t, matched=tuple(kept), rank=r)


def check_biorthogonal(
    fs: Sequence[np.ndarray] | np.ndarray,
    gs: Sequence[np.ndarray] | np.ndarray,
    mu: Measure,
    tol: float = DEFAULTS.residual,
) -> bool:
    """True iff sum_x F_i(x) G_j(x) mu(x) = delta_ij within tol (bilinear pairing)."""
    f = np.atleast_2d(np.asarray(fs))
    g = np.atleast_2d(np.asarray(gs))
    w = np.asarray(mu.weights)
    if f.shape[1] != w.shape[0] or g.shape[1] != w.shape[0]:
        raise ShapeMismatchError("function length does not match the measure's space")
    gram = (f * w) @ g.T
    return max_abs(gram - np.eye(f.shape[0], g.shape[0])) <= tol


def reversible_eigenbasis(l: RateMatrix, mu: Measure) -> tuple[np.ndarray, np.ndarray]:
    """Real eigenvalues and a mu-orthonormal eigenbasis of a reversible generator.

    Uses the symmetrization diag(sqrt(mu)) L diag(1/sqrt(mu)); raises
    NotOrthonormalError if L is not self-adjoint in L^2(mu).
    """
    if mu.space.n != l.n:
        raise ShapeMismatchError("measure and matrix sizes differ")
    w = np.sqrt(np.asarray(mu.weights))
    sym = (np.asarray(l.entries) * w[:, None]) / w[None, :]
    if max_abs(sym - sym.T) > 1e-8 * max(1.0, max_abs(sym)):
        raise NotOrthonormalError("matrix is not reversible w.r.t. the supplied measure")
    lams, v = np.linalg.eigh((sym + sym.T) / 2.0)
    order = np.argsort(-lams)
    return lams[order], (v[:, order] / w[:, None])
