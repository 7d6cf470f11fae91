"""Deterministic samplers for structured random inputs.

Every verification trial draws from a generator seeded by ``(seed, trial
index, ...)``, so suites are reproducible and trial-parallelizable.  All
samplers return elements of the given block algebra (block-diagonal ambient
matrices); partial isometries with prescribed source projections are obtained
by polarizing a Gaussian matrix against the projection, and prescribed
source/target pairs by matching spectral bases.
"""
from __future__ import annotations

import numpy as np

from .algebra import BlockAlgebra, NormalFunctional
from .errors import NotPartiallyInvertible
from .linalg import (
    DEFAULT_TOL,
    ToleranceProfile,
    antiherm,
    herm,
    hermitian_eig,
    polar_decompose,
    projection_rank,
    support_projection,
)


def rng_for(*key: int) -> np.random.Generator:
    """Generator for a (seed, trial, ...) key."""
    return np.random.default_rng(list(key))


def random_element(algebra: BlockAlgebra, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Complex Gaussian algebra element."""
    mats = []
    for b in algebra.blocks:
        g = rng.standard_normal((b, b)) + 1j * rng.standard_normal((b, b))
        mats.append(scale * g / np.sqrt(2.0))
    return algebra.embed_blocks(mats)


def random_hermitian(algebra: BlockAlgebra, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return herm(random_element(algebra, rng, scale))


def random_antihermitian(algebra: BlockAlgebra, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return antiherm(random_element(algebra, rng, scale))


def random_unitary(algebra: BlockAlgebra, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish unitary: QR of a Gaussian with phase-fixed diagonal."""
    mats = []
    for b in algebra.blocks:
        g = rng.standard_normal((b, b)) + 1j * rng.standard_normal((b, b))
        q, r = np.linalg.qr(g)
        d = np.diagonal(r)
        q = q * (d / np.abs(d))
        mats.append(q)
    return algebra.embed_blocks(mats)


def random_positive(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    eig_low: float = 0.5,
    eig_high: float = 2.0,
    repeat_chance: float = 0.0,
) -> np.ndarray:
    """Strictly positive element with eigenvalues drawn from
    ``[eig_low, eig_high]`` (well separated from any rank cutoff).

    With probability ``repeat_chance`` per block, a repeated eigenvalue is
    forced, to exercise degenerate spectra.
    """
    v = random_unitary(algebra, rng)
    vals = rng.uniform(eig_low, eig_high, algebra.dim)
    offset = 0
    for b in algebra.blocks:
        if b >= 2 and rng.uniform() < repeat_chance:
            i, j = rng.choice(b, size=2, replace=False)
            vals[offset + j] = vals[offset + i]
        offset += b
    return (v * vals) @ v.conj().T


def random_projection(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    ranks: tuple[int, ...] | None = None,
    allow_zero: bool = True,
    allow_full: bool = True,
) -> np.ndarray:
    """Random orthogonal projection with prescribed or random blockwise ranks."""
    if ranks is None:
        ranks = tuple(
            int(rng.integers(0 if allow_zero else 1, b + (1 if allow_full else 0)))
            for b in algebra.blocks
        )
        if not allow_zero and sum(ranks) == 0:  # pragma: no cover - guarded above
            ranks = tuple(max(r, 1) for r in ranks)
        if sum(ranks) == 0:
            # keep at least one nonzero block so the projection is not trivial
            ranks = list(ranks)
            k = int(rng.integers(0, len(algebra.blocks)))
            ranks[k] = 1
            ranks = tuple(ranks)
    v = random_unitary(algebra, rng)
    vals = np.zeros(algebra.dim)
    offset = 0
    for b, r in zip(algebra.blocks, ranks):
        if r < 0 or r > b:
            raise ValueError("rank exceeds block size")
        vals[offset : offset + r] = 1.0
        offset += b
    return (v * vals) @ v.conj().T


def equivalent_projection(
    algebra: BlockAlgebra, rng: np.random.Generator, p: np.ndarray
) -> np.ndarray:
    """Random projection with the same blockwise ranks as ``p``."""
    ranks = tuple(projection_rank(b) for b in algebra.block_views(p))
    return random_projection(algebra, rng, ranks=ranks)


def partial_isometry_onto(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    source: np.ndarray,
    target: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> np.ndarray:
    """Partial isometry ``u`` with ``u* u = source`` and ``u u* = target``
    (blockwise equal ranks assumed), randomized by a corner unitary."""
    mats = []
    for bs, bt in zip(algebra.block_views(source), algebra.block_views(target)):
        r = projection_rank(bs)
        _, vs = hermitian_eig(bs, tol)
        _, vt = hermitian_eig(bt, tol)
        if r == 0:
            mats.append(np.zeros_like(bs))
            continue
        g = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
        q, rr = np.linalg.qr(g)
        q = q * (np.diagonal(rr) / np.abs(np.diagonal(rr)))
        mats.append(vt[:, :r] @ q @ vs[:, :r].conj().T)
    return algebra.embed_blocks(mats)


def random_partial_isometry(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    source: np.ndarray | None = None,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> np.ndarray:
    """Partial isometry with prescribed source projection and random range,
    obtained as the polar part of (Gaussian) - (source)."""
    if source is None:
        source = random_projection(algebra, rng)
    g = random_element(algebra, rng)
    u, _ = polar_decompose(g @ source, tol)
    return u


def corner_positive(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    p: np.ndarray,
    eig_low: float = 0.5,
    eig_high: float = 2.0,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> np.ndarray:
    """Positive element supported exactly on the projection ``p``, with
    eigenvalues in ``[eig_low, eig_high]`` on the support."""
    mats = []
    for bp in algebra.block_views(p):
        r = projection_rank(bp)
        n = bp.shape[0]
        if r == 0:
            mats.append(np.zeros((n, n), dtype=complex))
            continue
        _, v = hermitian_eig(bp, tol)
        g = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
        q, rr = np.linalg.qr(g)
        q = q * (np.diagonal(rr) / np.abs(np.diagonal(rr)))
        vals = rng.uniform(eig_low, eig_high, r)
        core = (q * vals) @ q.conj().T
        mats.append(v[:, :r] @ core @ v[:, :r].conj().T)
    return algebra.embed_blocks(mats)


def corner_hermitian(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    p: np.ndarray,
    scale: float = 1.0,
) -> np.ndarray:
    """Hermitian element compressed to the corner p M p."""
    return p @ random_hermitian(algebra, rng, scale) @ p


def corner_antihermitian(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    p: np.ndarray,
    scale: float = 1.0,
) -> np.ndarray:
    """Anti-Hermitian element compressed to the corner p M p."""
    return p @ random_antihermitian(algebra, rng, scale) @ p


def unit_norm(x: np.ndarray) -> np.ndarray:
    """Scale to unit operator norm (no-op on zero input)."""
    s = float(np.linalg.norm(x, 2))
    return x if s == 0.0 else x / s


def random_density(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    support: np.ndarray | None = None,
    normalize: bool = True,
    repeat_chance: float = 0.0,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> NormalFunctional:
    """Positive functional with prescribed support (faithful by default) and
    eigenvalues well separated from the rank cutoff."""
    if support is None:
        d = random_positive(algebra, rng, repeat_chance=repeat_chance)
    else:
        d = corner_positive(algebra, rng, support, tol=tol)
    if normalize:
        d = d / float(np.trace(d).real)
    return NormalFunctional(algebra, d)


def faithful_density(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    normalize: bool = True,
    repeat_chance: float = 0.0,
) -> NormalFunctional:
    return random_density(algebra, rng, support=None, normalize=normalize,
                          repeat_chance=repeat_chance)


def p0_tangent(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    u: np.ndarray,
    p0: np.ndarray,
    scale: float = 1.0,
) -> np.ndarray:
    """Random tangent at a point ``u`` of the bundle of partial isometries
    with source ``p0``: right support preserved, ``u* du`` anti-Hermitian."""
    z = random_element(algebra, rng, scale) @ p0
    return z - u @ herm(u.conj().T @ z)


def stabilizer_direction(
    rng: np.random.Generator, basis: tuple[np.ndarray, ...]
) -> np.ndarray:
    """Random real combination of a stabilizer basis."""
    if not basis:
        raise ValueError("stabilizer basis is empty")
    coeff = rng.standard_normal(len(basis))
    out = np.zeros_like(basis[0])
    for c, b in zip(coeff, basis):
        out = out + c * b
    return out


def projection_chain(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    length: int,
    allow_zero: bool = True,
) -> list[np.ndarray]:
    """Mutually equivalent projections q_0, ..., q_length (equal blockwise
    ranks), for building composable chains."""
    q0 = random_projection(algebra, rng, allow_zero=allow_zero)
    chain = [q0]
    for _ in range(length):
        chain.append(equivalent_projection(algebra, rng, q0))
    return chain


def sample_with_retry(draw, max_tries: int = 64):
    """Redraw on guard-band refusals so samplers stay deterministic while
    avoiding ambiguous-rank inputs."""
    for _ in range(max_tries):
        try:
            return draw()
        except NotPartiallyInvertible:
            continue
    raise NotPartiallyInvertible(
        f"sampler failed to clear the guard band in {max_tries} draws"
    )


def random_unit_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def orthogonal_unit_vector(
    delta: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Unit vector orthogonal to ``delta`` (dimension at least 2)."""
    n = delta.shape[0]
    for _ in range(64):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = v - delta * np.vdot(delta, v)
        norm = float(np.linalg.norm(v))
        if norm > 1e-6:
            return v / norm
    raise ValueError("could not draw a vector orthogonal to delta")


def support_projection_of(x: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Convenience wrapper: support of a positive matrix."""
    return support_projection(x, tol)
