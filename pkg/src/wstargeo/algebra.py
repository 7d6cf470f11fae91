"""Finite-dimensional W*-algebras as block-diagonal matrix algebras.

An algebra is a direct sum of full matrix blocks, realized inside the ambient
matrix space of its total dimension.  Normal functionals are represented by
their density matrices through the trace pairing ``phi(x) = Tr(d x)``; every
structural operation (polar parts, supports, equivalences, centralizers,
conditional expectations, modular flow, coadjoint action) works on densities.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    AlgebraMismatch,
    InvalidArrow,
    NotFaithful,
    NotPositive,
)
from .linalg import (
    DEFAULT_TOL,
    ToleranceProfile,
    as_square,
    check_hermitian,
    eigen_clusters,
    frobenius,
    hermitian_eig,
    is_projection,
    left_support,
    matrix_imaginary_power,
    polar_decompose,
    projection_rank,
    retained_rank,
    right_support,
    support_projection,
)


@dataclass(frozen=True)
class BlockAlgebra:
    """Direct sum of full matrix blocks M_{n_1} + ... + M_{n_m}."""

    blocks: tuple[int, ...]

    def __post_init__(self) -> None:
        blocks = tuple(int(b) for b in self.blocks)
        if not blocks or any(b < 1 for b in blocks):
            raise ValueError("block sizes must be positive integers")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_string(cls, text: str) -> "BlockAlgebra":
        """Parse a comma-separated block list such as ``"2,3"``."""
        try:
            blocks = tuple(int(part) for part in text.split(","))
        except ValueError as exc:
            raise ValueError(f"cannot parse block sizes from {text!r}") from exc
        return cls(blocks)

    @cached_property
    def dim(self) -> int:
        """Ambient matrix dimension (sum of block sizes)."""
        return sum(self.blocks)

    @cached_property
    def slices(self) -> tuple[slice, ...]:
        out = []
        start = 0
        for b in self.blocks:
            out.append(slice(start, start + b))
            start += b
        return tuple(out)

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def zero(self) -> np.ndarray:
        return np.zeros((self.dim, self.dim), dtype=complex)

    def block_views(self, x: np.ndarray) -> list[np.ndarray]:
        """Diagonal block of ``x`` for each summand."""
        return [x[s, s] for s in self.slices]

    def embed_blocks(self, mats: list[np.ndarray]) -> np.ndarray:
        """Assemble an algebra element from per-block matrices."""
        if len(mats) != len(self.blocks):
            raise ValueError("wrong number of blocks")
        out = self.zero()
        for s, m in zip(self.slices, mats):
            m = np.asarray(m, dtype=complex)
            if m.shape != (s.stop - s.start, s.stop - s.start):
                raise ValueError("block has the wrong shape")
            out[s, s] = m
        return out

    def project(self, x: np.ndarray) -> np.ndarray:
        """Block-diagonal compression of an ambient matrix."""
        x = as_square(x)
        if x.shape != (self.dim, self.dim):
            raise AlgebraMismatch(
                f"expected an {self.dim}x{self.dim} matrix, got {x.shape}"
            )
        return self.embed_blocks(self.block_views(x))

    def contains(self, x: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
        """Whether ``x`` is block-diagonal within residual tolerance."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.dim, self.dim):
            return False
        return frobenius(x - self.project(x)) <= tol.residual_tol * (1.0 + frobenius(x))

    def require_member(
        self, x: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL, what: str = "matrix"
    ) -> np.ndarray:
        """Validate membership and return ``x`` as a complex ndarray."""
        x = as_square(x)
        if not self.contains(x, tol):
            raise AlgebraMismatch(f"{what} is not an element of the block algebra")
        return x

    def coordinate_units(self) -> list[np.ndarray]:
        """Complex basis of the algebra: one matrix unit per in-block entry."""
        units = []
        for s in self.slices:
            for i in range(s.start, s.stop):
                for j in range(s.start, s.stop):
                    e = self.zero()
                    e[i, j] = 1.0
                    units.append(e)
        return units

    def hermitian_units(self) -> list[np.ndarray]:
        """Orthonormal real basis of the Hermitian part under Tr(x y)."""
        out = []
        for s in self.slices:
            for i in range(s.start, s.stop):
                e = self.zero()
                e[i, i] = 1.0
                out.append(e)
                for j in range(i + 1, s.stop):
                    e = self.zero()
                    e[i, j] = e[j, i] = 1.0 / np.sqrt(2.0)
                    out.append(e)
                    e = self.zero()
                    e[i, j] = -1j / np.sqrt(2.0)
                    e[j, i] = 1j / np.sqrt(2.0)
                    out.append(e)
        return out


@dataclass(frozen=True)
class NormalFunctional:
    """Normal functional phi(x) = Tr(d x) on a block algebra, stored by its
    density matrix ``d``."""

    algebra: BlockAlgebra
    density: np.ndarray

    def __post_init__(self) -> None:
        d = as_square(self.density)
        if d.shape != (self.algebra.dim, self.algebra.dim):
            raise AlgebraMismatch("density has the wrong ambient dimension")
        object.__setattr__(
            self, "density", self.algebra.require_member(d, what="density")
        )

    def __call__(self, x: np.ndarray) -> complex:
        return complex(np.trace(self.density @ x))

    def adjoint(self) -> "NormalFunctional":
        """The functional x -> conj(phi(x*)); its density is d*."""
        return NormalFunctional(self.algebra, self.density.conj().T)

    def is_hermitian(self, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
        d = self.density
        return frobenius(d - d.conj().T) <= tol.residual_tol * (1.0 + frobenius(d))

    def is_positive(self, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
        if not self.is_hermitian(tol):
            return False
        w = np.linalg.eigvalsh(herm_part(self.density))
        scale = max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)
        return bool(w.min() >= -tol.residual_tol * scale)

    def distance(self, other: "NormalFunctional") -> float:
        return frobenius(self.density - other.density)


def herm_part(x: np.ndarray) -> np.ndarray:
    return (x + x.conj().T) / 2.0


def require_positive(
    phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
) -> NormalFunctional:
    if not phi.is_positive(tol):
        raise NotPositive("functional is not positive")
    return phi


def functional_polar(
    phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[np.ndarray, NormalFunctional]:
    """Polar decomposition of a functional: ``d = u |d|`` with ``|phi|``
    positive; returns ``(u, |phi|)``."""
    u, h = polar_decompose(phi.density, tol)
    return u, NormalFunctional(phi.algebra, h)


def functional_supports(
    phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Left and right support projections of the density."""
    return left_support(phi.density, tol), right_support(phi.density, tol)


def functional_support(
    phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
) -> np.ndarray:
    """Support projection of a positive functional."""
    require_positive(phi, tol)
    return support_projection(herm_part(phi.density), tol)


def require_projection(
    p: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL, what: str = "matrix"
) -> np.ndarray:
    p = as_square(p)
    if not is_projection(p, tol):
        raise NotPositive(f"{what} is not an orthogonal projection")
    return p


def block_ranks(
    algebra: BlockAlgebra, p: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[int, ...]:
    """Blockwise ranks of a projection (read off block traces)."""
    require_projection(p, tol)
    return tuple(projection_rank(b) for b in algebra.block_views(p))


def mvn_equivalent(
    algebra: BlockAlgebra,
    p: np.ndarray,
    q: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> bool:
    """Murray-von Neumann equivalence of projections: some partial isometry
    carries one onto the other, which in a block algebra means equal blockwise
    ranks."""
    return block_ranks(algebra, p, tol) == block_ranks(algebra, q, tol)


def mvn_witness(
    algebra: BlockAlgebra,
    p: np.ndarray,
    q: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> np.ndarray:
    """A partial isometry ``w`` with ``w* w = p`` and ``w w* = q``, built from
    spectral data blockwise."""
    if not mvn_equivalent(algebra, p, q, tol):
        raise InvalidArrow("projections are not equivalent, no witness exists")
    out = []
    for bp, bq in zip(algebra.block_views(p), algebra.block_views(q)):
        r = projection_rank(bp)
        _, vp = hermitian_eig(bp, tol)
        _, vq = hermitian_eig(bq, tol)
        out.append(vq[:, :r] @ vp[:, :r].conj().T)
    return algebra.embed_blocks(out)


def unitary_equivalent(
    algebra: BlockAlgebra,
    p: np.ndarray,
    q: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
    spectral_atol: float = 1e-10,
) -> bool:
    """Unitary equivalence of projections: equal blockwise spectra."""
    require_projection(p, tol)
    require_projection(q, tol)
    for bp, bq in zip(algebra.block_views(p), algebra.block_views(q)):
        wp = np.sort(np.linalg.eigvalsh(bp))
        wq = np.sort(np.linalg.eigvalsh(bq))
        if float(np.max(np.abs(wp - wq))) > spectral_atol:
            return False
    return True


def orbit_invariant(
    phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[tuple[float, ...], ...]:
    """Unitary-orbit invariant of a positive functional: the strictly positive
    part of the density's spectrum, blockwise, in descending order."""
    require_positive(phi, tol)
    d = herm_part(phi.density)
    wall = np.linalg.eigvalsh(d)
    cutoff = tol.rank_rel_tol * max(float(np.max(wall)), 0.0) if wall.size else 0.0
    out = []
    for b in phi.algebra.block_views(d):
        w = np.sort(np.linalg.eigvalsh(b))[::-1]
        out.append(tuple(float(x) for x in w if x > cutoff))
    return tuple(out)


def orbit_equivalent(
    phi1: NormalFunctional,
    phi2: NormalFunctional,
    tol: ToleranceProfile = DEFAULT_TOL,
    spectral_atol: float = 1e-10,
) -> bool:
    """Whether two positive functionals lie on the same unitary orbit:
    blockwise spectra agree within ``spectral_atol``."""
    require_positive(phi1, tol)
    require_positive(phi2, tol)
    for b1, b2 in zip(
        phi1.algebra.block_views(herm_part(phi1.density)),
        phi2.algebra.block_views(herm_part(phi2.density)),
    ):
        w1 = np.sort(np.linalg.eigvalsh(b1))
        w2 = np.sort(np.linalg.eigvalsh(b2))
        if float(np.max(np.abs(w1 - w2))) > spectral_atol:
            return False
    return True


def unitary_witness(
    phi1: NormalFunctional,
    phi2: NormalFunctional,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> np.ndarray:
    """A unitary ``v`` with ``v d1 v* = d2``, built blockwise from eigenbases
    (requires orbit equivalence)."""
    if not orbit_equivalent(phi1, phi2, tol):
        raise InvalidArrow("functionals lie on different unitary orbits")
    algebra = phi1.algebra
    out = []
    for b1, b2 in zip(
        algebra.block_views(herm_part(phi1.density)),
        algebra.block_views(herm_part(phi2.density)),
    ):
        _, v1 = hermitian_eig(b1, tol)
        _, v2 = hermitian_eig(b2, tol)
        out.append(v2 @ v1.conj().T)
    return algebra.embed_blocks(out)


@dataclass(frozen=True)
class StabilizerData:
    """Real basis of the stabilizer Lie algebra of a positive functional:
    anti-Hermitian corner elements commuting with the density."""

    basis: tuple[np.ndarray, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _spectral_clusters(
    algebra: BlockAlgebra, d: np.ndarray, tol: ToleranceProfile
) -> list[tuple[slice, np.ndarray, np.ndarray, list[list[int]], float]]:
    """Per block: slice, eigenvalues (descending), eigenvectors, gap clusters,
    and the global rank cutoff."""
    d = check_hermitian(d, tol)
    wall = np.linalg.eigvalsh(d)
    cutoff = tol.rank_rel_tol * max(float(np.max(np.abs(wall))), 0.0) if wall.size else 0.0
    out = []
    for s, b in zip(algebra.slices, algebra.block_views(d)):
        w, v = hermitian_eig(b, tol)
        clusters = eigen_clusters(w, tol.rank_rel_tol)
        out.append((s, w, v, clusters, cutoff))
    return out


def centralizer_basis(
    phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
) -> list[np.ndarray]:
    """Complex basis of {x in p0 M p0 : x d = d x} for a positive functional
    with density ``d`` and support ``p0``.

    In each eigenvalue cluster of multiplicity m the commutant contributes a
    full m x m corner, so the complex dimension is the sum of the squared
    multiplicities of the strictly positive clusters.
    """
    require_positive(phi, tol)
    algebra = phi.algebra
    basis: list[np.ndarray] = []
    for s, w, v, clusters, cutoff in _spectral_clusters(
        algebra, herm_part(phi.density), tol
    ):
        n = s.stop - s.start
        for cluster in clusters:
            if w[cluster[0]] <= cutoff:
                continue
            for i in cluster:
                for j in cluster:
                    e = algebra.zero()
                    e[s, s] = np.outer(v[:, i], v[:, j].conj())
                    basis.append(e)
    return basis


def stabilizer_lie_algebra(
    phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
) -> StabilizerData:
    """Real basis of the anti-Hermitian corner elements commuting with the
    density: i-Hermitian combinations within each positive eigenvalue cluster."""
    require_positive(phi, tol)
    algebra = phi.algebra
    basis: list[np.ndarray] = []
    for s, w, v, clusters, cutoff in _spectral_clusters(
        algebra, herm_part(phi.density), tol
    ):
        for cluster in clusters:
            if w[cluster[0]] <= cutoff:
                continue
            for a_pos, i in enumerate(cluster):
                e = algebra.zero()
                e[s, s] = 1j * np.outer(v[:, i], v[:, i].conj())
                basis.append(e)
                for j in cluster[a_pos + 1 :]:
                    m = np.outer(v[:, i], v[:, j].conj())
                    e = algebra.zero()
                    e[s, s] = (m - m.conj().T) / np.sqrt(2.0)
                    basis.append(e)
                    e = algebra.zero()
                    e[s, s] = 1j * (m + m.conj().T) / np.sqrt(2.0)
                    basis.append(e)
    return StabilizerData(tuple(basis))


def pinching_projections(
    phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
) -> list[np.ndarray]:
    """Spectral projections of the density, one per eigenvalue cluster per
    block (kernel clusters included); they sum to the identity."""
    require_positive(phi, tol)
    algebra = phi.algebra
    projections = []
    for s, _, v, clusters, _ in _spectral_clusters(
        algebra, herm_part(phi.density), tol
    ):
        for cluster in clusters:
            cols = v[:, cluster]
            e = algebra.zero()
            e[s, s] = cols @ cols.conj().T
            projections.append(e)
    return projections


def conditional_expectation(
    phi: NormalFunctional, x: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> np.ndarray:
    """State-preserving conditional expectation onto the centralizer of the
    density: the pinching sum q x q over its spectral projections."""
    x = phi.algebra.require_member(x, tol)
    out = phi.algebra.zero()
    for q in pinching_projections(phi, tol):
        out += q @ x @ q
    return out


def modular_automorphism(
    phi: NormalFunctional,
    t: float,
    x: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> np.ndarray:
    """Modular flow ``x -> d^{it} x d^{-it}`` of a faithful positive
    functional."""
    require_positive(phi, tol)
    d = herm_part(phi.density)
    p0 = support_projection(d, tol)
    if projection_rank(p0) != phi.algebra.dim:
        raise NotFaithful("density is not faithful; modular flow undefined")
    x = phi.algebra.require_member(x, tol)
    u = matrix_imaginary_power(d, t, tol)
    return u @ x @ u.conj().T


def coadjoint_apply(
    u: np.ndarray, phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
) -> NormalFunctional:
    """Coadjoint action ``rho -> u rho u*`` of a partial isometry whose source
    projection is the support of ``rho``."""
    require_positive(phi, tol)
    u = phi.algebra.require_member(u, tol)
    p = functional_support(phi, tol)
    if frobenius(u.conj().T @ u - p) > tol.residual_tol * (1.0 + frobenius(p)):
        raise InvalidArrow("source projection of u is not the support of rho")
    return NormalFunctional(phi.algebra, u @ phi.density @ u.conj().T)


def numerical_rank(a: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> int:
    """Numerical rank of a general matrix under the global cutoff policy."""
    s = np.linalg.svd(as_square(a), compute_uv=False)
    return retained_rank(s, tol)
