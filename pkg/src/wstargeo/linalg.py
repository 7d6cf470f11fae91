"""Dense complex matrix kernels with an explicit rank policy.

Every rank-sensitive operation (supports, polar factors, partial inverses,
restricted functional calculus) makes its rank decision once per input,
relative to the largest singular value, and reuses it for all derived
quantities.  Operations whose output is discontinuous across a rank change
(the partial inverse and negative restricted powers) refuse inputs whose
smallest retained singular value sits within a factor ``GUARD_FACTOR`` of
the cutoff, so downstream geometry never sees an ambiguous support.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NoConvergence,
    NotHermitian,
    NotPartiallyInvertible,
    NotPositive,
)

GUARD_FACTOR = 10.0


@dataclass(frozen=True)
class ToleranceProfile:
    """Numerical policy shared by all operations.

    ``rank_rel_tol``  — singular values / eigenvalues below
    ``rank_rel_tol * sigma_max`` are treated as zero;
    ``residual_tol``  — acceptance threshold for algebraic identities;
    ``fd_step``       — default step for central finite differences.
    """

    rank_rel_tol: float = 1e-9
    residual_tol: float = 1e-8
    fd_step: float = 1e-5

    def __post_init__(self) -> None:
        if not (0.0 < self.rank_rel_tol < 1.0):
            raise ValueError("rank_rel_tol must lie strictly between 0 and 1")
        if self.residual_tol <= 0.0 or self.fd_step <= 0.0:
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = ToleranceProfile()


def as_square(a: np.ndarray) -> np.ndarray:
    """Return ``a`` as a square complex ndarray."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def frobenius(a: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(a))


def hs_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr(x* y), antilinear in the first slot."""
    return complex(np.vdot(x, y))


def herm(x: np.ndarray) -> np.ndarray:
    """Hermitian part (x + x*) / 2."""
    return (x + x.conj().T) / 2.0


def antiherm(x: np.ndarray) -> np.ndarray:
    """Anti-Hermitian part (x - x*) / 2."""
    return (x - x.conj().T) / 2.0


def expect_real(z: complex, tol: ToleranceProfile = DEFAULT_TOL, what: str = "value") -> float:
    """Assert that ``z`` is real up to residual tolerance and return its real part."""
    if abs(z.imag) > tol.residual_tol * max(1.0, abs(z)):
        raise NotHermitian(f"{what} has a non-negligible imaginary part: {z!r}")
    return float(z.real)


def check_hermitian(h: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Validate Hermitianity of ``h`` within residual tolerance."""
    h = as_square(h)
    defect = frobenius(h - h.conj().T)
    if defect > tol.residual_tol * (1.0 + frobenius(h)):
        raise NotHermitian(f"matrix is not Hermitian (defect {defect:.3e})")
    return h


def hermitian_eig(
    h: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and a unitary of eigenvectors of a Hermitian matrix.

    Returns ``(w, v)`` with ``h = v @ diag(w) @ v*`` and ``w`` sorted in
    descending order; column ``v[:, i]`` belongs to ``w[i]``.
    """
    h = check_hermitian(h, tol)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - eigh on finite input
        raise NoConvergence(str(exc)) from exc
    return w[::-1].copy(), v[:, ::-1].copy()


def svd(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD ``a = u @ diag(s) @ vh`` with singular values descending."""
    a = as_square(a)
    try:
        return np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - svd on finite input
        raise NoConvergence(str(exc)) from exc


def retained_rank(
    s: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL, guard: bool = False
) -> int:
    """Numerical rank of a descending singular-value sequence.

    Values at or below ``rank_rel_tol * s[0]`` are treated as zero.  With
    ``guard=True`` the decision is refused (:class:`NotPartiallyInvertible`)
    when the smallest retained value lies within ``GUARD_FACTOR`` times the
    cutoff, because the result of a rank-discontinuous operation would then
    depend on noise.
    """
    s = np.asarray(s, dtype=float)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    cutoff = tol.rank_rel_tol * s[0]
    rank = int(np.count_nonzero(s > cutoff))
    if guard and rank > 0 and s[rank - 1] < GUARD_FACTOR * cutoff:
        raise NotPartiallyInvertible(
            f"smallest retained singular value {s[rank - 1]:.3e} is within a "
            f"factor {GUARD_FACTOR:g} of the rank cutoff {cutoff:.3e}"
        )
    return rank


def polar_decompose(
    a: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition ``a = u @ h``.

    ``h = (a* a)^{1/2}`` is positive semidefinite and ``u`` is the partial
    isometry carrying the support of ``h`` onto the range of ``a``; singular
    directions below the rank cutoff are annihilated by ``u``.
    """
    a = as_square(a)
    w, s, vh = svd(a)
    r = retained_rank(s, tol)
    u = w[:, :r] @ vh[:r, :]
    v = vh.conj().T
    h = (v * s) @ v.conj().T
    return u, h


def left_support(a: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Projection onto the range of ``a`` (numerical rank decision)."""
    w, s, _ = svd(a)
    r = retained_rank(s, tol)
    return w[:, :r] @ w[:, :r].conj().T


def right_support(a: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Projection onto the range of ``a*`` (numerical rank decision)."""
    _, s, vh = svd(a)
    r = retained_rank(s, tol)
    return vh[:r, :].conj().T @ vh[:r, :]


def support_projection(h: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Support projection of a positive semidefinite matrix.

    Orthogonal projection onto the span of eigenvectors with eigenvalue above
    ``rank_rel_tol * lambda_max``.
    """
    w, v, _ = _positive_eig(h, tol)
    r = retained_rank(w, tol)
    return v[:, :r] @ v[:, :r].conj().T


def partial_inverse(a: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse under the rank cutoff.

    Satisfies ``a @ partial_inverse(a) = left_support(a)`` and
    ``partial_inverse(a) @ a = right_support(a)``.  Raises
    :class:`NotPartiallyInvertible` when the retained singular values are
    ill-separated from the cutoff (guard band), because the inverse is
    discontinuous across a rank change.
    """
    w, s, vh = svd(a)
    r = retained_rank(s, tol, guard=True)
    if r == 0:
        return np.zeros_like(np.asarray(a, dtype=complex)).T.conj()
    return (vh[:r, :].conj().T / s[:r]) @ w[:, :r].conj().T


def _positive_eig(
    h: np.ndarray, tol: ToleranceProfile
) -> tuple[np.ndarray, np.ndarray, float]:
    """Eigen-data of a positive semidefinite matrix: descending eigenvalues
    (clipped at zero), eigenvectors, and the pre-clip minimum."""
    w, v = hermitian_eig(h, tol)
    wmin = float(w[-1]) if w.size else 0.0
    scale = float(w[0]) if w.size else 0.0
    if wmin < -tol.residual_tol * max(1.0, scale):
        raise NotPositive(f"matrix has a negative eigenvalue ({wmin:.3e})")
    return np.clip(w, 0.0, None), v, wmin


def matrix_sqrt(h: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues below the rank cutoff are treated as kernel and mapped to
    exactly zero; a bare ``sqrt`` would amplify that numerical fuzz to its
    square root.
    """
    return restricted_power(h, 0.5, tol, guard=False)


def restricted_power(
    h: np.ndarray,
    power: float,
    tol: ToleranceProfile = DEFAULT_TOL,
    guard: bool | None = None,
) -> np.ndarray:
    """``h ** power`` through functional calculus on the support of ``h``.

    Eigenvalues above the rank cutoff are raised to ``power``; the kernel is
    mapped to zero.  Negative powers are guarded like the partial inverse
    (``guard`` defaults to ``power < 0``).
    """
    if guard is None:
        guard = power < 0.0
    w, v, _ = _positive_eig(h, tol)
    r = retained_rank(w, tol, guard=guard)
    vals = np.zeros_like(w)
    vals[:r] = w[:r] ** power
    return (v * vals) @ v.conj().T


def matrix_log_restricted(h: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Logarithm of a positive semidefinite matrix, restricted to its support."""
    w, v, _ = _positive_eig(h, tol)
    r = retained_rank(w, tol)
    vals = np.zeros_like(w)
    vals[:r] = np.log(w[:r])
    return (v * vals) @ v.conj().T


def matrix_imaginary_power(
    h: np.ndarray, t: float, tol: ToleranceProfile = DEFAULT_TOL
) -> np.ndarray:
    """``h ** (i t)`` on the support of ``h``, zero off the support.

    Unitary on the support; the empty-support convention is ``0 ** (i t) = 0``.
    """
    w, v, _ = _positive_eig(h, tol)
    r = retained_rank(w, tol)
    vals = np.zeros(w.shape, dtype=complex)
    vals[:r] = np.exp(1j * t * np.log(w[:r]))
    return (v * vals) @ v.conj().T


def is_partial_isometry(u: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """Whether ``u* u`` is a projection within residual tolerance."""
    u = np.asarray(u, dtype=complex)
    p = u.conj().T @ u
    return frobenius(p @ p - p) <= tol.residual_tol * (1.0 + frobenius(p))


def is_projection(p: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """Whether ``p`` is a Hermitian idempotent within residual tolerance."""
    p = np.asarray(p, dtype=complex)
    scale = 1.0 + frobenius(p)
    return (
        frobenius(p - p.conj().T) <= tol.residual_tol * scale
        and frobenius(p @ p - p) <= tol.residual_tol * scale
    )


def projection_rank(p: np.ndarray) -> int:
    """Rank of a projection, read off its trace."""
    return int(round(float(np.trace(p).real)))


def eigen_clusters(w: np.ndarray, rel_gap: float) -> list[list[int]]:
    """Group indices of a descending eigenvalue sequence into clusters.

    A new cluster starts wherever the gap between consecutive eigenvalues
    exceeds ``rel_gap * max(|w|)``.  A zero sequence forms one cluster.
    """
    w = np.asarray(w, dtype=float)
    if w.size == 0:
        return []
    scale = float(np.max(np.abs(w)))
    if scale == 0.0:
        return [list(range(w.size))]
    clusters: list[list[int]] = [[0]]
    for i in range(1, w.size):
        if w[i - 1] - w[i] > rel_gap * scale:
            clusters.append([i])
        else:
            clusters[-1].append(i)
    return clusters
