"""Standard form of a block algebra on its Hilbert–Schmidt space.

The algebra acts by left multiplication on itself with inner product
``<x|y> = Tr(x* y)``; the modular conjugation is ``J(g) = g*``, the positive
cone is the set of positive matrices, and every normal positive functional
``phi`` has the canonical vector representative ``d_phi^{1/2}``.  Vectors
``g`` carry two expectations — ``E(g)`` with density ``g g*`` and ``E'(g)``
with density ``g* g`` — whose supports are the momentum projections.  The
polar decomposition of vectors induces a groupoid structure on the Hilbert
space itself (source/target the two expectations, product through the shared
modulus, inverse ``J``), isomorphic to the coadjoint-action groupoid via
``Phi(u, rho) = u d_rho^{1/2}``.

Modular data of a positive functional: the relative operator
``Delta(g) = d g d^+``, the closure ``S = J Delta^{1/2}`` acting as
``S(x d^{1/2}) = x* d^{1/2}``, and for faithful functionals the modular flow
``g -> d^{it} g d^{-it}`` implementing the modular automorphism group on
vectors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sampling
from .algebra import (
    BlockAlgebra,
    NormalFunctional,
    functional_support,
    orbit_invariant,
    require_positive,
)
from .errors import (
    DegenerateBase,
    InvalidArrow,
    InvalidTrials,
    NotComposable,
    NotFaithful,
)
from .linalg import (
    DEFAULT_TOL,
    ToleranceProfile,
    frobenius,
    herm,
    hs_inner,
    is_partial_isometry,
    left_support,
    matrix_sqrt,
    partial_inverse,
    polar_decompose,
    restricted_power,
    retained_rank,
    right_support,
    support_projection,
)

# ---------------------------------------------------------------------------
# Hilbert-space structure


def symplectic_omega(x: np.ndarray, y: np.ndarray) -> float:
    """Canonical symplectic form omega(x, y) = 2 Im <x|y> on the
    Hilbert–Schmidt space."""
    return 2.0 * float(hs_inner(x, y).imag)


def conjugation_J(g: np.ndarray) -> np.ndarray:
    """Modular conjugation J(g) = g*."""
    return np.asarray(g, dtype=complex).conj().T


def cone_member(g: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """True when g lies in the positive cone (g is a positive matrix)."""
    g = np.asarray(g, dtype=complex)
    if frobenius(g - g.conj().T) > tol.residual_tol * (1.0 + frobenius(g)):
        return False
    w = np.linalg.eigvalsh(herm(g))
    return bool(w.min(initial=0.0) >= -tol.residual_tol * max(1.0, w.max(initial=0.0)))


def expectation_E(algebra: BlockAlgebra, g: np.ndarray) -> NormalFunctional:
    """Left expectation of the vector g: the functional with density g g*."""
    g = np.asarray(g, dtype=complex)
    return NormalFunctional(algebra, g @ g.conj().T)


def expectation_Eprime(algebra: BlockAlgebra, g: np.ndarray) -> NormalFunctional:
    """Right expectation of the vector g: the functional with density g* g."""
    g = np.asarray(g, dtype=complex)
    return NormalFunctional(algebra, g.conj().T @ g)


def momentum_mu(g: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Left momentum projection: the support of g g*."""
    return left_support(g, tol)


def momentum_mu_prime(
    g: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> np.ndarray:
    """Right momentum projection: the support of g* g."""
    return right_support(g, tol)


# ---------------------------------------------------------------------------
# standard groupoid on the Hilbert space


def std_source(
    algebra: BlockAlgebra, g: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> NormalFunctional:
    """Source of a vector arrow: the right expectation E'(g)."""
    return expectation_Eprime(algebra, g)


def std_target(
    algebra: BlockAlgebra, g: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> NormalFunctional:
    """Target of a vector arrow: the left expectation E(g)."""
    return expectation_E(algebra, g)


def std_unit(
    phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
) -> np.ndarray:
    """Unit arrow at a positive functional: its canonical vector d^{1/2}."""
    require_positive(phi, tol)
    return matrix_sqrt(phi.density, tol)


def std_inverse(g: np.ndarray) -> np.ndarray:
    """Groupoid inverse of a vector arrow: the modular conjugation J(g) = g*."""
    return conjugation_J(g)


def std_mul(
    g1: np.ndarray,
    g2: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
    repair: bool = False,
) -> np.ndarray:
    """Vector product u1 u2 |g2| through the polar decompositions
    g_j = u_j |g_j|, defined when |g1| = u2 |g2| u2* (source of g1 equals
    target of g2).

    With ``repair=True`` the left factor's modulus is replaced by the right
    factor's target modulus — exactly what the product consumes — so the
    matching check is waived.
    """
    u1, h1 = polar_decompose(g1, tol)
    u2, h2 = polar_decompose(g2, tol)
    if not repair:
        gap = frobenius(h1 - u2 @ h2 @ u2.conj().T)
        if gap > tol.residual_tol * (1.0 + frobenius(h1)):
            raise NotComposable(f"source of g1 != target of g2 (gap {gap:.3e})")
    return u1 @ u2 @ h2


# ---------------------------------------------------------------------------
# isomorphism with the coadjoint-action groupoid


def iso_Phi(u: np.ndarray, rho: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Phi(u, rho) = u d_rho^{1/2}: coadjoint arrows to vector arrows."""
    return np.asarray(u, dtype=complex) @ matrix_sqrt(rho.density, tol)


def iso_Phi_inv(
    algebra: BlockAlgebra, g: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[np.ndarray, NormalFunctional]:
    """Inverse of Phi: the polar isometry of g together with the source
    functional of density g* g."""
    u, _ = polar_decompose(g, tol)
    return u, expectation_Eprime(algebra, g)


def phi_intertwining_residual(
    algebra: BlockAlgebra,
    a,
    b,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """Worst deviation of Phi from commuting with source, target, unit,
    inverse, and product on a composable pair of coadjoint arrows."""
    from .groupoids import (
        CoadjointArrow,
        coadjoint_compose,
        coadjoint_inverse,
        coadjoint_source,
        coadjoint_target,
        coadjoint_unit,
    )

    ga = iso_Phi(a.u, a.rho, tol)
    gb = iso_Phi(b.u, b.rho, tol)
    prod = coadjoint_compose(a, b, tol)
    unit = coadjoint_unit(a.rho, tol)
    ua, rho_a = iso_Phi_inv(algebra, ga, tol)
    res = [
        std_source(algebra, ga, tol).distance(coadjoint_source(a)),
        std_target(algebra, ga, tol).distance(coadjoint_target(a)),
        frobenius(std_inverse(ga) - iso_Phi(*_arrow_parts(coadjoint_inverse(a)), tol)),
        frobenius(std_unit(a.rho, tol) - iso_Phi(*_arrow_parts(unit), tol)),
        frobenius(std_mul(ga, gb, tol) - iso_Phi(*_arrow_parts(prod), tol)),
        max(frobenius(ua - a.u), rho_a.distance(a.rho)),
    ]
    return max(res)


def _arrow_parts(arrow) -> tuple[np.ndarray, NormalFunctional]:
    return arrow.u, arrow.rho


# ---------------------------------------------------------------------------
# algebra actions on vectors


def beta_action(u: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Adjoint action beta(u) g = u g u* of a partial isometry on vectors."""
    return u @ g @ u.conj().T


def theta_action(
    u: np.ndarray, g: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> np.ndarray:
    """Left translation theta(u) g = u g, defined for partial isometries with
    u* u = mu(g) (source equal to the left momentum of g)."""
    if not is_partial_isometry(u, tol):
        raise InvalidArrow("u is not a partial isometry")
    mu = momentum_mu(g, tol)
    if frobenius(u.conj().T @ u - mu) > tol.residual_tol * (1.0 + frobenius(mu)):
        raise InvalidArrow("u* u is not the left momentum of g")
    return u @ g


def transport_witness(
    g1: np.ndarray, g2: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> np.ndarray:
    """Partial isometry w with w g1 = g2 and w* w = mu(g1), when g2 lies on
    the left-translation orbit of g1 (same right expectation).  Raises
    InvalidArrow otherwise."""
    if frobenius(g1.conj().T @ g1 - g2.conj().T @ g2) > tol.residual_tol * (
        1.0 + frobenius(g1) ** 2
    ):
        raise InvalidArrow("g1 and g2 have different right expectations")
    w = g2 @ partial_inverse(g1, tol)
    if frobenius(w @ g1 - g2) > tol.residual_tol * (1.0 + frobenius(g2)):
        raise InvalidArrow("no partial isometry transports g1 to g2")
    return w


# ---------------------------------------------------------------------------
# fibre kernels of the two expectations


def _realified_kernel(
    algebra: BlockAlgebra,
    constraint: "callable",
    support_side: "callable",
    tol: ToleranceProfile,
) -> list[np.ndarray]:
    """Real basis of {delta : constraint(delta) = 0, support_side(delta) =
    delta} inside the algebra, via the SVD nullspace of the realified
    constraint over the coordinate units."""
    units = algebra.coordinate_units()
    directions = [c * e for e in units for c in (1.0, 1.0j)]
    rows = []
    for d in directions:
        c1 = constraint(d)
        c2 = support_side(d) - d
        rows.append(
            np.concatenate(
                [c1.real.ravel(), c1.imag.ravel(), c2.real.ravel(), c2.imag.ravel()]
            )
        )
    mat = np.array(rows).T  # columns indexed by real directions
    if mat.shape[0] == 0:
        return list(directions)
    _, s, vt = np.linalg.svd(mat)
    scale = max(s[0], 1.0) if s.size else 1.0
    rank = int(np.sum(s > tol.rank_rel_tol * scale))
    kernel_rows = vt[rank:]
    basis = []
    for coeffs in kernel_rows:
        vec = sum(c * d for c, d in zip(coeffs, directions))
        basis.append(vec)
    return basis


def fiber_kernel_E(
    algebra: BlockAlgebra, g: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> list[np.ndarray]:
    """Real basis of the kernel of the differential of E at g: directions
    delta in the algebra with delta g* + g delta* = 0 and
    supp(g g*) delta = delta.  Raises DegenerateBase at g = 0."""
    g = np.asarray(g, dtype=complex)
    if frobenius(g) <= 1e-12:
        raise DegenerateBase("the expectation differential has no fibre at zero")
    mu = momentum_mu(g, tol)
    return _realified_kernel(
        algebra,
        lambda d: d @ g.conj().T + g @ d.conj().T,
        lambda d: mu @ d,
        tol,
    )


def fiber_kernel_Eprime(
    algebra: BlockAlgebra, g: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> list[np.ndarray]:
    """Real basis of the kernel of the differential of E' at g: directions
    delta with g* delta + delta* g = 0 and delta supp(g* g) = delta."""
    g = np.asarray(g, dtype=complex)
    if frobenius(g) <= 1e-12:
        raise DegenerateBase("the expectation differential has no fibre at zero")
    mu_p = momentum_mu_prime(g, tol)
    return _realified_kernel(
        algebra,
        lambda d: g.conj().T @ d + d.conj().T @ g,
        lambda d: d @ mu_p,
        tol,
    )


def fiber_kernel_dimension(algebra: BlockAlgebra, rank_per_block: list[int]) -> int:
    """Real dimension of either expectation's fibre kernel at a vector whose
    blockwise momentum ranks are ``rank_per_block``: per block
    r^2 + 2 r (n - r)."""
    return sum(
        r * r + 2 * r * (n - r) for r, n in zip(rank_per_block, algebra.blocks)
    )


@dataclass(frozen=True)
class DualPairReport:
    """Residuals of the dual-pair relations at one vector: the symplectic
    form vanishes between the two fibre kernels, and their dimensions match
    the blockwise rank formula."""

    orthogonality: float
    dim_E: int
    dim_Eprime: int
    expected_dim_E: int
    expected_dim_Eprime: int

    @property
    def dimension_residual(self) -> int:
        return max(
            abs(self.dim_E - self.expected_dim_E),
            abs(self.dim_Eprime - self.expected_dim_Eprime),
        )


def dual_pair_orthogonality_check(
    algebra: BlockAlgebra, g: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL
) -> DualPairReport:
    """Evaluate omega on all pairs from fibre_kernel_E(g) x
    fiber_kernel_Eprime(g) and compare both kernel dimensions to the rank
    formula."""
    ker_e = fiber_kernel_E(algebra, g, tol)
    ker_ep = fiber_kernel_Eprime(algebra, g, tol)
    worst = 0.0
    for x in ker_e:
        for y in ker_ep:
            worst = max(worst, abs(symplectic_omega(x, y)))
    ranks_left = _block_ranks_of_support(algebra, momentum_mu(g, tol))
    ranks_right = _block_ranks_of_support(algebra, momentum_mu_prime(g, tol))
    return DualPairReport(
        orthogonality=worst,
        dim_E=len(ker_e),
        dim_Eprime=len(ker_ep),
        expected_dim_E=fiber_kernel_dimension(algebra, ranks_left),
        expected_dim_Eprime=fiber_kernel_dimension(algebra, ranks_right),
    )


def _block_ranks_of_support(algebra: BlockAlgebra, p: np.ndarray) -> list[int]:
    return [
        int(round(float(np.trace(p[sl, sl]).real))) for sl in algebra.slices
    ]


def j_split(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a vector into its J-fixed and J-anti-fixed parts
    (g ± J g) / 2 = (Hermitian, anti-Hermitian) components."""
    g = np.asarray(g, dtype=complex)
    plus = 0.5 * (g + conjugation_J(g))
    return plus, g - plus


# ---------------------------------------------------------------------------
# modular structure


@dataclass(frozen=True)
class ModularData:
    """Modular data of a positive functional in the standard form: the
    density d, its square root (the canonical vector), and its support."""

    algebra: BlockAlgebra
    density: np.ndarray
    tol: ToleranceProfile = DEFAULT_TOL

    @classmethod
    def from_functional(
        cls, phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
    ) -> "ModularData":
        require_positive(phi, tol)
        return cls(algebra=phi.algebra, density=phi.density, tol=tol)

    @property
    def vector(self) -> np.ndarray:
        """Canonical cone representative d^{1/2}."""
        return matrix_sqrt(self.density, self.tol)

    @property
    def support(self) -> np.ndarray:
        return support_projection(self.density, self.tol)

    @property
    def faithful(self) -> bool:
        n = self.algebra.dim
        s = np.linalg.svd(np.asarray(self.density, dtype=complex), compute_uv=False)
        return retained_rank(s, self.tol) == n if s.size else n == 0


def modular_Delta(
    mod: ModularData, g: np.ndarray, power: float = 1.0
) -> np.ndarray:
    """Relative modular operator Delta^power(g) = d^power g (d^+)^power,
    with both powers restricted to the support of d."""
    d = mod.density
    left = restricted_power(d, power, mod.tol)
    right = restricted_power(d, -power, mod.tol, guard=False)
    return left @ g @ right


def tomita_S(mod: ModularData, g: np.ndarray) -> np.ndarray:
    """Closure of the map x d^{1/2} -> x* d^{1/2}: S(g) = J Delta^{1/2} g =
    (d^+)^{1/2} g* d^{1/2}."""
    d = mod.density
    half = restricted_power(d, 0.5, mod.tol)
    half_inv = restricted_power(d, -0.5, mod.tol, guard=False)
    return half_inv @ conjugation_J(g) @ half


def canonical_implementation(
    mod: ModularData, t: float, g: np.ndarray
) -> np.ndarray:
    """Modular flow on vectors, g -> d^{it} g d^{-it}; defined for faithful
    densities only."""
    if not mod.faithful:
        raise NotFaithful("the modular flow requires a faithful density")
    from .linalg import matrix_imaginary_power

    u = matrix_imaginary_power(mod.density, t, mod.tol)
    return u @ g @ u.conj().T


@dataclass(frozen=True)
class FlowReport:
    """Worst residuals of the modular-flow invariances over the sampled
    vectors: groupoid multiplicativity, symplectic invariance, positive-cone
    preservation, J-covariance, orbit-invariant preservation, and the
    one-parameter group law."""

    t: float
    samples: int
    seed: int
    residuals: dict[str, float]

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


def flow_automorphism_check(
    mod: ModularData,
    t: float,
    samples: int,
    seed: int,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> FlowReport:
    """Verify on random data that the modular flow at time t is an
    automorphism of the standard groupoid preserving omega, the positive
    cone, J, and the spectral data of the expectations."""
    if samples < 1:
        raise InvalidTrials("samples must be a positive integer")
    if not mod.faithful:
        raise NotFaithful("the modular flow requires a faithful density")
    algebra = mod.algebra
    flow = lambda g: canonical_implementation(mod, t, g)  # noqa: E731
    worst: dict[str, float] = {
        "multiplicativity": 0.0,
        "symplectic": 0.0,
        "cone": 0.0,
        "conjugation": 0.0,
        "orbit_invariants": 0.0,
        "group_law": 0.0,
    }
    for k in range(samples):
        rng = sampling.rng_for(seed, 17, k)
        q1 = sampling.random_projection(algebra, rng)
        q0 = sampling.equivalent_projection(algebra, rng, q1)
        q2 = sampling.equivalent_projection(algebra, rng, q1)
        u1 = sampling.partial_isometry_onto(algebra, rng, q1, q0, tol)
        u2 = sampling.partial_isometry_onto(algebra, rng, q2, q1, tol)
        h2 = sampling.corner_positive(algebra, rng, q2, tol=tol)
        g2 = u2 @ h2
        g1 = u1 @ (u2 @ h2 @ u2.conj().T)
        prod = std_mul(g1, g2, tol)
        worst["multiplicativity"] = max(
            worst["multiplicativity"],
            frobenius(flow(prod) - std_mul(flow(g1), flow(g2), tol)),
        )
        x = sampling.random_element(algebra, rng)
        y = sampling.random_element(algebra, rng)
        worst["symplectic"] = max(
            worst["symplectic"],
            abs(symplectic_omega(flow(x), flow(y)) - symplectic_omega(x, y)),
        )
        pos = sampling.random_positive(algebra, rng)
        fp = flow(pos)
        wmin = float(np.linalg.eigvalsh(herm(fp)).min())
        worst["cone"] = max(
            worst["cone"],
            max(0.0, -wmin) + frobenius(fp - fp.conj().T),
        )
        worst["conjugation"] = max(
            worst["conjugation"],
            frobenius(flow(conjugation_J(x)) - conjugation_J(flow(x))),
        )
        inv_before = orbit_invariant(expectation_E(algebra, g1), tol)
        inv_after = orbit_invariant(expectation_E(algebra, flow(g1)), tol)
        worst["orbit_invariants"] = max(
            worst["orbit_invariants"],
            _invariant_distance(inv_before, inv_after),
        )
        s = 0.5 * t + 0.1
        comp = canonical_implementation(mod, s, flow(x))
        direct = canonical_implementation(mod, s + t, x)
        worst["group_law"] = max(worst["group_law"], frobenius(comp - direct))
    return FlowReport(t=t, samples=samples, seed=seed, residuals=worst)


def _invariant_distance(
    a: tuple[tuple[float, ...], ...], b: tuple[tuple[float, ...], ...]
) -> float:
    if len(a) != len(b):
        return float("inf")
    worst = 0.0
    for xs, ys in zip(a, b):
        if len(xs) != len(ys):
            return float("inf")
        for x, y in zip(xs, ys):
            worst = max(worst, abs(x - y))
    return worst
