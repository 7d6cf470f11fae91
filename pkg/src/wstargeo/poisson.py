"""Poisson structures carried by the dual of a block algebra and the
symplectic structure on its standard-form Hilbert space, together with the
compatibility checks connecting them.

On the Hermitian functionals the Lie–Poisson bracket is
``{f, g}(phi) = -i Tr(d [df, dg])`` with Hamiltonian field ``i [df, d]``
tangent to the unitary orbit of the density ``d``.  On the Hilbert space the
canonical bracket of real observables is ``2 Im <grad F | grad G>`` for the
symplectic form ``omega = 2 Im <.|.>``; the expectation ``E`` (density
``g g*``) is a Poisson map between the two, expectations through ``E`` and
``E'`` Poisson-commute, and on unitary orbits the canonical structure
restricts to the orbit two-form with a calibration constant fixed once by a
rank-one reference instance (Fubini–Study geometry).

Composable curve families through the standard groupoid provide the
multiplicativity and exactness checks of the symplectic form: the form adds
over the groupoid product, and the primitive ``Tr(g* dg)`` is compatible
with multiplication up to the source-modulus term.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from . import sampling
from .algebra import (
    BlockAlgebra,
    NormalFunctional,
    functional_support,
    require_positive,
    stabilizer_lie_algebra,
)
from .charts import Gamma0, dGamma0
from .errors import (
    DegenerateBase,
    DomainError,
    InvalidFamily,
    InvalidTangent,
    NotUnitVector,
)
from .linalg import (
    DEFAULT_TOL,
    ToleranceProfile,
    check_hermitian,
    expect_real,
    frobenius,
    herm,
    hermitian_eig,
    hs_inner,
    is_partial_isometry,
    projection_rank,
)
from .standard import (
    expectation_E,
    expectation_Eprime,
    std_mul,
    std_unit,
    symplectic_omega,
)

# ---------------------------------------------------------------------------
# observables on the functional side


@dataclass(frozen=True, eq=False)
class Observable:
    """Real function of a Hermitian functional, with an optional analytic
    differential (a Hermitian algebra element); when absent the differential
    is taken by central differences along an orthonormal Hermitian basis."""

    value: Callable[[NormalFunctional], float]
    differential: Callable[[NormalFunctional], np.ndarray] | None = None

    def value_at(self, phi: NormalFunctional) -> float:
        return float(self.value(phi))

    def differential_at(
        self, phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
    ) -> np.ndarray:
        if self.differential is not None:
            return check_hermitian(self.differential(phi), tol)
        h = tol.fd_step
        grad = phi.algebra.zero()
        for e in phi.algebra.hermitian_units():
            plus = NormalFunctional(phi.algebra, phi.density + h * e)
            minus = NormalFunctional(phi.algebra, phi.density - h * e)
            grad = grad + ((self.value_at(plus) - self.value_at(minus)) / (2 * h)) * e
        return grad

    @classmethod
    def linear(cls, x: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> "Observable":
        """The evaluation observable phi -> phi(x) for Hermitian x."""
        x = check_hermitian(np.asarray(x, dtype=complex), tol)
        return cls(
            value=lambda phi: float(phi(x).real),
            differential=lambda phi: x,
        )

    @classmethod
    def quadratic(cls, x: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> "Observable":
        """phi -> Tr(d^2 x) for Hermitian x, with differential d x + x d."""
        x = check_hermitian(np.asarray(x, dtype=complex), tol)
        return cls(
            value=lambda phi: float(np.trace(phi.density @ phi.density @ x).real),
            differential=lambda phi: herm(phi.density @ x + x @ phi.density),
        )

    def times(self, other: "Observable") -> "Observable":
        """Pointwise product, with the Leibniz differential
        f dg + g df."""
        return Observable(
            value=lambda phi: self.value_at(phi) * other.value_at(phi),
            differential=lambda phi, _f=self, _g=other: _f.value_at(phi)
            * _g.differential_at(phi)
            + _g.value_at(phi) * _f.differential_at(phi),
        )


def lp_bracket(
    f: Observable,
    g: Observable,
    phi: NormalFunctional,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """Lie–Poisson bracket {f, g}(phi) = -i Tr(d [df, dg])."""
    df = f.differential_at(phi, tol)
    dg = g.differential_at(phi, tol)
    value = -1j * np.trace(phi.density @ (df @ dg - dg @ df))
    return expect_real(value, tol, "Lie-Poisson bracket")


def hamiltonian_field(
    f: Observable, phi: NormalFunctional, tol: ToleranceProfile = DEFAULT_TOL
) -> np.ndarray:
    """Hamiltonian vector field of f at phi, as the density-space direction
    i [df, d]; it is Hermitian, traceless, and tangent to the unitary orbit
    of the density."""
    df = f.differential_at(phi, tol)
    d = phi.density
    return 1j * (df @ d - d @ df)


def field_duality_residual(
    f: Observable,
    g: Observable,
    phi: NormalFunctional,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """|Tr(X_f dg) - {f, g}(phi)|: the Hamiltonian field reproduces the
    bracket through the dual pairing."""
    field = hamiltonian_field(f, phi, tol)
    dg = g.differential_at(phi, tol)
    paired = expect_real(np.trace(field @ dg), tol, "field pairing")
    return abs(paired - lp_bracket(f, g, phi, tol))


def jacobi_residual(
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    phi: NormalFunctional,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """Jacobi identity on evaluation observables, using the closure
    {f_x, f_y} = f_{-i[x,y]} of the bracket on linear functions."""

    def closure(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return herm(-1j * (a @ b - b @ a))

    total = (
        lp_bracket(Observable.linear(x, tol), Observable.linear(closure(y, z), tol), phi, tol)
        + lp_bracket(Observable.linear(y, tol), Observable.linear(closure(z, x), tol), phi, tol)
        + lp_bracket(Observable.linear(z, tol), Observable.linear(closure(x, y), tol), phi, tol)
    )
    return abs(total)


def linear_closure_residual(
    x: np.ndarray,
    y: np.ndarray,
    phi: NormalFunctional,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """|{f_x, f_y}(phi) - phi(-i[x,y])|: the bracket of evaluations is the
    evaluation of -i[x, y]."""
    lhs = lp_bracket(Observable.linear(x, tol), Observable.linear(y, tol), phi, tol)
    rhs = expect_real(phi(herm(-1j * (x @ y - y @ x))), tol, "closure evaluation")
    return abs(lhs - rhs)


def leibniz_residual(
    f: Observable,
    g: Observable,
    h: Observable,
    phi: NormalFunctional,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """|{f, g h} - {f, g} h - g {f, h}| at phi."""
    lhs = lp_bracket(f, g.times(h), phi, tol)
    rhs = lp_bracket(f, g, phi, tol) * h.value_at(phi) + g.value_at(phi) * lp_bracket(
        f, h, phi, tol
    )
    return abs(lhs - rhs)


def field_morphism_residual(
    x: np.ndarray,
    y: np.ndarray,
    phi: NormalFunctional,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """The Hamiltonian field of the bracket closure equals the commutator of
    the two fields (as linear maps on density directions, composed in the
    order field-of-y after field-of-x minus the reverse)."""
    d = phi.density
    z = herm(-1j * (x @ y - y @ x))
    lhs = hamiltonian_field(Observable.linear(z, tol), phi, tol)

    def field_of(a: np.ndarray, at: np.ndarray) -> np.ndarray:
        return 1j * (a @ at - at @ a)

    rhs = field_of(y, field_of(x, d)) - field_of(x, field_of(y, d))
    return frobenius(lhs - rhs)


def orbit_drift(
    f: Observable,
    phi: NormalFunctional,
    eps: float,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """Largest blockwise spectral drift of the density after one Euler step
    of size eps along the Hamiltonian field; the field is orbit-tangent, so
    the drift is second order in eps."""
    field = hamiltonian_field(f, phi, tol)
    worst = 0.0
    for b0, b1 in zip(
        phi.algebra.block_views(herm(phi.density)),
        phi.algebra.block_views(herm(phi.density + eps * field)),
    ):
        w0 = np.sort(np.linalg.eigvalsh(b0))
        w1 = np.sort(np.linalg.eigvalsh(b1))
        if w0.size:
            worst = max(worst, float(np.max(np.abs(w1 - w0))))
    return worst


# ---------------------------------------------------------------------------
# observables on the Hilbert-space side


@dataclass(frozen=True, eq=False)
class HilbertObservable:
    """Real function of a standard-form vector, with an optional analytic
    gradient (the algebra element G with dF(delta) = 2 Re <G|delta>); when
    absent the gradient is assembled from central differences through the
    coordinate units."""

    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray] | None = None

    def value_at(self, g: np.ndarray) -> float:
        return float(self.value(g))

    def gradient_at(
        self,
        algebra: BlockAlgebra,
        g: np.ndarray,
        tol: ToleranceProfile = DEFAULT_TOL,
    ) -> np.ndarray:
        if self.gradient is not None:
            return self.gradient(g)
        h = tol.fd_step
        grad = algebra.zero()

        def deriv(direction: np.ndarray) -> float:
            return (self.value_at(g + h * direction) - self.value_at(g - h * direction)) / (
                2 * h
            )

        for e in algebra.coordinate_units():
            grad = grad + 0.5 * (deriv(e) + 1j * deriv(1j * e)) * e
        return grad

    @classmethod
    def quadratic(cls, x: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL) -> "HilbertObservable":
        """g -> Tr(g g* x) = <g|x g> for Hermitian x, with gradient x g."""
        x = check_hermitian(np.asarray(x, dtype=complex), tol)
        return cls(
            value=lambda g: float(np.trace(g @ g.conj().T @ x).real),
            gradient=lambda g: x @ g,
        )

    @classmethod
    def norm_squared(cls) -> "HilbertObservable":
        return cls(value=lambda g: float(hs_inner(g, g).real), gradient=lambda g: g)

    @classmethod
    def pullback_E(
        cls,
        f: Observable,
        algebra: BlockAlgebra,
        tol: ToleranceProfile = DEFAULT_TOL,
    ) -> "HilbertObservable":
        """Pullback of a functional observable through the left expectation:
        F(g) = f(E(g)), gradient df(E(g)) g."""
        return cls(
            value=lambda g: f.value_at(expectation_E(algebra, g)),
            gradient=lambda g: f.differential_at(expectation_E(algebra, g), tol) @ g,
        )

    @classmethod
    def pullback_Eprime(
        cls,
        f: Observable,
        algebra: BlockAlgebra,
        tol: ToleranceProfile = DEFAULT_TOL,
    ) -> "HilbertObservable":
        """Pullback through the right expectation: F(g) = f(E'(g)), gradient
        g df(E'(g))."""
        return cls(
            value=lambda g: f.value_at(expectation_Eprime(algebra, g)),
            gradient=lambda g: g @ f.differential_at(expectation_Eprime(algebra, g), tol),
        )


def canonical_bracket(
    F: HilbertObservable,
    G: HilbertObservable,
    algebra: BlockAlgebra,
    g: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """Canonical bracket {F, G}(g) = 2 Im <grad F | grad G> of the symplectic
    form omega = 2 Im <.|.>; the Hamiltonian field of F is -i grad F."""
    gf = F.gradient_at(algebra, g, tol)
    gg = G.gradient_at(algebra, g, tol)
    return 2.0 * float(hs_inner(gf, gg).imag)


def poisson_map_residual(
    f: Observable,
    g: Observable,
    algebra: BlockAlgebra,
    gamma: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """|{f o E, g o E}_canonical(gamma) - {f, g}_Lie-Poisson(E(gamma))|:
    the left expectation is a Poisson map."""
    F = HilbertObservable.pullback_E(f, algebra, tol)
    G = HilbertObservable.pullback_E(g, algebra, tol)
    lhs = canonical_bracket(F, G, algebra, gamma, tol)
    rhs = lp_bracket(f, g, expectation_E(algebra, gamma), tol)
    return abs(lhs - rhs)


def commutant_bracket_check(
    f: Observable,
    g: Observable,
    algebra: BlockAlgebra,
    gamma: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """|{f o E, g o E'}(gamma)|: observables pulled back through the two
    expectations Poisson-commute."""
    F = HilbertObservable.pullback_E(f, algebra, tol)
    G = HilbertObservable.pullback_Eprime(g, algebra, tol)
    return abs(canonical_bracket(F, G, algebra, gamma, tol))


# ---------------------------------------------------------------------------
# composable curve families through the standard groupoid


@dataclass(frozen=True, eq=False)
class ComposableFamily:
    """Curve t -> (gamma1(t), gamma2(t)) of composable standard-groupoid
    arrows with analytic tangents.

    The base is a composable pair built from partial isometries u1, u2 and a
    positive corner element xi2 with u1* u1 = u2 u2* and u2* u2 = supp(xi2):

        gamma2(t) = u2(t) xi2(t),
        gamma1(t) = u1(t) [u2(t) xi2(t) u2(t)*],
        product   = u1(t) u2(t) xi2(t),

    where u1(t) = exp(t a1) u1 exp(-t a2), u2(t) = exp(t a2) u2 exp(t b2),
    xi2(t) = exp(t h2) xi2 exp(t h2).  The right generator of u1 is locked to
    -a2 and b2 commutes with supp(xi2), which keeps the pair composable for
    every t, not only to first order.
    """

    algebra: BlockAlgebra
    u1: np.ndarray
    u2: np.ndarray
    xi2: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    b2: np.ndarray
    h2: np.ndarray
    tol: ToleranceProfile = DEFAULT_TOL

    def __post_init__(self) -> None:
        tol = self.tol
        if frobenius(self.xi2 - self.xi2.conj().T) > tol.residual_tol:
            raise InvalidFamily("xi2 is not Hermitian")
        wmin = float(np.linalg.eigvalsh(herm(self.xi2)).min())
        if wmin < -tol.residual_tol:
            raise InvalidFamily("xi2 is not positive")
        q2 = sampling.support_projection_of(self.xi2, tol)
        checks = {
            "u1 is not a partial isometry": not is_partial_isometry(self.u1, tol),
            "u2 is not a partial isometry": not is_partial_isometry(self.u2, tol),
            "u1* u1 != u2 u2*": frobenius(
                self.u1.conj().T @ self.u1 - self.u2 @ self.u2.conj().T
            )
            > tol.residual_tol,
            "u2* u2 != supp(xi2)": frobenius(self.u2.conj().T @ self.u2 - q2)
            > tol.residual_tol,
            "a1 is not anti-Hermitian": frobenius(self.a1 + self.a1.conj().T)
            > tol.residual_tol,
            "a2 is not anti-Hermitian": frobenius(self.a2 + self.a2.conj().T)
            > tol.residual_tol,
            "b2 is not anti-Hermitian": frobenius(self.b2 + self.b2.conj().T)
            > tol.residual_tol,
            "b2 does not commute with supp(xi2)": frobenius(self.b2 @ q2 - q2 @ self.b2)
            > tol.residual_tol,
            "h2 is not a Hermitian corner element": frobenius(
                self.h2 - q2 @ self.h2 @ q2
            )
            + frobenius(self.h2 - self.h2.conj().T)
            > tol.residual_tol,
        }
        for message, failed in checks.items():
            if failed:
                raise InvalidFamily(message)

    @property
    def b1(self) -> np.ndarray:
        """Right generator of the u1 curve, locked to -a2."""
        return -self.a2

    # -- curves ------------------------------------------------------------

    def u1_at(self, t: float) -> np.ndarray:
        return scipy.linalg.expm(t * self.a1) @ self.u1 @ scipy.linalg.expm(t * self.b1)

    def u2_at(self, t: float) -> np.ndarray:
        return scipy.linalg.expm(t * self.a2) @ self.u2 @ scipy.linalg.expm(t * self.b2)

    def xi2_at(self, t: float) -> np.ndarray:
        e = scipy.linalg.expm(t * self.h2)
        return e @ self.xi2 @ e

    def gamma2_at(self, t: float) -> np.ndarray:
        return self.u2_at(t) @ self.xi2_at(t)

    def gamma1_at(self, t: float) -> np.ndarray:
        u2t = self.u2_at(t)
        return self.u1_at(t) @ (u2t @ self.xi2_at(t) @ u2t.conj().T)

    def product_at(self, t: float) -> np.ndarray:
        return self.u1_at(t) @ self.u2_at(t) @ self.xi2_at(t)

    # -- analytic tangents at t = 0 ------------------------------------------

    def du1(self) -> np.ndarray:
        return self.a1 @ self.u1 + self.u1 @ self.b1

    def du2(self) -> np.ndarray:
        return self.a2 @ self.u2 + self.u2 @ self.b2

    def dxi2(self) -> np.ndarray:
        return self.h2 @ self.xi2 + self.xi2 @ self.h2

    def dgamma2(self) -> np.ndarray:
        return self.du2() @ self.xi2 + self.u2 @ self.dxi2()

    def dgamma1(self) -> np.ndarray:
        eta = self.u2 @ self.xi2 @ self.u2.conj().T
        deta = (
            self.du2() @ self.xi2 @ self.u2.conj().T
            + self.u2 @ self.dxi2() @ self.u2.conj().T
            + self.u2 @ self.xi2 @ self.du2().conj().T
        )
        return self.du1() @ eta + self.u1 @ deta

    def dproduct(self) -> np.ndarray:
        return (
            self.du1() @ self.u2 @ self.xi2
            + self.u1 @ self.du2() @ self.xi2
            + self.u1 @ self.u2 @ self.dxi2()
        )

    def composability_gap(self, t: float) -> float:
        """Distance between the modulus of gamma1(t) and the conjugated
        modulus of gamma2(t); zero exactly when the pair composes strictly."""
        u2t = self.u2_at(t)
        eta = u2t @ self.xi2_at(t) @ u2t.conj().T
        g1 = self.gamma1_at(t)
        gram = g1.conj().T @ g1
        return frobenius(gram - eta @ eta)


def sample_family_base(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Base data (u1, u2, xi2) of a composable pair."""
    q2 = sampling.random_projection(algebra, rng)
    q1 = sampling.equivalent_projection(algebra, rng, q2)
    q0 = sampling.equivalent_projection(algebra, rng, q2)
    u2 = sampling.partial_isometry_onto(algebra, rng, q2, q1, tol)
    u1 = sampling.partial_isometry_onto(algebra, rng, q1, q0, tol)
    xi2 = sampling.corner_positive(algebra, rng, q2, tol=tol)
    return u1, u2, xi2


def family_with_generators(
    algebra: BlockAlgebra,
    base: tuple[np.ndarray, np.ndarray, np.ndarray],
    rng: np.random.Generator,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> ComposableFamily:
    """Fresh unit-operator-norm generators on a fixed composable base."""
    u1, u2, xi2 = base
    q2 = sampling.support_projection_of(xi2, tol)
    a1 = sampling.unit_norm(sampling.random_antihermitian(algebra, rng))
    a2 = sampling.unit_norm(sampling.random_antihermitian(algebra, rng))
    b2 = sampling.unit_norm(sampling.corner_antihermitian(algebra, rng, q2))
    h2 = sampling.unit_norm(sampling.corner_hermitian(algebra, rng, q2))
    return ComposableFamily(
        algebra=algebra, u1=u1, u2=u2, xi2=xi2, a1=a1, a2=a2, b2=b2, h2=h2, tol=tol
    )


def sample_family(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> ComposableFamily:
    """Random composable family with unit-operator-norm generators."""
    base = sample_family_base(algebra, rng, tol)
    return family_with_generators(algebra, base, rng, tol)


def sample_family_pair(
    algebra: BlockAlgebra,
    rng: np.random.Generator,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> tuple[ComposableFamily, ComposableFamily]:
    """Two independent tangent directions on one shared composable base."""
    base = sample_family_base(algebra, rng, tol)
    return (
        family_with_generators(algebra, base, rng, tol),
        family_with_generators(algebra, base, rng, tol),
    )


def multiplicativity_residual(
    fam: ComposableFamily,
    fam2: ComposableFamily,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """Multiplicativity of the symplectic form over the groupoid product:
    for two tangent directions at the same composable pair,

        omega(d(g1 g2), d(g1 g2)') = omega(dg1, dg1') + omega(dg2, dg2').

    Both families must share the base (u1, u2, xi2)."""
    gap = max(
        frobenius(fam.u1 - fam2.u1),
        frobenius(fam.u2 - fam2.u2),
        frobenius(fam.xi2 - fam2.xi2),
    )
    if gap > tol.residual_tol:
        raise InvalidFamily("the two families have different base points")
    lhs = symplectic_omega(fam.dproduct(), fam2.dproduct())
    rhs = symplectic_omega(fam.dgamma1(), fam2.dgamma1()) + symplectic_omega(
        fam.dgamma2(), fam2.dgamma2()
    )
    return abs(lhs - rhs)


def vertical_form_residual(
    u: np.ndarray,
    xi: np.ndarray,
    b: np.ndarray,
    b_prime: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """Closed form of omega on vertical directions u b xi:
    omega(u b xi, u b' xi) = -2 Im Tr(xi^2 b b') for anti-Hermitian corner
    generators b, b' at the support of xi."""
    lhs = symplectic_omega(u @ b @ xi, u @ b_prime @ xi)
    rhs = -2.0 * float(np.trace(xi @ xi @ b @ b_prime).imag)
    return abs(lhs - rhs)


def exactness_residual(
    fam: ComposableFamily,
    step: float | None = None,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """Compatibility of the primitive Gamma(g)(dg) = Tr(g* dg) of the
    symplectic form with the groupoid product:

        Gamma(g1)(dg1) + Gamma(g2)(dg2)
            = Gamma(g1 g2)(d(g1 g2)) + Tr(xi2 dxi2),

    where the product derivative is taken by central differences of the
    groupoid multiplication itself, so the identity holds up to an O(step^2)
    discretization error."""
    h = tol.fd_step if step is None else step
    plus = std_mul(fam.gamma1_at(h), fam.gamma2_at(h), tol)
    minus = std_mul(fam.gamma1_at(-h), fam.gamma2_at(-h), tol)
    dprod_fd = (plus - minus) / (2.0 * h)
    lhs = hs_inner(fam.gamma1_at(0.0), fam.dgamma1()) + hs_inner(
        fam.gamma2_at(0.0), fam.dgamma2()
    )
    rhs = hs_inner(fam.product_at(0.0), dprod_fd) + np.trace(fam.xi2 @ fam.dxi2())
    return abs(complex(lhs - rhs))


# ---------------------------------------------------------------------------
# orbit two-form, calibration, Fubini–Study geometry


def orbit_form(
    rho0: NormalFunctional,
    u: np.ndarray,
    du1: np.ndarray,
    du2: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """Two-form of the isometry bundle over the unitary orbit of rho0 (the
    exterior derivative of the orbit one-form)."""
    return dGamma0(rho0, u, du1, du2, tol)


@lru_cache(maxsize=1)
def calibrate_kappa() -> float:
    """Normalization constant relating the symplectic form on orbit lifts to
    the moment pairing, fixed on a rank-one reference instance in two
    dimensions: lifts a_j gamma0 of the directions a1 = i sigma_x,
    a2 = i sigma_y at gamma0 = diag(1, 0) give

        kappa = omega(a1 gamma0, a2 gamma0) / (2 Im Tr(gamma0 gamma0* a1 a2)).
    """
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
    gamma0 = np.diag([1.0, 0.0]).astype(complex)
    a1 = 1j * sx
    a2 = 1j * sy
    omega = symplectic_omega(a1 @ gamma0, a2 @ gamma0)
    moment = 2.0 * float(np.trace(gamma0 @ gamma0.conj().T @ a1 @ a2).imag)
    return float(omega / moment)


@dataclass(frozen=True)
class KKSReport:
    """Symplectic form on orbit lifts against the calibrated moment pairing:
    omega(a1 g0, a2 g0) = kappa 2 Im Tr(g0 g0* a1 a2); ``pairing`` reports
    the moment functional 2i E(g0) evaluated on [a1, a2]."""

    omega: float
    moment: float
    pairing: float
    kappa: float

    @property
    def residual(self) -> float:
        return abs(self.omega - self.moment)


def kks_check(
    rho0: NormalFunctional,
    a1: np.ndarray,
    a2: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> KKSReport:
    """Evaluate the orbit symplectic identity at the canonical vector of
    rho0 with anti-Hermitian directions a1, a2."""
    for a, name in ((a1, "a1"), (a2, "a2")):
        if frobenius(a + a.conj().T) > tol.residual_tol * (1.0 + frobenius(a)):
            raise InvalidTangent(f"{name} is not anti-Hermitian")
    gamma0 = std_unit(rho0, tol)
    kappa = calibrate_kappa()
    omega = symplectic_omega(a1 @ gamma0, a2 @ gamma0)
    d0 = gamma0 @ gamma0.conj().T
    moment = kappa * 2.0 * float(np.trace(d0 @ a1 @ a2).imag)
    commutator = a1 @ a2 - a2 @ a1
    pairing = float((2j * np.trace(d0 @ commutator)).real)
    return KKSReport(omega=omega, moment=moment, pairing=pairing, kappa=kappa)


@dataclass(frozen=True)
class FubiniStudyReport:
    """Symplectic form on source-side lifts of projective tangents against
    the Fubini–Study value kappa r 2 Im <X|Y> at radius r."""

    omega: float
    fs_value: float
    radius: float

    @property
    def residual(self) -> float:
        return abs(self.omega - self.fs_value)


def _unit_vector(v: np.ndarray, tol: ToleranceProfile) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > tol.residual_tol * 10:
        raise NotUnitVector(f"vector norm {norm:.6f} differs from 1")
    return v


def fubini_study_compare(
    r: float,
    delta: np.ndarray,
    X: np.ndarray,
    Y: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> FubiniStudyReport:
    """Rank-one orbit through rho0 = r |delta><delta|: the symplectic form on
    the lifts gamma0 a_X, gamma0 a_Y (a_X = |X><delta| - |delta><X|, tangents
    X, Y orthogonal to delta) equals the scaled Fubini–Study form
    kappa r 2 Im <X|Y>."""
    if r <= 0:
        raise DegenerateBase("the orbit radius must be positive")
    delta = _unit_vector(delta, tol)
    X = np.asarray(X, dtype=complex).reshape(-1)
    Y = np.asarray(Y, dtype=complex).reshape(-1)
    X = X - delta * np.vdot(delta, X)
    Y = Y - delta * np.vdot(delta, Y)
    gamma0 = np.sqrt(r) * np.outer(delta, delta.conj())

    def generator(t: np.ndarray) -> np.ndarray:
        return np.outer(t, delta.conj()) - np.outer(delta, t.conj())

    lift_x = gamma0 @ generator(X)
    lift_y = gamma0 @ generator(Y)
    omega = symplectic_omega(lift_x, lift_y)
    kappa = calibrate_kappa()
    fs_value = kappa * float(r) * 2.0 * float(np.vdot(X, Y).imag)
    return FubiniStudyReport(omega=omega, fs_value=fs_value, radius=float(r))


def pair_groupoid_fs_residual(
    r: float,
    delta: np.ndarray,
    psi: np.ndarray,
    phi_vec: np.ndarray,
    X: np.ndarray,
    X_prime: np.ndarray,
    Y: np.ndarray,
    Y_prime: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """Rank-one pair-groupoid identity: for arrows Lambda(u, v) = u gamma0 v*
    over the base |delta>, with leg tangents |X><delta| at u = |psi><delta|
    (X orthogonal to psi) and |Y><delta| at v = |phi><delta| (Y orthogonal to
    phi), the symplectic form splits into target minus source Fubini–Study
    terms:

        omega(dLambda, dLambda') = 2 r Im <X|X'> - 2 r Im <Y|Y'>.
    """
    delta = _unit_vector(delta, tol)
    psi = _unit_vector(psi, tol)
    phi_vec = _unit_vector(phi_vec, tol)
    gamma0 = np.sqrt(float(r)) * np.outer(delta, delta.conj())

    def orth(t: np.ndarray, against: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=complex).reshape(-1)
        return t - against * np.vdot(against, t)

    X, X_prime = orth(X, psi), orth(X_prime, psi)
    Y, Y_prime = orth(Y, phi_vec), orth(Y_prime, phi_vec)
    u = np.outer(psi, delta.conj())
    v = np.outer(phi_vec, delta.conj())
    du, du_p = np.outer(X, delta.conj()), np.outer(X_prime, delta.conj())
    dv, dv_p = np.outer(Y, delta.conj()), np.outer(Y_prime, delta.conj())

    def dLambda(duu: np.ndarray, dvv: np.ndarray) -> np.ndarray:
        return duu @ gamma0 @ v.conj().T + u @ gamma0 @ dvv.conj().T

    lhs = symplectic_omega(dLambda(du, dv), dLambda(du_p, dv_p))
    rhs = 2.0 * float(r) * float(np.vdot(X, X_prime).imag) - 2.0 * float(r) * float(
        np.vdot(Y, Y_prime).imag
    )
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# transition amplitudes along a path of unit vectors


@dataclass(frozen=True)
class AmplitudeReport:
    """Composite transition amplitude of a path of unit vectors and its
    probability."""

    amplitude: complex
    probability: float
    steps: int


def feynman_amplitude(
    vectors: Sequence[np.ndarray], tol: ToleranceProfile = DEFAULT_TOL
) -> AmplitudeReport:
    """Product of successive overlaps <v_k | v_{k+1}> along a path of unit
    vectors; the probability is the squared modulus.  Composing amplitudes is
    the one-dimensional shadow of the groupoid product."""
    if len(vectors) < 2:
        raise DomainError("an amplitude needs a path of at least two vectors")
    units = [_unit_vector(v, tol) for v in vectors]
    amp = complex(1.0)
    for a, b in zip(units, units[1:]):
        amp *= complex(np.vdot(a, b))
    return AmplitudeReport(amplitude=amp, probability=float(abs(amp) ** 2), steps=len(units) - 1)


# ---------------------------------------------------------------------------
# degeneracy of the arrow two-form


@dataclass(frozen=True)
class DegeneracyReport:
    """Kernel analysis of the arrow two-form dGamma0_u - dGamma0_v on a pair
    of isometry-bundle tangent spaces: the radical is spanned by the
    stabilizer directions of the base density on each leg, and the form is
    uniformly nondegenerate transverse to it."""

    radical_pairing: float
    kernel_dimension: int
    expected_kernel_dimension: int
    complement_min_singular: float
    tangent_dimension: int

    @property
    def dimension_residual(self) -> int:
        return abs(self.kernel_dimension - self.expected_kernel_dimension)


def _bundle_tangent_basis(
    algebra: BlockAlgebra,
    u: np.ndarray,
    p0: np.ndarray,
    tol: ToleranceProfile,
) -> list[np.ndarray]:
    """Real basis of the tangent space at u to the isometries with source
    p0: vertical directions u x (x anti-Hermitian in the p0 corner) and
    horizontal directions (1 - u u*) z p0 with z running through a complex
    block basis."""
    q = u @ u.conj().T
    basis: list[np.ndarray] = []
    n_amb = algebra.dim
    for sl, n in zip(algebra.slices, algebra.blocks):
        p_blk = p0[sl, sl]
        q_blk = q[sl, sl]
        r = projection_rank(p_blk)
        if r == 0:
            continue
        _, vp = hermitian_eig(p_blk, tol)
        _, vq = hermitian_eig(q_blk, tol)
        cols_p = vp[:, :r]  # range of p0 in this block
        cols_qc = vq[:, r:]  # complement of the range of q

        def embed(mat: np.ndarray, sl=sl, n=n) -> np.ndarray:
            full = np.zeros((n_amb, n_amb), dtype=complex)
            full[sl, sl] = mat
            return full

        # vertical: u times an anti-Hermitian corner basis (r^2 real dims)
        for a in range(r):
            va = cols_p[:, a]
            basis.append(u @ embed(1j * np.outer(va, va.conj())))
            for b in range(a + 1, r):
                vb = cols_p[:, b]
                m = np.outer(va, vb.conj())
                basis.append(u @ embed((m - m.conj().T) / np.sqrt(2.0)))
                basis.append(u @ embed(1j * (m + m.conj().T) / np.sqrt(2.0)))
        # horizontal: (1 - q) . p0 corner, complex basis times {1, i}
        for a in range(cols_qc.shape[1]):
            wa = cols_qc[:, a]
            for b in range(r):
                vb = cols_p[:, b]
                m = np.outer(wa, vb.conj())
                basis.append(embed(m))
                basis.append(embed(1j * m))
    return basis


def degeneracy_kernel_check(
    rho0: NormalFunctional,
    u: np.ndarray,
    v: np.ndarray,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> DegeneracyReport:
    """Analyse the two-form dGamma0_u (+) (-dGamma0_v) on the product of the
    bundle tangent spaces at u and v (both with source supp(rho0)): its
    radical consists of the stabilizer directions of rho0 pushed to each leg,
    so the kernel dimension is twice the stabilizer dimension, and away from
    the radical the form has singular values bounded below."""
    require_positive(rho0, tol)
    algebra = rho0.algebra
    p0 = functional_support(rho0, tol)
    if projection_rank(p0) == 0:
        raise DegenerateBase("the base functional vanishes")
    for w, name in ((u, "u"), (v, "v")):
        if frobenius(w.conj().T @ w - p0) > tol.residual_tol * (1.0 + frobenius(p0)):
            raise InvalidTangent(f"{name}* {name} is not the support of the base")

    basis_u = _bundle_tangent_basis(algebra, u, p0, tol)
    basis_v = _bundle_tangent_basis(algebra, v, p0, tol)
    m, k = len(basis_u), len(basis_v)
    total = m + k
    pairing = np.zeros((total, total))
    for i in range(m):
        for j in range(i + 1, m):
            val = dGamma0(rho0, u, basis_u[i], basis_u[j], tol)
            pairing[i, j] = val
            pairing[j, i] = -val
    for i in range(k):
        for j in range(i + 1, k):
            val = dGamma0(rho0, v, basis_v[i], basis_v[j], tol)
            pairing[m + i, m + j] = -val
            pairing[m + j, m + i] = val

    stab = stabilizer_lie_algebra(rho0, tol)
    radical_worst = 0.0
    for s in stab.basis:
        for e in basis_u:
            radical_worst = max(radical_worst, abs(dGamma0(rho0, u, u @ s, e, tol)))
        for e in basis_v:
            radical_worst = max(radical_worst, abs(dGamma0(rho0, v, v @ s, e, tol)))

    sing = np.linalg.svd(pairing, compute_uv=False)
    scale = max(float(sing[0]), 1.0) if sing.size else 1.0
    cutoff = 1e-8 * scale
    kernel_dim = int(np.sum(sing < cutoff))
    expected = 2 * stab.dimension
    nonzero = sing[: total - expected] if expected <= total else sing[:0]
    min_sing = float(nonzero[-1]) if nonzero.size else float("inf")
    return DegeneracyReport(
        radical_pairing=radical_worst,
        kernel_dimension=kernel_dim,
        expected_kernel_dimension=expected,
        complement_min_singular=min_sing,
        tangent_dimension=total,
    )


def orbit_form_invariance_residual(
    rho0: NormalFunctional,
    u: np.ndarray,
    rng: np.random.Generator,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> float:
    """Worst residual of the structural invariances of the orbit one- and
    two-forms at u: invariance of Gamma0 under global unitary left
    translation, invariance of the two-form on vertical pairs under left
    translation by a groupoid element, invariance under right translation by
    a stabilizer element of the base, and invariance under adding a radical
    (stabilizer) direction to one argument."""
    algebra = rho0.algebra
    p0 = functional_support(rho0, tol)
    q = u @ u.conj().T
    du = sampling.p0_tangent(algebra, rng, u, p0)
    du2 = sampling.p0_tangent(algebra, rng, u, p0)
    x1 = sampling.corner_antihermitian(algebra, rng, p0)
    x2 = sampling.corner_antihermitian(algebra, rng, p0)

    res = []
    # global unitary left translation of the one-form
    w = sampling.random_unitary(algebra, rng)
    res.append(abs(Gamma0(rho0, w @ u, w @ du, tol) - Gamma0(rho0, u, du, tol)))
    # left translation by a groupoid arrow on a vertical pair
    q_target = sampling.equivalent_projection(algebra, rng, q)
    wg = sampling.partial_isometry_onto(algebra, rng, q, q_target, tol)
    res.append(
        abs(
            dGamma0(rho0, wg @ u, wg @ u @ x1, wg @ u @ x2, tol)
            - dGamma0(rho0, u, u @ x1, u @ x2, tol)
        )
    )
    # right translation by a stabilizer element (its exponential is the
    # identity off the support corner, so u g stays an isometry from p0)
    stab = stabilizer_lie_algebra(rho0, tol)
    if stab.basis:
        s = sampling.stabilizer_direction(rng, list(stab.basis))
        g = scipy.linalg.expm(s)
        res.append(
            abs(
                dGamma0(rho0, u @ g, du @ g, du2 @ g, tol)
                - dGamma0(rho0, u, du, du2, tol)
            )
        )
        # radical shift of one argument
        res.append(
            abs(
                dGamma0(rho0, u, du + u @ s, du2, tol)
                - dGamma0(rho0, u, du, du2, tol)
            )
        )
    return max(res)
