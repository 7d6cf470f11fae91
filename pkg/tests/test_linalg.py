"""Matrix kernels: polar factors, supports, partial inverses, matrix
functions, and the rank guard band."""
import numpy as np
import pytest

from wstargeo.errors import NotPartiallyInvertible, NotPositive
from wstargeo.linalg import (
    DEFAULT_TOL,
    GUARD_FACTOR,
    ToleranceProfile,
    frobenius,
    hermitian_eig,
    left_support,
    matrix_imaginary_power,
    matrix_log_restricted,
    matrix_sqrt,
    partial_inverse,
    polar_decompose,
    restricted_power,
    right_support,
    support_projection,
)

E12 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
E21 = E12.conj().T


def _rng(k: int = 0) -> np.random.Generator:
    return np.random.default_rng(20_260_819 + k)


def _random_matrix(rng, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


class TestPolar:
    def test_nilpotent_oracle(self):
        u, h = polar_decompose(E12)
        assert frobenius(u - E12) <= 1e-12
        assert frobenius(h - np.diag([0.0, 1.0])) <= 1e-12

    def test_sign_matrix_oracle(self):
        a = np.diag([3.0, -4.0]).astype(complex)
        u, h = polar_decompose(a)
        assert frobenius(u - np.diag([1.0, -1.0])) <= 1e-12
        assert frobenius(h - np.diag([3.0, 4.0])) <= 1e-12

    def test_identity(self):
        u, h = polar_decompose(np.eye(3, dtype=complex))
        assert frobenius(u - np.eye(3)) <= 1e-12
        assert frobenius(h - np.eye(3)) <= 1e-12

    def test_round_trip_properties(self):
        rng = _rng()
        for k in range(1000):
            n = int(rng.integers(1, 9))
            a = _random_matrix(rng, n)
            if k % 3 == 0:
                # Exercise genuine rank deficiency.
                r = int(rng.integers(0, n))
                b = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
                c = rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
                a = b @ c
            u, h = polar_decompose(a)
            uu = u.conj().T @ u
            assert frobenius(u @ h - a) <= 1e-10 * max(1.0, frobenius(a))
            assert frobenius(u @ uu - u) <= 1e-10
            assert frobenius(uu - support_projection(h)) <= 1e-10
            assert frobenius(h - h.conj().T) <= 1e-12
            assert np.linalg.eigvalsh(h).min() >= -1e-12

    def test_left_right_supports(self):
        assert frobenius(left_support(E12) - np.diag([1.0, 0.0])) <= 1e-12
        assert frobenius(right_support(E12) - np.diag([0.0, 1.0])) <= 1e-12


class TestPartialInverse:
    def test_nilpotent_oracle(self):
        assert frobenius(partial_inverse(E12) - E21) <= 1e-12

    def test_groupoid_inverse_identities(self):
        rng = _rng(1)
        for _ in range(200):
            n = int(rng.integers(1, 7))
            r = int(rng.integers(0, n + 1))
            b = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
            c = rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
            a = b @ c
            try:
                x = partial_inverse(a)
            except NotPartiallyInvertible:
                continue
            assert frobenius(a @ x @ a - a) <= 1e-8 * max(1.0, frobenius(a) ** 3)
            assert frobenius(x @ a @ x - x) <= 1e-8 * max(1.0, frobenius(x) ** 3)
            assert frobenius(a @ x - left_support(a)) <= 1e-8
            assert frobenius(x @ a - right_support(a)) <= 1e-8

    def test_guard_band_refusal(self):
        # Largest singular value 1, smallest sits inside the guard band
        # [cutoff, GUARD_FACTOR * cutoff): the rank decision is ambiguous.
        prof = DEFAULT_TOL
        inside = 3.0 * prof.rank_rel_tol
        assert inside < GUARD_FACTOR * prof.rank_rel_tol
        a = np.diag([1.0, inside]).astype(complex)
        with pytest.raises(NotPartiallyInvertible):
            partial_inverse(a, prof)

    def test_guard_band_clearance(self):
        prof = DEFAULT_TOL
        above = 20.0 * prof.rank_rel_tol
        a = np.diag([1.0, above]).astype(complex)
        x = partial_inverse(a, prof)
        assert frobenius(x - np.diag([1.0, 1.0 / above])) <= 1e-6 / above

    def test_below_cutoff_is_kernel(self):
        prof = DEFAULT_TOL
        below = 0.01 * prof.rank_rel_tol
        a = np.diag([1.0, below]).astype(complex)
        x = partial_inverse(a, prof)
        assert frobenius(x - np.diag([1.0, 0.0])) <= 1e-12


class TestMatrixFunctions:
    def test_sqrt_oracle(self):
        assert frobenius(matrix_sqrt(np.diag([0.0, 4.0]).astype(complex))
                         - np.diag([0.0, 2.0])) <= 1e-12

    def test_sqrt_kernel_is_exact(self):
        # The square root must not amplify numerical fuzz in the kernel.
        rng = _rng(2)
        v = np.linalg.qr(_random_matrix(rng, 4))[0]
        d = (v * np.array([2.0, 1.0, 0.0, 0.0])) @ v.conj().T
        s = matrix_sqrt(d)
        p = support_projection(d)
        off = (np.eye(4) - p) @ s
        assert frobenius(off) <= 1e-12

    def test_sqrt_rejects_negative(self):
        with pytest.raises(NotPositive):
            matrix_sqrt(np.diag([1.0, -1.0]).astype(complex))

    def test_restricted_power_inverse_guard(self):
        prof = DEFAULT_TOL
        inside = 3.0 * prof.rank_rel_tol
        h = np.diag([1.0, inside]).astype(complex)
        with pytest.raises(NotPartiallyInvertible):
            restricted_power(h, -1.0, prof)
        # Positive powers are not guarded.
        restricted_power(h, 0.5, prof)

    def test_imaginary_power_unitary_on_support(self):
        d = np.diag([1.0, 4.0, 0.0]).astype(complex)
        w = matrix_imaginary_power(d, 0.7)
        p = support_projection(d)
        assert frobenius(w @ w.conj().T - p) <= 1e-12
        assert frobenius(w - np.diag([1.0, np.exp(0.7j * np.log(4.0)), 0.0])) <= 1e-12

    def test_log_restricted(self):
        d = np.diag([np.e, 1.0, 0.0]).astype(complex)
        lg = matrix_log_restricted(d)
        assert frobenius(lg - np.diag([1.0, 0.0, 0.0])) <= 1e-12


class TestEig:
    def test_descending_order(self):
        rng = _rng(3)
        for _ in range(50):
            n = int(rng.integers(1, 8))
            a = _random_matrix(rng, n)
            h = a + a.conj().T
            w, v = hermitian_eig(h)
            assert np.all(np.diff(w) <= 1e-12)
            assert frobenius((v * w) @ v.conj().T - h) <= 1e-10 * max(1.0, frobenius(h))

    def test_tolerance_profile_fields(self):
        prof = ToleranceProfile(rank_rel_tol=1e-6, residual_tol=1e-5, fd_step=1e-3)
        assert prof.rank_rel_tol == 1e-6
        assert prof.residual_tol == 1e-5
        assert prof.fd_step == 1e-3
