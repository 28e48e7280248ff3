import numpy as np
import pytest

from hbfsim.core.base import DefinitenessError, DimensionError, DomainError, derive_rng
from hbfsim.core.linalg import cholesky, frob_norm, herm_gen_eig, numerical_rank, svd


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian_pd(rng, n):
    x = random_complex(rng, n, n)
    return x @ x.conj().T + n * np.eye(n)


def test_svd_identity_has_unit_singular_values():
    _, s, _ = svd(np.eye(3))
    assert np.allclose(s, [1.0, 1.0, 1.0])


def test_svd_rank_deficient_diagonal():
    U, s, V = svd(np.diag([3.0, 0.0]))
    assert np.allclose(s, [3.0, 0.0])
    assert np.allclose(np.abs(U), np.eye(2))
    assert np.allclose(np.abs(V), np.eye(2))


def test_svd_reconstructs_random_matrix(rng):
    A = random_complex(rng, 8, 4)
    U, s, V = svd(A)
    assert np.linalg.norm(U @ np.diag(s) @ V.conj().T - A) < 1e-10
    oracle = np.sqrt(np.sort(np.linalg.eigvalsh(A.conj().T @ A))[::-1])
    assert np.allclose(s, oracle, atol=1e-10)
    assert np.all(np.diff(s) <= 0)


def test_svd_rejects_empty_matrix():
    with pytest.raises(DimensionError):
        svd(np.zeros((0, 3)))


def test_herm_gen_eig_with_identity_b():
    values, T = herm_gen_eig(np.diag([2.0, 1.0]), np.eye(2))
    assert np.allclose(values, [2.0, 1.0])
    assert np.allclose(np.abs(T), np.eye(2))


def test_herm_gen_eig_closed_form():
    values, _ = herm_gen_eig(np.eye(2), np.diag([4.0, 1.0]))
    assert np.allclose(values, [1.0, 0.25])


def test_herm_gen_eig_matches_determinant_roots(rng):
    x = random_complex(rng, 4, 4)
    A = x + x.conj().T
    B = random_hermitian_pd(rng, 4)
    values, T = herm_gen_eig(A, B)

    roots = np.sort(np.linalg.eigvals(np.linalg.solve(B, A)).real)[::-1]
    assert np.allclose(values, roots, atol=1e-8)
    for value in values:
        smallest = np.linalg.svd(A - value * B, compute_uv=False)[-1]
        assert smallest < 1e-8 * np.linalg.norm(A)
    assert np.allclose(T.conj().T @ B @ T, np.eye(4), atol=1e-10)
    assert np.allclose(A @ T, B @ T @ np.diag(values), atol=1e-9)


def test_herm_gen_eig_requires_positive_definite_b():
    with pytest.raises(DefinitenessError):
        herm_gen_eig(np.eye(2), np.diag([1.0, -1.0]))


def test_herm_gen_eig_rejects_non_hermitian_a():
    with pytest.raises(DomainError):
        herm_gen_eig(np.array([[1.0, 2.0], [0.0, 1.0]]), np.eye(2))


def test_cholesky_factor(rng):
    B = random_hermitian_pd(rng, 5)
    L = cholesky(B)
    assert np.allclose(np.triu(L, 1), 0.0)
    assert np.allclose(L @ L.conj().T, B)


def test_frob_norm_cases():
    assert frob_norm(np.zeros((3, 3))) == 0.0
    assert frob_norm(np.eye(7)) == pytest.approx(np.sqrt(7))
    assert frob_norm(np.array([[3.0, 4j]])) == pytest.approx(5.0)


def test_numerical_rank_of_outer_product(rng):
    a = random_complex(rng, 6, 1)
    b = random_complex(rng, 4, 1)
    assert numerical_rank(a @ b.conj().T) == 1
    assert numerical_rank(random_complex(rng, 6, 4)) == 4


def test_derive_rng_streams_are_reproducible_and_distinct():
    first = derive_rng(2018, 3, 1).random(4)
    again = derive_rng(2018, 3, 1).random(4)
    other = derive_rng(2018, 3, 0).random(4)
    assert np.array_equal(first, again)
    assert not np.array_equal(first, other)
    with pytest.raises(ValueError):
        derive_rng()


def test_frob_norm_squared_is_sum_of_squared_singular_values(rng):
    a = rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))
    _, s, _ = svd(a)
    assert frob_norm(a) ** 2 == pytest.approx(np.sum(s**2), rel=1e-12)


def test_herm_gen_eig_with_identity_b_matches_singular_values(rng):
    h = rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4))
    values, _ = herm_gen_eig(h.conj().T @ h, np.eye(4))
    _, s, _ = svd(h)
    assert np.allclose(values, s**2, rtol=1e-10)
