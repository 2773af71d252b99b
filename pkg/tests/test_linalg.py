"""Factorization layer: structured diagonalization, Gauss split, Iwasawa."""

import numpy as np
import pytest

from todadual.errors import DegenerateSpectrumError, GaussCellError, ValidationError
from todadual.linalg import (
    bottom_right_minor,
    determinant,
    extended_solve,
    iwasawa,
    lower_triangularize,
    structured_diagonalize,
)
from todadual.rootsys import AlgebraType, build_root_datum, cartan_pattern, group_residual
from todadual.sampling import sample_toda, spawn_rng
from todadual.toda import build_lax

ALGEBRAS = [("A", 3), ("A", 5), ("B", 2), ("B", 4), ("C", 3), ("D", 3), ("D", 4)]


def test_determinant_basic():
    assert abs(determinant(np.diag([2.0, 3.0])) - 6.0) < 1e-14
    with pytest.raises(ValidationError):
        determinant(np.ones((2, 3)))


def test_bottom_right_minor():
    M = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert abs(bottom_right_minor(M, 1) - 4.0) < 1e-15
    assert abs(bottom_right_minor(M, 2) - (-2.0)) < 1e-14


def test_extended_solve_matches_lapack():
    rng = np.random.default_rng(17)
    for _ in range(10):
        A = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        B = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
        X = extended_solve(A, B).astype(complex)
        assert np.linalg.norm(A @ X - B) < 1e-12 * np.linalg.norm(B)


def test_structured_diagonalize_conjugates_to_pattern():
    for fam, n in ALGEBRAS:
        datum = build_root_datum(AlgebraType(fam, n))
        for j in range(6):
            X = build_lax(datum, sample_toda(datum, spawn_rng(100 + j, j)))
            k, qhat = structured_diagonalize(datum, X)
            target = np.diag(cartan_pattern(datum, qhat))
            assert np.linalg.norm(k @ X @ k.conj().T - target) < 1e-10
            # k is unitary and (for B/C/D) preserves the bilinear form
            assert np.linalg.norm(k @ k.conj().T - np.eye(datum.size)) < 1e-12
            assert group_residual(datum, k) < 1e-10


def test_structured_diagonalize_chamber_order():
    datum = build_root_datum(AlgebraType("A", 4))
    X = build_lax(datum, sample_toda(datum, spawn_rng(9, 0)))
    _, qhat = structured_diagonalize(datum, X)
    assert np.all(np.diff(qhat) < 0.0)  # strictly decreasing


def test_structured_diagonalize_rejects_collisions():
    datum = build_root_datum(AlgebraType("A", 2))
    with pytest.raises(DegenerateSpectrumError):
        structured_diagonalize(datum, np.eye(2))


def test_lower_triangularize_splits_group_element():
    rng = np.random.default_rng(41)
    for fam, n in ALGEBRAS:
        datum = build_root_datum(AlgebraType(fam, n))
        N = datum.size
        for _ in range(4):
            g = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
            try:
                nplus, glow = lower_triangularize(datum, g)
            except GaussCellError:
                continue  # random matrix hit a small pivot; not what we test here
            assert np.allclose(np.tril(nplus, -1), 0.0)
            assert np.allclose(np.diagonal(nplus), 1.0)
            assert np.allclose(np.triu(glow, 1), 0.0)
            assert np.linalg.norm(nplus @ g - glow) < 1e-9 * max(1.0, np.linalg.norm(g))


def test_lower_triangularize_rejects_zero_pivot():
    datum = build_root_datum(AlgebraType("A", 2))
    # trailing 1x1 minor (the g[1,1] entry) vanishes: outside the big cell
    g = np.array([[1.0, 1.0], [1.0, 0.0]])
    with pytest.raises(GaussCellError):
        lower_triangularize(datum, g)


def test_iwasawa_recombines():
    rng = np.random.default_rng(7)
    for fam, n in [("A", 4), ("C", 3)]:
        datum = build_root_datum(AlgebraType(fam, n))
        N = datum.size
        for _ in range(6):
            if fam == "A":
                g = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
            else:
                # a product of exponentials of algebra elements lies in the group
                M = np.einsum("a,aij->ij", rng.normal(size=n), datum.cartan).astype(complex)
                M += 0.4 * (datum.raising.sum(axis=0) + datum.lowering.sum(axis=0))
                from scipy.linalg import expm

                g = expm(0.5 * M)
            nfac, afac, kfac = iwasawa(datum, g)
            assert np.allclose(np.tril(nfac, -1), 0.0)
            assert np.allclose(np.diagonal(nfac), 1.0)
            assert np.allclose(afac, np.diag(np.diagonal(afac).real))
            assert np.all(np.diagonal(afac).real > 0.0)
            assert np.linalg.norm(kfac @ kfac.conj().T - np.eye(N)) < 1e-12
            recombined = nfac @ afac @ kfac
            assert np.linalg.norm(recombined - g) < 1e-10 * max(1.0, np.linalg.norm(g))


def test_iwasawa_positive_diagonal_follows_pattern():
    """For B/C/D group elements the Iwasawa diagonal obeys the mirror pattern."""
    from scipy.linalg import expm

    rng = np.random.default_rng(13)
    datum = build_root_datum(AlgebraType("C", 2))
    M = np.einsum("a,aij->ij", rng.normal(size=2), datum.cartan).astype(complex)
    M += 0.3 * (datum.raising.sum(axis=0) + datum.lowering.sum(axis=0))
    _, afac, _ = iwasawa(datum, expm(M))
    d = np.diagonal(afac).real
    assert np.allclose(d, np.concatenate([d[:2], 1.0 / d[:2][::-1]]))
