"""Rational goldfish models dual to the open Toda chains.

Phase space is the open chamber in (qhat, phat).  The positive weights ahat
and the momenta are related by a canonical change of variables whose
chamber factor F_i is a product of coordinate differences (and sums, and in
the odd orthogonal case a bare coordinate) that stays positive on the whole
chamber; ahat_i = exp(phat_i) sqrt(F_i).

The dual Hamiltonians H-hat_k are the bottom-right principal minors of
g g^dagger for the lower-triangular momentum-equation solution g.  They are
evaluated here in closed form:

* family A: sum over k-subsets I of prod_{i in I, j notin I} |q_i - q_j|^{-1}
  times exp(2 sum_I phat);
* families B/C/D (k < rank): a double-subset sum with exp(+-2 phat) factors
  and difference/sum denominators; family B carries an extra half-weight
  stratum with |I|+|J| = k-1, family D a 2^k |q| weight;
* family D, k = rank: no single product formula exists; each maximal minor
  of the bottom rows factors as a weight monomial times a weight-free
  rational product, so the sum of squared minors is assembled exactly from
  product-form minors (no determinant calls).

All closed forms are verified against an independent Gram/Cauchy-Binet
oracle in the tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ChamberError, SingularConfigurationError, ValidationError
from .moser import MoserPoint, RuijsenaarsMatrixSpec, check_chamber, closed_form_minor
from .rootsys import RootDatum

LOG2 = float(np.log(2.0))


@dataclass(frozen=True)
class GoldfishPoint:
    """Chamber coordinates qhat and conjugate momenta phat."""

    qhat: np.ndarray
    phat: np.ndarray

    def __post_init__(self):
        qhat = np.asarray(self.qhat, dtype=float)
        phat = np.asarray(self.phat, dtype=float)
        object.__setattr__(self, "qhat", qhat)
        object.__setattr__(self, "phat", phat)
        if qhat.ndim != 1 or qhat.shape != phat.shape:
            raise ValidationError(
                f"qhat and phat must be equal-length vectors, got {qhat.shape} and {phat.shape}"
            )
        if not (np.all(np.isfinite(qhat)) and np.all(np.isfinite(phat))):
            raise ValidationError("non-finite coordinates")


@dataclass(frozen=True)
class RSCoupling:
    """Positive coupling of the rational Ruijsenaars-Schneider model."""

    nu: float

    def __post_init__(self):
        nu = float(self.nu)
        object.__setattr__(self, "nu", nu)
        if not np.isfinite(nu) or nu <= 0.0:
            raise ValidationError(f"coupling must be positive and finite, got {nu}")


def chamber_factors(datum: RootDatum, qhat: np.ndarray) -> np.ndarray:
    """Per-coordinate radicands F_i of the weight change ahat = e^p sqrt(F).

    F_i = prod_{j>i}(q_i - q_j) / prod_{k<i}(q_k - q_i), times
    prod_k (q_i + q_k) for C, additionally times q_i for B, and
    prod_{k != i} (q_i + q_k) for D.  Positive on the open chamber.
    """
    q = np.asarray(qhat, dtype=float)
    n = q.size
    fam = datum.algebra.family
    F = np.ones(n)
    for i in range(n):
        for j in range(i + 1, n):
            F[i] *= q[i] - q[j]
        for k in range(i):
            F[i] /= q[k] - q[i]
        if fam in ("B", "C"):
            for k in range(n):
                F[i] *= q[i] + q[k]
            if fam == "B":
                F[i] *= q[i]
        elif fam == "D":
            for k in range(n):
                if k != i:
                    F[i] *= q[i] + q[k]
    if np.any(F <= 0.0):
        raise ChamberError(f"non-positive weight radicand at qhat {q}")
    return F


def a_from_p(datum: RootDatum, point: GoldfishPoint) -> MoserPoint:
    """Canonical map from goldfish momenta to positive diagonal weights."""
    check_chamber(datum, point.qhat)
    F = chamber_factors(datum, point.qhat)
    return MoserPoint(qhat=point.qhat, ahat=np.exp(point.phat) * np.sqrt(F))


def p_from_a(datum: RootDatum, point: MoserPoint) -> GoldfishPoint:
    """Inverse of a_from_p."""
    check_chamber(datum, point.qhat)
    F = chamber_factors(datum, point.qhat)
    return GoldfishPoint(qhat=point.qhat, phat=np.log(point.ahat) - 0.5 * np.log(F))


@lru_cache(maxsize=None)
def _subset_masks(n: int, k: int) -> np.ndarray:
    """(num_subsets, n) 0/1 rows, one per size-k subset of range(n)."""
    combos = list(itertools.combinations(range(n), k))
    mask = np.zeros((len(combos), n))
    for t, I in enumerate(combos):
        mask[t, list(I)] = 1.0
    return mask


@lru_cache(maxsize=None)
def _paired_masks(n: int, size: int):
    """Stacked indicator rows for all (I, J) with |I| + |J| = size.

    Returns (Imask, MJmask); MJmask marks the mirrored indices n-1-r, r in J.
    Overlap of I and mirrored J is allowed and meaningful (the exponential
    factors cancel there).
    """
    I_rows, M_rows = [], []
    for sI in range(size + 1):
        sJ = size - sI
        if sI > n or sJ > n:
            continue
        for I in itertools.combinations(range(n), sI):
            for J in itertools.combinations(range(n), sJ):
                irow = np.zeros(n)
                mrow = np.zeros(n)
                irow[list(I)] = 1.0
                mrow[[n - 1 - r for r in J]] = 1.0
                I_rows.append(irow)
                M_rows.append(mrow)
    return np.array(I_rows), np.array(M_rows)


def _log_diff_matrix(q: np.ndarray) -> np.ndarray:
    ad = np.abs(q[:, None] - q[None, :])
    np.fill_diagonal(ad, 1.0)  # diagonal never survives the masks
    return np.log(ad)


def _log_gap_matrices(q: np.ndarray):
    # The pair-sum logs are only meaningful on the B/C/D chambers, where
    # q_i + q_j stays away from zero; family A must not evaluate them
    # (opposite spectral values are generic there).
    return _log_diff_matrix(q), np.log(np.abs(q[:, None] + q[None, :]))


def _paired_sum(fam: str, q: np.ndarray, p: np.ndarray, size: int, stratum: str) -> float:
    """Evaluate one (I, J)-stratum of the B/C/D closed forms."""
    n = q.size
    if size < 1:
        raise ValidationError("stratum size must be at least 1")
    logad, logas = _log_gap_matrices(q)
    Imask, MJmask = _paired_masks(n, size)
    Ic, MJc = 1.0 - Imask, 1.0 - MJmask
    logden = (
        ((Imask @ logad) * Ic).sum(axis=1)
        + ((Imask @ logas) * MJc).sum(axis=1)
        + ((MJmask @ logas) * Ic).sum(axis=1)
        + ((MJmask @ logad) * MJc).sum(axis=1)
    )
    lognum = 2.0 * (Imask - MJmask) @ p
    if fam == "B":
        logq = np.log(q)
        if stratum == "main":
            lognum -= (Imask + MJmask) @ logq
        else:  # exceptional half-weight stratum
            lognum -= (Ic + MJc) @ logq
    elif fam == "D":
        lognum += size * LOG2 + (Imask + MJmask) @ np.log(np.abs(q))
    return float(np.exp(lognum - logden).sum())


def _b_exceptional_zero(q: np.ndarray) -> float:
    # size-0 stratum of family B at k=1: the empty (I, J) pair contributes
    # the bare weight 1/(prod_m q_m)^2 with no exponential factors
    return float(np.prod(1.0 / q) ** 2)


@lru_cache(maxsize=None)
def _top_subsets(two_n: int, n: int):
    return list(itertools.combinations(range(two_n), n))


def _d_top_sum(datum: RootDatum, q: np.ndarray, p: np.ndarray) -> float:
    """Exact k = rank invariant for family D.

    Work at unit weights: the bottom n rows of the momentum-equation
    solution consist of one exceptional row R (the fused-root row) above
    n-1 rows of a Cauchy-type matrix.  Each maximal minor V_S splits as
    (prod of ahat^{+-1} over selected columns) x V0_S with V0_S weight-free;
    V0_S is a short Laplace expansion of R against product-form minors.
    Squaring and substituting ahat_i^2 = e^{2 phat_i} F_i gives the sum.
    """
    n = q.size
    F = chamber_factors(datum, q)
    jj = np.arange(n)
    b0 = np.concatenate([((-1.0) ** (n - 1 - jj)) * 2.0 * q, np.ones(n)])
    x = np.concatenate([-q, q[::-1]])
    spec0 = RuijsenaarsMatrixSpec(b=b0, x=x)

    R0 = np.zeros(2 * n)
    for j in range(n - 1):
        val = 1.0
        for k in range(j + 1, n - 1):
            val /= q[j] - q[k]
        R0[j] = -val / (q[j] + q[n - 1])
    R0[n] = 1.0

    # column -> (coordinate index, weight power)
    col_index = np.concatenate([jj, (n - 1 - jj)])
    col_power = np.concatenate([np.ones(n), -np.ones(n)])

    log_weight = 2.0 * p + np.log(F)  # log(ahat_i^2)
    total = 0.0
    for S in _top_subsets(2 * n, n):
        v0 = 0.0
        for pos, c in enumerate(S):
            if R0[c] == 0.0:
                continue
            rest = tuple(col for col in S if col != c)
            v0 += (-1.0) ** pos * R0[c] * closed_form_minor(spec0, rest)
        if v0 == 0.0:
            continue
        sigma = np.zeros(n)
        for c in S:
            sigma[col_index[c]] += col_power[c]
        total += v0 * v0 * float(np.exp(sigma @ log_weight))
    return total


def goldfish_hamiltonian(datum: RootDatum, point: GoldfishPoint, k: int) -> float:
    """Closed-form dual Hamiltonian H-hat_k = m_k(g g^dagger)."""
    n = datum.algebra.rank
    if not 1 <= k <= n:
        raise ValidationError(f"k must lie in 1..{n}, got {k}")
    q = np.asarray(point.qhat, dtype=float)
    if q.shape != (n,):
        raise ValidationError(f"point rank {q.shape} does not match algebra rank {n}")
    check_chamber(datum, q)
    p = np.asarray(point.phat, dtype=float)
    fam = datum.algebra.family

    if fam == "A":
        logad = _log_diff_matrix(q)
        Imask = _subset_masks(n, k)
        Ic = 1.0 - Imask
        logden = ((Imask @ logad) * Ic).sum(axis=1)
        return float(np.exp(2.0 * (Imask @ p) - logden).sum())
    if fam == "C":
        return _paired_sum("C", q, p, k, "main")
    if fam == "B":
        main = _paired_sum("B", q, p, k, "main")
        if k == 1:
            extra = _b_exceptional_zero(q)
        else:
            extra = _paired_sum("B", q, p, k - 1, "exceptional")
        return main + extra
    # family D
    if k < n:
        return _paired_sum("D", q, p, k, "main")
    return _d_top_sum(datum, q, p)


def goldfish_hamiltonians(datum: RootDatum, point: GoldfishPoint, kmax: int | None = None) -> np.ndarray:
    """Vector (H-hat_1, ..., H-hat_kmax); kmax defaults to the rank."""
    n = datum.algebra.rank
    kmax = n if kmax is None else int(kmax)
    if not 1 <= kmax <= n:
        raise ValidationError(f"kmax must lie in 1..{n}, got {kmax}")
    return np.array([goldfish_hamiltonian(datum, point, k) for k in range(1, kmax + 1)])


def goldfish_hamiltonian_signed_A(point: GoldfishPoint, k: int) -> float:
    """Family-A dual Hamiltonian with signed denominators (no modulus).

    This is the strong-coupling limit of the rational Ruijsenaars-Schneider
    Hamiltonians; it agrees with the modulus form only on the chamber
    closure where all selected differences are positive.
    """
    q = np.asarray(point.qhat, dtype=float)
    p = np.asarray(point.phat, dtype=float)
    n = q.size
    if not 1 <= k <= n:
        raise ValidationError(f"k must lie in 1..{n}, got {k}")
    total = 0.0
    for I in itertools.combinations(range(n), k):
        inside = set(I)
        term = float(np.exp(2.0 * sum(p[i] for i in I)))
        for i in I:
            for j in range(n):
                if j not in inside:
                    term /= q[i] - q[j]
        total += term
    return total


def rs_hamiltonian_A(point: GoldfishPoint, coupling: RSCoupling, k: int) -> float:
    """Rational Ruijsenaars-Schneider Hamiltonian of the A family.

    H_k = sum_{|I|=k} prod_{i in I, j notin I} (q_i - q_j + nu)/(q_i - q_j)
          * exp(2 sum_I p).  At k = n the product is empty, so the value is
    exp(2 sum p) independently of the coupling.
    """
    q = np.asarray(point.qhat, dtype=float)
    p = np.asarray(point.phat, dtype=float)
    n = q.size
    if not 1 <= k <= n:
        raise ValidationError(f"k must lie in 1..{n}, got {k}")
    gaps = np.abs(q[:, None] - q[None, :])
    np.fill_diagonal(gaps, np.inf)
    if gaps.min() <= 1.0e-10:
        raise SingularConfigurationError("coordinates must be pairwise distinct")
    nu = coupling.nu
    total = 0.0
    for I in itertools.combinations(range(n), k):
        inside = set(I)
        term = float(np.exp(2.0 * sum(p[i] for i in I)))
        for i in I:
            for j in range(n):
                if j not in inside:
                    term *= (q[i] - q[j] + nu) / (q[i] - q[j])
        total += term
    return total


def d_h1_pairsum_variant(datum: RootDatum, point: GoldfishPoint) -> float:
    """Sum-over-pairs variant of the family-D first invariant.

    Replaces the product over k != i of |q_i^2 - q_k^2|^{-1} by the sum of
    the same reciprocals.  It disagrees with the determinant oracle; it is
    kept so verification reports can quantify the discrepancy.
    """
    if datum.algebra.family != "D":
        raise ValidationError("variant defined for family D only")
    q = np.asarray(point.qhat, dtype=float)
    p = np.asarray(point.phat, dtype=float)
    n = q.size
    total = 0.0
    for i in range(n):
        coeff = sum(1.0 / abs(q[i] ** 2 - q[k] ** 2) for k in range(n) if k != i)
        total += (np.exp(2.0 * p[i]) + np.exp(-2.0 * p[i])) * coeff
    return float(total)
