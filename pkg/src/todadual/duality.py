"""Coordinate maps between the two gauges of the reduced phase space.

A point of the reduced space has two canonical representatives: the Toda
gauge (g diagonal positive, X the real symmetric Lax matrix) and the Moser
gauge (X diagonal with chamber-ordered spectrum, g lower triangular with
positive leading-block diagonal).  The map between them is a change of
canonical coordinates: Toda (q, p) on one side, spectral (qhat, phat) on
the other.

toda_to_goldfish diagonalizes X by a unitary group element k, transports
g into that frame, strips the unipotent upper factor, and fixes the
residual torus phases so the leading diagonal is real positive; the
diagonal then reads off ahat and the momentum equation pins everything
else.  goldfish_to_toda runs the Iwasawa split of the Moser group element
the other way.  Both directions verify their defining residuals and raise
DualityResidualError instead of returning drifted coordinates.

Two families of invariant functions certify the map: the trailing
principal minors of g g^dagger (trivial in the Toda gauge, the dual
Hamiltonians in the Moser gauge) and the trace powers of X (the Toda
Hamiltonians in one gauge, spectral power sums in the other).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DualityResidualError, GaussCellError
from .goldfish import GoldfishPoint, a_from_p, goldfish_hamiltonians, p_from_a
from .linalg import iwasawa, lower_triangularize, structured_diagonalize
from .moser import MoserPoint, build_moser_g, momentum_equation_residual
from .rootsys import RootDatum, cartan_pattern
from .toda import SymplecticForm, TodaPoint, build_lax, symplectic_scale, toda_hamiltonians

# Residual budget for both directions of the map.
DUALITY_RTOL = 1.0e-8
# A leading diagonal entry below this (relative) floor means the point sits
# outside the dense cell where the triangular gauge exists.
PHASE_FLOOR = 1.0e-12
# Default finite-difference step for the Jacobian of the map.
JACOBIAN_STEP = 1.0e-5


@dataclass(frozen=True)
class DualityReport:
    """Both invariant families evaluated in both gauges at one point.

    toda_values[k-1]   : H_k (trace powers of the Lax matrix) at the input.
    goldfish_values[k-1]: dual Hamiltonian Hhat_k at the mapped point.
    jk_toda_gauge[k-1] : trailing k x k principal minor of g g^dagger in the
                         Toda gauge (an explicit exponential of q).
    ik_moser_gauge[k-1]: the trace powers evaluated on the diagonalized X,
                         i.e. power sums of the spectral coordinates.
    max_relative_mismatch: worst relative gap between matched pairs
                         (J_k vs Hhat_k and H_k vs I_k); recorded, never
                         silently swallowed.
    """

    toda_values: np.ndarray
    goldfish_values: np.ndarray
    jk_toda_gauge: np.ndarray
    ik_moser_gauge: np.ndarray
    max_relative_mismatch: float


def _relative_gap(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale


def _torus_phases(datum: RootDatum, diag: np.ndarray) -> np.ndarray:
    """Unit-modulus column factors making the leading diagonal real positive.

    The residual gauge freedom after triangularization is the diagonal
    torus of the compact subgroup; its mirrored entries are forced to the
    conjugate phases (and the middle entry to 1 for family B), so fixing
    the leading block fixes the whole element.
    """
    fam, n = datum.algebra.family, datum.algebra.rank
    lead = diag if fam == "A" else diag[:n]
    floor = PHASE_FLOOR * max(1.0, float(np.max(np.abs(diag))))
    if np.min(np.abs(lead)) < floor:
        raise GaussCellError("vanishing gauge diagonal; point is not generic")
    u = np.conj(lead) / np.abs(lead)
    if fam == "A":
        return u
    if fam == "B":
        return np.concatenate([u, [1.0], np.conj(u)[::-1]])
    return np.concatenate([u, np.conj(u)[::-1]])


def toda_to_moser(datum: RootDatum, point: TodaPoint, rtol: float = DUALITY_RTOL):
    """Moser-gauge representative of a Toda point: (MoserPoint, g_lower).

    Raises NonGenericPointError subclasses when the spectrum degenerates,
    the chamber is hit, or the triangular cell is missed, and
    DualityResidualError when the mapped element fails its momentum
    equation or disagrees with the canonical recurrence solution.
    """
    X = build_lax(datum, point)
    kunitary, qhat = structured_diagonalize(datum, X)
    gdiag = np.exp(cartan_pattern(datum, point.q))
    # Transport g into the frame where X is diagonal, then strip N_+.
    gtilde = gdiag[:, None] * kunitary.conj().T
    _, glow = lower_triangularize(datum, gtilde)
    phases = _torus_phases(datum, np.diagonal(glow))
    gfixed = glow * phases[None, :]

    n = datum.algebra.rank
    lead = np.diagonal(gfixed)[:n] if datum.algebra.family != "A" else np.diagonal(gfixed)
    ahat = np.abs(lead)
    mp = MoserPoint(qhat=qhat, ahat=ahat)

    # The momentum equation is checked on the recurrence-built element for
    # the extracted point; the transported matrix is then compared to it.
    # (Checking the equation on gfixed directly would only remeasure the
    # eigensolver's forward error at larger ranks.)
    gref = build_moser_g(datum, mp)
    residual = momentum_equation_residual(datum, gref, qhat)
    if residual > rtol:
        raise DualityResidualError(f"momentum residual {residual:.3e} after gauge transport")
    gap = np.linalg.norm(gfixed - gref, "fro") / max(1.0, np.linalg.norm(gref, "fro"))
    if gap > rtol:
        raise DualityResidualError(f"transported element misses the recurrence by {gap:.3e}")
    return mp, gfixed


def toda_to_goldfish(datum: RootDatum, point: TodaPoint, rtol: float = DUALITY_RTOL) -> GoldfishPoint:
    """Canonical coordinates of the dual system at the image of a Toda point."""
    mp, _ = toda_to_moser(datum, point, rtol=rtol)
    return p_from_a(datum, mp)


def goldfish_to_toda(datum: RootDatum, point: GoldfishPoint, rtol: float = DUALITY_RTOL) -> TodaPoint:
    """Toda-gauge representative of a dual-system point.

    The Iwasawa split of the Moser group element supplies the positive
    diagonal (hence q), and conjugating the diagonal X by the compact
    factor must land exactly on the Lax form (hence p); any leftover is a
    DualityResidualError.
    """
    mp = a_from_p(datum, point)
    g = build_moser_g(datum, mp)
    _, afactor, kfactor = iwasawa(datum, g)

    n = datum.algebra.rank
    adiag = np.real(np.diagonal(afactor))
    q = np.log(adiag[:n])
    pattern_gap = np.max(np.abs(adiag - np.exp(cartan_pattern(datum, q))))
    if pattern_gap > rtol * max(1.0, float(np.max(adiag))):
        raise DualityResidualError(
            f"Iwasawa diagonal breaks the torus pattern by {pattern_gap:.3e}"
        )

    Xhat = np.diag(cartan_pattern(datum, mp.qhat)).astype(complex)
    Xt = kfactor @ Xhat @ kfactor.conj().T
    scale = max(1.0, float(np.linalg.norm(Xhat, "fro")))
    if np.linalg.norm(Xt.imag, "fro") > rtol * scale:
        raise DualityResidualError("transported Lax matrix is not real")
    Xr = (Xt.real + Xt.real.T) / 2.0

    # Cartan components through the trace pairing Tr(X h_i) / Tr(h_i h_i).
    h = datum.cartan
    num = np.einsum("aij,ji->a", h, Xr)
    den = np.einsum("aij,aji->a", h, h)
    p = num / den

    recovered = TodaPoint(q=q, p=p)
    Xlax = build_lax(datum, recovered)
    gap = np.linalg.norm(Xr - Xlax, "fro") / scale
    if gap > rtol:
        raise DualityResidualError(f"transported X misses the Lax form by {gap:.3e}")
    return recovered


def toda_gauge_minors(datum: RootDatum, point: TodaPoint, kmax: int | None = None) -> np.ndarray:
    """Trailing principal minors J_k of g g^dagger in the Toda gauge.

    g is diagonal here, so J_k is the product of the last k entries of
    exp(2 * pattern(q)): explicit exponentials of the positions.
    """
    n = datum.algebra.rank
    kmax = n if kmax is None else int(kmax)
    pattern = cartan_pattern(datum, point.q)
    tail_sums = np.cumsum(pattern[::-1])[:kmax]
    return np.exp(2.0 * tail_sums)


def moser_gauge_traces(datum: RootDatum, qhat, kmax: int | None = None) -> np.ndarray:
    """Trace powers I_k of the diagonalized Lax matrix (spectral power sums)."""
    n = datum.algebra.rank
    kmax = n if kmax is None else int(kmax)
    qhat = np.asarray(qhat, dtype=float)
    ks = np.arange(1, kmax + 1, dtype=float)
    if datum.algebra.family == "A":
        return np.power(qhat[None, :], ks[:, None]).sum(axis=1) / ks
    return np.power(qhat[None, :] ** 2, ks[:, None]).sum(axis=1) / (2.0 * ks)


def verify_duality_identities(
    datum: RootDatum, point: TodaPoint, kmax: int | None = None
) -> DualityReport:
    """Evaluate both invariant families in both gauges and report mismatches.

    Matched pairs: jk_toda_gauge against goldfish_values (the same minor
    family in two gauges) and toda_values against ik_moser_gauge (the same
    trace family).  Mismatches land in max_relative_mismatch; nothing is
    raised here because the report itself is the verdict.
    """
    n = datum.algebra.rank
    kmax = n if kmax is None else int(kmax)
    toda_values = toda_hamiltonians(datum, point, kmax)
    gp = toda_to_goldfish(datum, point)
    goldfish_values = goldfish_hamiltonians(datum, gp, kmax)
    jk = toda_gauge_minors(datum, point, kmax)
    ik = moser_gauge_traces(datum, gp.qhat, kmax)
    worst = 0.0
    for k in range(kmax):
        worst = max(worst, _relative_gap(jk[k], goldfish_values[k]))
        worst = max(worst, _relative_gap(toda_values[k], ik[k]))
    return DualityReport(
        toda_values=toda_values,
        goldfish_values=goldfish_values,
        jk_toda_gauge=jk,
        ik_moser_gauge=ik,
        max_relative_mismatch=float(worst),
    )


def duality_jacobian(
    datum: RootDatum, point: TodaPoint, step: float = JACOBIAN_STEP, richardson: bool = False
) -> np.ndarray:
    """Central-difference Jacobian of (p, q) -> (phat, qhat).

    With richardson=True the h and h/2 stencils are combined to cancel the
    quadratic truncation term, which matters once the map's curvature grows
    with the rank.
    """
    n = datum.algebra.rank
    z0 = np.concatenate([point.p, point.q])

    def image(z: np.ndarray) -> np.ndarray:
        gp = toda_to_goldfish(datum, TodaPoint(q=z[n:], p=z[:n]))
        return np.concatenate([gp.phat, gp.qhat])

    def stencil(h: float) -> np.ndarray:
        cols = []
        for j in range(2 * n):
            zp, zm = z0.copy(), z0.copy()
            zp[j] += h
            zm[j] -= h
            cols.append((image(zp) - image(zm)) / (2.0 * h))
        return np.stack(cols, axis=1)

    if not richardson:
        return stencil(step)
    return (4.0 * stencil(step / 2.0) - stencil(step)) / 3.0


# Stencil widths tried by symplectomorphism_check.  A single width cannot
# serve every rank: truncation error grows with the step, map-evaluation
# noise grows with 1/step, and the noise floor rises with the rank.
STEP_LADDER = (1.0e-5, 1.0e-4, 1.0e-3)


def symplectomorphism_check(
    datum: RootDatum, point: TodaPoint, step: float | None = None, richardson: bool = False
) -> tuple[float, float]:
    """Residual of J^T W J = sigma W over sigma in {+1, -1}.

    W is the canonical block form in (p, q) ordering with the per-family
    scale on both sides.  Returns (best residual, chosen sigma); the sign
    is measured, not asserted, since either orientation is acceptable.

    With step=None every width in STEP_LADDER is tried and the smallest
    residual wins: each stencil measures the true deviation plus its own
    finite-difference noise, so the minimum is the tightest certificate.
    """
    s = symplectic_scale(datum)
    W = SymplecticForm(scale=s, rank=datum.algebra.rank).matrix()
    steps = STEP_LADDER if step is None else (float(step),)
    best = (np.inf, 1.0)
    for h in steps:
        J = duality_jacobian(datum, point, step=h, richardson=richardson)
        M = J.T @ W @ J
        r_plus = float(np.linalg.norm(M - W, "fro"))
        r_minus = float(np.linalg.norm(M + W, "fro"))
        r, sg = (r_plus, 1.0) if r_plus <= r_minus else (r_minus, -1.0)
        if r < best[0]:
            best = (r, sg)
    return best
