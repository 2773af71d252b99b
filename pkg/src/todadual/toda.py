"""Open Toda chains in the symmetric (Lax) gauge.

The Lax matrix is X = sum_i p_i h_i + sum_alpha e^{(alpha, q)}
(e_alpha + e_{-alpha}) over the simple roots; it is real symmetric and lies
in the algebra.  The commuting Hamiltonians are trace powers,

    family A:      H_k = Tr(X^k) / k,        k = 1..n,
    families BCD:  H_k = Tr(X^{2k}) / (4k),  k = 1..n,

and the physical (quadratic) Hamiltonian is H_2 for family A and H_1 for
B/C/D.  The Poisson structure carries a per-family scale s (1 for A, 2 for
B/C/D): {q_i, p_j} = delta_ij / s, so Hamilton's equations read
dz/dt = s^{-1} (dH/dp, -dH/dq).  Gradients are taken by central finite
differences and the flow uses the implicit midpoint rule, which preserves
the quadratic invariants of the exact flow to the iteration tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StepFailureError, ValidationError
from .rootsys import RootDatum, cartan_pattern, project_lower_nilpotent, simple_root_pairings

# Relative step used by all central finite differences in this module.
FD_SCALE = 1.0e-6
# Fixed-point iteration control for the implicit midpoint rule.
MIDPOINT_TOL = 1.0e-12
MIDPOINT_MAX_ITER = 100


@dataclass(frozen=True)
class TodaPoint:
    """Positions q and momenta p of the chain."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        p = np.asarray(self.p, dtype=float)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)
        if q.ndim != 1 or q.shape != p.shape:
            raise ValidationError(f"q and p must be equal-length vectors, got {q.shape} and {p.shape}")
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
            raise ValidationError("non-finite coordinates")


def symplectic_scale(datum: RootDatum) -> int:
    """Poisson scale s: 1 for family A, 2 for B/C/D."""
    return 1 if datum.algebra.family == "A" else 2


@dataclass(frozen=True)
class SymplecticForm:
    """Block form s * [[0, I], [-I, 0]] in (p, q) coordinate ordering."""

    scale: int
    rank: int

    def matrix(self) -> np.ndarray:
        n = self.rank
        out = np.zeros((2 * n, 2 * n))
        out[:n, n:] = self.scale * np.eye(n)
        out[n:, :n] = -self.scale * np.eye(n)
        return out


def build_lax(datum: RootDatum, point: TodaPoint) -> np.ndarray:
    """Real symmetric Lax matrix at a phase-space point."""
    n = datum.algebra.rank
    if point.q.shape != (n,):
        raise ValidationError(f"point rank {point.q.shape} does not match algebra rank {n}")
    X = np.diag(cartan_pattern(datum, point.p))
    if datum.num_roots:
        weights = np.exp(simple_root_pairings(datum, point.q))
        sym = datum.raising + datum.lowering
        X = X + np.tensordot(weights, sym, axes=1)
    return X


def toda_group_element(datum: RootDatum, point: TodaPoint) -> np.ndarray:
    """Diagonal group element exp(sum_i q_i h_i) paired with the Lax matrix."""
    return np.diag(np.exp(cartan_pattern(datum, point.q)))


def toda_momentum_residual(datum: RootDatum, point: TodaPoint) -> float:
    """Frobenius norm of Pr_lower(g X g^{-1}) - lam in the diagonal gauge.

    With g diagonal the conjugation is an entrywise rescaling; the strictly
    lower part must reproduce the fixed subdiagonal pattern lam.  The
    compact-projection half of the constraint, Pr_k(X) = 0, holds exactly
    because X is real symmetric by construction.
    """
    d = np.exp(cartan_pattern(datum, point.q))
    X = build_lax(datum, point)
    conj = X * np.outer(d, 1.0 / d)
    return float(np.linalg.norm(project_lower_nilpotent(conj) - datum.momentum, "fro"))


def quadratic_index(datum: RootDatum) -> int:
    """Index k of the physical quadratic Hamiltonian in the trace family."""
    if datum.algebra.family == "A":
        if datum.algebra.rank < 2:
            raise ValidationError("family A has no quadratic invariant at rank 1")
        return 2
    return 1


def toda_hamiltonians(datum: RootDatum, point: TodaPoint, kmax: int | None = None) -> np.ndarray:
    """Trace-power Hamiltonians (H_1, ..., H_kmax); kmax defaults to the rank."""
    n = datum.algebra.rank
    kmax = n if kmax is None else int(kmax)
    if not 1 <= kmax <= n:
        raise ValidationError(f"kmax must lie in 1..{n}, got {kmax}")
    X = build_lax(datum, point)
    fam = datum.algebra.family
    values = np.empty(kmax)
    if fam == "A":
        P = X.copy()
        values[0] = np.trace(P)
        for k in range(2, kmax + 1):
            P = P @ X
            values[k - 1] = np.trace(P) / k
    else:
        X2 = X @ X
        P = X2.copy()
        values[0] = np.trace(P) / 4.0
        for k in range(2, kmax + 1):
            P = P @ X2
            values[k - 1] = np.trace(P) / (4.0 * k)
    return values


def toda_hamiltonian(datum: RootDatum, point: TodaPoint, k: int) -> float:
    """Single trace-power Hamiltonian H_k."""
    if not 1 <= k <= datum.algebra.rank:
        raise ValidationError(f"k must lie in 1..{datum.algebra.rank}, got {k}")
    return float(toda_hamiltonians(datum, point, kmax=k)[k - 1])


def _fd_step(z: np.ndarray) -> float:
    return FD_SCALE * max(1.0, float(np.linalg.norm(z)))


def equations_of_motion(datum: RootDatum, point: TodaPoint, k: int):
    """Hamiltonian vector field of H_k: (dq/dt, dp/dt).

    Built from central finite differences of H_k with step
    1e-6 * max(1, |(q, p)|) and the per-family Poisson scale.
    """
    n = datum.algebra.rank
    q, p = point.q, point.p
    z = np.concatenate([q, p])
    h = _fd_step(z)
    s = float(symplectic_scale(datum))

    dH_dq = np.empty(n)
    dH_dp = np.empty(n)
    for i in range(n):
        dq = np.zeros(n)
        dq[i] = h
        plus = toda_hamiltonian(datum, TodaPoint(q=q + dq, p=p), k)
        minus = toda_hamiltonian(datum, TodaPoint(q=q - dq, p=p), k)
        dH_dq[i] = (plus - minus) / (2.0 * h)
        plus = toda_hamiltonian(datum, TodaPoint(q=q, p=p + dq), k)
        minus = toda_hamiltonian(datum, TodaPoint(q=q, p=p - dq), k)
        dH_dp[i] = (plus - minus) / (2.0 * h)
    return dH_dp / s, -dH_dq / s


def integrate_flow(
    datum: RootDatum,
    point: TodaPoint,
    k: int,
    dt: float,
    steps: int,
    tol: float = MIDPOINT_TOL,
    max_iter: int = MIDPOINT_MAX_ITER,
) -> np.ndarray:
    """Implicit-midpoint trajectory of the H_k flow.

    Returns an array of shape (steps + 1, 2n); each row is (q, p) at one
    time.  Every step solves z' = z + dt * f((z + z')/2) by fixed-point
    iteration to `tol` in the sup norm; non-convergence within `max_iter`
    raises StepFailureError.
    """
    if steps < 0:
        raise ValidationError(f"steps must be non-negative, got {steps}")
    if not np.isfinite(dt):
        raise ValidationError("dt must be finite")
    n = datum.algebra.rank

    def field(z):
        dq, dp = equations_of_motion(datum, TodaPoint(q=z[:n], p=z[n:]), k)
        return np.concatenate([dq, dp])

    traj = np.empty((steps + 1, 2 * n))
    z = np.concatenate([point.q, point.p])
    traj[0] = z
    for step in range(1, steps + 1):
        w = z + dt * field(z)
        best = np.inf
        stalled = 0
        # The FD vector field carries roundoff noise of order eps*|H|/h, so
        # the iterates can bounce slightly above `tol`; accept the noise
        # floor once the contraction stops making progress there.
        floor_cap = 64.0 * tol * max(1.0, float(np.max(np.abs(z))))
        for _ in range(max_iter):
            w_next = z + dt * field((z + w) / 2.0)
            delta = float(np.max(np.abs(w_next - w)))
            w = w_next
            if delta <= tol:
                break
            if delta < best:
                best, stalled = delta, 0
            else:
                stalled += 1
                if stalled >= 3 and delta <= floor_cap:
                    break
        else:
            raise StepFailureError(f"midpoint iteration stalled at step {step} (delta {delta:.3e})")
        z = w
        traj[step] = z
    return traj
