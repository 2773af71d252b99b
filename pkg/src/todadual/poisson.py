"""Finite-difference Poisson brackets and commutativity certificates.

Both Hamiltonian families live on a phase space with the bracket
{f, g} = s^{-1} sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i), where s is the
per-family symplectic scale (1 for A, 2 for B/C/D).  Derivatives are
central finite differences on the flat vector z = (momenta, positions);
an optional Richardson pass combines steps h and h/2 to cancel the h^2
error term, which is what the tighter commutativity tolerances need.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ValidationError
from .goldfish import GoldfishPoint, goldfish_hamiltonian
from .rootsys import AlgebraType, RootDatum
from .toda import TodaPoint, symplectic_scale, toda_hamiltonian

BRACKET_STEP = 1.0e-5

OBSERVABLE_FAMILIES = ("toda", "goldfish")


@dataclass(frozen=True)
class ObservableHandle:
    """One member of a commuting family: H_k (toda) or Hhat_k (goldfish)."""

    family: str
    index: int
    algebra: AlgebraType

    def __post_init__(self):
        fam = str(self.family).lower()
        if fam not in OBSERVABLE_FAMILIES:
            raise ValidationError(f"unknown observable family {self.family!r}")
        object.__setattr__(self, "family", fam)
        if not 1 <= self.index <= self.algebra.rank:
            raise ValidationError(
                f"index must lie in 1..{self.algebra.rank}, got {self.index}"
            )


def flatten_point(point) -> np.ndarray:
    """Flat phase vector (momenta first) for either kind of point."""
    if isinstance(point, TodaPoint):
        return np.concatenate([point.p, point.q])
    if isinstance(point, GoldfishPoint):
        return np.concatenate([point.phat, point.qhat])
    raise ValidationError(f"unsupported point type {type(point).__name__}")


def observable_function(datum: RootDatum, handle: ObservableHandle) -> Callable[[np.ndarray], float]:
    """Evaluator of the observable on flat phase vectors."""
    if handle.algebra != datum.algebra:
        raise ValidationError("observable algebra does not match the datum")
    n = datum.algebra.rank
    k = handle.index
    if handle.family == "toda":
        return lambda z: toda_hamiltonian(datum, TodaPoint(q=z[n:], p=z[:n]), k)
    return lambda z: goldfish_hamiltonian(datum, GoldfishPoint(qhat=z[n:], phat=z[:n]), k)


def observable_value(datum: RootDatum, handle: ObservableHandle, point) -> float:
    return observable_function(datum, handle)(flatten_point(point))


def _gradient(f: Callable[[np.ndarray], float], z: np.ndarray, step: float) -> np.ndarray:
    grad = np.empty(z.size)
    for j in range(z.size):
        zp, zm = z.copy(), z.copy()
        zp[j] += step
        zm[j] -= step
        grad[j] = (f(zp) - f(zm)) / (2.0 * step)
    return grad


def _pairing(scale: float, gf: np.ndarray, gg: np.ndarray) -> float:
    n = gf.size // 2
    return float(gf[n:] @ gg[:n] - gf[:n] @ gg[n:]) / scale


def poisson_bracket_functions(
    datum: RootDatum,
    f: Callable[[np.ndarray], float],
    g: Callable[[np.ndarray], float],
    z: np.ndarray,
    step: float = BRACKET_STEP,
    richardson: bool = False,
) -> float:
    """Bracket of two scalar functions of the flat phase vector."""
    s = float(symplectic_scale(datum))
    z = np.asarray(z, dtype=float)
    if z.size != 2 * datum.algebra.rank:
        raise ValidationError(f"phase vector must have length {2 * datum.algebra.rank}")
    value = _pairing(s, _gradient(f, z, step), _gradient(g, z, step))
    if not richardson:
        return value
    half = _pairing(s, _gradient(f, z, step / 2.0), _gradient(g, z, step / 2.0))
    return (4.0 * half - value) / 3.0


def poisson_bracket(
    datum: RootDatum,
    f: ObservableHandle,
    g: ObservableHandle,
    point,
    step: float = BRACKET_STEP,
    richardson: bool = False,
) -> float:
    """Bracket of two observables of the same family at a point.

    {H, H} returns exactly 0.0 (antisymmetry short-circuit, no stencil
    evaluation); everything else goes through central differences.
    """
    if f.family != g.family or f.algebra != g.algebra:
        raise ValidationError("observables must share family and algebra")
    if f == g:
        return 0.0
    ff = observable_function(datum, f)
    gg = observable_function(datum, g)
    return poisson_bracket_functions(
        datum, ff, gg, flatten_point(point), step=step, richardson=richardson
    )


def commutativity_matrix(
    datum: RootDatum,
    family: str,
    point,
    step: float = BRACKET_STEP,
    richardson: bool = True,
) -> np.ndarray:
    """Normalized |{H_j, H_k}| over all pairs of one family.

    Entry (j, k) is |{H_j+1, H_k+1}| / (|grad H_j+1| |grad H_k+1|) so the
    integrability certificate is scale-free; the diagonal is exactly zero.
    """
    n = datum.algebra.rank
    handles = [ObservableHandle(family, k, datum.algebra) for k in range(1, n + 1)]
    funcs = [observable_function(datum, h) for h in handles]
    z = flatten_point(point)
    grads = [_gradient(fn, z, step) for fn in funcs]
    halves = [_gradient(fn, z, step / 2.0) for fn in funcs] if richardson else grads
    norms = [max(float(np.linalg.norm(gr)), 1.0e-300) for gr in grads]
    s = float(symplectic_scale(datum))

    out = np.zeros((n, n))
    for j in range(n):
        for k in range(j + 1, n):
            value = _pairing(s, grads[j], grads[k])
            if richardson:
                value = (4.0 * _pairing(s, halves[j], halves[k]) - value) / 3.0
            out[j, k] = out[k, j] = abs(value) / (norms[j] * norms[k])
    return out
