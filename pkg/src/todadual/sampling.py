"""Seeded, reproducible sampling of generic phase-space points.

One 64-bit seed plus an integer counter pins down every sampled point:
generators come from numpy's SeedSequence(entropy=seed, spawn_key=(counter,)),
so point j of any batch is reproducible in isolation without replaying the
batch.  Chamber samples keep every wall and pole margin at 0.1 or more,
far above the 1e-8 rejection threshold, and family D draws the sign of
the last coordinate so both halves of its chamber get exercised.
"""

from __future__ import annotations

import numpy as np

from .goldfish import GoldfishPoint
from .moser import MoserPoint
from .rootsys import RootDatum
from .toda import TodaPoint

SEED_SCHEME = "numpy default_rng(SeedSequence(entropy=seed, spawn_key=(counter,)))"

# Chamber geometry knobs: consecutive gaps and the wall offset of the
# smallest (A: most negative) coordinate.
GAP_RANGE = (0.3, 1.2)
A_BASE_RANGE = (-1.5, -0.5)
POSITIVE_BASE_RANGE = (0.4, 1.0)
# Family D: |q_n| drawn as this fraction range of q_{n-1}.
D_LAST_FRACTION = (0.25, 0.75)
MOMENTUM_RANGE = (-0.8, 0.8)
TODA_RANGE = (-1.0, 1.0)


def spawn_rng(seed: int, counter: int = 0) -> np.random.Generator:
    """Independent generator for one (seed, counter) pair."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(counter),))
    return np.random.default_rng(ss)


def sample_chamber(datum: RootDatum, rng: np.random.Generator) -> np.ndarray:
    """Strictly ordered spectral coordinates with safe wall margins."""
    fam, n = datum.algebra.family, datum.algebra.rank
    base = rng.uniform(*(A_BASE_RANGE if fam == "A" else POSITIVE_BASE_RANGE))
    gaps = rng.uniform(*GAP_RANGE, size=n - 1)
    ascending = base + np.concatenate([[0.0], np.cumsum(gaps)])
    qhat = ascending[::-1].copy()
    if fam == "D":
        sign = -1.0 if rng.random() < 0.5 else 1.0
        qhat[-1] = sign * rng.uniform(*D_LAST_FRACTION) * qhat[-2]
    return qhat


def sample_goldfish(datum: RootDatum, rng: np.random.Generator) -> GoldfishPoint:
    n = datum.algebra.rank
    return GoldfishPoint(qhat=sample_chamber(datum, rng), phat=rng.uniform(*MOMENTUM_RANGE, size=n))


def sample_moser(datum: RootDatum, rng: np.random.Generator) -> MoserPoint:
    n = datum.algebra.rank
    return MoserPoint(
        qhat=sample_chamber(datum, rng), ahat=np.exp(rng.uniform(*MOMENTUM_RANGE, size=n))
    )


def sample_toda(datum: RootDatum, rng: np.random.Generator) -> TodaPoint:
    n = datum.algebra.rank
    return TodaPoint(q=rng.uniform(*TODA_RANGE, size=n), p=rng.uniform(*TODA_RANGE, size=n))


def sample_flow_toda(datum: RootDatum, rng: np.random.Generator) -> TodaPoint:
    """Mildly coupled initial data for integrator tests.

    Ascending, well-separated positions keep every exponential weight at
    or below about e^{-0.3} and the momenta small, so the symplectic
    energy oscillation of the midpoint rule stays well under the
    conservation tolerances instead of being dominated by a hard
    collision transient.
    """
    n = datum.algebra.rank
    base = np.linspace(-0.4 * n, -0.4, n)
    return TodaPoint(q=base + rng.uniform(-0.1, 0.1, size=n), p=rng.uniform(-0.2, 0.2, size=n))
