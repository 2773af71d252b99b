"""Seeded property suite behind the `verify` command.

Each property draws its own points through (seed, counter) pairs, measures
a worst residual, and compares it against a fixed tolerance.  The result
is a JSON-ready dictionary: header with the exact seeding scheme, one
record per property, a discrepancy log holding printed-form-vs-oracle
gaps (family D first Hamiltonian) and convention notes (the halved second
minor of the rank-2 C chain), and the overall verdict.

Counters are allocated as 1000 * property_slot + point_index, so any
reported point can be resampled in isolation.
"""

from __future__ import annotations

import numpy as np

from .duality import symplectomorphism_check, verify_duality_identities, toda_to_goldfish, goldfish_to_toda
from .errors import DualityResidualError, NonGenericPointError, OracleMismatchError
from .goldfish import a_from_p, d_h1_pairsum_variant, goldfish_hamiltonians
from .moser import build_moser_g, minor_oracle_mk, moser_momentum_residual
from .poisson import commutativity_matrix
from .rootsys import RootDatum
from .sampling import (
    SEED_SCHEME,
    sample_flow_toda,
    sample_goldfish,
    sample_moser,
    sample_toda,
    spawn_rng,
)
from .toda import TodaPoint, build_lax, integrate_flow, toda_hamiltonians, toda_momentum_residual

RANK_CAP = 8

COUNTER_STRIDE = 1000

TOLERANCES = {
    "toda-momentum-residual": 1.0e-9,
    "moser-momentum-residual": 1.0e-9,
    "closed-form-vs-minor-oracle": 1.0e-8,
    "odd-trace-vanishing": 1.0e-10,
    "duality-identities": 1.0e-7,
    "round-trip": 1.0e-7,
    "toda-commutativity": 1.0e-5,
    "goldfish-commutativity": 1.0e-5,
    "flow-conservation": 1.0e-6,
    "symplectomorphism": 1.0e-4,
}

# Property slots fix the counter layout; appending new properties must not
# renumber existing ones or seeded reports change silently.
SLOTS = {
    "toda-momentum-residual": 0,
    "moser-momentum-residual": 1,
    "closed-form-vs-minor-oracle": 2,
    "odd-trace-vanishing": 3,
    "duality-identities": 4,
    "round-trip": 5,
    "toda-commutativity": 6,
    "goldfish-commutativity": 7,
    "flow-conservation": 8,
    "symplectomorphism": 9,
    "discrepancy-log": 10,
}


def _rng(seed: int, name: str, j: int):
    return spawn_rng(seed, COUNTER_STRIDE * SLOTS[name] + j)


def _record(name: str, worst: float, note: str = "") -> dict:
    tol = TOLERANCES[name]
    rec = {
        "property": name,
        "worst_residual": float(worst),
        "tolerance": tol,
        "passed": bool(worst < tol),
    }
    if note:
        rec["note"] = note
    return rec


def _relative_gap(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def _point_notes(skipped: list, broken: list) -> str:
    """Summarize per-point exceptions raised by the duality maps.

    Non-generic draws (chamber wall, degenerate spectrum, unresolvable
    Gauss cell) are a legitimate sampler outcome at larger ranks; they are
    reported but do not fail the property unless nothing is left to
    certify.  Residual failures mean a map ran and missed its own
    consistency gates; those always fail the property.
    """
    parts = []
    if skipped:
        points = ", ".join(f"{j}: {msg}" for j, msg in skipped)
        parts.append(f"{len(skipped)} non-generic draw(s) skipped ({points})")
    if broken:
        points = ", ".join(f"{j}: {msg}" for j, msg in broken)
        parts.append(f"{len(broken)} residual failure(s) ({points})")
    return "; ".join(parts)


def run_suite(datum: RootDatum, seed: int, npoints: int = 8, flow_steps: int = 200) -> dict:
    """Run every property for one algebra; returns the JSON-ready report."""
    fam, n = datum.algebra.family, datum.algebra.rank
    properties = []

    name = "toda-momentum-residual"
    worst = 0.0
    for j in range(npoints):
        pt = sample_toda(datum, _rng(seed, name, j))
        worst = max(worst, toda_momentum_residual(datum, pt))
    properties.append(_record(name, worst))

    name = "moser-momentum-residual"
    worst = 0.0
    for j in range(npoints):
        mp = sample_moser(datum, _rng(seed, name, j))
        worst = max(worst, moser_momentum_residual(datum, mp))
    properties.append(_record(name, worst))

    name = "closed-form-vs-minor-oracle"
    worst = 0.0
    note = ""
    for j in range(npoints):
        gp = sample_goldfish(datum, _rng(seed, name, j))
        values = goldfish_hamiltonians(datum, gp)
        g = build_moser_g(datum, a_from_p(datum, gp))
        try:
            for k in range(1, n + 1):
                worst = max(worst, _relative_gap(values[k - 1], minor_oracle_mk(datum, g, k)))
        except OracleMismatchError as exc:
            worst = float("inf")
            note = f"point {j}: {exc}"
            break
    properties.append(_record(name, worst, note=note))

    if fam != "A":
        name = "odd-trace-vanishing"
        worst = 0.0
        for j in range(npoints):
            X = build_lax(datum, sample_toda(datum, _rng(seed, name, j)))
            scale = max(1.0, float(np.linalg.norm(X, "fro")))
            P = X.copy()
            worst = max(worst, abs(np.trace(P)) / scale)
            for m in range(3, 2 * n + 2, 2):
                P = P @ X @ X
                worst = max(worst, abs(np.trace(P)) / scale**m)
        properties.append(_record(name, worst))

    name = "duality-identities"
    worst = 0.0
    skipped, broken = [], []
    for j in range(npoints):
        pt = sample_toda(datum, _rng(seed, name, j))
        try:
            worst = max(worst, verify_duality_identities(datum, pt).max_relative_mismatch)
        except DualityResidualError as exc:
            broken.append((j, str(exc)))
        except NonGenericPointError as exc:
            skipped.append((j, str(exc)))
    if broken or len(skipped) == npoints:
        worst = float("inf")
    properties.append(_record(name, worst, note=_point_notes(skipped, broken)))

    name = "round-trip"
    worst = 0.0
    skipped, broken = [], []
    for j in range(npoints):
        pt = sample_toda(datum, _rng(seed, name, j))
        try:
            back = goldfish_to_toda(datum, toda_to_goldfish(datum, pt))
        except DualityResidualError as exc:
            broken.append((j, str(exc)))
            continue
        except NonGenericPointError as exc:
            skipped.append((j, str(exc)))
            continue
        worst = max(
            worst,
            float(max(np.max(np.abs(back.q - pt.q)), np.max(np.abs(back.p - pt.p)))),
        )
    if broken or len(skipped) == npoints:
        worst = float("inf")
    properties.append(_record(name, worst, note=_point_notes(skipped, broken)))

    name = "toda-commutativity"
    worst = 0.0
    for j in range(min(npoints, 4)):
        pt = sample_toda(datum, _rng(seed, name, j))
        worst = max(worst, float(commutativity_matrix(datum, "toda", pt).max()))
    properties.append(_record(name, worst))

    name = "goldfish-commutativity"
    worst = 0.0
    for j in range(min(npoints, 4)):
        gp = sample_goldfish(datum, _rng(seed, name, j))
        worst = max(worst, float(commutativity_matrix(datum, "goldfish", gp).max()))
    properties.append(_record(name, worst))

    name = "flow-conservation"
    k_flow = 2 if n >= 2 else 1
    pt = sample_flow_toda(datum, _rng(seed, name, 0))
    trajectory = integrate_flow(datum, pt, k_flow, 1.0e-3, flow_steps)
    h0 = toda_hamiltonians(datum, pt)
    lam0 = np.linalg.eigvalsh(build_lax(datum, pt))
    # Drift is normalized by family scale: near-zero individual invariants
    # (family B keeps an exact zero eigenvalue) make per-value ratios
    # ill-conditioned without testing anything extra.
    h_scale = float(np.max(np.abs(h0)))
    spectral_scale = float(np.max(np.abs(lam0)))
    final = TodaPoint(q=trajectory[-1][:n], p=trajectory[-1][n:])
    hT = toda_hamiltonians(datum, final)
    lamT = np.linalg.eigvalsh(build_lax(datum, final))
    worst = float(np.max(np.abs(hT - h0))) / h_scale
    worst = max(worst, float(np.max(np.abs(lamT - lam0))) / spectral_scale)
    properties.append(
        _record(name, worst, note=f"flow of H_{k_flow}, dt=1e-3, {flow_steps} steps")
    )

    name = "symplectomorphism"
    worst = 0.0
    sigmas = []
    skipped, broken = [], []
    for j in range(min(npoints, 3)):
        pt = sample_toda(datum, _rng(seed, name, j))
        try:
            residual, sigma = symplectomorphism_check(datum, pt)
        except DualityResidualError as exc:
            broken.append((j, str(exc)))
            continue
        except NonGenericPointError as exc:
            skipped.append((j, str(exc)))
            continue
        worst = max(worst, residual)
        sigmas.append(sigma)
    if broken or not sigmas:
        worst = float("inf")
    note = f"sigma values {sorted(set(sigmas))}"
    extra = _point_notes(skipped, broken)
    if extra:
        note += "; " + extra
    properties.append(_record(name, worst, note=note))

    log = []
    if fam == "D":
        for j in range(min(npoints, 3)):
            gp = sample_goldfish(datum, _rng(seed, "discrepancy-log", j))
            oracle = float(goldfish_hamiltonians(datum, gp, 1)[0])
            printed = d_h1_pairsum_variant(datum, gp)
            log.append(
                {
                    "kind": "printed-form-vs-oracle",
                    "hamiltonian_index": 1,
                    "printed_value": printed,
                    "oracle_value": oracle,
                    "relative_gap": _relative_gap(printed, oracle),
                    "qhat": [float(v) for v in gp.qhat],
                    "phat": [float(v) for v in gp.phat],
                    "counter": COUNTER_STRIDE * SLOTS["discrepancy-log"] + j,
                    "note": "sum-over-pairs first invariant disagrees with the minor "
                    "oracle; the oracle-backed closed form is what the library evaluates",
                }
            )
    if fam == "C" and n == 2:
        gp = sample_goldfish(datum, _rng(seed, "discrepancy-log", 0))
        m2 = float(goldfish_hamiltonians(datum, gp, 2)[1])
        log.append(
            {
                "kind": "half-m2-convention",
                "hamiltonian_index": 2,
                "m2": m2,
                "half_m2": 0.5 * m2,
                "qhat": [float(v) for v in gp.qhat],
                "phat": [float(v) for v in gp.phat],
                "note": "the rank-2 C chain is sometimes normalized with an extra 1/2 "
                "on the top minor; the library reports m_k unhalved",
            }
        )

    report = {
        "header": {
            "family": fam,
            "rank": n,
            "seed": int(seed),
            "seed_scheme": SEED_SCHEME,
            "counter_layout": f"counter = {COUNTER_STRIDE} * property_slot + point_index",
            "property_slots": {k: v for k, v in SLOTS.items()},
            "npoints": int(npoints),
        },
        "properties": properties,
        "discrepancy_log": log,
        "all_passed": bool(all(rec["passed"] for rec in properties)),
    }
    if n > RANK_CAP:
        report["header"]["rank_cap_warning"] = (
            f"rank {n} exceeds the desk-scale bound {RANK_CAP}; "
            "subset enumeration cost grows combinatorially"
        )
    return report
