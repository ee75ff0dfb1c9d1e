"""Empirical audits of the two ratio-limit claims, plus randomized stress.

Each audit treats a claim as testable and returns evidence: supported,
violated (with a replayable witness), or inconclusive.  Nothing here
assumes the claims are true.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import NoConvergence, RejectedLastWeightZero, RejectedTrivial
from .ratio import (
    CONVERGED,
    DegeneracyReport,
    RatioOptions,
    _ratio_scan,
    degeneracy_check,
    estimate_ratio_limit,
)
from .roots import characteristic_polynomial, classify_dominance, find_roots
from .scalars import ExactComplex, format_scalar
from .sequences import (
    InitialConditions,
    Recurrence,
    fundamental_initial_conditions,
    generate,
    zero_run_stats,
)

PART_I = "part_i"
PART_II = "part_ii"

SUPPORTED = "supported"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"

# Exact generation is capped: integer terms stay manageable but rational
# denominators compound, and the float estimator takes over past this.
EXACT_AUDIT_HORIZON = 300


@dataclass(frozen=True)
class ClaimEvidence:
    claim: str  # PART_I | PART_II
    status: str  # SUPPORTED | VIOLATED | INCONCLUSIVE
    witness: Optional[dict]
    horizon: int


def audit_part_i(rec: Recurrence, init: InitialConditions,
                 horizon: int = 60) -> ClaimEvidence:
    """Audit the zero-propagation claim under the minimal empirical k0.

    Reads the claim in its strongest falsifiable form: with k0 the
    minimal index past which the fundamental sequence is nonzero (over
    the horizon), every F^a_k with k > k0 + n - 1 must be nonzero.
    """
    n = rec.n
    if horizon < 4 * n:
        raise ValueError("horizon must be at least 4n")
    mode = "exact" if (rec.is_exact and init.is_exact) else "float"
    fund = generate(rec, fundamental_initial_conditions(rec), horizon,
                    mode=mode)
    k0 = zero_run_stats(fund).first_index_after_which_all_nonzero
    if k0 is None:
        return ClaimEvidence(
            PART_I, INCONCLUSIVE,
            {"reason": "fundamental sequence has no nonzero tail "
                       "within the horizon"},
            horizon,
        )
    win = generate(rec, init, horizon, mode=mode)
    threshold = k0 + n - 1
    for k in range(threshold + 1, horizon + 1):
        if win.is_zero_at(k):
            return ClaimEvidence(
                PART_I, VIOLATED,
                {"k0": k0, "index": k,
                 "value": _scalar_repr(win.term(k)),
                 "claim_range_start": threshold + 1},
                horizon,
            )
    return ClaimEvidence(PART_I, SUPPORTED, {"k0": k0}, horizon)


def _exact_ratio_estimate(rec, init, opts):
    """Ratio estimate from exact-arithmetic terms: removes estimator
    noise from audit verdicts when the instance is exact."""
    cap = min(opts.max_k, EXACT_AUDIT_HORIZON)
    horizon = min(cap, max(8 * rec.n, 64))
    while True:
        win = generate(rec, init, horizon, mode="exact")
        value, status, k_conv, residual, _ = _ratio_scan(win, opts)
        if status == CONVERGED or horizon >= cap:
            return value, status, k_conv, residual
        horizon = min(cap, horizon * 2)


def audit_part_ii(rec: Recurrence, init: InitialConditions,
                  opts: Optional[RatioOptions] = None) -> ClaimEvidence:
    """Audit the ratio-limit claim: for an asymptotically simple
    characteristic polynomial, every nontrivial start must converge to
    the dominant root.

    Exact instances are audited with exact-arithmetic ratios first, with
    the float estimator as fallback.  A converged ratio away from the
    dominant root is a violation; the witness carries the measured value
    and the degeneracy report for the closed-form denominator.
    """
    opts = opts or RatioOptions()
    poly = characteristic_polynomial(rec)
    try:
        rootset = find_roots(poly)
    except NoConvergence:
        return ClaimEvidence(
            PART_II, INCONCLUSIVE,
            {"reason": "root solver did not converge"},
            opts.max_k,
        )
    report = classify_dominance(rootset)
    if not report.is_asymptotically_simple:
        return ClaimEvidence(
            PART_II, INCONCLUSIVE,
            {"reason": "characteristic polynomial is not asymptotically "
                       "simple",
             "near_tie": report.near_tie},
            opts.max_k,
        )
    lam = report.lambda0
    value = None
    status = None
    if rec.is_exact and init.is_exact:
        value, status, k_conv, residual = _exact_ratio_estimate(
            rec, init, opts)
    if status != CONVERGED:
        est = estimate_ratio_limit(rec, init, opts=opts)
        value, status = est.value, est.status
    if status != CONVERGED:
        return ClaimEvidence(
            PART_II, INCONCLUSIVE,
            {"reason": f"ratio estimate did not converge ({status})",
             "lambda0": _scalar_repr(lam)},
            opts.max_k,
        )
    tol = max(1e-6, 10.0 * opts.tol) * (1.0 + abs(lam))
    lam_for_degeneracy = lam
    if rec.is_exact and init.is_exact:
        snapped = snap_exact_root(rec, lam)
        if snapped is not None:
            lam_for_degeneracy = snapped
    degen = degeneracy_check(rec, init, lam_for_degeneracy)
    if abs(value - lam) <= tol:
        return ClaimEvidence(
            PART_II, SUPPORTED,
            {"measured": _scalar_repr(value),
             "lambda0": _scalar_repr(lam)},
            opts.max_k,
        )
    return ClaimEvidence(
        PART_II, VIOLATED,
        {"measured": _scalar_repr(value),
         "lambda0": _scalar_repr(lam),
         "degeneracy": _degeneracy_dict(degen)},
        opts.max_k,
    )


def snap_exact_root(rec: Recurrence, lam: complex):
    """Round a numeric root to a nearby Gaussian rational and keep it only
    if it is exactly a characteristic root; enables the exact degeneracy
    test whenever the dominant root happens to be rational."""
    candidate = ExactComplex(
        Fraction(lam.real).limit_denominator(10 ** 6),
        Fraction(lam.imag).limit_denominator(10 ** 6),
    )
    if abs(complex(candidate) - lam) > 1e-9 * (1.0 + abs(lam)):
        return None
    from .scalars import to_exact
    # Horner evaluation of lambda^n - b1 lambda^(n-1) - ... - bn
    acc = ExactComplex(1)
    for w in rec.weights:
        acc = acc * candidate - to_exact(w)
    return candidate if acc.is_zero else None


def _scalar_repr(v) -> str:
    if isinstance(v, ExactComplex):
        return format_scalar(v)
    return format_scalar(complex(v))


def _degeneracy_dict(d: DegeneracyReport) -> dict:
    return {
        "denominator": _scalar_repr(d.denominator),
        "numerator": _scalar_repr(d.numerator),
        "relative_magnitude": d.relative_magnitude,
        "degenerate": d.degenerate,
        "exact": d.exact,
    }


# -- randomized stress ---------------------------------------------------

@dataclass(frozen=True)
class BatchConfig:
    n_min: int = 2
    n_max: int = 4
    entry_kind: str = "int"  # int | rational | gaussian | float
    magnitude: int = 3
    horizon: int = 60
    ratio_opts: RatioOptions = field(default_factory=lambda: RatioOptions(
        tol=1e-10, max_k=2000, stability_window=8))


def _draw_entry(rng: random.Random, kind: str, magnitude: int):
    lo, hi = -magnitude, magnitude
    if kind == "int":
        return rng.randint(lo, hi)
    if kind == "rational":
        den = rng.randint(1, 3)
        return Fraction(rng.randint(lo * den, hi * den), den)
    if kind == "gaussian":
        return ExactComplex(rng.randint(lo, hi), rng.randint(lo, hi))
    if kind == "float":
        return complex(rng.uniform(lo, hi), 0.0)
    raise ValueError(f"unknown entry kind {kind!r}")


def draw_instance(rng: random.Random, config: BatchConfig):
    """One random (recurrence, initial conditions) pair; retries until
    the validity constraints (b_n nonzero, nontrivial start) hold."""
    n = rng.randint(config.n_min, config.n_max)
    while True:
        try:
            rec = Recurrence(
                [_draw_entry(rng, config.entry_kind, config.magnitude)
                 for _ in range(n)])
            break
        except RejectedLastWeightZero:
            continue
    while True:
        try:
            init = InitialConditions(
                [_draw_entry(rng, config.entry_kind, config.magnitude)
                 for _ in range(n)])
            break
        except RejectedTrivial:
            continue
    return rec, init


def instance_repr(rec: Recurrence, init: InitialConditions) -> dict:
    return {
        "weights": [_scalar_repr(w) for w in rec.weights],
        "init": [_scalar_repr(v) for v in init.values],
    }


def batch_audit(seed: int, count: int,
                config: Optional[BatchConfig] = None):
    """Run both audits on ``count`` seeded random instances.

    Returns (evidence_list, summary).  Output is a pure function of the
    seed and config: instances are drawn and audited in seed order, so
    repeated runs are byte-identical once serialized.
    """
    config = config or BatchConfig()
    rng = random.Random(seed)
    evidence = []
    summary = {
        PART_I: {SUPPORTED: 0, VIOLATED: 0, INCONCLUSIVE: 0},
        PART_II: {SUPPORTED: 0, VIOLATED: 0, INCONCLUSIVE: 0},
    }
    for idx in range(count):
        rec, init = draw_instance(rng, config)
        inst = instance_repr(rec, init)
        ev1 = audit_part_i(rec, init, horizon=config.horizon)
        ev2 = audit_part_ii(rec, init, opts=config.ratio_opts)
        for ev in (ev1, ev2):
            summary[ev.claim][ev.status] += 1
            evidence.append({
                "instance_index": idx,
                "instance": inst,
                "claim": ev.claim,
                "status": ev.status,
                "witness": ev.witness,
                "horizon": ev.horizon,
            })
    return evidence, summary
