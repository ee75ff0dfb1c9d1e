"""Ratio-limit estimation and the supporting closed-form machinery.

Covers: the consecutive-term ratio estimator with zero skipping, the
decomposition of an arbitrary sequence over the fundamental one, the
closed-form limit fraction and its denominator-degeneracy test, and the
normalized-magnitude trend used to probe the classical non-vanishing
hypothesis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .scalars import ExactComplex, to_exact
from .sequences import (
    InitialConditions,
    Recurrence,
    SequenceWindow,
    fundamental_initial_conditions,
    generate,
    zero_run_stats,
)

CONVERGED = "converged"
NOT_CONVERGED = "not_converged"
NO_NONZERO_TAIL = "no_nonzero_tail"

VANISHING = "vanishing"
STABILIZING = "stabilizing"
INCONCLUSIVE = "inconclusive"

DEFAULT_DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class RatioOptions:
    tol: float = 1e-10
    max_k: int = 10000
    stability_window: int = 8

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.stability_window < 1:
            raise ValueError("stability_window must be >= 1")


@dataclass(frozen=True)
class RatioEstimate:
    value: Optional[complex]
    status: str
    k_converged: Optional[int]
    last_residual: float
    skipped_zero_indices: tuple
    empirical_k0: Optional[int]


@dataclass(frozen=True)
class DegeneracyReport:
    denominator: complex
    numerator: complex
    relative_magnitude: float
    degenerate: bool
    exact: bool = False


@dataclass(frozen=True)
class Condition11Report:
    samples: Tuple[Tuple[int, float], ...]
    trend: str
    final_magnitude: float


def _ratio_scan(win: SequenceWindow, opts: RatioOptions):
    """Walk consecutive-term ratios over a window, skipping zero terms.

    Returns (value, status, k_converged, last_residual, skipped).
    Ratios are only formed when both neighbours are nonzero; convergence
    means ``stability_window`` consecutive ratio steps within ``tol``.
    """
    skipped = []
    prev = None
    stable = 0
    last_residual = math.inf
    nonzero = {k: not win.is_zero_at(k) for k in win.indices()}
    for k in range(win.start_index, win.end_index):
        if not (nonzero[k] and nonzero[k + 1]):
            if not nonzero[k]:
                skipped.append(k)
            continue
        r = win.ratio(k)
        if isinstance(r, ExactComplex):
            r = complex(r)
        if prev is not None:
            last_residual = abs(r - prev)
            if last_residual <= opts.tol * max(1.0, abs(prev)):
                stable += 1
                if stable >= opts.stability_window:
                    return r, CONVERGED, k + 1, last_residual, skipped
            else:
                stable = 0
        prev = r
    if not nonzero.get(win.end_index, False):
        skipped.append(win.end_index)
    status = NOT_CONVERGED
    tail = [k for k in range(max(win.start_index, win.end_index - win.order + 1),
                             win.end_index + 1)]
    if tail and all(not nonzero[k] for k in tail):
        status = NO_NONZERO_TAIL
    return prev, status, None, last_residual, skipped


def estimate_ratio_limit(rec: Recurrence, init: InitialConditions,
                         opts: Optional[RatioOptions] = None,
                         mode: str = "float") -> RatioEstimate:
    """Estimate the limit of F_{k+1}/F_k by direct stabilization.

    Generates the sequence (float mode by default), forms ratios between
    consecutive nonzero terms, and declares convergence after
    ``stability_window`` consecutive steps within ``tol``.
    Non-convergence is a status, not an error.
    """
    opts = opts or RatioOptions()
    if opts.max_k < 4 * rec.n:
        raise ValueError("max_k must be at least 4n")
    win = generate(rec, init, opts.max_k, mode=mode)
    value, status, k_conv, residual, skipped = _ratio_scan(win, opts)
    k0 = zero_run_stats(win).first_index_after_which_all_nonzero
    return RatioEstimate(
        value=value,
        status=status,
        k_converged=k_conv,
        last_residual=residual,
        skipped_zero_indices=tuple(skipped),
        empirical_k0=k0,
    )


def decompose_via_fundamental(rec: Recurrence, init: InitialConditions,
                              k: int, mode: Optional[str] = None):
    """Express F^a_k through the fundamental sequence:
    a0*F0_k + sum_{i=1}^{n-1} a_{-i} sum_{j=1}^{n-i} b_{i+j} F0_{k-j}.

    In exact mode the result equals direct generation exactly.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = rec.n
    if mode is None:
        mode = "exact" if (rec.is_exact and init.is_exact) else "float"
    fund = generate(rec, fundamental_initial_conditions(rec), k, mode=mode)
    a = init.values if mode == "exact" else init.float_values()
    b = rec.weights if mode == "exact" else rec.float_weights()
    a0 = a[-1]  # a_0 is the last entry of (a_{-n+1}, ..., a_0)
    acc = a0 * fund.term(k)
    for i in range(1, n):
        a_mi = a[-1 - i]
        inner = None
        for j in range(1, n - i + 1):
            t = b[i + j - 1] * fund.term(k - j)  # b[i+j-1] is b_{i+j}
            inner = t if inner is None else inner + t
        acc = acc + a_mi * inner
    return acc


def _limit_fraction_terms(rec, init, phi0):
    """Shared assembly of the closed-form fraction N/D at a candidate
    limit phi0, plus the magnitude scale used for degeneracy tests."""
    n = rec.n
    exact = rec.is_exact and init.is_exact and isinstance(phi0, ExactComplex)
    if exact:
        a, b, phi = init.values, rec.weights, phi0
        one = to_exact(1)
        num = a[-1] * phi
        den = a[-1] * one
    else:
        a = init.float_values()
        b = rec.float_weights()
        phi = complex(phi0) if isinstance(phi0, ExactComplex) else complex(phi0)
        num = a[-1] * phi
        den = complex(a[-1])
    inv = (to_exact(1) / phi) if exact else (1.0 / phi)
    abs_phi = abs(complex(phi)) if exact else abs(phi)
    scale = abs(complex(a[-1]))
    for i in range(1, n):
        a_mi = a[-1 - i]
        inner_d = None
        inner_scale = 0.0
        p = inv
        for j in range(1, n - i + 1):
            t = b[i + j - 1] * p
            inner_d = t if inner_d is None else inner_d + t
            inner_scale += abs(complex(b[i + j - 1])) * abs_phi ** (-j)
            p = p * inv
        den = den + a_mi * inner_d
        num = num + a_mi * inner_d * phi
        scale += abs(complex(a_mi)) * inner_scale
    return num, den, scale, exact


def limit_expression(rec: Recurrence, init: InitialConditions, phi0):
    """Evaluate the closed-form limit fraction at phi0.

    Returns (numerator, denominator, value) where value is N/D when the
    denominator is safely away from zero and None otherwise.  The
    identity N == phi0 * D holds by construction.
    """
    if (isinstance(phi0, ExactComplex) and phi0.is_zero) or \
            (not isinstance(phi0, ExactComplex) and complex(phi0) == 0):
        raise ValueError("phi0 must be nonzero")
    num, den, scale, exact = _limit_fraction_terms(rec, init, phi0)
    if exact:
        degenerate = den.is_zero
    else:
        degenerate = abs(den) <= DEFAULT_DEGENERACY_TOL * max(scale, 1e-300)
    value = None if degenerate else num / den
    return num, den, value


def degeneracy_check(rec: Recurrence, init: InitialConditions, lambda0,
                     tol: float = DEFAULT_DEGENERACY_TOL) -> DegeneracyReport:
    """Test whether the closed-form limit fraction degenerates (its
    denominator vanishes) for this instance at the dominant root.

    When weights, initial conditions and ``lambda0`` are all exact the
    test is exact; otherwise the denominator magnitude is compared
    against ``tol`` times the sum of its terms' moduli.
    """
    num, den, scale, exact = _limit_fraction_terms(rec, init, lambda0)
    if exact:
        degenerate = den.is_zero
        rel = 0.0 if degenerate else abs(complex(den)) / max(scale, 1e-300)
        return DegeneracyReport(
            denominator=complex(den), numerator=complex(num),
            relative_magnitude=rel, degenerate=degenerate, exact=True,
        )
    rel = abs(den) / max(scale, 1e-300)
    return DegeneracyReport(
        denominator=den, numerator=num,
        relative_magnitude=rel, degenerate=rel <= tol, exact=False,
    )


def condition_11_estimate(rec: Recurrence, init: InitialConditions,
                          lambda0: complex, nu: int,
                          sample_ks: Optional[Sequence[int]] = None
                          ) -> Condition11Report:
    """Sample |F_k / (k^(nu-1) lambda0^k)| and classify its trend.

    All magnitudes are assembled in log space so lambda0^k is never
    materialized.  The trend is ``vanishing`` when the final sample drops
    below 1e-6 of the first, ``stabilizing`` when the second half of the
    samples agrees to 10%, and ``inconclusive`` otherwise.
    """
    lam = complex(lambda0)
    if lam == 0:
        raise ValueError("lambda0 must be nonzero")
    if nu < 1:
        raise ValueError("nu must be >= 1")
    if sample_ks is None:
        sample_ks = tuple(range(10, 201, 10))
    sample_ks = tuple(sorted(sample_ks))
    if not sample_ks or sample_ks[0] < 1:
        raise ValueError("sample_ks must be positive and nonempty")
    win = generate(rec, init, sample_ks[-1], mode="float")
    log_lam = math.log(abs(lam))
    samples = []
    for k in sample_ks:
        log_mag = win.log_abs(k) - (nu - 1) * math.log(k) - k * log_lam
        mag = 0.0 if log_mag == -math.inf else math.exp(min(log_mag, 700.0))
        samples.append((k, mag))
    first = samples[0][1]
    final = samples[-1][1]
    if first > 0 and final <= 1e-6 * first and final <= first / 10.0:
        trend = VANISHING
    else:
        half = [m for _, m in samples[len(samples) // 2:]]
        lo, hi = min(half), max(half)
        if lo > 0 and (hi - lo) <= 0.1 * hi:
            trend = STABILIZING
        else:
            trend = INCONCLUSIVE
    return Condition11Report(
        samples=tuple(samples), trend=trend, final_magnitude=final,
    )
