"""Sufficient criteria for a unique simple dominant root.

Two classical checks: the gcd criterion for nonnegative weights, and the
per-root inequality check that certifies a designated dominant simple
root when its left-hand side is below 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

from .errors import RootModulusZero
from .roots import RootSet
from .scalars import to_complex
from .sequences import Recurrence

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not_applicable"

# Weights whose magnitude is below this relative level are treated as
# zero so float noise cannot flip applicability or the index set.
WEIGHT_NOISE_REL = 1e-12


@dataclass(frozen=True)
class CriterionResult:
    name: str  # "ostrowski" | "dubeau"
    status: str  # PASS | FAIL | NOT_APPLICABLE
    detail: dict = field(compare=False)
    implied_lambda0: Optional[complex] = None


def ostrowski_check(rec: Recurrence) -> CriterionResult:
    """Gcd criterion: for nonnegative real weights, gcd of the indices
    carrying strictly positive weight equal to 1 guarantees a unique
    simple positive dominant root.

    Not applicable when any weight is negative or has a nonzero
    imaginary part (beyond float noise).
    """
    ws = [to_complex(w) for w in rec.weights]
    noise = WEIGHT_NOISE_REL * max(abs(w) for w in ws)
    for j, w in enumerate(ws, start=1):
        if abs(w.imag) > noise:
            return CriterionResult(
                "ostrowski", NOT_APPLICABLE,
                {"reason": f"weight {j} has nonzero imaginary part"},
            )
        if w.real < -noise:
            return CriterionResult(
                "ostrowski", NOT_APPLICABLE,
                {"reason": f"weight {j} is negative"},
            )
    positive = [j for j, w in enumerate(ws, start=1) if w.real > noise]
    g = 0
    for j in positive:
        g = math.gcd(g, j)
    status = PASS if g == 1 else FAIL
    return CriterionResult(
        "ostrowski", status,
        {"gcd": g, "positive_indices": positive},
    )


def dubeau_lhs(rec: Recurrence, lam: complex) -> float:
    """The inequality's left-hand side at a candidate root:
    sum over j of | sum_{i=j}^{n-1} b_{1+i} / lam^{1+i} |."""
    if lam == 0:
        raise RootModulusZero("candidate root is zero")
    n = rec.n
    b = [to_complex(w) for w in rec.weights]
    total = 0.0
    for j in range(1, n):
        inner = 0j
        for i in range(j, n):
            inner += b[i] / lam ** (1 + i)  # b[i] is b_{1+i}, 0-based
        total += abs(inner)
    return total


def dubeau_check(rec: Recurrence, roots: RootSet) -> List[CriterionResult]:
    """Evaluate the inequality at every distinct root.

    A root passes when its left-hand side is strictly below 1; the
    passing root is thereby designated the simple dominant root.  The
    criterion is read existentially: one passing root certifies the
    polynomial, and the full per-root list stays inspectable.
    """
    out = []
    for value, mult in roots.roots:
        lhs = dubeau_lhs(rec, value)
        status = PASS if lhs < 1.0 else FAIL
        out.append(CriterionResult(
            "dubeau", status,
            {"root": value, "multiplicity": mult, "lhs": lhs},
            implied_lambda0=value if status == PASS else None,
        ))
    return out
