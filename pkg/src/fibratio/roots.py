"""Characteristic polynomials, simultaneous root iteration, dominance.

The polynomial attached to weights (b1, ..., bn) is
lambda^n - b1*lambda^(n-1) - ... - bn.  Roots are found by Aberth-Ehrlich
simultaneous iteration from a circle of Cauchy-bound radius, then grouped
into multiplicity clusters.  An exact square-free decomposition is
available as an independent cross-check when the weights are rational.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from . import exactpoly
from .errors import NoConvergence
from .scalars import to_complex
from .sequences import Recurrence

MACHEPS = 2.0 ** -52
DEFAULT_RESIDUAL_TOL = 1e-8
DEFAULT_TIE_TOL = 1e-9
MAX_ITER = 1000


@dataclass(frozen=True)
class MonicPolynomial:
    """lambda^n - b1*lambda^(n-1) - ... - bn, stored by its weights."""

    weights: tuple

    @property
    def degree(self) -> int:
        return len(self.weights)

    @property
    def is_exact(self) -> bool:
        return not any(isinstance(w, complex) for w in self.weights)

    def coefficients(self) -> tuple:
        """Monic coefficient list, highest power first."""
        return (1,) + tuple(-w for w in self.weights)

    def float_coefficients(self) -> tuple:
        return tuple(to_complex(c) for c in self.coefficients())

    def __call__(self, z: complex) -> complex:
        p, _ = _horner(self.float_coefficients(), z)
        return p


def characteristic_polynomial(rec: Recurrence) -> MonicPolynomial:
    return MonicPolynomial(rec.weights)


@dataclass(frozen=True)
class RootSet:
    """All roots with multiplicities, sorted by non-increasing modulus."""

    roots: Tuple[Tuple[complex, int], ...]
    residual_bound: float
    cluster_radius: float

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots)

    def moduli(self):
        return tuple(abs(v) for v, _ in self.roots)


@dataclass(frozen=True)
class DominanceReport:
    max_modulus: float
    max_modulus_roots: Tuple[Tuple[complex, int], ...]
    is_asymptotically_simple: bool
    lambda0: Optional[complex]
    nu: Optional[int]
    tie_tolerance: float
    near_tie: bool


def _horner(coeffs, z):
    """Evaluate p and p' for coefficients given highest power first."""
    p = 0j
    dp = 0j
    for c in coeffs:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _eval_scale(coeffs, z):
    """Sum |c_k| |z|^k, the natural residual scale at z."""
    az = abs(z)
    s = 0.0
    for c in coeffs:
        s = s * az + abs(c)
    return s


def find_roots(poly: MonicPolynomial,
               residual_tol: float = DEFAULT_RESIDUAL_TOL,
               max_iter: int = MAX_ITER) -> RootSet:
    """All n roots with multiplicities via Aberth-Ehrlich iteration.

    Initial guesses sit on a circle of radius 1 + max|b_i| (Cauchy bound)
    with an asymmetric angular offset.  A root counts as converged when
    its step drops below 1e-14 of its magnitude or its residual is at
    roundoff level; multiple roots stall on the step test but satisfy the
    residual test.  Raises ``NoConvergence`` when the budget runs out.
    """
    if residual_tol <= 0:
        raise ValueError("residual_tol must be positive")
    n = poly.degree
    coeffs = poly.float_coefficients()
    radius = 1.0 + max(abs(to_complex(w)) for w in poly.weights)
    z = [radius * cmath.exp(2j * math.pi * (k + 0.5) / n + 0.41j)
         for k in range(n)]
    converged = [False] * n
    residuals = [math.inf] * n
    for _ in range(max_iter):
        all_done = True
        for i in range(n):
            p, dp = _horner(coeffs, z[i])
            scale = _eval_scale(coeffs, z[i])
            residuals[i] = abs(p)
            if abs(p) <= 100.0 * MACHEPS * scale:
                converged[i] = True
                continue
            if dp == 0:
                w = p * (1.0 + 1e-8j)  # nudge off a critical point
            else:
                w = p / dp
            s = 0j
            for j in range(n):
                if j != i:
                    d = z[i] - z[j]
                    if d == 0:
                        d = 1e-14 * (1.0 + radius)
                    s += 1.0 / d
            denom = 1.0 - w * s
            step = w / denom if denom != 0 else w
            z[i] = z[i] - step
            if abs(step) <= 1e-14 * max(1.0, abs(z[i])):
                converged[i] = True
            else:
                converged[i] = False
                all_done = False
        if all_done and all(converged):
            break
    else:
        raise NoConvergence(
            "root iteration budget exhausted",
            best_roots=tuple(z), residuals=tuple(residuals),
        )
    return _cluster(coeffs, z, residual_tol)


def expand_from_roots(roots) -> tuple:
    """Monic coefficients (highest first) of prod (lambda - r)^m."""
    coeffs = [1.0 + 0j]
    for value, mult in roots:
        for _ in range(mult):
            nxt = [1.0 + 0j] * (len(coeffs) + 1)
            nxt[0] = coeffs[0]
            for i in range(1, len(coeffs)):
                nxt[i] = coeffs[i] - value * coeffs[i - 1]
            nxt[len(coeffs)] = -value * coeffs[-1]
            coeffs = nxt
    return tuple(coeffs)


def reconstruction_error(coeffs, roots) -> float:
    """Max per-coefficient mismatch of prod(lambda-r)^m against ``coeffs``,
    scaled by 1 + |coefficient|."""
    rebuilt = expand_from_roots(roots)
    return max(
        abs(a - b) / (1.0 + abs(a)) for a, b in zip(coeffs, rebuilt)
    )


def _derivative_coeffs(coeffs):
    n = len(coeffs) - 1
    return tuple(coeffs[i] * (n - i) for i in range(n))


def _polish_multiple(coeffs, z, mult):
    """Refine a multiplicity-m representative by Newton iteration on the
    (m-1)th derivative, where the root is simple and recoverable to near
    machine precision (the raw cluster scatters like eps^(1/m))."""
    if mult <= 1:
        return z
    d = coeffs
    for _ in range(mult - 1):
        d = _derivative_coeffs(d)
    for _ in range(60):
        p, dp = _horner(d, z)
        if dp == 0:
            break
        step = p / dp
        z = z - step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return z


def _merge_within(coeffs, clusters, radius):
    """Single-linkage merge of cluster representatives at ``radius``,
    polishing each merged representative."""
    parent = list(range(len(clusters)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            if abs(clusters[i][0] - clusters[j][0]) <= radius:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(len(clusters)):
        groups.setdefault(find(i), []).append(clusters[i])
    merged = []
    for members in groups.values():
        if len(members) == 1:
            merged.append(members[0])
            continue
        total = sum(m for _, m, _ in members)
        centroid = sum(v * m for v, m, _ in members) / total
        raw = [z for _, _, g in members for z in g]
        merged.append((_polish_multiple(coeffs, centroid, total), total, raw))
    return merged


def _cluster(coeffs, iterates, residual_tol):
    n = len(iterates)
    maxmod = max(abs(v) for v in iterates)
    base = 1e-7 * (1.0 + maxmod)
    # first pass: union-find with the base radius
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(iterates[i] - iterates[j]) <= base:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(iterates[i])
    # cluster = (representative, multiplicity, raw members)
    clusters = []
    for g in groups.values():
        rep = _polish_multiple(coeffs, sum(g) / len(g), len(g))
        clusters.append((rep, len(g), g))
    # second pass: a multiplicity-m cluster scatters like eps^(1/m), far
    # beyond the base radius.  Scan growing merge radii and keep the most
    # aggregated configuration whose polished representatives still
    # reconstruct the polynomial; partial merges of one multiple root
    # never reconstruct, so the whole group must be taken at once.
    cap = 0.05 * (1.0 + maxmod)
    radius = base
    while radius <= cap and len(clusters) > 1:
        radius *= 4.0
        trial = _merge_within(coeffs, clusters, radius)
        if len(trial) < len(clusters) and reconstruction_error(
                coeffs, [(v, m) for v, m, _ in trial]) <= residual_tol:
            clusters = trial
    clusters.sort(key=lambda rm: (-abs(rm[0]), rm[0].real, rm[0].imag))
    spread = max(
        max(abs(v - rep) for v in g)
        for rep, _, g in clusters
    )
    residual_bound = max(abs(_horner(coeffs, v)[0]) for v, _, _ in clusters)
    return RootSet(
        roots=tuple((v, m) for v, m, _ in clusters),
        residual_bound=residual_bound,
        cluster_radius=max(base, spread * 1.01),
    )


def exact_multiplicity_structure(poly: MonicPolynomial):
    """Square-free structure [(factor degree, multiplicity)] by repeated
    exact gcd with the derivative; requires rational weights.

    Sorted by multiplicity descending, then degree descending.
    """
    if not poly.is_exact:
        raise ValueError("exact structure needs exact coefficients")
    from .scalars import to_exact
    # low-to-high: [-bn, ..., -b1, 1]
    low = [-to_exact(w) for w in reversed(poly.weights)] + [to_exact(1)]
    decomp = exactpoly.square_free_decomposition(tuple(low))
    out = [(exactpoly.degree(f), m) for f, m in decomp]
    out.sort(key=lambda dm: (-dm[1], -dm[0]))
    return out


def classify_dominance(rootset: RootSet,
                       tie_tol: float = DEFAULT_TIE_TOL) -> DominanceReport:
    """Decide asymptotic simplicity of a root set.

    The tie set holds every root whose modulus is within ``tie_tol``
    (relative) of the maximum.  The polynomial is asymptotically simple
    when exactly one tie-set member attains the maximal multiplicity.
    Moduli that land inside the tie band without being numerically equal
    are ambiguous at double precision: such near-ties are reported as not
    simple with ``near_tie`` set, never silently adjudicated.
    """
    maxmod = max(abs(v) for v, _ in rootset.roots)
    tie = [(v, m) for v, m in rootset.roots
           if abs(v) >= (1.0 - tie_tol) * maxmod]
    tie_moduli = [abs(v) for v, _ in tie]
    near_tie = (
        len(tie) > 1
        and (max(tie_moduli) - min(tie_moduli)) > 1e-13 * maxmod
    )
    max_mult = max(m for _, m in tie)
    winners = [(v, m) for v, m in tie if m == max_mult]
    simple = len(winners) == 1 and not near_tie
    return DominanceReport(
        max_modulus=maxmod,
        max_modulus_roots=tuple(tie),
        is_asymptotically_simple=simple,
        lambda0=winners[0][0] if simple else None,
        nu=winners[0][1] if simple else None,
        tie_tolerance=tie_tol,
        near_tie=near_tie,
    )
