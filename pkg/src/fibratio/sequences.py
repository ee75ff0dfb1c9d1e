"""Generation of weighted n-step sequences, zero-run bookkeeping, head shifts.

Terms are addressed by the mathematical index k running from -n+1 upward;
the initial conditions occupy indices -n+1 .. 0 and generated terms start
at k = 1.  All public interfaces speak these indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    RejectedLastWeightZero,
    RejectedLength,
    RejectedOrder,
    RejectedTrivial,
    ZeroRunBoundViolated,
)
from .scalars import canonicalize_scalars, scalar_is_zero, to_complex

# Renormalization keeps float-mode windows inside a safe modulus band;
# terms grow like |lambda0|^k and overflow doubles near k ~ 700 otherwise.
RENORM_THRESHOLD = 1e50
# Relative zero test for float terms: exact zeros never survive roundoff.
FLOAT_ZERO_REL = 1e-12


@dataclass(frozen=True)
class Recurrence:
    """An order-n linear recurrence F_k = b1*F_{k-1} + ... + bn*F_{k-n}."""

    weights: tuple
    is_exact: bool = field(default=False, compare=False)

    def __init__(self, weights):
        weights = tuple(weights)
        if len(weights) < 2:
            raise RejectedOrder(f"order {len(weights)} < 2")
        weights, exact = canonicalize_scalars(weights)
        if scalar_is_zero(weights[-1]):
            raise RejectedLastWeightZero("last weight must be nonzero")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "is_exact", exact)

    @property
    def n(self) -> int:
        return len(self.weights)

    def float_weights(self) -> tuple:
        return tuple(to_complex(w) for w in self.weights)


@dataclass(frozen=True)
class InitialConditions:
    """The starting vector (a_{-n+1}, ..., a_0); must not be all zero."""

    values: tuple
    is_exact: bool = field(default=False, compare=False)

    def __init__(self, values):
        values, exact = canonicalize_scalars(values)
        if all(scalar_is_zero(v) for v in values):
            raise RejectedTrivial("initial conditions are all zero")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "is_exact", exact)

    @property
    def n(self) -> int:
        return len(self.values)

    def float_values(self) -> tuple:
        return tuple(to_complex(v) for v in self.values)


def new_recurrence(weights) -> Recurrence:
    return Recurrence(weights)


def new_initial_conditions(rec: Recurrence, values) -> InitialConditions:
    values = tuple(values)
    if len(values) != rec.n:
        raise RejectedLength(
            f"expected {rec.n} initial values, got {len(values)}"
        )
    return InitialConditions(values)


@dataclass(frozen=True)
class SequenceWindow:
    """A contiguous stretch of terms F_{start_index} .. F_{start_index+len-1}.

    Float-mode terms are stored renormalized: the true value of term i is
    ``terms[i] * exp(term_scales[i])``.  ``scale_exponent`` is the final
    cumulative scale (0 in exact mode).  Renormalization events only ever
    rescale the working state, so consecutive terms share a scale except
    across the (rare) renormalization boundaries.
    """

    start_index: int
    terms: tuple
    scale_exponent: float
    order: int
    term_scales: Optional[tuple] = None  # None means all zeros (exact mode)

    def __len__(self):
        return len(self.terms)

    @property
    def end_index(self) -> int:
        return self.start_index + len(self.terms) - 1

    def _pos(self, k: int) -> int:
        pos = k - self.start_index
        if not 0 <= pos < len(self.terms):
            raise IndexError(f"index {k} outside window "
                             f"[{self.start_index}, {self.end_index}]")
        return pos

    def term(self, k: int):
        """Stored (possibly renormalized) value of F_k."""
        return self.terms[self._pos(k)]

    def scale_at(self, k: int) -> float:
        if self.term_scales is None:
            return 0.0
        return self.term_scales[self._pos(k)]

    def log_abs(self, k: int) -> float:
        """log|F_k| of the true (unrenormalized) value; -inf for zero."""
        v = self.terms[self._pos(k)]
        if hasattr(v, "log_abs"):
            return v.log_abs()
        a = abs(v)
        if a == 0.0:
            return -math.inf
        return math.log(a) + self.scale_at(k)

    def true_value(self, k: int):
        """F_k undoing the scale; may overflow to inf in float mode."""
        v = self.terms[self._pos(k)]
        s = self.scale_at(k)
        if s == 0.0:
            return v
        return v * math.exp(s)

    def ratio(self, k: int):
        """F_{k+1} / F_k, scale-aware.  Caller ensures F_k is nonzero."""
        num, den = self.terms[self._pos(k + 1)], self.terms[self._pos(k)]
        r = num / den
        ds = self.scale_at(k + 1) - self.scale_at(k)
        if ds != 0.0:
            r = r * math.exp(ds)
        return r

    def is_zero_at(self, k: int) -> bool:
        """Zero test: exact in exact mode; in float mode a term counts as
        zero when its modulus is <= 1e-12 times the largest modulus in the
        order-length window ending at k (scale-free by construction)."""
        v = self.terms[self._pos(k)]
        if hasattr(v, "is_zero"):
            return v.is_zero
        la = self.log_abs(k)
        if la == -math.inf:
            return True
        lo = max(self.start_index, k - self.order + 1)
        peak = max(self.log_abs(j) for j in range(lo, k + 1))
        return la <= math.log(FLOAT_ZERO_REL) + peak

    def indices(self):
        return range(self.start_index, self.end_index + 1)


@dataclass(frozen=True)
class ZeroRunReport:
    longest_zero_run: int
    first_index_after_which_all_nonzero: Optional[int]
    zero_indices: tuple


def generate(rec: Recurrence, init: InitialConditions, count: int,
             mode: Optional[str] = None) -> SequenceWindow:
    """Run the recurrence for ``count`` steps past the initial block.

    Returns the window F_{-n+1} .. F_{count}.  ``mode`` is ``"exact"`` or
    ``"float"``; defaults to exact when both the weights and the initial
    conditions are exact.
    """
    n = rec.n
    if len(init.values) != n:
        raise RejectedLength(
            f"expected {n} initial values, got {len(init.values)}"
        )
    if count < 1:
        raise ValueError("count must be >= 1")
    if mode is None:
        mode = "exact" if (rec.is_exact and init.is_exact) else "float"
    if mode == "exact":
        if not (rec.is_exact and init.is_exact):
            raise ValueError("exact mode requires exact weights and inits")
        return _generate_exact(rec, init, count)
    if mode == "float":
        return _generate_float(rec, init, count)
    raise ValueError(f"unknown mode {mode!r}")


def _generate_exact(rec, init, count):
    n, b = rec.n, rec.weights
    terms = list(init.values)
    for _ in range(count):
        acc = b[0] * terms[-1]
        for i in range(1, n):
            acc = acc + b[i] * terms[-1 - i]
        terms.append(acc)
    return SequenceWindow(start_index=-(n - 1), terms=tuple(terms),
                          scale_exponent=0.0, order=n)


def _generate_float(rec, init, count):
    n = rec.n
    b = rec.float_weights()
    state = list(init.float_values())
    terms = list(state)
    scale = 0.0
    scales = [0.0] * n
    for _ in range(count):
        new = sum(b[i] * state[-1 - i] for i in range(n))
        peak = max(max(abs(v) for v in state), abs(new))
        if peak > RENORM_THRESHOLD:
            state = [v / peak for v in state]
            new = new / peak
            scale += math.log(peak)
        state.append(new)
        state.pop(0)
        terms.append(new)
        scales.append(scale)
    return SequenceWindow(start_index=-(n - 1), terms=tuple(terms),
                          scale_exponent=scale, order=n,
                          term_scales=tuple(scales))


def zero_run_stats(win: SequenceWindow, n: Optional[int] = None) -> ZeroRunReport:
    """Locate zero terms, the longest zero run, and the minimal empirical
    index past which the window is all nonzero.

    That index exists only when the window's trailing nonzero run is at
    least n terms long (a shorter tail says nothing about the limit
    behaviour); otherwise the field is None.  A run of n zeros raises
    ``ZeroRunBoundViolated`` since it contradicts nontriviality plus a
    nonzero last weight.
    """
    n = n if n is not None else win.order
    zeros = []
    run = longest = 0
    for k in win.indices():
        if win.is_zero_at(k):
            zeros.append(k)
            run += 1
            longest = max(longest, run)
        else:
            run = 0
    if longest >= n:
        raise ZeroRunBoundViolated(
            f"found {longest} consecutive zero terms for order {n}"
        )
    if not zeros:
        k0 = win.start_index - 1
    else:
        last_zero = zeros[-1]
        k0 = last_zero if win.end_index - last_zero >= n else None
    return ZeroRunReport(
        longest_zero_run=longest,
        first_index_after_which_all_nonzero=k0,
        zero_indices=tuple(zeros),
    )


def shift_to_nonzero_head(rec: Recurrence, init: InitialConditions,
                          mode: Optional[str] = None) -> InitialConditions:
    """Re-seed the recurrence at its first nonzero term.

    Returns a' = (F_{k'}, ..., F_{k'+n-1}) where F_{k'} is the first
    nonzero term of the sequence; the generated tail of (rec, a') equals
    the tail of (rec, a) shifted by k'+n-1.  A nonzero term exists within
    the first 2n-1 terms by the zero-run bound.
    """
    n = rec.n
    win = generate(rec, init, 2 * n, mode=mode)
    for k in win.indices():
        if not win.is_zero_at(k):
            head = [win.term(j) for j in range(k, k + n)]
            return InitialConditions(tuple(head))
    raise ZeroRunBoundViolated("no nonzero term in the first 3n terms")


def fundamental_initial_conditions(rec: Recurrence) -> InitialConditions:
    """The basis vector (0, ..., 0, 1)."""
    return new_initial_conditions(rec, (0,) * (rec.n - 1) + (1,))
