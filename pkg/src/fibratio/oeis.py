"""OEIS lookup by linear-recurrence signature, with a local file cache.

The OEIS has no structured signature field, so searches use the literal
phrase ``signature (b1,b2,...)`` as it appears in entry comments and the
index, and post-filter hits by checking the recurrence against the
actual terms.  Recall is imperfect; the consistency check makes
precision exact.  All automated tests run against bundled fixtures; live
lookups are rate limited and opt-in.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

import requests

from .errors import InsufficientTerms, NetworkUnavailable, ParseError
from .roots import characteristic_polynomial, classify_dominance, find_roots
from .sequences import Recurrence

SEARCH_URL = "https://oeis.org/search"
FIXTURES_DIR = Path(__file__).parent / "fixtures"
DEFAULT_TAIL_RATIO_TOL = 1e-4

_A_NUMBER = re.compile(r"A\d{6,}")


@dataclass(frozen=True)
class OeisEntry:
    id: str
    name: str
    terms: tuple
    signature: Optional[tuple] = None

    def __post_init__(self):
        if not _A_NUMBER.fullmatch(self.id):
            raise ValueError(f"bad OEIS id {self.id!r}")
        if not self.terms:
            raise ValueError("entry has no terms")


@dataclass(frozen=True)
class VerificationRecord:
    id: str
    signature_used: tuple
    recurrence_consistent: bool
    measured_tail_ratio: Optional[complex]
    lambda0: Optional[complex]
    agrees: bool
    detail: str


def signature_query(signature: Sequence[int]) -> str:
    return '"signature ({})"'.format(",".join(str(s) for s in signature))


def _cache_filename(query: str) -> str:
    return hashlib.sha256(query.encode()).hexdigest()[:24] + ".json"


def _entry_from_raw(raw: dict) -> OeisEntry:
    try:
        number = int(raw["number"])
        name = raw.get("name", "")
        terms = tuple(int(t) for t in str(raw["data"]).split(",") if t != "")
    except (KeyError, ValueError) as exc:
        raise ParseError(f"malformed OEIS entry: {exc}", raw=raw)
    sig = raw.get("signature")
    return OeisEntry(
        id=f"A{number:06d}",
        name=name,
        terms=terms,
        signature=tuple(sig) if sig else None,
    )


def terms_satisfy_recurrence(terms: Sequence[int],
                             signature: Sequence[int]) -> bool:
    """True when the terms obey the signature's recurrence, allowing an
    initial segment of up to n terms to act as initial conditions."""
    n = len(signature)
    if len(terms) < 2 * n:
        return False
    for start in range(0, n + 1):
        ok = True
        for k in range(start + n, len(terms)):
            if terms[k] != sum(signature[i] * terms[k - 1 - i]
                               for i in range(n)):
                ok = False
                break
        if ok:
            return True
    return False


class OeisClient:
    """Signature search with caching and polite rate limiting.

    ``clock`` and ``sleep`` are injectable for tests; live requests are
    never issued less than ``min_interval`` seconds apart.  In offline
    mode only the cache directory and the bundled fixtures are consulted.
    """

    def __init__(self, cache_dir: Optional[Path] = None, offline: bool = False,
                 session=None, clock=time.monotonic, sleep=time.sleep,
                 min_interval: float = 1.0,
                 fixtures_dir: Optional[Path] = FIXTURES_DIR):
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.offline = offline
        self.session = session or requests.Session()
        self._clock = clock
        self._sleep = sleep
        self.min_interval = min_interval
        self.fixtures_dir = Path(fixtures_dir) if fixtures_dir else None
        self._last_request = None

    # -- cache -----------------------------------------------------------

    def _cache_paths(self, query: str):
        name = _cache_filename(query)
        paths = []
        if self.cache_dir:
            paths.append(self.cache_dir / name)
        if self.fixtures_dir:
            paths.append(self.fixtures_dir / name)
        return paths

    def _read_cache(self, query: str) -> Optional[List[dict]]:
        for path in self._cache_paths(query):
            if path.is_file():
                payload = json.loads(path.read_text())
                return payload["entries"]
        return None

    def _write_cache(self, query: str, entries: List[dict]):
        if not self.cache_dir:
            return
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        path = self.cache_dir / _cache_filename(query)
        payload = {
            "query": query,
            "fetched_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "entries": entries,
        }
        path.write_text(json.dumps(payload, indent=2, sort_keys=True))

    # -- network ---------------------------------------------------------

    def _throttle(self):
        if self._last_request is not None:
            elapsed = self._clock() - self._last_request
            if elapsed < self.min_interval:
                self._sleep(self.min_interval - elapsed)
        self._last_request = self._clock()

    def _fetch(self, query: str) -> List[dict]:
        self._throttle()
        try:
            resp = self.session.get(
                SEARCH_URL, params={"q": query, "fmt": "json"}, timeout=30)
            resp.raise_for_status()
        except requests.RequestException as exc:
            raise NetworkUnavailable(f"OEIS request failed: {exc}") from exc
        try:
            body = resp.json()
        except ValueError as exc:
            raise ParseError(
                f"OEIS response is not JSON: {exc}", raw=resp.text)
        if isinstance(body, dict):
            results = body.get("results") or []
        elif isinstance(body, list):
            results = body
        else:
            raise ParseError("unexpected OEIS response shape", raw=resp.text)
        return results

    # -- public surface --------------------------------------------------

    def search_by_signature(self, signature: Sequence[int],
                            limit: int = 10) -> List[OeisEntry]:
        """Entries matching the signature phrase, filtered for actual
        recurrence consistency, at most ``limit`` of them.

        Falls back to the cache (then the bundled fixtures) when offline
        or when the live request fails; raises ``NetworkUnavailable``
        when nothing is reachable.
        """
        signature = tuple(int(s) for s in signature)
        if not signature:
            raise ValueError("signature must be nonempty")
        if limit < 1:
            raise ValueError("limit must be >= 1")
        query = signature_query(signature)
        raw = self._read_cache(query)
        if raw is None:
            if self.offline:
                raise NetworkUnavailable(
                    f"offline and no cached result for {query}; run once "
                    "without --offline or point --cache-dir at fixtures")
            raw = self._fetch(query)
            self._write_cache(query, raw)
        entries = []
        for item in raw:
            try:
                entry = _entry_from_raw(item)
            except ParseError:
                continue
            if terms_satisfy_recurrence(entry.terms, signature):
                entries.append(entry)
            if len(entries) >= limit:
                break
        return entries

    def verify_entry(self, entry: OeisEntry,
                     signature: Sequence[int],
                     tail_ratio_tol: float = DEFAULT_TAIL_RATIO_TOL
                     ) -> VerificationRecord:
        """Check one entry: recurrence consistency of its terms, and
        agreement of the tail ratio with the dominant characteristic
        root of the signature."""
        signature = tuple(int(s) for s in signature)
        n = len(signature)
        if len(entry.terms) < 2 * n + 4:
            raise InsufficientTerms(
                f"{entry.id}: need at least {2 * n + 4} terms, "
                f"have {len(entry.terms)}")
        consistent = terms_satisfy_recurrence(entry.terms, signature)
        rec = Recurrence(signature)
        report = classify_dominance(find_roots(characteristic_polynomial(rec)))
        lam = report.lambda0
        nonzero = [t for t in entry.terms if t != 0]
        tail_ratio = None
        # ratio of the last two consecutive nonzero terms
        for i in range(len(entry.terms) - 1, 0, -1):
            if entry.terms[i] != 0 and entry.terms[i - 1] != 0:
                tail_ratio = complex(
                    float(Fraction(entry.terms[i], entry.terms[i - 1])))
                break
        if not consistent:
            detail = "terms do not satisfy the signature recurrence"
            agrees = False
        elif lam is None:
            detail = "characteristic polynomial is not asymptotically simple"
            agrees = False
        elif tail_ratio is None or len(nonzero) < 2:
            detail = "no consecutive nonzero terms to form a tail ratio"
            agrees = False
        else:
            err = abs(tail_ratio - lam)
            agrees = err <= tail_ratio_tol * (1.0 + abs(lam))
            detail = (f"tail ratio {tail_ratio.real:.10g} vs dominant root "
                      f"{lam.real:.10g} (|diff| = {err:.3g})")
        return VerificationRecord(
            id=entry.id,
            signature_used=signature,
            recurrence_consistent=consistent,
            measured_tail_ratio=tail_ratio,
            lambda0=lam,
            agrees=agrees,
            detail=detail,
        )

    def batch_verify(self, signatures: Sequence[Sequence[int]],
                     limit: int = 10,
                     tail_ratio_tol: float = DEFAULT_TAIL_RATIO_TOL):
        """Search and verify each signature in order; per-entry failures
        become records, never batch aborts.

        Returns (records, summary) with deterministic ordering.
        """
        records = []
        summary = {"agrees": 0, "disagrees": 0, "insufficient": 0,
                   "unavailable": 0}
        for signature in signatures:
            signature = tuple(int(s) for s in signature)
            try:
                entries = self.search_by_signature(signature, limit=limit)
            except NetworkUnavailable as exc:
                summary["unavailable"] += 1
                records.append(VerificationRecord(
                    id="A000000", signature_used=signature,
                    recurrence_consistent=False, measured_tail_ratio=None,
                    lambda0=None, agrees=False,
                    detail=f"network unavailable: {exc}"))
                continue
            for entry in entries:
                try:
                    record = self.verify_entry(
                        entry, signature, tail_ratio_tol=tail_ratio_tol)
                except InsufficientTerms as exc:
                    summary["insufficient"] += 1
                    records.append(VerificationRecord(
                        id=entry.id, signature_used=signature,
                        recurrence_consistent=False,
                        measured_tail_ratio=None, lambda0=None,
                        agrees=False, detail=str(exc)))
                    continue
                summary["agrees" if record.agrees else "disagrees"] += 1
                records.append(record)
        return records, summary
