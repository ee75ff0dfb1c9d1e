"""OEIS client: fixtures, caching, throttling, verification."""

import json
import math

import pytest
import requests

from fibratio.errors import InsufficientTerms, NetworkUnavailable
from fibratio.oeis import (
    OeisClient,
    OeisEntry,
    _cache_filename,
    signature_query,
    terms_satisfy_recurrence,
)

PHI = (1 + math.sqrt(5)) / 2

FIB_TERMS = [0, 1]
while len(FIB_TERMS) < 30:
    FIB_TERMS.append(FIB_TERMS[-1] + FIB_TERMS[-2])


class FakeResponse:
    def __init__(self, payload, status=200):
        self.payload = payload
        self.status = status
        self.text = json.dumps(payload)

    def raise_for_status(self):
        if self.status >= 400:
            raise requests.HTTPError(f"status {self.status}")

    def json(self):
        return self.payload


class FakeSession:
    def __init__(self, payload=None, error=None):
        self.payload = payload
        self.error = error
        self.calls = []

    def get(self, url, params=None, timeout=None):
        self.calls.append((url, dict(params or {})))
        if self.error is not None:
            raise self.error
        return FakeResponse(self.payload)


class FakeClock:
    def __init__(self):
        self.now = 100.0
        self.slept = []

    def __call__(self):
        return self.now

    def sleep(self, seconds):
        self.slept.append(seconds)
        self.now += seconds


class TestQueryAndCacheNames:
    def test_query_phrase(self):
        assert signature_query((1, 1)) == '"signature (1,1)"'
        assert signature_query((4, -2, -3)) == '"signature (4,-2,-3)"'

    def test_cache_filename_is_stable_and_distinct(self):
        a = _cache_filename(signature_query((1, 1)))
        b = _cache_filename(signature_query((1, 1, 1)))
        assert a == _cache_filename(signature_query((1, 1)))
        assert a != b and a.endswith(".json")


class TestTermsSatisfyRecurrence:
    def test_fibonacci(self):
        assert terms_satisfy_recurrence(FIB_TERMS, (1, 1))

    def test_lucas_with_offset(self):
        lucas = [2, 1]
        while len(lucas) < 20:
            lucas.append(lucas[-1] + lucas[-2])
        assert terms_satisfy_recurrence(lucas, (1, 1))

    def test_corrupted_tail_rejected(self):
        bad = FIB_TERMS[:20] + [999]
        assert not terms_satisfy_recurrence(bad, (1, 1))

    def test_too_few_terms(self):
        assert not terms_satisfy_recurrence([1, 1, 2], (1, 1))


class TestOfflineFixtures:
    def test_signature_1_1(self):
        client = OeisClient(offline=True)
        entries = client.search_by_signature((1, 1))
        ids = [e.id for e in entries]
        assert "A000045" in ids and "A000032" in ids

    def test_verify_fibonacci_and_lucas(self):
        client = OeisClient(offline=True)
        for entry in client.search_by_signature((1, 1)):
            record = client.verify_entry(entry, (1, 1))
            assert record.recurrence_consistent
            assert record.agrees, record.detail
            assert record.lambda0.real == pytest.approx(PHI, abs=1e-10)

    def test_verify_tribonacci(self):
        client = OeisClient(offline=True)
        entries = client.search_by_signature((1, 1, 1))
        assert [e.id for e in entries] == ["A000073"]
        record = client.verify_entry(entries[0], (1, 1, 1))
        assert record.recurrence_consistent and record.agrees

    def test_verify_signature_2_2(self):
        client = OeisClient(offline=True)
        entries = client.search_by_signature((2, 2))
        record = client.verify_entry(entries[0], (2, 2))
        assert record.agrees
        assert record.lambda0.real == pytest.approx(1 + math.sqrt(3),
                                                    abs=1e-10)

    def test_unknown_signature_offline_raises(self):
        client = OeisClient(offline=True)
        with pytest.raises(NetworkUnavailable):
            client.search_by_signature((5, 5, 5, 5))


class TestCache:
    def raw_fib_payload(self):
        return {"results": [{
            "number": 45,
            "name": "Fibonacci numbers",
            "data": ",".join(str(t) for t in FIB_TERMS),
        }]}

    def test_fetch_writes_cache_and_cache_serves_offline(self, tmp_path):
        session = FakeSession(payload=self.raw_fib_payload())
        client = OeisClient(cache_dir=tmp_path, session=session,
                            fixtures_dir=None)
        first = client.search_by_signature((1, 1))
        assert len(session.calls) == 1
        assert [e.id for e in first] == ["A000045"]
        # a second, offline client resolves from the cache alone
        offline = OeisClient(cache_dir=tmp_path, offline=True,
                             fixtures_dir=None)
        again = offline.search_by_signature((1, 1))
        assert again == first

    def test_cached_query_skips_network(self, tmp_path):
        session = FakeSession(payload=self.raw_fib_payload())
        client = OeisClient(cache_dir=tmp_path, session=session,
                            fixtures_dir=None)
        client.search_by_signature((1, 1))
        client.search_by_signature((1, 1))
        assert len(session.calls) == 1

    def test_cache_file_records_query(self, tmp_path):
        session = FakeSession(payload=self.raw_fib_payload())
        client = OeisClient(cache_dir=tmp_path, session=session,
                            fixtures_dir=None)
        client.search_by_signature((1, 1))
        path = tmp_path / _cache_filename(signature_query((1, 1)))
        payload = json.loads(path.read_text())
        assert payload["query"] == '"signature (1,1)"'
        assert payload["entries"][0]["number"] == 45

    def test_malformed_and_inconsistent_results_filtered(self, tmp_path):
        payload = {"results": [
            {"name": "no number or data"},
            {"number": 27, "name": "naturals", "data":
                ",".join(str(i) for i in range(1, 25))},
            {"number": 45, "name": "Fibonacci numbers",
             "data": ",".join(str(t) for t in FIB_TERMS)},
        ]}
        client = OeisClient(cache_dir=tmp_path,
                            session=FakeSession(payload=payload),
                            fixtures_dir=None)
        entries = client.search_by_signature((1, 1))
        assert [e.id for e in entries] == ["A000045"]


class TestThrottling:
    def test_second_request_waits_out_the_interval(self, tmp_path):
        clock = FakeClock()
        session = FakeSession(payload={"results": []})
        client = OeisClient(cache_dir=None, session=session,
                            fixtures_dir=None, clock=clock,
                            sleep=clock.sleep, min_interval=1.0)
        client.search_by_signature((9, 9))
        clock.now += 0.25
        client.search_by_signature((8, 8))
        assert len(clock.slept) == 1
        assert clock.slept[0] == pytest.approx(0.75)

    def test_no_sleep_after_long_gap(self):
        clock = FakeClock()
        session = FakeSession(payload={"results": []})
        client = OeisClient(cache_dir=None, session=session,
                            fixtures_dir=None, clock=clock,
                            sleep=clock.sleep, min_interval=1.0)
        client.search_by_signature((9, 9))
        clock.now += 5.0
        client.search_by_signature((8, 8))
        assert clock.slept == []


class TestVerifyEntry:
    def test_insufficient_terms(self):
        entry = OeisEntry(id="A000045", name="short", terms=(0, 1, 1, 2, 3))
        with pytest.raises(InsufficientTerms):
            OeisClient(offline=True).verify_entry(entry, (1, 1))

    def test_inconsistent_entry_disagrees(self):
        entry = OeisEntry(id="A999999", name="corrupted",
                          terms=tuple(FIB_TERMS[:20]) + (999,))
        record = OeisClient(offline=True).verify_entry(entry, (1, 1))
        assert not record.recurrence_consistent and not record.agrees

    def test_tie_signature_has_no_dominant_root(self):
        terms = tuple(2 ** (k // 2) for k in range(2, 22))  # signature (0,2)
        entry = OeisEntry(id="A016116", name="halved powers", terms=terms)
        record = OeisClient(offline=True).verify_entry(entry, (0, 2))
        assert record.recurrence_consistent
        assert record.lambda0 is None and not record.agrees

    def test_entry_validation(self):
        with pytest.raises(ValueError):
            OeisEntry(id="X123", name="bad id", terms=(1, 2))
        with pytest.raises(ValueError):
            OeisEntry(id="A000001", name="no terms", terms=())


class TestBatchVerify:
    def test_mixed_batch(self):
        client = OeisClient(offline=True)
        records, summary = client.batch_verify([(1, 1), (1, 1, 1), (7, 7)])
        assert summary["agrees"] == 3  # A000045, A000032, A000073
        assert summary["unavailable"] == 1  # (7,7) has no fixture
        unavailable = [r for r in records if r.id == "A000000"]
        assert len(unavailable) == 1
        assert unavailable[0].signature_used == (7, 7)

    def test_network_error_becomes_record(self, tmp_path):
        session = FakeSession(error=requests.ConnectionError("refused"))
        client = OeisClient(cache_dir=tmp_path, session=session,
                            fixtures_dir=None)
        records, summary = client.batch_verify([(1, 1)])
        assert summary["unavailable"] == 1
        assert "network unavailable" in records[0].detail
