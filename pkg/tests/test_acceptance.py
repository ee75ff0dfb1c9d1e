"""End-to-end acceptance gate.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one summary
line per criterion.
"""

import functools
import json
import random
import time

from click.testing import CliRunner

import fibratio as fr
from fibratio.audit import SUPPORTED, VIOLATED
from fibratio.cli import main as cli_main
from fibratio.criteria import PASS
from fibratio.ratio import VANISHING
from fibratio.roots import expand_from_roots, reconstruction_error

PHI = 1.6180339887498949


def criterion(label):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[FAIL] {label}")
                raise
            print(f"[PASS] {label}")
        return wrapper
    return deco


def random_exact_instance(rng, n_min=2, n_max=6, magnitude=3):
    n = rng.randint(n_min, n_max)
    weights = [rng.randint(-magnitude, magnitude) for _ in range(n)]
    if weights[-1] == 0:
        weights[-1] = rng.choice((-1, 1))
    inits = [rng.randint(-magnitude, magnitude) for _ in range(n)]
    if all(v == 0 for v in inits):
        inits[rng.randrange(n)] = 1
    rec = fr.new_recurrence(weights)
    return rec, fr.new_initial_conditions(rec, inits)


@criterion("criterion 01: decomposition identity, 500 exact instances")
def test_criterion_01_decomposition_identity():
    start = time.monotonic()
    rng = random.Random(101)
    for _ in range(500):
        rec, init = random_exact_instance(rng)
        k = rng.randint(1, 40)
        win = fr.generate(rec, init, k)
        assert fr.decompose_via_fundamental(rec, init, k) == win.term(k), \
            (rec.weights, init.values, k)
    assert time.monotonic() - start < 10.0


@criterion("criterion 02: zero-run bound, 1000 exact instances")
def test_criterion_02_zero_run_bound():
    start = time.monotonic()
    rng = random.Random(202)
    for _ in range(1000):
        rec, init = random_exact_instance(rng)
        stats = fr.zero_run_stats(fr.generate(rec, init, 40))
        assert stats.longest_zero_run <= rec.n - 1, \
            (rec.weights, init.values)
    assert time.monotonic() - start < 10.0


@criterion("criterion 03: golden-ratio limits for three families")
def test_criterion_03_golden_ratio_limits():
    start = time.monotonic()
    rec = fr.new_recurrence((1, 1))
    est = fr.estimate_ratio_limit(rec, fr.new_initial_conditions(rec, (0, 1)))
    assert abs(est.value - PHI) <= 1e-10
    assert est.k_converged <= 100

    rec3 = fr.new_recurrence((1, 1, 1))
    est3 = fr.estimate_ratio_limit(
        rec3, fr.new_initial_conditions(rec3, (0, 0, 1)))
    assert abs(est3.value - 1.8392867552141612) <= 1e-9

    rec22 = fr.new_recurrence((2, 2))
    est22 = fr.estimate_ratio_limit(
        rec22, fr.new_initial_conditions(rec22, (0, 1)))
    assert abs(est22.value - 2.7320508075688772) <= 1e-10
    assert time.monotonic() - start < 1.0


@criterion("criterion 04: Lucas start converges to the Fibonacci limit")
def test_criterion_04_lucas_equivalence():
    rec = fr.new_recurrence((1, 1))
    fib = fr.estimate_ratio_limit(rec, fr.new_initial_conditions(rec, (0, 1)))
    lucas = fr.estimate_ratio_limit(
        rec, fr.new_initial_conditions(rec, (-1, 2)))
    assert abs(fib.value - lucas.value) <= 1e-10


@criterion("criterion 05: equal-weight family converges to p + 1")
def test_criterion_05_family_convergence():
    start = time.monotonic()
    for p in (1, 2):
        lambdas = []
        for n in range(2, 31):
            rep = fr.classify_dominance(
                fr.find_roots(fr.characteristic_polynomial(
                    fr.new_recurrence((p,) * n))))
            assert rep.is_asymptotically_simple
            lambdas.append(rep.lambda0.real)
        assert all(a < b for a, b in zip(lambdas, lambdas[1:]))
        assert abs(lambdas[-1] - (p + 1)) < 1e-8
        if p == 1:
            assert abs(lambdas[10 - 2] - 2) < 0.002
    assert time.monotonic() - start < 5.0


@criterion("criterion 06: criteria cross-validation, 500 instances")
def test_criterion_06_criteria_cross_validation():
    rng = random.Random(606)
    for trial in range(500):
        n = rng.randint(2, 6)
        weights = [rng.randint(0, 3) for _ in range(n)]
        if weights[-1] == 0:
            weights[-1] = 1
        rec = fr.new_recurrence(weights)
        rootset = fr.find_roots(fr.characteristic_polynomial(rec))
        rep = fr.classify_dominance(rootset)
        ost = fr.ostrowski_check(rec)
        if ost.status == PASS:
            assert rep.is_asymptotically_simple, ("seed 606", trial, weights)
            assert rep.nu == 1, ("seed 606", trial, weights)
            assert rep.lambda0.real > 0 and abs(rep.lambda0.imag) < 1e-9, \
                ("seed 606", trial, weights)
        for res in fr.dubeau_check(rec, rootset):
            if res.status != PASS:
                continue
            root = res.detail["root"]
            assert res.detail["multiplicity"] == 1, \
                ("seed 606", trial, weights)
            others = [abs(v) for v, _ in rootset.roots
                      if abs(v - root) > 1e-9]
            assert not others or abs(root) > max(others) * (1 - 1e-9), \
                ("seed 606", trial, weights)


@criterion("criterion 07: degenerate instance (4,-2,-3)/(1,1,2)")
def test_criterion_07_degenerate_instance_audit():
    rec = fr.new_recurrence((4, -2, -3))
    init = fr.new_initial_conditions(rec, (1, 1, 2))

    degen = fr.degeneracy_check(rec, init, fr.ExactComplex(3))
    assert degen.exact and degen.degenerate and degen.denominator == 0

    cond11 = fr.condition_11_estimate(rec, init, 3.0, 1)
    assert cond11.trend == VANISHING

    win = fr.generate(rec, init, 50, mode="exact")
    assert abs(complex(win.ratio(49)) - PHI) <= 1e-8

    ev = fr.audit_part_ii(rec, init)
    assert ev.status == VIOLATED
    assert "1.618" in ev.witness["measured"]


@criterion("criterion 08: part-(i) witness at k = 1 and clean support")
def test_criterion_08_part_i_audit():
    rec = fr.new_recurrence((1, 1))
    violated = fr.audit_part_i(
        rec, fr.new_initial_conditions(rec, (-1, 1)), horizon=60)
    assert violated.status == VIOLATED and violated.witness["index"] == 1
    supported = fr.audit_part_i(
        rec, fr.new_initial_conditions(rec, (1, 1)), horizon=60)
    assert supported.status == SUPPORTED


@criterion("criterion 09: float-mode resurrection of the dominant mode")
def test_criterion_09_mode_resurrection():
    start = time.monotonic()
    rec = fr.new_recurrence((1, 1))
    init = fr.new_initial_conditions(rec, (1, -0.6180339887498949))
    win = fr.generate(rec, init, 120, mode="float")
    r20 = complex(win.ratio(20))
    r80 = complex(win.ratio(80))
    assert abs(r20 - (-0.6180339887)) <= 0.05
    assert abs(r80 - PHI) <= 1e-6
    assert fr.degeneracy_check(rec, init, complex(PHI)).degenerate
    assert time.monotonic() - start < 1.0


@criterion("criterion 10: root solver on 200 random polynomials")
def test_criterion_10_root_solver_quality():
    start = time.monotonic()
    rng = random.Random(1010)
    for _ in range(200):
        n = rng.randint(2, 8)
        weights = [rng.randint(-5, 5) for _ in range(n)]
        if weights[-1] == 0:
            weights[-1] = rng.choice((-1, 1))
        poly = fr.MonicPolynomial(tuple(weights))
        rootset = fr.find_roots(poly)
        assert rootset.total_multiplicity == n
        assert reconstruction_error(
            poly.float_coefficients(), rootset.roots) <= 1e-8, weights
    # constructed multiple-root cases: numeric multiplicities must match
    # the exact square-free structure
    for root_list in ([(1, 2)], [(1, 3), (-1, 1)], [(2, 2), (-2, 1)],
                      [(-3, 2), (1, 2)], [(2, 3), (1, 1)]):
        coeffs = expand_from_roots([(complex(r), m) for r, m in root_list])
        poly = fr.MonicPolynomial(
            tuple(-round(c.real) for c in coeffs[1:]))
        numeric = sorted((m for _, m in fr.find_roots(poly).roots),
                         reverse=True)
        exact = fr.exact_multiplicity_structure(poly)
        flat = sorted((mult for degree, mult in exact
                       for _ in range(degree)), reverse=True)
        assert numeric == flat, root_list
    assert time.monotonic() - start < 10.0


@criterion("criterion 11: OEIS offline fixture verification")
def test_criterion_11_oeis_offline():
    client = fr.OeisClient(offline=True)
    expected = {(1, 1): {"A000045", "A000032"}, (1, 1, 1): {"A000073"}}
    for signature, wanted_ids in expected.items():
        entries = client.search_by_signature(signature)
        found = {e.id for e in entries}
        assert wanted_ids <= found
        for entry in entries:
            if entry.id not in wanted_ids:
                continue
            record = client.verify_entry(entry, signature,
                                         tail_ratio_tol=1e-4)
            assert record.recurrence_consistent, record
            assert record.agrees, record


@criterion("criterion 12: audit-random --seed 42 --count 500 is byte-stable")
def test_criterion_12_determinism():
    runner = CliRunner()
    args = ["audit-random", "--seed", "42", "--count", "500",
            "--format", "json"]
    first = runner.invoke(cli_main, args)
    second = runner.invoke(cli_main, args)
    assert first.exit_code == 0 and second.exit_code == 0
    assert first.output == second.output
    doc = json.loads(first.output)
    assert len(doc["results"]["evidence"]) == 1000
