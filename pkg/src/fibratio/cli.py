"""Command-line surface.

Exit codes: 0 success, 1 usage or validation error, 2 computation did
not converge or data unavailable, 3 claim violation under
``--fail-on-violation``.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click

from . import __version__
from .audit import (
    VIOLATED,
    BatchConfig,
    audit_part_i,
    audit_part_ii,
    batch_audit,
    snap_exact_root,
)
from .criteria import dubeau_check, ostrowski_check
from .errors import FibratioError, NetworkUnavailable, NoConvergence, ParseError
from .oeis import OeisClient
from .ratio import (
    CONVERGED,
    RatioOptions,
    condition_11_estimate,
    degeneracy_check,
    estimate_ratio_limit,
)
from .report import build_document, encode_scalar, sig_digits, to_json
from .roots import (
    characteristic_polynomial,
    classify_dominance,
    find_roots,
)
from .scalars import ExactComplex, format_scalar, parse_scalar
from .sequences import (
    Recurrence,
    fundamental_initial_conditions,
    generate,
    new_initial_conditions,
)

EXIT_VALIDATION = 1
EXIT_NOT_CONVERGED = 2
EXIT_VIOLATION = 3


def _parse_scalar_list(text: str):
    try:
        return [parse_scalar(part) for part in text.split(",")]
    except ParseError as exc:
        pos = f" (at position {exc.position})" if exc.position is not None \
            else ""
        raise click.ClickException(f"bad scalar list {text!r}: {exc}{pos}")


def _load_config(path):
    if path is None:
        return {}
    try:
        return json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise click.ClickException(f"cannot read config {path}: {exc}")


def _opt(value, config, key, default):
    """CLI option > config file value > default."""
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _finite(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _maybe_scalar(v):
    return None if v is None else encode_scalar(v)


def _emit(doc, fmt, table_renderer):
    if fmt == "json":
        click.echo(to_json(doc), nl=False)
    else:
        table_renderer(doc)


def _fail(message, code):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _make_instance(weights_text, init_text):
    weights = _parse_scalar_list(weights_text)
    try:
        rec = Recurrence(weights)
        init = new_initial_conditions(rec, _parse_scalar_list(init_text)) \
            if init_text is not None else None
    except FibratioError as exc:
        _fail(f"{type(exc).__name__}: {exc}", EXIT_VALIDATION)
    return rec, init


@click.group()
@click.version_option(version=__version__, prog_name="fibratio")
def main():
    """Weighted n-step Fibonacci sequences: generation, dominant-root
    analysis, ratio limits, and empirical audits of their claimed
    behaviour."""


_format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "table"]), default=None,
    help="Output format (default: table).")
_config_option = click.option(
    "--config", "config_path", type=click.Path(exists=True), default=None,
    help="JSON file supplying defaults for the options of this command.")


@main.command("generate")
@click.option("--weights", required=True, help="Comma-separated weights.")
@click.option("--init", "init_text", required=True,
              help="Comma-separated initial conditions a_{-n+1}..a_0.")
@click.option("--count", type=int, default=None)
@click.option("--mode", type=click.Choice(["exact", "float"]), default=None)
@_format_option
@_config_option
def cmd_generate(weights, init_text, count, mode, fmt, config_path):
    """Print the first terms of the sequence."""
    config = _load_config(config_path)
    count = int(_opt(count, config, "count", 10))
    fmt = _opt(fmt, config, "format", "table")
    mode = _opt(mode, config, "mode", None)
    rec, init = _make_instance(weights, init_text)
    try:
        win = generate(rec, init, count, mode=mode)
    except (FibratioError, ValueError) as exc:
        _fail(f"{type(exc).__name__}: {exc}", EXIT_VALIDATION)
    results = {
        "start_index": win.start_index,
        "order": win.order,
        "scale_exponent": win.scale_exponent,
        "terms": [encode_scalar(t) for t in win.terms],
        "term_scales": list(win.term_scales) if win.term_scales else None,
    }
    doc = build_document("generate", _echo_inputs(
        weights=weights, init=init_text, count=count, mode=mode), results)

    def render(doc):
        click.echo(f"{'k':>6}  value")
        for k in win.indices():
            click.echo(f"{k:>6}  {_table_scalar(win.term(k))}"
                       + (f"  (x e^{win.scale_at(k):.6g})"
                          if win.scale_at(k) else ""))

    _emit(doc, fmt, render)


def _echo_inputs(**kwargs):
    return {k: v for k, v in kwargs.items() if v is not None}


def _table_scalar(v):
    if isinstance(v, ExactComplex):
        return format_scalar(v)
    z = complex(v)
    if z.imag == 0:
        return sig_digits(z.real)
    return f"{sig_digits(z.real)}{'+' if z.imag >= 0 else '-'}" \
           f"{sig_digits(abs(z.imag))}i"


@main.command("analyze")
@click.option("--weights", required=True)
@click.option("--residual-tol", type=float, default=None)
@click.option("--tie-tol", type=float, default=None)
@_format_option
@_config_option
def cmd_analyze(weights, residual_tol, tie_tol, fmt, config_path):
    """Roots, dominance classification, and both criteria."""
    config = _load_config(config_path)
    fmt = _opt(fmt, config, "format", "table")
    residual_tol = float(_opt(residual_tol, config, "residual_tol", 1e-8))
    tie_tol = float(_opt(tie_tol, config, "tie_tol", 1e-9))
    rec, _ = _make_instance(weights, None)
    poly = characteristic_polynomial(rec)
    try:
        rootset = find_roots(poly, residual_tol=residual_tol)
    except NoConvergence as exc:
        _fail(f"root solver did not converge: {exc}", EXIT_NOT_CONVERGED)
    report = classify_dominance(rootset, tie_tol=tie_tol)
    ost = ostrowski_check(rec)
    dub = dubeau_check(rec, rootset)
    results = {
        "characteristic_polynomial": {
            "degree": poly.degree,
            "coefficients": [encode_scalar(c) for c in poly.coefficients()],
        },
        "roots": [{"value": encode_scalar(v), "multiplicity": m}
                  for v, m in rootset.roots],
        "residual_bound": rootset.residual_bound,
        "cluster_radius": rootset.cluster_radius,
        "dominance": _dominance_dict(report),
        "criteria": {
            "ostrowski": _criterion_dict(ost),
            "dubeau": [_criterion_dict(c) for c in dub],
        },
    }
    doc = build_document("analyze", _echo_inputs(weights=weights), results)

    def render(doc):
        click.echo("roots:")
        for v, m in rootset.roots:
            click.echo(f"  {_table_scalar(v)}  (multiplicity {m}, "
                       f"|.| = {sig_digits(abs(v))})")
        if report.is_asymptotically_simple:
            click.echo(f"asymptotically simple: yes  "
                       f"lambda0 = {_table_scalar(report.lambda0)}  "
                       f"nu = {report.nu}")
        else:
            flag = " (near tie)" if report.near_tie else ""
            click.echo(f"asymptotically simple: no{flag}")
        click.echo(f"ostrowski: {ost.status}  {ost.detail}")
        for c in dub:
            click.echo(f"dubeau at {_table_scalar(c.detail['root'])}: "
                       f"{c.status} (lhs = {sig_digits(c.detail['lhs'])})")

    _emit(doc, fmt, render)


def _dominance_dict(report):
    return {
        "max_modulus": report.max_modulus,
        "max_modulus_roots": [
            {"value": encode_scalar(v), "multiplicity": m}
            for v, m in report.max_modulus_roots],
        "is_asymptotically_simple": report.is_asymptotically_simple,
        "lambda0": _maybe_scalar(report.lambda0),
        "nu": report.nu,
        "tie_tolerance": report.tie_tolerance,
        "near_tie": report.near_tie,
    }


def _criterion_dict(c):
    detail = dict(c.detail)
    if "root" in detail:
        detail["root"] = encode_scalar(detail["root"])
    return {
        "name": c.name,
        "status": c.status,
        "detail": detail,
        "implied_lambda0": _maybe_scalar(c.implied_lambda0),
    }


@main.command("ratio")
@click.option("--weights", required=True)
@click.option("--init", "init_text", required=True)
@click.option("--tol", type=float, default=None)
@click.option("--max-k", type=int, default=None)
@click.option("--window", type=int, default=None,
              help="Consecutive stable steps required for convergence.")
@_format_option
@_config_option
def cmd_ratio(weights, init_text, tol, max_k, window, fmt, config_path):
    """Estimate the ratio limit of consecutive terms."""
    config = _load_config(config_path)
    fmt = _opt(fmt, config, "format", "table")
    opts = RatioOptions(
        tol=float(_opt(tol, config, "tol", 1e-10)),
        max_k=int(_opt(max_k, config, "max_k", 10000)),
        stability_window=int(_opt(window, config, "window", 8)),
    )
    rec, init = _make_instance(weights, init_text)
    try:
        est = estimate_ratio_limit(rec, init, opts=opts)
    except (FibratioError, ValueError) as exc:
        _fail(f"{type(exc).__name__}: {exc}", EXIT_VALIDATION)
    results = _estimate_dict(est)
    doc = build_document("ratio", _echo_inputs(
        weights=weights, init=init_text, tol=opts.tol, max_k=opts.max_k,
        window=opts.stability_window), results)

    def render(doc):
        click.echo(f"status: {est.status}")
        if est.value is not None:
            click.echo(f"value: {_table_scalar(est.value)}")
        if est.k_converged is not None:
            click.echo(f"converged at k = {est.k_converged}")
        if est.skipped_zero_indices:
            click.echo(f"skipped zero indices: "
                       f"{list(est.skipped_zero_indices)}")

    _emit(doc, fmt, render)
    if est.status != CONVERGED:
        sys.exit(EXIT_NOT_CONVERGED)


def _estimate_dict(est):
    return {
        "value": _maybe_scalar(est.value),
        "status": est.status,
        "k_converged": est.k_converged,
        "last_residual": _finite(est.last_residual),
        "skipped_zero_indices": list(est.skipped_zero_indices),
        "empirical_k0": est.empirical_k0,
    }


@main.command("audit")
@click.option("--weights", required=True)
@click.option("--init", "init_text", required=True)
@click.option("--horizon", type=int, default=None)
@click.option("--tol", type=float, default=None)
@click.option("--max-k", type=int, default=None)
@click.option("--fail-on-violation", is_flag=True, default=False)
@_format_option
@_config_option
def cmd_audit(weights, init_text, horizon, tol, max_k, fail_on_violation,
              fmt, config_path):
    """Audit both theorem-style claims on one instance."""
    config = _load_config(config_path)
    fmt = _opt(fmt, config, "format", "table")
    horizon = int(_opt(horizon, config, "horizon", 60))
    opts = RatioOptions(
        tol=float(_opt(tol, config, "tol", 1e-10)),
        max_k=int(_opt(max_k, config, "max_k", 10000)),
    )
    rec, init = _make_instance(weights, init_text)
    try:
        ev1 = audit_part_i(rec, init, horizon=horizon)
        ev2 = audit_part_ii(rec, init, opts=opts)
    except (FibratioError, ValueError) as exc:
        _fail(f"{type(exc).__name__}: {exc}", EXIT_VALIDATION)
    extras = {}
    try:
        report = classify_dominance(find_roots(characteristic_polynomial(rec)))
        if report.is_asymptotically_simple:
            lam = report.lambda0
            if rec.is_exact and init.is_exact:
                snapped = snap_exact_root(rec, lam)
                if snapped is not None:
                    lam = snapped
            degen = degeneracy_check(rec, init, lam)
            cond11 = condition_11_estimate(
                rec, init, report.lambda0, report.nu)
            extras = {
                "degeneracy": {
                    "denominator": encode_scalar(degen.denominator),
                    "numerator": encode_scalar(degen.numerator),
                    "relative_magnitude": degen.relative_magnitude,
                    "degenerate": degen.degenerate,
                    "exact": degen.exact,
                },
                "condition_11": {
                    "trend": cond11.trend,
                    "final_magnitude": cond11.final_magnitude,
                    "samples": [[k, m] for k, m in cond11.samples],
                },
            }
    except NoConvergence:
        pass
    evidence = [_evidence_dict(ev1), _evidence_dict(ev2)]
    findings = [e for e in evidence if e["status"] == VIOLATED]
    results = {"claims": evidence, **extras}
    doc = build_document("audit", _echo_inputs(
        weights=weights, init=init_text, horizon=horizon), results, findings)

    def render(doc):
        for e in evidence:
            click.echo(f"{e['claim']}: {e['status']}"
                       + (f"  witness: {e['witness']}" if e["witness"] else ""))
        if extras:
            d = extras["degeneracy"]
            click.echo(f"degenerate denominator: {d['degenerate']} "
                       f"(relative magnitude {d['relative_magnitude']:.3g})")
            click.echo(f"condition-11 trend: {extras['condition_11']['trend']}")

    _emit(doc, fmt, render)
    if fail_on_violation and findings:
        sys.exit(EXIT_VIOLATION)


def _evidence_dict(ev):
    return {
        "claim": ev.claim,
        "status": ev.status,
        "witness": ev.witness,
        "horizon": ev.horizon,
    }


@main.command("audit-random")
@click.option("--seed", type=int, required=True)
@click.option("--count", type=int, required=True)
@click.option("--n", "n_range", default="2..4",
              help="Order range, e.g. 2..4.")
@click.option("--entries", type=click.Choice(
    ["int", "rational", "gaussian", "float"]), default="int")
@click.option("--magnitude", type=int, default=3)
@click.option("--horizon", type=int, default=60)
@_format_option
@_config_option
def cmd_audit_random(seed, count, n_range, entries, magnitude, horizon, fmt,
                     config_path):
    """Seeded randomized audit across many instances (deterministic)."""
    config = _load_config(config_path)
    fmt = _opt(fmt, config, "format", "json")
    try:
        lo, hi = (int(x) for x in n_range.split(".."))
    except ValueError:
        _fail(f"bad order range {n_range!r}, expected e.g. 2..4",
              EXIT_VALIDATION)
    if count < 0:
        _fail("count must be >= 0", EXIT_VALIDATION)
    cfg = BatchConfig(n_min=lo, n_max=hi, entry_kind=entries,
                      magnitude=magnitude, horizon=horizon)
    evidence, summary = batch_audit(seed, count, cfg)
    results = {"summary": summary, "evidence": evidence}
    doc = build_document("audit-random", {
        "seed": seed, "count": count, "n": n_range, "entries": entries,
        "magnitude": magnitude, "horizon": horizon}, results)

    def render(doc):
        for claim, counts in summary.items():
            click.echo(f"{claim}: " + "  ".join(
                f"{k}={v}" for k, v in counts.items()))

    _emit(doc, fmt, render)


@main.command("family")
@click.option("--p", "p_text", required=True,
              help="Common weight value (rational or decimal literal).")
@click.option("--n-max", type=int, default=None)
@_format_option
@_config_option
def cmd_family(p_text, n_max, fmt, config_path):
    """Dominant roots and ratio estimates for weights (p,...,p), n rising."""
    config = _load_config(config_path)
    fmt = _opt(fmt, config, "format", "table")
    n_max = int(_opt(n_max, config, "n_max", 10))
    if n_max < 2:
        _fail("n-max must be >= 2", EXIT_VALIDATION)
    try:
        p = parse_scalar(p_text)
    except ParseError as exc:
        _fail(f"bad value for --p: {exc}", EXIT_VALIDATION)
    p_float = complex(p).real
    if complex(p).imag != 0 or p_float <= 0:
        _fail("--p must be a positive real", EXIT_VALIDATION)
    rows = []
    prev = None
    monotone = True
    gaps_shrink = True
    for n in range(2, n_max + 1):
        rec = Recurrence((p,) * n)
        report = classify_dominance(find_roots(characteristic_polynomial(rec)))
        lam = report.lambda0.real if report.lambda0 is not None else None
        est = estimate_ratio_limit(
            rec, fundamental_initial_conditions(rec),
            opts=RatioOptions(tol=1e-10, max_k=4000))
        gap = abs((p_float + 1.0) - lam) if lam is not None else None
        if prev is not None and lam is not None:
            if lam <= prev["lambda0"]:
                monotone = False
            if gap >= prev["gap"]:
                gaps_shrink = False
        row = {
            "n": n,
            "lambda0": lam,
            "ratio_estimate": _maybe_scalar(est.value),
            "ratio_status": est.status,
            "gap": gap,
        }
        rows.append(row)
        prev = row
    results = {
        "limit": p_float + 1.0,
        "rows": rows,
        "monotone_increasing": monotone,
        "gap_shrinking": gaps_shrink,
    }
    doc = build_document("family", {"p": p_text, "n_max": n_max}, results)

    def render(doc):
        click.echo(f"{'n':>4}  {'lambda0':>16}  {'gap to p+1':>12}")
        for row in rows:
            click.echo(f"{row['n']:>4}  {sig_digits(row['lambda0']):>16}  "
                       f"{row['gap']:>12.3e}")
        click.echo(f"monotone increasing: {monotone}; "
                   f"gap shrinking: {gaps_shrink}; limit {p_float + 1}")

    _emit(doc, fmt, render)


@main.group("oeis")
def cmd_oeis():
    """OEIS signature search and ratio-limit verification."""


@cmd_oeis.command("verify")
@click.option("--signature", required=True,
              help="Comma-separated integer signature, e.g. 1,1.")
@click.option("--limit", type=int, default=5)
@click.option("--offline", is_flag=True, default=False)
@click.option("--cache-dir", envvar="FIBRATIO_CACHE_DIR",
              type=click.Path(), default=None)
@click.option("--tail-tol", type=float, default=1e-4)
@_format_option
@_config_option
def cmd_oeis_verify(signature, limit, offline, cache_dir, tail_tol, fmt,
                    config_path):
    """Fetch entries for a signature and check their tail ratios."""
    config = _load_config(config_path)
    fmt = _opt(fmt, config, "format", "table")
    cache_dir = _opt(cache_dir, config, "cache_dir", None)
    try:
        sig = tuple(int(s) for s in signature.split(","))
    except ValueError:
        _fail(f"bad signature {signature!r}", EXIT_VALIDATION)
    client = OeisClient(cache_dir=cache_dir, offline=offline)
    try:
        entries = client.search_by_signature(sig, limit=limit)
    except NetworkUnavailable as exc:
        _fail(str(exc), EXIT_NOT_CONVERGED)
    records = []
    for entry in entries:
        records.append(client.verify_entry(entry, sig,
                                           tail_ratio_tol=tail_tol))
    results = {
        "signature": list(sig),
        "records": [{
            "id": r.id,
            "recurrence_consistent": r.recurrence_consistent,
            "measured_tail_ratio": _maybe_scalar(r.measured_tail_ratio),
            "lambda0": _maybe_scalar(r.lambda0),
            "agrees": r.agrees,
            "detail": r.detail,
        } for r in records],
        "agree_count": sum(1 for r in records if r.agrees),
    }
    doc = build_document("oeis-verify", {
        "signature": signature, "limit": limit, "offline": offline}, results)

    def render(doc):
        for r in records:
            click.echo(f"{r.id}: consistent={r.recurrence_consistent} "
                       f"agrees={r.agrees}  {r.detail}")

    _emit(doc, fmt, render)


if __name__ == "__main__":
    main()
