"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (also collected in the pytest
summary) and then asserts, so a failure still reports its measurements.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from dunklrad.besov import BesovParams, annulus_sup, phi_for, verify_theorem3, ANNULUS_LO, ANNULUS_HI, ANNULUS_N
from dunklrad.cli import run
from dunklrad.curves import power
from dunklrad.inequalities import theorem1_necessity_probe, verify_hlp, verify_pitt
from dunklrad.measure import (
    FAMILIES, DunklIndex, Gaussian, Indicator, PowerGaussian, PowerProfile, ball_measure, lp_norm,
    make_family,
)
from dunklrad.rearrange import decreasing_rearrangement, reciprocal_profile, reverse_hardy_littlewood
from dunklrad.specfun import bessel_j_normalized
from dunklrad.transform import TransformedProfile, inverse_transform_radial, transform_values
from dunklrad.weights import (
    bp_check, bp_equivalent_condition, pitt_alpha, pitt_index_check, theorem1_condition_power,
)

pytestmark = pytest.mark.acceptance

INDICES = [(1, 0.5), (2, 0.0), (3, 1.0)]


def test_criterion_1_power_weight_rearrangements(report_criterion):
    start = time.perf_counter()
    t = np.geomspace(1e-3, 1e3, 121)
    worst = 0.0
    for d, gamma in INDICES:
        idx = DunklIndex(d, gamma)
        N, dk = idx.N, idx.d_k
        for a in (-0.5, -1.0, -0.9 * N):
            re = decreasing_rearrangement(idx, PowerProfile(a), method="monotone")
            closed = (N / dk) ** (a / N) * t ** (a / N)
            worst = max(worst, np.max(np.abs(re.f_star(t) / closed - 1)))
        for b in (0.5, 1.0, 2.0):
            re = decreasing_rearrangement(idx, reciprocal_profile(PowerProfile(b)),
                                          method="monotone")
            closed = (N / dk) ** (-b / N) * t ** (-b / N)
            worst = max(worst, np.max(np.abs(re.f_star(t) / closed - 1)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 5
    report_criterion(1, ok, f"max rel err {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_reverse_hardy_littlewood_equality(report_criterion):
    start = time.perf_counter()
    worst = 0.0
    for d, gamma in INDICES:
        idx = DunklIndex(d, gamma)
        N = idx.N
        for r in (0.5, 1.0, 2.0):
            for beta in (0.5, 1.0):
                out = reverse_hardy_littlewood(idx, Indicator(r), PowerProfile(beta))
                closed = idx.d_k / (beta + N) * r ** (beta + N)
                worst = max(worst, abs(out["lhs"] / closed - 1), abs(out["rhs"] / closed - 1))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 1
    report_criterion(2, ok, f"max rel err {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_criterion_3_plancherel_inversion_indicator(report_criterion):
    start = time.perf_counter()
    plancherel, round_trip, indicator = 0.0, 0.0, 0.0
    r = np.linspace(0.0, 6.0, 61)
    s = np.geomspace(0.05, 50.0, 20)
    for d, gamma in INDICES:
        idx = DunklIndex(d, gamma)
        for f in (Gaussian(1.0), Gaussian(0.5), PowerGaussian(2.0)):
            tf = TransformedProfile(idx, f)
            plancherel = max(plancherel, abs(lp_norm(idx, tf, 2.0) / lp_norm(idx, f, 2.0) - 1))
            back = inverse_transform_radial(idx, tf, r).values
            round_trip = max(round_trip, np.max(np.abs(back - f(r))))
        R = 1.3
        closed = ball_measure(idx, R) * bessel_j_normalized(idx.nu + 1.0, R * s)
        indicator = max(indicator, np.max(np.abs(transform_values(idx, Indicator(R), s) - closed)))
    elapsed = time.perf_counter() - start
    ok = plancherel <= 1e-6 and round_trip <= 1e-5 and indicator <= 1e-7 and elapsed < 30
    report_criterion(3, ok, f"plancherel {plancherel:.1e}, round trip {round_trip:.1e}, "
                            f"indicator {indicator:.1e}, {elapsed:.1f}s")
    assert ok


def test_criterion_4_bp_exactness(report_criterion):
    start = time.perf_counter()
    mismatches, worst = [], 0.0
    for p in (1.5, 2.0, 3.0):
        for a in (-1.5, -0.5, 0.0, 0.5, p - 1, p):
            rep = bp_check(power(a), p)
            member = -1 < a < p - 1
            if rep.bounded != member:
                mismatches.append(("bp", a, p))
            if bp_equivalent_condition(power(a), p).verdict != rep.verdict:
                mismatches.append(("equivalent", a, p))
            if member:
                worst = max(worst, abs(rep.sup_estimate / ((a + 1) / (p - 1 - a)) - 1))
    elapsed = time.perf_counter() - start
    ok = not mismatches and worst <= 1e-6 and elapsed < 5
    report_criterion(4, ok, f"mismatches {mismatches}, sup rel err {worst:.1e}, {elapsed:.2f}s")
    assert ok


def _pitt_sweep():
    """30 tuples: constraint-consistent at four beta levels plus two off-constraint shifts."""
    rows = []
    cases = [((3, 0.0), (2.0, 2.0)), ((2, 0.5), (1.5, 2.0)), ((1, 0.5), (2.0, 3.0)),
             ((3, 1.0), (2.5, 3.0)), ((2, 0.0), (1.8, 2.5))]
    for (d, gamma), (p, q) in cases:
        idx = DunklIndex(d, gamma)
        top = idx.N * (p - 1)
        for frac in (0.2, 0.5, 0.8, 1.2):
            beta = frac * top
            rows.append((idx, pitt_alpha(idx, beta, p, q), beta, p, q))
        beta = 0.5 * top
        alpha = pitt_alpha(idx, beta, p, q)
        rows += [(idx, alpha + 0.3, beta, p, q), (idx, alpha, beta - 0.3, p, q)]
    return rows


def test_criterion_5_condition_matches_index_constraint(report_criterion):
    start = time.perf_counter()
    rows = _pitt_sweep()
    disagreements, admissible = [], 0
    for idx, alpha, beta, p, q in rows:
        finite = theorem1_condition_power(idx, alpha, beta, p, q).verdict == "finite"
        adm = pitt_index_check(idx, alpha, beta, p, q)["admissible"]
        admissible += adm
        if finite != adm:
            disagreements.append((idx.N, alpha, beta, p, q))
    elapsed = time.perf_counter() - start
    ok = len(rows) == 30 and not disagreements and elapsed < 10
    report_criterion(5, ok, f"{len(rows)} tuples, {admissible} admissible, "
                            f"disagreements {disagreements}, {elapsed:.2f}s")
    assert ok


PITT_TUPLES = [((3, 0.0), 2.0, 2.0, 1.0), ((3, 0.0), 2.0, 2.0, 0.5), ((3, 0.0), 1.5, 2.0, 0.75),
               ((2, 0.5), 2.0, 3.0, 1.5), ((1, 0.5), 2.0, 2.0, 0.5), ((3, 1.0), 1.8, 2.5, 2.0)]
LAMBDAS = (0.5, 2.0, 4.0)


def test_criterion_6_pitt_dilation(report_criterion):
    start = time.perf_counter()
    f = Gaussian()
    drift = 0.0
    for (d, gamma), p, q, beta in PITT_TUPLES:
        idx = DunklIndex(d, gamma)
        alpha = pitt_alpha(idx, beta, p, q)
        base = verify_pitt(idx, f, alpha, beta, p, q).ratio
        for lam in LAMBDAS:
            drift = max(drift, abs(verify_pitt(idx, f.dilate(lam), alpha, beta, p, q).ratio
                                   / base - 1))
    idx = DunklIndex(3)
    base = verify_pitt(idx, f, -1.0, 2.0, 2.0, 2.0, strict=False)
    res = base.diagnostics["constraint_residual"]
    scaling = 0.0
    for lam in LAMBDAS:
        got = verify_pitt(idx, f.dilate(lam), -1.0, 2.0, 2.0, 2.0, strict=False).ratio
        scaling = max(scaling, abs(got / base.ratio / lam ** (idx.N * res) - 1))
    elapsed = time.perf_counter() - start
    ok = drift <= 1e-3 and scaling <= 1e-3 and elapsed < 60
    report_criterion(6, ok, f"admissible drift {drift:.1e}, inadmissible scaling err "
                            f"{scaling:.1e}, {elapsed:.1f}s")
    assert ok


def test_criterion_7_hlp_plancherel_case(report_criterion):
    start = time.perf_counter()
    worst = 0.0
    for d, gamma in INDICES:
        idx = DunklIndex(d, gamma)
        for name in FAMILIES:
            worst = max(worst, abs(verify_hlp(idx, make_family(name), 2.0).ratio - 1))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 10
    report_criterion(7, ok, f"families {list(FAMILIES)}, max |ratio-1| {worst:.1e}, "
                            f"{elapsed:.2f}s")
    assert ok


def test_criterion_8_necessity_probe(report_criterion):
    start = time.perf_counter()
    idx = DunklIndex(3)
    margins = {}
    holds = True
    for r in (0.5, 1.0, 4.0):
        out = theorem1_necessity_probe(idx, r, PowerProfile(-1.0), PowerProfile(1.0), 2.0, 2.0,
                                       n=50)
        links = out["diagnostics"]["links"]
        holds &= (links["bessel_lower_bound"] and links["transform_above_half_r_prime"]
                  and links["distribution_above_inverse_r"])
        margins[r] = round(min(out["diagnostics"]["margins"].values()), 3)
    elapsed = time.perf_counter() - start
    ok = holds and elapsed < 30
    report_criterion(8, ok, f"min margins {margins}, {elapsed:.2f}s")
    assert ok


def _theorem3_config(params):
    f = Gaussian()
    res = verify_theorem3(params, f)
    phi = phi_for(params)
    cache = dict(zip(map(float, res["besov"]["t"]), res["besov"]["norms"]))
    fine = np.geomspace(ANNULUS_LO, ANNULUS_HI, 2 * ANNULUS_N - 1)
    refined, _ = annulus_sup(params, f, phi, fine, cache)
    flags = res["besov"]["convergence_flags"]
    stable = abs(refined / res["annulus_sup"] - 1) <= 0.10
    ok = (flags["converged"] and math.isfinite(res["besov_norm"])
          and math.isfinite(res["transform_l1_norm"]) and res["conclusion"] and stable)
    detail = (f"besov {res['besov_norm']:.4g} (slopes {flags['low_slope']:.3f}, "
              f"{flags['high_slope']:.3f}), L1 {res['transform_l1_norm']:.4g}, annulus sup "
              f"{res['annulus_sup']:.4g} -> {refined:.4g}, phi order {res['phi_order']}")
    return ok, detail


def test_criterion_9_besov_integrability(report_criterion):
    start = time.perf_counter()
    idx = DunklIndex(3)
    ok1, d1 = _theorem3_config(BesovParams(idx, 2.0, 2.0, -0.5, 0.5))
    ok2, d2 = _theorem3_config(BesovParams.hlp_corner(idx, 1.5))
    elapsed = time.perf_counter() - start
    ok = ok1 and ok2 and elapsed < 120
    report_criterion(9, ok, f"[weighted] {d1}; [corner] {d2}; {elapsed:.1f}s")
    assert ok


CLI_EXPERIMENTS = [
    ["transform", "--d", "3", "--gamma", "0.5", "--family", "power_gaussian"],
    ["rearrange", "--d", "2", "--family", "power_gaussian"],
    ["bp-check", "--weight", "power:-0.5", "--p", "2"],
    ["hardy-check", "--mu", "power:-1.5", "--theta", "power:0.2", "--p", "2", "--q", "2"],
    ["thm1-verify", "--d", "3", "--p", "2", "--q", "2", "--alpha", "-1", "--beta", "1",
     "--family", "indicator"],
    ["pitt-verify", "--d", "3", "--gamma", "0", "--p", "2", "--q", "2", "--alpha", "-1",
     "--beta", "1", "--family", "gaussian"],
    ["hlp-verify", "--d", "2", "--p", "1.5", "--family", "indicator"],
    ["besov-verify", "--d", "3", "--p", "2", "--q", "2", "--alpha", "-0.5", "--beta", "0.5",
     "--grid", "1e-3:1e3:21"],
    ["necessity-probe", "--d", "3", "--p", "2", "--q", "2", "--alpha", "-1", "--beta", "1"],
    ["sweep", "--target", "pitt-verify", "--d", "3", "--p", "2", "--q", "2",
     "--vary", "alpha=-2.5:-0.5:3", "--vary", "beta=0.5,1.5"],
]


def test_criterion_10_cli_determinism(report_criterion, tmp_path):
    start = time.perf_counter()
    differing = []
    for i, argv in enumerate(CLI_EXPERIMENTS):
        outputs = []
        for k in range(2):
            js, cs = tmp_path / f"{i}-{k}.json", tmp_path / f"{i}-{k}.csv"
            code = run(argv + ["--output", str(js), "--csv", str(cs)])
            outputs.append((code, js.read_bytes(), cs.read_bytes() if cs.exists() else None))
        if outputs[0] != outputs[1] or outputs[0][0] != 0:
            differing.append(argv[0])
    # a fresh interpreter must reproduce the in-process report too
    argv = CLI_EXPERIMENTS[5]
    fresh = tmp_path / "fresh.json"
    subprocess.run([sys.executable, "-m", "dunklrad", *argv, "--output", str(fresh)], check=True)
    if fresh.read_bytes() != (tmp_path / "5-0.json").read_bytes():
        differing.append("subprocess " + argv[0])
    elapsed = time.perf_counter() - start
    ok = not differing
    report_criterion(10, ok, f"{len(CLI_EXPERIMENTS)} commands run twice plus one subprocess, differing "
                             f"{differing}, {elapsed:.1f}s")
    assert ok
