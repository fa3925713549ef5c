"""Acceptance criteria, one test per criterion, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the line per
criterion; every tolerance is stated inline.
"""

import json
import math
import random
import time

import numpy as np
import pytest

from np3kit import catalog
from np3kit import expr as E
from np3kit.classify import classify, ts_identity_residuals_many, verdict_from_samples
from np3kit.cli import main as cli_main
from np3kit.ektau import (AdaptedState, adapted_covariant_table, adapted_spin,
                          ektau_model, ektau_params, rigidity_obstruction,
                          rigidity_sweep, spin_from_f)
from np3kit.frame import (connection_table, curvature_values_many,
                          default_samples, eval_table_many)
from np3kit.npcore import (GaugeAngle, gauge_transform, grad_xi_norm_sq,
                           spin_coefficients, weighted_derivative)
from np3kit.suites import run_suites
from np3kit.xi import divergence_xi, parallel_and_collinearity, rough_laplacian_xi


def _report(num, label, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"{status} criterion {num}: {label}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {num}: {label} {detail}"


def test_criterion_1_example1_reproduction():
    t0 = time.perf_counter()
    spec = catalog.get_spec("example1")
    vals = spin_coefficients(spec).evaluate((0.0, 0.0, 0.0))
    rho = vals["rho"]
    ok = (abs(vals["kappa"]) <= 1e-9 and abs(vals["sigma"]) <= 1e-9
          and abs(rho - (-1.0 - 0.5j)) <= 1e-9
          and abs(rho.imag - (-0.5)) <= 1e-9    # alpha
          and abs(rho.real - (-1.0)) <= 1e-9)   # beta = Theta; omega = alpha
    elapsed = time.perf_counter() - t0
    _report(1, "example1 at origin: kappa=sigma=0, rho=-1-0.5i, (alpha,beta)=(-0.5,-1), "
               "Theta=-1, omega=-0.5 within 1e-9",
            ok and elapsed < 1.0, f"{elapsed:.3f}s")


def test_criterion_2_example2_reproduction():
    t0 = time.perf_counter()
    spec = catalog.get_spec("example2")
    co = spin_coefficients(spec)
    r1 = co.rho.evaluate((0.0, 0.0, 1.0))
    r2 = co.rho.evaluate((0.0, 0.0, 2.0))
    ok = (abs(r1 - (-1.0 - 0.5j)) <= 1e-9
          and abs(r1.imag - (-0.5)) <= 1e-9 and abs(r1.real - (-1.0)) <= 1e-9
          and abs(r2 - (-0.5 - 2.0j)) <= 1e-9)
    elapsed = time.perf_counter() - t0
    _report(2, "example2: rho(0,0,1)=-1-0.5i with (alpha,beta)=(-0.5,-1); "
               "rho(0,0,2)=-0.5-2i within 1e-9",
            ok and elapsed < 1.0, f"{elapsed:.3f}s")


def test_criterion_3_c6_and_flat():
    c6 = catalog.get_spec("c6")
    cls = classify(c6)
    pts = default_samples(c6, 100, seed=0)
    div_vals = E.evaluate_many(divergence_xi(c6).direct, pts, c6.params)
    ok = cls.verdict == "C6" and np.max(np.abs(div_vals)) <= 1e-9

    flat = catalog.get_spec("flat_cosymplectic")
    cls_flat = classify(flat)
    co = spin_coefficients(flat)
    fpts = default_samples(flat, 100, seed=0)
    k = np.max(np.abs(co.kappa.evaluate_many(fpts, flat.params)))
    s = np.max(np.abs(co.sigma.evaluate_many(fpts, flat.params)))
    r = co.rho.evaluate_many(fpts, flat.params)
    theta, omega = np.max(np.abs(r.real)), np.max(np.abs(r.imag))
    kin_ok = max(k, s, theta, omega) <= 1e-10
    ok = ok and cls_flat.verdict == "Cosymplectic" and kin_ok
    _report(3, "c6 classifies C6 with div(xi)=0 (<=1e-9); flat classifies "
               "Cosymplectic with xi parallel (kinematic scalars <=1e-10)", ok)


def test_criterion_4_identity_suites_all_entries():
    t0 = time.perf_counter()
    worst = 0.0
    failures = []
    for name in catalog.names():
        spec = catalog.get_spec(name)
        pts = default_samples(spec, 100, seed=0)
        results = run_suites(spec, ["sachs", "bianchi", "kn"], pts, tol=1e-8)
        for suite, checks in results.items():
            for chk in checks:
                if "max_residual" in chk:
                    worst = max(worst, chk["max_residual"])
                if not chk["pass"]:
                    failures.append(f"{name}:{suite}:{chk['name']}")
    elapsed = time.perf_counter() - t0
    _report(4, "Sachs(5) + Bianchi(2) + Kulkarni-Nomizu + torsion + metric-compat "
               "+ Riemann symmetries <= 1e-8 on all entries at 100 points",
            not failures and worst <= 1e-8 and elapsed < 30.0,
            f"worst={worst:.2e}, {elapsed:.1f}s, failures={failures}")


def test_criterion_5_trans_sasakian_theorem_suite():
    worst = 0.0
    failures = []
    for name in ("example1", "example2", "c6", "flat_radial"):
        spec = catalog.get_spec(name)
        pts = default_samples(spec, 100, seed=0)
        res = ts_identity_residuals_many(spec, pts)
        for rname, vals in res.items():
            value = float(np.max(vals))
            worst = max(worst, value)
            if value > 1e-8:
                failures.append(f"{name}:{rname}")
        p = spec.params
        rho = spin_coefficients(spec).rho.evaluate_many(pts, p)
        div_vals = E.evaluate_many(divergence_xi(spec).direct, pts, p)
        extra = {
            "div_2theta": np.max(np.abs(div_vals - 2 * rho.real)),
            "grad_norm": np.max(np.abs(E.evaluate_many(grad_xi_norm_sq(spec), pts, p)
                                       - 2 * np.abs(rho) ** 2)),
            "laplacian_closed_form": rough_laplacian_xi(spec).max_discrepancy(pts, p),
        }
        lap_vals = eval_table_many(rough_laplacian_xi(spec).generic, pts, p, 1)
        grad = E.evaluate_many(grad_xi_norm_sq(spec), pts, p)
        extra["bochner"] = np.max(np.abs(lap_vals[:, 2] - grad))
        for rname, value in extra.items():
            worst = max(worst, float(value))
            if value > 1e-8:
                failures.append(f"{name}:{rname}")
    _report(5, "trans-Sasakian identities (2ab+xi(a), R displays, Ricci displays, "
               "scalar, nabla xi, div=2Theta, |grad xi|^2=2|rho|^2, Laplacian "
               "closed form, Bochner) <= 1e-8 at 100 samples",
            not failures and worst <= 1e-8, f"worst={worst:.2e}")


def test_criterion_6_sol_obstruction():
    spec = catalog.get_spec("sol")
    pts = default_samples(spec, 100, seed=0)
    _, S, _ = curvature_values_many(spec, pts)
    ricci_ok = np.max(np.abs(S - np.diag([0.0, 0.0, -2.0]))) <= 1e-9
    sigma = spin_coefficients(spec).sigma.evaluate_many(pts, spec.params)
    sigma_ok = np.max(np.abs(sigma - (-1.0))) <= 1e-12
    verdict_ok = classify(spec, samples=pts).verdict == "NotTransSasakian"
    _report(6, "Sol: Ricci=diag(0,0,-2) <=1e-9, sigma=-1 exact to 1e-12, "
               "NotTransSasakian", ricci_ok and sigma_ok and verdict_ok)


def test_criterion_7_rigidity_sweep():
    t0 = time.perf_counter()
    kappas = np.linspace(-4.0, 4.0, 50)
    taus = np.linspace(-2.0, 2.0, 50)
    us = np.linspace(0.0, math.pi, 52)[1:-1]
    obstruction, expected_zero = rigidity_sweep(kappas, taus, us)
    grid_ok = bool(np.array_equal(obstruction != 0.0, ~expected_zero))

    # exceptional loci, hit exactly
    taus_nz = taus[taus != 0.0]
    space_form, sf_zero = rigidity_sweep(4 * taus_nz * taus_nz, taus_nz, us)
    sf_ok = bool(np.all(np.einsum("iiu->iu", space_form) == 0.0)
                 and np.all(np.einsum("iiu->iu", sf_zero)))
    flat_obs, _ = rigidity_sweep([0.0], [0.0], us)
    sin_zero_obs, _ = rigidity_sweep(kappas, taus, [0.0])
    exact_ok = bool(np.all(flat_obs == 0.0) and np.all(sin_zero_obs == 0.0))

    vert_ok = (rigidity_obstruction(ektau_params(1.0, 1.0), 0.5).implied_alpha_beta
               == (1.0, 0.0))
    vert_ok = vert_ok and (rigidity_obstruction(ektau_params(-1.0, 0.0), 0.5)
                           .implied_alpha_beta == (0.0, 0.0))
    elapsed = time.perf_counter() - t0
    _report(7, "50^3 rigidity sweep: obstruction vanishes exactly on the "
               "space-form/flat/vertical loci and nowhere else; vertical type "
               "(tau,0) resp. (0,0)",
            grid_ok and sf_ok and exact_ok and vert_ok and elapsed < 10.0,
            f"{elapsed:.2f}s")


def test_criterion_8_cross_engine_consistency():
    spec = catalog.get_spec("nil3")
    pts = default_samples(spec, 25, seed=0)
    gam = eval_table_many(connection_table(spec).gamma, pts, spec.params, 3)
    model = ektau_model(0.0, 0.5)
    conn_ok = np.max(np.abs(gam - np.asarray(model.gamma))) <= 1e-10

    rng = random.Random(2024)
    worst = 0.0
    for trial in range(1000):
        tau = 0.0 if trial % 2 else rng.choice([-1, 1]) * rng.uniform(0.1, 2.0)
        p = ektau_params(rng.uniform(-4, 4), tau)
        state = AdaptedState(
            rng.uniform(0, math.pi),
            tuple(rng.uniform(-2, 2) for _ in range(3)),
            tuple(rng.uniform(-2, 2) for _ in range(3)),
        )
        direct = adapted_spin(p, state)
        via_f = spin_from_f(adapted_covariant_table(p, state))
        worst = max(worst, max(abs(a - b) for a, b in zip(direct, via_f)))
    _report(8, "nil3 connection matches the canonical model table <=1e-10; "
               "adapted closed forms match the covariant-table route <=1e-12 "
               "on 1000 random states",
            conn_ok and worst <= 1e-12, f"worst={worst:.2e}")


def test_criterion_9_gauge_property_suite():
    spec = catalog.get_spec("example1")
    pts = default_samples(spec, 20, seed=0)
    co = spin_coefficients(spec)
    k0 = co.kappa.evaluate_many(pts, spec.params)
    s0 = co.sigma.evaluate_many(pts, spec.params)
    r0 = co.rho.evaluate_many(pts, spec.params)
    base_verdict = verdict_from_samples(k0, s0, r0)
    rng = random.Random(7)
    ok = True
    for _ in range(50):
        th = rng.uniform(-math.pi, math.pi)
        g = gauge_transform(co, GaugeAngle(E.const(th)), spec)
        k1 = g.kappa.evaluate_many(pts, spec.params)
        s1 = g.sigma.evaluate_many(pts, spec.params)
        r1 = g.rho.evaluate_many(pts, spec.params)
        ok = ok and bool(np.array_equal(r1, r0))  # rho invariant exactly
        ok = ok and np.max(np.abs(np.abs(s1) - np.abs(s0))) <= 1e-12
        ok = ok and np.max(np.abs(np.abs(k1) - np.abs(k0))) <= 1e-12
        ok = ok and verdict_from_samples(k1, s1, r1) == base_verdict

    # weighted-operator covariance for one non-constant gauge angle
    theta_text = "0.4*x1 + 0.2*x2"
    th = E.parse(theta_text)
    from np3kit.cexpr import CExpr
    from np3kit.frame import load_manifold, spec_to_document
    doc = spec_to_document(spec)
    e1, e2 = doc["frame"]["e1"], doc["frame"]["e2"]
    doc = dict(doc, name="example1_rot")
    doc["frame"] = {
        "e1": [f"cos({theta_text})*({a}) + sin({theta_text})*({b})"
               for a, b in zip(e1, e2)],
        "e2": [f"-sin({theta_text})*({a}) + cos({theta_text})*({b})"
               for a, b in zip(e1, e2)],
        "xi": doc["frame"]["xi"],
    }
    rotated = load_manifold(doc)
    s = 2
    phase_s = CExpr(E.cos(E.mul(float(s), th)), E.sin(E.mul(float(s), th)))
    phase_s1 = CExpr(E.cos(E.mul(float(s + 1), th)), E.sin(E.mul(float(s + 1), th)))
    got = weighted_derivative(phase_s * co.sigma, s, "eth", rotated)
    want = phase_s1 * weighted_derivative(co.sigma, s, "eth", spec)
    cov = np.max(np.abs(got.evaluate_many(pts, spec.params)
                        - want.evaluate_many(pts, spec.params)))
    ok = ok and cov <= 1e-10
    _report(9, "50 constant gauges: rho exactly invariant, |sigma|,|kappa| "
               "invariant <=1e-12, verdict unchanged; eth covariance at 20 "
               "samples for a non-constant angle", bool(ok), f"cov={cov:.2e}")


def test_criterion_10_determinism(capsys):
    argv = ["verify", "example1", "--suite", "all", "--seed", "7", "--format", "json"]
    code1 = cli_main(list(argv))
    out1 = capsys.readouterr().out
    code2 = cli_main(list(argv))
    out2 = capsys.readouterr().out
    ok = code1 == 0 and code2 == 0 and out1 == out2 and len(out1) > 100
    json.loads(out1)  # must be valid JSON
    with capsys.disabled():
        _report(10, "two runs of `verify example1 --suite all --seed 7 "
                    "--format json` are byte-identical", ok)
