"""Exit criteria for the package, one test per criterion.

Each test prints a single ``[criterion N] PASS|FAIL`` line (visible without -s)
and then asserts.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import random
import time
import timeit

import pytest

from household_alloc.cli import main
from household_alloc.errors import NotInterior
from household_alloc.model import (
    EconomyParams,
    PreferenceWeights,
    Regime,
    budget_residual,
    evaluate_utility,
    solve_closed_form,
)
from household_alloc.oracle import foc_residuals, maximize_numerically, random_interior_instance
from household_alloc.scenarios import SweepSpec, run_sweep
from household_alloc.statics import (
    analytic_jacobian,
    discrepancy_report,
    finite_difference_jacobian,
    verify_paper_claims,
)

from conftest import rel_err

N_RANDOM = 100
SEED = 20240101


@pytest.fixture(scope="module")
def instances():
    rng = random.Random(SEED)
    return [random_interior_instance(rng) for _ in range(N_RANDOM)]


@pytest.fixture
def report(capsys):
    def _report(n, title, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, f"criterion {n} failed: {detail}"
    return _report


def test_1_closed_form_reproduction(report):
    prefs, econ = PreferenceWeights.ones(), EconomyParams(w=1.0, tau=0.1)
    a = solve_closed_form(prefs, econ)
    errs = [rel_err(a.c, 1 / 6), rel_err(a.s, 1 / 6), rel_err(a.p, 1 / 6), rel_err(a.q, 1 / 6),
            rel_err(a.n, 5 / 3), rel_err(a.e, 0.1)]
    res = abs(budget_residual(a, econ))
    reps = 1000
    per_call = min(timeit.repeat(lambda: solve_closed_form(prefs, econ), number=reps, repeat=5)) / reps
    ok = max(errs) <= 1e-12 and res <= 1e-10 and per_call < 1e-3
    report(1, "closed-form reproduction",
           ok, f"max rel err {max(errs):.2e} (<=1e-12), budget residual {res:.2e} (<=1e-10), "
               f"{per_call * 1e6:.1f} us/call (<1 ms)")


def test_2_oracle_equivalence(instances, report):
    t0 = time.perf_counter()
    gap = u_gap = res_cf = 0.0
    for prefs, econ in instances:
        cf = solve_closed_form(prefs, econ)
        num = maximize_numerically(prefs, econ, tol=1e-10)
        gap = max(gap, max(rel_err(x, y) for x, y in zip(num.allocation.as_tuple(), cf.as_tuple())))
        u_cf = evaluate_utility(cf, prefs, econ)
        u_gap = max(u_gap, abs(num.utility - u_cf) / abs(u_cf))
        res_cf = max(res_cf, foc_residuals(cf, prefs, econ).max_abs())
    elapsed = time.perf_counter() - t0
    ok = gap <= 1e-4 and u_gap <= 1e-10 and res_cf <= 1e-9 and elapsed < 10.0
    report(2, f"oracle equivalence over {len(instances)} instances",
           ok, f"component gap {gap:.2e} (<=1e-4), utility gap {u_gap:.2e} (<=1e-10), "
               f"closed-form FOC residual {res_cf:.2e} (<=1e-9), {elapsed:.2f} s (<10 s)")


def test_3_jacobian_correctness(instances, report):
    t0 = time.perf_counter()
    worst = 0.0
    cells = 0
    for prefs, econ in instances:
        A = analytic_jacobian(prefs, econ)
        F = finite_difference_jacobian(prefs, econ, h=1e-6)
        assert F.available.all()
        for a, f in zip(A.entries.ravel(), F.entries.ravel()):
            worst = max(worst, rel_err(a, f))
            cells += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-5 and cells == 42 * len(instances) and elapsed < 5.0
    report(3, f"jacobian vs central differences on {cells} cells",
           ok, f"worst rel err {worst:.2e} (<=1e-5), {elapsed:.2f} s (<5 s)")


def test_4_claim_suite(instances, report):
    failures = []
    shared_n_exact = True
    for k, (prefs, econ) in enumerate(instances):
        claims = verify_paper_claims(prefs, econ)
        failures += [(k, v.claim) for v in claims if not v.passed]
        w = claims["Lemma 3"].witness
        shared_n_exact &= w["dn/dg1"] == w["dn/dg4"] == w["dn/dg6"]
        assert len(claims.verdicts) == 9
    ok = not failures and shared_n_exact
    report(4, "nine claim groups on every instance",
           ok, f"{len(failures)} failing claims, dn/dg1 = dn/dg4 = dn/dg6 exactly: {shared_n_exact}")


def test_5_tabulated_audit(report):
    prefs = PreferenceWeights.ones().with_weight(3, 0.5)
    econ = EconomyParams(w=1.0, tau=0.1)
    rep = discrepancy_report(prefs, econ)
    expected = {("c", 1), ("p", 4), ("s", 6), ("q", 7), ("n", 2), ("n", 5), ("e", 3)}
    flagged = rep.flagged_cells()
    fd_sides = all(abs(c.finite_difference - c.analytic) < abs(c.finite_difference - c.tabulated)
                   for c in rep.flagged)
    others = [c for c in rep.cells if not c.flagged]
    others_agree = len(others) == 35 and all(
        c.abs_diff <= 1e-8 * max(1.0, abs(c.analytic)) for c in others)
    ok = flagged == expected and fd_sides and others_agree
    report(5, "tabulated-matrix audit at gamma3 = 0.5",
           ok, f"flagged {sorted(flagged)}; finite differences side with analytic: {fd_sides}; "
               f"remaining {len(others)} cells agree: {others_agree}")


def test_6_regime_handling(report):
    econ = EconomyParams(w=1.0, tau=0.1)
    outcomes = {}
    for name, g3, regime in (("corner", 2.0, Regime.CORNER), ("singular", 1.0, Regime.SINGULAR)):
        prefs = PreferenceWeights(1, 0.5, g3, 1, 0.5, 1, 1)
        try:
            solve_closed_form(prefs, econ)
            outcomes[name] = False
        except NotInterior as exc:
            outcomes[name] = exc.classification.regime is regime
    sweep = run_sweep(SweepSpec(PreferenceWeights.ones(), econ, "gamma3", [0.5, 1.0, 1.5, 2.0, 2.5, 3.0]))
    regimes = [r.regime for r in sweep.rows]
    sweep_ok = regimes == ["Interior"] * 3 + ["Singular", "Corner", "Corner"]
    ok = all(outcomes.values()) and sweep_ok
    report(6, "corner and singular refused, sweep records skips",
           ok, f"refusals {outcomes}; sweep regimes {regimes}")


def test_7_invariance(report):
    rng = random.Random(SEED + 7)
    worst_scale = worst_lin = 0.0
    n_fixed = True
    for _ in range(50):
        g = [rng.uniform(0.1, 5) for _ in range(4)] + [rng.uniform(0.01, 0.1) for _ in range(3)]
        if g[1] + g[4] - g[2] <= 0.05:
            continue
        prefs = PreferenceWeights.from_sequence(g)
        econ = EconomyParams(w=rng.uniform(0.5, 10), tau=rng.uniform(0.01, 0.5))
        a = solve_closed_form(prefs, econ)
        # gamma5..gamma7 <= 0.1, so scaling by 10 keeps them admissible
        for k in (0.5, 2.0, 10.0):
            b = solve_closed_form(prefs.scaled(k), econ)
            worst_scale = max(worst_scale, max(rel_err(x, y) for x, y in zip(a.as_tuple(), b.as_tuple())))
        for k in (0.5, 3.0, 7.0):
            b = solve_closed_form(prefs, EconomyParams(econ.w * k, econ.tau))
            worst_lin = max(worst_lin, max(rel_err(getattr(b, f), k * getattr(a, f)) for f in "cspqe"))
            n_fixed &= b.n == a.n
    ok = worst_scale <= 1e-12 and worst_lin <= 1e-12 and n_fixed
    report(7, "weight-scale invariance and wage homogeneity",
           ok, f"scale err {worst_scale:.2e} (<=1e-12), linearity err {worst_lin:.2e}, n independent of w: {n_fixed}")


def test_8_cli_determinism(config_dir, tmp_path, report):
    import io

    cfg = str(config_dir / "all_ones.cfg")
    outputs, csvs, codes = [], [], []
    for k in range(2):
        path = tmp_path / f"crowd_out_{k}.csv"
        out = io.StringIO()
        codes.append(main(["sweep", cfg, "--scenario", "crowd_out", "--out", str(path)], out=out))
        outputs.append(out.getvalue().replace(str(path), "<out>"))
        csvs.append(path.read_bytes())
    text = outputs[0]
    verdicts_ok = all(f"{d}: decreasing ✓" in text for d in "scpn") and "q: increasing ✓" in text
    ok = codes == [0, 0] and csvs[0] == csvs[1] and outputs[0] == outputs[1] and verdicts_ok
    report(8, "crowd-out sweep determinism",
           ok, f"exit codes {codes}, CSV byte-identical: {csvs[0] == csvs[1]}, "
               f"stdout identical: {outputs[0] == outputs[1]}, verdicts s,c,p,n down and q up: {verdicts_ok}")
