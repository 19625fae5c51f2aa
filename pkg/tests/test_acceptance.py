"""Exit criteria for the toolkit, one test per criterion.

Each test records a one-line verdict that is printed in the pytest summary
under "acceptance criteria".
"""

import json
import math

import numpy as np
import pytest
import scipy.linalg

from conftest import ACCEPTANCE_RESULTS
from gospace import su3
from gospace.cli import main
from gospace.equilibria import (
    lagrangian_equilibrium_residual,
    legendre_to_hamiltonian,
    membership_residual,
    orbit_extremum_search,
    solve_equilibria_at,
)
from gospace.goanalysis import (
    co_condition_residual,
    go_samples,
    go_test,
    graph_from_invariant,
    graph_homogeneity_check,
    min_norm_graph,
    natural_reductivity_analysis,
)
from gospace.homspace import EnergyForm, ad_star_invariance_residual, induced_form
from gospace.liealg import heisenberg
from gospace.liepoisson import casimir_drift, integrate

S3 = math.sqrt(3.0)
UNEQUAL_PAIRS = [(1.0, 2.0), (2.0, 1.0), (3.0, 0.5), (0.5, 3.0), (1.0, 1.5),
                 (0.2, 0.9), (5.0, 1.0), (1.0, 10.0), (0.7, 0.3), (2.5, 2.6)]
BROKEN = EnergyForm.quadratic(2.0 * np.diag([1.0, 2.0, 1.0, 1.0, 1.0]))


def record(num, title, ok, detail):
    ACCEPTANCE_RESULTS[num] = (bool(ok), title, detail)
    assert ok, f"criterion {num} ({title}) failed: {detail}"


def rng_for(seed):
    return np.random.Generator(np.random.Philox(seed))


def random_p(rng, r_min=0.1):
    while True:
        p = rng.standard_normal(5)
        if np.linalg.norm(p[:4]) > r_min:
            return p


def test_01_su3_validity():
    model, _ = su3.builtin_su3_su2(1.0, 2.0)
    c = model.algebra.c
    antisym = np.array_equal(c, -c.transpose(1, 0, 2))
    jac = model.algebra.jacobi_residual()
    ok = antisym and jac < 1e-12 and model.k_closure_residual < 1e-12 and model.reductive_residual < 1e-12
    record(1, "su(3) validity", ok,
           f"antisymmetric={antisym} jacobi={jac:.1e} k-closure={model.k_closure_residual:.1e} "
           f"[k,m]->k={model.reductive_residual:.1e} (tol 1e-12)")


def test_02_geodesic_graph_oracle():
    rng = rng_for(2)
    worst, nonunique, count = 0.0, 0, 0
    for alpha, beta in UNEQUAL_PAIRS:
        model, form = su3.builtin_su3_su2(alpha, beta)
        for _ in range(200):
            p = random_p(rng)
            g = min_norm_graph(model, form, p)
            nonunique += g.uniqueness_rank > 0
            worst = max(worst, float(np.max(np.abs(g.xi - su3.closed_form_graph(alpha, beta, p)))))
            count += 1
    record(2, "geodesic-graph oracle", worst < 1e-8 and nonunique == 0,
           f"{count} samples, max componentwise error {worst:.2e} (tol 1e-8), non-unique samples {nonunique}")


def test_03_spot_value():
    model, form = su3.builtin_su3_su2(1.0, 2.0)
    xi = min_norm_graph(model, form, np.array([1.0, 0, 0, 0, 1.0])).xi
    expected = np.zeros(8)
    expected[[su3.E1, su3.Z, su3.A]] = [2.0, 4.0, 2 * S3]
    err = float(np.max(np.abs(xi - expected)))
    record(3, "spot value at E1+Z", err < 1e-10, f"max error {err:.2e} (tol 1e-10)")


def test_04_degenerate_locus():
    model, form = su3.builtin_su3_su2(1.0, 2.0)
    sol = solve_equilibria_at(model, form, np.array([0, 0, 0, 0, 1.0]))
    m_err = float(np.max(np.abs(model.f_apply(sol.particular) - [0, 0, 0, 0, 4.0])))
    k_span = np.eye(8)[:3]
    rank = sol.nullspace.rank
    angle = float(np.max(scipy.linalg.subspace_angles(sol.nullspace.vectors.T, k_span.T))) if rank else np.inf
    ok = sol.solvable and m_err < 1e-10 and rank == 3 and angle < 1e-8
    record(4, "degenerate locus r=0", ok,
           f"solvable={sol.solvable} m-part error {m_err:.1e}, nullspace rank {rank}, max angle {angle:.1e} (tol 1e-8)")


def test_05_go_family():
    verdicts = {}
    for ab in [(1.0, 1.0), (1.0, 2.0), (3.0, 0.5)]:
        verdicts[ab] = go_test(*su3.builtin_su3_su2(*ab), n_samples=1000, seed=0).verdict
    model, _ = su3.builtin_su3_su2(1.0, 1.0)
    broken = go_test(model, BROKEN, n_samples=1000, seed=0)
    ok = all(v == "go" for v in verdicts.values()) and broken.verdict == "not_go" \
        and broken.counterexample is not None
    record(5, "g.o. family", ok,
           f"verdicts {[verdicts[k] for k in verdicts]}; broken form {broken.verdict} "
           f"counterexample {None if broken.counterexample is None else broken.counterexample.tolist()}")


def test_06_natural_reductivity_boundary():
    nr = natural_reductivity_analysis(*su3.builtin_su3_su2(1.0, 1.0), seed=0)
    nnr = natural_reductivity_analysis(*su3.builtin_su3_su2(1.0, 2.0), seed=0)
    ok = nr.verdict == "naturally_reductive_evidence" and nr.fit_residual < 1e-8 \
        and nnr.verdict == "not_naturally_reductive"
    record(6, "natural reductivity iff alpha=beta", ok,
           f"alpha=beta: {nr.verdict} (fit {nr.fit_residual:.1e}); alpha!=beta: {nnr.verdict} "
           f"(membership {nnr.membership_residual:.2e})")


def test_07_invariant_pipeline():
    model, _ = su3.builtin_su3_su2(1.0, 2.0)
    r1 = ad_star_invariance_residual(model.algebra, su3.y1_invariant(), 200, 0)
    r2 = ad_star_invariance_residual(model.algebra, su3.y2_invariant(), 200, 0)
    rng = rng_for(7)
    y2 = su3.y2_invariant()
    h_o = induced_form(model, y2)
    worst = max(membership_residual(model, h_o, p, graph_from_invariant(model, y2, p).xi)
                for p in (rng.standard_normal(5) for _ in range(100)))
    verdict = go_test(model, h_o, n_samples=1000, seed=0).verdict
    ok = r1 < 1e-10 and r2 < 1e-10 and worst < 1e-8 and verdict == "go"
    record(7, "invariant-function pipeline", ok,
           f"Ad* residuals Y1 {r1:.1e} Y2 {r2:.1e} (tol 1e-10); dY2 membership {worst:.1e} (tol 1e-8); "
           f"go_test(y2) {verdict}")


def test_08_co_condition():
    worst_family = 0.0
    for ab in [(1.0, 1.0), (1.0, 2.0), (3.0, 0.5)]:
        model, form = su3.builtin_su3_su2(*ab)
        rng = rng_for(8)
        for _ in range(200):
            worst_family = max(worst_family, co_condition_residual(model, form, rng.standard_normal(5)))
    model, _ = su3.builtin_su3_su2(1.0, 1.0)
    worst_broken = max(co_condition_residual(model, BROKEN, p) for p in go_samples(5, 200, 8))
    ok = worst_family < 1e-10 and worst_broken > 1e-3
    record(8, "condition (co)", ok,
           f"family max {worst_family:.1e} (tol 1e-10); broken form max {worst_broken:.2f} (> 1e-3)")


def test_09_lemma_equivalence():
    rng = rng_for(9)
    disagreements, kinds = 0, {True: 0, False: 0}
    pairs = [(1.0, 2.0), (3.0, 0.5), (1.0, 1.0)]
    for i in range(100):
        model, form = su3.builtin_su3_su2(*pairs[i % 3])
        lag = legendre_to_hamiltonian(form)
        p = rng.standard_normal(5)
        sol = solve_equilibria_at(model, form, p)
        a = sol.point(rng.standard_normal(sol.nullspace.rank))
        if i % 3 == 1:
            a[:3] += rng.standard_normal(3)
        elif i % 3 == 2:
            a[3:] += 0.1 * rng.standard_normal(5)
        ham = membership_residual(model, form, p, a) <= sol.tol
        velocity = lag.gradient(model.f_apply(a))  # momentum dual to f(a)
        lagr = np.max(np.abs(velocity - p)) <= sol.tol and \
            lagrangian_equilibrium_residual(model, lag, a) <= sol.tol
        disagreements += ham != lagr
        kinds[ham] += 1
    record(9, "Hamiltonian/Lagrangian lemma agreement", disagreements == 0,
           f"100 pairs ({kinds[True]} equilibria, {kinds[False]} non-equilibria), {disagreements} disagreements")


def test_10_scaling():
    rng = rng_for(10)
    model, form = su3.builtin_su3_su2(1.0, 2.0)
    failures = 0
    for _ in range(50):
        p = rng.standard_normal(5)
        a = solve_equilibria_at(model, form, p).particular
        for lam in (-1.0, 0.5, 3.0):
            tol = solve_equilibria_at(model, form, lam * p).tol
            failures += membership_residual(model, form, lam * p, lam * a) > 10 * tol
    homog = max(graph_homogeneity_check(model, form, random_p(rng), [-1.0, 0.5, 3.0]) for _ in range(50))
    record(10, "scaling and first-order homogeneity", failures == 0 and homog < 1e-8,
           f"{failures} scaling failures over 150 checks; homogeneity deviation {homog:.1e} (tol 1e-8)")


def test_11_lie_poisson():
    alg = su3.su3()
    polys = su3.builtin_polynomials()
    rng = rng_for(11)
    mu0 = rng.standard_normal(8)
    traj = integrate(alg, polys["Y1"], mu0, 1e-3, 1.0)
    const = max(float(np.max(np.abs(s.mu - mu0))) for s in traj)
    # a fast rotation (z = 10) keeps RK4 truncation error above the roundoff floor
    mu1 = rng.standard_normal(8)
    mu1[su3.Z] = 10.0
    cas = [polys["Y1"], polys["Y2"]]
    d1 = casimir_drift(integrate(alg, polys["half_z2"], mu1, 1e-3, 10.0), cas)
    d2 = casimir_drift(integrate(alg, polys["half_z2"], mu1, 5e-4, 10.0), cas)
    ratios = [a / b if b > 0 else np.inf for a, b in zip(d1, d2)]
    ok = const < 1e-12 and max(d1) < 1e-6 and min(ratios) >= 8.0
    record(11, "Lie-Poisson", ok,
           f"Y1 flow deviation {const:.1e} (tol 1e-12); drift Y1 {d1[0]:.1e} Y2 {d1[1]:.1e} (tol 1e-6); "
           f"halving ratios {ratios[0]:.1f}, {ratios[1]:.1f} (>= 8)")


def test_12_derived_series():
    s = su3.su3()
    h = heisenberg()
    ok = not s.is_solvable() and h.is_solvable() and len(h.derived_series()) == 3
    record(12, "derived series", ok,
           f"su(3) ranks {[b.rank for b in s.derived_series()]}, heisenberg ranks "
           f"{[b.rank for b in h.derived_series()]}")


def test_13_orbit_search():
    model, form = su3.builtin_su3_su2(1.0, 2.0)
    lag = legendre_to_hamiltonian(form)
    a0 = np.zeros(8)
    a0[[su3.E1, su3.Z]] = 1.0
    a = orbit_extremum_search(model, lag, a0, max_iter=10_000, tol=1e-6)
    res = lagrangian_equilibrium_residual(model, lag, a)
    record(13, "orbit extremum search", res < 1e-6, f"residual {res:.1e} (tol 1e-6) within 1e4 iterations")


CLI_RUNS = [
    ["su3", "--alpha", "1", "--beta", "2"],
    ["validate"],
    ["equilibria", "--p", "0.5,-1,0.2,0.3,1", "--beta", "2"],
    ["go-test", "--samples", "200", "--seed", "0", "--beta", "2"],
    ["graph", "--p", "1,0,0,0,1", "--beta", "2"],
    ["graph", "--p", "1,0.5,0,0,1", "--from-invariant", "Y2"],
    ["natred", "--samples", "50", "--beta", "2"],
    ["co-check", "--samples", "50", "--beta", "2"],
    ["derived-series"],
    ["orbit-search", "--a0", "0,0,0,1,0,0,0,1", "--tol", "1e-6", "--beta", "2"],
    ["lp-integrate", "--h", "half_z2", "--mu0", "1,2,3,4,5,6,7,8", "--dt", "0.01", "--t-end", "1"],
]


def test_14_cli_determinism(tmp_path):
    path = tmp_path / "report.json"
    differing = []
    for args in CLI_RUNS:
        outs = []
        for _ in range(2):
            main(args + ["-o", str(path)])
            outs.append(path.read_bytes())
            json.loads(outs[-1])
        if outs[0] != outs[1]:
            differing.append(args[0])
    record(14, "CLI determinism", not differing,
           f"{len(CLI_RUNS)} subcommand runs, byte-identical reports; differing: {differing or 'none'}")
