"""Command-line front end.

Every subcommand writes one JSON report (sorted keys, no timestamps) that
embeds the run configuration, so identical invocations give identical bytes.

Exit codes: 0 success, 1 invalid input, 2 negative verdict, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import su3
from .equilibria import (
    legendre_to_hamiltonian,
    lagrangian_equilibrium_residual,
    orbit_extremum_search,
    solve_equilibria_at,
)
from .errors import (
    ConsistencyError,
    DivergenceError,
    GospaceError,
    InvalidInputError,
    NoConvergenceError,
    NoEquilibriumError,
)
from .goanalysis import (
    GO,
    NOT_GO,
    NOT_NR,
    co_condition_residual,
    go_samples,
    go_test,
    graph_from_invariant,
    min_norm_graph,
    natural_reductivity_analysis,
)
from .homspace import CLOSURE_TOL, EnergyForm, decomposition_residuals, load_model, model_to_dict, read_json
from .liealg import JACOBI_TOL, StructureTensor
from .liepoisson import casimir_drift, integrate, write_trajectory_csv

EXIT_OK, EXIT_INVALID, EXIT_NEGATIVE, EXIT_NUMERICAL = 0, 1, 2, 3


@dataclasses.dataclass
class RunConfig:
    command: str
    model_path: str | None
    samples: int
    seed: int
    tol: float | None
    alpha: float | None
    beta: float | None
    output: str | None
    args: dict

    def __post_init__(self):
        if self.samples < 1:
            raise InvalidInputError("--samples must be >= 1")
        if self.tol is not None and not self.tol > 0:
            raise InvalidInputError("--tol must be positive")


def parse_coords(text: str, expected: int, name: str) -> np.ndarray:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise InvalidInputError(f"{name}: could not parse {text!r} as comma-separated numbers") from None
    if len(vals) != expected:
        raise InvalidInputError(f"{name}: expected {expected} coordinates, got {len(vals)}")
    return np.array(vals)


def _load(cfg: RunConfig, validate: bool = True):
    """Model from ``--model``, or the built-in SU(3)/SU(2) with ``--alpha/--beta``."""
    if cfg.model_path is None:
        model, form = su3.builtin_su3_su2(cfg.alpha if cfg.alpha is not None else 1.0,
                                          cfg.beta if cfg.beta is not None else 1.0)
        return model, form, su3.builtin_polynomials()
    return load_model(cfg.model_path, validate=validate)


def _need_form(form):
    if form is None:
        raise InvalidInputError("model file has no 'form' field")
    return form


def cmd_su3(cfg, args):
    model, form = su3.builtin_su3_su2(cfg.alpha if cfg.alpha is not None else 1.0,
                                      cfg.beta if cfg.beta is not None else 1.0)
    return model_to_dict(model, form, su3.builtin_polynomials()), EXIT_OK


def cmd_validate(cfg, args):
    if cfg.model_path is None:
        model, form = su3.builtin_su3_su2(cfg.alpha or 1.0, cfg.beta or 1.0)
        alg, k, m = model.algebra, model.k_indices, model.m_indices
    else:
        data = read_json(cfg.model_path)
        alg = StructureTensor.from_dict(data, validate=False)
        k, m = data.get("k", []), data.get("m", list(range(alg.dim)))
        form = EnergyForm.from_dict(data["form"], len(m)) if "form" in data else None
    jac = alg.jacobi_residual()
    tol = cfg.tol if cfg.tol is not None else JACOBI_TOL
    closure, reductive = decomposition_residuals(alg, k, m)
    report = {
        "dim": alg.dim,
        "antisymmetric": True,
        "jacobi_residual": jac,
        "jacobi_ok": jac <= tol,
        "k_closure_residual": closure,
        "k_closed": closure <= CLOSURE_TOL,
        "reductive_residual": reductive,
        "reductive_verified": reductive <= CLOSURE_TOL,
    }
    if form is not None and form.kind == "quadratic":
        report["form_positive_definite"] = form.is_positive_definite()
    problems = []
    if jac > tol:
        problems.append(f"jacobi_residual={jac:.6e} exceeds {tol:.1e}")
    if closure > CLOSURE_TOL:
        problems.append(f"k_closure_residual={closure:.6e}: k is not a subalgebra")
    if problems:
        print("invalid model: " + "; ".join(problems), file=sys.stderr)
        return report, EXIT_INVALID
    return report, EXIT_OK


def cmd_equilibria(cfg, args):
    model, form, _ = _load(cfg)
    p = parse_coords(args.p, model.dim_m, "--p")
    sol = solve_equilibria_at(model, _need_form(form), p, tol=cfg.tol)
    return sol.to_dict(model.algebra.basis_labels), EXIT_OK


def cmd_go_test(cfg, args):
    model, form, _ = _load(cfg)
    rep = go_test(model, _need_form(form), cfg.samples, cfg.seed, cfg.tol)
    return rep.to_dict(), EXIT_NEGATIVE if rep.verdict == NOT_GO else EXIT_OK


def cmd_graph(cfg, args):
    model, form, polys = _load(cfg)
    p = parse_coords(args.p, model.dim_m, "--p")
    if args.from_invariant:
        if args.from_invariant not in polys:
            raise InvalidInputError(f"unknown invariant {args.from_invariant!r}; available: {sorted(polys)}")
        sample = graph_from_invariant(model, polys[args.from_invariant], p, tol=cfg.tol)
    else:
        sample = min_norm_graph(model, _need_form(form), p, tol=cfg.tol)
    return sample.to_dict(), EXIT_OK


def cmd_natred(cfg, args):
    model, form, _ = _load(cfg)
    tol = cfg.tol if cfg.tol is not None else 1e-8
    rep = natural_reductivity_analysis(model, _need_form(form), n_fit=args.n_fit, n_verify=args.n_verify,
                                       seed=cfg.seed, tol=tol, go_samples_count=cfg.samples)
    return rep.to_dict(), EXIT_NEGATIVE if rep.verdict == NOT_NR else EXIT_OK


def cmd_co_check(cfg, args):
    model, form, _ = _load(cfg)
    form = _need_form(form)
    if args.p:
        pts = parse_coords(args.p, model.dim_m, "--p")[None, :]
    else:
        pts = go_samples(model.dim_m, cfg.samples, cfg.seed)
    res = [co_condition_residual(model, form, p) for p in pts]
    worst = int(np.argmax(res))
    return {"samples_tested": len(res), "max_residual": res[worst], "worst_p": pts[worst].tolist()}, EXIT_OK


def cmd_derived_series(cfg, args):
    model, _, _ = _load(cfg)
    series = model.algebra.derived_series()
    return {
        "ranks": [s.rank for s in series],
        "solvable": series[-1].rank == 0,
        "length": len(series),
    }, EXIT_OK


def cmd_orbit_search(cfg, args):
    model, form, _ = _load(cfg)
    form_l = legendre_to_hamiltonian(_need_form(form))
    a0 = parse_coords(args.a0, model.dim, "--a0")
    tol = cfg.tol if cfg.tol is not None else 1e-8
    a = orbit_extremum_search(model, form_l, a0, max_iter=args.max_iter, step=args.step, tol=tol,
                              maximize=args.maximize)
    return {"a": a.tolist(), "residual": lagrangian_equilibrium_residual(model, form_l, a)}, EXIT_OK


def cmd_lp_integrate(cfg, args):
    model, _, polys = _load(cfg)
    if args.h not in polys:
        raise InvalidInputError(f"unknown function {args.h!r}; available: {sorted(polys)}")
    mu0 = parse_coords(args.mu0, model.dim, "--mu0")
    traj = integrate(model.algebra, polys[args.h], mu0, args.dt, args.t_end)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            write_trajectory_csv(traj, fh)
    names = sorted(polys)
    drift = casimir_drift(traj, [polys[k] for k in names])
    return {
        "steps": len(traj),
        "final_t": traj[-1].t,
        "final_mu": traj[-1].mu.tolist(),
        "drift": dict(zip(names, drift)),
    }, EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "equilibria": cmd_equilibria,
    "go-test": cmd_go_test,
    "graph": cmd_graph,
    "natred": cmd_natred,
    "co-check": cmd_co_check,
    "derived-series": cmd_derived_series,
    "orbit-search": cmd_orbit_search,
    "lp-integrate": cmd_lp_integrate,
    "su3": cmd_su3,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", dest="model_path", help="model JSON file (default: built-in SU(3)/SU(2))")
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--alpha", type=float, default=None)
    common.add_argument("--beta", type=float, default=None)
    common.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="gospace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="Jacobi, closure and reductivity diagnostics")
    sp = sub.add_parser("equilibria", parents=[common], help="affine set of equilibrium vectors at p")
    sp.add_argument("--p", required=True)
    sub.add_parser("go-test", parents=[common], help="sampled geodesic-orbit test")
    sp = sub.add_parser("graph", parents=[common], help="geodesic graph value at p")
    sp.add_argument("--p", required=True)
    sp.add_argument("--from-invariant", default=None)
    sp = sub.add_parser("natred", parents=[common], help="natural reductivity analysis")
    sp.add_argument("--n-fit", type=int, default=50)
    sp.add_argument("--n-verify", type=int, default=50)
    sp = sub.add_parser("co-check", parents=[common], help="coadjoint condition residual")
    sp.add_argument("--p", default=None)
    sub.add_parser("derived-series", parents=[common], help="derived series ranks and solvability")
    sp = sub.add_parser("orbit-search", parents=[common], help="extremum search on an adjoint orbit")
    sp.add_argument("--a0", required=True)
    sp.add_argument("--max-iter", type=int, default=10_000)
    sp.add_argument("--step", type=float, default=0.5)
    sp.add_argument("--maximize", action="store_true")
    sp = sub.add_parser("lp-integrate", parents=[common], help="RK4 Lie-Poisson trajectory")
    sp.add_argument("--h", required=True)
    sp.add_argument("--mu0", required=True)
    sp.add_argument("--dt", type=float, required=True)
    sp.add_argument("--t-end", type=float, required=True)
    sp.add_argument("--csv", default=None, help="also write the trajectory as CSV")
    sub.add_parser("su3", parents=[common], help="emit the built-in SU(3)/SU(2) model file")
    return parser


_GLOBAL_KEYS = {"command", "model_path", "samples", "seed", "tol", "alpha", "beta", "output"}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    extra = {k: v for k, v in sorted(vars(ns).items()) if k not in _GLOBAL_KEYS}
    try:
        cfg = RunConfig(ns.command, ns.model_path, ns.samples, ns.seed, ns.tol, ns.alpha, ns.beta,
                        ns.output, extra)
        report, code = COMMANDS[ns.command](cfg, ns)
    except (InvalidInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NoConvergenceError, DivergenceError, ConsistencyError, NoEquilibriumError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except GospaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if ns.command != "su3":
        report = {"config": dataclasses.asdict(cfg), "result": report}
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
