"""Geodesic-orbit verdicts, geodesic graphs and natural-reductivity diagnostics.

All verdicts here are evidence-grade: they are built from finitely many
seeded samples and cannot prove a statement about every momentum.
"""

from __future__ import annotations

import dataclasses
import itertools
import warnings

import numpy as np

from .equilibria import (
    AffineSolutionSet,
    default_tol,
    membership_residual,
    solve_equilibria_at,
)
from .errors import ConsistencyError, InvalidInputError, NoEquilibriumError
from .homspace import EnergyForm, HomogeneousModel, induced_form
from .liealg import null_space, row_space
from .polynomial import Polynomial

GO, NOT_GO, INCONCLUSIVE = "go", "not_go", "inconclusive"
NR_EVIDENCE, NOT_NR = "naturally_reductive_evidence", "not_naturally_reductive"

EVIDENCE_NOTE = ("verdict is based on finitely many samples and is evidence, "
                 "not a proof, of the property for all momenta")


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; identical streams on every platform."""
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclasses.dataclass
class GoReport:
    verdict: str
    samples_tested: int
    counterexample: np.ndarray | None
    max_residual: float
    seed: int
    unsolvable: int = 0
    tol: float | None = None
    note: str = EVIDENCE_NOTE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "samples_tested": self.samples_tested,
            "unsolvable": self.unsolvable,
            "counterexample": None if self.counterexample is None else self.counterexample.tolist(),
            "max_residual": self.max_residual,
            "seed": self.seed,
            "tol": self.tol,
            "note": self.note,
        }


@dataclasses.dataclass
class GraphSample:
    p: np.ndarray
    xi: np.ndarray
    q_norm: float
    uniqueness_rank: int
    membership_residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "p": self.p.tolist(),
            "xi": self.xi.tolist(),
            "q_norm": self.q_norm,
            "uniqueness_rank": self.uniqueness_rank,
            "membership_residual": self.membership_residual,
        }


@dataclasses.dataclass
class NatRedReport:
    verdict: str
    linear_candidate: np.ndarray | None
    fit_residual: float
    additivity_violation: float
    equivariance_residual: float = float("nan")
    membership_residual: float = float("nan")
    tol: float | None = None
    seed: int = 0
    note: str = EVIDENCE_NOTE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "linear_candidate": None if self.linear_candidate is None else self.linear_candidate.tolist(),
            "fit_residual": self.fit_residual,
            "additivity_violation": self.additivity_violation,
            "equivariance_residual": self.equivariance_residual,
            "membership_residual": self.membership_residual,
            "tol": self.tol,
            "seed": self.seed,
            "note": self.note,
        }


def go_samples(dim_m: int, n_samples: int, seed: int, pinned=()) -> np.ndarray:
    """Unit Gaussian directions, coordinate axes, pairwise axis sums, then pinned points."""
    rng = make_rng(seed)
    g = rng.standard_normal((n_samples, dim_m))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    eye = np.eye(dim_m)
    pairs = [eye[i] + eye[j] for i, j in itertools.combinations(range(dim_m), 2)]
    rows = [g, eye]
    if pairs:
        rows.append(np.array(pairs))
    pinned = np.asarray(pinned, dtype=float).reshape(-1, dim_m)
    if pinned.size:
        rows.append(pinned)
    return np.vstack(rows)


def go_test(model: HomogeneousModel, form: EnergyForm, n_samples: int = 1000, seed: int = 0,
            tol: float | None = None, pinned=()) -> GoReport:
    """Sampled check that every momentum at the origin admits an equilibrium vector.

    A sample counts as unsolvable when its least-squares residual exceeds
    the tolerance; the verdict is ``not_go`` only if some sample fails even
    at ten times the tolerance, ``inconclusive`` if failures are marginal.
    ``tol=None`` uses the per-sample scale-aware default.
    """
    if not isinstance(n_samples, (int, np.integer)) or n_samples < 1:
        raise InvalidInputError("n_samples must be a positive integer")
    if tol is not None and not tol > 0:
        raise InvalidInputError("tol must be positive")
    samples = go_samples(model.dim_m, int(n_samples), seed, pinned)
    unsolvable = 0
    worst = 0.0
    worst_ratio = 0.0
    counterexample = None
    for p in samples:
        t = default_tol(form, p) if tol is None else tol
        sol = solve_equilibria_at(model, form, p, tol=t)
        worst = max(worst, sol.residual)
        if not sol.solvable:
            unsolvable += 1
        ratio = sol.residual / t
        if ratio > 10.0 and ratio > worst_ratio:
            worst_ratio = ratio
            counterexample = p.copy()
    if counterexample is not None:
        verdict = NOT_GO
    elif unsolvable:
        verdict = INCONCLUSIVE
    else:
        verdict = GO
    return GoReport(verdict, len(samples), counterexample, worst, int(seed), unsolvable, tol)


def _q_minimal(sol: AffineSolutionSet, q: np.ndarray) -> np.ndarray:
    x0 = sol.particular
    n = sol.nullspace.vectors.T
    if n.shape[1] == 0:
        return x0.copy()
    t = np.linalg.solve(n.T @ q @ n, -(n.T @ q @ x0))
    return x0 + n @ t


def min_norm_graph(model: HomogeneousModel, form: EnergyForm, p, q=None,
                   tol: float | None = None, check_invariance: bool = True) -> GraphSample:
    """The Q-smallest relative-equilibrium vector at ``p``.

    ``q`` defaults to the identity. If ``q`` is not infinitesimally
    invariant under the isotropy algebra a warning is emitted, because the
    resulting graph need not be K-equivariant.
    """
    p = model._check_p(p)
    q = np.eye(model.dim) if q is None else np.asarray(q, dtype=float)
    if q.shape != (model.dim, model.dim):
        raise InvalidInputError("Q must be an n x n matrix")
    if check_invariance and model.k_indices:
        inv = model.algebra.infinitesimal_invariance_residual(q, model.k_basis())
        if inv > 1e-10:
            warnings.warn(f"Q is not Ad(K)-invariant (residual {inv:.2e}); graph may not be equivariant",
                          stacklevel=2)
    sol = solve_equilibria_at(model, form, p, tol=tol)
    if not sol.solvable:
        raise NoEquilibriumError(f"no relative equilibrium at p (residual {sol.residual:.3e})", sol.residual)
    xi = _q_minimal(sol, q)
    return GraphSample(p.copy(), xi, float(np.sqrt(xi @ q @ xi)), sol.nullspace.rank,
                       membership_residual(model, form, p, xi))


def graph_from_invariant(model: HomogeneousModel, h: Polynomial, p, tol: float | None = None) -> GraphSample:
    """Graph value ``dh(f*(p))`` from an Ad*-invariant polynomial ``h`` on g*.

    Checked against the equilibrium equations of the induced form ``h o f*``;
    a failure means ``h`` is not invariant.
    """
    p = model._check_p(p)
    xi = h.gradient(model.f_star(p))
    form = induced_form(model, h)
    sol = solve_equilibria_at(model, form, p, tol=tol)
    res = membership_residual(model, form, p, xi)
    if res > sol.tol:
        raise ConsistencyError(f"dh(f*(p)) is not an equilibrium vector (residual {res:.3e}); "
                               "is h Ad*-invariant?", res)
    return GraphSample(p.copy(), xi, float(np.linalg.norm(xi)), sol.nullspace.rank, res)


def co_condition_residual(model: HomogeneousModel, form: EnergyForm, p) -> float:
    """Worst ``|(dh_o(p) | w)|`` over coadjoint directions ``w = ad*_a f*(p)`` lying in m*."""
    p = model._check_p(p)
    b = model.f_star(p)
    alg = model.algebra
    # column k: coad(e_k) b
    w = np.column_stack([alg.coad_matrix(e) @ b for e in np.eye(model.dim)])
    kk, mm = list(model.k_indices), list(model.m_indices)
    allowed = null_space(w[kk, :]).T if kk else np.eye(model.dim)
    if allowed.shape[1] == 0:
        return 0.0
    directions = row_space((w[mm, :] @ allowed).T)
    if directions.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(directions @ form.gradient(p))))


def _isotropy_equivariance_residual(model: HomogeneousModel, lin: np.ndarray) -> float:
    worst = 0.0
    for k in model.k_basis().vectors:
        lhs = lin @ model.isotropy_action_on_m_dual(k)
        rhs = model.algebra.ad_matrix(k) @ lin
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def natural_reductivity_analysis(model: HomogeneousModel, form: EnergyForm, n_fit: int = 50,
                                 n_verify: int = 50, seed: int = 0, tol: float = 1e-8,
                                 go_samples_count: int = 200) -> NatRedReport:
    """Look for a K-equivariant linear geodesic graph.

    Fits a linear map to samples of the canonical min-norm graph, then checks
    on fresh samples that the fitted map still produces equilibrium vectors
    and intertwines the isotropy actions. Also reports how far the canonical
    graph is from additive.
    """
    if n_fit < 1 or n_verify < 1:
        raise InvalidInputError("n_fit and n_verify must be positive")
    go = go_test(model, form, go_samples_count, seed)
    if go.verdict != GO:
        return NatRedReport(INCONCLUSIVE, None, float("nan"), float("nan"), tol=tol, seed=seed)
    d = model.dim_m
    rng = make_rng(seed)
    fit_p = rng.standard_normal((max(n_fit, d), d))
    xis = np.array([min_norm_graph(model, form, p, check_invariance=False).xi for p in fit_p])
    sol, *_ = np.linalg.lstsq(fit_p, xis, rcond=None)
    lin = sol.T
    fit_residual = float(np.max(np.abs(fit_p @ lin.T - xis)))
    equivariance = _isotropy_equivariance_residual(model, lin)

    verify_p = rng.standard_normal((n_verify, d))
    membership = max(membership_residual(model, form, p, lin @ p) for p in verify_p)

    additivity = 0.0
    q_p = rng.standard_normal((n_verify, d))
    for p, q in zip(verify_p, q_p):
        xi_sum = min_norm_graph(model, form, p + q, check_invariance=False).xi
        xi_p = min_norm_graph(model, form, p, check_invariance=False).xi
        xi_q = min_norm_graph(model, form, q, check_invariance=False).xi
        additivity = max(additivity, float(np.linalg.norm(xi_sum - xi_p - xi_q)))

    if fit_residual < tol and equivariance < tol and membership < tol:
        verdict = NR_EVIDENCE
    elif membership > 1e3 * tol:
        verdict = NOT_NR
    else:
        verdict = INCONCLUSIVE
    return NatRedReport(verdict, lin, fit_residual, additivity, equivariance, membership, tol, seed)


def graph_homogeneity_check(model: HomogeneousModel, form: EnergyForm, p, lambdas) -> float:
    """Max over ``lam`` of ``|xi(lam p) - lam xi(p)|`` for the min-norm graph."""
    p = model._check_p(p)
    base = min_norm_graph(model, form, p, check_invariance=False).xi
    worst = 0.0
    for lam in lambdas:
        xi = min_norm_graph(model, form, float(lam) * p, check_invariance=False).xi
        worst = max(worst, float(np.linalg.norm(xi - float(lam) * base)))
    return worst
