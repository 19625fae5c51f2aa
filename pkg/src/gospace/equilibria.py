"""Relative-equilibrium vectors at the origin.

For a momentum ``p`` at the origin, ``a`` in g is a relative-equilibrium
vector iff

    f(a) = dH_o(p)                         (velocity rows)
    (f*(p) | [a, b_j]) = 0  for every j     (stabilizer rows)

Both are linear in ``a``, so the solutions form an affine subspace. It is
returned as the minimum-norm particular solution plus an orthonormal kernel
basis, both read off one SVD.
"""

from __future__ import annotations

import dataclasses

import numpy as np
import scipy.linalg

from .errors import DegenerateLagrangianError, InvalidInputError, NoConvergenceError
from .homspace import EnergyForm, HomogeneousModel
from .liealg import SubspaceBasis, rank_cutoff


@dataclasses.dataclass(frozen=True, eq=False)
class AffineSolutionSet:
    solvable: bool
    particular: np.ndarray
    nullspace: SubspaceBasis
    residual: float
    rank: int
    tol: float

    def point(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.nullspace.rank == 0:
            return self.particular.copy()
        return self.particular + t @ self.nullspace.vectors

    def to_dict(self, labels=None) -> dict:
        out = {
            "solvable": self.solvable,
            "particular": self.particular.tolist(),
            "nullspace": self.nullspace.vectors.tolist(),
            "nullspace_rank": self.nullspace.rank,
            "residual": self.residual,
            "rank": self.rank,
            "tol": self.tol,
        }
        if labels is not None:
            out["basis"] = list(labels)
        return out


def default_tol(form: EnergyForm, p) -> float:
    p = np.asarray(p, dtype=float)
    return 1e-9 * (1.0 + float(np.linalg.norm(p)) + form.scale(p))


def stabilizer_rows(model: HomogeneousModel, p) -> np.ndarray:
    """Row ``j`` maps ``a`` to ``(f*(p) | [a, e_j])``."""
    mu = model.f_star(p)
    return np.einsum("kji,i->jk", model.algebra.c, mu)


def equilibrium_system(model: HomogeneousModel, form: EnergyForm, p):
    """Stacked matrix and right-hand side of the equilibrium equations at ``p``."""
    p = model._check_p(p)
    if form.dim != model.dim_m:
        raise InvalidInputError(f"form acts on {form.dim} coordinates but dim m = {model.dim_m}")
    mat = np.vstack([model.f_matrix(), stabilizer_rows(model, p)])
    rhs = np.concatenate([form.gradient(p), np.zeros(model.dim)])
    return mat, rhs


def equilibrium_residuals(model: HomogeneousModel, form: EnergyForm, p, a) -> tuple[float, float]:
    """Max-abs residuals ``(velocity, stabilizer)`` of a candidate ``a`` at ``p``."""
    a = np.asarray(a, dtype=float)
    vel = float(np.max(np.abs(model.f_apply(a) - form.gradient(p))))
    sta = float(np.max(np.abs(stabilizer_rows(model, p) @ a)))
    return vel, sta


def membership_residual(model, form, p, a) -> float:
    return max(equilibrium_residuals(model, form, p, a))


def solve_equilibria_at(model: HomogeneousModel, form: EnergyForm, p,
                        tol: float | None = None, rank_tol: float | None = None) -> AffineSolutionSet:
    """Affine set of relative-equilibrium vectors at the momentum ``p``.

    The system is consistent iff the right-hand side has no component
    outside the column space of the stacked matrix, i.e. iff
    ``rank(M) == rank([M | rhs])``; the norm of that component is the
    least-squares residual and is compared against ``tol``.
    ``rank_tol`` overrides the singular-value cutoff used for ``rank(M)``.
    """
    p = model._check_p(p)
    if tol is None:
        tol = default_tol(form, p)
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    mat, rhs = equilibrium_system(model, form, p)
    u, s, vt = np.linalg.svd(mat, full_matrices=True)
    r = int(np.sum(s > rank_cutoff(s, mat.shape, rank_tol)))
    coeffs = u[:, :r].T @ rhs
    particular = vt[:r].T @ (coeffs / s[:r])
    residual = float(np.linalg.norm(mat @ particular - rhs))
    return AffineSolutionSet(
        solvable=residual <= tol,
        particular=particular,
        nullspace=SubspaceBasis(vt[r:].copy()),
        residual=residual,
        rank=r,
        tol=float(tol),
    )


def lagrangian_equilibrium_residual(model: HomogeneousModel, form_l: EnergyForm, a) -> float:
    """Lagrangian geodesic-lemma residual ``max_j |(dL_o(f(a)) | f([a, e_j]))|``."""
    a = np.asarray(a, dtype=float)
    dl = form_l.gradient(model.f_apply(a))
    ad = model.algebra.ad_matrix(a)
    return float(np.max(np.abs(dl @ ad[list(model.m_indices), :])))


def legendre_to_hamiltonian(form: EnergyForm, cond_limit: float = 1e12) -> EnergyForm:
    """Legendre transform of ``1/2 v^T G v``: the form ``1/2 p^T G^-1 p``.

    The transform is an involution, so the same call maps Hamiltonians back
    to Lagrangians.
    """
    if form.kind != "quadratic":
        raise InvalidInputError("Legendre transform is implemented for quadratic forms only")
    g = form.matrix
    if g.size == 0:
        return EnergyForm.quadratic(g)
    s = np.linalg.svd(g, compute_uv=False)
    if s[-1] == 0.0 or s[0] / s[-1] > cond_limit:
        raise DegenerateLagrangianError("quadratic form is singular; Legendre transform undefined")
    inv = np.linalg.inv(g)
    return EnergyForm.quadratic(0.5 * (inv + inv.T))


def orbit_extremum_search(model: HomogeneousModel, form_l: EnergyForm, a0, *, max_iter: int = 10_000,
                          step: float = 0.5, tol: float = 1e-8, maximize: bool = False) -> np.ndarray:
    """Search the adjoint orbit of ``a0`` for a critical point of ``L_o o f``.

    Each step moves ``a`` by ``exp(ad_b)`` with ``b = -eta * ad_a^T grad``,
    the steepest-descent (or ascent) generator; the move stays on the orbit
    exactly. The step is halved until the objective improves. Stops when the
    Lagrangian residual drops to ``tol``.
    """
    a = np.asarray(a0, dtype=float).copy()
    if a.shape != (model.dim,):
        raise InvalidInputError(f"a0 must have length {model.dim}")
    if not np.any(a):
        raise InvalidInputError("a0 must be non-zero")
    sign = -1.0 if maximize else 1.0
    alg = model.algebra
    mm = list(model.m_indices)

    def objective(x):
        return sign * form_l.value(model.f_apply(x))

    def orbit_gradient(x):
        # derivative of the objective along [b, x] = -ad_x b, as a vector in b
        grad_g = np.zeros(model.dim)
        grad_g[mm] = form_l.gradient(model.f_apply(x))
        return -sign * alg.ad_matrix(x).T @ grad_g

    res = lagrangian_equilibrium_residual(model, form_l, a)
    best, best_res = a.copy(), res
    eta = float(step)
    fa = objective(a)
    for _ in range(max_iter):
        if res <= tol:
            return a
        g = orbit_gradient(a)
        moved = False
        while eta > 1e-16:
            b = -eta * g
            cand = scipy.linalg.expm(alg.ad_matrix(b)) @ a
            fc = objective(cand)
            if fc < fa:
                a, fa, moved = cand, fc, True
                break
            eta *= 0.5
        if not moved:
            break
        eta = min(2.0 * eta, float(step))
        res = lagrangian_equilibrium_residual(model, form_l, a)
        if res < best_res:
            best, best_res = a.copy(), res
    if res <= tol:
        return a
    raise NoConvergenceError(
        f"orbit search stopped with residual {best_res:.3e} > {tol:.1e}", best=best, residual=best_res)
