"""Homogeneous-space models G/K at the origin.

The isotropy algebra ``k`` and its complement ``m`` are spanned by basis
vectors, picked out by index sets. The evaluation map ``f : g -> T_oM`` is the
coordinate projection onto ``m``; its transpose ``f*`` pads a covector on
``m`` with zeros.
"""

from __future__ import annotations

import dataclasses
import json
import warnings
from typing import Sequence

import numpy as np

from .errors import InvalidInputError
from .liealg import StructureTensor, SubspaceBasis, numerical_rank
from .polynomial import Polynomial

CLOSURE_TOL = 1e-10


def decomposition_residuals(algebra: StructureTensor, k_indices, m_indices) -> tuple[float, float]:
    """Largest m-component of ``[k, k]`` and largest k-component of ``[k, m]``."""
    kk, mm = list(k_indices), list(m_indices)
    if not kk or not mm:
        return 0.0, 0.0
    c = algebra.c
    return (float(np.max(np.abs(c[np.ix_(kk, kk, mm)]))),
            float(np.max(np.abs(c[np.ix_(kk, mm, kk)]))))


class HomogeneousModel:
    def __init__(self, algebra: StructureTensor, k_indices: Sequence[int], m_indices: Sequence[int]):
        n = algebra.dim
        k = tuple(int(i) for i in k_indices)
        m = tuple(int(i) for i in m_indices)
        if len(set(k)) != len(k) or len(set(m)) != len(m):
            raise InvalidInputError("index sets for k and m contain repeats")
        if set(k) & set(m):
            raise InvalidInputError("k and m index sets overlap")
        if set(k) | set(m) != set(range(n)):
            raise InvalidInputError(f"k and m index sets must partition 0..{n - 1}")
        if not m:
            raise InvalidInputError("m must be non-empty")
        self.algebra = algebra
        self.k_indices = k
        self.m_indices = m
        self.k_closure_residual, self.reductive_residual = decomposition_residuals(algebra, k, m)
        if self.k_closure_residual > CLOSURE_TOL:
            raise InvalidInputError(
                f"k is not a subalgebra: [k,k] has m-components up to {self.k_closure_residual:.3e}")
        self.reductive_verified = self.reductive_residual <= CLOSURE_TOL
        # ker f = k by construction, so rank f = dim m.
        self.f_rank = numerical_rank(self.f_matrix())

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def dim_m(self) -> int:
        return len(self.m_indices)

    def f_matrix(self) -> np.ndarray:
        mat = np.zeros((self.dim_m, self.dim))
        mat[np.arange(self.dim_m), list(self.m_indices)] = 1.0
        return mat

    def f_apply(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        if a.shape != (self.dim,):
            raise InvalidInputError(f"algebra vector must have length {self.dim}")
        return a[list(self.m_indices)].copy()

    def f_star(self, p) -> np.ndarray:
        p = self._check_p(p)
        out = np.zeros(self.dim)
        out[list(self.m_indices)] = p
        return out

    def embed_m(self, v) -> np.ndarray:
        """Zero-padded inclusion of an m-coordinate vector into g."""
        return self.f_star(v)

    def k_basis(self) -> SubspaceBasis:
        return SubspaceBasis(np.eye(self.dim)[list(self.k_indices)].reshape(-1, self.dim))

    def isotropy_action_on_m_dual(self, k) -> np.ndarray:
        """Matrix of ``p -> (coad_k f*(p))|_m`` on m-coordinates."""
        co = self.algebra.coad_matrix(k)
        mm = list(self.m_indices)
        return co[np.ix_(mm, mm)]

    def _check_p(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim_m,):
            raise InvalidInputError(f"covector at the origin must have length {self.dim_m}, got {p.shape}")
        return p

    def to_dict(self) -> dict:
        out = self.algebra.to_dict()
        out["k"] = list(self.k_indices)
        out["m"] = list(self.m_indices)
        return out

    def __repr__(self):
        labels = self.algebra.basis_labels
        return (f"HomogeneousModel(k={[labels[i] for i in self.k_indices]}, "
                f"m={[labels[i] for i in self.m_indices]})")


@dataclasses.dataclass(frozen=True, eq=False)
class EnergyForm:
    """An energy function on the (co)tangent space at the origin.

    ``kind="quadratic"`` means ``v -> 1/2 v^T S v``; ``kind="polynomial"``
    stores a :class:`Polynomial` in the m-coordinates.
    """

    kind: str
    matrix: np.ndarray | None = None
    poly: Polynomial | None = None

    def __post_init__(self):
        if self.kind == "quadratic":
            s = np.asarray(self.matrix, dtype=float)
            if s.ndim != 2 or s.shape[0] != s.shape[1]:
                raise InvalidInputError("quadratic form needs a square matrix")
            if not np.array_equal(s, s.T):
                raise InvalidInputError("quadratic form matrix must be exactly symmetric")
            s = s.copy()
            s.setflags(write=False)
            object.__setattr__(self, "matrix", s)
        elif self.kind == "polynomial":
            if not isinstance(self.poly, Polynomial):
                raise InvalidInputError("polynomial form needs a Polynomial")
        else:
            raise InvalidInputError(f"unsupported energy form kind {self.kind!r}")

    @classmethod
    def quadratic(cls, matrix) -> "EnergyForm":
        return cls("quadratic", matrix=matrix)

    @classmethod
    def polynomial(cls, poly: Polynomial) -> "EnergyForm":
        return cls("polynomial", poly=poly)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0] if self.kind == "quadratic" else self.poly.nvars

    def value(self, p) -> float:
        p = np.asarray(p, dtype=float)
        if self.kind == "quadratic":
            return float(0.5 * p @ self.matrix @ p)
        return self.poly(p)

    def gradient(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise InvalidInputError(f"expected {self.dim} coordinates, got shape {p.shape}")
        if self.kind == "quadratic":
            return self.matrix @ p
        return self.poly.gradient(p)

    def scale(self, p) -> float:
        """Magnitude used for scale-aware tolerances (``||S||`` or ``||grad||``)."""
        if self.kind == "quadratic":
            return float(np.linalg.norm(self.matrix, 2))
        return float(np.linalg.norm(self.gradient(p)))

    def as_polynomial(self) -> Polynomial:
        return Polynomial.quadratic(self.matrix) if self.kind == "quadratic" else self.poly

    def is_positive_definite(self) -> bool:
        if self.kind != "quadratic":
            raise InvalidInputError("definiteness is only defined for quadratic forms")
        return bool(np.all(np.linalg.eigvalsh(self.matrix) > 0))

    def to_dict(self) -> dict:
        if self.kind == "quadratic":
            return {"kind": "quadratic", "matrix": self.matrix.tolist()}
        return {"kind": "polynomial", "terms": self.poly.terms()}

    @classmethod
    def from_dict(cls, data, dim: int) -> "EnergyForm":
        if not isinstance(data, dict) or "kind" not in data:
            raise InvalidInputError("field 'form' must be an object with a 'kind'")
        kind = data["kind"]
        if kind == "quadratic":
            if "matrix" not in data:
                raise InvalidInputError("field 'form.matrix' missing")
            try:
                mat = np.array(data["matrix"], dtype=float)
            except (TypeError, ValueError):
                raise InvalidInputError("field 'form.matrix' is not a numeric matrix") from None
            if mat.shape != (dim, dim):
                raise InvalidInputError(f"field 'form.matrix' must be {dim}x{dim}, got {mat.shape}")
            return cls.quadratic(mat)
        if kind == "polynomial":
            if "terms" not in data:
                raise InvalidInputError("field 'form.terms' missing")
            return cls.polynomial(Polynomial.from_terms(dim, data["terms"]))
        raise InvalidInputError(f"field 'form.kind' has unsupported value {kind!r}")


def f_apply(model: HomogeneousModel, a) -> np.ndarray:
    return model.f_apply(a)


def f_star(model: HomogeneousModel, p) -> np.ndarray:
    return model.f_star(p)


def gradient(form: EnergyForm, p) -> np.ndarray:
    return form.gradient(p)


def induced_form(model: HomogeneousModel, h: Polynomial) -> EnergyForm:
    """The form ``h o f*`` on the m-coordinates."""
    if h.nvars != model.dim:
        raise InvalidInputError("invariant polynomial must live on g*")
    return EnergyForm.polynomial(h.restrict(model.m_indices))


def ad_star_invariance_residual(algebra: StructureTensor, h: Polynomial,
                                samples: int = 100, seed: int = 0) -> float:
    """Largest derivative of ``h`` along coadjoint directions ``ad*_a mu``.

    Probes are standard normal ``(mu, a)`` pairs drawn from a Philox stream.
    """
    if samples < 1:
        raise InvalidInputError("samples must be >= 1")
    rng = np.random.Generator(np.random.Philox(seed))
    worst = 0.0
    for _ in range(samples):
        mu = rng.standard_normal(algebra.dim)
        a = rng.standard_normal(algebra.dim)
        worst = max(worst, abs(float(h.gradient(mu) @ (algebra.coad_matrix(a) @ mu))))
    return worst


def isotropy_invariance_residual(model: HomogeneousModel, form: EnergyForm,
                                 samples: int = 50, seed: int = 0) -> float:
    """Largest derivative of the form along the isotropy action on m*.

    Zero for every Ad*(K)-invariant form; this is the checkable necessary
    condition for the form to extend to a G-invariant Hamiltonian.
    """
    if not model.k_indices:
        return 0.0
    rng = np.random.Generator(np.random.Philox(seed))
    kb = model.k_basis().vectors
    worst = 0.0
    for _ in range(samples):
        p = rng.standard_normal(model.dim_m)
        g = form.gradient(p)
        for k in kb:
            worst = max(worst, abs(float(g @ (model.isotropy_action_on_m_dual(k) @ p))))
    return worst


def aligned_model(algebra: StructureTensor, k_vectors, m_vectors, labels=None):
    """Change basis so that ``k`` and ``m`` become coordinate subspaces.

    ``k_vectors`` and ``m_vectors`` are row-stacked bases that together span g.
    Returns the model in the new basis and the change-of-basis matrix, whose
    columns are the new basis vectors in old coordinates.
    """
    kv = np.atleast_2d(np.asarray(k_vectors, dtype=float)).reshape(-1, algebra.dim)
    mv = np.atleast_2d(np.asarray(m_vectors, dtype=float)).reshape(-1, algebra.dim)
    p = np.vstack([kv, mv]).T
    new = algebra.change_basis(p, labels)
    nk = kv.shape[0]
    return HomogeneousModel(new, range(nk), range(nk, algebra.dim)), p


def model_from_dict(data: dict, *, validate: bool = True):
    """Parse the model JSON document into ``(model, form, polynomials)``.

    ``form`` is ``None`` when the document has no ``form`` field;
    ``polynomials`` maps names to polynomials on g* (optional field
    ``polynomials``).
    """
    if not isinstance(data, dict):
        raise InvalidInputError("model document must be a JSON object")
    algebra = StructureTensor.from_dict(data, validate=validate)
    for key in ("k", "m"):
        if key not in data:
            raise InvalidInputError(f"missing field '{key}'")
        if not isinstance(data[key], list) or not all(isinstance(i, int) for i in data[key]):
            raise InvalidInputError(f"field '{key}' must be a list of integer indices")
    model = HomogeneousModel(algebra, data["k"], data["m"])
    form = EnergyForm.from_dict(data["form"], model.dim_m) if "form" in data else None
    polys = {}
    for name, terms in (data.get("polynomials") or {}).items():
        polys[str(name)] = Polynomial.from_terms(algebra.dim, terms)
    return model, form, polys


def model_to_dict(model: HomogeneousModel, form: EnergyForm | None = None,
                  polynomials: dict | None = None) -> dict:
    out = model.to_dict()
    if form is not None:
        out["form"] = form.to_dict()
    if polynomials:
        out["polynomials"] = {name: p.terms() for name, p in polynomials.items()}
    return out


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_model(path, *, validate: bool = True):
    return model_from_dict(read_json(path), validate=validate)


def warn_if_indefinite(form: EnergyForm) -> bool:
    """Warn and return True when a quadratic form is not positive definite."""
    if form.kind == "quadratic" and not form.is_positive_definite():
        warnings.warn("quadratic form is not positive definite (pseudo-Riemannian case)", stacklevel=2)
        return True
    return False
