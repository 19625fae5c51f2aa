"""Finite-dimensional real Lie algebras stored as dense structure tensors.

A tensor ``c`` of shape ``(n, n, n)`` encodes ``[e_i, e_j] = sum_k c[i, j, k] e_k``.
Vectors of the algebra and of its dual are plain numpy arrays of length ``n``;
covectors use the dual basis, so the pairing ``(mu | x)`` is ``mu @ x``.
"""

from __future__ import annotations

import dataclasses
import json
from typing import Sequence

import numpy as np

from .errors import InvalidInputError

JACOBI_TOL = 1e-10


def rank_cutoff(s: np.ndarray, shape: tuple[int, int], cutoff: float | None = None) -> float:
    """Singular-value threshold below which directions count as null."""
    if cutoff is not None:
        return float(cutoff)
    if s.size == 0:
        return 0.0
    return max(shape) * np.finfo(float).eps * float(s[0])


def numerical_rank(mat: np.ndarray, cutoff: float | None = None) -> int:
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(s > rank_cutoff(s, mat.shape, cutoff)))


def row_space(mat: np.ndarray, cutoff: float | None = None) -> np.ndarray:
    """Orthonormal basis (as rows) of the row space of ``mat``."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if mat.size == 0:
        return np.zeros((0, mat.shape[1]))
    _, s, vt = np.linalg.svd(mat, full_matrices=False)
    r = int(np.sum(s > rank_cutoff(s, mat.shape, cutoff)))
    return vt[:r]


def null_space(mat: np.ndarray, cutoff: float | None = None) -> np.ndarray:
    """Orthonormal basis (as rows) of the kernel of ``mat``."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    ncols = mat.shape[1]
    if mat.shape[0] == 0:
        return np.eye(ncols)
    _, s, vt = np.linalg.svd(mat, full_matrices=True)
    r = int(np.sum(s > rank_cutoff(s, mat.shape, cutoff)))
    return vt[r:]


@dataclasses.dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal basis of a subspace, one vector per row."""

    vectors: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def ambient_dim(self) -> int:
        return int(self.vectors.shape[1])

    @classmethod
    def spanned_by(cls, vectors, ambient_dim: int | None = None, cutoff: float | None = None):
        vecs = np.asarray(vectors, dtype=float)
        if vecs.size == 0:
            return cls(np.zeros((0, ambient_dim if ambient_dim is not None else 0)))
        return cls(row_space(np.atleast_2d(vecs), cutoff))

    def projector(self) -> np.ndarray:
        return self.vectors.T @ self.vectors

    def contains(self, x, tol: float = 1e-10) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.linalg.norm(x - self.projector() @ x) <= tol * max(1.0, np.linalg.norm(x)))


class StructureTensor:
    """Structure constants of a real Lie algebra in a fixed basis.

    Antisymmetry is always enforced. The Jacobi identity is checked when
    ``validate`` is true (the default); pass ``validate=False`` to build a
    tensor purely for diagnostics.
    """

    def __init__(self, c, basis_labels: Sequence[str] | None = None, *,
                 validate: bool = True, jacobi_tol: float = JACOBI_TOL):
        c = np.array(c, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise InvalidInputError(f"structure tensor must have shape (n, n, n), got {c.shape}")
        if not np.array_equal(c, -c.transpose(1, 0, 2)):
            raise InvalidInputError("structure tensor is not antisymmetric in its first two indices")
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("structure tensor has non-finite entries")
        n = c.shape[0]
        if basis_labels is None:
            basis_labels = [f"e{i}" for i in range(n)]
        basis_labels = [str(s) for s in basis_labels]
        if len(basis_labels) != n:
            raise InvalidInputError(f"expected {n} basis labels, got {len(basis_labels)}")
        c.setflags(write=False)
        self._c = c
        self._labels = tuple(basis_labels)
        if validate:
            res = self.jacobi_residual()
            if res > jacobi_tol:
                raise InvalidInputError(
                    f"Jacobi identity fails: jacobi_residual={res:.3e} > {jacobi_tol:.1e}")

    @classmethod
    def from_brackets(cls, dim: int, brackets, basis_labels=None, **kwargs) -> "StructureTensor":
        """Build from ``(i, j, k, value)`` entries, closing under antisymmetry.

        Entries with ``i == j`` must be zero. Giving both ``(i, j, k)`` and
        ``(j, i, k)`` is allowed only if the values agree up to sign.
        """
        dim = int(dim)
        if dim < 1:
            raise InvalidInputError("dim must be a positive integer")
        c = np.zeros((dim, dim, dim))
        seen = {}
        for entry in brackets:
            if len(entry) != 4:
                raise InvalidInputError(f"bracket entry {entry!r} must be [i, j, k, value]")
            i, j, k = (int(v) for v in entry[:3])
            val = float(entry[3])
            if not all(0 <= v < dim for v in (i, j, k)):
                raise InvalidInputError(f"bracket entry {entry!r} has an index outside 0..{dim - 1}")
            if i == j:
                if val != 0.0:
                    raise InvalidInputError(f"bracket entry {entry!r}: [e_i, e_i] must vanish")
                continue
            if i > j:
                i, j, val = j, i, -val
            key = (i, j, k)
            if key in seen and seen[key] != val:
                raise InvalidInputError(f"conflicting bracket entries for [e{i}, e{j}] component {k}")
            seen[key] = val
            c[i, j, k] = val
            c[j, i, k] = -val
        return cls(c, basis_labels, **kwargs)

    @property
    def c(self) -> np.ndarray:
        return self._c

    @property
    def dim(self) -> int:
        return self._c.shape[0]

    @property
    def basis_labels(self) -> tuple[str, ...]:
        return self._labels

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise InvalidInputError(f"expected a vector of length {self.dim}, got shape {x.shape}")
        return x

    def basis_vector(self, label_or_index) -> np.ndarray:
        idx = self._labels.index(label_or_index) if isinstance(label_or_index, str) else int(label_or_index)
        e = np.zeros(self.dim)
        e[idx] = 1.0
        return e

    def bracket(self, x, y) -> np.ndarray:
        x, y = self._check(x), self._check(y)
        return np.einsum("i,j,ijk->k", x, y, self._c)

    def ad_matrix(self, x) -> np.ndarray:
        """Matrix of ``ad_x``; column ``j`` is ``[x, e_j]``."""
        x = self._check(x)
        return np.einsum("i,ijk->kj", x, self._c)

    def coad_matrix(self, x) -> np.ndarray:
        """Matrix of the coadjoint action ``ad*_x = -(ad_x)^T`` on the dual basis."""
        return -self.ad_matrix(x).T

    def jacobi_residual(self) -> float:
        c = self._c
        t = (np.einsum("ijm,mkl->ijkl", c, c)
             + np.einsum("jkm,mil->ijkl", c, c)
             + np.einsum("kim,mjl->ijkl", c, c))
        return float(np.max(np.abs(t)))

    def span_of_brackets(self, a: np.ndarray, b: np.ndarray, cutoff: float | None = None) -> np.ndarray:
        """Orthonormal rows spanning ``[span a, span b]`` for row-stacked bases."""
        if a.shape[0] == 0 or b.shape[0] == 0:
            return np.zeros((0, self.dim))
        prods = np.einsum("pi,qj,ijk->pqk", a, b, self._c).reshape(-1, self.dim)
        return row_space(prods, cutoff)

    def derived_series(self, cutoff: float | None = None) -> list[SubspaceBasis]:
        """Terms g^(0) = g, g^(i) = [g^(i-1), g^(i-1)] until the rank stops dropping.

        The terminating term (the zero space, or the first repeat) is included,
        so an abelian algebra gives ``[g, {0}]``.
        """
        current = np.eye(self.dim)
        series = [SubspaceBasis(current)]
        while current.shape[0] > 0:
            nxt = self.span_of_brackets(current, current, cutoff)
            series.append(SubspaceBasis(nxt))
            if nxt.shape[0] == current.shape[0]:
                break
            current = nxt
        return series

    def is_solvable(self, cutoff: float | None = None) -> bool:
        return self.derived_series(cutoff)[-1].rank == 0

    def infinitesimal_invariance_residual(self, q, k_basis) -> float:
        """Worst violation of ``Q(ad_k x, y) + Q(x, ad_k y) = 0``.

        The maximum over unit ``x, y`` is the spectral norm of
        ``ad_k^T Q + Q ad_k``; ``k`` runs over the rows of ``k_basis``.
        """
        q = np.asarray(q, dtype=float)
        if q.shape != (self.dim, self.dim):
            raise InvalidInputError(f"form must be {self.dim}x{self.dim}")
        vecs = k_basis.vectors if isinstance(k_basis, SubspaceBasis) else np.atleast_2d(k_basis)
        worst = 0.0
        for k in vecs:
            ad = self.ad_matrix(k)
            worst = max(worst, float(np.linalg.norm(ad.T @ q + q @ ad, 2)))
        return worst

    def change_basis(self, new_basis, labels=None, **kwargs) -> "StructureTensor":
        """Re-express the algebra in the basis given by the columns of ``new_basis``."""
        p = np.asarray(new_basis, dtype=float)
        if p.shape != (self.dim, self.dim):
            raise InvalidInputError("change of basis must be a square matrix")
        if numerical_rank(p) < self.dim:
            raise InvalidInputError("change of basis matrix is singular")
        pinv = np.linalg.inv(p)
        c = np.einsum("ai,bj,abk,lk->ijl", p, p, self._c, pinv)
        c = 0.5 * (c - c.transpose(1, 0, 2))
        return StructureTensor(c, labels, **kwargs)

    def bracket_entries(self, atol: float = 0.0) -> list[list]:
        """Sparse ``[i, j, k, value]`` entries with ``i < j``."""
        out = []
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    v = float(self._c[i, j, k])
                    if abs(v) > atol:
                        out.append([i, j, k, v])
        return out

    def to_dict(self) -> dict:
        return {"dim": self.dim, "basis": list(self._labels), "brackets": self.bracket_entries()}

    @classmethod
    def from_dict(cls, data: dict, **kwargs) -> "StructureTensor":
        if not isinstance(data, dict):
            raise InvalidInputError("algebra block must be a JSON object")
        for key in ("dim", "brackets"):
            if key not in data:
                raise InvalidInputError(f"missing field '{key}'")
        dim = data["dim"]
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise InvalidInputError("field 'dim' must be a positive integer")
        basis = data.get("basis")
        if basis is not None and (not isinstance(basis, list) or len(basis) != dim):
            raise InvalidInputError(f"field 'basis' must be a list of {dim} labels")
        if not isinstance(data["brackets"], list):
            raise InvalidInputError("field 'brackets' must be a list")
        return cls.from_brackets(dim, data["brackets"], basis, **kwargs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def __repr__(self) -> str:
        return f"StructureTensor(dim={self.dim}, basis={list(self._labels)})"


def abelian(n: int) -> StructureTensor:
    return StructureTensor(np.zeros((n, n, n)), [f"x{i}" for i in range(n)])


def heisenberg() -> StructureTensor:
    """Three-dimensional Heisenberg algebra, ``[X, Y] = Z``."""
    return StructureTensor.from_brackets(3, [[0, 1, 2, 1.0]], ["X", "Y", "Z"])
