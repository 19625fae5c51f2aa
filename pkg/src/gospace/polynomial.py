"""Sparse real polynomials with analytic gradients.

Terms are stored as an integer exponent matrix (one row per monomial) and a
coefficient vector. Gradients are differentiated term by term, never by
finite differences.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError


class Polynomial:
    def __init__(self, nvars: int, exponents, coeffs):
        exps = np.asarray(exponents, dtype=np.int64).reshape(-1, nvars) if len(coeffs) else np.zeros((0, nvars), np.int64)
        coeffs = np.asarray(coeffs, dtype=float).reshape(-1)
        if exps.shape[0] != coeffs.shape[0]:
            raise InvalidInputError("exponent rows and coefficients differ in length")
        if np.any(exps < 0):
            raise InvalidInputError("negative exponent in polynomial term")
        self.nvars = int(nvars)
        self.exponents, self.coeffs = _combine(exps, coeffs)
        self._grad = None

    @classmethod
    def from_terms(cls, nvars: int, terms: Iterable) -> "Polynomial":
        """From ``[(multi_index, coeff), ...]`` pairs."""
        exps, coeffs = [], []
        for term in terms:
            try:
                mi, coeff = term
            except (TypeError, ValueError):
                raise InvalidInputError(f"polynomial term {term!r} must be [multi_index, coeff]") from None
            mi = list(mi)
            if len(mi) != nvars:
                raise InvalidInputError(f"multi-index {mi} has length {len(mi)}, expected {nvars}")
            exps.append(mi)
            coeffs.append(float(coeff))
        return cls(nvars, exps, coeffs)

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        e = np.zeros((1, nvars), np.int64)
        e[0, i] = 1
        return cls(nvars, e, [1.0])

    @classmethod
    def constant(cls, nvars: int, value: float) -> "Polynomial":
        return cls(nvars, np.zeros((1, nvars), np.int64), [float(value)])

    @classmethod
    def quadratic(cls, matrix) -> "Polynomial":
        """The polynomial ``x -> 1/2 x^T S x``."""
        s = np.asarray(matrix, dtype=float)
        n = s.shape[0]
        out = cls(n, np.zeros((0, n)), [])
        for i in range(n):
            for j in range(n):
                if s[i, j] != 0.0:
                    out = out + 0.5 * s[i, j] * cls.variable(n, i) * cls.variable(n, j)
        return out

    def terms(self) -> list:
        return [[row.tolist(), float(c)] for row, c in zip(self.exponents, self.coeffs)]

    @property
    def degree(self) -> int:
        return int(self.exponents.sum(axis=1).max()) if self.coeffs.size else 0

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.nvars:
            raise InvalidInputError(f"expected {self.nvars} coordinates, got {x.shape[-1]}")
        return x

    def __call__(self, x) -> float:
        x = self._check(x)
        if self.coeffs.size == 0:
            return 0.0
        mons = np.prod(x[None, :] ** self.exponents, axis=1)
        return float(mons @ self.coeffs)

    def partial(self, i: int) -> "Polynomial":
        e = self.exponents[:, i]
        keep = e > 0
        exps = self.exponents[keep].copy()
        exps[:, i] -= 1
        return Polynomial(self.nvars, exps, self.coeffs[keep] * e[keep])

    def gradient(self, x) -> np.ndarray:
        x = self._check(x)
        if self._grad is None:
            self._grad = [self.partial(i) for i in range(self.nvars)]
        return np.array([g(x) for g in self._grad])

    def restrict(self, indices: Sequence[int]) -> "Polynomial":
        """Set all variables outside ``indices`` to zero; keep the rest in order."""
        indices = list(indices)
        others = [i for i in range(self.nvars) if i not in set(indices)]
        keep = np.all(self.exponents[:, others] == 0, axis=1) if others else np.ones(len(self.coeffs), bool)
        return Polynomial(len(indices), self.exponents[keep][:, indices], self.coeffs[keep])

    def embed(self, nvars: int, indices: Sequence[int]) -> "Polynomial":
        """Inverse of :meth:`restrict`: variable ``j`` becomes variable ``indices[j]``."""
        exps = np.zeros((len(self.coeffs), nvars), np.int64)
        exps[:, list(indices)] = self.exponents
        return Polynomial(nvars, exps, self.coeffs)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise InvalidInputError("polynomials live in different numbers of variables")
            return other
        return Polynomial.constant(self.nvars, float(other))

    def __add__(self, other):
        other = self._coerce(other)
        return Polynomial(self.nvars, np.vstack([self.exponents, other.exponents]),
                          np.concatenate([self.coeffs, other.coeffs]))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, self.exponents, -self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(self.nvars, self.exponents, self.coeffs * float(other))
        other = self._coerce(other)
        if self.coeffs.size == 0 or other.coeffs.size == 0:
            return Polynomial(self.nvars, np.zeros((0, self.nvars)), [])
        exps = (self.exponents[:, None, :] + other.exponents[None, :, :]).reshape(-1, self.nvars)
        coeffs = (self.coeffs[:, None] * other.coeffs[None, :]).reshape(-1)
        return Polynomial(self.nvars, exps, coeffs)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            raise InvalidInputError("only non-negative integer powers")
        out = Polynomial.constant(self.nvars, 1.0)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self) -> str:
        return f"Polynomial(nvars={self.nvars}, terms={len(self.coeffs)}, degree={self.degree})"


def _combine(exps: np.ndarray, coeffs: np.ndarray):
    """Merge duplicate monomials and drop exact zeros; sorted for stable output."""
    if coeffs.size == 0:
        return exps.reshape(0, exps.shape[1]), coeffs
    uniq, inv = np.unique(exps, axis=0, return_inverse=True)
    summed = np.zeros(uniq.shape[0])
    np.add.at(summed, inv.reshape(-1), coeffs)
    keep = summed != 0.0
    return uniq[keep], summed[keep]
