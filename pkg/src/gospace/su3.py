"""Built-in SU(3)/SU(2) model, its invariant polynomials and closed-form graph.

Basis order (primed, orthonormal for the Killing-type form Y1):
``A', B', C', E1, E2, E3, E4, Z`` with ``A' = A/sqrt(3)`` and so on.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .errors import InvalidInputError
from .homspace import EnergyForm, HomogeneousModel
from .liealg import StructureTensor
from .polynomial import Polynomial

LABELS = ("A'", "B'", "C'", "E1", "E2", "E3", "E4", "Z")
A, B, C, E1, E2, E3, E4, Z = range(8)
K_INDICES = (A, B, C)
M_INDICES = (E1, E2, E3, E4, Z)
_T = 1.0 / 3.0

# su(3) in the unprimed basis A, B, C, E1..E4, Z: [x, y] = sum coeff * w.
_TABLE = [
    (A, B, [(C, 2.0)]), (B, C, [(A, 2.0)]), (C, A, [(B, 2.0)]),
    (A, E1, [(E2, -1.0)]), (A, E2, [(E1, 1.0)]), (A, E3, [(E4, 1.0)]), (A, E4, [(E3, -1.0)]),
    (B, E1, [(E3, 1.0)]), (B, E2, [(E4, 1.0)]), (B, E3, [(E1, -1.0)]), (B, E4, [(E2, -1.0)]),
    (C, E1, [(E4, 1.0)]), (C, E2, [(E3, -1.0)]), (C, E3, [(E2, 1.0)]), (C, E4, [(E1, -1.0)]),
    (Z, E1, [(E2, 1.0)]), (Z, E2, [(E1, -1.0)]), (Z, E3, [(E4, 1.0)]), (Z, E4, [(E3, -1.0)]),
    (E1, E2, [(Z, 1.0), (A, -_T)]), (E1, E3, [(B, _T)]), (E1, E4, [(C, _T)]),
    (E2, E3, [(C, -_T)]), (E2, E4, [(B, _T)]), (E3, E4, [(Z, 1.0), (A, _T)]),
]


def su3_unprimed() -> StructureTensor:
    entries = [[x, y, w, v] for x, y, terms in _TABLE for w, v in terms]
    return StructureTensor.from_brackets(8, entries, ["A", "B", "C", "E1", "E2", "E3", "E4", "Z"])


def su3() -> StructureTensor:
    """su(3) in the primed orthonormal basis."""
    # substituting A = sqrt(3) A' etc. scales each constant by
    # s_i s_j / s_k with s = sqrt(3) on A, B, C and 1 elsewhere
    s = np.ones(8)
    s[list(K_INDICES)] = math.sqrt(3.0)
    c = su3_unprimed().c
    primed = c * (1.0 / s)[:, None, None] * (1.0 / s)[None, :, None] * s[None, None, :]
    return StructureTensor(primed, LABELS)


def builtin_su3_su2(alpha: float = 1.0, beta: float = 1.0):
    """SU(3)/SU(2) with the invariant Hamiltonian ``alpha*r^2 + beta*z^2`` at the origin.

    The returned quadratic form stores ``S = 2 diag(alpha, alpha, alpha, alpha, beta)``
    so that ``1/2 p^T S p`` is exactly ``alpha*(e1^2+..+e4^2) + beta*z^2``.
    Non-positive parameters give a pseudo-Riemannian form and a warning.
    """
    alpha, beta = float(alpha), float(beta)
    if alpha == 0.0 or beta == 0.0:
        raise InvalidInputError("alpha and beta must be non-zero")
    if alpha < 0 or beta < 0:
        warnings.warn("alpha or beta negative: indefinite (pseudo-Riemannian) form", stacklevel=2)
    model = HomogeneousModel(su3(), K_INDICES, M_INDICES)
    form = EnergyForm.quadratic(2.0 * np.diag([alpha, alpha, alpha, alpha, beta]))
    return model, form


def _var(i: int) -> Polynomial:
    return Polynomial.variable(8, i)


def sigma1() -> Polynomial:
    return _var(A) ** 2 + _var(B) ** 2 + _var(C) ** 2


def sigma2() -> Polynomial:
    return _var(E1) ** 2 + _var(E2) ** 2 + _var(E3) ** 2 + _var(E4) ** 2


def sigma3() -> Polynomial:
    a, b, c = _var(A), _var(B), _var(C)
    e1, e2, e3, e4 = _var(E1), _var(E2), _var(E3), _var(E4)
    return (a * (e1 ** 2 + e2 ** 2 - e3 ** 2 - e4 ** 2)
            + 2.0 * b * (e1 * e4 - e2 * e3)
            - 2.0 * c * (e1 * e3 + e2 * e4))


def y1_invariant() -> Polynomial:
    """Quadratic Ad*-invariant: the sum of squares in the primed basis."""
    return sigma1() + sigma2() + _var(Z) ** 2


def y2_invariant() -> Polynomial:
    """Cubic Ad*-invariant ``sqrt(3) s3 + z (s2 - 2 s1) + 2/3 z^3``."""
    z = _var(Z)
    return math.sqrt(3.0) * sigma3() + z * (sigma2() - 2.0 * sigma1()) + (2.0 / 3.0) * z ** 3


def builtin_polynomials() -> dict:
    return {
        "Y1": y1_invariant(),
        "Y2": y2_invariant(),
        "half_z2": 0.5 * _var(Z) ** 2,
    }


def closed_form_graph(alpha: float, beta: float, p) -> np.ndarray:
    """Closed-form geodesic graph of the ``(alpha, beta)`` metric at ``p = (e1..e4, z)``.

    Undefined at ``r = 0`` when ``alpha != beta``.
    """
    e1, e2, e3, e4, z = (float(v) for v in p)
    r2 = e1 * e1 + e2 * e2 + e3 * e3 + e4 * e4
    out = np.zeros(8)
    out[[E1, E2, E3, E4]] = 2.0 * alpha * np.array([e1, e2, e3, e4])
    out[Z] = 2.0 * beta * z
    if alpha == beta:
        return out
    if r2 == 0.0:
        raise InvalidInputError("closed-form graph is undefined at r = 0 when alpha != beta")
    coef = (beta - alpha) * 2.0 * math.sqrt(3.0) * z / r2
    out[A] = coef * (e1 * e1 + e2 * e2 - e3 * e3 - e4 * e4)
    out[B] = coef * 2.0 * (e1 * e4 - e2 * e3)
    out[C] = -coef * 2.0 * (e1 * e3 + e2 * e4)
    return out
