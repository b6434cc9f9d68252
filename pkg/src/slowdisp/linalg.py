"""Small dense 4x4 helpers working at either scalar backend.

Spectral norms go through the symmetric eigenproblem of the Gram matrix,
which is deterministic and precision-controllable at both backends.
"""

from __future__ import annotations

import numpy as np
from mpmath import mp

from .errors import ConditioningError
from .precision import Precision


def vector_norm(v, p: Precision):
    with p.active():
        return p.sqrt(sum(x * x for x in v))


def _gram_eigs(mat, p: Precision):
    """Eigenvalues of M^T M, ascending."""
    if p.is_double:
        m = np.asarray(mat, dtype=float)
        return np.linalg.eigvalsh(m.T @ m)
    with p.active():
        m = mp.matrix([[p.real(x) for x in row] for row in mat])
        gram = m.T * m
        eigs = mp.eigsy(gram, eigvals_only=True)
        return sorted(eigs)


def spectral_norm(mat, p: Precision):
    eigs = _gram_eigs(mat, p)
    with p.active():
        return p.sqrt(max(eigs[-1], p.zero() * 0))


def inverse_spectral_norm(mat, p: Precision):
    """Spectral norm of the inverse, i.e. 1/smallest singular value."""
    eigs = _gram_eigs(mat, p)
    small = eigs[0]
    if small <= 0:
        raise ConditioningError("matrix is numerically singular")
    with p.active():
        return 1 / p.sqrt(small)


def condition_number(mat, p: Precision):
    eigs = _gram_eigs(mat, p)
    if eigs[0] <= 0:
        raise ConditioningError("matrix is numerically singular")
    with p.active():
        return p.sqrt(eigs[-1] / eigs[0])


def solve(mat, rhs, p: Precision):
    """Solve mat @ x = rhs."""
    if p.is_double:
        try:
            return tuple(np.linalg.solve(np.asarray(mat, dtype=float), np.asarray(rhs, dtype=float)))
        except np.linalg.LinAlgError as exc:
            raise ConditioningError(str(exc)) from exc
    with p.active():
        m = mp.matrix([[p.real(x) for x in row] for row in mat])
        b = mp.matrix([p.real(x) for x in rhs])
        try:
            sol = mp.lu_solve(m, b)
        except ZeroDivisionError as exc:
            raise ConditioningError("singular matrix in lu_solve") from exc
        return tuple(sol)


def determinant(mat, p: Precision):
    if p.is_double:
        return float(np.linalg.det(np.asarray(mat, dtype=float)))
    with p.active():
        return mp.det(mp.matrix([[p.real(x) for x in row] for row in mat]))
