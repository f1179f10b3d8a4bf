"""Dense Hermitian linear algebra used by the rate computations.

All output covariance matrices in this package are Hermitian positive
definite by construction, so everything funnels through a Cholesky
factorization with an explicit pivot floor.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

__all__ = [
    "NotPositiveDefinite",
    "cholesky_pd",
    "hermitian_solve",
    "quadratic_form",
    "clipped_arcsin",
]

# Pivots at or below this fraction of the largest diagonal entry are treated
# as loss of positive definiteness rather than silently amplified.
_PIVOT_RTOL = 1e-12


class NotPositiveDefinite(ValueError):
    """Matrix expected to be Hermitian positive definite is not."""


def cholesky_pd(a: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of a Hermitian positive definite matrix.

    Parameters
    ----------
    a : ndarray
        Hermitian matrix. Only the lower triangle is referenced.

    Returns
    -------
    ndarray
        Lower triangular ``low`` with ``low @ low.conj().T == a``.

    Raises
    ------
    NotPositiveDefinite
        If factorization fails or any pivot falls at or below
        ``1e-12 * max(diag(a))``.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    try:
        low = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    pivots = np.diagonal(low).real ** 2
    floor = _PIVOT_RTOL * float(np.max(np.diagonal(a).real))
    if not np.all(pivots > floor):
        raise NotPositiveDefinite(
            f"pivot {pivots.min():.3e} at or below floor {floor:.3e}"
        )
    return low


def hermitian_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a @ x = b`` for Hermitian positive definite ``a``.

    One iterative-refinement pass keeps the relative residual
    ``||a @ x - b|| / ||b||`` at or below 1e-8 for well-posed systems.
    """
    low = cholesky_pd(a)
    b = np.asarray(b)
    x = scipy.linalg.cho_solve((low, True), b, check_finite=False)
    resid = b - a @ x
    x = x + scipy.linalg.cho_solve((low, True), resid, check_finite=False)
    return x


def quadratic_form(a: np.ndarray, b: np.ndarray) -> float:
    """Evaluate ``b^H a^-1 b`` for Hermitian positive definite ``a``.

    Computed as ``||low^-1 b||^2`` from the Cholesky factor, so the result
    is real and nonnegative by construction (no imaginary residue to trim).
    """
    low = cholesky_pd(a)
    y = scipy.linalg.solve_triangular(low, np.asarray(b), lower=True, check_finite=False)
    return float(np.vdot(y, y).real)


def clipped_arcsin(x: np.ndarray | float) -> np.ndarray | float:
    """arcsin with the argument clamped to [-1, 1].

    Correlation-coefficient arguments can drift a few ulp outside the
    domain; clamping keeps them finite instead of producing NaN.
    """
    return np.arcsin(np.clip(x, -1.0, 1.0))
