"""End-corrected midpoint rules for integrals ``int_0^inf x^alpha g(x) dx``.

The plain rule ``h * sum x_i^alpha g(x_i)`` on ``x_i = (i + 1/2) h`` has an
error expansion in powers ``h^(alpha + 1 + 2l)`` whose coefficients are
Hurwitz zeta values ``zeta(-alpha - 2l, 1/2)`` times even derivatives of
``g`` at the origin (``g`` even and smooth). Matching those moments on the
first few nodes removes the leading terms. For even integer ``alpha`` the
coefficients vanish and the plain rule is already spectrally accurate.
"""

from __future__ import annotations

from functools import lru_cache

import mpmath
import numpy as np


@lru_cache(maxsize=256)
def _corrections(alpha: float, m: int) -> tuple[float, ...]:
    # zeta(1, .) is a pole: alpha = -1 - 2l never arises for alpha > -1.
    # The Vandermonde system is ill-conditioned in double precision.
    with mpmath.workdps(50):
        a = mpmath.mpf(alpha)
        rhs = mpmath.matrix([mpmath.zeta(-a - 2 * l, 0.5) for l in range(m)])
        V = mpmath.matrix(m, m)
        for l in range(m):
            for i in range(m):
                V[l, i] = (mpmath.mpf(i) + 0.5) ** (2 * l)
        d = mpmath.lu_solve(V, rhs)
        return tuple(float(d[i]) for i in range(m))


def corrected_weights(alpha: float, N: int, h: float, order: int = 8) -> np.ndarray:
    """Weights ``w_i`` with ``sum w_i g(x_i) ~ int_0^inf x^alpha g(x) dx``.

    Parameters
    ----------
    alpha : float
        Power of the measure, ``alpha > -1``.
    N : int
        Number of staggered nodes.
    h : float
        Node spacing.
    order : int
        Number of corrected end nodes; the error is ``O(h^(alpha+1+2*order))``.
    """
    if alpha <= -1:
        raise ValueError(f"alpha must exceed -1, got {alpha}")
    x = np.arange(N) + 0.5
    w = x**alpha
    if not float(alpha).is_integer() or int(alpha) % 2:
        m = min(order, N)
        w[:m] -= np.asarray(_corrections(float(alpha), m))
    return w * h ** (alpha + 1)
