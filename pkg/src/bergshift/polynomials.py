"""Monic and orthonormal polynomials read off a Hessenberg truncation.

The monic polynomial ``P_n`` is the characteristic polynomial of the
``n x n`` corner.  Expanding ``det(z - H_n)`` along its last column gives

    P_t = (z - h_{t,t}) P_{t-1} - sum_{i<t} h_{i,t} (prod_{k=i+1}^{t} h_{k,k-1}) P_{i-1},

which reduces to the three-term recurrence for Jacobi matrices.  Values are
carried with a per-point logarithmic scale so that ``|z|**n`` growth never
overflows; ratios are unaffected by the scale.

For ``ggt`` truncations ratios use the Szegő recursion instead, which is
``O(n)`` per point and lets ratios be evaluated deep into long sequences.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import BoundsError, ModelError, PoleError
from .hessenberg import HessenbergTruncation

__all__ = [
    "POLE_THRESHOLD",
    "monic_values",
    "eval_monic",
    "monic_coefficients",
    "kappa",
    "log_kappa",
    "ratio",
    "ratio_table",
    "resolvent_diagonal",
    "circle_grid",
]

POLE_THRESHOLD = 1e-300
_LOG_POLE = np.log(POLE_THRESHOLD)
_RESCALE_AT = 1e150


def circle_grid(r: float, G: int = 64) -> np.ndarray:
    """``G`` equally spaced points on the circle ``|z| = r``."""
    return r * np.exp(2j * np.pi * np.arange(G) / G)


def _check_degree(trunc, n, low=0):
    if not low <= n <= trunc.size:
        raise BoundsError(f"degree {n} outside {low}..{trunc.size}")


def monic_values(trunc: HessenbergTruncation, n: int, z, derivative: bool = False):
    """Scaled values of ``P_0, ..., P_n`` at the points ``z``.

    Returns ``(Q, log_scale)`` with ``P_k(z) = Q[k] * exp(log_scale)``; ``Q``
    has shape ``(n + 1,) + z.shape``.  With ``derivative=True`` a third array
    ``D`` holds ``P_k'`` under the same scale.
    """
    n = int(n)
    _check_degree(trunc, n)
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    zf = z.ravel()
    G = zf.size
    Q = np.zeros((n + 1, G), dtype=complex)
    D = np.zeros((n + 1, G), dtype=complex) if derivative else None
    log_scale = np.zeros(G)
    Q[0] = 1.0
    if n > 0:
        H = trunc.corner(n)
        diag = np.diag(H)
        sub = np.diag(H, -1)
        tridiagonal = trunc.source == "jacobi"
        for t in range(1, n + 1):
            Q[t] = (zf - diag[t - 1]) * Q[t - 1]
            if derivative:
                D[t] = Q[t - 1] + (zf - diag[t - 1]) * D[t - 1]
            if t >= 2:
                if tridiagonal:
                    w = np.array([H[t - 2, t - 1] * sub[t - 2]])
                    lo = t - 2
                else:
                    # w_i = h_{i,t} prod_{k=i+1}^{t} h_{k,k-1}, i = 1..t-1
                    tail = np.cumprod(sub[: t - 1][::-1])[::-1]
                    w = H[: t - 1, t - 1] * tail
                    lo = 0
                Q[t] -= w @ Q[lo : t - 1]
                if derivative:
                    D[t] -= w @ D[lo : t - 1]
            big = np.abs(Q[t])
            over = big > _RESCALE_AT
            if np.any(over):
                factor = np.where(over, big, 1.0)
                Q[: t + 1] /= factor
                if derivative:
                    D[: t + 1] /= factor
                log_scale += np.log(factor)
    Q = Q.reshape((n + 1,) + shape)
    log_scale = log_scale.reshape(shape)
    if derivative:
        return Q, log_scale, D.reshape((n + 1,) + shape)
    return Q, log_scale


def eval_monic(trunc: HessenbergTruncation, n: int, z):
    """``P_n(z) = det(z - pi_n M pi_n)``; scalar in, scalar out."""
    Q, s = monic_values(trunc, n, z)
    out = Q[n] * np.exp(s)
    return complex(out) if np.ndim(out) == 0 else out


def monic_coefficients(trunc: HessenbergTruncation, n: int) -> np.ndarray:
    """Coefficients of ``P_n`` (highest degree first) from the recurrence.

    Runs the same column recurrence on coefficient vectors; meant for
    moderate ``n`` (it is a cross-check, not a root finder).
    """
    n = int(n)
    _check_degree(trunc, n)
    polys = [np.array([1.0 + 0j])]
    if n == 0:
        return polys[0]
    H = trunc.corner(n).astype(complex)
    sub = np.diag(H, -1)
    for t in range(1, n + 1):
        p = np.polymul([1.0, -H[t - 1, t - 1]], polys[t - 1])
        if t >= 2:
            tail = np.cumprod(sub[: t - 1][::-1])[::-1]
            for i in range(1, t):
                w = H[i - 1, t - 1] * tail[i - 1]
                if w != 0:
                    p = np.polysub(p, np.concatenate([np.zeros(len(p) - len(polys[i - 1])), w * polys[i - 1]]))
        polys.append(p)
    return polys[n]


def _subdiagonals(trunc, count):
    sub = trunc.subdiagonal()
    if count > sub.size or (count > 0 and not np.isfinite(sub[count - 1])):
        raise BoundsError(f"M_{{{count + 1},{count}}} is not determined by this truncation")
    sub = np.asarray(sub[:count])
    if np.iscomplexobj(sub):
        if np.any(np.abs(sub.imag) > 0):
            raise ModelError("subdiagonal entries are not real")
        sub = sub.real
    if np.any(sub <= 0):
        raise ModelError("subdiagonal entries must be positive")
    return sub


def log_kappa(trunc: HessenbergTruncation, n: int) -> float:
    """``log kappa_n = -sum_{k=2}^{n+1} log M_{k,k-1}``."""
    n = int(n)
    if n < 0:
        raise BoundsError("degree must be nonnegative")
    return float(-np.sum(np.log(_subdiagonals(trunc, n))))


def kappa(trunc: HessenbergTruncation, n: int) -> float:
    """Leading coefficient ``kappa_n`` of the orthonormal polynomial ``p_n``.

    Telescoping ``kappa_{k-1}/kappa_k = M_{k+1,k}`` from ``kappa_0 = 1``.
    May overflow to ``inf`` for rapidly shrinking subdiagonals; use
    :func:`log_kappa` there.
    """
    return float(1.0 / np.prod(_subdiagonals(trunc, int(n))))


def _warn_radius(trunc, z):
    if np.any(np.abs(z) <= trunc.R_est):
        warnings.warn(
            f"evaluating ratios at |z| <= R_est = {trunc.R_est:.6g}; the Laurent regime is |z| > R_est",
            RuntimeWarning,
            stacklevel=3,
        )


def _szego_ratios(alpha: np.ndarray, n_max: int, z: np.ndarray):
    """``P_{n-1}/P_n`` for ``n = 1..n_max`` via ``b_n = Phi_n^* / Phi_n``.

    ``Phi_{n+1}/Phi_n = z - conj(alpha_n) b_n`` and
    ``b_{n+1} = (b_n - alpha_n z) / (z - conj(alpha_n) b_n)``.  Also returns
    ``log|P_n|`` at ``n_max``.
    """
    out = np.empty((n_max,) + z.shape, dtype=complex)
    b = np.ones_like(z)
    log_mod = np.zeros(z.shape)
    for k in range(n_max):
        ak = alpha[k]
        step = z - np.conj(ak) * b
        out[k] = 1.0 / step
        log_mod = log_mod + np.log(np.abs(step))
        b = (b - ak * z) / step
    return out, log_mod


def ratio_table(trunc: HessenbergTruncation, n_max: int, z, normalized: bool = False) -> np.ndarray:
    """Ratios for every degree ``n = 1..n_max``; row ``n - 1`` holds degree ``n``.

    Unnormalized: ``P_{n-1}(z) / P_n(z)``.  Normalized:
    ``p_{n-1}/p_n = (kappa_{n-1}/kappa_n) P_{n-1}/P_n = M_{n+1,n} P_{n-1}/P_n``.
    """
    n_max = int(n_max)
    _check_degree(trunc, n_max, low=1)
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        if trunc.source == "ggt":
            table, log_mod = _szego_ratios(trunc.alpha, n_max, z)
            poles = log_mod < _LOG_POLE
        else:
            Q, s = monic_values(trunc, n_max, z)
            table = Q[:-1] / Q[1:]
            poles = np.log(np.abs(Q[-1])) + s < _LOG_POLE
    if np.any(poles) or not np.all(np.isfinite(table)):
        raise PoleError(f"z is (numerically) a zero of P_{n_max}")
    if normalized:
        sub = _subdiagonals(trunc, n_max)
        table = table * sub.reshape((n_max,) + (1,) * z.ndim)
    return table


def ratio(trunc: HessenbergTruncation, n: int, z, normalized: bool = False):
    """``P_{n-1}(z)/P_n(z)``, or ``p_{n-1}(z)/p_n(z)`` when ``normalized``.

    Warns when ``|z| <= R_est``.  Raises :class:`PoleError` when
    ``|P_n(z)| < 1e-300``.
    """
    n = int(n)
    _check_degree(trunc, n, low=1)
    z_arr = np.asarray(z, dtype=complex)
    _warn_radius(trunc, z_arr)
    with np.errstate(divide="ignore", invalid="ignore"):
        if trunc.source == "ggt":
            table, log_mod = _szego_ratios(trunc.alpha, n, z_arr)
            value, pole = table[-1], log_mod < _LOG_POLE
        else:
            Q, s = monic_values(trunc, n, z_arr)
            value = Q[n - 1] / Q[n]
            pole = np.log(np.abs(Q[n])) + s < _LOG_POLE
    if np.any(pole) or not np.all(np.isfinite(value)):
        raise PoleError(f"z is (numerically) a zero of P_{n}")
    if normalized:
        value = value * _subdiagonals(trunc, n)[-1]
    return complex(value) if np.ndim(value) == 0 else value


def resolvent_diagonal(trunc: HessenbergTruncation, n: int, z) -> complex:
    """``((z - pi_n M pi_n)^{-1})_{n,n}`` by a dense linear solve."""
    n = int(n)
    _check_degree(trunc, n, low=1)
    A = trunc.corner(n).astype(complex)
    rhs = np.zeros(n, dtype=complex)
    rhs[-1] = 1.0
    x = np.linalg.solve(complex(z) * np.eye(n) - A, rhs)
    return complex(x[-1])
