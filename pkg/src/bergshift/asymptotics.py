"""Scaled entries, moment expansions and relative asymptotics.

``h_{j,n} = (kappa_{n-1-j} / kappa_{n-1}) M_{n-j,n}``.  Telescoping the
kappa ratio through the subdiagonal makes ``h_{j,n}`` the weight of the
index path that steps down ``j`` times from ``n`` and then jumps back up:

    h_{j,n} = M_{n,n-1} M_{n-1,n-2} ... M_{n-j+1,n-j} * M_{n-j,n}.

Diagonal entries of matrix powers are sums over such index paths, which is
what :func:`path_sum_diagonal` enumerates explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundsError, ContaminationError, InvalidParameterError
from .hessenberg import HessenbergTruncation, diagonal_of_power, matrix_power_diagonal

__all__ = [
    "MAX_PATH_POWER",
    "LaurentCoefficients",
    "HProfile",
    "h_coeff",
    "path_sum_diagonal",
    "enumerate_paths",
    "beta_term",
    "laurent_ratio",
    "weak_moment",
    "weak_moments",
    "cesaro_moment",
    "relative_h_profile",
    "relative_weak_moments",
    "relative_cesaro_moments",
    "cesaro_bound_check",
    "last_quartile_max",
]

MAX_PATH_POWER = 12
MAX_LAURENT_TERMS = 40


def h_coeff(trunc: HessenbergTruncation, j: int, n: int) -> complex:
    """``h_{j,n}``; requires ``0 <= j <= n - 1`` and ``n <= N``."""
    j, n = int(j), int(n)
    if not (0 <= j <= n - 1 and n <= trunc.size):
        raise BoundsError(f"h_{{{j},{n}}} needs 0 <= j <= n-1 and n <= {trunc.size}")
    sub = trunc.subdiagonal()
    # M_{n-l,n-l-1} is subdiagonal index n-l-2 (0-based)
    descent = np.prod(sub[n - j - 1 : n - 1]) if j else 1.0
    return complex(descent * trunc.entry(n - j, n))


def _path_bounds(trunc, m, n, truncated):
    if m < 1:
        raise InvalidParameterError("path sums need m >= 1")
    if m > MAX_PATH_POWER:
        raise InvalidParameterError(f"path enumeration is capped at m = {MAX_PATH_POWER}; got m = {m}")
    if not 1 <= n <= trunc.size:
        raise BoundsError(f"index {n} outside 1..{trunc.size}")
    if truncated:
        return n
    if n + m > trunc.size:
        raise ContaminationError(f"(M^{m})_{{{n},{n}}} reaches beyond the truncation size {trunc.size}")
    return n + m - 1


def enumerate_paths(m: int, n: int, top: int):
    """All index paths ``n = i_0, i_1, ..., i_m = n`` with ``i_{k+1} >= i_k - 1``,
    ``1 <= i_k <= top``.  Yields tuples of length ``m + 1``."""
    path = [n]

    def extend(k):
        cur = path[-1]
        left = m - k
        if left == 0:
            if cur == n:
                yield tuple(path)
            return
        # after this step, left-1 steps remain; each can descend at most one
        hi = min(top, n + left - 1)
        lo = max(1, cur - 1)
        for nxt in range(lo, hi + 1):
            if nxt - (left - 1) > n:
                continue
            path.append(nxt)
            yield from extend(k + 1)
            path.pop()

    yield from extend(0)


def path_sum_diagonal(trunc: HessenbergTruncation, m: int, n: int, truncated: bool = True, exclude_max_descent: bool = False) -> complex:
    """``((pi_n M pi_n)^m)_{n,n}`` (``truncated``) or ``(M^m)_{n,n}`` as an explicit path sum.

    Every admissible path contributes the product of the matrix entries it
    traverses.  ``exclude_max_descent`` drops the path
    ``n -> n-1 -> ... -> n-m+1 -> n`` whose weight is ``h_{m-1,n}``.
    """
    m, n = int(m), int(n)
    top = _path_bounds(trunc, m, n, truncated)
    lo = max(1, n - m)
    M = trunc.block(lo - 1, top, lo - 1, top)
    skip = tuple(range(n, n - m, -1)) + (n,) if exclude_max_descent else None
    total = 0j
    for path in enumerate_paths(m, n, top):
        if path == skip:
            continue
        w = 1.0 + 0j
        for a, b in zip(path[:-1], path[1:]):
            w *= M[a - lo, b - lo]
            if w == 0:
                break
        total += w
    return complex(total)


def beta_term(trunc: HessenbergTruncation, n: int, m: int) -> complex:
    """``beta_{n,m} = ((pi_n M pi_n)^m)_{n,n} - h_{m-1,n}`` for ``1 <= m <= n``."""
    n, m = int(n), int(m)
    if not 1 <= m <= n:
        raise BoundsError(f"beta_{{{n},{m}}} needs 1 <= m <= n")
    _path_bounds(trunc, m, n, True)
    return matrix_power_diagonal(trunc, m, n, "truncated") - h_coeff(trunc, m - 1, n)


@dataclass(frozen=True)
class LaurentCoefficients:
    """``P_{n-1}(z)/P_n(z) = sum_m c_m / z^{m+1}`` with ``c_m = ((pi_n M pi_n)^m)_{n,n}``."""

    center: int
    coefficients: np.ndarray
    R_est: float

    @property
    def count(self) -> int:
        return int(self.coefficients.size)

    def partial_sum(self, z):
        z = np.asarray(z, dtype=complex)
        powers = np.arange(self.count)
        terms = self.coefficients[:, None] / np.power.outer(z.ravel(), powers + 1).T
        out = terms.sum(axis=0).reshape(z.shape)
        return complex(out) if out.ndim == 0 else out

    def tail_bound(self, z) -> float:
        """``sum_{m > M} R^m / |z|^{m+1} = (R/|z|)^{M+1} / (|z| - R)`` for ``|z| > R``."""
        r = np.abs(np.asarray(z, dtype=complex))
        if np.any(r <= self.R_est):
            raise InvalidParameterError("tail bound needs |z| > R_est")
        return (self.R_est / r) ** self.count / (r - self.R_est)


def laurent_ratio(trunc: HessenbergTruncation, n: int, M_terms: int) -> LaurentCoefficients:
    """Coefficients ``c_0 .. c_{M_terms}`` of the expansion of the ratio at infinity."""
    n, M_terms = int(n), int(M_terms)
    if not 1 <= n <= trunc.size:
        raise BoundsError(f"index {n} outside 1..{trunc.size}")
    if not 0 <= M_terms <= MAX_LAURENT_TERMS:
        raise InvalidParameterError(f"M_terms must lie in 0..{MAX_LAURENT_TERMS}")
    A = trunc.corner(n).astype(complex)
    v = np.zeros(n, dtype=complex)
    v[-1] = 1.0
    coeffs = np.empty(M_terms + 1, dtype=complex)
    coeffs[0] = 1.0
    for m in range(1, M_terms + 1):
        v = A @ v
        coeffs[m] = v[-1]
    coeffs.setflags(write=False)
    return LaurentCoefficients(n, coeffs, trunc.R_est)


def weak_moment(trunc: HessenbergTruncation, j: int, n: int) -> complex:
    """``int z^j |p_n|^2 dmu = (M^j)_{n+1,n+1}``; needs ``n + 1 + j <= N``."""
    j, n = int(j), int(n)
    if j < 0 or n < 0:
        raise InvalidParameterError("order and degree must be nonnegative")
    return matrix_power_diagonal(trunc, j, n + 1, "full")


def weak_moments(trunc: HessenbergTruncation, j: int, n_count: int) -> np.ndarray:
    """``weak_moment(trunc, j, k)`` for ``k = 0 .. n_count - 1`` at once."""
    return diagonal_of_power(trunc, j, n_count, "full")


def cesaro_moment(trunc: HessenbergTruncation, j: int, n: int) -> complex:
    """``int z^j d sigma_n = trace((pi_n M pi_n)^j) / n``."""
    j, n = int(j), int(n)
    if j < 0:
        raise InvalidParameterError("order must be nonnegative")
    if not 1 <= n <= trunc.size:
        raise BoundsError(f"index {n} outside 1..{trunc.size}")
    if j == 0:
        return 1.0 + 0j
    return complex(np.sum(diagonal_of_power(trunc, j, n, "corner")) / n)


def last_quartile_max(values) -> float:
    """Max of ``|values|`` over the last quarter of the grid (at least one point)."""
    values = np.abs(np.asarray(values))
    start = (3 * values.size) // 4
    return float(np.max(values[start:]))


@dataclass(frozen=True)
class HProfile:
    """Table of ``h_{j,n}(A) - h_{j,n-q}(B)``; ``table[j, i]`` belongs to ``n_grid[i]``."""

    q: int
    n_grid: np.ndarray
    table: np.ndarray
    summary: np.ndarray = field(repr=False)

    def to_rows(self):
        for j in range(self.table.shape[0]):
            for i, n in enumerate(self.n_grid):
                yield "h", j, int(n), self.table[j, i]


def relative_h_profile(truncA, truncB, q: int, j_max: int, n_grid) -> HProfile:
    """Differences ``h_{j,n}(A) - h_{j,n-q}(B)`` for ``j <= j_max`` over ``n_grid``,
    with the last-quartile maximum for each ``j``."""
    q, j_max = int(q), int(j_max)
    if q < 0:
        raise InvalidParameterError("shift q must be nonnegative")
    n_grid = np.asarray(sorted(int(n) for n in n_grid))
    if n_grid.size == 0:
        raise InvalidParameterError("empty n-grid")
    if n_grid[0] - q < j_max + 1:
        raise BoundsError(f"n - q must be at least j_max + 1 = {j_max + 1} on the grid")
    table = np.empty((j_max + 1, n_grid.size), dtype=complex)
    for i, n in enumerate(n_grid):
        for j in range(j_max + 1):
            table[j, i] = h_coeff(truncA, j, n) - h_coeff(truncB, j, n - q)
    table.setflags(write=False)
    summary = np.array([last_quartile_max(row) for row in table])
    return HProfile(q, n_grid, table, summary)


def relative_weak_moments(truncA, truncB, q: int, j: int, n: int) -> complex:
    """``weak_moment(A, j, n) - weak_moment(B, j, n - q)``."""
    q = int(q)
    if q < 0 or n - q < 0:
        raise InvalidParameterError("need 0 <= q <= n")
    return weak_moment(truncA, j, n) - weak_moment(truncB, j, n - q)


def relative_cesaro_moments(truncA, truncB, j: int, n: int, q: int = 0) -> complex:
    """``cesaro_moment(A, j, n) - cesaro_moment(B, j, n - q)``; ``q`` defaults to 0."""
    q = int(q)
    if q < 0 or n - q < 1:
        raise InvalidParameterError("need 0 <= q < n")
    return cesaro_moment(truncA, j, n) - cesaro_moment(truncB, j, n - q)


def cesaro_bound_check(truncA, truncB, j: int, n: int) -> tuple[float, float]:
    """Both sides of the averaged comparison between zero moments and weak moments.

    ``lhs = |ces_j(A,n) - ces_j(B,n) - (1/n) sum_{k<n} (weak_j(A,k) - weak_j(B,k))|``
    and ``rhs = 2 j (R_est(A) + R_est(B)) / n``.
    """
    j, n = int(j), int(n)
    if n < 1:
        raise InvalidParameterError("n must be positive")
    avg = (np.sum(weak_moments(truncA, j, n)) - np.sum(weak_moments(truncB, j, n))) / n
    lhs = abs(cesaro_moment(truncA, j, n) - cesaro_moment(truncB, j, n) - avg)
    rhs = 2.0 * j * (truncA.R_est + truncB.R_est) / n
    return float(lhs), float(rhs)
