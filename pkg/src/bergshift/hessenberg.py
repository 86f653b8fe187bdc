"""Finite truncations of the Bergman shift matrix.

Indexing convention
-------------------
Public functions use 1-based matrix indices ``(i, j)`` with ``1 <= i, j <= N``.
Arrays are stored 0-based, so entry ``(i, j)`` lives at ``[i - 1, j - 1]``.

Three constructions are provided:

* :func:`ggt_truncation` -- closed-form entries from Verblunsky coefficients
  (measures on the unit circle), with ``alpha_{-1} = -1``;
* :func:`jacobi_truncation` -- the symmetric tridiagonal Jacobi matrix;
* :func:`arnoldi_truncation` -- orthonormalization of ``1, z, z**2, ...`` in
  ``L^2`` of a discrete planar measure.

Large GGT and Jacobi truncations are never stored densely; blocks are built
on demand from the coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .coefficients import DiscretePlanarMeasure, JacobiSequence, VerblunskySequence
from .errors import (
    BoundsError,
    ContaminationError,
    DegenerateMeasureError,
    InvalidCoefficientError,
    InvalidParameterError,
    ModelError,
)

__all__ = [
    "HessenbergTruncation",
    "MatrixWindow",
    "ggt_truncation",
    "jacobi_truncation",
    "arnoldi_truncation",
    "window",
    "kappa_ratio",
    "matrix_power_diagonal",
    "diagonal_of_power",
]

ARNOLDI_BREAKDOWN = 1e-13
ORTHONORMALITY_TOL = 1e-10


def _rho(alpha: np.ndarray) -> np.ndarray:
    mod = np.abs(alpha)
    return np.sqrt((1.0 - mod) * (1.0 + mod))


class HessenbergTruncation:
    """The ``N x N`` upper-left corner of the Bergman shift matrix.

    Attributes
    ----------
    size : int
        ``N``.
    source : str
        ``"ggt"``, ``"jacobi"`` or ``"arnoldi"``.
    R_est : float
        Bound on the norm of the truncation used to choose evaluation radii.
        For ``ggt`` it is 1 (the matrix of multiplication by ``z`` on the
        circle is an isometry); otherwise the maximal absolute row sum.
    row_sum_norm : float
        Maximal absolute row sum of the truncation.
    next_subdiagonal : float
        ``M_{N+1,N}`` when the model determines it, else ``nan``.
    meta : dict
        Provenance (the coefficient spec or measure description).
    """

    def __init__(self, size, source, *, alpha=None, a=None, b=None, dense=None, next_subdiagonal=np.nan, meta=None):
        self.size = int(size)
        self.source = source
        self._alpha = alpha
        self._a = a
        self._b = b
        self._dense = dense
        if alpha is not None:
            self._rho = _rho(alpha)
        self.next_subdiagonal = float(next_subdiagonal)
        self.meta = dict(meta or {})
        self.row_sum_norm = self._row_sum_norm()
        self.R_est = 1.0 if source == "ggt" else self.row_sum_norm

    def __repr__(self) -> str:
        return f"HessenbergTruncation(N={self.size}, source={self.source!r}, R_est={self.R_est:.6g})"

    # -- raw access ------------------------------------------------------

    @property
    def alpha(self) -> np.ndarray:
        """Verblunsky coefficients ``alpha_0 .. alpha_{N-1}`` (ggt only)."""
        if self._alpha is None:
            raise ModelError(f"{self.source} truncation has no Verblunsky coefficients")
        return self._alpha

    def block(self, r0: int, r1: int, c0: int, c1: int) -> np.ndarray:
        """Dense copy of rows ``r0:r1`` and columns ``c0:c1`` (0-based, half open)."""
        N = self.size
        if not (0 <= r0 <= r1 <= N and 0 <= c0 <= c1 <= N):
            raise BoundsError(f"block [{r0}:{r1}, {c0}:{c1}] outside a {N}x{N} truncation")
        if self._dense is not None:
            return self._dense[r0:r1, c0:c1].copy()
        if self.source == "jacobi":
            return self._jacobi_block(r0, r1, c0, c1)
        return self._ggt_block(r0, r1, c0, c1)

    def _jacobi_block(self, r0, r1, c0, c1):
        out = np.zeros((r1 - r0, c1 - c0))
        for r in range(r0, r1):
            for c in range(max(c0, r - 1), min(c1, r + 2)):
                if r == c:
                    out[r - r0, c - c0] = self._b[r]
                else:
                    out[r - r0, c - c0] = self._a[min(r, c)]
        return out

    def _ggt_block(self, r0, r1, c0, c1):
        # 0-based row r is 1-based row i = r + 1; column c is j = c + 1.
        #   i <= j:     -alpha_{i-2} conj(alpha_{j-1}) prod_{k=i-1}^{j-2} rho_k
        #   i == j + 1: rho_{j-1}
        alpha, rho = self._alpha, self._rho
        out = np.zeros((r1 - r0, c1 - c0), dtype=complex)
        conj_cols = np.conj(alpha[c0:c1])
        for r in range(r0, r1):
            if r - 1 >= c0 and r - 1 < c1:
                out[r - r0, r - 1 - c0] = rho[r - 1]
            start = max(r, c0)
            if start >= c1:
                continue
            lead = -1.0 if r == 0 else alpha[r - 1]
            # prod_{k=r}^{c-1} rho_k for c = r .. c1-1 (0-based), empty product first
            prods = np.empty(c1 - r)
            prods[0] = 1.0
            np.cumprod(rho[r : c1 - 1], out=prods[1:])
            out[r - r0, start - c0 :] = -lead * conj_cols[start - c0 :] * prods[start - r :]
        return out

    def corner(self, n: int) -> np.ndarray:
        """The ``n x n`` upper-left corner ``pi_n M pi_n`` as a dense array."""
        return self.block(0, n, 0, n)

    @cached_property
    def entries(self) -> np.ndarray:
        """The whole truncation as a read-only dense array."""
        out = self.corner(self.size)
        out.setflags(write=False)
        return out

    def entry(self, i: int, j: int) -> complex:
        """Matrix entry ``M_{i,j}`` (1-based)."""
        if not (1 <= i <= self.size and 1 <= j <= self.size):
            raise BoundsError(f"entry ({i}, {j}) outside a {self.size}x{self.size} truncation")
        return self.block(i - 1, i, j - 1, j)[0, 0]

    def subdiagonal(self) -> np.ndarray:
        """``M_{k+1,k}`` for ``k = 1..N``; the last value is :attr:`next_subdiagonal`."""
        N = self.size
        if self.source == "ggt":
            return self._rho[:N].astype(float)
        if self.source == "jacobi":
            sub = np.array(self._a[: N - 1], dtype=float)
        else:
            sub = np.diag(self._dense, -1).copy()
        return np.append(sub, self.next_subdiagonal)

    def diagonal(self) -> np.ndarray:
        """``M_{k,k}`` for ``k = 1..N``."""
        if self.source == "jacobi":
            return np.array(self._b[: self.size], dtype=float)
        if self._dense is not None:
            return np.diag(self._dense).copy()
        alpha = self._alpha
        prev = np.concatenate([[-1.0], alpha[: self.size - 1]])
        return -prev * np.conj(alpha[: self.size])

    def _row_sum_norm(self) -> float:
        N = self.size
        if self._dense is not None:
            return float(np.max(np.sum(np.abs(self._dense), axis=1)))
        if self.source == "jacobi":
            a = np.abs(self._a[: N - 1])
            sums = np.abs(self._b[:N]).copy()
            sums[:-1] += a
            sums[1:] += a
            return float(np.max(sums))
        # S_i = sum_{j>=i} |alpha_{j-1}| prod_{k=i-1}^{j-2} rho_k obeys
        # S_i = |alpha_{i-1}| + rho_{i-1} S_{i+1}.
        alpha, rho = np.abs(self._alpha[:N]), self._rho[:N]
        tail = np.empty(N)
        acc = 0.0
        for r in range(N - 1, -1, -1):
            acc = alpha[r] + rho[r] * acc
            tail[r] = acc
        lead = np.concatenate([[1.0], alpha[: N - 1]])
        sums = lead * tail
        sums[1:] += rho[: N - 1]
        return float(np.max(sums))

    def to_json(self) -> dict:
        return {"N": self.size, "source": self.source, "R_est": self.R_est, "row_sum_norm": self.row_sum_norm, "meta": self.meta}


@dataclass(frozen=True)
class MatrixWindow:
    """A ``(2m+1) x (2m+1)`` block centred on the diagonal entry ``(center, center)``.

    Row/column offset ``k`` in ``-m..m`` refers to array position ``k + m``.
    """

    half_width: int
    center: int
    entries: np.ndarray

    def at(self, k: int, l: int) -> complex:
        """Entry at offsets ``(k, l)`` relative to the centre."""
        m = self.half_width
        if abs(k) > m or abs(l) > m:
            raise BoundsError("offset outside window")
        return self.entries[k + m, l + m]


# -- constructions -----------------------------------------------------


def ggt_truncation(seq: VerblunskySequence, N: int) -> HessenbergTruncation:
    """GGT truncation from Verblunsky coefficients ``alpha_0 .. alpha_{N-1}``."""
    N = int(N)
    if N < 1:
        raise InvalidParameterError("N must be positive")
    if isinstance(seq, VerblunskySequence):
        alpha = np.array(seq.take(N), dtype=complex)
        meta = {"sequence": seq.spec} if seq.spec is not None else {}
    else:
        alpha = np.array(seq, dtype=complex)[:N]
        meta = {}
        if alpha.size < N:
            raise BoundsError(f"need {N} coefficients, got {alpha.size}")
    bad = np.flatnonzero(~(np.abs(alpha) < 1.0))
    if bad.size:
        i = int(bad[0])
        raise InvalidCoefficientError(f"|alpha_{i}| = {abs(alpha[i])} is not < 1", index=i)
    alpha.setflags(write=False)
    return HessenbergTruncation(N, "ggt", alpha=alpha, next_subdiagonal=_rho(alpha[N - 1 : N])[0], meta=meta)


def jacobi_truncation(seq: JacobiSequence, N: int) -> HessenbergTruncation:
    """Symmetric tridiagonal truncation with ``b_n`` on the diagonal and ``a_n`` beside it."""
    N = int(N)
    if N < 1:
        raise InvalidParameterError("N must be positive")
    if isinstance(seq, JacobiSequence):
        if seq.length is not None and seq.length < N:
            raise BoundsError(f"Jacobi sequence has {seq.length} entries, need {N}")
        a, b = seq.take(N)
        meta = {"sequence": seq.spec} if seq.spec is not None else {}
    else:
        a, b = (np.asarray(x, dtype=float) for x in seq)
        meta = {}
        if b.size < N or a.size < N - 1:
            raise BoundsError(f"need {N} Jacobi parameters")
    a = np.array(a[:N], dtype=float)
    b = np.array(b[:N], dtype=float)
    bad = np.flatnonzero(~(a > 0))
    if bad.size:
        i = int(bad[0])
        raise InvalidCoefficientError(f"a_{i + 1} = {a[i]} is not positive", index=i + 1)
    nxt = a[N - 1] if a.size >= N else np.nan
    return HessenbergTruncation(N, "jacobi", a=a[: N - 1] if N > 1 else a[:0], b=b, next_subdiagonal=nxt, meta=meta)


def arnoldi_truncation(mu: DiscretePlanarMeasure, N: int) -> HessenbergTruncation:
    """Hessenberg matrix of multiplication by ``z`` in the orthonormal basis of ``L^2(mu)``.

    Classical Gram-Schmidt applied twice per step keeps the basis orthonormal
    to ``1e-10``.  Requires ``N <= mu.count - 1`` so that ``M_{N+1,N}`` exists.
    """
    N = int(N)
    if N < 1:
        raise InvalidParameterError("N must be positive")
    if N > mu.count - 1:
        raise InvalidParameterError(
            f"a measure with {mu.count} points has orthonormal polynomials only up to degree {mu.count - 1}"
        )
    z = mu.points
    Q = np.zeros((mu.count, N + 1), dtype=complex)
    H = np.zeros((N + 1, N), dtype=complex)
    Q[:, 0] = np.sqrt(mu.weights)
    for j in range(N):
        w = z * Q[:, j]
        basis = Q[:, : j + 1]
        h = basis.conj().T @ w
        w = w - basis @ h
        h2 = basis.conj().T @ w
        w = w - basis @ h2
        h = h + h2
        beta = np.linalg.norm(w)
        if beta < ARNOLDI_BREAKDOWN:
            raise DegenerateMeasureError(f"orthonormal polynomial of degree {j + 1} does not exist (norm {beta:.3e})")
        H[: j + 1, j] = h
        H[j + 1, j] = beta
        Q[:, j + 1] = w / beta
    gram = Q.conj().T @ Q
    residual = float(np.max(np.abs(gram - np.eye(N + 1))))
    if residual > ORTHONORMALITY_TOL:
        raise DegenerateMeasureError(f"lost orthonormality: residual {residual:.3e}")
    dense = H[:N, :N].copy()
    dense.setflags(write=False)
    meta = {"measure": {"count": mu.count}, "orthonormality_residual": residual}
    return HessenbergTruncation(N, "arnoldi", dense=dense, next_subdiagonal=H[N, N - 1].real, meta=meta)


# -- derived quantities ------------------------------------------------


def window(trunc: HessenbergTruncation, n: int, m: int) -> MatrixWindow:
    """The ``(2m+1)``-square block centred on ``(n, n)``; needs ``1 <= n-m`` and ``n+m <= N``."""
    n, m = int(n), int(m)
    if m < 0:
        raise InvalidParameterError("half-width must be nonnegative")
    if n - m < 1 or n + m > trunc.size:
        raise BoundsError(f"window centred at {n} with half-width {m} leaves a {trunc.size}x{trunc.size} truncation")
    entries = trunc.block(n - m - 1, n + m, n - m - 1, n + m)
    entries.setflags(write=False)
    return MatrixWindow(m, n, entries)


def kappa_ratio(trunc: HessenbergTruncation, n: int) -> complex:
    """``kappa_{n-2} / kappa_{n-1} = M_{n,n-1}``, for ``2 <= n <= N``."""
    n = int(n)
    if not 2 <= n <= trunc.size:
        raise BoundsError(f"kappa ratio index {n} outside 2..{trunc.size}")
    return complex(trunc.subdiagonal()[n - 2])


def _check_full_reach(trunc, n, m):
    if m > 0 and n + m > trunc.size:
        raise ContaminationError(
            f"(M^{m})_{{{n},{n}}} reaches index {n + m} beyond the truncation size {trunc.size}"
        )


def matrix_power_diagonal(trunc: HessenbergTruncation, m: int, n: int, mode: str = "truncated") -> complex:
    """Diagonal entry ``(n, n)`` of a matrix power.

    ``mode="truncated"`` raises the ``n x n`` corner ``pi_n M pi_n`` to the
    ``m``-th power; ``mode="full"`` uses the whole matrix ``M``, which at
    ``(n, n)`` only involves indices up to ``n + m - 1``.  The full mode
    refuses ``n + m > N``.  Computed by repeated products with ``e_n``.
    """
    m, n = int(m), int(n)
    if m < 0:
        raise InvalidParameterError("power must be nonnegative")
    if not 1 <= n <= trunc.size:
        raise BoundsError(f"index {n} outside 1..{trunc.size}")
    if mode == "truncated":
        size = n
    elif mode == "full":
        _check_full_reach(trunc, n, m)
        size = min(trunc.size, n + m)
    else:
        raise InvalidParameterError(f"unknown mode {mode!r}")
    if m == 0:
        return 1.0 + 0j
    A = trunc.corner(size)
    v = np.zeros(size, dtype=complex)
    v[n - 1] = 1.0
    for _ in range(m):
        v = A @ v
    return complex(v[n - 1])


def diagonal_of_power(trunc: HessenbergTruncation, m: int, n_max: int, mode: str = "full") -> np.ndarray:
    """``(M^m)_{k,k}`` for ``k = 1..n_max`` in one dense pass.

    ``mode="full"`` needs ``n_max + m <= N``; ``mode="corner"`` returns the
    diagonal of ``(pi_{n_max} M pi_{n_max})^m`` instead.
    """
    m, n_max = int(m), int(n_max)
    if not 1 <= n_max <= trunc.size:
        raise BoundsError(f"index {n_max} outside 1..{trunc.size}")
    if mode == "full":
        _check_full_reach(trunc, n_max, m)
        size = min(trunc.size, n_max + m)
    elif mode == "corner":
        size = n_max
    else:
        raise InvalidParameterError(f"unknown mode {mode!r}")
    A = trunc.corner(size).astype(complex)
    P = np.linalg.matrix_power(A, m) if m > 0 else np.eye(size, dtype=complex)
    return np.diag(P)[:n_max].copy()
