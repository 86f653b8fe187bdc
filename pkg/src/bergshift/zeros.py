"""Zeros of ``P_n`` as eigenvalues of the ``n x n`` corner, and their moments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import BoundsError, EigensolverError, InvalidParameterError
from .hessenberg import HessenbergTruncation
from .polynomials import monic_values

__all__ = ["ZeroSet", "zeros", "zero_moments", "canonical_sort"]


def canonical_sort(values) -> np.ndarray:
    """Sort by modulus, ties broken by argument in ``(-pi, pi]``."""
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((np.angle(values), np.round(np.abs(values), 12)))
    return values[order]


@dataclass(frozen=True)
class ZeroSet:
    """Zeros of ``P_n`` repeated by multiplicity.

    ``residual`` is ``max |P_n(zeta) / P_n'(zeta)|`` over the zeros, i.e. the
    largest Newton correction; a zero where ``P_n`` vanishes exactly
    contributes 0.
    """

    degree: int
    zeros: np.ndarray
    residual: float

    def __len__(self) -> int:
        return self.degree


def _residual(trunc, n, zs) -> float:
    if n == 0:
        return 0.0
    Q, _, D = monic_values(trunc, n, zs, derivative=True)
    val, der = Q[n], D[n]
    with np.errstate(divide="ignore", invalid="ignore"):
        step = np.where(val == 0, 0.0, np.abs(val) / np.abs(der))
    step = np.where(np.isnan(step), np.inf, step)
    return float(np.max(step))


def zeros(trunc: HessenbergTruncation, n: int) -> ZeroSet:
    """Eigenvalues of ``pi_n M pi_n``.

    Jacobi truncations use the symmetric tridiagonal solver; everything else
    goes through LAPACK's nonsymmetric QR iteration on the (already upper
    Hessenberg) corner.
    """
    n = int(n)
    if not 0 <= n <= trunc.size:
        raise BoundsError(f"degree {n} outside 0..{trunc.size}")
    if n == 0:
        return ZeroSet(0, np.empty(0, dtype=complex), 0.0)
    try:
        if trunc.source == "jacobi":
            H = trunc.corner(n)
            ev = scipy.linalg.eigvalsh_tridiagonal(np.diag(H).real, np.diag(H, 1).real).astype(complex)
        else:
            ev = scipy.linalg.eigvals(trunc.corner(n).astype(complex), check_finite=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverError(f"eigenvalues of the {n}x{n} corner did not converge: {exc}") from exc
    ev = canonical_sort(ev)
    ev.setflags(write=False)
    return ZeroSet(n, ev, _residual(trunc, n, ev))


def zero_moments(zs: ZeroSet, j: int) -> complex:
    """``(1/n) sum_i zeta_i^j``, the ``j``-th moment of the zero counting measure."""
    j = int(j)
    if j < 0:
        raise InvalidParameterError("order must be nonnegative")
    if zs.degree == 0:
        raise InvalidParameterError("the zero counting measure of P_0 is empty")
    return complex(np.mean(zs.zeros**j))
