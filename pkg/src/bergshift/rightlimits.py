"""Finite-window diagnostics for right limits and ratio matching.

A right limit is a genuine limit along a subsequence and cannot be observed
at finite size.  Here it is replaced by a dispersion test: windows of
half-width ``m`` taken along the tail of a subsequence must stay within
``epsilon`` of the last one.  Suprema over ``|z| > r`` are approximated on
a uniform grid of ``G`` points on ``|z| = r``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, InvalidParameterError
from .hessenberg import HessenbergTruncation, MatrixWindow, window
from .polynomials import circle_grid, ratio_table

__all__ = [
    "SubsequenceSpec",
    "RightLimitEstimate",
    "RatioDifferenceProfile",
    "detect_right_limit",
    "right_limit_difference",
    "window_difference_profile",
    "normalized_ratio_difference",
    "best_match",
    "best_match_distance",
]

DEFAULT_GRID = 64


@dataclass(frozen=True)
class SubsequenceSpec:
    """Strictly increasing positive indices, with how they were produced."""

    kind: str
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        if idx.ndim != 1 or idx.size == 0:
            raise InvalidParameterError("subsequence must be a non-empty list of indices")
        if idx[0] < 1 or np.any(np.diff(idx) <= 0):
            raise InvalidParameterError("subsequence indices must be positive and strictly increasing")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return int(self.indices.size)

    @classmethod
    def explicit(cls, indices) -> "SubsequenceSpec":
        return cls("explicit-list", np.asarray(list(indices), dtype=int))

    @classmethod
    def arithmetic(cls, offset: int, stride: int, stop: int) -> "SubsequenceSpec":
        """``offset, offset + stride, ...`` up to and including ``stop``."""
        if stride < 1:
            raise InvalidParameterError("stride must be positive")
        return cls("arithmetic", np.arange(offset, stop + 1, stride))

    @classmethod
    def parse(cls, text: str, stop: int | None = None) -> "SubsequenceSpec":
        """``"3,5,9"`` or ``"offset:stride[:stop]"``."""
        text = text.strip()
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 3:
                stop = parts[2]
            elif len(parts) != 2 or stop is None:
                raise InvalidParameterError(f"cannot parse subsequence {text!r}; use offset:stride:stop")
            return cls.arithmetic(parts[0], parts[1], stop)
        try:
            return cls.explicit(int(p) for p in text.split(",") if p.strip())
        except ValueError:
            raise InvalidParameterError(f"cannot parse subsequence {text!r}") from None

    def shifted(self, k: int) -> "SubsequenceSpec":
        return SubsequenceSpec(self.kind, self.indices - int(k))

    def to_text(self) -> str:
        return ",".join(str(i) for i in self.indices)


@dataclass(frozen=True)
class RightLimitEstimate:
    half_width: int
    window: MatrixWindow
    dispersion: float
    subsequence: SubsequenceSpec
    epsilon: float

    @property
    def converged(self) -> bool:
        return self.dispersion <= self.epsilon


def _tail(count: int) -> slice:
    return slice(count // 2, count)


def detect_right_limit(trunc: HessenbergTruncation, sub: SubsequenceSpec, m: int, epsilon: float = 1e-3) -> RightLimitEstimate:
    """Windows of half-width ``m`` along ``sub``; dispersion is the largest
    entrywise distance to the final window over the second half of ``sub``."""
    if len(sub) < 4:
        raise InsufficientDataError(f"need at least 4 subsequence indices, got {len(sub)}")
    windows = [window(trunc, n, m) for n in sub.indices]
    final = windows[-1]
    dispersion = max(float(np.max(np.abs(w.entries - final.entries))) for w in windows[_tail(len(windows))])
    return RightLimitEstimate(int(m), final, dispersion, sub, float(epsilon))


def window_difference_profile(truncA, truncB, subA: SubsequenceSpec, subB: SubsequenceSpec, m: int) -> np.ndarray:
    """Entrywise max ``|window_A(n_k) - window_B(m_k)|`` for every paired index ``k``."""
    if len(subA) != len(subB):
        raise InvalidParameterError(f"subsequence lengths differ: {len(subA)} vs {len(subB)}")
    return np.array(
        [
            float(np.max(np.abs(window(truncA, n, m).entries - window(truncB, k, m).entries)))
            for n, k in zip(subA.indices, subB.indices)
        ]
    )


def right_limit_difference(truncA, truncB, subA: SubsequenceSpec, subB: SubsequenceSpec, m: int) -> float:
    """Max window deviation over the tail half of the paired subsequences."""
    profile = window_difference_profile(truncA, truncB, subA, subB, m)
    return float(np.max(profile[_tail(profile.size)]))


@dataclass(frozen=True)
class RatioDifferenceProfile:
    """``sup_grid |p_{n_k+j-1}/p_{n_k+j}(A) - p_{m_k+j-1}/p_{m_k+j}(B)|`` per ``(k, j)``."""

    subA: SubsequenceSpec
    subB: SubsequenceSpec
    j_values: np.ndarray
    radius: float
    grid_size: int
    sup_diff: np.ndarray  # shape (len(sub), len(j_values))

    @property
    def tail_max(self) -> float:
        return float(np.max(self.sup_diff[_tail(self.sup_diff.shape[0])]))

    def to_rows(self):
        for k, (n, mk) in enumerate(zip(self.subA.indices, self.subB.indices)):
            for c, j in enumerate(self.j_values):
                yield k, int(n), int(mk), int(j), float(self.sup_diff[k, c])


def _check_radius(r, *truncs):
    bound = max(t.R_est for t in truncs)
    if not r > bound:
        raise InvalidParameterError(f"radius {r} must exceed max R_est = {bound}")


def normalized_ratio_difference(
    truncA, truncB, subA: SubsequenceSpec, subB: SubsequenceSpec, j_range, r: float, G: int = DEFAULT_GRID
) -> RatioDifferenceProfile:
    """Grid suprema of normalized ratio differences along paired subsequences."""
    if len(subA) != len(subB):
        raise InvalidParameterError(f"subsequence lengths differ: {len(subA)} vs {len(subB)}")
    _check_radius(r, truncA, truncB)
    j_values = np.asarray(sorted(set(int(j) for j in j_range)))
    if j_values.size == 0:
        raise InvalidParameterError("empty j range")
    lowA, lowB = subA.indices[0] + j_values[0], subB.indices[0] + j_values[0]
    if min(lowA, lowB) < 1:
        raise InvalidParameterError("n_k + j must be at least 1")
    z = circle_grid(r, G)
    topA = int(subA.indices[-1] + j_values[-1])
    topB = int(subB.indices[-1] + j_values[-1])
    ratiosA = ratio_table(truncA, topA, z, normalized=True)
    ratiosB = ratio_table(truncB, topB, z, normalized=True)
    rowsA = subA.indices[:, None] + j_values[None, :] - 1
    rowsB = subB.indices[:, None] + j_values[None, :] - 1
    sup_diff = np.max(np.abs(ratiosA[rowsA] - ratiosB[rowsB]), axis=-1)
    return RatioDifferenceProfile(subA, subB, j_values, float(r), int(G), sup_diff)


def best_match(truncA, truncB, n: int, k: int, r: float, G: int = DEFAULT_GRID, H: int | None = None) -> tuple[float, int]:
    """Minimize over ``m`` in ``(k, H]`` the grid supremum of
    ``|p_{m-1}/p_m (A) - p_{n-1}/p_n (B)|``; returns ``(distance, m)``.

    Ties resolve to the smallest ``m``.
    """
    n, k = int(n), int(k)
    H = truncA.size if H is None else int(H)
    if H > truncA.size:
        raise InvalidParameterError(f"search horizon {H} exceeds the truncation size {truncA.size}")
    if not 0 <= k < H:
        raise InvalidParameterError(f"empty search range ({k}, {H}]")
    _check_radius(r, truncA, truncB)
    z = circle_grid(r, G)
    target = ratio_table(truncB, n, z, normalized=True)[n - 1]
    ratios = ratio_table(truncA, H, z, normalized=True)[k:]
    dist = np.max(np.abs(ratios - target[None, :]), axis=1)
    best = int(np.argmin(dist))
    return float(dist[best]), k + 1 + best


def best_match_distance(truncA, truncB, n: int, k: int, r: float, G: int = DEFAULT_GRID, H: int | None = None) -> float:
    """The matching functional ``inf_{k < m <= H} sup_{|z| = r} |...|`` (see :func:`best_match`)."""
    return best_match(truncA, truncB, n, k, r, G, H)[0]
