"""Measure models given by recursion coefficients.

A measure on the unit circle is encoded by its Verblunsky coefficients
``alpha_0, alpha_1, ...`` (all strictly inside the unit disk); a measure on
the real line by its Jacobi parameters ``a_n > 0`` and real ``b_n``
(``n >= 1``).  Sequences are either finite arrays or generator backed: a
vectorized function of the index array, materialized lazily and memoized.

Every sequence remembers a JSON-able *spec* dictionary
``{"model", "kind", "params", "seed"}`` from which it can be rebuilt with
:func:`from_spec`.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BoundsError, InvalidCoefficientError, InvalidParameterError

__all__ = [
    "DEFAULT_HORIZON",
    "VerblunskySequence",
    "JacobiSequence",
    "DiscretePlanarMeasure",
    "DistributionSpec",
    "alexandrov",
    "strip",
    "constant_verblunsky",
    "decaying_verblunsky",
    "constant_jacobi",
    "periodic_jacobi",
    "universal_circle_sequence",
    "universal_jacobi_pair",
    "sample_iid",
    "degenerate_pair",
    "roots_of_unity_measure",
    "parse_complex",
    "from_spec",
]

#: Largest index an unbounded sequence will materialize unless told otherwise.
DEFAULT_HORIZON = 10_000_000

_STREAM_VERBLUNSKY = 0
_STREAM_JACOBI_A = 1
_STREAM_JACOBI_B = 2


def parse_complex(value) -> complex:
    """Read a complex number from a JSON/CLI friendly representation.

    Accepts numbers, ``[re, im]`` pairs, ``{"re": .., "im": ..}`` and
    strings such as ``"0.3-0.1j"`` or ``"2+0i"``.
    """
    if isinstance(value, (int, float, complex, np.number)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and "re" in value:
        return complex(float(value["re"]), float(value.get("im", 0.0)))
    if isinstance(value, str):
        text = value.strip().replace(" ", "").replace("i", "j")
        try:
            return complex(text)
        except ValueError:
            pass
    raise InvalidParameterError(f"cannot interpret {value!r} as a complex number")


def _complex_json(z: complex):
    z = complex(z)
    return [z.real, z.imag]


class _LazyArray:
    """Memoized materialization of ``func(indices)`` for indices ``0, 1, ...``.

    ``func`` receives an integer ndarray and returns an array of the same
    length.  Concurrent readers see identical values: extension happens under
    a lock and cached entries are never rewritten.
    """

    def __init__(self, func, dtype, length=None, horizon=DEFAULT_HORIZON, check=None):
        self._func = func
        self._dtype = dtype
        self.length = length
        self.horizon = horizon if length is None else length
        self._check = check
        self._cache = np.empty(0, dtype=dtype)
        self._lock = threading.Lock()

    @classmethod
    def from_values(cls, values, dtype, check=None):
        values = np.array(values, dtype=dtype)
        if check is not None:
            check(values, 0)
        obj = cls(None, dtype, length=len(values), check=None)
        values.setflags(write=False)
        obj._cache = values
        return obj

    def take(self, n: int) -> np.ndarray:
        n = int(n)
        if n < 0:
            raise BoundsError("negative length requested")
        if n > self.horizon:
            what = "length" if self.length is not None else "horizon"
            raise BoundsError(f"index {n - 1} is beyond the sequence {what} {self.horizon}")
        cache = self._cache
        if len(cache) < n:
            with self._lock:
                cache = self._cache
                if len(cache) < n:
                    start = len(cache)
                    target = min(self.horizon, max(n, 2 * start))
                    idx = np.arange(start, target)
                    fresh = np.asarray(self._func(idx), dtype=self._dtype)
                    if fresh.shape != idx.shape:
                        fresh = np.broadcast_to(fresh, idx.shape).astype(self._dtype)
                    if self._check is not None:
                        self._check(fresh, start)
                    cache = np.concatenate([cache, fresh])
                    cache.setflags(write=False)
                    self._cache = cache
        return cache[:n]


def _check_disk(values: np.ndarray, start: int) -> None:
    bad = np.flatnonzero(~(np.abs(values) < 1.0))
    if bad.size:
        i = int(bad[0])
        raise InvalidCoefficientError(
            f"Verblunsky coefficient alpha_{start + i} = {complex(values[i])} "
            "does not lie strictly inside the unit disk",
            index=start + i,
        )


class VerblunskySequence:
    """Verblunsky coefficients ``alpha_n`` (``n >= 0``) of a circle measure.

    Parameters
    ----------
    values : sequence of complex, optional
        Finite list of coefficients.
    func : callable, optional
        Vectorized generator ``func(n: ndarray) -> ndarray`` for an unbounded
        (or ``length``-limited) sequence.
    length : int, optional
        Length of a generator-backed sequence; ``None`` means unbounded.
    horizon : int
        Largest materializable length of an unbounded sequence.
    spec : dict, optional
        Serializable description used by :meth:`to_spec`.
    """

    model = "verblunsky"

    def __init__(self, values=None, func=None, length=None, horizon=DEFAULT_HORIZON, spec=None):
        if (values is None) == (func is None):
            raise InvalidParameterError("give exactly one of values or func")
        if values is not None:
            self._data = _LazyArray.from_values(values, complex, check=_check_disk)
            if len(self._data.take(self._data.length)) == 0:
                raise InvalidParameterError("empty Verblunsky sequence")
        else:
            if length is not None and length < 1:
                raise InvalidParameterError("sequence length must be positive")
            self._data = _LazyArray(func, complex, length=length, horizon=horizon, check=_check_disk)
        self.spec = spec

    @property
    def length(self):
        """Number of coefficients, or ``None`` for an unbounded sequence."""
        return self._data.length

    @property
    def horizon(self):
        return self._data.horizon

    def take(self, n: int) -> np.ndarray:
        """Return ``alpha_0, ..., alpha_{n-1}`` as a read-only array."""
        return self._data.take(n)

    def __getitem__(self, n: int) -> complex:
        if n < 0:
            raise BoundsError("Verblunsky coefficients are indexed from 0")
        return complex(self.take(n + 1)[n])

    def __len__(self) -> int:
        if self.length is None:
            raise TypeError("unbounded sequence has no len(); use .length")
        return self.length

    def __repr__(self) -> str:
        kind = (self.spec or {}).get("kind", "custom")
        return f"VerblunskySequence(kind={kind!r}, length={self.length})"

    def to_spec(self) -> dict:
        """JSON-able description; finite ad hoc sequences become ``explicit``."""
        if self.spec is not None:
            return self.spec
        if self.length is None:
            raise InvalidParameterError("generator-backed sequence without a spec cannot be serialized")
        return {
            "model": "verblunsky",
            "kind": "explicit",
            "params": {"values": [_complex_json(v) for v in self.take(self.length)]},
            "seed": None,
        }


def _check_jacobi(bound):
    def check_a(values, start):
        bad = np.flatnonzero(~(values > 0))
        if bad.size:
            i = int(bad[0])
            raise InvalidCoefficientError(
                f"Jacobi parameter a_{start + i + 1} = {values[i]} is not positive", index=start + i + 1
            )
        _check_bound(values, start, "a", bound)

    def check_b(values, start):
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            i = int(bad[0])
            raise InvalidCoefficientError(f"Jacobi parameter b_{start + i + 1} is not finite", index=start + i + 1)
        _check_bound(values, start, "b", bound)

    return check_a, check_b


def _check_bound(values, start, name, bound):
    if bound is None:
        return
    bad = np.flatnonzero(np.abs(values) > bound)
    if bad.size:
        i = int(bad[0])
        raise InvalidCoefficientError(
            f"Jacobi parameter {name}_{start + i + 1} = {values[i]} exceeds the declared bound {bound}",
            index=start + i + 1,
        )


class JacobiSequence:
    """Jacobi parameters ``a_n > 0`` and real ``b_n`` for ``n >= 1``.

    ``take(n)`` returns the pair of arrays ``(a_1..a_n, b_1..b_n)``; arrays are
    0-based so ``a[k]`` holds ``a_{k+1}``.  ``bound`` (if given) is enforced on
    every materialized entry.  An explicit finite block may omit the last
    off-diagonal value (``len(a) == len(b) - 1``); ``take`` then returns the
    shorter ``a`` at full length.
    """

    model = "jacobi"

    def __init__(
        self,
        a=None,
        b=None,
        a_func=None,
        b_func=None,
        length=None,
        bound=None,
        horizon=DEFAULT_HORIZON,
        spec=None,
    ):
        check_a, check_b = _check_jacobi(bound)
        if a is not None and b is not None:
            if len(a) not in (len(b), len(b) - 1):
                raise InvalidParameterError("need len(a) == len(b) or len(a) == len(b) - 1")
            if len(b) == 0:
                raise InvalidParameterError("empty Jacobi sequence")
            self._a = _LazyArray.from_values(a, float, check=check_a)
            self._b = _LazyArray.from_values(b, float, check=check_b)
        elif a_func is not None and b_func is not None:
            if length is not None and length < 1:
                raise InvalidParameterError("sequence length must be positive")
            self._a = _LazyArray(a_func, float, length=length, horizon=horizon, check=check_a)
            self._b = _LazyArray(b_func, float, length=length, horizon=horizon, check=check_b)
        else:
            raise InvalidParameterError("give either arrays (a, b) or generators (a_func, b_func)")
        self.bound = bound
        self.spec = spec

    @property
    def length(self):
        return self._b.length

    @property
    def horizon(self):
        return self._b.horizon

    def take(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        b = self._b.take(n)
        return self._a.take(min(n, self._a.horizon)), b

    def a(self, n: int) -> float:
        """The off-diagonal parameter ``a_n`` (1-based)."""
        if n < 1:
            raise BoundsError("Jacobi parameters are indexed from 1")
        return float(self._a.take(n)[n - 1])

    def b(self, n: int) -> float:
        """The diagonal parameter ``b_n`` (1-based)."""
        if n < 1:
            raise BoundsError("Jacobi parameters are indexed from 1")
        return float(self._b.take(n)[n - 1])

    def __len__(self) -> int:
        if self.length is None:
            raise TypeError("unbounded sequence has no len(); use .length")
        return self.length

    def __repr__(self) -> str:
        kind = (self.spec or {}).get("kind", "custom")
        return f"JacobiSequence(kind={kind!r}, length={self.length})"

    def to_spec(self) -> dict:
        if self.spec is not None:
            return self.spec
        if self.length is None:
            raise InvalidParameterError("generator-backed sequence without a spec cannot be serialized")
        a, b = self.take(self.length)
        return {
            "model": "jacobi",
            "kind": "explicit",
            "params": {"a": a.tolist(), "b": b.tolist()},
            "seed": None,
        }


class DiscretePlanarMeasure:
    """Finitely many weighted points in the plane, normalized to mass one.

    Points are sorted canonically (by real part, then imaginary part) so that
    everything derived from the measure is platform deterministic.
    """

    def __init__(self, points, weights=None, normalize=True):
        points = np.asarray(points, dtype=complex).ravel()
        if weights is None:
            weights = np.full(points.shape, 1.0)
        weights = np.asarray(weights, dtype=float).ravel()
        if points.size < 2:
            raise InvalidParameterError("a discrete measure needs at least 2 support points")
        if weights.shape != points.shape:
            raise InvalidParameterError("points and weights differ in length")
        if not np.all(weights > 0):
            raise InvalidParameterError("weights must be strictly positive")
        total = weights.sum()
        if normalize:
            weights = weights / total
        elif abs(total - 1.0) > 1e-14:
            raise InvalidParameterError(f"weights sum to {total}, not 1")
        order = np.lexsort((points.imag, points.real))
        points, weights = points[order], weights[order]
        if np.any(points[1:] == points[:-1]):
            raise InvalidParameterError("support points must be pairwise distinct")
        points.setflags(write=False)
        weights.setflags(write=False)
        self.points = points
        self.weights = weights

    @property
    def count(self) -> int:
        return int(self.points.size)

    def moment(self, j: int) -> complex:
        """``sum_k w_k z_k**j``."""
        return complex(np.sum(self.weights * self.points**j))

    def __repr__(self) -> str:
        return f"DiscretePlanarMeasure(count={self.count})"


def roots_of_unity_measure(count: int, rotation: float = 0.0) -> DiscretePlanarMeasure:
    """Uniform measure on the ``count``-th roots of unity."""
    k = np.arange(count)
    return DiscretePlanarMeasure(np.exp(1j * (2 * np.pi * k / count + rotation)))


# -- distributions ---------------------------------------------------------

_DIST_KINDS = ("atomic", "disk", "interval")


@dataclass(frozen=True)
class DistributionSpec:
    """A coefficient distribution for i.i.d. sampling.

    ``kind`` is ``"atomic"`` (``params = {"atoms": [...], "probs": [...]}``),
    ``"disk"`` (uniform on the disk ``|z| <= radius``) or ``"interval"``
    (uniform on ``[low, high]``).  ``target`` is ``"circle"`` for Verblunsky
    coefficients (support must sit strictly inside the unit disk) or
    ``"line"`` for Jacobi parameters.
    """

    kind: str
    params: dict = field(default_factory=dict)
    target: str = "circle"

    def __post_init__(self):
        if self.kind not in _DIST_KINDS:
            raise InvalidParameterError(f"unknown distribution kind {self.kind!r}")
        if self.target not in ("circle", "line"):
            raise InvalidParameterError(f"unknown distribution target {self.target!r}")
        if self.kind == "atomic":
            atoms = [parse_complex(a) for a in self.params.get("atoms", ())]
            probs = [float(p) for p in self.params.get("probs", [1.0 / max(len(atoms), 1)] * len(atoms))]
            if not atoms or len(atoms) != len(probs):
                raise InvalidParameterError("atomic distribution needs matching atoms and probs")
            if any(p <= 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-12:
                raise InvalidParameterError("atomic probabilities must be positive and sum to 1")
            if self.target == "line" and any(a.imag != 0 for a in atoms):
                raise InvalidParameterError("line-valued atoms must be real")
        elif self.kind == "disk":
            if self.target == "line":
                raise InvalidParameterError("disk distributions are circle-valued only")
            if not float(self.params.get("radius", -1)) >= 0:
                raise InvalidParameterError("disk distribution needs a radius >= 0")
        else:
            low, high = float(self.params["low"]), float(self.params["high"])
            if not low <= high:
                raise InvalidParameterError("interval needs low <= high")
        if self.target == "circle" and not self.support_radius() < 1.0:
            raise InvalidParameterError(
                "circle-valued distribution must be supported strictly inside the unit disk"
            )

    def atoms(self) -> tuple[np.ndarray, np.ndarray]:
        atoms = np.array([parse_complex(a) for a in self.params["atoms"]])
        n = len(atoms)
        probs = np.array([float(p) for p in self.params.get("probs", [1.0 / n] * n)])
        return atoms, probs

    def support_radius(self) -> float:
        if self.kind == "atomic":
            return float(np.max(np.abs(self.atoms()[0])))
        if self.kind == "disk":
            return float(self.params["radius"])
        return max(abs(float(self.params["low"])), abs(float(self.params["high"])))

    def support_min(self) -> float:
        """Smallest real value in the support (line-valued use)."""
        if self.kind == "atomic":
            return float(np.min(self.atoms()[0].real))
        return float(self.params["low"])

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "atomic":
            atoms, probs = self.atoms()
            cdf = np.cumsum(probs)
            idx = np.searchsorted(cdf, rng.random(n), side="right")
            out = atoms[np.minimum(idx, len(atoms) - 1)]
        elif self.kind == "disk":
            u = rng.random((n, 2))
            out = float(self.params["radius"]) * np.sqrt(u[:, 0]) * np.exp(2j * np.pi * u[:, 1])
        else:
            low, high = float(self.params["low"]), float(self.params["high"])
            out = low + (high - low) * rng.random(n)
        if self.target == "line":
            return np.real(out).astype(float)
        return np.asarray(out, dtype=complex)

    def to_json(self) -> dict:
        params = dict(self.params)
        if self.kind == "atomic":
            atoms, probs = self.atoms()
            params = {
                "atoms": [a.real if self.target == "line" else _complex_json(a) for a in atoms],
                "probs": probs.tolist(),
            }
        return {"kind": self.kind, "params": params, "target": self.target}

    @classmethod
    def from_json(cls, data: dict) -> "DistributionSpec":
        return cls(kind=data["kind"], params=dict(data.get("params", {})), target=data.get("target", "circle"))


def _rng(seed: int, stream: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise InvalidParameterError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


def sample_iid(dist, n: int, seed: int):
    """Draw ``n`` i.i.d. coefficients.

    ``dist`` is a circle-valued :class:`DistributionSpec` (returns a
    :class:`VerblunskySequence`) or a pair ``(dist_a, dist_b)`` of
    line-valued distributions (returns a :class:`JacobiSequence`).  The
    ``a`` and ``b`` streams come from independent Philox streams derived from
    ``seed``; a shorter draw is always a prefix of a longer one.
    """
    n = int(n)
    if n < 1:
        raise InvalidParameterError("n must be positive")
    if isinstance(dist, DistributionSpec):
        if dist.target != "circle":
            raise InvalidParameterError("Verblunsky sampling needs a circle-valued distribution")
        values = dist.sample(_rng(seed, _STREAM_VERBLUNSKY), n)
        spec = {"model": "verblunsky", "kind": "iid", "params": {"dist": dist.to_json(), "n": n}, "seed": int(seed)}
        return VerblunskySequence(values=values, spec=spec)
    try:
        dist_a, dist_b = dist
    except (TypeError, ValueError):
        raise InvalidParameterError("Jacobi sampling needs a pair (dist_a, dist_b)") from None
    for d in (dist_a, dist_b):
        if not isinstance(d, DistributionSpec) or d.target != "line":
            raise InvalidParameterError("Jacobi sampling needs line-valued distributions")
    if not dist_a.support_min() > 0:
        raise InvalidParameterError("the a-distribution must be supported in (0, inf)")
    a = dist_a.sample(_rng(seed, _STREAM_JACOBI_A), n)
    b = dist_b.sample(_rng(seed, _STREAM_JACOBI_B), n)
    bound = max(dist_a.support_radius(), dist_b.support_radius())
    spec = {
        "model": "jacobi",
        "kind": "iid",
        "params": {"dist_a": dist_a.to_json(), "dist_b": dist_b.to_json(), "n": n},
        "seed": int(seed),
    }
    return JacobiSequence(a=a, b=b, bound=bound, spec=spec)


# -- transforms and named constructions ------------------------------------


def alexandrov(seq: VerblunskySequence, lam) -> VerblunskySequence:
    """Rotate every coefficient: ``alpha_n -> lam * alpha_n`` with ``|lam| = 1``."""
    lam = parse_complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise InvalidParameterError(f"Alexandrov parameter must have modulus 1, got |lambda| = {abs(lam)}")
    spec = None
    if seq.spec is not None:
        spec = {"model": "verblunsky", "kind": "alexandrov", "params": {"base": seq.spec, "lambda": _complex_json(lam)}, "seed": None}
    if seq.length is not None:
        return VerblunskySequence(values=lam * seq.take(seq.length), spec=spec)
    return VerblunskySequence(func=lambda idx: lam * seq.take(int(idx[-1]) + 1)[idx], horizon=seq.horizon, spec=spec)


def strip(seq: VerblunskySequence, k: int) -> VerblunskySequence:
    """Drop the first ``k`` coefficients (the ``k``-times stripped measure)."""
    k = int(k)
    if k < 0:
        raise InvalidParameterError("k must be nonnegative")
    if k == 0:
        return seq
    spec = None
    if seq.spec is not None:
        spec = {"model": "verblunsky", "kind": "strip", "params": {"base": seq.spec, "k": k}, "seed": None}
    if seq.length is not None:
        if k >= seq.length:
            raise InvalidParameterError(f"stripping {k} coefficients from a sequence of length {seq.length} leaves nothing")
        return VerblunskySequence(values=seq.take(seq.length)[k:], spec=spec)
    return VerblunskySequence(
        func=lambda idx: seq.take(int(idx[-1]) + k + 1)[idx + k], horizon=seq.horizon - k, spec=spec
    )


def constant_verblunsky(value, length=None) -> VerblunskySequence:
    value = parse_complex(value)
    if not abs(value) < 1:
        raise InvalidCoefficientError(f"Verblunsky coefficient alpha_0 = {value} is not inside the unit disk", index=0)
    spec = {"model": "verblunsky", "kind": "constant", "params": {"value": _complex_json(value), "length": length}, "seed": None}
    return VerblunskySequence(func=lambda idx: np.full(idx.shape, value, dtype=complex), length=length, spec=spec)


def decaying_verblunsky(scale=1.0, offset=2.0, length=None) -> VerblunskySequence:
    """``alpha_n = scale / (n + offset)``; the default gives ``1/(n+2)``."""
    scale = parse_complex(scale)
    offset = float(offset)
    if offset <= 0:
        raise InvalidParameterError("offset must be positive")
    spec = {
        "model": "verblunsky",
        "kind": "decay",
        "params": {"scale": _complex_json(scale), "offset": offset, "length": length},
        "seed": None,
    }
    return VerblunskySequence(func=lambda idx: scale / (idx + offset), length=length, spec=spec)


def constant_jacobi(a: float, b: float, length=None) -> JacobiSequence:
    return periodic_jacobi([a], [b], length=length)


def periodic_jacobi(a_period: Sequence[float], b_period: Sequence[float], length=None) -> JacobiSequence:
    """Jacobi parameters repeating with the given periods, starting at ``n = 1``."""
    a_period = np.asarray(a_period, dtype=float)
    b_period = np.asarray(b_period, dtype=float)
    if a_period.size == 0 or b_period.size == 0:
        raise InvalidParameterError("periods must be non-empty")
    if not np.all(a_period > 0):
        raise InvalidCoefficientError("Jacobi parameter a must be positive", index=int(np.argmin(a_period)) + 1)
    bound = float(max(np.max(np.abs(a_period)), np.max(np.abs(b_period))))
    kind = "constant" if a_period.size == 1 and b_period.size == 1 else "periodic"
    params = (
        {"a": float(a_period[0]), "b": float(b_period[0])}
        if kind == "constant"
        else {"a": a_period.tolist(), "b": b_period.tolist()}
    )
    params["length"] = length
    spec = {"model": "jacobi", "kind": kind, "params": params, "seed": None}
    return JacobiSequence(
        a_func=lambda idx: a_period[idx % a_period.size],
        b_func=lambda idx: b_period[idx % b_period.size],
        length=length,
        bound=bound,
        spec=spec,
    )


def _circle_stages(k_max: int):
    """Index blocks of the circle construction: stage ``k`` lists all
    permutations of ``range(k)`` in lexicographic order; stage ``k_max``
    repeats forever."""
    k = 1
    while True:
        for perm in itertools.permutations(range(k)):
            yield from perm
        if k < k_max:
            k += 1


def universal_circle_sequence(base, length: int) -> VerblunskySequence:
    """Sequence whose right limits include every sequence over ``base``.

    Emits ``s_1``, then every permutation of ``{s_1, s_2}``, then every
    permutation of ``{s_1, s_2, s_3}`` and so on (lexicographic order within a
    stage).  Once all of ``base`` is in use the last stage repeats, so every
    permutation block recurs infinitely often.
    """
    base = [parse_complex(s) for s in base]
    if not base:
        raise InvalidParameterError("base must be non-empty")
    for i, s in enumerate(base):
        if not abs(s) < 1:
            raise InvalidParameterError(f"base element {i} = {s} is not inside the unit disk")
    length = int(length)
    if length < 1:
        raise InvalidParameterError("length must be positive")
    idx = np.fromiter(itertools.islice(_circle_stages(len(base)), length), dtype=int, count=length)
    values = np.asarray(base)[idx]
    spec = {
        "model": "verblunsky",
        "kind": "universal",
        "params": {"base": [_complex_json(s) for s in base], "length": length},
        "seed": None,
    }
    return VerblunskySequence(values=values, spec=spec)


def _jacobi_indices(k_max: int, length: int) -> tuple[np.ndarray, np.ndarray]:
    a_idx: list[int] = []
    b_idx: list[int] = []
    k = 1
    while len(a_idx) < length:
        perms = list(itertools.permutations(range(k)))
        reps = math.factorial(k)
        for sigma in perms:
            for _ in range(reps):
                a_idx.extend(sigma)
        for _ in range(reps):
            for tau in perms:
                b_idx.extend(tau)
        if k < k_max:
            k += 1
    return np.array(a_idx[:length]), np.array(b_idx[:length])


def universal_jacobi_pair(base_a, base_b, length: int) -> JacobiSequence:
    """Jacobi parameters whose right limits include every pair of sequences
    over ``base_a`` (off-diagonal) and ``base_b`` (diagonal).

    Stage ``k`` uses the first ``k`` elements of each base.  The a-stream
    repeats each permutation ``k!`` times consecutively; the b-stream repeats
    the full list of permutations ``k!`` times; the two streams stay aligned
    stage by stage.  Stages stop growing at ``min(len(base_a), len(base_b))``
    elements and then repeat.
    """
    base_a = np.asarray(base_a, dtype=float)
    base_b = np.asarray(base_b, dtype=float)
    if base_a.size == 0 or base_b.size == 0:
        raise InvalidParameterError("bases must be non-empty")
    bad = np.flatnonzero(~(base_a > 0))
    if bad.size:
        raise InvalidParameterError(f"base_a element {int(bad[0])} = {base_a[bad[0]]} is not positive")
    length = int(length)
    if length < 1:
        raise InvalidParameterError("length must be positive")
    a_idx, b_idx = _jacobi_indices(min(base_a.size, base_b.size), length)
    spec = {
        "model": "jacobi",
        "kind": "universal",
        "params": {"base_a": base_a.tolist(), "base_b": base_b.tolist(), "length": length},
        "seed": None,
    }
    bound = float(max(np.max(np.abs(base_a)), np.max(np.abs(base_b))))
    return JacobiSequence(a=base_a[a_idx], b=base_b[b_idx], bound=bound, spec=spec)


def degenerate_pair(length: int) -> tuple[VerblunskySequence, VerblunskySequence]:
    """The pair ``alpha_n = 1 - 1/(n+2)`` and ``(1 - 1/(n+2)) e^{in}``.

    Both have normalized ratio limit 0, yet their matrices differ on the
    diagonal by a term tending to ``|1 - e^{-i}| = 2 sin(1/2)``.
    """
    length = int(length)
    if length < 1:
        raise InvalidParameterError("length must be positive")
    n = np.arange(length)
    modulus = 1.0 - 1.0 / (n + 2)
    mu = VerblunskySequence(
        values=modulus.astype(complex),
        spec={"model": "verblunsky", "kind": "degenerate", "params": {"which": "mu", "length": length}, "seed": None},
    )
    nu = VerblunskySequence(
        values=modulus * np.exp(1j * n),
        spec={"model": "verblunsky", "kind": "degenerate", "params": {"which": "nu", "length": length}, "seed": None},
    )
    return mu, nu


# -- serialization ---------------------------------------------------------


def _build_verblunsky(kind: str, params: dict, seed):
    if kind == "constant":
        return constant_verblunsky(params["value"], length=params.get("length"))
    if kind == "decay":
        return decaying_verblunsky(params.get("scale", 1.0), params.get("offset", 2.0), length=params.get("length"))
    if kind == "explicit":
        return VerblunskySequence(
            values=[parse_complex(v) for v in params["values"]],
            spec={"model": "verblunsky", "kind": "explicit", "params": params, "seed": None},
        )
    if kind == "iid":
        if seed is None:
            raise InvalidParameterError("iid sequences need a seed")
        return sample_iid(DistributionSpec.from_json(params["dist"]), params["n"], seed)
    if kind == "universal":
        return universal_circle_sequence(params["base"], params["length"])
    if kind == "degenerate":
        mu, nu = degenerate_pair(params["length"])
        return {"mu": mu, "nu": nu}[params.get("which", "mu")]
    if kind == "alexandrov":
        return alexandrov(from_spec(params["base"]), params["lambda"])
    if kind == "strip":
        return strip(from_spec(params["base"]), params["k"])
    raise InvalidParameterError(f"unknown Verblunsky sequence kind {kind!r}")


def _build_jacobi(kind: str, params: dict, seed):
    if kind == "constant":
        return constant_jacobi(params["a"], params["b"], length=params.get("length"))
    if kind == "periodic":
        return periodic_jacobi(params["a"], params["b"], length=params.get("length"))
    if kind == "explicit":
        return JacobiSequence(
            a=params["a"],
            b=params["b"],
            spec={"model": "jacobi", "kind": "explicit", "params": params, "seed": None},
        )
    if kind == "iid":
        if seed is None:
            raise InvalidParameterError("iid sequences need a seed")
        dists = (DistributionSpec.from_json(params["dist_a"]), DistributionSpec.from_json(params["dist_b"]))
        return sample_iid(dists, params["n"], seed)
    if kind == "universal":
        return universal_jacobi_pair(params["base_a"], params["base_b"], params["length"])
    raise InvalidParameterError(f"unknown Jacobi sequence kind {kind!r}")


_SPEC_KEYS = {"model", "kind", "params", "seed"}


def from_spec(spec: dict):
    """Rebuild a sequence from its JSON description."""
    if not isinstance(spec, dict):
        raise InvalidParameterError("sequence spec must be a JSON object")
    unknown = set(spec) - _SPEC_KEYS
    if unknown:
        raise InvalidParameterError(f"unknown keys in sequence spec: {sorted(unknown)}")
    model = spec.get("model")
    kind = spec.get("kind")
    params = spec.get("params") or {}
    seed = spec.get("seed")
    try:
        if model == "verblunsky":
            return _build_verblunsky(kind, params, seed)
        if model == "jacobi":
            return _build_jacobi(kind, params, seed)
    except KeyError as exc:
        raise InvalidParameterError(f"sequence spec of kind {kind!r} is missing parameter {exc}") from None
    raise InvalidParameterError(f"unknown model {model!r}; expected 'verblunsky' or 'jacobi'")
