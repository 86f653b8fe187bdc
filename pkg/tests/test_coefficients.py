import itertools
import json
import threading

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bergshift.coefficients import (
    DiscretePlanarMeasure,
    DistributionSpec,
    JacobiSequence,
    VerblunskySequence,
    alexandrov,
    constant_verblunsky,
    decaying_verblunsky,
    degenerate_pair,
    from_spec,
    parse_complex,
    periodic_jacobi,
    roots_of_unity_measure,
    sample_iid,
    strip,
    universal_circle_sequence,
    universal_jacobi_pair,
)
from bergshift.errors import BoundsError, InvalidCoefficientError, InvalidParameterError

from conftest import disk_values


# -- sequences ----------------------------------------------------------


def test_verblunsky_rejects_coefficient_on_circle_and_names_index():
    with pytest.raises(InvalidCoefficientError) as exc:
        VerblunskySequence(values=[0.1, 0.2, 1.0])
    assert exc.value.index == 2
    assert "alpha_2" in str(exc.value)


def test_generator_checked_on_materialization():
    seq = VerblunskySequence(func=lambda n: np.where(n == 5, 1.2, 0.1))
    assert seq[3] == 0.1
    with pytest.raises(InvalidCoefficientError) as exc:
        seq.take(10)
    assert exc.value.index == 5


def test_materialization_is_deterministic_and_read_only():
    seq = decaying_verblunsky()
    first = seq.take(50).copy()
    assert np.array_equal(seq.take(50), first)
    assert seq[7] == pytest.approx(1 / 9)
    with pytest.raises(ValueError):
        seq.take(5)[0] = 0


def test_concurrent_reads_agree():
    seq = decaying_verblunsky(0.5j)
    out = {}

    def read(k):
        out[k] = seq.take(1000 + 37 * k).copy()

    threads = [threading.Thread(target=read, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    ref = seq.take(2000)
    for k, v in out.items():
        assert np.array_equal(v, ref[: v.size])


def test_finite_sequence_bounds():
    seq = VerblunskySequence(values=[0.1, 0.2])
    assert seq.length == 2
    with pytest.raises(BoundsError):
        seq.take(3)


def test_jacobi_accessors_are_one_based():
    seq = JacobiSequence(a=[1, 2], b=[5, 6, 7])
    assert seq.a(1) == 1 and seq.a(2) == 2
    assert seq.b(3) == 7
    with pytest.raises(InvalidCoefficientError):
        JacobiSequence(a=[1, -2], b=[0, 0])


def test_discrete_measure_normalizes_and_sorts():
    mu = DiscretePlanarMeasure([1j, -1, 2], [1, 1, 2])
    assert mu.weights.sum() == pytest.approx(1, abs=1e-14)
    assert list(mu.points) == [-1, 1j, 2]
    assert mu.moment(0) == pytest.approx(1)
    with pytest.raises(InvalidParameterError):
        DiscretePlanarMeasure([1, 1])
    with pytest.raises(InvalidParameterError):
        DiscretePlanarMeasure([1])


def test_parse_complex_forms():
    assert parse_complex("2+0i") == 2
    assert parse_complex("-0.5i") == -0.5j
    assert parse_complex([1, 2]) == 1 + 2j
    assert parse_complex({"re": 0, "im": 1}) == 1j


# -- alexandrov / strip ---------------------------------------------------


def test_alexandrov_examples():
    seq = decaying_verblunsky()
    assert np.array_equal(alexandrov(seq, 1).take(20), seq.take(20))
    assert alexandrov(VerblunskySequence(values=[0.5]), -1)[0] == -0.5
    assert alexandrov(seq, 1j)[0] == pytest.approx(0.5j)
    with pytest.raises(InvalidParameterError):
        alexandrov(seq, 1.001)


@given(disk_values(0.95), st.floats(0, 2 * np.pi))
def test_alexandrov_round_trip(values, theta):
    seq = VerblunskySequence(values=values)
    lam = np.exp(1j * theta)
    back = alexandrov(alexandrov(seq, lam), np.conj(lam))
    assert np.max(np.abs(back.take(len(values)) - seq.take(len(values)))) <= 1e-15


def test_strip_examples():
    seq = VerblunskySequence(values=[0.1, 0.2, 0.3, 0.4])
    assert strip(seq, 0) is seq
    assert strip(seq, 2)[0] == 0.3
    stripped = strip(decaying_verblunsky(), 1)
    assert stripped[0] == pytest.approx(1 / 3)
    assert stripped[10] == pytest.approx(1 / 13)
    with pytest.raises(InvalidParameterError):
        strip(seq, 4)


@given(disk_values(0.9, min_size=3, max_size=12), st.integers(0, 2))
def test_strip_is_index_shift(values, k):
    seq = VerblunskySequence(values=values)
    assert np.array_equal(strip(seq, k).take(len(values) - k), seq.take(len(values))[k:])


# -- universal sequences --------------------------------------------------


def test_universal_circle_prefix():
    s = universal_circle_sequence([0.1, 0.2, 0.3], 8).take(8)
    assert list(s.real) == [0.1, 0.1, 0.2, 0.2, 0.1, 0.1, 0.2, 0.3]


def test_universal_circle_single_base_is_constant():
    assert np.all(universal_circle_sequence([0.4j], 30).take(30) == 0.4j)


def test_universal_circle_adjacent_pairs():
    s = list(universal_circle_sequence([0.1, 0.2], 20).take(20))
    pairs = set(zip(s, s[1:]))
    assert pairs == set(itertools.product([0.1, 0.2], repeat=2))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_universal_circle_contains_every_permutation(k):
    base = [0.1, 0.2, 0.3, 0.4]
    seq = list(universal_circle_sequence(base, 400).take(400).real)
    text = ",".join(f"{v:.1f}" for v in seq)
    for perm in itertools.permutations(base[:k]):
        assert ",".join(f"{v:.1f}" for v in perm) in text


def test_universal_circle_rejects_boundary_points():
    with pytest.raises(InvalidParameterError):
        universal_circle_sequence([0.1, 1.0], 5)


def test_universal_jacobi_stage_two():
    seq = universal_jacobi_pair([1.0, 2.0], [10.0, 20.0], 9)
    a, b = seq.take(9)
    assert list(a[1:]) == [1, 2, 1, 2, 2, 1, 2, 1]
    assert list(b[1:]) == [10, 20, 20, 10, 10, 20, 20, 10]


def test_universal_jacobi_aligned_pairs_in_stage_two():
    a, b = universal_jacobi_pair([1.0, 2.0], [10.0, 20.0], 9).take(9)
    a, b = a[1:], b[1:]
    found = {(tuple(a[i : i + 2]), tuple(b[i : i + 2])) for i in range(0, 8, 2)}
    perms_a = set(itertools.permutations([1.0, 2.0]))
    perms_b = set(itertools.permutations([10.0, 20.0]))
    assert found == set(itertools.product(perms_a, perms_b))


def test_universal_jacobi_rejects_nonpositive_a():
    with pytest.raises(InvalidParameterError):
        universal_jacobi_pair([1.0, 0.0], [0.0], 5)


# -- sampling ----------------------------------------------------------------


def test_sample_degenerate_atomic():
    dist = DistributionSpec("atomic", {"atoms": [0.3], "probs": [1.0]})
    assert np.all(sample_iid(dist, 5, seed=1).take(5) == 0.3)


def test_sample_frequency():
    dist = DistributionSpec("atomic", {"atoms": [0.3, -0.3], "probs": [0.5, 0.5]})
    v = sample_iid(dist, 10_000, seed=12345).take(10_000)
    assert abs(np.mean(v.real > 0) - 0.5) <= 0.02


@given(st.integers(0, 2**64 - 1), st.integers(1, 200))
def test_sampling_is_reproducible_and_prefix_stable(seed, n):
    dist = DistributionSpec("disk", {"radius": 0.7})
    long = sample_iid(dist, n + 10, seed).take(n + 10)
    assert np.array_equal(sample_iid(dist, n, seed).take(n), long[:n])
    assert np.all(np.abs(long) <= 0.7)


def test_jacobi_streams_are_independent():
    da = DistributionSpec("interval", {"low": 1.0, "high": 2.0}, "line")
    db = DistributionSpec("interval", {"low": 1.0, "high": 2.0}, "line")
    a, b = sample_iid((da, db), 100, seed=3).take(100)
    assert not np.array_equal(a, b)
    assert np.all(a >= 1)


def test_circle_distribution_touching_boundary_rejected():
    with pytest.raises(InvalidParameterError):
        DistributionSpec("disk", {"radius": 1.0})
    with pytest.raises(InvalidParameterError):
        DistributionSpec("atomic", {"atoms": [1j], "probs": [1]})


def test_line_a_distribution_must_be_positive():
    da = DistributionSpec("interval", {"low": -1.0, "high": 1.0}, "line")
    with pytest.raises(InvalidParameterError):
        sample_iid((da, da), 4, seed=0)


# -- degenerate pair and builders ------------------------------------------


def test_degenerate_pair_values():
    mu, nu = degenerate_pair(10)
    assert mu[0] == 0.5 and nu[0] == 0.5
    assert mu[2] == 0.75
    assert np.allclose(np.abs(nu.take(10)), np.abs(mu.take(10)), atol=1e-15)
    assert nu[3] == pytest.approx(0.8 * np.exp(3j))


def test_periodic_jacobi():
    a, b = periodic_jacobi([1, 2], [0, 5]).take(5)
    assert list(a) == [1, 2, 1, 2, 1]
    assert list(b) == [0, 5, 0, 5, 0]


def test_roots_of_unity_moments():
    mu = roots_of_unity_measure(16)
    assert abs(mu.moment(3)) < 1e-14
    assert mu.moment(16) == pytest.approx(1)


@pytest.mark.parametrize(
    "seq",
    [
        decaying_verblunsky(0.5j, 3.0),
        constant_verblunsky(0.3, length=7),
        alexandrov(decaying_verblunsky(), 1j),
        strip(decaying_verblunsky(), 2),
        universal_circle_sequence([0.1, 0.2], 12),
        sample_iid(DistributionSpec("atomic", {"atoms": [0.3, -0.3], "probs": [0.5, 0.5]}), 40, seed=9),
        degenerate_pair(6)[1],
        periodic_jacobi([1, 2], [0, 1]),
        universal_jacobi_pair([1, 2], [0, 1], 20),
    ],
)
def test_spec_round_trip(seq):
    spec = json.loads(json.dumps(seq.to_spec()))
    again = from_spec(spec)
    a, b = seq.take(6), again.take(6)
    if isinstance(a, tuple):
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    else:
        assert np.array_equal(a, b)


def test_from_spec_rejects_unknown_keys():
    with pytest.raises(InvalidParameterError):
        from_spec({"model": "verblunsky", "kind": "constant", "params": {"value": 0.1}, "extra": 1})
    with pytest.raises(InvalidParameterError):
        from_spec({"model": "verblunsky", "kind": "nope"})
