import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erdoslab.errors import BoundsError
from erdoslab.primes import (
    MAGIC,
    build_table,
    cache_path,
    load_or_build,
    load_table,
    small_sieve,
)


def test_exhaustive_small():
    assert build_table(10).primes.tolist() == [2, 3, 5, 7]
    assert build_table(2).primes.tolist() == [2]
    assert build_table(3).primes.tolist() == [2, 3]


def test_limit_too_small():
    with pytest.raises(ValueError):
        build_table(1)


def test_against_trial_division(trial_division_primes):
    table = build_table(2000)
    assert np.array_equal(table.primes, trial_division_primes)
    assert table.pi(100) == 25
    assert table.pi(1000) == 168
    assert table.nth_prime(25) == 97
    assert table.gap(30) == 127 - 113


@pytest.mark.parametrize("limit", [2, 3, 4, 5, 16, 17, 100, 1000, 65_536, 65_537, 100_000])
def test_segmented_equals_dense(limit):
    assert np.array_equal(build_table(limit).primes, small_sieve(limit))


@given(limit=st.integers(min_value=2, max_value=100_000))
@settings(max_examples=30, deadline=None)
def test_segmented_equals_dense_hypothesis(limit):
    assert np.array_equal(build_table(limit).primes, small_sieve(limit))


def test_pi_nth_roundtrip(mid_table):
    t = mid_table
    for n in [1, 2, 3, 25, 1000, t.primes.size]:
        assert t.pi(t.nth_prime(n)) == n
    for x in [2, 10, 97, 1234, 2_000_000]:
        assert t.nth_prime(t.pi(x)) <= x


@given(n=st.integers(min_value=1, max_value=148_933))
@settings(max_examples=50, deadline=None)
def test_pi_nth_roundtrip_hypothesis(n):
    t = _shared()
    assert t.pi(t.nth_prime(n)) == n


_cached = None


def _shared():
    global _cached
    if _cached is None:
        _cached = build_table(2_000_000)
    return _cached


def test_pi_edges(mid_table):
    assert mid_table.pi(1) == 0
    assert mid_table.pi(2) == 1
    assert mid_table.pi(0) == 0
    with pytest.raises(BoundsError):
        mid_table.pi(2_000_001)


def test_nth_gap_edges(mid_table):
    assert mid_table.nth_prime(1) == 2
    assert mid_table.nth_prime(4) == 7
    assert mid_table.gap(1) == 1
    assert mid_table.gap(2) == 2
    with pytest.raises(BoundsError):
        mid_table.nth_prime(0)
    with pytest.raises(BoundsError):
        mid_table.nth_prime(mid_table.primes.size + 1)
    with pytest.raises(BoundsError):
        mid_table.gap(mid_table.primes.size)


def test_gaps_even_beyond_two(mid_table):
    gaps = np.diff(mid_table.primes[1:])
    assert (gaps % 2 == 0).all()
    assert (gaps > 0).all()


def test_pi_monotone(mid_table):
    xs = np.arange(0, 5000)
    vals = [mid_table.pi(int(x)) for x in xs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_pi_1e8(big_table):
    # published value, plus the independent dense-sieve cross-check at
    # a reduced limit
    assert big_table.pi(100_000_000) == 5_761_455
    assert big_table.pi(100_000) == small_sieve(100_000).size


def test_is_prime_range(mid_table, trial_division_primes):
    win = mid_table.is_prime_range(0, 2001)
    oracle = np.zeros(2001, dtype=bool)
    oracle[trial_division_primes] = True
    assert np.array_equal(win, oracle)
    # windows at odd/even boundaries
    for lo, hi in [(0, 1), (1, 2), (2, 3), (89, 98), (90, 97), (999, 1001)]:
        assert np.array_equal(mid_table.is_prime_range(lo, hi), oracle[lo:hi])
    with pytest.raises(BoundsError):
        mid_table.is_prime_range(0, 2_000_002)


def test_contains(mid_table):
    assert 2 in mid_table
    assert 97 in mid_table
    assert 1 not in mid_table
    assert 100 not in mid_table


def test_cache_roundtrip(tmp_path):
    table = build_table(12_345)
    path = table.save(tmp_path / "t.bin")
    loaded = load_table(path)
    assert loaded.limit == table.limit
    assert np.array_equal(loaded.primes, table.primes)
    # byte-identical re-save
    path2 = loaded.save(tmp_path / "t2.bin")
    assert path.read_bytes() == path2.read_bytes()
    assert path.read_bytes()[: len(MAGIC)] == MAGIC


def test_cache_rejects_garbage(tmp_path):
    p = tmp_path / "bad.bin"
    p.write_bytes(b"NOTACACHE..0000000000000")
    with pytest.raises(ValueError):
        load_table(p)


def test_cache_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("ERDOS_CACHE_DIR", str(tmp_path))
    assert cache_path(1000).parent == tmp_path
    t = load_or_build(1000)
    assert (tmp_path / "primes-1000.bin").exists()
    t2 = load_or_build(1000)
    assert np.array_equal(t.primes, t2.primes)
