from hypothesis import given, strategies as st

from dtcalc.rng import Lcg64

from conftest import seeds


def test_first_outputs_are_stable():
    # pinned so that replays stay valid across releases
    r = Lcg64(0)
    assert r.next_u64() == 1442695040888963407
    assert r.next_u64() == (6364136223846793005 * 1442695040888963407 + 1442695040888963407) % 2**64


@given(seeds)
def test_same_seed_same_stream(seed):
    a, b = Lcg64(seed), Lcg64(seed)
    assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]


@given(seeds, st.integers(1, 1000))
def test_below_in_range(seed, n):
    r = Lcg64(seed)
    assert all(0 <= r.below(n) < n for _ in range(20))


@given(seeds, st.integers(-50, 50), st.integers(0, 50))
def test_integer_inclusive(seed, lo, width):
    r = Lcg64(seed)
    assert all(lo <= r.integer(lo, lo + width) <= lo + width for _ in range(20))


@given(seeds)
def test_sample_distinct(seed):
    r = Lcg64(seed)
    picked = r.sample(range(10), 4)
    assert len(set(picked)) == 4 and all(0 <= x < 10 for x in picked)


def test_fork_is_independent_of_parent_progress():
    a = Lcg64(5)
    child = a.fork()
    first = child.next_u64()
    b = Lcg64(5)
    assert b.fork().next_u64() == first
