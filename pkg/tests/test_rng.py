from hypothesis import given, strategies as st

from semsketch.rng import SplitMix64


def test_reference_vector():
    # published SplitMix64 outputs for seed 1234567
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


@given(st.integers(min_value=0, max_value=2**64 - 1), st.lists(st.integers(), max_size=50))
def test_shuffle_is_a_permutation_and_repeatable(seed, items):
    a, b = list(items), list(items)
    SplitMix64(seed).shuffle(a)
    SplitMix64(seed).shuffle(b)
    assert a == b
    assert sorted(a) == sorted(items)


@given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=1, max_value=10**6))
def test_below_in_range(seed, n):
    rng = SplitMix64(seed)
    assert all(0 <= rng.below(n) < n for _ in range(20))


def test_sample_without_replacement():
    picked = SplitMix64(3).sample(range(100), 30)
    assert len(set(picked)) == 30
