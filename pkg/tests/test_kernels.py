import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semsketch import _kernels_py, kernels

try:
    from semsketch import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
if _compiled is not None:
    BACKENDS.append(pytest.param(_compiled, id="cython"))

rows = st.lists(st.sets(st.integers(min_value=0, max_value=40), max_size=12), max_size=8)


@pytest.mark.parametrize("backend", BACKENDS)
@given(a=rows, b=rows)
@settings(max_examples=60, deadline=None)
def test_intersection_counts_match_set_arithmetic(backend, a, b):
    ap, ai = kernels.pack_rows(a)
    bp, bi = kernels.pack_rows(b)
    got = backend.intersection_counts(ap, ai, bp, bi)
    assert got.shape == (len(a), len(b))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            assert got[i, j] == len(x & y)


@pytest.mark.parametrize("backend", BACKENDS)
@given(st.lists(st.integers(min_value=-5, max_value=30), max_size=200))
@settings(max_examples=60, deadline=None)
def test_segment_counts_match_counter(backend, values):
    codes = np.sort(np.asarray(values, dtype=np.int64))
    uniq, counts = backend.segment_counts(codes)
    expected = {}
    for v in values:
        expected[v] = expected.get(v, 0) + 1
    assert dict(zip(uniq.tolist(), counts.tolist())) == expected
    assert uniq.tolist() == sorted(expected)


def test_backends_agree_on_large_input():
    if _compiled is None:
        pytest.skip("compiled kernels not built")
    rng = np.random.default_rng(0)
    a = [set(rng.integers(0, 500, 30).tolist()) for _ in range(50)]
    b = [set(rng.integers(0, 500, 40).tolist()) for _ in range(70)]
    ap, ai = kernels.pack_rows(a)
    bp, bi = kernels.pack_rows(b)
    assert np.array_equal(_compiled.intersection_counts(ap, ai, bp, bi), _kernels_py.intersection_counts(ap, ai, bp, bi))
    codes = np.sort(rng.integers(0, 1000, 20000))
    for x, y in zip(_compiled.segment_counts(codes), _kernels_py.segment_counts(codes)):
        assert np.array_equal(x, y)


def test_empty_inputs():
    ptr, items = kernels.pack_rows([])
    assert kernels.intersection_counts(ptr, items, ptr, items).shape == (0, 0)
    uniq, counts = kernels.count_codes(np.zeros(0, dtype=np.int64))
    assert len(uniq) == len(counts) == 0


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
