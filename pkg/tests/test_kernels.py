"""The compiled and plain kernels must agree exactly."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from totalcolor import _kernels


def _adj(n, edges):
    a = np.zeros(n, np.int64)
    for u, v in edges:
        a[u] |= 1 << v
        a[v] |= 1 << u
    return a


@st.composite
def conflict_graphs(draw):
    n = draw(st.integers(0, 14))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return n, edges


def _proper(adj, col):
    n = len(adj)
    return all(col[i] != col[j] for i in range(n) for j in range(n) if (int(adj[i]) >> j) & 1)


@settings(max_examples=120)
@given(conflict_graphs(), st.integers(1, 5))
def test_colorable_backends_agree(graph, k):
    n, edges = graph
    adj = _adj(n, edges)
    f1, c1 = _kernels.colorable_py(adj, k)
    f2, c2 = _kernels.colorable_jit(adj, k)
    assert f1 == f2
    assert np.array_equal(c1, c2)
    if f1:
        assert _proper(adj, c1) and (n == 0 or c1.max() < k)


def test_colorable_known_values():
    k4 = _adj(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    assert not _kernels.colorable_py(k4, 3)[0]
    assert _kernels.colorable_jit(k4, 4)[0]
    c5 = _adj(5, [(i, (i + 1) % 5) for i in range(5)])
    assert not _kernels.colorable_jit(c5, 2)[0]
    assert _kernels.colorable_jit(c5, 3)[0]


@pytest.mark.parametrize("seed", range(8))
def test_repair_backends_agree(seed):
    rng = np.random.default_rng(seed)
    V, P = 30, 15
    D = rng.integers(-1, 2, size=(V, P)).astype(np.float64)
    sigma = rng.choice(np.array([-1.0, 1.0]), size=P)
    s1, s2 = sigma.copy(), sigma.copy()
    c1 = _kernels.repair_partition_py(D, s1, 2.0, 100)
    c2 = _kernels.repair_partition_jit(np.ascontiguousarray(D), s2, 2.0, 100)
    assert c1 == pytest.approx(c2)
    assert np.array_equal(s1, s2)
    # the returned cost is the true cost of the returned signs
    assert c1 == pytest.approx(np.maximum(np.abs(D @ s1) - 2.0, 0).sum())


def test_env_flag_selects_python_backend():
    code = "from totalcolor import _kernels; print(_kernels.backend())"
    env = dict(os.environ, TOTALCOLOR_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env.pop("TOTALCOLOR_NO_NUMBA")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"
