import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from secretpi import _pykernels, kernels

ck = pytest.importorskip("secretpi._ckernels")


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 12))
    m = draw(st.integers(0, 30))
    src = draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    lab = draw(st.lists(st.integers(0, 3), min_size=m, max_size=m))
    dst = draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    return n, src, lab, dst


@settings(max_examples=300)
@given(graphs())
def test_backends_agree(g):
    n, src, lab, dst = g
    assert ck.tau_closure(n, src, lab, dst, 0) == _pykernels.tau_closure(n, src, lab, dst, 0)
    weak = _pykernels.saturate(n, src, lab, dst, 0)
    assert ck.saturate(n, src, lab, dst, 0) == weak
    assert ck.refine(n, *weak) == _pykernels.refine(n, *weak)


def test_saturation_example():
    # 0 -tau-> 1 -a-> 2 -tau-> 3
    weak = _pykernels.saturate(4, [0, 1, 2], [0, 1, 0], [1, 2, 3], 0)
    triples = set(zip(*weak))
    assert (0, 1, 3) in triples and (0, 0, 0) in triples and (1, 1, 2) in triples
    assert (0, 1, 1) not in triples


def test_refinement_splits_deadlock():
    rounds = _pykernels.refine(3, [0], [1], [1])
    assert rounds[-1][0] != rounds[-1][1]
    assert rounds[-1][1] == rounds[-1][2]


def test_backend_selection():
    forced = os.environ.get("SECRETPI_PURE", "").lower() in ("1", "true", "yes")
    assert kernels.BACKEND == ("python" if forced else "cython")
    env = dict(os.environ, SECRETPI_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from secretpi import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
