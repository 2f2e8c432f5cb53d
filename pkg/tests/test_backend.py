import os
import subprocess
import sys

import pytest

from conftest import doc
from hmil_ted import CostModel
from hmil_ted._backend import COMPILED_AVAILABLE, SMALL_FOREST, CompiledKernel, make_kernel
from hmil_ted._kernel_py import PyKernel
from hmil_ted.forest import Forest


def forest_with(*texts, model=None):
    forest = Forest(model or CostModel.unit())
    ids = [forest.add(doc(t).root) for t in texts]
    return forest, ids


def test_hash_consing_shares_subtrees():
    forest, (a, b, c) = forest_with('{"x": [1, 2]}', '{"x": [2, 1]}', '{"x": [2, 1, 1]}')
    assert a == b != c
    assert len(forest) == 6


def test_python_kernel_on_request():
    forest, (a, b) = forest_with("[1, 2]", "[2, 3]")
    kernel = make_kernel(forest, "python")
    assert isinstance(kernel, PyKernel)
    assert kernel.distance(a, b) == 1
    assert kernel.fill_rows([a, b], [0, 1]) == {0: [1], 1: []}


def test_small_forests_use_python_kernel():
    forest, _ = forest_with("[1]")
    assert len(forest) < SMALL_FOREST
    assert isinstance(make_kernel(forest), PyKernel)


@pytest.mark.skipif(not COMPILED_AVAILABLE, reason="compiled kernel not built")
def test_compiled_kernel_selected_for_large_exact_forests():
    forest, (a, b) = forest_with(str(list(range(100))), str(list(range(50, 150))))
    kernel = make_kernel(forest)
    assert isinstance(kernel, CompiledKernel)
    # 50 shared numbers match for free, the other 50 pair up as unit relabels
    assert kernel.distance(a, b) == 50
    assert kernel.sibling().distance(a, b) == 50


def test_pure_python_switch():
    code = "import hmil_ted._backend as b; print(b.USE_COMPILED)"
    env = dict(os.environ, HMIL_TED_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
