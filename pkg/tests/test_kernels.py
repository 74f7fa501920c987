import numpy as np
import pytest

from realfree import _kernels_py, kernels
from realfree.diagrams import DiagramClass, class_array
from realfree.ensembles import GOE, Letter, Wishart, exact_centred_cumulant, exact_trace_cumulant

compiled = pytest.importorskip("realfree._kernels")


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")


def test_row_cycle_counts_agree():
    rows = class_array(DiagramClass.ALL_PREMAPS, 5)
    assert np.array_equal(compiled.row_cycle_counts(rows), _kernels_py.row_cycle_counts(rows))


def _inputs(p, q, mode, classes_from_counts=True):
    n = p + q
    members = class_array(DiagramClass.ALL_PREMAPS, n).astype(np.int32)
    counts = _kernels_py.row_cycle_counts(members)
    _, classes = np.unique(counts, return_inverse=True)
    gamma = list(range(1, p)) + [0] + list(range(p + 1, n)) + [p]
    gp = np.arange(2 * n, dtype=np.int32)
    gmi = np.arange(2 * n, dtype=np.int32)
    for i, g in enumerate(gamma):
        gp[i] = g
        gmi[n + g] = n + i
    block = np.array(list(range(n)) * 2, dtype=np.int32)
    group = np.array([0] * p + [1] * q, dtype=np.int32)
    globs = np.arange(2 * n, dtype=np.int32)
    return ([members], [globs], [classes.astype(np.int32)], [int(classes.max()) + 1],
            gp, gmi, block, group, 2, mode)


@pytest.mark.parametrize("mode", [kernels.MODE_ALL, kernels.MODE_CONNECTED, kernels.MODE_CENTRED])
@pytest.mark.parametrize("p,q", [(1, 1), (2, 2), (1, 3)])
def test_accumulate_agrees(mode, p, q):
    args = _inputs(p, q, mode)
    assert np.array_equal(compiled.accumulate(*args), _kernels_py.accumulate(*args))


def test_two_colour_accumulate_agrees(monkeypatch):
    models = {"A": GOE(), "B": Wishart(c=1)}
    a, b = Letter("A"), Letter("B")
    values = [exact_trace_cumulant([[a, b, a], [b, a, b]], models),
              exact_centred_cumulant([[[a], [b, b]], [[a, a], [b]]], models)]
    monkeypatch.setattr(kernels, "accumulate", _kernels_py.accumulate)
    monkeypatch.setattr(kernels, "row_cycle_counts", _kernels_py.row_cycle_counts)
    assert values == [exact_trace_cumulant([[a, b, a], [b, a, b]], models),
                      exact_centred_cumulant([[[a], [b, b]], [[a, a], [b]]], models)]
