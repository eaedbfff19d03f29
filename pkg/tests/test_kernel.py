import os
import subprocess
import sys

import pytest

from pcfgames import _kernel_py, kernel
from pcfgames.denotation import denote
from pcfgames.strategy import DEFAULT_BUDGET, compose, der, Strategy

from helpers import P, T

try:
    from pcfgames import _kernel_c
except ImportError:  # pragma: no cover - depends on the build
    _kernel_c = None


def _plans(src, unroll, window):
    plans = []
    real = kernel.compose_views

    def spy(plan, budget):
        plans.append(plan)
        return real(plan, budget)

    kernel.compose_views = spy
    try:
        denote(P(src), (), unroll, window)
    finally:
        kernel.compose_views = real
    return plans


def test_backend_name():
    assert kernel.BACKEND in ("cython", "python")


@pytest.mark.skipif(_kernel_c is None, reason="compiled kernel not built")
@pytest.mark.parametrize("src,unroll", [
    ("Y[nat->nat] (\\f:nat->nat. \\n:nat. case[4] n 0 (f 0) (f 1) (f 2))", 5),
    ("\\g:(nat->nat)->nat. g (\\x:nat. case[2] (g (\\y:nat. y)) x 1)", 0),
    ("Y[nat->nat->nat] (\\f:nat->nat->nat. \\a:nat. \\b:nat. case[3] a b (f b 0) (f 0 b))", 6),
])
def test_backends_agree(src, unroll):
    for plan in _plans(src, unroll, 4):
        assert _kernel_py.compose_views(plan, DEFAULT_BUDGET) == _kernel_c.compose_views(plan, DEFAULT_BUDGET)
        assert _kernel_py.first_response(plan, DEFAULT_BUDGET) == _kernel_c.first_response(plan, DEFAULT_BUDGET)


def test_budget_exceeded():
    f = denote(P("Y[nat->nat] (\\f:nat->nat. \\n:nat. case[4] n 0 (f 0) (f 1) (f 2))"), (), 6, 4)
    with pytest.raises(kernel.KernelBudgetExceeded):
        compose([f.with_dom((T("nat"),))], der(T("nat"), 4), budget=3)


def test_pure_switch():
    out = subprocess.run(
        [sys.executable, "-c", "from pcfgames import kernel; print(kernel.BACKEND)"],
        env={**os.environ, "PCFGAMES_PURE": "1"}, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
