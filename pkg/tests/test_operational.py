from hypothesis import given, strategies as st

from pcfgames.operational import Converges, FuelExhausted, evaluate

from helpers import P


def test_case_selects_branch():
    assert evaluate(P("case[2] 1 omega 5")) == Converges(5)


def test_out_of_range_case_is_stuck():
    assert evaluate(P("case[1] 1 0")) == FuelExhausted("stuck")


def test_omega_has_no_value():
    assert isinstance(evaluate(P("omega")), FuelExhausted)


def test_call_by_name():
    assert evaluate(P("(\\x:nat. 3) omega")) == Converges(3)


def test_y_loop_runs_out_of_fuel():
    assert evaluate(P("Y[nat] (\\x:nat. x)"), 1000) == FuelExhausted("fuel")


def test_y_recursion():
    p = P("Y[nat->nat] (\\f:nat->nat. \\n:nat. case[4] n 0 (f 0) (f 1) (f 2)) 3")
    assert evaluate(p) == Converges(0)


@given(st.integers(0, 3), st.integers(1, 60))
def test_countdown_depth(n, fuel_mult):
    p = P(f"Y[nat->nat] (\\f:nat->nat. \\n:nat. case[4] n 2 (f 0) (f 1) (f 2)) {n}")
    assert evaluate(p, 1000 * fuel_mult) == Converges(2)


@given(st.integers(0, 10**6))
def test_fuel_is_monotone(seed):
    import random
    from pcfgames.generators import random_term
    from pcfgames.syntax import NAT
    m = random_term(random.Random(seed), NAT, 4, depth=3, allow_y=True)
    small, big = evaluate(m, 200), evaluate(m, 20000)
    if isinstance(small, Converges):
        assert big == small
