"""Line searches on hand-solvable one-dimensional restrictions."""

import math

import pytest
from scipy.optimize import brentq

from boostcd.linesearch import (
    LineSearchBudgetError,
    NotDescentDirectionError,
    RayUnboundedError,
    StepResult,
    WolfeParams,
    closed_form_step,
    exact_search,
    wolfe_search,
)


def _conditions(phi, dphi, alpha, p):
    c1 = phi(alpha) <= phi(0.0) + alpha * p.c1 * dphi(0.0)
    c2 = dphi(alpha) >= p.c2 * dphi(0.0)
    return c1, c2


def test_wolfe_params_validation():
    with pytest.raises(ValueError):
        WolfeParams(c1=0.5, c2=0.5)
    with pytest.raises(ValueError):
        WolfeParams(c1=0.0)
    with pytest.raises(ValueError):
        WolfeParams(c2=1.0)
    with pytest.raises(ValueError):
        WolfeParams(max_bisections=0)


def test_wolfe_on_shifted_quadratic():
    # phi(a) = (a-1)^2: with c1=1/3, c2=1/2 the admissible set is
    # [1/2, 4/3]; the bracket 1 -> 2 then midpoint 1 lands dead center.
    phi = lambda a: (a - 1.0) ** 2
    dphi = lambda a: 2.0 * (a - 1.0)
    p = WolfeParams()
    res = wolfe_search(phi, dphi, p)
    assert res.mode == "wolfe"
    assert res.alpha == 1.0
    assert 0.5 <= res.alpha <= 4.0 / 3.0
    assert all(_conditions(phi, dphi, res.alpha, p))


def test_wolfe_on_decaying_exponential():
    # phi(a) = e^-a: admissible set is [ln 2, a*] with a* solving
    # e^-a = 1 - a/3; bracketing doubles 1 -> 2 -> 4, bisection accepts 2.
    phi = lambda a: math.exp(-a)
    dphi = lambda a: -math.exp(-a)
    p = WolfeParams()
    res = wolfe_search(phi, dphi, p)
    upper = brentq(lambda a: math.exp(-a) - (1.0 - a / 3.0), 2.0, 3.0, xtol=1e-13)
    assert upper == pytest.approx(2.8214393721220787, rel=1e-12)
    assert res.alpha == 2.0
    assert math.log(2.0) <= res.alpha <= upper
    assert all(_conditions(phi, dphi, res.alpha, p))


def test_wolfe_accepts_precomputed_endpoint_values():
    phi = lambda a: (a - 1.0) ** 2
    dphi = lambda a: 2.0 * (a - 1.0)
    res = wolfe_search(phi, dphi, phi0=1.0, dphi0=-2.0)
    assert res.alpha == 1.0
    # fewer evaluations than the self-computing call
    assert res.evals < wolfe_search(phi, dphi).evals


def test_wolfe_rejects_non_descent():
    with pytest.raises(NotDescentDirectionError):
        wolfe_search(lambda a: a, lambda a: 1.0)
    # -0.0 is not a descent slope either
    with pytest.raises(NotDescentDirectionError):
        wolfe_search(lambda a: 0.0, lambda a: -0.0)


def test_wolfe_bracketing_budget():
    # linear descent: the decrease condition holds at every doubling
    with pytest.raises(LineSearchBudgetError) as err:
        wolfe_search(lambda a: -a, lambda a: -1.0,
                     WolfeParams(max_bracket_doublings=5))
    lo, hi = err.value.interval
    assert lo == 0.0 and hi == 2.0 ** 5


def test_wolfe_bisection_budget_carries_interval():
    # minimum crowded against 0: every early midpoint fails the
    # decrease test, so the budget runs out shrinking toward it
    phi = lambda a: 10.0 * (a - 0.1) ** 2
    dphi = lambda a: 20.0 * (a - 0.1)
    with pytest.raises(LineSearchBudgetError) as err:
        wolfe_search(phi, dphi, WolfeParams(max_bisections=1))
    lo, hi = err.value.interval
    assert lo == 0.0 and hi == 0.5


def test_closed_form_step_value():
    # grad 1/2, objective 2 ln 2, logistic eta for m=3 is 8/(3 ln 2):
    # the ln 2 factors cancel, leaving 3/32
    eta = 8.0 / (3.0 * math.log(2.0))
    alpha = closed_form_step(0.5, 2.0 * math.log(2.0), eta)
    assert alpha == pytest.approx(3.0 / 32.0, rel=1e-14)
    assert closed_form_step(0.0, 1.0, 1.0) == 0.0


def test_closed_form_step_validation():
    with pytest.raises(ValueError):
        closed_form_step(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        closed_form_step(1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        closed_form_step(-1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        closed_form_step(1.0, 1.0, 0.0)


def test_exact_search_finds_stationary_point():
    # phi(a) = (a - ln 2)^2 / 2
    dphi = lambda a: a - math.log(2.0)
    res = exact_search(dphi)
    assert res.mode == "exact"
    assert abs(res.alpha - math.log(2.0)) <= 1e-12
    assert abs(dphi(res.alpha)) <= 1e-12


def test_exact_search_rejects_non_descent():
    with pytest.raises(NotDescentDirectionError):
        exact_search(lambda a: 0.5)
    with pytest.raises(NotDescentDirectionError):
        exact_search(lambda a: -0.0)


def test_exact_search_unbounded_ray():
    # derivative never turns positive: the infimum is approached, not
    # attained.  Far out, -e^-a underflows to -0.0, which must still
    # count as "not decisively positive" rather than as a stationary
    # point (IEEE: -0.0 >= 0.0 is true).
    with pytest.raises(RayUnboundedError):
        exact_search(lambda a: -math.exp(-a))


def test_exact_search_budget():
    with pytest.raises(LineSearchBudgetError):
        exact_search(lambda a: a - math.log(2.0), 1e-18, max_bisections=3)


def test_exact_search_tolerance_validation():
    with pytest.raises(ValueError):
        exact_search(lambda a: a - 1.0, 0.0)


def test_step_result_is_plain_data():
    res = StepResult(1.5, 7, "wolfe")
    assert (res.alpha, res.evals, res.mode) == (1.5, 7, "wolfe")
