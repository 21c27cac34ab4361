"""Step-size selection along a descent ray.

Three modes, all operating on the one-dimensional restriction
phi(alpha) = f(x + alpha * v) of a convex objective:

* ``wolfe_search``   bracketing/bisection for the sufficient-decrease and
                     curvature conditions,
* ``closed_form_step``  a conservative explicit step from the level-set
                     curvature constant eta,
* ``exact_search``   derivative bisection to a near-stationary point, used
                     by the convergence experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

WOLFE = "wolfe"
CLOSED_FORM = "closed"
EXACT = "exact"


class NotDescentDirectionError(ValueError):
    """phi'(0) >= 0: the ray does not descend."""


class RayUnboundedError(RuntimeError):
    """phi' stayed negative past the bracketing cap."""


class LineSearchBudgetError(RuntimeError):
    """Iteration budget exhausted; ``interval`` holds the last bracket."""

    def __init__(self, message, interval):
        super().__init__(f"{message} (last interval {interval[0]!r}..{interval[1]!r})")
        self.interval = tuple(interval)


@dataclass(frozen=True)
class WolfeParams:
    c1: float = 1.0 / 3.0
    c2: float = 1.0 / 2.0
    max_bracket_doublings: int = 200
    max_bisections: int = 200

    def __post_init__(self):
        if not (0.0 < self.c1 < self.c2 < 1.0):
            raise ValueError(f"need 0 < c1 < c2 < 1, got c1={self.c1}, c2={self.c2}")
        if self.max_bracket_doublings < 1 or self.max_bisections < 1:
            raise ValueError("iteration budgets must be >= 1")


@dataclass(frozen=True)
class StepResult:
    alpha: float
    evals: int
    mode: str


def wolfe_search(phi, dphi, params: WolfeParams | None = None, *,
                 phi0: float | None = None, dphi0: float | None = None) -> StepResult:
    """Find a step satisfying both progress conditions

        (1)  phi(alpha) <= phi(0) + alpha * c1 * phi'(0)     (decrease)
        (2)  phi'(alpha) >= c2 * phi'(0)                     (curvature)

    by doubling an upper bracket while (1) still holds there, then
    bisecting: a midpoint violating (1) becomes the new upper end,
    one satisfying (1) but not (2) the new lower end.  Requires
    phi'(0) < 0 and phi bounded below; termination on such functions
    is guaranteed in exact arithmetic, and the two budgets guard
    against floating-point stalls.

    ``phi0``/``dphi0`` may pass along already-computed values of
    phi(0) and phi'(0).
    """
    p = params if params is not None else WolfeParams()
    evals = 0
    if phi0 is None:
        phi0 = float(phi(0.0))
        evals += 1
    if dphi0 is None:
        dphi0 = float(dphi(0.0))
        evals += 1
    if not dphi0 < 0.0:
        raise NotDescentDirectionError(f"phi'(0) = {dphi0!r} is not negative")

    def decreased(alpha, value):
        return value <= phi0 + alpha * p.c1 * dphi0

    hi = 1.0
    f_hi = float(phi(hi))
    evals += 1
    doublings = 0
    while decreased(hi, f_hi):
        if doublings >= p.max_bracket_doublings:
            raise LineSearchBudgetError("bracketing budget exhausted", (0.0, hi))
        hi *= 2.0
        doublings += 1
        f_hi = float(phi(hi))
        evals += 1

    lo = 0.0
    alpha = hi / 2.0
    for _ in range(p.max_bisections):
        value = float(phi(alpha))
        evals += 1
        if decreased(alpha, value):
            slope = float(dphi(alpha))
            evals += 1
            if slope >= p.c2 * dphi0:
                return StepResult(alpha, evals, WOLFE)
            lo = alpha
        else:
            hi = alpha
        alpha = (lo + hi) / 2.0
    raise LineSearchBudgetError("bisection budget exhausted", (lo, hi))


def closed_form_step(grad_inf_norm: float, objective: float, eta: float) -> float:
    """The explicit step ||grad||_inf / (eta * f).

    Conservative but line-search free; valid whenever the loss satisfies
    g'' <= eta * g on the current level set.
    """
    grad_inf_norm = float(grad_inf_norm)
    objective = float(objective)
    eta = float(eta)
    if not objective > 0.0:
        raise ValueError(f"objective must be positive, got {objective!r}")
    if grad_inf_norm < 0.0:
        raise ValueError("gradient norm must be nonnegative")
    if not eta > 0.0:
        raise ValueError(f"eta must be positive, got {eta!r}")
    return grad_inf_norm / (eta * objective)


def exact_search(dphi, tol: float = 1e-12, *, dphi0: float | None = None,
                 max_doublings: int = 200, max_bisections: int = 200) -> StepResult:
    """Near-stationary step: alpha > 0 with |phi'(alpha)| <= tol.

    Doubles an upper end until the derivative is decisively positive
    (> tol), then bisects on the derivative sign.  If the derivative
    never turns positive within the doubling budget the infimum is not
    attained along the ray and ``RayUnboundedError`` is raised.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    evals = 0
    if dphi0 is None:
        dphi0 = float(dphi(0.0))
        evals += 1
    if not dphi0 < 0.0:
        raise NotDescentDirectionError(f"phi'(0) = {dphi0!r} is not negative")

    lo, hi = 0.0, 1.0
    d_hi = float(dphi(hi))
    evals += 1
    doublings = 0
    while d_hi <= tol:
        if doublings >= max_doublings:
            raise RayUnboundedError("infimum not attained along ray")
        lo = hi
        hi *= 2.0
        doublings += 1
        d_hi = float(dphi(hi))
        evals += 1

    for _ in range(max_bisections):
        mid = (lo + hi) / 2.0
        d = float(dphi(mid))
        evals += 1
        if abs(d) <= tol:
            return StepResult(mid, evals, EXACT)
        if d > 0.0:
            hi = mid
        else:
            lo = mid
    raise LineSearchBudgetError("derivative bisection budget exhausted", (lo, hi))
