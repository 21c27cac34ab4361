"""Loss family for boosting: exponential and logistic losses.

Losses here follow the margin convention in which the label is already
folded into the instance matrix, so every loss g is increasing, strictly
convex, positive everywhere, and vanishes at -infinity.  The empirical
risk is the coordinate-wise sum f(x) = sum_i g(x_i); its Fenchel
conjugate f*(psi) = sum_i g*(psi_i) prices nonnegative example
weightings and drives the dual certificates in :mod:`boostcd.structure`.

Both losses additionally satisfy two level-set inequalities that the
step-size rules rely on: g'' <= eta * g and g <= beta * g', valid on the
initial sublevel set {x : g(x) <= m * g(0)}.  For the exponential loss
eta = beta = 1 exactly; for the logistic loss the constants grow with
the sample size m and are deliberately conservative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import expit, logit, logsumexp, xlogy

EXPONENTIAL = "exp"
LOGISTIC = "logistic"
KINDS = (EXPONENTIAL, LOGISTIC)

LN2 = math.log(2.0)

# Margins above this switch the exponential risk to log-domain summation.
_LOG_DOMAIN_CUTOFF = 30.0


class LossConstants(NamedTuple):
    eta: float
    beta: float
    capped: bool


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown loss kind {kind!r}; expected one of {KINDS}")


def loss_constants(kind: str, m: int) -> LossConstants:
    """Level-set curvature constants (eta, beta) for a sample of size m.

    eta bounds g''/g and beta bounds g/g' on the initial sublevel set.
    The exponential loss is a fixed point of differentiation, so both
    constants are 1.  For the logistic loss the initial level set reaches
    margins up to m*ln 2 and the constants are eta = 2^m / (m ln 2),
    beta = 1 + 2^m.  When 2^m overflows a double the values are capped
    at +inf and ``capped`` is set, leaving closed-form steps unusable.
    """
    _check_kind(kind)
    m = int(m)
    if m < 1:
        raise ValueError("sample size m must be >= 1")
    if kind == EXPONENTIAL:
        return LossConstants(1.0, 1.0, False)
    try:
        pow2m = 2.0 ** m
    except OverflowError:
        return LossConstants(math.inf, math.inf, True)
    return LossConstants(pow2m / (m * LN2), 1.0 + pow2m, False)


@dataclass(frozen=True)
class LossSpec:
    """A loss kind together with its sample-size-dependent constants."""

    kind: str
    eta: float
    beta: float
    sample_size_m: int
    capped: bool = False


def make_loss(kind: str, m: int) -> LossSpec:
    const = loss_constants(kind, m)
    return LossSpec(kind, const.eta, const.beta, int(m), const.capped)


# ---------------------------------------------------------------------------
# pointwise loss, derivatives, conjugate (array-friendly internals)

def _softplus(x):
    # ln(1 + e^x) without overflow on either tail
    x = np.asarray(x, dtype=float)
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def _g(kind, x):
    if kind == EXPONENTIAL:
        return np.exp(x)
    return _softplus(x)


def _gp(kind, x):
    if kind == EXPONENTIAL:
        return np.exp(x)
    return expit(np.asarray(x, dtype=float))


def _gpp(kind, x):
    if kind == EXPONENTIAL:
        return np.exp(x)
    s = expit(np.asarray(x, dtype=float))
    return s * (1.0 - s)


def _gstar(kind, phi):
    """Fenchel conjugate g*(phi), extended-real valued (+inf off-domain).

    exp:      phi ln phi - phi on [0, inf), with g*(0) = 0.
    logistic: phi ln phi + (1-phi) ln(1-phi) on [0, 1], zero at both ends.
    Negative (resp. out-of-unit-interval) arguments give +inf.
    """
    phi = np.asarray(phi, dtype=float)
    if kind == EXPONENTIAL:
        inside = phi >= 0
        safe = np.where(inside, phi, 0.0)
        val = xlogy(safe, safe) - safe
    else:
        inside = (phi >= 0) & (phi <= 1)
        safe = np.where(inside, phi, 0.5)
        val = xlogy(safe, safe) + xlogy(1.0 - safe, 1.0 - safe)
    return np.where(inside, val, np.inf)


def _gstar_grad_domain(kind):
    return (0.0, math.inf) if kind == EXPONENTIAL else (0.0, 1.0)


# ---------------------------------------------------------------------------
# public scalar operations

def _as_finite_scalar(x, name="x"):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x}")
    return x


def loss_eval(loss: LossSpec, x: float) -> float:
    """g(x); always positive."""
    return float(_g(loss.kind, _as_finite_scalar(x)))


def loss_grad(loss: LossSpec, x: float) -> float:
    """g'(x); always positive."""
    return float(_gp(loss.kind, _as_finite_scalar(x)))


def loss_hess(loss: LossSpec, x: float) -> float:
    """g''(x); positive, though it may underflow to 0 far in the tails."""
    return float(_gpp(loss.kind, _as_finite_scalar(x)))


def conj_eval(loss: LossSpec, phi: float) -> float:
    """g*(phi) as an extended real: +inf outside the conjugate domain."""
    return float(_gstar(loss.kind, float(phi)))


def conj_grad(loss: LossSpec, phi: float) -> float:
    """(g*)'(phi) on the interior of the conjugate domain.

    Inverts g': for the exponential loss this is ln(phi) on (0, inf),
    for the logistic loss the logit on (0, 1).  Boundary or exterior
    arguments raise, since the derivative is unbounded there.
    """
    phi = float(phi)
    lo, hi = _gstar_grad_domain(loss.kind)
    if not (lo < phi < hi):
        raise ValueError(
            f"conjugate derivative undefined at phi={phi}; "
            f"need phi strictly inside ({lo}, {hi})"
        )
    if loss.kind == EXPONENTIAL:
        return math.log(phi)
    return float(logit(phi))


# ---------------------------------------------------------------------------
# empirical risk over margin vectors

@dataclass(frozen=True)
class RiskFunction:
    """Separable empirical risk f(x) = sum_i g(x_i) over m margins."""

    loss: LossSpec
    m: int

    def __post_init__(self):
        if int(self.m) < 1:
            raise ValueError("m must be >= 1")
        if self.loss.sample_size_m != self.m:
            raise ValueError(
                f"loss constants were built for m={self.loss.sample_size_m}, "
                f"risk has m={self.m}"
            )

    def _vec(self, v, name):
        v = np.asarray(v, dtype=float)
        if v.shape != (self.m,):
            raise ValueError(f"{name} must have shape ({self.m},), got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError(f"{name} must be finite")
        return v

    def value(self, margins) -> float:
        """f(margins).  For the exponential loss with a margin above 30
        the sum runs in the log domain to keep relative accuracy."""
        x = self._vec(margins, "margins")
        if self.loss.kind == EXPONENTIAL and float(np.max(x)) > _LOG_DOMAIN_CUTOFF:
            return float(np.exp(logsumexp(x)))
        return float(np.sum(_g(self.loss.kind, x)))

    def grad(self, margins) -> np.ndarray:
        """Coordinate-wise g'(margins): the current dual example weights."""
        x = self._vec(margins, "margins")
        return _gp(self.loss.kind, x)

    def conj(self, psi) -> float:
        """f*(psi) = sum_i g*(psi_i), +inf if any coordinate is off-domain."""
        p = np.asarray(psi, dtype=float)
        if p.shape != (self.m,):
            raise ValueError(f"psi must have shape ({self.m},), got {p.shape}")
        if np.any(np.isnan(p)):
            raise ValueError("psi must not contain NaN")
        return float(np.sum(_gstar(self.loss.kind, p)))
