"""Structural classification of boosting instances.

The dual feasible set of an instance A is the polyhedral cone of
nonnegative example weightings orthogonal to every weak-learner column:
Phi = ker(A^T) & R+^m.  Its support pattern -- the *hard core*, the set
of examples some dual vector weights positively -- splits the sample
into a weakly learnable part (off the core) and an attainable part (the
core), and determines which convergence regime coordinate descent is in:

* empty core          -> weak learnable: some lam has A @ lam < 0 and the
                         infimum of the risk is 0 (Gordan's alternative);
* core = all examples -> attainable: the risk is 0-coercive and its
                         minimum is attained (Stiemke's alternative);
* otherwise           -> mixed, with a halfspace witness strict on the
                         off-core rows and null on the core (Motzkin).

Every test here reduces to a small dense LP solved by :mod:`boostcd.lp`;
strict inequalities are compiled to margin-1 form, which the cone's
scale invariance makes equivalent.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from .boost import IterateState
from .instance import BoostInstance
from .losses import LossSpec, RiskFunction
from .lp import EQ, GE, INFEASIBLE, LE, OPTIMAL, LinearProgram, solve

FEAS_TOL = 1e-8
KERNEL_RANK_TOL = 1e-10

WEAK_LEARNABLE = "weak_learnable"
ATTAINABLE = "attainable"
MIXED = "mixed"


class InvariantViolationError(RuntimeError):
    """An internally certified structural fact failed to verify."""


def weak_learnable(inst: BoostInstance) -> Tuple[bool, Optional[np.ndarray]]:
    """Is there lam with A @ lam < 0 (every example strictly beaten)?

    Compiled to the feasibility LP {A @ lam <= -1}; returns the witness.
    """
    m, n = inst.m, inst.n
    lp = LinearProgram(
        objective=np.zeros(n),
        lhs=inst.a,
        senses=[LE] * m,
        rhs=-np.ones(m),
        bounds=[(-math.inf, math.inf)] * n,
    )
    out = solve(lp)
    if out.status == OPTIMAL:
        return True, out.x
    if out.status == INFEASIBLE:
        return False, None
    raise RuntimeError(f"unexpected LP status {out.status} in weak_learnable")


def attainable(inst: BoostInstance) -> Tuple[bool, Optional[np.ndarray]]:
    """Is there a strictly positive dual vector (psi > 0, A^T psi = 0)?

    Solved as max tau s.t. A^T psi = 0, psi >= tau * 1, 0 <= psi <= 1,
    which is scale-free; attainable iff the optimum exceeds tolerance.
    """
    m, n = inst.m, inst.n
    # variables: psi_1..psi_m, tau
    obj = np.zeros(m + 1)
    obj[m] = 1.0
    lhs = np.zeros((n + m, m + 1))
    lhs[:n, :m] = inst.a.T
    lhs[n:, :m] = np.eye(m)
    lhs[n:, m] = -1.0
    senses = [EQ] * n + [GE] * m
    rhs = np.zeros(n + m)
    bounds = [(0.0, 1.0)] * (m + 1)
    out = solve(LinearProgram(obj, lhs, senses, rhs, bounds, maximize=True))
    if out.status != OPTIMAL:
        raise RuntimeError(f"unexpected LP status {out.status} in attainable")
    if out.value > FEAS_TOL:
        return True, out.x[:m]
    return False, None


def _hard_core0(inst: BoostInstance) -> list:
    """0-based hard core: rows some dual cone vector weights positively."""
    m, n = inst.m, inst.n
    core = []
    lhs = inst.a.T
    senses = [EQ] * n
    rhs = np.zeros(n)
    bounds = [(0.0, 1.0)] * m
    for i in range(m):
        obj = np.zeros(m)
        obj[i] = 1.0
        out = solve(LinearProgram(obj, lhs, senses, rhs, bounds, maximize=True))
        if out.status != OPTIMAL:
            raise RuntimeError(f"unexpected LP status {out.status} in hard_core")
        if out.value > FEAS_TOL:
            core.append(i)
    return core


def hard_core(inst: BoostInstance) -> list:
    """Hard core as sorted 1-based example ids."""
    return [i + 1 for i in _hard_core0(inst)]


def _nonpositive_nonzero_ray(inst: BoostInstance) -> Tuple[bool, Optional[np.ndarray]]:
    """Is there lam with A @ lam <= 0 and A @ lam != 0?

    This is the primal side of Stiemke's alternative (its failure for all
    lam is equivalent to attainability).  Solved on a unit box so the LP
    stays bounded: max sum(-A @ lam) s.t. A @ lam <= 0, -1 <= lam <= 1.
    """
    m, n = inst.m, inst.n
    obj = -np.sum(inst.a, axis=0)
    lp = LinearProgram(
        objective=obj,
        lhs=inst.a,
        senses=[LE] * m,
        rhs=np.zeros(m),
        bounds=[(-1.0, 1.0)] * n,
        maximize=True,
    )
    out = solve(lp)
    if out.status != OPTIMAL:
        raise RuntimeError(f"unexpected LP status {out.status} in ray search")
    if out.value > FEAS_TOL:
        return True, out.x
    return False, None


@dataclass(frozen=True)
class Decomposition:
    """Row split by hard-core membership (1-based ids, ascending)."""

    rows_off_core: tuple
    rows_core: tuple
    off_core: Optional[BoostInstance]
    core: Optional[BoostInstance]


def decompose(inst: BoostInstance) -> Decomposition:
    """Split the instance into its off-core and core row blocks and verify
    the blocks have the certified structure: the off-core block has an
    empty hard core (so it is weakly learnable) and the core block is
    attainable.  Failure of either check raises InvariantViolationError."""
    core0 = _hard_core0(inst)
    core_set = set(core0)
    off0 = [i for i in range(inst.m) if i not in core_set]
    off_inst = inst.row_subset(off0) if off0 else None
    core_inst = inst.row_subset(core0) if core0 else None
    if off_inst is not None:
        stray = _hard_core0(off_inst)
        if stray:
            raise InvariantViolationError(
                f"off-core block has nonempty hard core (sub-rows {stray})"
            )
    if core_inst is not None:
        ok, _ = attainable(core_inst)
        if not ok:
            raise InvariantViolationError("core block is not attainable")
    return Decomposition(
        tuple(i + 1 for i in off0),
        tuple(i + 1 for i in core0),
        off_inst,
        core_inst,
    )


def gamma_classical(inst: BoostInstance) -> float:
    """Classical weak learning rate.

    gamma = min over probability weightings phi of max_j |(A^T phi)_j|:
    the edge the best weak learner is guaranteed against any example
    weighting.  Positive exactly when the instance is weakly learnable.
    LP: min t s.t. -t <= (A^T phi)_j <= t, phi >= 0, sum phi = 1.
    """
    m, n = inst.m, inst.n
    # variables: phi_1..phi_m, t
    obj = np.zeros(m + 1)
    obj[m] = 1.0
    lhs = np.zeros((2 * n + 1, m + 1))
    lhs[:n, :m] = inst.a.T
    lhs[:n, m] = -1.0
    lhs[n:2 * n, :m] = -inst.a.T
    lhs[n:2 * n, m] = -1.0
    lhs[2 * n, :m] = 1.0
    senses = [LE] * (2 * n) + [EQ]
    rhs = np.zeros(2 * n + 1)
    rhs[2 * n] = 1.0
    bounds = [(0.0, math.inf)] * m + [(0.0, math.inf)]
    out = solve(LinearProgram(obj, lhs, senses, rhs, bounds))
    if out.status != OPTIMAL:
        raise RuntimeError(f"unexpected LP status {out.status} in gamma_classical")
    return float(out.value)


def kernel_basis(inst: BoostInstance) -> np.ndarray:
    """Orthonormal basis (m x k) of ker(A^T), the span of the dual cone.

    Rank decisions come from a column-pivoted QR of A with tolerance
    1e-10 times the largest column norm.
    """
    a = inst.a
    q, r, _ = scipy.linalg.qr(a, mode="full", pivoting=True)
    diag = np.abs(np.diag(r))
    col_norm_max = float(np.max(np.linalg.norm(a, axis=0)))
    tol = KERNEL_RANK_TOL * col_norm_max
    rank = int(np.count_nonzero(diag > tol))
    return q[:, rank:]


@dataclass(frozen=True)
class DualCertificate:
    """A feasible dual vector with the optimality-gap bound it certifies:
    inf f <= objective, and inf f >= dual_value, so
    objective - inf f <= gap_bound."""

    psi: np.ndarray
    dual_value: float
    gap_bound: float


def dual_certificate(inst: BoostInstance, loss: LossSpec,
                     state: IterateState) -> Optional[DualCertificate]:
    """Project the iterate's dual weights onto ker(A^T) and, when the
    projection is (numerically) in the dual cone and the conjugate's
    domain, certify the duality gap f(A lam) - inf f <= f(A lam) + f*(psi).

    Projections with a coordinate below -1e-10 are rejected; tiny
    negatives are clipped to zero and the kernel residual re-checked.
    Returns None when no certificate can be extracted at this iterate.
    """
    basis = kernel_basis(inst)
    w = state.dual_weights
    proj = basis @ (basis.T @ w)
    if proj.size and float(np.min(proj)) < -1e-10:
        return None
    psi = np.maximum(proj, 0.0)
    if float(np.max(np.abs(inst.a.T @ psi))) > FEAS_TOL:
        return None
    rf = RiskFunction(loss, inst.m)
    fstar = rf.conj(psi)
    if not math.isfinite(fstar):
        return None
    return DualCertificate(psi, -fstar, float(state.objective) + fstar)


@dataclass(frozen=True)
class StructureReport:
    m: int
    n: int
    regime: str
    hard_core: tuple
    rows_off_core: tuple
    rows_core: tuple
    gamma_classical: float
    witness_primal: Optional[tuple]
    witness_dual: Optional[tuple]

    def to_json(self) -> str:
        obj = {
            "m": self.m,
            "n": self.n,
            "regime": self.regime,
            "hard_core": list(self.hard_core),
            "rows_off_core": list(self.rows_off_core),
            "rows_core": list(self.rows_core),
            "gamma_classical": self.gamma_classical,
            "witness_primal": None if self.witness_primal is None else list(self.witness_primal),
            "witness_dual": None if self.witness_dual is None else list(self.witness_dual),
        }
        return json.dumps(obj, indent=2) + "\n"


def _mixed_halfspace_witness(inst: BoostInstance, off0, core0) -> Optional[np.ndarray]:
    """lam with A_off @ lam <= -1 and A_core @ lam = 0 (Motzkin witness)."""
    n = inst.n
    senses = [LE] * len(off0) + [EQ] * len(core0)
    lhs = np.vstack([inst.a[off0, :], inst.a[core0, :]])
    rhs = np.concatenate([-np.ones(len(off0)), np.zeros(len(core0))])
    out = solve(LinearProgram(np.zeros(n), lhs, senses, rhs,
                              bounds=[(-math.inf, math.inf)] * n))
    return out.x if out.status == OPTIMAL else None


def analyze(inst: BoostInstance) -> StructureReport:
    """Full structural report: regime, hard core, row split, classical
    weak learning rate, and primal/dual witnesses.  Cross-checks the
    regime against the independent Gordan/Stiemke LPs and raises
    InvariantViolationError on disagreement."""
    core0 = _hard_core0(inst)
    off0 = [i for i in range(inst.m) if i not in set(core0)]
    if not core0:
        regime = WEAK_LEARNABLE
    elif len(core0) == inst.m:
        regime = ATTAINABLE
    else:
        regime = MIXED

    witness_primal = witness_dual = None
    if regime == WEAK_LEARNABLE:
        ok, lam = weak_learnable(inst)
        if not ok:
            raise InvariantViolationError(
                "empty hard core but no strict halfspace witness"
            )
        witness_primal = lam
    elif regime == ATTAINABLE:
        ok, psi = attainable(inst)
        if not ok:
            raise InvariantViolationError(
                "full hard core but no strictly positive dual vector"
            )
        witness_dual = psi
    else:
        witness_primal = _mixed_halfspace_witness(inst, off0, core0)
        if witness_primal is None:
            raise InvariantViolationError("mixed regime but no Motzkin witness")
        ok, psi_core = attainable(inst.row_subset(core0))
        if not ok:
            raise InvariantViolationError("core block is not attainable")
        psi = np.zeros(inst.m)
        psi[core0] = psi_core
        witness_dual = psi

    gamma = gamma_classical(inst)
    return StructureReport(
        m=inst.m,
        n=inst.n,
        regime=regime,
        hard_core=tuple(i + 1 for i in core0),
        rows_off_core=tuple(i + 1 for i in off0),
        rows_core=tuple(i + 1 for i in core0),
        gamma_classical=gamma,
        witness_primal=None if witness_primal is None else tuple(float(v) for v in witness_primal),
        witness_dual=None if witness_dual is None else tuple(float(v) for v in witness_dual),
    )
