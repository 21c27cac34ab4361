"""Structural classification: regimes, hard core, decomposition, the
classical rate, kernel bases, and dual certificates."""

import json
import math

import numpy as np
import pytest

from boostcd import boost, fixtures, structure
from boostcd.instance import make_instance
from boostcd.losses import LOGISTIC, RiskFunction, make_loss
from boostcd.structure import (
    ATTAINABLE,
    MIXED,
    WEAK_LEARNABLE,
    _nonpositive_nonzero_ray,
    analyze,
    attainable,
    decompose,
    dual_certificate,
    gamma_classical,
    hard_core,
    kernel_basis,
    weak_learnable,
)

EXPECTED = {
    "mixed-3x2": (MIXED, (1, 2)),
    "weaklearn-3x3": (WEAK_LEARNABLE, ()),
    "confidence-4x3": (MIXED, (1, 2)),
    "attainable-pair": (ATTAINABLE, (1, 2)),
    "single-good": (WEAK_LEARNABLE, ()),
    "attainable-tilted": (ATTAINABLE, (1, 2, 3)),
    "attainable-slow": (ATTAINABLE, (1, 2, 3)),
    "rotated-mixed-3x2": (MIXED, (1, 2)),
}


def _state(inst, loss, lam):
    rf = RiskFunction(loss, inst.m)
    return boost._state_at(inst, rf, np.asarray(lam, dtype=float), 0)


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_fixture_classification(name):
    inst = fixtures.FIXTURES[name]()
    regime, core = EXPECTED[name]
    rep = analyze(inst)
    assert rep.regime == regime
    assert rep.hard_core == core
    assert hard_core(inst) == list(core)
    assert rep.rows_core == core
    assert rep.rows_off_core == tuple(
        i for i in range(1, inst.m + 1) if i not in core
    )
    # the classical rate separates the regimes sharply on these fixtures
    if regime == WEAK_LEARNABLE:
        assert rep.gamma_classical == 1.0
    else:
        assert rep.gamma_classical == 0.0


def test_report_witnesses_verify():
    rep = analyze(fixtures.weaklearn_3x3())
    w = np.array(rep.witness_primal)
    assert rep.witness_dual is None
    assert np.all(fixtures.weaklearn_3x3().a @ w <= -1.0 + 1e-8)

    rep = analyze(fixtures.attainable_slow())
    psi = np.array(rep.witness_dual)
    assert rep.witness_primal is None
    assert np.min(psi) > 1e-8
    assert np.max(np.abs(fixtures.attainable_slow().a.T @ psi)) <= 1e-8

    inst = fixtures.mixed_3x2()
    rep = analyze(inst)
    w = np.array(rep.witness_primal)
    psi = np.array(rep.witness_dual)
    off = [i - 1 for i in rep.rows_off_core]
    core = [i - 1 for i in rep.rows_core]
    assert np.all(inst.a[off] @ w <= -1.0 + 1e-8)
    assert np.max(np.abs(inst.a[core] @ w)) <= 1e-8
    assert np.all(psi[off] == 0.0)
    assert np.min(psi[core]) > 1e-8
    assert np.max(np.abs(inst.a.T @ psi)) <= 1e-8


def test_decompose_row_split():
    inst = fixtures.mixed_3x2()
    dec = decompose(inst)
    assert dec.rows_off_core == (3,)
    assert dec.rows_core == (1, 2)
    assert np.array_equal(dec.off_core.a, inst.a[[2]])
    assert np.array_equal(dec.core.a, inst.a[[0, 1]])

    dec = decompose(fixtures.weaklearn_3x3())
    assert dec.rows_core == () and dec.core is None
    assert dec.rows_off_core == (1, 2, 3)
    assert np.array_equal(dec.off_core.a, fixtures.weaklearn_3x3().a)

    dec = decompose(fixtures.attainable_pair())
    assert dec.rows_off_core == () and dec.off_core is None
    assert np.array_equal(dec.core.a, fixtures.attainable_pair().a)


def test_gamma_against_grid_search():
    inst = make_instance([[-1.0, 0.5], [-0.5, -1.0]])
    ps = np.linspace(0.0, 1.0, 100001)
    weightings = np.stack([ps, 1.0 - ps], axis=1)
    grid = float(np.min(np.max(np.abs(weightings @ inst.a), axis=1)))
    assert abs(gamma_classical(inst) - grid) <= 1e-4


def test_gamma_vanishes_along_explicit_weightings():
    # on the mixed instance the edge of the best column against
    # phi = ((1-a)/2, (1-a)/2, a) is exactly a, so the infimum is 0
    inst = fixtures.mixed_3x2()
    for k in range(1, 31):
        alpha = 2.0 ** -k
        phi = np.array([(1 - alpha) / 2, (1 - alpha) / 2, alpha])
        assert float(np.max(np.abs(inst.a.T @ phi))) == alpha
    assert 2.0 ** -10 < 1e-3
    assert gamma_classical(inst) <= 1e-8


def test_kernel_basis_orthonormal_and_annihilating():
    inst = fixtures.mixed_3x2()
    b = kernel_basis(inst)
    assert b.shape == (3, 1)
    assert np.max(np.abs(b.T @ b - np.eye(1))) <= 1e-10
    assert np.max(np.abs(inst.a.T @ b)) <= 1e-8
    v = np.abs(b[:, 0])
    assert abs(v[0] - 1 / math.sqrt(2)) <= 1e-12
    assert abs(v[1] - 1 / math.sqrt(2)) <= 1e-12
    assert v[2] <= 1e-12


def test_kernel_basis_trivial():
    assert kernel_basis(fixtures.single_good()).shape == (1, 0)


def test_alternatives_are_exclusive_and_exhaustive():
    rng = np.random.default_rng(11)
    kinds = ("sign", "uniform", "ternary")
    for i in range(100):
        m = int(rng.integers(1, 6))
        n = int(rng.integers(1, 6))
        inst = fixtures.random_instance(rng, m, n, entries=kinds[i % 3])
        core = hard_core(inst)
        weak, _ = weak_learnable(inst)
        att, _ = attainable(inst)
        ray, _ = _nonpositive_nonzero_ray(inst)
        assert weak == (core == [])
        assert att == (len(core) == inst.m)
        assert att == (not ray)
        assert not (weak and att) or inst.m == 0
        assert (gamma_classical(inst) > 1e-8) == weak


def test_dual_certificate_on_mixed_instance():
    inst = fixtures.mixed_3x2()
    loss = make_loss(LOGISTIC, inst.m)
    cert = dual_certificate(inst, loss, _state(inst, loss, [10.0, 10.0]))
    assert cert is not None
    np.testing.assert_allclose(cert.psi, [0.5, 0.5, 0.0], atol=1e-12)
    assert np.min(cert.psi) >= 0.0
    assert abs(cert.dual_value - 2 * math.log(2)) <= 1e-13
    # at lam = (10, 10) the two core margins sit at the optimum and only
    # the off-core example contributes, so the gap is log1p(e^-20)
    assert abs(cert.gap_bound - math.log1p(math.exp(-20.0))) <= 1e-13
    assert 0.0 < cert.gap_bound <= 1e-3


def test_dual_certificate_weak_learnable_is_trivial():
    # empty kernel: psi = 0 certifies inf f >= 0, a gap equal to f itself
    inst = fixtures.single_good()
    loss = make_loss(LOGISTIC, inst.m)
    st = _state(inst, loss, [5.0])
    cert = dual_certificate(inst, loss, st)
    assert np.array_equal(cert.psi, [0.0])
    assert cert.dual_value == 0.0
    assert cert.gap_bound == st.objective


def test_dual_certificate_unavailable_for_mixed_sign_kernel():
    inst = make_instance([[0.5], [1.0]])
    loss = make_loss(LOGISTIC, inst.m)
    assert dual_certificate(inst, loss, _state(inst, loss, [0.0])) is None


def test_report_json_shape():
    rep = analyze(fixtures.mixed_3x2())
    text = rep.to_json()
    assert text.endswith("\n")
    obj = json.loads(text)
    assert list(obj) == [
        "m", "n", "regime", "hard_core", "rows_off_core", "rows_core",
        "gamma_classical", "witness_primal", "witness_dual",
    ]
    assert obj["m"] == 3 and obj["n"] == 2
    assert obj["regime"] == "mixed"
    assert obj["hard_core"] == [1, 2]
    assert obj["gamma_classical"] == 0.0
