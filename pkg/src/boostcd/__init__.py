"""Boosting as l1 steepest-descent coordinate descent, with the
primal-dual structure theory that explains its convergence regimes."""

from .boost import (
    ApproxSelector,
    IterateState,
    RunConfig,
    Trace,
    boost_step,
    initial_state,
    run,
    select_coordinate,
)
from .instance import (
    BoostInstance,
    LabeledSample,
    build_instance,
    make_instance,
    margins,
    read_instance,
    training_error,
    write_instance,
)
from .linesearch import StepResult, WolfeParams, closed_form_step, exact_search, wolfe_search
from .losses import (
    EXPONENTIAL,
    LOGISTIC,
    LossSpec,
    RiskFunction,
    conj_eval,
    conj_grad,
    loss_constants,
    loss_eval,
    loss_grad,
    loss_hess,
    make_loss,
)
from .structure import (
    DualCertificate,
    StructureReport,
    analyze,
    attainable,
    decompose,
    dual_certificate,
    gamma_classical,
    hard_core,
    kernel_basis,
    weak_learnable,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxSelector", "BoostInstance", "DualCertificate", "EXPONENTIAL",
    "IterateState", "LOGISTIC", "LabeledSample", "LossSpec", "RiskFunction",
    "RunConfig", "StepResult", "StructureReport", "Trace", "WolfeParams",
    "analyze", "attainable", "boost_step", "build_instance", "closed_form_step",
    "conj_eval", "conj_grad", "decompose", "dual_certificate", "exact_search",
    "gamma_classical", "hard_core", "initial_state", "kernel_basis",
    "loss_constants", "loss_eval", "loss_grad", "loss_hess", "make_instance",
    "make_loss", "margins", "read_instance", "run", "select_coordinate",
    "training_error", "weak_learnable", "wolfe_search", "write_instance",
]
