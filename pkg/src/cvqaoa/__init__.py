"""Monte-Carlo simulator of single-mode CV-QAOA on a measurement-induced photonic gate."""

__version__ = "0.1.0"

from .quadrature import (  # noqa: E402
    DEFAULT_ANCILLA,
    DEFAULT_INPUT,
    Orientation,
    QuadraturePair,
    SeedSpec,
    SqueezedSource,
    sample,
    variances_of,
)
from .gate import GateParams, settings_from, simulate_circuit  # noqa: E402
from .experiment import (  # noqa: E402
    Backend,
    LandscapeSpec,
    Mode,
    QaoaRunSpec,
    evaluate_objective,
    run_bayes,
    run_fixed,
    run_landscape,
    run_success_study,
    theoretical_optimum,
)
