"""Self-exciting point processes with Mittag-Leffler memory kernels.

The library provides:

* ``special`` — Mittag-Leffler / Prabhakar function evaluation, the kernel
  density and its spectral representation, exact variate sampling;
* ``laplace`` — numerical inversion of Laplace transforms on the real time
  axis and forward transforms by quadrature;
* ``analytics`` — closed-form expected intensity and expected event counts;
* ``simulate`` — thinning and branching-cluster samplers of the process,
  plus Poisson and exponential-kernel references;
* ``harness`` — Monte Carlo experiment runners, emitters, and the
  end-to-end validation suite behind ``fhawkes validate``.
"""

from .analytics import (
    CurveSample,
    ModelParams,
    asymptote,
    expected_n,
    expected_n_half,
    lambda_exact,
    lambda_exact_half,
    lambda_image,
)
from .errors import (
    AccuracyError,
    BudgetError,
    ContourError,
    ConvergenceWarning,
    DomainError,
    FHawkesError,
    QuadratureError,
)
from .laplace import IltConfig, IltResult, LaplaceImage, forward_lt, ilt, ilt_grid
from .simulate import (
    EventSequence,
    intensity,
    simulate_cluster,
    simulate_exp_hawkes,
    simulate_poisson,
    simulate_thinning,
)
from .special import (
    MLKernelParams,
    erfcx,
    ml_density,
    ml_one,
    ml_sample,
    ml_spectral,
    prabhakar,
)

__version__ = "0.1.0"
