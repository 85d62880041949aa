"""Hilbert-Schmidt and Bures geometry of mixed Gaussian quantum states."""

from .exceptions import CovarianceFormatError, NumericalError, QuadratureError, SamplerExhausted
from .symplectic_core import (
    HamiltonianGenerator,
    ValidityReport,
    assemble_generator,
    conjugate,
    interleaved_to_block,
    symplectic_exp,
    symplectic_form,
    symplectic_spectrum,
    validate_covariance,
    williamson_diagonal,
)
from .metrics import (
    bures_distance_one_mode,
    fidelity_one_mode,
    hs_distance,
    hs_line_element,
    hs_line_element_diagonal,
    hs_overlap,
    purity,
    von_neumann_entropy,
)
from .measures import (
    DensityEvaluation,
    bures_spectral_density_one_mode,
    bures_truncated_integral,
    bures_volume_density_one_mode,
    hs_normalization_constant,
    hs_spectral_density,
    hs_sqrt_det_g,
    purity_density,
)
from .quadrature import QuadratureConfig
from .sampling import (
    SampleBatch,
    SamplerConfig,
    acceptance_probability,
    sample_batch,
    sample_covariance,
    sample_spectrum,
    sample_spectrum_one_mode,
)
from .ensemble_stats import (
    EnsembleSummary,
    HistogramSeries,
    bures_truncated_mean,
    figure_data,
    mc_mean,
    purity_histogram,
    quad_mean,
)

__version__ = "0.1.0"
