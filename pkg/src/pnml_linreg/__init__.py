"""pNML universal prediction for ridge linear regression."""

from .errors import (
    DataFormatError,
    DegenerateDensityError,
    NumericalDriftError,
    OracleDivergenceError,
    SingularGramError,
)
from .oracle import QuadratureSpec, numeric_density_check, numeric_k
from .pnml import (
    GenieFit,
    PnmlPrediction,
    density_at,
    genie_density_at,
    genie_fit,
    log_loss,
    pnml_predict,
    regret,
)
from .regression import (
    ConfidenceInterval,
    Dataset,
    FittedModel,
    RidgeConfig,
    build_vandermonde,
    confidence_interval,
    fit_ridge,
    leverage,
    predict,
    rls_update,
)
from .spectral import SpectralReport, analyze, correlation_matrix, learnability_profile

__version__ = "0.1.0"
