"""Squared Renyi-alpha entanglement: measures, monogamy residuals and certification tools."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DimensionError,
    InvalidStateError,
    MissingConcurrenceError,
    MissingDecompositionError,
    NotHermitianError,
    NotPSDError,
    SraeError,
    WindowError,
)
from .measures import (  # noqa: E402
    ALPHA_C,
    ALPHA_C2,
    AlphaOrder,
    Cut,
    RenyiEntanglement,
    SquaredConcurrence,
    concurrence_pure,
    concurrence_wootters,
    e_alpha_2xd,
    e_alpha_lower_bound,
    e_alpha_pure,
    e_alpha_two_qubit,
    f_alpha,
    renyi_entropy,
)
from .monogamy import (  # noqa: E402
    ConcurrenceProfile,
    IndicatorMeasure,
    ResidualReport,
    residual_mu,
    residual_sc,
    residual_sef,
    residual_srae_pure,
    tau1,
    tau2,
    three_tangle,
)
from .roof import RoofConfig, RoofResult, evaluate_ensemble, optimize_roof  # noqa: E402
from .states import (  # noqa: E402
    DensityMatrix,
    Ensemble,
    PureState,
    StateFamily,
    load_state,
    named_state,
    save_state,
)
