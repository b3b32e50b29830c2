"""Doubly truncated moment risk measures for elliptical distributions."""

from .distribution import (
    EllipticalDistribution,
    TruncationWindow,
    make_window,
    std_quantile,
    window_from_bounds,
)
from .errors import (
    DegenerateWindowError,
    DomainError,
    QuadratureAccuracyError,
    UnsupportedError,
)
from .estimation import (
    FittedModel,
    ReturnSeries,
    SEGMENT_MODEL,
    fit_normal_mle,
    marginal_distributions,
    parse_returns_csv,
    read_returns_csv,
)
from .generators import (
    Custom,
    GeneratorFamily,
    Laplace,
    Logistic,
    Normal,
    PearsonVII,
    StudentT,
    make_family,
)
from .measures import (
    central_moment,
    dte,
    dtk,
    dtm,
    dts,
    dtv,
    lterms,
    raw_truncated_moment,
    risk_report,
    tce,
    tcm,
)
from .oracle import oracle_report, oracle_truncated_moment
from .report import RiskReport
from .specfun import HurwitzLerchArgs, beta_fn, gamma_fn, hurwitz_lerch

__version__ = "0.1.0"
