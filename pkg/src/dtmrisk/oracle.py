"""Brute-force truncated moments by direct quadrature of the density.

Nothing here touches the closed-form machinery: the only inputs taken from
a distribution are its generator ``g1`` and constant ``c1``. Every value is
computed twice, once with QUADPACK (scipy) and once with the package's own
adaptive Gauss-Legendre kernel, and the two must agree.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from . import kernels
from .distribution import EllipticalDistribution, TruncationWindow
from .errors import DegenerateWindowError, DomainError, QuadratureAccuracyError
from .report import RiskReport

RULE_AGREEMENT = 1e-9
_EPSABS = 1e-13
_EPSREL = 1e-12


def _quadpack(family, alpha, beta, n, c1, a, b):
    def f(y):
        return (alpha + beta * y) ** n * c1 * family.g1(0.5 * y * y)

    cuts = [a, 0.0, b] if a < 0.0 < b else [a, b]
    total = 0.0
    error = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        val, err = integrate.quad(f, lo, hi, epsabs=_EPSABS, epsrel=_EPSREL, limit=500)
        total += val
        error += err
    return total, error


def _integrate(family, alpha, beta, n, c1, a, b, rule, backend):
    if rule == "quadpack":
        return _quadpack(family, alpha, beta, n, c1, a, b)[0]
    if rule == "gauss-legendre":
        return kernels.integrate_polynomial_weight(
            family, alpha, beta, n, c1, a, b, _EPSABS, _EPSREL, backend=backend
        )[0]
    if rule != "both":
        raise DomainError(f"unknown quadrature rule {rule!r}")
    qp, _ = _quadpack(family, alpha, beta, n, c1, a, b)
    gl, _ = kernels.integrate_polynomial_weight(
        family, alpha, beta, n, c1, a, b, _EPSABS, _EPSREL, backend=backend
    )
    scale = max(1.0, abs(qp))
    if abs(qp - gl) > RULE_AGREEMENT * scale:
        raise QuadratureAccuracyError(
            f"quadrature rules disagree: {qp!r} vs {gl!r}", estimate=qp, error=abs(qp - gl)
        )
    return qp


class _Window:
    """Standardized integration problem for one distribution and window."""

    def __init__(self, dist, window, rule, backend):
        self.family = dist.family
        self.mu = dist.mu
        self.sigma = dist.sigma
        self.a = window.xi_p
        self.b = window.xi_q
        self.rule = rule
        self.backend = backend
        self.c1 = dist.family.normalizer("c1")
        self.mass = self.integral(0.0, 1.0, 0)
        if not self.mass > 1e-12:
            raise DegenerateWindowError(f"window mass {self.mass:.3g} is numerically zero")

    def integral(self, alpha, beta, n):
        return _integrate(self.family, alpha, beta, n, self.c1, self.a, self.b, self.rule, self.backend)

    def mean_y(self):
        return self.integral(0.0, 1.0, 1) / self.mass

    def raw(self, n):
        # (mu + sigma*y)^n in data units; fine when |mu| is comparable to sigma
        return self.integral(self.mu, self.sigma, n) / self.mass

    def central_y(self, n, center):
        return self.integral(-center, 1.0, n) / self.mass


def oracle_truncated_moment(dist: EllipticalDistribution, window: TruncationWindow, n: int,
                            central: bool = False, rule: str = "both", backend=None) -> float:
    """E[(X - c)^n | x_p < X < x_q] by quadrature; c = 0, or the oracle's own mean."""
    if n < 0:
        raise DomainError(f"moment order must be >= 0 (got {n})")
    w = _Window(dist, window, rule, backend)
    if n == 0:
        return 1.0
    if not central:
        return w.raw(n)
    center = w.mean_y()
    return dist.sigma ** n * w.central_y(n, center)


def oracle_report(dist: EllipticalDistribution, window: TruncationWindow, rule: str = "both",
                  backend=None, orders=(2, 3, 4)):
    """DTE, DTV, DTS, DTK (and any further central moments) straight from the definitions.

    ``orders`` beyond 4 are placed in the report's ``dtm`` mapping.
    """
    w = _Window(dist, window, rule, backend)
    center = w.mean_y()
    central = {n: w.central_y(n, center) for n in sorted(set(orders) | {2})}
    var = central[2]
    sigma = dist.sigma
    return RiskReport(
        dte=dist.mu + sigma * center,
        dtv=sigma ** 2 * var,
        dts=central[3] / var ** 1.5 if 3 in central else None,
        dtk=central[4] / var ** 2 - 3.0 if 4 in central else None,
        p=window.p,
        q=window.q,
        x_p=window.x_p,
        x_q=window.x_q,
        dtm={n: sigma ** n * v for n, v in central.items() if n > 4},
    )


def sampling_moment(dist: EllipticalDistribution, window: TruncationWindow, n: int,
                    central: bool = False, draws: int = 10**7, seed=None, grid: int = 1 << 14):
    """Monte Carlo estimate of a truncated moment with its standard error.

    Draws by inverse-CDF sampling over the window from a tabulated CDF of Y
    (piecewise Gauss-Legendre cumulative sums on ``grid`` panels). Infinite
    bounds are cut where the remaining tail mass is below 1e-12. Only meant
    for coarse sanity bands; the deterministic oracle is the reference.
    """
    from .distribution import std_quantile

    fam = dist.family
    lo, hi = window.xi_p, window.xi_q
    if math.isinf(lo):
        lo = std_quantile(fam, 1e-12)
    if math.isinf(hi):
        hi = std_quantile(fam, 1.0 - 1e-12)
    edges = np.linspace(lo, hi, grid + 1)
    nodes, weights = np.polynomial.legendre.leggauss(8)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[1:] + edges[:-1])
    ys = mids[:, None] + half[:, None] * nodes[None, :]
    dens = fam.g1_array(0.5 * ys * ys)
    panel = half * (dens @ weights)
    cum = np.concatenate([[0.0], np.cumsum(panel)])
    cum /= cum[-1]
    rng = np.random.default_rng(seed)
    u = rng.random(draws)
    y = np.interp(u, cum, edges)
    x = dist.mu + dist.sigma * y
    if central:
        x = x - x.mean()
    vals = x ** n
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(draws))


def relative_error(value: float, reference: float, scale: float = 0.0) -> float:
    """|value - reference| / max(|reference|, scale).

    ``scale`` is the natural size of the quantity (the window's standard
    deviation for a mean, dtv**(n/2) for a central moment, 1 for skewness and
    kurtosis) so that values which vanish by symmetry are judged absolutely
    on that scale instead of dividing by a rounding residue.
    """
    denom = max(abs(reference), scale)
    if denom == 0.0:
        return 0.0 if value == reference else math.inf
    return abs(value - reference) / denom


def measure_scale(name: str, dtv: float) -> float:
    """Natural scale for :func:`relative_error` of a named measure."""
    if name == "dte":
        return math.sqrt(dtv)
    if name in ("dts", "dtk"):
        return 1.0
    if name == "dtv":
        return dtv
    if name.startswith("dtm"):
        return dtv ** (int(name[3:]) / 2.0)
    raise DomainError(f"unknown measure {name!r}")
