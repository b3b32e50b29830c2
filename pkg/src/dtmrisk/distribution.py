"""Location-scale elliptical distributions and truncation windows."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .generators import GeneratorFamily

QUANTILE_WIDTH = 1e-12


@dataclass(frozen=True)
class EllipticalDistribution:
    """X ~ E1(mu, sigma**2, g1): density (c1/sigma) g1(((x - mu)/sigma)**2 / 2)."""

    mu: float
    sigma: float
    family: GeneratorFamily

    def __post_init__(self):
        if not (math.isfinite(self.mu)):
            raise DomainError(f"mu must be finite (got {self.mu})")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise DomainError(f"sigma must be positive and finite (got sigma={self.sigma})")

    def standardize(self, x: float) -> float:
        return (x - self.mu) / self.sigma

    def pdf(self, x: float) -> float:
        y = self.standardize(x)
        return self.family.normalizer("c1") * self.family.g1(0.5 * y * y) / self.sigma

    def cdf(self, x: float) -> float:
        if x == math.inf:
            return 1.0
        if x == -math.inf:
            return 0.0
        return self.family.std_cdf(self.standardize(x))

    def quantile(self, level: float) -> float:
        return self.mu + self.sigma * std_quantile(self.family, level)

    def truncated_prob(self, a: float, b: float) -> float:
        if a > b:
            raise DomainError(f"truncated_prob requires a <= b (got a={a}, b={b})")
        lo = -math.inf if a == -math.inf else self.standardize(a)
        hi = math.inf if b == math.inf else self.standardize(b)
        return self.family.std_interval(lo, hi)


def _lower_quantile(family: GeneratorFamily, alpha: float) -> float:
    """Solve P(Y < z) = alpha for z <= 0 (alpha <= 1/2) by bracketed bisection."""
    if alpha == 0.5:
        return 0.0
    lt = family.std_lower_tail
    lo = -1.0
    while lt(lo) > alpha:
        lo *= 2.0
        if lo < -1e300:
            raise DomainError(f"quantile bracket expansion failed for level {alpha}")
    hi = 0.0 if lo == -1.0 else 0.5 * lo
    while hi - lo > QUANTILE_WIDTH * max(1.0, -lo):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if lt(mid) > alpha:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def std_quantile(family: GeneratorFamily, level: float) -> float:
    """Quantile of the standardized member Y.

    Levels above 1/2 are reflected, Q(l) = -Q(1 - l), so symmetric levels
    map to exactly opposite points.
    """
    if not 0.0 < level < 1.0:
        raise DomainError(f"quantile level must lie in (0, 1) (got {level})")
    if level <= 0.5:
        return _lower_quantile(family, level)
    return -_lower_quantile(family, 1.0 - level)


@dataclass(frozen=True)
class TruncationWindow:
    """Probability levels (p, q) with their quantiles and standardized bounds."""

    p: float
    q: float
    x_p: float
    x_q: float
    xi_p: float
    xi_q: float

    @property
    def mass(self) -> float:
        return self.q - self.p


def make_window(dist: EllipticalDistribution, p: float, q: float) -> TruncationWindow:
    """Resolve the window x_p < X < x_q; p = 0 and q = 1 give infinite bounds."""
    if not (0.0 <= p < 1.0 and 0.0 < q <= 1.0):
        raise DomainError(f"window requires 0 <= p < 1 and 0 < q <= 1 (got p={p}, q={q})")
    if not p < q:
        raise DomainError(f"window requires p < q (got p={p}, q={q})")
    xi_p = -math.inf if p == 0.0 else std_quantile(dist.family, p)
    xi_q = math.inf if q == 1.0 else std_quantile(dist.family, q)
    x_p = dist.mu + dist.sigma * xi_p
    x_q = dist.mu + dist.sigma * xi_q
    return TruncationWindow(p, q, x_p, x_q, xi_p, xi_q)


def window_from_bounds(dist: EllipticalDistribution, a: float, b: float) -> TruncationWindow:
    """Window given directly by bounds a < X < b; p and q are filled in from the CDF."""
    if not a < b:
        raise DomainError(f"window requires a < b (got a={a}, b={b})")
    xi_a = -math.inf if a == -math.inf else dist.standardize(a)
    xi_b = math.inf if b == math.inf else dist.standardize(b)
    return TruncationWindow(dist.cdf(a), dist.cdf(b), a, b, xi_a, xi_b)


# functional aliases ---------------------------------------------------------


def pdf(dist: EllipticalDistribution, x: float) -> float:
    return dist.pdf(x)


def cdf(dist: EllipticalDistribution, x: float) -> float:
    return dist.cdf(x)


def quantile(dist: EllipticalDistribution, level: float) -> float:
    return dist.quantile(level)


def truncated_prob(dist: EllipticalDistribution, a: float, b: float) -> float:
    return dist.truncated_prob(a, b)
