"""Doubly truncated moment risk measures in closed form.

For X = mu + sigma*Y with Y ~ E1(0, 1, g1) and a window xi_p < Y < xi_q, the
conditional raw moments of Y come from integrating y**i c1 g1(y**2/2) by
parts against the cumulative generators:

    E[Y   | w] = c1 [Gbar_1(xi_p^2/2) - Gbar_1(xi_q^2/2)] / F_Y
    E[Y^2 | w] = L1  + (c1/c*_1) L2
    E[Y^3 | w] = L1* + 2 L2*
    E[Y^4 | w] = L1** + 3 L2**

with the boundary terms ``L`` built from Gbar_1, Gbar_2 and the interval
probabilities of the derived variables Y_(1), Y_(2). Orders above four fall
back to one quadrature of y**(i-2) c*_1 Gbar_1(y**2/2).

Central moments (DTM) are recombined binomially from the raw ones. The
recombination runs on Y and is rescaled by sigma**n, which is algebraically
the same as recombining the moments of X but avoids cancellation when
|mu| >> sigma. The same formulas written directly in mu and sigma are kept
as ``*_expanded`` cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

from scipy import integrate

from .distribution import EllipticalDistribution, TruncationWindow, make_window
from .errors import DegenerateWindowError, DomainError
from .generators import GeneratorFamily
from .report import RiskReport

MIN_WINDOW_MASS = 1e-12

_MEASURE_LABEL = {1: "dte", 2: "dtv", 3: "dts", 4: "dtk"}


def _label(n: int) -> str:
    return _MEASURE_LABEL.get(n, f"dtm of order {n}")


def _edge(family: GeneratorFamily, k: int, xi: float, power: int) -> float:
    """xi**power * Gbar_k(xi**2/2); zero at an infinite bound."""
    if math.isinf(xi):
        return 0.0
    return xi ** power * family.gbar(k, 0.5 * xi * xi)


@dataclass(frozen=True)
class LTerms:
    """Boundary and mass terms of the truncated-moment formulas (standardized units).

    Terms above the requested order are ``None``. ``mass`` is F_Y(xi_p, xi_q)
    and ``dte`` the standardized truncated mean.
    """

    mass: float
    dte: float
    L1: float | None = None
    L2: float | None = None
    L1_star: float | None = None
    L2_star: float | None = None
    L1_dstar: float | None = None
    L2_dstar: float | None = None


def window_mass(family: GeneratorFamily, window: TruncationWindow) -> float:
    mass = family.std_interval(window.xi_p, window.xi_q)
    if not mass >= MIN_WINDOW_MASS:
        raise DegenerateWindowError(
            f"window ({window.p:g}, {window.q:g}) carries probability {mass:.3g} < {MIN_WINDOW_MASS:g}"
        )
    return mass


def lterms(family: GeneratorFamily, window: TruncationWindow, order: int = 4) -> LTerms:
    """Evaluate the L-terms needed for conditional moments up to ``order`` (1..4)."""
    if not 1 <= order <= 4:
        raise DomainError(f"lterms order must be between 1 and 4 (got {order})")
    family.require_moment(order, _label(order))
    a, b = window.xi_p, window.xi_q
    mass = window_mass(family, window)
    c1 = family.normalizer("c1")

    def diff(k, power):
        return c1 * (_edge(family, k, a, power) - _edge(family, k, b, power)) / mass

    terms = {"mass": mass, "dte": diff(1, 0)}
    if order >= 2:
        terms["L1"] = diff(1, 1)
        terms["L2"] = family.derived_cdf_interval(1, a, b) / mass
    if order >= 3:
        terms["L1_star"] = diff(1, 2)
        terms["L2_star"] = diff(2, 0)
    if order >= 4:
        ratio2 = c1 / family.normalizer("cstar2")
        terms["L1_dstar"] = diff(1, 3)
        terms["L2_dstar"] = diff(2, 1) + ratio2 * family.derived_cdf_interval(2, a, b) / mass
    return LTerms(**terms)


def _higher_l2(family: GeneratorFamily, window: TruncationWindow, i: int, mass: float) -> float:
    """int y**(i-2) c*_1 Gbar_1(y**2/2) dy over the window, divided by F_Y."""
    cstar1 = family.normalizer("cstar1")

    def f(y):
        return y ** (i - 2) * cstar1 * family.gbar(1, 0.5 * y * y)

    a, b = window.xi_p, window.xi_q
    cuts = [a, 0.0, b] if a < 0.0 < b else [a, b]
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        val, _ = integrate.quad(f, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=400)
        total += val
    return total / mass


def standardized_raw_moments(family: GeneratorFamily, window: TruncationWindow, nmax: int) -> list:
    """[E[Y^0|w], ..., E[Y^nmax|w]] for the standardized member."""
    if nmax < 0:
        raise DomainError(f"moment order must be >= 0 (got {nmax})")
    if nmax == 0:
        window_mass(family, window)
        return [1.0]
    family.require_moment(nmax, _label(nmax))
    lt = lterms(family, window, min(nmax, 4))
    moments = [1.0, lt.dte]
    if nmax >= 2:
        ratio1 = family.normalizer("c1") / family.normalizer("cstar1")
        moments.append(lt.L1 + ratio1 * lt.L2)
    if nmax >= 3:
        moments.append(lt.L1_star + 2.0 * lt.L2_star)
    if nmax >= 4:
        moments.append(lt.L1_dstar + 3.0 * lt.L2_dstar)
    if nmax > 4:
        c1 = family.normalizer("c1")
        ratio1 = c1 / family.normalizer("cstar1")
        a, b = window.xi_p, window.xi_q
        for i in range(5, nmax + 1):
            l1 = c1 * (_edge(family, 1, a, i - 1) - _edge(family, 1, b, i - 1)) / lt.mass
            moments.append(l1 + (i - 1) * ratio1 * _higher_l2(family, window, i, lt.mass))
    return moments


def _central_from_raw(raw: list, n: int) -> float:
    mean = raw[1]
    return math.fsum(comb(n, k) * (-mean) ** (n - k) * raw[k] for k in range(n + 1))


# ---------------------------------------------------------------------------
# measures


def dte_standardized(family: GeneratorFamily, window: TruncationWindow) -> float:
    """E[Y | xi_p < Y < xi_q] for Y ~ E1(0, 1, g1)."""
    family.require_moment(1, "dte")
    return lterms(family, window, 1).dte


def dte(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    """Doubly truncated expectation E[X | x_p < X < x_q]."""
    return dist.mu + dist.sigma * dte_standardized(dist.family, window)


def raw_truncated_moment(dist: EllipticalDistribution, window: TruncationWindow, n: int) -> float:
    """E[X^n | x_p < X < x_q], expanded binomially in mu and sigma."""
    if n < 1:
        raise DomainError(f"moment order must be >= 1 (got {n})")
    m = standardized_raw_moments(dist.family, window, n)
    mu, sigma = dist.mu, dist.sigma
    terms = [mu ** n, n * mu ** (n - 1) * sigma * m[1]]
    terms += [comb(n, i) * mu ** (n - i) * sigma ** i * m[i] for i in range(2, n + 1)]
    return math.fsum(terms)


def dtm(dist: EllipticalDistribution, window: TruncationWindow, n: int) -> float:
    """n-th doubly truncated central moment E[(X - DTE)^n | window], n >= 2."""
    if n < 2:
        raise DomainError(f"dtm order must be >= 2 (got {n})")
    raw = standardized_raw_moments(dist.family, window, n)
    return dist.sigma ** n * _central_from_raw(raw, n)


def dtv(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    """Doubly truncated variance."""
    raw = standardized_raw_moments(dist.family, window, 2)
    return dist.sigma ** 2 * max(raw[2] - raw[1] ** 2, 0.0)


def _shape_moments(family, window, n):
    raw = standardized_raw_moments(family, window, n)
    var = _central_from_raw(raw, 2)
    if not var > 0.0:
        raise DegenerateWindowError("window variance vanished")
    return var, _central_from_raw(raw, n)


def dts(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    """Doubly truncated skewness DTM_3 / DTV^(3/2); independent of mu and sigma."""
    var, third = _shape_moments(dist.family, window, 3)
    return third / var ** 1.5


def dtk(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    """Doubly truncated excess kurtosis DTM_4 / DTV^2 - 3."""
    var, fourth = _shape_moments(dist.family, window, 4)
    return fourth / var ** 2 - 3.0


def tce(dist: EllipticalDistribution, p: float) -> float:
    """Tail conditional expectation E[X | X > x_p]."""
    return dte(dist, make_window(dist, p, 1.0))


def tcm(dist: EllipticalDistribution, p: float, n: int) -> float:
    """Tail conditional moment E[(X - TCE)^n | X > x_p]; n = 1 gives the TCE."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"tail level must lie in (0, 1) (got {p})")
    if n == 1:
        return tce(dist, p)
    return dtm(dist, make_window(dist, p, 1.0), n)


def central_moment(dist: EllipticalDistribution, n: int) -> float:
    """n-th central moment of X: the full-support (p = 0, q = 1) case."""
    if n < 1:
        raise DomainError(f"moment order must be >= 1 (got {n})")
    dist.family.require_moment(n, _label(n))
    if n % 2 == 1:
        return 0.0
    return dtm(dist, make_window(dist, 0.0, 1.0), n)


# ---------------------------------------------------------------------------
# reports


def conditioning_warnings(family: GeneratorFamily, order: int) -> tuple:
    """Flag parameters within 5% of the existence bound of the order-th moment."""
    limit = family._moment_limit(order)
    if limit is None:
        return ()
    sym, bound = limit
    value = family._param_value()
    if value > bound and (value - bound) < 0.05 * bound:
        return (
            f"{family.name} {_label(order)} is ill-conditioned near the boundary "
            f"{sym} > {bound:g} (got {sym}={value:g})",
        )
    return ()


def risk_report(dist: EllipticalDistribution, window: TruncationWindow, order: int = 4,
                extra_orders=()) -> RiskReport:
    """All measures up to ``order`` (2, 3 or 4) plus optional higher DTMs."""
    if order not in (2, 3, 4):
        raise DomainError(f"report order must be 2, 3 or 4 (got {order})")
    top = max([order, *extra_orders])
    family = dist.family
    family.require_moment(order, _label(order))
    raw = standardized_raw_moments(family, window, top)
    sigma = dist.sigma
    var = _central_from_raw(raw, 2)
    if not var > 0.0:
        raise DegenerateWindowError("window variance vanished")
    dts_ = _central_from_raw(raw, 3) / var ** 1.5 if order >= 3 else None
    dtk_ = _central_from_raw(raw, 4) / var ** 2 - 3.0 if order >= 4 else None
    higher = {n: sigma ** n * _central_from_raw(raw, n) for n in sorted(set(extra_orders))}
    return RiskReport(
        dte=dist.mu + sigma * raw[1],
        dtv=sigma ** 2 * var,
        dts=dts_,
        dtk=dtk_,
        p=window.p,
        q=window.q,
        x_p=window.x_p,
        x_q=window.x_q,
        dtm=higher,
        warnings=conditioning_warnings(family, top),
    )


# ---------------------------------------------------------------------------
# the same results written out in mu and sigma; used as cross-checks


def dtm_expanded(dist: EllipticalDistribution, window: TruncationWindow, n: int) -> float:
    """DTM_n as the double sum over k and i in mu, sigma and the L-terms of order i."""
    if n < 2:
        raise DomainError(f"dtm order must be >= 2 (got {n})")
    fam = dist.family
    raw = standardized_raw_moments(fam, window, n)
    mu, sigma = dist.mu, dist.sigma
    d = mu + sigma * raw[1]
    terms = [(-1) ** n * d ** n, (-1) ** (n - 1) * n * d ** n]
    for k in range(2, n + 1):
        w = comb(n, k) * (-d) ** (n - k)
        terms.append(w * (mu ** k + k * mu ** (k - 1) * sigma * raw[1]))
        for i in range(2, k + 1):
            # raw[i] = L1 + (i - 1)(c1/c*_1) L2 at order i
            terms.append(w * comb(k, i) * mu ** (k - i) * sigma ** i * raw[i])
    return math.fsum(terms)


def dtv_expanded(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    fam = dist.family
    lt = lterms(fam, window, 2)
    ratio1 = fam.normalizer("c1") / fam.normalizer("cstar1")
    mu, sigma = dist.mu, dist.sigma
    d = mu + sigma * lt.dte
    return -d * d + mu * mu + 2.0 * mu * sigma * lt.dte + sigma ** 2 * (lt.L1 + ratio1 * lt.L2)


def dts_expanded(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    fam = dist.family
    lt = lterms(fam, window, 3)
    ratio1 = fam.normalizer("c1") / fam.normalizer("cstar1")
    mu, sigma = dist.mu, dist.sigma
    d = mu + sigma * lt.dte
    var = dtv_expanded(dist, window)
    s = sum(comb(3, k) * (-d) ** (3 - k) * (mu ** k + k * mu ** (k - 1) * sigma * lt.dte) for k in (2, 3))
    s += 2.0 * d ** 3 + 3.0 * (mu - d) * sigma ** 2 * (lt.L1 + ratio1 * lt.L2)
    s += sigma ** 3 * (lt.L1_star + 2.0 * lt.L2_star)
    return s / var ** 1.5


def dtk_expanded(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    fam = dist.family
    lt = lterms(fam, window, 4)
    ratio1 = fam.normalizer("c1") / fam.normalizer("cstar1")
    mu, sigma = dist.mu, dist.sigma
    d = mu + sigma * lt.dte
    var = dtv_expanded(dist, window)
    s = -3.0 * d ** 4 + 6.0 * (mu - d) ** 2 * sigma ** 2 * (lt.L1 + ratio1 * lt.L2)
    s += sum(comb(4, k) * (-d) ** (4 - k) * (mu ** k + k * mu ** (k - 1) * sigma * lt.dte) for k in (2, 3, 4))
    s += 4.0 * (mu - d) * sigma ** 3 * (lt.L1_star + 2.0 * lt.L2_star)
    s += sigma ** 4 * (lt.L1_dstar + 3.0 * lt.L2_dstar)
    return s / var ** 2 - 3.0
