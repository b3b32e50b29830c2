"""Density generators of univariate elliptical families.

A family is described by its density generator ``g1`` on ``u >= 0``, the
cumulative generators

    Gbar_1(u) = int_u^inf g1(s) ds,      Gbar_2(u) = int_u^inf Gbar_1(s) ds,

and the normalizing constants ``c1``, ``c*_1``, ``c*_2`` that turn
``g1(y**2/2)``, ``Gbar_1(y**2/2)`` and ``Gbar_2(y**2/2)`` into densities on
the real line. The latter two densities define the derived variables
``Y_(1)`` and ``Y_(2)`` whose interval probabilities enter the truncated
moment formulas.

Five families have closed forms (normal, Student-t, logistic, Laplace and
Pearson type VII); :class:`Custom` handles any other generator by
quadrature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, special

from . import kernels
from .errors import DomainError, UnsupportedError
from .specfun import (
    INV_SQRT_2PI,
    SQRT_2PI,
    HurwitzLerchArgs,
    beta_fn,
    hurwitz_lerch,
    std_normal_cdf,
)

LEVELS = ("c1", "cstar1", "cstar2")

_QUAD_TOL = dict(epsabs=1e-13, epsrel=1e-12, limit=400)


def _fmt(x: float) -> str:
    frac = Fraction(x).limit_denominator(8)
    if abs(float(frac) - x) < 1e-12:
        return str(frac)
    return f"{x:g}"


def _check_u(u):
    if np.any(np.asarray(u) < 0.0):
        raise DomainError("generator argument u must be >= 0")


def _interval_from_lower_tail(lower_tail, a: float, b: float) -> float:
    """P(a < Y < b) for a symmetric Y given its lower tail P(Y < z), z <= 0.

    Upper-half points go through the survival function P(Y > x) = P(Y < -x)
    so that windows deep in either tail keep full relative accuracy.
    """
    if a > b:
        raise DomainError(f"interval requires a <= b (got a={a}, b={b})")
    if a == b:
        return 0.0

    def lt(z):
        return 0.0 if z == -math.inf else lower_tail(z)

    if a >= 0.0:
        mass = lt(-a) - lt(-b)
    elif b <= 0.0:
        mass = lt(b) - lt(a)
    else:
        mass = 1.0 - lt(a) - lt(-b)
    return max(mass, 0.0)


class GeneratorFamily:
    """Base class: a density generator plus its cumulative generators.

    Subclasses are frozen dataclasses, so instances are hashable and can key
    the per-session caches.
    """

    name = "generator"

    # -- closed-form pieces supplied by subclasses -------------------------
    def g1(self, u):
        raise NotImplementedError

    def _gbar(self, k: int, u):
        raise NotImplementedError

    def _constant(self, level: str) -> float:
        raise NotImplementedError

    def _lower_tail(self, k: int, z: float) -> float:
        """P(Y_(k) < z) for z <= 0, with Y_(0) = Y."""
        raise NotImplementedError

    # -- validity --------------------------------------------------------------
    def _gbar_limit(self, k: int):
        """(parameter symbol, threshold) below which Gbar_k diverges, or None."""
        return None

    def _constant_limit(self, level: str):
        return None

    def _moment_limit(self, n: int):
        return None

    def _param_value(self) -> float:
        return math.nan

    def _raise_limit(self, limit, what: str):
        sym, bound = limit
        value = self._param_value()
        if not value > bound:
            raise UnsupportedError(
                f"{self.name} {what} requires {sym} > {_fmt(bound)} (got {sym}={value:g})"
            )

    def require_gbar(self, k: int):
        if k not in (1, 2):
            raise UnsupportedError(f"cumulative generator order must be 1 or 2 (got {k})")
        limit = self._gbar_limit(k)
        if limit is not None:
            self._raise_limit(limit, f"cumulative generator of order {k}")

    def require_constant(self, level: str):
        if level not in LEVELS:
            raise DomainError(f"normalizer level must be one of {LEVELS} (got {level!r})")
        limit = self._constant_limit(level)
        if limit is not None:
            self._raise_limit(limit, f"normalizer {level}")

    def require_moment(self, n: int, what: str | None = None):
        """Raise :class:`UnsupportedError` unless E|Y|**n is finite."""
        limit = self._moment_limit(n)
        if limit is not None:
            self._raise_limit(limit, what or f"moment of order {n}")

    # -- public surface --------------------------------------------------------
    def g1_array(self, u):
        return self.g1(np.asarray(u, dtype=float))

    def gbar(self, k: int, u):
        self.require_gbar(k)
        _check_u(u)
        return self._gbar(k, u)

    def normalizer(self, level: str) -> float:
        self.require_constant(level)
        return _cached_constant(self, level)

    def derived_cdf_interval(self, k: int, a: float, b: float) -> float:
        """P(a < Y_(k) < b) where Y_(k) has density c*_k Gbar_k(y**2/2)."""
        if a > b:
            raise DomainError(f"interval requires a <= b (got a={a}, b={b})")
        self.require_constant(f"cstar{k}")
        return _cached_interval(self, k, float(a), float(b))

    def std_cdf(self, y: float) -> float:
        """Distribution function of the standardized member Y ~ E1(0, 1, g1)."""
        if y == 0.0:
            return 0.5
        if y < 0.0:
            return self._lower_tail(0, y)
        return 1.0 - self._lower_tail(0, -y)

    def std_lower_tail(self, z: float) -> float:
        """P(Y < z) for z <= 0, accurate far into the tail."""
        if z > 0.0:
            raise DomainError("std_lower_tail requires z <= 0")
        if z == -math.inf:
            return 0.0
        return self._lower_tail(0, z)

    def std_interval(self, a: float, b: float) -> float:
        """F_Y(a, b) = P(a < Y < b) for the standardized member."""
        return _cached_interval(self, 0, float(a), float(b))

    def kernel_code(self):
        """(code, parameter) for the compiled generator, or None."""
        return None


@lru_cache(maxsize=None)
def _cached_constant(family: GeneratorFamily, level: str) -> float:
    return family._constant(level)


@lru_cache(maxsize=4096)
def _cached_interval(family: GeneratorFamily, k: int, a: float, b: float) -> float:
    return _interval_from_lower_tail(lambda z: family._lower_tail(k, z), a, b)


def _t_lower_tail(nu: float, x: float) -> float:
    return float(special.stdtr(nu, x))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Normal(GeneratorFamily):
    name = "normal"

    def g1(self, u):
        return np.exp(-u) if isinstance(u, np.ndarray) else math.exp(-u)

    def _gbar(self, k, u):
        return self.g1(u)

    def _constant(self, level):
        return INV_SQRT_2PI

    def _lower_tail(self, k, z):
        return std_normal_cdf(z)

    def kernel_code(self):
        return kernels.NORMAL, 0.0


@dataclass(frozen=True)
class StudentT(GeneratorFamily):
    """Student-t with ``m`` degrees of freedom, g1(u) = (1 + 2u/m)**(-(m+1)/2)."""

    m: float
    name = "student-t"

    def __post_init__(self):
        if not self.m > 0.0:
            raise DomainError(f"student-t requires m > 0 (got m={self.m})")

    def _param_value(self):
        return self.m

    def _gbar_limit(self, k):
        return ("m", 2.0 * k - 1.0)

    def _constant_limit(self, level):
        return {"c1": None, "cstar1": ("m", 2.0), "cstar2": ("m", 4.0)}[level]

    def _moment_limit(self, n):
        return ("m", float(n))

    def g1(self, u):
        m = self.m
        return (1.0 + 2.0 * u / m) ** (-(m + 1.0) / 2.0)

    def _gbar(self, k, u):
        m = self.m
        base = 1.0 + 2.0 * u / m
        if k == 1:
            return m / (m - 1.0) * base ** (-(m - 1.0) / 2.0)
        return m * m / ((m - 1.0) * (m - 3.0)) * base ** (-(m - 3.0) / 2.0)

    def _constant(self, level):
        m = self.m
        if level == "c1":
            return math.exp(math.lgamma((m + 1.0) / 2.0) - math.lgamma(m / 2.0)) / math.sqrt(m * math.pi)
        if level == "cstar1":
            return (m - 1.0) / (m ** 1.5 * beta_fn(0.5, (m - 2.0) / 2.0))
        return (m - 1.0) * (m - 3.0) / (m ** 2.5 * beta_fn(0.5, (m - 4.0) / 2.0))

    def _lower_tail(self, k, z):
        # Y_(k) is a rescaled Student-t with m - 2k degrees of freedom
        nu = self.m - 2.0 * k
        return _t_lower_tail(nu, z * math.sqrt(nu / self.m))

    def kernel_code(self):
        return kernels.STUDENT_T, float(self.m)


@dataclass(frozen=True)
class Logistic(GeneratorFamily):
    """Elliptical logistic, g1(u) = exp(-u) / (1 + exp(-u))**2."""

    name = "logistic"

    def g1(self, u):
        e = np.exp(-u) if isinstance(u, np.ndarray) else math.exp(-u)
        return e / (1.0 + e) ** 2

    def _gbar(self, k, u):
        if isinstance(u, np.ndarray):
            return np.exp(-u) / (1.0 + np.exp(-u)) if k == 1 else np.log1p(np.exp(-u))
        e = math.exp(-u)
        return e / (1.0 + e) if k == 1 else math.log1p(e)

    def _constant(self, level):
        psi = {
            "c1": HurwitzLerchArgs(-1.0, 0.5, 1.0, 2.0),
            "cstar1": HurwitzLerchArgs(-1.0, 0.5, 1.0, 1.0),
            "cstar2": HurwitzLerchArgs(-1.0, 1.5, 1.0, 1.0),
        }[level]
        return 1.0 / (SQRT_2PI * hurwitz_lerch(psi))

    def _density(self, k):
        c = self.normalizer(("c1", "cstar1", "cstar2")[k])
        f = self.g1 if k == 0 else (lambda u: self._gbar(k, u))
        return lambda y: c * f(0.5 * y * y)

    def _lower_tail(self, k, z):
        val, _ = integrate.quad(self._density(k), -math.inf, z, **_QUAD_TOL)
        return val

    def kernel_code(self):
        return kernels.LOGISTIC, 0.0


@dataclass(frozen=True)
class Laplace(GeneratorFamily):
    """Elliptical Laplace, g1(u) = exp(-sqrt(2u)); Y has density exp(-|y|)/2."""

    name = "laplace"

    def g1(self, u):
        if isinstance(u, np.ndarray):
            return np.exp(-np.sqrt(2.0 * u))
        return math.exp(-math.sqrt(2.0 * u))

    def _gbar(self, k, u):
        r = np.sqrt(2.0 * u) if isinstance(u, np.ndarray) else math.sqrt(2.0 * u)
        e = np.exp(-r) if isinstance(u, np.ndarray) else math.exp(-r)
        if k == 1:
            return (1.0 + r) * e
        return (3.0 + 2.0 * u + 3.0 * r) * e

    def _constant(self, level):
        return {"c1": 0.5, "cstar1": 0.25, "cstar2": 0.0625}[level]

    def _lower_tail(self, k, z):
        a = -z
        e = math.exp(-a)
        if k == 0:
            return 0.5 * e
        if k == 1:
            return 0.25 * (2.0 + a) * e
        return (8.0 + 5.0 * a + a * a) * e / 16.0

    def kernel_code(self):
        return kernels.LAPLACE, 0.0


@dataclass(frozen=True)
class PearsonVII(GeneratorFamily):
    """Pearson type VII with shape ``t``, g1(u) = (1 + 2u)**(-t)."""

    t: float
    name = "pearson-vii"

    def __post_init__(self):
        if not self.t > 0.5:
            raise DomainError(f"pearson-vii requires t > 1/2 (got t={self.t})")

    def _param_value(self):
        return self.t

    def _gbar_limit(self, k):
        return ("t", float(k))

    def _constant_limit(self, level):
        return {"c1": None, "cstar1": ("t", 1.5), "cstar2": ("t", 2.5)}[level]

    def _moment_limit(self, n):
        return ("t", (n + 1.0) / 2.0)

    def g1(self, u):
        return (1.0 + 2.0 * u) ** (-self.t)

    def _gbar(self, k, u):
        t = self.t
        if k == 1:
            return (1.0 + 2.0 * u) ** (-(t - 1.0)) / (2.0 * (t - 1.0))
        return (1.0 + 2.0 * u) ** (-(t - 2.0)) / (4.0 * (t - 1.0) * (t - 2.0))

    def _constant(self, level):
        t = self.t
        if level == "c1":
            return math.exp(math.lgamma(t) - math.lgamma(t - 0.5)) / math.sqrt(math.pi)
        if level == "cstar1":
            return 2.0 * (t - 1.0) / beta_fn(0.5, t - 1.5)
        return 4.0 * (t - 1.0) * (t - 2.0) / beta_fn(0.5, t - 2.5)

    def _lower_tail(self, k, z):
        # density of Y_(k) is proportional to (1 + y**2)**-(t - k): a Student-t
        # with nu = 2(t - k) - 1 degrees of freedom scaled by 1/sqrt(nu)
        nu = 2.0 * (self.t - k) - 1.0
        return _t_lower_tail(nu, z * math.sqrt(nu))

    def kernel_code(self):
        return kernels.PEARSON_VII, float(self.t)


# ---------------------------------------------------------------------------


def _tail_integral(f: Callable[[float], float], a: float) -> float:
    """int_a^inf f(u) du through u = tan(theta)."""
    if a == math.inf:
        return 0.0
    theta0 = math.atan(a)

    def mapped(theta):
        c = math.cos(theta)
        if c <= 0.0:
            return 0.0
        return f(math.tan(theta)) / (c * c)

    val, _ = integrate.quad(mapped, theta0, 0.5 * math.pi, **_QUAD_TOL)
    return val


@dataclass(frozen=True)
class Custom(GeneratorFamily):
    """User-supplied density generator; everything else by quadrature.

    ``func`` maps a scalar ``u >= 0`` to ``g1(u) > 0``. Cumulative
    generators and constants are obtained by swapping the order of the
    iterated integrals so each needs a single quadrature.
    """

    func: Callable[[float], float] = field(compare=True)
    label: str = "custom"

    def __post_init__(self):
        for u in (0.0, 0.5, 2.0):
            v = self.func(u)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"custom generator must be positive and finite (g1({u}) = {v})")
        total = self._checked_radial_moment(-0.5)
        if not (math.isfinite(total) and total > 0.0):
            raise DomainError("custom generator violates int_0^inf s^(-1/2) g1(s) ds < inf")

    @property
    def name(self):
        return self.label

    def _radial_moment(self, power: float) -> float:
        """int_0^inf s**power g1(s) ds, through s = v**2 to tame s**-1/2 at 0."""
        f = self.func

        def g(v):
            return 2.0 * v ** (2.0 * power + 1.0) * f(v * v)

        head, _ = integrate.quad(g, 0.0, 1.0, **_QUAD_TOL)
        return head + _tail_integral(g, 1.0)

    def _checked_radial_moment(self, power: float) -> float:
        """Radial moment, or inf when QUADPACK reports a divergent integrand."""
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                return self._radial_moment(power)
            except integrate.IntegrationWarning:
                return math.inf

    def _param_value(self):
        return math.nan

    def require_moment(self, n, what=None):
        # E|Y|^n < inf  iff  int s^((n-1)/2) g1(s) ds < inf
        val = self._checked_radial_moment((n - 1.0) / 2.0)
        if not math.isfinite(val):
            raise UnsupportedError(f"{self.name} {what or f'moment of order {n}'} does not exist")

    def require_gbar(self, k):
        if k not in (1, 2):
            raise UnsupportedError(f"cumulative generator order must be 1 or 2 (got {k})")

    def g1(self, u):
        if isinstance(u, np.ndarray):
            return np.vectorize(self.func, otypes=[float])(u)
        return self.func(u)

    def _gbar(self, k, u):
        if isinstance(u, np.ndarray):
            return np.vectorize(lambda x: self._gbar(k, float(x)), otypes=[float])(u)
        if k == 1:
            return _tail_integral(self.func, u)
        # Gbar_2(u) = int_u^inf (s - u) g1(s) ds
        return _tail_integral(lambda s: (s - u) * self.func(s), u)

    def _constant(self, level):
        # int s^-1/2 Gbar_1 = 2 int r^1/2 g1;  int s^-1/2 Gbar_2 = (4/3) int r^3/2 g1
        if level == "c1":
            denom = self._radial_moment(-0.5)
        elif level == "cstar1":
            denom = 2.0 * self._radial_moment(0.5)
        else:
            denom = 4.0 / 3.0 * self._radial_moment(1.5)
        return 1.0 / (math.sqrt(2.0) * denom)

    def _lower_tail(self, k, z):
        c = self.normalizer(LEVELS[k])
        f = self.func
        a = -z
        if k == 0:
            return c * _tail_integral(lambda v: f(0.5 * v * v), a)

        # Swap the order of integration: Gbar_k(y^2/2) is an integral of g1 over
        # s > y^2/2, so P(Y_(k) < z) = c int g1(s) w(s) ds with w the integral
        # over y in (-sqrt(2s), z) of 1 (k = 1) or s - y^2/2 (k = 2).
        def weighted(s):
            r = math.sqrt(2.0 * s)
            lo, hi = -r, -a
            if k == 1:
                return f(s) * (hi - lo)
            return f(s) * (s * (hi - lo) - (hi ** 3 - lo ** 3) / 6.0)

        return c * _tail_integral(weighted, 0.5 * a * a)


FAMILY_NAMES = ("normal", "student-t", "logistic", "laplace", "pearson-vii")


def make_family(name: str, dof: float | None = None, shape: float | None = None) -> GeneratorFamily:
    """Build a named family; ``dof`` feeds student-t and ``shape`` pearson-vii."""
    key = name.lower().replace("_", "-")
    if key == "normal":
        return Normal()
    if key in ("student-t", "studentt", "t"):
        if dof is None:
            raise DomainError("student-t requires --dof")
        return StudentT(float(dof))
    if key == "logistic":
        return Logistic()
    if key == "laplace":
        return Laplace()
    if key in ("pearson-vii", "pearsonvii", "pvii"):
        if shape is None:
            raise DomainError("pearson-vii requires --shape")
        return PearsonVII(float(shape))
    raise DomainError(f"unknown family {name!r}; expected one of {', '.join(FAMILY_NAMES)}")


# functional aliases ---------------------------------------------------------


def g1(family: GeneratorFamily, u):
    """Density generator value g1(u)."""
    _check_u(u)
    return family.g1(u)


def gbar(family: GeneratorFamily, k: int, u):
    """Cumulative generator Gbar_k(u), k in {1, 2}."""
    return family.gbar(k, u)


def normalizer(family: GeneratorFamily, level: str) -> float:
    """Normalizing constant: ``"c1"``, ``"cstar1"`` or ``"cstar2"``."""
    return family.normalizer(level)


def derived_cdf_interval(family: GeneratorFamily, k: int, a: float, b: float) -> float:
    """P(a < Y_(k) < b) for the derived variable Y_(k) ~ E1(0, 1, Gbar_k)."""
    return family.derived_cdf_interval(k, a, b)
