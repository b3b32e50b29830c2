"""Adaptive quadrature kernel behind the brute-force oracle.

The oracle integrates ``(alpha + beta*y)**n * c1 * g1(y*y/2)`` over a
standardized window, many times per report, so this loop is the hot path of
the package. Two interchangeable backends implement the same algorithm:

* ``adaptive_gl_numba`` -- the integrand and the interval bookkeeping are
  compiled with ``numba.njit``; only the five closed-form generators are
  available because the generator is selected by an integer code.
* ``adaptive_gl_numpy`` -- pure numpy, one vectorized generator call per
  interval; also accepts an arbitrary vectorized ``g1`` callable.

The rule is composite 15-point Gauss-Legendre. Each interval is scored by
comparing the one-panel estimate with the two-half-panel estimate, and the
worst interval is bisected until the summed error meets the tolerance.
Half-infinite pieces are mapped onto [0, 1) with ``y = a + s/(1-s)``.
"""

from __future__ import annotations

import math

import numpy as np

from . import _config
from .errors import QuadratureAccuracyError

NORMAL, STUDENT_T, LOGISTIC, LAPLACE, PEARSON_VII = range(5)

_GL_ORDER = 15
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)

# mapping codes for one integration piece
_FINITE, _UPPER_INF, _LOWER_INF = 0, 1, 2

MAX_INTERVALS = 4000


def _g1_numpy(code, param, u):
    if code == NORMAL:
        return np.exp(-u)
    if code == STUDENT_T:
        return (1.0 + 2.0 * u / param) ** (-(param + 1.0) / 2.0)
    if code == LOGISTIC:
        e = np.exp(-u)
        return e / (1.0 + e) ** 2
    if code == LAPLACE:
        return np.exp(-np.sqrt(2.0 * u))
    if code == PEARSON_VII:
        return (1.0 + 2.0 * u) ** (-param)
    raise ValueError(f"unknown generator code {code}")


def _pieces(a, b):
    """Split (a, b) at 0 and map infinite ends; returns (kind, lo, hi, anchor)."""
    cuts = [a]
    if a < 0.0 < b:
        cuts.append(0.0)
    cuts.append(b)
    out = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if math.isinf(lo) and math.isinf(hi):
            raise ValueError("piece with two infinite ends")
        if math.isinf(hi):
            out.append((_UPPER_INF, 0.0, 1.0, lo))
        elif math.isinf(lo):
            out.append((_LOWER_INF, 0.0, 1.0, hi))
        else:
            out.append((_FINITE, lo, hi, 0.0))
    return out


# ---------------------------------------------------------------------------
# numpy backend


def _panel_numpy(g1, alpha, beta, n, c1, kind, anchor, lo, hi):
    half = 0.5 * (hi - lo)
    s = lo + half * (_GL_NODES + 1.0)
    if kind == _FINITE:
        y = s
        jac = np.ones_like(s)
    else:
        t = s / (1.0 - s)
        jac = 1.0 / (1.0 - s) ** 2
        y = anchor + t if kind == _UPPER_INF else anchor - t
    vals = (alpha + beta * y) ** n * c1 * g1(0.5 * y * y) * jac
    return half * np.dot(_GL_WEIGHTS, vals)


def _score_numpy(g1, alpha, beta, n, c1, kind, anchor, lo, hi):
    mid = 0.5 * (lo + hi)
    whole = _panel_numpy(g1, alpha, beta, n, c1, kind, anchor, lo, hi)
    left = _panel_numpy(g1, alpha, beta, n, c1, kind, anchor, lo, mid)
    right = _panel_numpy(g1, alpha, beta, n, c1, kind, anchor, mid, hi)
    return left + right, abs(left + right - whole)


def adaptive_gl_numpy(g1, alpha, beta, n, c1, a, b, epsabs=1e-13, epsrel=1e-12):
    """Integrate ``(alpha + beta*y)**n * c1 * g1(y**2/2)`` over (a, b).

    ``g1`` must accept numpy arrays. Returns ``(value, error_estimate)``.
    """
    # each entry: [value, error, kind, anchor, lo, hi]
    work = []
    for kind, lo, hi, anchor in _pieces(a, b):
        val, err = _score_numpy(g1, alpha, beta, n, c1, kind, anchor, lo, hi)
        work.append([val, err, kind, anchor, lo, hi])
    while True:
        total = math.fsum(w[0] for w in work)
        error = sum(w[1] for w in work)
        if error <= max(epsabs, epsrel * abs(total)):
            return total, error
        if len(work) >= MAX_INTERVALS:
            raise QuadratureAccuracyError(
                f"adaptive Gauss-Legendre did not converge (error {error:.3g})", total, error
            )
        i = max(range(len(work)), key=lambda j: work[j][1])
        _, _, kind, anchor, lo, hi = work[i]
        mid = 0.5 * (lo + hi)
        work[i] = [*_score_numpy(g1, alpha, beta, n, c1, kind, anchor, lo, mid), kind, anchor, lo, mid]
        work.append([*_score_numpy(g1, alpha, beta, n, c1, kind, anchor, mid, hi), kind, anchor, mid, hi])


# ---------------------------------------------------------------------------
# numba backend

if _config.HAVE_NUMBA:
    import numba

    _njit = numba.njit(**_config.NUMBA_OPTS)

    @_njit
    def _g1_scalar(code, param, u):
        if code == 0:
            return math.exp(-u)
        if code == 1:
            return (1.0 + 2.0 * u / param) ** (-(param + 1.0) / 2.0)
        if code == 2:
            e = math.exp(-u)
            return e / ((1.0 + e) * (1.0 + e))
        if code == 3:
            return math.exp(-math.sqrt(2.0 * u))
        return (1.0 + 2.0 * u) ** (-param)

    @_njit
    def _panel_nb(code, param, alpha, beta, n, c1, kind, anchor, lo, hi, nodes, weights):
        half = 0.5 * (hi - lo)
        acc = 0.0
        for j in range(nodes.shape[0]):
            s = lo + half * (nodes[j] + 1.0)
            if kind == 0:
                y = s
                jac = 1.0
            else:
                t = s / (1.0 - s)
                jac = 1.0 / ((1.0 - s) * (1.0 - s))
                y = anchor + t if kind == 1 else anchor - t
            acc += weights[j] * (alpha + beta * y) ** n * c1 * _g1_scalar(code, param, 0.5 * y * y) * jac
        return half * acc

    @_njit
    def _score_nb(code, param, alpha, beta, n, c1, kind, anchor, lo, hi, nodes, weights):
        mid = 0.5 * (lo + hi)
        whole = _panel_nb(code, param, alpha, beta, n, c1, kind, anchor, lo, hi, nodes, weights)
        left = _panel_nb(code, param, alpha, beta, n, c1, kind, anchor, lo, mid, nodes, weights)
        right = _panel_nb(code, param, alpha, beta, n, c1, kind, anchor, mid, hi, nodes, weights)
        return left + right, abs(left + right - whole)

    @_njit
    def _adaptive_nb(code, param, alpha, beta, n, c1, kinds, anchors, los, his,
                     epsabs, epsrel, nodes, weights, max_intervals):
        val = np.zeros(max_intervals)
        err = np.zeros(max_intervals)
        kind = np.zeros(max_intervals, dtype=np.int64)
        anchor = np.zeros(max_intervals)
        lo = np.zeros(max_intervals)
        hi = np.zeros(max_intervals)
        m = kinds.shape[0]
        for i in range(m):
            kind[i] = kinds[i]
            anchor[i] = anchors[i]
            lo[i] = los[i]
            hi[i] = his[i]
            val[i], err[i] = _score_nb(code, param, alpha, beta, n, c1, kind[i], anchor[i],
                                       lo[i], hi[i], nodes, weights)
        while True:
            total = 0.0
            comp = 0.0
            error = 0.0
            worst = 0
            for i in range(m):
                # Kahan summation of the interval values
                yv = val[i] - comp
                tv = total + yv
                comp = (tv - total) - yv
                total = tv
                error += err[i]
                if err[i] > err[worst]:
                    worst = i
            if error <= max(epsabs, epsrel * abs(total)):
                return total, error, True
            if m >= max_intervals:
                return total, error, False
            k = kind[worst]
            anc = anchor[worst]
            a0 = lo[worst]
            b0 = hi[worst]
            mid = 0.5 * (a0 + b0)
            val[worst], err[worst] = _score_nb(code, param, alpha, beta, n, c1, k, anc, a0, mid,
                                               nodes, weights)
            hi[worst] = mid
            kind[m] = k
            anchor[m] = anc
            lo[m] = mid
            hi[m] = b0
            val[m], err[m] = _score_nb(code, param, alpha, beta, n, c1, k, anc, mid, b0,
                                       nodes, weights)
            m += 1


def adaptive_gl_numba(code, param, alpha, beta, n, c1, a, b, epsabs=1e-13, epsrel=1e-12):
    """Compiled twin of :func:`adaptive_gl_numpy` for the closed-form generators."""
    if not _config.HAVE_NUMBA:  # pragma: no cover
        raise RuntimeError("numba is not installed")
    pieces = _pieces(a, b)
    kinds = np.array([p[0] for p in pieces], dtype=np.int64)
    los = np.array([p[1] for p in pieces])
    his = np.array([p[2] for p in pieces])
    anchors = np.array([p[3] for p in pieces])
    total, error, ok = _adaptive_nb(
        int(code), float(param), float(alpha), float(beta), int(n), float(c1),
        kinds, anchors, los, his, float(epsabs), float(epsrel),
        _GL_NODES, _GL_WEIGHTS, MAX_INTERVALS,
    )
    if not ok:
        raise QuadratureAccuracyError(
            f"adaptive Gauss-Legendre did not converge (error {error:.3g})", total, error
        )
    return total, error


def integrate_polynomial_weight(family, alpha, beta, n, c1, a, b, epsabs=1e-13, epsrel=1e-12,
                                backend=None):
    """Integrate ``(alpha + beta*y)**n * c1 * g1(y*y/2)`` for a generator family.

    ``backend`` is ``"numba"``, ``"numpy"`` or ``None`` (the package default,
    numba unless disabled by ``DTMRISK_DISABLE_NUMBA``). Families without a
    compiled generator always use numpy.
    """
    if backend is None:
        backend = "numba" if _config.USE_NUMBA else "numpy"
    spec = family.kernel_code()
    if backend == "numba" and spec is not None:
        code, param = spec
        return adaptive_gl_numba(code, param, alpha, beta, n, c1, a, b, epsabs, epsrel)
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if spec is not None:
        code, param = spec
        g1 = lambda u: _g1_numpy(code, param, u)  # noqa: E731
    else:
        g1 = family.g1_array
    return adaptive_gl_numpy(g1, alpha, beta, n, c1, a, b, epsabs, epsrel)
