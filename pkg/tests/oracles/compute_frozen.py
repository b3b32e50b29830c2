"""Regenerate the frozen reference values used by the test-suite.

Independent of the package: densities are written out from scratch and
integrated with mpmath at 40 digits. Run with ``python3 compute_frozen.py``.
"""

import mpmath as mp

mp.mp.dps = 40


def normal_pdf(y):
    return mp.npdf(y)


def student_pdf(m):
    c = mp.gamma((m + 1) / 2) / (mp.gamma(m / 2) * mp.sqrt(m * mp.pi))
    return lambda y: c * (1 + y * y / m) ** (-(m + 1) / 2)


def laplace_pdf(y):
    # g1(u) = exp(-sqrt(2u)) with c1 = 1/2
    return mp.exp(-abs(y)) / 2


def student_gbar1_pdf(m):
    # c*_1 Gbar_1(y^2/2), Gbar_1(u) = m/(m-1) (1 + 2u/m)^(-(m-1)/2)
    g = lambda y: m / (m - 1) * (1 + y * y / m) ** (-(m - 1) / 2)
    c = 1 / mp.quad(g, [-mp.inf, 0, mp.inf])
    return lambda y: c * g(y)


def cdf(pdf, x):
    return mp.quad(pdf, [-mp.inf, 0, x]) if x > 0 else mp.quad(pdf, [-mp.inf, x])


def quantile(pdf, level):
    return mp.findroot(lambda x: cdf(pdf, x) - level, 0.1 * (level - 0.5))


def moments(pdf, lo, hi, mu=0, sigma=1):
    """(mass, mean, central moments 2..6) of mu + sigma*Y on (lo, hi) in Y units."""
    pts = [lo, 0, hi] if lo < 0 < hi else [lo, hi]
    mass = mp.quad(pdf, pts)
    mean = mp.quad(lambda y: y * pdf(y), pts) / mass
    cm = {n: mp.quad(lambda y: (y - mean) ** n * pdf(y), pts) / mass for n in range(2, 7)}
    return mass, mu + sigma * mean, {n: sigma ** n * v for n, v in cm.items()}


def window(pdf, p, q):
    lo = -mp.inf if p == 0 else quantile(pdf, p)
    hi = mp.inf if q == 1 else quantile(pdf, q)
    return lo, hi


def hurwitz_lerch_integral(z, s, a, kappa):
    f = lambda t: t ** (s - 1) * mp.exp(-a * t) / (1 - z * mp.exp(-t)) ** kappa
    return mp.quad(f, [0, 1, mp.inf]) / mp.gamma(s)


def show(name, value):
    print(f"{name} = {mp.nstr(value, 17)}")


if __name__ == "__main__":
    show("V2 hurwitz_lerch(-1, 1/2, 1, 2)", hurwitz_lerch_integral(-1, mp.mpf(1) / 2, 1, 2))
    show("hurwitz_lerch(-1, 1/2, 1, 1)", hurwitz_lerch_integral(-1, mp.mpf(1) / 2, 1, 1))
    show("hurwitz_lerch(-1, 3/2, 1, 1)", hurwitz_lerch_integral(-1, mp.mpf(3) / 2, 1, 1))
    logistic_g = lambda y: mp.exp(-y * y / 2) / (1 + mp.exp(-y * y / 2)) ** 2
    show("logistic c1", 1 / mp.quad(logistic_g, [-mp.inf, 0, mp.inf]))
    show("normal quantile 0.975", quantile(normal_pdf, mp.mpf("0.975")))
    show("normal cdf 1.959964", mp.ncdf(mp.mpf("1.959964")))
    t5 = student_pdf(mp.mpf(5))
    show("V3 student-t m=5 Y(1) on (-1,1)", mp.quad(student_gbar1_pdf(mp.mpf(5)), [-1, 0, 1]))
    show("V4 student-t m=5 P(-1<Y<1)", mp.quad(t5, [-1, 0, 1]))
    lo, hi = window(laplace_pdf, mp.mpf("0.1"), mp.mpf("0.8"))
    show("V5 laplace dte (0.1,0.8)", moments(laplace_pdf, lo, hi)[1])
    lo, hi = window(t5, mp.mpf("0.2"), mp.mpf("0.9"))
    show("V6 student-t m=5 dte (0.2,0.9)", moments(t5, lo, hi)[1])
    lo, hi = window(normal_pdf, mp.mpf("0.1"), mp.mpf("0.9"))
    mass = mp.quad(normal_pdf, [lo, 0, hi])
    show("V7 Normal(1, 2^2) raw n=3 (0.1,0.9)",
         mp.quad(lambda y: (1 + 2 * y) ** 3 * normal_pdf(y), [lo, 0, hi]) / mass)
    t8 = student_pdf(mp.mpf(8))
    lo, hi = window(t8, mp.mpf("0.05"), mp.mpf("0.95"))
    _, d8, c8 = moments(t8, lo, hi)
    show("V8 student-t m=8 dtm4 (0.05,0.95)", c8[4])
    lo, hi = window(laplace_pdf, mp.mpf("0.25"), mp.mpf("0.75"))
    show("V9 laplace dtv (0.25,0.75)", moments(laplace_pdf, lo, hi)[2][2])
    lo, hi = window(normal_pdf, mp.mpf("0.05"), mp.mpf("0.70"))
    _, _, c = moments(normal_pdf, lo, hi)
    show("V10 normal dts (0.05,0.70)", c[3] / c[2] ** 1.5)
    lo, hi = window(laplace_pdf, mp.mpf("0.9"), 1)
    show("V11 laplace tcm n=3 p=0.9", moments(laplace_pdf, lo, hi)[2][3])
    lo, hi = window(laplace_pdf, mp.mpf("0.1"), mp.mpf("0.9"))
    show("V12 Laplace(2, 3^2) dtm3 (0.1,0.9)", moments(laplace_pdf, lo, hi, 2, 3)[2][3])
    show("V13 student-t m=8 (0.05,0.95) dte", d8)
    show("V13 dtv", c8[2])
    show("V13 dts", c8[3] / c8[2] ** 1.5)
    show("V13 dtk", c8[4] / c8[2] ** 2 - 3)
    lo, hi = window(normal_pdf, mp.mpf("0.95"), 1)
    show("normal tce p=0.95", moments(normal_pdf, lo, hi)[1])
