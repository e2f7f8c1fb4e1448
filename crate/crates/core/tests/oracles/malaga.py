"""Reference values for the Malaga FSO link (mpmath, 30 digits).

The CDF references integrate the PDF numerically, so they do not depend on
the closed-form CDF kernel.
"""
import mpmath as mp

mp.mp.dps = 30


def consts(al, be, g, om, eps):
    chi = 2 * al ** (al / 2) / (g ** (1 + al / 2) * mp.gamma(al)) * (g * be / (g * be + om)) ** (be + al / 2)
    varpi = eps**2 * al * be * (g + om) / ((eps**2 + 1) * (g * be + om))
    th = []
    for m in range(1, be + 1):
        ups = mp.binomial(be - 1, m - 1) * (g * be + om) ** (1 - mp.mpf(m) / 2) / mp.factorial(m - 1) \
            * (om / g) ** (m - 1) * (al / be) ** (mp.mpf(m) / 2)
        th.append(ups * (al * be / (g * be + om)) ** (-(al + m) / 2))
    return chi, varpi, th


def mu_s(al, be, g, om, eps, s, phi):
    if s == 1:
        return phi
    e2 = eps**2
    return phi * al * e2 * (e2 + 1) ** -2 * (e2 + 2) * (g + om) / ((al + 1) * (2 * g * (g + 2 * om) + om**2 * (1 + 1 / mp.mpf(be))))


def pdf(x, al, be, g, om, eps, s, phi):
    chi, varpi, th = consts(al, be, g, om, eps)
    mus = mu_s(al, be, g, om, eps, s, phi)
    e2 = eps**2
    tot = 0
    for i, m in enumerate(range(1, be + 1)):
        tot += th[i] * mp.meijerg([[], [e2 + 1]], [[e2, al, m], []], varpi * (x / mus) ** (mp.mpf(1) / s))
    return e2 * chi / (2**s * x) * tot


def cdf_by_quad(x, *p):
    return mp.quad(lambda t: pdf(t, *p), [0, x / 100, x / 10, x])


if __name__ == "__main__":
    base = (mp.mpf("2.296"), 2, mp.mpf(2), mp.mpf(1), mp.mpf(1))
    chi, varpi, th = consts(*base)
    print("normalization", chi / 2 * sum(th[i] * mp.gamma(base[0]) * mp.gamma(i + 1) for i in range(2)))
    phi = mp.mpf(10)
    for s in (1, 2):
        p = base + (s, phi)
        mus = mu_s(*p)
        print("s", s, "mu_s", mus)
        print("  pdf(mu_s)", pdf(mus, *p))
        print("  cdf(mu_s)", cdf_by_quad(mus, *p))
        print("  cdf(mu_s/10)", cdf_by_quad(mus / 10, *p))
    print("mu2/phi at phi=1", mu_s(*base, 2, mp.mpf(1)))
    p = (mp.mpf(4.2), 3, mp.mpf(2), mp.mpf(1), mp.mpf("6.7"), 1, mp.mpf(10))
    print("moderate eps=6.7 cdf(5)", cdf_by_quad(mp.mpf(5), *p), "pdf(5)", pdf(5, *p))
