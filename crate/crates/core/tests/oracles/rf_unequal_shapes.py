"""Reference values for the interference-limited RF distribution function with
unequal S-R and S-P shapes (mpmath, 40 digits).

F(g) = E[P(mu_r, w (u/delta_p)^(a_r/a_p))], u ~ Gamma(mu_p, 1),
w = delta_r (g/Psi_Q)^a_r, a = alpha/2, delta = Phi^(-a).
"""
from mpmath import mp, mpf, quad, gammainc, gamma, exp, inf

mp.dps = 40

a_r, a_p = mpf(1), mpf(5) / 2
mu_r = mu_p = 6
phi_r = phi_p = psi_q = mpf(10) ** 1.5
d_r, d_p = phi_r ** -a_r, phi_p ** -a_p

for g in [0.1, 1, 10, 100]:
    w = d_r * (mpf(g) / psi_q) ** a_r
    f = lambda u: gammainc(mu_r, 0, w * (u / d_p) ** (a_r / a_p), regularized=True) * u ** (mu_p - 1) * exp(-u) / gamma(mu_p)
    print(g, mp.nstr(quad(f, [0, 1, 6, 20, 60, inf]), 20))
