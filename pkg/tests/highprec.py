"""50-digit direct-summation reference for theta functions (tests only).

Independent of the package's double-precision engine: same defining series,
summed with mpmath at 60 significant digits over a wide fixed window.
"""

import mpmath as mp


def ref_theta(a, b, u, tau, dps=60, nterms=80):
    """theta[a; b](u, tau) by direct mpmath summation."""
    with mp.workdps(dps):
        a = mp.mpf(a)
        b = mp.mpf(b)
        u = mp.mpc(u)
        tau = mp.mpc(tau)
        ipi = mp.mpc(0, 1) * mp.pi
        total = mp.mpc(0)
        for n in range(-nterms, nterms + 1):
            na = n + a
            total += mp.exp(ipi * (na * na * tau + 2 * na * (u + b)))
        return complex(total)


def ref_sigma(u, tau, **kw):
    return ref_theta(mp.mpf(1) / 2, mp.mpf(1) / 2, u, tau, **kw)


def ref_sigma_char(a1, a2, u, tau, **kw):
    return ref_theta(mp.mpf(1) / 2 + mp.mpf(a1) / 2,
                     mp.mpf(1) / 2 + mp.mpf(a2) / 2, u, tau, **kw)


def ref_theta_level2(j, u, tau, **kw):
    jr = (j - 1) % 2 + 1
    return ref_theta(mp.mpf(1 - jr) / 2, mp.mpf(1) / 2, u, 2 * mp.mpc(tau), **kw)
