"""Regenerate the multiprecision root values frozen in ``test_spectrum.py``.

Coefficients are coded here from the formulas directly, independent of the
package, and solved with ``mpmath.polyroots`` at 60 digits.

    python3 tests/oracles/mp_roots.py
"""

import mpmath as mp

mp.mp.dps = 60

CASES = [
    ((0, 1, 0.5, 1), 1e4),
    ((0, 1, 0.5, 1), 1e10),
    ((0.5, 0, 0.5, 1), 1e8),
    ((1, 1, 0, 0), 1e6),
    ((0.6, 0.8, 0.4, 1), 1e12),
]


def coeffs(a, b, g, m, mu, sigma=2, tau=1):
    mu, a, b, g = mp.mpf(mu), mp.mpf(a), mp.mpf(b), mp.mpf(g)
    return [
        m * tau * mu**g + tau,
        m * mu**g + 1,
        tau * mu ** (2 * a) + m * mu ** (b + g) + sigma * tau * mu + mu**b,
        mu ** (2 * a) + sigma * mu,
        sigma * mu ** (1 + b),
    ]


def main():
    for p, mu in CASES:
        roots = mp.polyroots(coeffs(*p, mu), maxsteps=500, extraprec=400)
        roots.sort(key=lambda z: (float(z.imag), float(z.real)))
        print(p, mu)
        for z in roots:
            print(f"    complex({mp.nstr(z.real, 17)}, {mp.nstr(z.imag, 17)}),")


if __name__ == "__main__":
    main()
