"""Regenerate the Chebyshev tables hardcoded in satrack/_normal_tables.py.

The runtime package is self-contained: norm_cdf uses a scaled-erfc
(erfcx) Chebyshev table, norm_quantile uses Chebyshev initial guesses
refined by one Newton step.  This script fits those tables against
mpmath (50-digit arithmetic) and writes the module.  It is a maintainer
tool, not part of the installed package.

Run:  python tools/gen_normal_tables.py
"""

import mpmath as mp

import numpy as np

mp.mp.dps = 400  # far quantile tail needs 1 - 2p distinguishable from 1

OUT = "src/satrack/_normal_tables.py"


def cheb_fit(f, lo, hi, deg):
    """Chebyshev interpolation coefficients of f on [lo, hi] (float64)."""
    k = np.arange(deg + 1)
    nodes = np.cos(np.pi * (k + 0.5) / (deg + 1))  # Chebyshev points in (-1, 1)
    xs = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    ys = np.array([float(f(mp.mpf(float(x)))) for x in xs])
    # discrete orthogonality of T_j at Chebyshev nodes
    coeffs = np.zeros(deg + 1)
    for j in range(deg + 1):
        coeffs[j] = (2.0 / (deg + 1)) * np.sum(ys * np.cos(np.pi * j * (k + 0.5) / (deg + 1)))
    coeffs[0] *= 0.5
    return coeffs


def cheb_eval(coeffs, lo, hi, x):
    t = (2.0 * x - (lo + hi)) / (hi - lo)
    b0 = b1 = 0.0
    for c in coeffs[::-1]:
        b0, b1 = 2.0 * t * b0 - b1 + c, b0
    return b0 - t * b1


def max_rel_err(f, coeffs, lo, hi, n=4001):
    worst = 0.0
    for x in np.linspace(lo, hi, n):
        ref = float(f(mp.mpf(float(x))))
        got = cheb_eval(coeffs, lo, hi, x)
        err = abs(got - ref) / (abs(ref) if ref != 0 else 1.0)
        worst = max(worst, err)
    return worst


def erfcx(x):
    return mp.exp(x * x) * mp.erfc(x)


def quantile(p):
    return -mp.sqrt(2) * mp.erfinv(1 - 2 * p)


def main():
    blocks = []

    # --- erfcx on [1, 28], erfc handled by series below 1 ----------------
    erfcx_ranges = [(1.0, 2.0, 20), (2.0, 4.0, 20), (4.0, 9.0, 22), (9.0, 28.0, 24)]
    tables = []
    for lo, hi, deg in erfcx_ranges:
        c = cheb_fit(erfcx, lo, hi, deg)
        err = max_rel_err(erfcx, c, lo, hi)
        print(f"erfcx [{lo}, {hi}] deg {deg}: max rel err {err:.3e}")
        tables.append((lo, hi, c))
    blocks.append(("ERFCX_TABLES", tables))

    # --- quantile central region: x = q * g(q^2), q = p - 1/2 ------------
    def g_central(v):
        q = mp.sqrt(v)
        if v == 0:
            return mp.sqrt(2 * mp.pi)
        return quantile(mp.mpf("0.5") + q) / q

    lo, hi = 0.0, 0.180625  # |q| <= 0.425
    c = cheb_fit(g_central, lo, hi, 22)
    err = max_rel_err(g_central, c, lo, hi)
    print(f"quantile central deg 22: max rel err {err:.3e}")
    blocks.append(("QUANTILE_CENTRAL", [(lo, hi, c)]))

    # --- quantile tails: x = h(r), r = sqrt(-log(p)), p < 0.075 ----------
    def h_tail(r):
        p = mp.exp(-r * r)
        return quantile(p)

    tail_tables = []
    for lo, hi, deg in [(1.6, 2.9, 22), (2.9, 7.0, 24), (7.0, 27.5, 24)]:
        c = cheb_fit(h_tail, lo, hi, deg)
        err = max_rel_err(h_tail, c, lo, hi)
        print(f"quantile tail [{lo}, {hi}] deg {deg}: max rel err {err:.3e}")
        tail_tables.append((lo, hi, c))
    blocks.append(("QUANTILE_TAIL", tail_tables))

    with open(OUT, "w") as fh:
        fh.write('"""Chebyshev tables for the normal CDF/quantile kernels.\n\n')
        fh.write("Generated by tools/gen_normal_tables.py; do not edit by hand.\n")
        fh.write('"""\n\n')
        for name, tabs in blocks:
            fh.write(f"{name} = (\n")
            for lo, hi, c in tabs:
                fh.write(f"    ({lo!r}, {hi!r}, (\n")
                for v in c:
                    fh.write(f"        {float(v)!r},\n")
                fh.write("    )),\n")
            fh.write(")\n\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
