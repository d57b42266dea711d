#!/usr/bin/env python3
"""Build data/munsell_reflectance_1nm.csv: smooth bounded metamers of the
Munsell renotation chromaticities under the equal-energy illuminant.

For each sample, solves

    minimize   sum_i (rho[i+1] - rho[i])^2
    subject to Aw' rho = XYZ(x, y, Y_renotation), 0 <= rho <= 1

where Aw is the EE-weighted 1 nm CMF matrix and (x, y, Y) comes from the
renotation dataset. Requires colour-science and cvxpy.
"""

import os

import colour
import cvxpy as cp
import numpy as np

HERE = os.path.dirname(__file__)
CMF_CSV = os.path.join(HERE, "..", "data", "cie1931_2deg_1nm.csv")
OUT = os.path.join(HERE, "..", "data", "munsell_reflectance_1nm.csv")

SAMPLES = ["5R 5/14", "5Y 8/16", "5G 7/10", "5B 6/10", "5P 4/12"]


def main() -> None:
    table = np.loadtxt(CMF_CSV, delimiter=",", skiprows=1)
    wavelengths, A = table[:, 0], table[:, 1:]
    n = len(wavelengths)
    W = np.full(n, 100.0 / A[:, 1].sum())
    Aw = A * W[:, None]
    D = np.diff(np.eye(n), axis=0)

    columns = {}
    for name in SAMPLES:
        xyY = colour.munsell_colour_to_xyY(name)
        x, y, Y = float(xyY[0]), float(xyY[1]), float(xyY[2])
        Yt = Y * 100.0
        target = np.array([x / y * Yt, Yt, (1 - x - y) / y * Yt])
        rho = cp.Variable(n)
        problem = cp.Problem(
            cp.Minimize(cp.sum_squares(D @ rho)),
            [Aw.T @ rho == target, rho >= 0, rho <= 1],
        )
        problem.solve(solver=cp.CLARABEL)
        values = np.clip(np.asarray(rho.value).ravel(), 0.0, 1.0)
        got = Aw.T @ values
        err = np.hypot(got[0] / got.sum() - x, got[1] / got.sum() - y)
        print("%s: chromaticity error %.3g, range [%.4f, %.4f]" % (name, err, values.min(), values.max()))
        columns[name] = values

    with open(OUT, "w") as f:
        f.write("wavelength_nm," + ",".join('"%s"' % s for s in SAMPLES) + "\n")
        for k in range(n):
            f.write("%g," % wavelengths[k] + ",".join("%.8f" % columns[s][k] for s in SAMPLES) + "\n")
    print("wrote", OUT)


if __name__ == "__main__":
    main()
