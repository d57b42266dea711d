#!/usr/bin/env python3
"""Export the CIE 1931 2-degree 1 nm CMF table to data/cie1931_2deg_1nm.csv.

Requires the colour-science package; its embedded dataset is the CVRL
1 nm tabulation.
"""

import os

import colour

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "cie1931_2deg_1nm.csv")


def main() -> None:
    cmfs = colour.MSDS_CMFS["CIE 1931 2 Degree Standard Observer"]
    wavelengths = cmfs.wavelengths
    values = cmfs.values
    assert len(wavelengths) == 471 and wavelengths[0] == 360 and wavelengths[-1] == 830
    with open(OUT, "w") as f:
        f.write("wavelength_nm,xbar,ybar,zbar\n")
        for wl, row in zip(wavelengths, values):
            f.write("%g,%.10g,%.10g,%.10g\n" % (wl, row[0], row[1], row[2]))
    print("wrote", OUT)


if __name__ == "__main__":
    main()
