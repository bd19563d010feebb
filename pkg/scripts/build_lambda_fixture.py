"""Write the shipped decomposition of the 10 visible components of Λ_{3,3,3,3}.

Each of the six blue unknots sits in a chart together with the green unknot
and one of the three red unknots.  Inside a chart the front has a generic
0-cell where all six sheets are stacked, two crossing arcs (blue upper with
green lower, red upper with blue lower) and their intersection point.
"""

import sys
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "exactcy" / "data" / "lambda3333.front"


def stack(i, j, upper_cross=False, lower_cross=False):
    b, g = ("3.5", "3.5") if upper_cross else ("4", "3")
    r, bl = ("1.5", "1.5") if lower_cross else ("2", "1")
    return f"G+ 5, B{i}+ {b}, G- {g}, R{j}+ {r}, B{i}- {bl}, R{j}- 0"


def main(path=OUT):
    lines = ["# Λ_{3,3,3,3}: green, six blue and three red unknots", "", "[sheets]",
             "G+ 1", "G- 0"]
    for i in range(1, 7):
        lines += [f"B{i}+ 0", f"B{i}- -1"]
    for j in range(1, 4):
        lines += [f"R{j}+ -1", f"R{j}- -2"]
    lines += ["", "[cells]"]
    for i in range(1, 7):
        j = (i + 1) // 2
        lines += [
            f"# chart {i}: blue {i} between green and red {j}",
            f"0 a{i}: {stack(i, j)}",
            f"0 g{i}: {stack(i, j, upper_cross=True)}",
            f"0 d{i}: {stack(i, j, lower_cross=True)}",
            f"0 e{i}: {stack(i, j, True, True)}",
            f"1 ag{i} a{i} g{i}: {stack(i, j)}",
            f"1 ad{i} a{i} d{i}: {stack(i, j)}",
            f"1 ge{i} g{i} e{i}: {stack(i, j, upper_cross=True)}",
            f"1 de{i} d{i} e{i}: {stack(i, j, lower_cross=True)}",
            f"2 f{i}: {stack(i, j)}",
        ]
    lines += ["# green and red caps away from the charts",
              "0 gn: G+ 1, G- 0", "0 gs: G+ 1, G- 0",
              "1 gm gn gs: G+ 1, G- 0", "2 gcap: G+ 1, G- 0"]
    for j in range(1, 4):
        lines += [f"0 rn{j}: R{j}+ 1, R{j}- 0", f"0 rs{j}: R{j}+ 1, R{j}- 0",
                  f"1 rm{j} rn{j} rs{j}: R{j}+ 1, R{j}- 0", f"2 rcap{j}: R{j}+ 1, R{j}- 0"]
    Path(path).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(*sys.argv[1:])
