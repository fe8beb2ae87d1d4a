"""Ground-state phase diagrams as text.

Draws the (a, b) plane for c = -1 and c = +1, one character per grid cell,
and lists which regions touch along a curve.  The grid is also written to
CSV in the working directory.
"""
from pathlib import Path

from blockspin.groundstate import classify, diagram_grid, grid_to_csv, region_adjacency

SYMBOL = {"A": "A", "D": ".", "F": "F", "E1": "1", "E2": "2"}


def draw(c, rho, r, res=41):
    cells = diagram_grid(c, rho, r, res)
    rows = []
    # b on the vertical axis, top to bottom
    for j in reversed(range(res)):
        line = ""
        for i in range(res):
            cell = cells[i * res + j]
            reg, k = cell["region"], cell["k"]
            if cell["boundary"]:
                line += "+"
            elif reg in ("B", "C"):
                line += (reg.lower() if reg == "B" else reg) if k is None else (str(k) if reg == "B" else "abcdefgh"[k - 1])
            else:
                line += SYMBOL.get(reg, "?")
        rows.append(line)
    print("\n".join(rows))
    a0, a1 = cells[0]["a"], cells[-1]["a"]
    b0, b1 = cells[0]["b"], cells[-1]["b"]
    print(f"a in [{a0:.2f}, {a1:.2f}] left to right, b in [{b0:.2f}, {b1:.2f}] bottom to top")
    return cells


print("c = -1, r = 3, rho = 1/2   (digits: B_k, letters: C_k, '.': D, '+': boundary)\n")
cells = draw(-1.0, 0.5, 3)
pairs = region_adjacency(cells, 41, -1.0, 0.5, 3)
print("\nregions sharing a boundary curve:")
for p, q in sorted(pairs):
    print(f"  {p:4s} | {q}")

print("\nc = +1, r = 3, rho = 1/2   (1: E1, 2: E2)\n")
draw(1.0, 0.5, 3)

# a single point, with its maximiser
gs = classify(-0.3, -2.5, -1.0, 0.5, 3)
print(f"\n(a,b) = (-0.3, -2.5), c = -1: region {gs.region}{gs.k or ''}, max G = {gs.value:.5f}")
x, y = gs.points[0]
print("  x =", x.round(4), " y =", y.round(4))

out = Path("phase_diagram_r5.csv")
out.write_text(grid_to_csv(diagram_grid(-1.0, 0.5, 5, 81)))
print("\nwrote", out)
