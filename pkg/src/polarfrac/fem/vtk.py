"""
Legacy ASCII VTK writer for field snapshots.

Writes an unstructured grid of quadratic triangles (VTK cell type 22) with
point data u (3-component vector, zero out-of-plane), theta3 and d, and cell
data with the element-averaged energy density parts.
"""

import numpy as np

__all__ = ["write_vtk"]


def write_vtk(path, mesh, u, theta3_corner, d_corner, cell_data=None):
    """Write one snapshot.

    Args:
        path: output file name
        mesh: Mesh
        u: (2*n_nodes,) displacement dof vector
        theta3_corner: (n_corner,) micro-rotation at corner nodes
        d_corner: (n_corner,) damage at corner nodes
        cell_data: optional dict name -> (n_elements,) arrays
    """
    n = mesh.n_nodes
    # expand P1 fields to every node: midside value = mean of edge ends
    theta_full = _expand_p1(mesh, theta3_corner)
    d_full = _expand_p1(mesh, d_corner)

    lines = [
        "# vtk DataFile Version 3.0",
        "polarfrac snapshot",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {n} double",
    ]
    for x, y in mesh.nodes:
        lines.append(f"{x:.10g} {y:.10g} 0")
    E = mesh.n_elements
    lines.append(f"CELLS {E} {7 * E}")
    for el in mesh.elements:
        lines.append("6 " + " ".join(str(int(i)) for i in el))
    lines.append(f"CELL_TYPES {E}")
    lines.extend(["22"] * E)

    lines.append(f"POINT_DATA {n}")
    lines.append("VECTORS u double")
    ux, uy = u[0::2], u[1::2]
    for i in range(n):
        lines.append(f"{ux[i]:.10g} {uy[i]:.10g} 0")
    for name, vals in (("theta3", theta_full), ("d", d_full)):
        lines.append(f"SCALARS {name} double 1")
        lines.append("LOOKUP_TABLE default")
        lines.extend(f"{v:.10g}" for v in vals)

    if cell_data:
        lines.append(f"CELL_DATA {E}")
        for name, vals in cell_data.items():
            lines.append(f"SCALARS {name} double 1")
            lines.append("LOOKUP_TABLE default")
            lines.extend(f"{v:.10g}" for v in np.asarray(vals))

    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _expand_p1(mesh, corner_vals):
    full = np.zeros(mesh.n_nodes)
    full[mesh.corner_nodes] = corner_vals
    el = mesh.elements
    for (a, b, m) in ((0, 1, 3), (1, 2, 4), (2, 0, 5)):
        full[el[:, m]] = 0.5 * (full[el[:, a]] + full[el[:, b]])
    return full
