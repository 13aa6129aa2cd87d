"""
Taylor-Hood degree-of-freedom layout and boundary conditions.

The coupled momentum problem carries a vector quadratic displacement (two
dofs on every node) and a scalar linear micro-rotation (corner nodes only);
the damage field shares the corner-node linear space but is solved as a
separate system.

Global numbering of the momentum system: displacement dofs come first,
(2*node + component), followed by micro-rotation dofs (2*n_nodes +
corner_index).
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["DofMap", "BoundaryCondition"]

FIELDS = ("u1", "u2", "theta")
BC_KINDS = ("dirichlet", "traction", "moment")


@dataclass(frozen=True)
class BoundaryCondition:
    """One boundary condition on a tagged edge group.

    kind "dirichlet": `value` is the prescribed increment per load step
    (total value = step * value).  kind "traction": `value` is the traction
    component [MPa] applied on the u1/u2 field; kind "moment": boundary
    couple [N] conjugate to theta.
    """
    tag: str
    field: str
    kind: str
    value: float

    def __post_init__(self):
        if self.field not in FIELDS:
            raise ValueError(f"unknown field '{self.field}'; expected one of {FIELDS}")
        if self.kind not in BC_KINDS:
            raise ValueError(f"unknown BC kind '{self.kind}'; expected one of {BC_KINDS}")
        if self.kind == "moment" and self.field != "theta":
            raise ValueError("moment BCs act on the theta field")
        if self.kind == "traction" and self.field == "theta":
            raise ValueError("traction BCs act on u1/u2")


class DofMap:
    """Dof numbering for the (u, theta) system and the damage system."""

    def __init__(self, mesh):
        self.mesh = mesh
        self.n_nodes = mesh.n_nodes
        self.corner_nodes = mesh.corner_nodes
        self.corner_index = mesh.corner_index
        self.n_corner = self.corner_nodes.size
        self.n_u = 2 * self.n_nodes
        self.n_theta = self.n_corner
        self.n_total = self.n_u + self.n_theta
        self.n_d = self.n_corner

    def u_dof(self, node, comp):
        return 2 * np.asarray(node) + comp

    def theta_dof(self, node):
        idx = self.corner_index[np.asarray(node)]
        if np.any(idx < 0):
            raise ValueError("theta dof requested on a midside node")
        return self.n_u + idx

    def d_dof(self, node):
        idx = self.corner_index[np.asarray(node)]
        if np.any(idx < 0):
            raise ValueError("damage dof requested on a midside node")
        return idx

    def element_dofs(self):
        """Momentum-system dof matrix per element, shape (E, 15).

        Columns 0-11: u dofs of the six nodes interleaved (u1, u2); columns
        12-14: theta dofs of the corner nodes.
        """
        el = self.mesh.elements
        E = el.shape[0]
        dofs = np.empty((E, 15), dtype=np.int64)
        dofs[:, 0:12:2] = 2 * el
        dofs[:, 1:12:2] = 2 * el + 1
        dofs[:, 12:15] = self.n_u + self.corner_index[el[:, :3]]
        return dofs

    def element_d_dofs(self):
        """Damage-system dof matrix per element, shape (E, 3)."""
        return self.corner_index[self.mesh.elements[:, :3]]

    def dirichlet_dofs(self, tag, field):
        """Momentum dofs constrained by a Dirichlet BC on a tagged group."""
        nodes = self.mesh.group_nodes(tag)
        if field == "u1":
            return self.u_dof(nodes, 0)
        if field == "u2":
            return self.u_dof(nodes, 1)
        corner = nodes[self.corner_index[nodes] >= 0]
        return self.theta_dof(corner)
