"""
Six-node triangle meshes with tagged boundary edge groups.

Initial cracks are represented as duplicated-node slits (zero-width cuts):
the two crack faces reference distinct, geometrically coincident nodes.

File format (ASCII, 1-based ids; '#' starts a comment):

    $Nodes
    <id> <x> <y>
    $Elements
    <id> <ntype> <node ids...>      # ntype 3 or 6
    $EdgeGroups
    <name> <n_edges>
    <corner_a> <corner_b>
    ...

Meshes whose elements are 3-node triangles get midside nodes synthesized at
exact edge midpoints on load.  A subset of the Gmsh MSH 2.2 ASCII format is
also accepted (nodes, element types 1/2/8/9, physical line groups).
"""

import numpy as np

from .shapes import p2_grads, quadrature_rule

__all__ = ["Mesh", "MeshFormatError", "load_mesh", "save_mesh", "synthesize_midsides"]


class MeshFormatError(Exception):
    """Raised for malformed mesh files; carries a 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Mesh:
    """Unstructured mesh of quadratic triangles.

    Attributes:
        nodes: (n_nodes, 2) coordinates [mm]
        elements: (n_elements, 6) node ids; corners 0-2, midsides 01, 12, 20
        edge_groups: dict tag -> (k, 2) corner-node pairs on the boundary
        metadata: free-form dict (generator provenance, sizes, ...)
    """

    def __init__(self, nodes, elements, edge_groups=None, metadata=None,
                 validate=True):
        self.nodes = np.asarray(nodes, dtype=float)
        self.elements = np.asarray(elements, dtype=np.int64)
        self.edge_groups = {k: np.asarray(v, dtype=np.int64).reshape(-1, 2)
                            for k, v in (edge_groups or {}).items()}
        self.metadata = dict(metadata or {})
        self._corner_nodes = None
        self._corner_index = None
        self._edge_mid = None
        if validate:
            self.validate()

    # -- basic queries ----------------------------------------------------

    @property
    def n_nodes(self):
        return self.nodes.shape[0]

    @property
    def n_elements(self):
        return self.elements.shape[0]

    @property
    def corner_nodes(self):
        """Sorted ids of nodes appearing as element corners."""
        if self._corner_nodes is None:
            self._corner_nodes = np.unique(self.elements[:, :3])
        return self._corner_nodes

    @property
    def corner_index(self):
        """Map node id -> compressed corner index (-1 for midside nodes)."""
        if self._corner_index is None:
            idx = np.full(self.n_nodes, -1, dtype=np.int64)
            idx[self.corner_nodes] = np.arange(self.corner_nodes.size)
            self._corner_index = idx
        return self._corner_index

    @property
    def edge_mid(self):
        """Map (min_corner, max_corner) -> midside node id."""
        if self._edge_mid is None:
            table = {}
            el = self.elements
            pairs = ((0, 1, 3), (1, 2, 4), (2, 0, 5))
            for a, b, m in pairs:
                for ca, cb, cm in zip(el[:, a], el[:, b], el[:, m]):
                    key = (min(ca, cb), max(ca, cb))
                    table[key] = int(cm)
            self._edge_mid = table
        return self._edge_mid

    def group_edges(self, tag):
        """Edges of a group as (k, 3) arrays [corner_a, corner_b, midside]."""
        if tag not in self.edge_groups:
            raise KeyError(f"unknown edge group '{tag}'; "
                           f"available: {sorted(self.edge_groups)}")
        pairs = self.edge_groups[tag]
        mids = []
        for a, b in pairs:
            key = (min(int(a), int(b)), max(int(a), int(b)))
            if key not in self.edge_mid:
                raise MeshFormatError(
                    f"edge group '{tag}' references edge {key} that belongs "
                    f"to no element")
            mids.append(self.edge_mid[key])
        out = np.column_stack([pairs, np.asarray(mids, dtype=np.int64)])
        return out.reshape(-1, 3)

    def group_nodes(self, tag):
        """All node ids (corners and midsides) of a tagged edge group."""
        edges = self.group_edges(tag)
        return np.unique(edges)

    def boundary_corner_pairs(self):
        """Corner-node pairs of boundary edges (edges used by one element)."""
        el = self.elements
        edges = np.concatenate([el[:, [0, 1]], el[:, [1, 2]], el[:, [2, 0]]])
        edges_sorted = np.sort(edges, axis=1)
        uniq, counts = np.unique(edges_sorted, axis=0, return_counts=True)
        return uniq[counts == 1]

    # -- geometry ---------------------------------------------------------

    def jacobians(self):
        """Isoparametric Jacobian determinants at all quadrature points (E, Q)."""
        qp, _ = quadrature_rule()
        dref = p2_grads(qp)                          # (Q, 6, 2)
        coords = self.nodes[self.elements]           # (E, 6, 2)
        J = np.einsum("eai,qaj->eqij", coords, dref)
        return J[..., 0, 0] * J[..., 1, 1] - J[..., 0, 1] * J[..., 1, 0]

    def quality(self):
        """Mesh quality summary: min/max detJ, min corner angle [deg], h stats."""
        det = self.jacobians()
        c = self.nodes[self.elements[:, :3]]
        v0 = c[:, 1] - c[:, 0]
        v1 = c[:, 2] - c[:, 1]
        v2 = c[:, 0] - c[:, 2]
        lens = np.stack([np.linalg.norm(v, axis=1) for v in (v0, v1, v2)])

        def _angle(u, v):
            cosv = -np.sum(u * v, axis=1) / (
                np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))
            return np.degrees(np.arccos(np.clip(cosv, -1.0, 1.0)))

        angles = np.stack([_angle(v2, v0), _angle(v0, v1), _angle(v1, v2)])
        return {
            "min_detJ": float(det.min()),
            "max_detJ": float(det.max()),
            "min_angle_deg": float(angles.min()),
            "h_min": float(lens.min()),
            "h_max": float(lens.max()),
        }

    def validate(self):
        """Check node references, Jacobian positivity and midside placement."""
        if self.elements.size and self.elements.max() >= self.n_nodes:
            raise MeshFormatError(
                f"undefined node id {int(self.elements.max())} referenced by an "
                f"element (mesh has {self.n_nodes} nodes)")
        if self.elements.min(initial=0) < 0:
            raise MeshFormatError("negative node id in element connectivity")
        det = self.jacobians()
        if not np.all(det > 0.0):
            bad = int(np.argwhere(det.min(axis=1) <= 0.0)[0][0])
            raise MeshFormatError(
                f"inverted or degenerate element {bad} "
                f"(min detJ = {det[bad].min():.3e})")
        for tag, pairs in self.edge_groups.items():
            if pairs.size and pairs.max() >= self.n_nodes:
                raise MeshFormatError(
                    f"edge group '{tag}' references undefined node id "
                    f"{int(pairs.max())}")
        # midside sanity: warn-level deviation becomes an error only if gross
        c = self.nodes[self.elements]
        for (a, b, m) in ((0, 1, 3), (1, 2, 4), (2, 0, 5)):
            mid = 0.5 * (c[:, a] + c[:, b])
            dev = np.linalg.norm(c[:, m] - mid, axis=1)
            edge = np.linalg.norm(c[:, b] - c[:, a], axis=1)
            if np.any(dev > 0.25 * edge):
                bad = int(np.argmax(dev / edge))
                raise MeshFormatError(
                    f"element {bad}: midside node far from edge midpoint")

    def coincident_pair(self, point, tol=1e-9):
        """The two distinct corner nodes coincident at `point` (a slit mouth)."""
        point = np.asarray(point, dtype=float)
        d = np.linalg.norm(self.nodes[self.corner_nodes] - point, axis=1)
        hits = self.corner_nodes[d <= tol]
        if hits.size < 2:
            raise ValueError(f"no duplicated node pair found at {point}")
        return int(hits[0]), int(hits[1])


def synthesize_midsides(nodes, tri3):
    """Create midside nodes at exact edge midpoints of 3-node triangles.

    Returns (nodes6, elements6) with the original corner nodes first.
    """
    nodes = np.asarray(nodes, dtype=float)
    tri3 = np.asarray(tri3, dtype=np.int64)
    edge_ids = {}
    new_pts = []
    next_id = nodes.shape[0]
    elements = np.empty((tri3.shape[0], 6), dtype=np.int64)
    elements[:, :3] = tri3
    for (a, b, col) in ((0, 1, 3), (1, 2, 4), (2, 0, 5)):
        for e in range(tri3.shape[0]):
            na, nb = int(tri3[e, a]), int(tri3[e, b])
            key = (min(na, nb), max(na, nb))
            mid = edge_ids.get(key)
            if mid is None:
                mid = next_id
                next_id += 1
                edge_ids[key] = mid
                new_pts.append(0.5 * (nodes[na] + nodes[nb]))
            elements[e, col] = mid
    if new_pts:
        nodes = np.vstack([nodes, np.asarray(new_pts)])
    return nodes, elements


# ---------------------------------------------------------------------------
# Native ASCII format
# ---------------------------------------------------------------------------

def save_mesh(mesh, path):
    """Write a mesh in the native ASCII format (1-based node ids)."""
    lines = ["$Nodes"]
    for i, (x, y) in enumerate(mesh.nodes):
        lines.append(f"{i + 1} {x!r} {y!r}")
    lines.append("$Elements")
    for i, el in enumerate(mesh.elements):
        ids = " ".join(str(int(n) + 1) for n in el)
        lines.append(f"{i + 1} 6 {ids}")
    lines.append("$EdgeGroups")
    for tag in sorted(mesh.edge_groups):
        pairs = mesh.edge_groups[tag]
        lines.append(f"{tag} {pairs.shape[0]}")
        for a, b in pairs:
            lines.append(f"{int(a) + 1} {int(b) + 1}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_mesh(path):
    """Read a mesh from the native format or the Gmsh MSH 2.2 ASCII subset."""
    with open(path) as fh:
        raw = fh.readlines()
    for ln, text in enumerate(raw, start=1):
        stripped = text.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped == "$MeshFormat":
            return _load_msh22(raw)
        if stripped == "$Nodes":
            return _load_native(raw)
        raise MeshFormatError(f"unrecognized first section '{stripped}'", ln)
    raise MeshFormatError("empty mesh file", 1)


def _tokens(raw):
    """Yield (line_number, token_list) for non-empty, non-comment lines."""
    for ln, text in enumerate(raw, start=1):
        stripped = text.split("#", 1)[0].strip()
        if stripped:
            yield ln, stripped.split()


def _load_native(raw):
    nodes_raw = {}
    elements = []
    groups = {}
    section = None
    group_name = None
    group_left = 0
    for ln, tok in _tokens(raw):
        if tok[0].startswith("$"):
            section = tok[0]
            if section not in ("$Nodes", "$Elements", "$EdgeGroups"):
                raise MeshFormatError(f"unknown section '{section}'", ln)
            group_name = None
            continue
        if section == "$Nodes":
            if len(tok) != 3:
                raise MeshFormatError("node line must be '<id> <x> <y>'", ln)
            try:
                nid, x, y = int(tok[0]), float(tok[1]), float(tok[2])
            except ValueError:
                raise MeshFormatError(f"malformed node line '{' '.join(tok)}'", ln)
            if nid in nodes_raw:
                raise MeshFormatError(f"duplicate node id {nid}", ln)
            nodes_raw[nid] = (x, y)
        elif section == "$Elements":
            if len(tok) < 2:
                raise MeshFormatError("element line must be '<id> <ntype> <nodes...>'", ln)
            try:
                ntype = int(tok[1])
                ids = [int(t) for t in tok[2:]]
            except ValueError:
                raise MeshFormatError(f"malformed element line '{' '.join(tok)}'", ln)
            if ntype not in (3, 6) or len(ids) != ntype:
                raise MeshFormatError(
                    f"element must list 3 or 6 node ids matching ntype, got "
                    f"ntype={ntype} with {len(ids)} ids", ln)
            elements.append((ln, ids))
        elif section == "$EdgeGroups":
            if group_name is None or group_left == 0:
                if len(tok) != 2:
                    raise MeshFormatError("edge group header must be '<name> <count>'", ln)
                group_name = tok[0]
                try:
                    group_left = int(tok[1])
                except ValueError:
                    raise MeshFormatError(f"bad edge count '{tok[1]}'", ln)
                groups[group_name] = []
            else:
                if len(tok) != 2:
                    raise MeshFormatError("edge line must be '<a> <b>'", ln)
                try:
                    groups[group_name].append((int(tok[0]), int(tok[1])))
                except ValueError:
                    raise MeshFormatError(f"malformed edge line '{' '.join(tok)}'", ln)
                group_left -= 1
        else:
            raise MeshFormatError("content before any section header", ln)
    return _assemble(nodes_raw, elements, groups)


def _assemble(nodes_raw, elements, groups):
    if not nodes_raw:
        raise MeshFormatError("mesh has no nodes", 1)
    ids = sorted(nodes_raw)
    remap = {nid: i for i, nid in enumerate(ids)}
    nodes = np.array([nodes_raw[nid] for nid in ids], dtype=float)

    def _map(nid, ln):
        if nid not in remap:
            raise MeshFormatError(f"undefined node id {nid}", ln)
        return remap[nid]

    tris3, tris6 = [], []
    for ln, el in elements:
        mapped = [_map(n, ln) for n in el]
        (tris3 if len(el) == 3 else tris6).append(mapped)
    if tris3 and tris6:
        raise MeshFormatError("mixed 3- and 6-node elements are not supported", 1)
    if tris3:
        nodes, el6 = synthesize_midsides(nodes, np.asarray(tris3))
    else:
        el6 = np.asarray(tris6, dtype=np.int64)
    edge_groups = {}
    for name, pairs in groups.items():
        edge_groups[name] = np.array(
            [[_map(a, 0), _map(b, 0)] for a, b in pairs], dtype=np.int64
        ).reshape(-1, 2)
    return Mesh(nodes, el6, edge_groups)


# ---------------------------------------------------------------------------
# Gmsh MSH 2.2 ASCII subset
# ---------------------------------------------------------------------------

def _load_msh22(raw):
    lines = [(ln, t) for ln, t in _tokens(raw)]
    pos = 0

    def _expect(tag):
        nonlocal pos
        ln, tok = lines[pos]
        if tok[0] != tag:
            raise MeshFormatError(f"expected '{tag}', got '{tok[0]}'", ln)
        pos += 1

    phys_names = {}
    nodes_raw = {}
    tri_elements = []
    line_elements = []

    while pos < len(lines):
        ln, tok = lines[pos]
        head = tok[0]
        if head == "$MeshFormat":
            pos += 1
            ln, tok = lines[pos]
            if not tok[0].startswith("2."):
                raise MeshFormatError(f"unsupported MSH version '{tok[0]}'", ln)
            pos += 1
            _expect("$EndMeshFormat")
        elif head == "$PhysicalNames":
            pos += 1
            count = int(lines[pos][1][0])
            pos += 1
            for _ in range(count):
                ln, tok = lines[pos]
                # dim id "name"
                name = " ".join(tok[2:]).strip('"')
                phys_names[int(tok[1])] = name
                pos += 1
            _expect("$EndPhysicalNames")
        elif head == "$Nodes":
            pos += 1
            count = int(lines[pos][1][0])
            pos += 1
            for _ in range(count):
                ln, tok = lines[pos]
                if len(tok) < 3:
                    raise MeshFormatError("node line must be '<id> <x> <y> [z]'", ln)
                nodes_raw[int(tok[0])] = (float(tok[1]), float(tok[2]))
                pos += 1
            _expect("$EndNodes")
        elif head == "$Elements":
            pos += 1
            count = int(lines[pos][1][0])
            pos += 1
            for _ in range(count):
                ln, tok = lines[pos]
                etype = int(tok[1])
                ntags = int(tok[2])
                phys = int(tok[3]) if ntags >= 1 else 0
                ids = [int(t) for t in tok[3 + ntags:]]
                if etype == 2:
                    tri_elements.append((ln, ids))
                elif etype == 9:
                    tri_elements.append((ln, ids))
                elif etype in (1, 8):
                    line_elements.append((phys, ids[:2], ln))
                # other element types (points etc.) are ignored
                pos += 1
            _expect("$EndElements")
        else:
            # skip unknown sections
            pos += 1
            while pos < len(lines) and not lines[pos][1][0].startswith("$End"):
                pos += 1
            pos += 1

    groups = {}
    for phys, (a, b), ln in line_elements:
        name = phys_names.get(phys, f"phys_{phys}")
        groups.setdefault(name, []).append((a, b))
    return _assemble(nodes_raw, tri_elements, groups)
