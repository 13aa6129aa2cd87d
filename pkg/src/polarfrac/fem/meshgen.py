"""
Benchmark mesh generation.

Rectangle-based domains (edge-cracked plates, the tapered opening specimen)
use graded structured grids that are exactly mirror-symmetric about the
initial crack line; the holed bending beam uses a deterministic force-based
smoothing mesher (Persson & Strang style) driven by a sizing field.

Initial cracks are zero-width slits produced by duplicating the nodes along
the crack segment and re-attaching the elements on one side to the twins.
"""

import numpy as np
from scipy.spatial import Delaunay

from .mesh import Mesh, synthesize_midsides

__all__ = ["generate_benchmark", "rectangle_mesh", "insert_slit"]


# ---------------------------------------------------------------------------
# Graded 1D point distributions
# ---------------------------------------------------------------------------

def _geometric_fill(length, h_lo, h_hi, h_far, ratio=1.25):
    """Spacings across a gap, growing geometrically from both ends."""
    if length <= max(h_lo, h_hi) * 1.5:
        n = max(1, int(round(length / max(h_lo, h_hi))))
        return np.full(n, length / n)
    left, right = [h_lo], [h_hi]
    while sum(left) + sum(right) < length:
        if sum(left) + left[-1] <= sum(right) + right[-1]:
            left.append(min(left[-1] * ratio, h_far))
        else:
            right.append(min(right[-1] * ratio, h_far))
    spac = np.array(left + right[::-1])
    return spac * (length / spac.sum())


def graded_1d(lo, hi, windows, h_far, ratio=1.25):
    """Graded grid point coordinates on [lo, hi].

    Args:
        windows: list of (a, b, h) fine windows (clipped to [lo, hi]); window
            bounds become exact grid points.
        h_far: coarse spacing away from the windows.
    """
    windows = sorted((max(lo, a), min(hi, b), h) for a, b, h in windows
                     if min(hi, b) > max(lo, a))
    pts = [lo]
    cursor = lo
    h_at_cursor = h_far
    for a, b, h in windows:
        if a > cursor + 1e-12 * (hi - lo):
            spac = _geometric_fill(a - cursor, min(h_at_cursor, h_far), h,
                                   h_far, ratio)
            pts.extend(cursor + np.cumsum(spac))
        n = max(1, int(round((b - a) / h)))
        pts.extend(a + (b - a) * np.arange(1, n + 1) / n)
        cursor = b
        h_at_cursor = h
    if hi > cursor + 1e-12 * (hi - lo):
        spac = _geometric_fill(hi - cursor, h_at_cursor, h_far, h_far, ratio)
        pts.extend(cursor + np.cumsum(spac))
    pts = np.asarray(pts)
    pts[-1] = hi
    return np.unique(pts)


def _mirror_about(ys_upper, yc):
    """Full symmetric coordinate array from the upper half (starts at yc)."""
    lower = 2.0 * yc - ys_upper[1:][::-1]
    return np.concatenate([lower, ys_upper])


# ---------------------------------------------------------------------------
# Structured grids
# ---------------------------------------------------------------------------

def _grid_triangles(nx, ny, diag):
    """Split an nx*ny node grid into triangles.

    diag(i, j) -> True for a '/' split of cell (i, j), False for '\\'.
    Node numbering is row-major: node(i, j) = j*nx + i.
    """
    tris = []
    for j in range(ny - 1):
        for i in range(nx - 1):
            a = j * nx + i
            b = a + 1
            c = b + nx
            d = a + nx
            if diag(i, j):
                tris.append((a, b, d))
                tris.append((b, c, d))
            else:
                tris.append((a, b, c))
                tris.append((a, c, d))
    return np.asarray(tris, dtype=np.int64)


def rectangle_mesh(xs, ys, sym_about=None):
    """Structured triangulation of the tensor grid xs x ys.

    With sym_about=yc (a grid line) the diagonal pattern mirrors about that
    line so the triangulation is exactly reflection-symmetric.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    nx, ny = xs.size, ys.size
    X, Y = np.meshgrid(xs, ys)
    nodes = np.column_stack([X.ravel(), Y.ravel()])
    if sym_about is None:
        diag = lambda i, j: (i + j) % 2 == 0
    else:
        jc = int(np.argmin(np.abs(ys - sym_about)))

        def diag(i, j):
            jdist = j - jc if j >= jc else jc - 1 - j
            base = (i + jdist) % 2 == 0
            return base if j >= jc else not base

    return nodes, _grid_triangles(nx, ny, diag)


# ---------------------------------------------------------------------------
# Slits
# ---------------------------------------------------------------------------

def insert_slit(nodes, tris, p0, p1, tol=None):
    """Cut a zero-width slit along segment p0 -> p1 (p1 is the crack tip).

    Nodes on the open segment [p0, p1) are duplicated and the elements whose
    centroid lies on the negative side of the segment normal are re-attached
    to the duplicates.  The tip node is shared, closing the crack there.

    Returns (nodes, tris, dup_pairs) with dup_pairs a list of
    (original, duplicate) ids.
    """
    nodes = np.asarray(nodes, dtype=float)
    tris = np.asarray(tris, dtype=np.int64).copy()
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    seg = p1 - p0
    length = np.linalg.norm(seg)
    t_hat = seg / length
    n_hat = np.array([-t_hat[1], t_hat[0]])
    if tol is None:
        tol = 1e-9 * max(1.0, length)

    rel = nodes - p0
    s = rel @ t_hat
    dist = rel @ n_hat
    on_slit = (np.abs(dist) <= tol) & (s >= -tol) & (s < length - tol)
    slit_ids = np.where(on_slit)[0]
    if slit_ids.size == 0:
        raise ValueError("no mesh nodes found on the slit segment")

    twin = {}
    new_nodes = [nodes]
    next_id = nodes.shape[0]
    for nid in slit_ids:
        twin[int(nid)] = next_id
        new_nodes.append(nodes[nid:nid + 1])
        next_id += 1
    nodes = np.vstack(new_nodes)

    centroids = nodes[tris[:, 0]] + nodes[tris[:, 1]] + nodes[tris[:, 2]]
    side = ((centroids / 3.0) - p0) @ n_hat
    touches = np.isin(tris, slit_ids).any(axis=1)
    flip = touches & (side < 0.0)
    for e in np.where(flip)[0]:
        for k in range(3):
            tris[e, k] = twin.get(int(tris[e, k]), tris[e, k])

    dup_pairs = sorted(twin.items())
    return nodes, tris, dup_pairs


def _compress(nodes, tris):
    """Drop nodes unused by the connectivity, renumbering densely."""
    used = np.unique(tris)
    remap = np.full(nodes.shape[0], -1, dtype=np.int64)
    remap[used] = np.arange(used.size)
    return nodes[used], remap[tris], remap


def _orient_ccw(nodes, tris):
    a, b, c = nodes[tris[:, 0]], nodes[tris[:, 1]], nodes[tris[:, 2]]
    cross = ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
             - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
    flip = cross < 0.0
    tris[flip, 1], tris[flip, 2] = tris[flip, 2].copy(), tris[flip, 1].copy()
    return tris


def _boundary_pairs(tris):
    edges = np.concatenate([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]])
    edges_sorted = np.sort(edges, axis=1)
    uniq, counts = np.unique(edges_sorted, axis=0, return_counts=True)
    return uniq[counts == 1]


def _finish(nodes, tris, classify, metadata):
    """Common pipeline: compress, orient, midsides, tag boundary, build Mesh."""
    nodes, tris, _ = _compress(nodes, np.asarray(tris, dtype=np.int64))
    tris = _orient_ccw(nodes, tris)
    bpairs = _boundary_pairs(tris)
    groups = {}
    for a, b in bpairs:
        mid = 0.5 * (nodes[a] + nodes[b])
        tag = classify(int(a), int(b), mid)
        if tag is not None:
            groups.setdefault(tag, []).append((int(a), int(b)))
    nodes6, elements = synthesize_midsides(nodes, tris)
    groups = {k: np.asarray(v, dtype=np.int64) for k, v in groups.items()}
    return Mesh(nodes6, elements, groups, metadata=metadata)


# ---------------------------------------------------------------------------
# Benchmark geometries
# ---------------------------------------------------------------------------

def _sen_plate(h_far, h_fine, band, scale, mode):
    W = 1.0 * scale
    yc = 0.5 * W
    a_len = 0.5 * W
    xw = [(a_len - 4.0 * band / 3.0, W, h_fine)]
    if mode == "shear":
        # shear cracks kink from the tip towards the lower-right corner
        yw_upper = [(yc, yc + band, h_fine)]
        ys_upper = graded_1d(yc, W, yw_upper, h_far)
        ys_lower = graded_1d(0.0, yc, [(0.02 * W, yc, h_fine)], h_far)
        ys = np.unique(np.concatenate([ys_lower, ys_upper]))
        xs = graded_1d(0.0, W, xw, h_far)
        nodes, tris = rectangle_mesh(xs, ys)
    else:
        ys_upper = graded_1d(yc, W, [(yc, yc + band, h_fine)], h_far)
        ys = _mirror_about(ys_upper, yc)
        xs = graded_1d(0.0, W, xw, h_far)
        nodes, tris = rectangle_mesh(xs, ys, sym_about=yc)
    nodes, tris, dups = insert_slit(nodes, tris, (0.0, yc), (a_len, yc))
    dup_set = {d for _, d in dups}
    eps = 1e-9 * W

    def classify(a, b, mid):
        if mid[1] > W - eps:
            return "top"
        if mid[1] < eps:
            return "bottom"
        if mid[0] < eps:
            return "left_lower" if (a in dup_set or b in dup_set) or mid[1] < yc \
                else "left_upper"
        if mid[0] > W - eps:
            return "right"
        if a in dup_set or b in dup_set:
            return "crack_lower"
        return "crack_upper"

    meta = {"geometry": "sen_plate", "W": W, "mouth": (0.0, yc),
            "mouth_axis": 1, "h_fine": h_fine, "h_far": h_far}
    return nodes, tris, classify, meta


def _den_plate(h_far, h_fine, band, scale):
    W = 100.0 * scale
    yc = 0.5 * W
    a_len = 0.25 * W
    xs = graded_1d(0.0, W, [(a_len - 3.0 * band / 2.0,
                             W - a_len + 3.0 * band / 2.0, h_fine)], h_far)
    ys_upper = graded_1d(yc, W, [(yc, yc + band, h_fine)], h_far)
    ys = _mirror_about(ys_upper, yc)
    nodes, tris = rectangle_mesh(xs, ys, sym_about=yc)
    nodes, tris, dups_l = insert_slit(nodes, tris, (0.0, yc), (a_len, yc))
    nodes, tris, dups_r = insert_slit(nodes, tris, (W, yc), (W - a_len, yc))
    dup_set = {d for _, d in dups_l} | {d for _, d in dups_r}
    eps = 1e-9 * W

    def classify(a, b, mid):
        if mid[1] > W - eps:
            return "top"
        if mid[1] < eps:
            return "bottom"
        lower = a in dup_set or b in dup_set
        if mid[0] < eps:
            return "left_lower" if lower or mid[1] < yc else "left_upper"
        if mid[0] > W - eps:
            return "right_lower" if lower or mid[1] < yc else "right_upper"
        return "crack_lower" if lower else "crack_upper"

    meta = {"geometry": "den_plate", "W": W, "mouth": (0.0, yc),
            "mouth_axis": 1, "h_fine": h_fine, "h_far": h_far}
    return nodes, tris, classify, meta


def _trapezoid(h_far, h_fine, band, scale, band_length=None):
    # taper and notch proportions read off the published figure (approximate)
    L = 2000.0 * scale
    H0 = 250.0 * scale
    H1 = 500.0 * scale
    a_len = 200.0 * scale
    if band_length is None:
        band_length = L - a_len
    x_hi = min(L, a_len + band_length)
    xs = graded_1d(0.0, L, [(max(0.0, a_len - 2.0 * band), x_hi, h_fine)], h_far)
    # grid in (x, yhat), yhat in [0, 1] upper half, then mapped by H(x)
    yhat_band = band / H0
    yhat_h = h_fine / H1
    yhat_far = h_far / H1
    ys_upper = graded_1d(0.0, 1.0, [(0.0, min(1.0, yhat_band), yhat_h)], yhat_far)
    ys = _mirror_about(ys_upper, 0.0)
    nodes, tris = rectangle_mesh(xs, ys, sym_about=0.0)
    H = H0 + (H1 - H0) * nodes[:, 0] / L
    nodes = np.column_stack([nodes[:, 0], nodes[:, 1] * H])
    nodes, tris, dups = insert_slit(nodes, tris, (0.0, 0.0), (a_len, 0.0))
    dup_set = {d for _, d in dups}
    eps = 1e-9 * L

    def classify(a, b, mid):
        if mid[0] < eps:
            return "left_lower" if (a in dup_set or b in dup_set) or mid[1] < 0 \
                else "left_upper"
        if mid[0] > L - eps:
            return "right"
        on_slit = abs(mid[1]) < eps * H1
        if on_slit:
            return "crack_lower" if (a in dup_set or b in dup_set) else "crack_upper"
        return "top" if mid[1] > 0 else "bottom"

    meta = {"geometry": "trapezoid", "L": L, "H0": H0, "H1": H1,
            "mouth": (0.0, 0.0), "mouth_axis": 1,
            "h_fine": h_fine, "h_far": h_far}
    return nodes, tris, classify, meta


# -- force-equilibrated unstructured mesher for the holed beam -------------

def _distmesh(fd, fh, h0, bbox, pfix, seed=0, max_iter=150):
    """Deterministic variant of the Persson-Strang smoothing mesher."""
    geps = 1e-3 * h0
    deps = np.sqrt(np.finfo(float).eps) * h0
    fscale, dt, dptol, ttol = 1.2, 0.2, 1e-3, 0.1

    (x0, x1), (y0, y1) = bbox
    x = np.arange(x0, x1 + h0, h0)
    y = np.arange(y0, y1 + h0 * np.sqrt(3) / 2, h0 * np.sqrt(3) / 2)
    X, Y = np.meshgrid(x, y)
    X[1::2] += h0 / 2.0
    p = np.column_stack([X.ravel(), Y.ravel()])
    p = p[fd(p) < geps]
    r0 = 1.0 / fh(p) ** 2
    rng = np.random.default_rng(seed)
    p = p[rng.random(p.shape[0]) < r0 / r0.max()]
    pfix = np.asarray(pfix, dtype=float)
    if pfix.size:
        keep = np.ones(p.shape[0], dtype=bool)
        for q in pfix:
            keep &= np.linalg.norm(p - q, axis=1) > 0.5 * h0
        p = np.vstack([pfix, p[keep]])
    nfix = pfix.shape[0]

    pold = np.full_like(p, np.inf)
    tris = None
    for _ in range(max_iter):
        if np.max(np.linalg.norm(p - pold, axis=1)) > ttol * h0:
            pold = p.copy()
            tri = Delaunay(p).simplices
            cent = (p[tri[:, 0]] + p[tri[:, 1]] + p[tri[:, 2]]) / 3.0
            tris = tri[fd(cent) < -geps]
            bars = np.unique(np.sort(np.concatenate(
                [tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]]), axis=1),
                axis=0)
        vec = p[bars[:, 0]] - p[bars[:, 1]]
        L = np.linalg.norm(vec, axis=1)
        mid = 0.5 * (p[bars[:, 0]] + p[bars[:, 1]])
        hbars = fh(mid)
        L0 = hbars * fscale * np.sqrt(np.sum(L**2) / np.sum(hbars**2))
        F = np.maximum(L0 - L, 0.0)
        Fvec = (F / np.where(L == 0, 1.0, L))[:, None] * vec
        move = np.zeros_like(p)
        np.add.at(move, bars[:, 0], Fvec)
        np.add.at(move, bars[:, 1], -Fvec)
        move[:nfix] = 0.0
        p = p + dt * move
        d = fd(p)
        out = d > 0.0
        if np.any(out):
            px = p[out].copy()
            dgx = (fd(px + [deps, 0.0]) - fd(px - [deps, 0.0])) / (2 * deps)
            dgy = (fd(px + [0.0, deps]) - fd(px - [0.0, deps])) / (2 * deps)
            norm2 = dgx**2 + dgy**2
            norm2[norm2 == 0.0] = 1.0
            px[:, 0] -= d[out] * dgx / norm2
            px[:, 1] -= d[out] * dgy / norm2
            p[out] = px
        interior = np.ones(p.shape[0], dtype=bool)
        interior[:nfix] = False
        interior &= fd(p) < -geps
        if interior.any():
            disp = np.linalg.norm(dt * move[interior], axis=1)
            if disp.max() < dptol * h0:
                break
    tri = Delaunay(p).simplices
    cent = (p[tri[:, 0]] + p[tri[:, 1]] + p[tri[:, 2]]) / 3.0
    tris = tri[fd(cent) < -geps]
    return p, tris


def _seg_distance(p, a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    t = np.clip(((p - a) @ ab) / (ab @ ab), 0.0, 1.0)
    proj = a + t[:, None] * ab
    return np.linalg.norm(p - proj, axis=1)


def _tpb_beam(h_far, h_fine, band, scale):
    L, H = 508.0 * scale, 203.2 * scale
    notch_x, notch_depth = 127.0 * scale, 25.4 * scale
    holes = [(152.4 * scale, 31.75 * scale),
             (152.4 * scale, 69.85 * scale),
             (152.4 * scale, 107.95 * scale)]
    r = 6.35 * scale
    sup_l, sup_r = 25.4 * scale, 482.6 * scale
    load_x = 0.5 * L
    sup_w = max(3.0 * h_far / 4.0, 4.0 * scale)

    tip = np.array([notch_x, notch_depth])
    mid_hole = np.array(holes[1])

    def fd(p):
        p = np.atleast_2d(p)
        dx = np.maximum(-p[:, 0], p[:, 0] - L)
        dy = np.maximum(-p[:, 1], p[:, 1] - H)
        drect = np.where((dx > 0) | (dy > 0),
                         np.hypot(np.maximum(dx, 0), np.maximum(dy, 0)),
                         np.maximum(dx, dy))
        d = drect
        for hx, hy in holes:
            dcirc = r - np.hypot(p[:, 0] - hx, p[:, 1] - hy)
            d = np.maximum(d, dcirc)
        return d

    def fh(p):
        p = np.atleast_2d(p)
        h = np.full(p.shape[0], h_far)
        # refined band along the expected crack trajectory
        d_path = _seg_distance(p, tip, mid_hole)
        h = np.minimum(h, h_fine + 0.35 * np.maximum(d_path - band, 0.0)
                       + np.where(d_path <= band, 0.0, 0.0))
        d_notch = _seg_distance(p, (notch_x, 0.0), tip)
        h = np.minimum(h, h_fine + 0.35 * np.maximum(d_notch - band, 0.0))
        for hx, hy in holes:
            dbnd = np.abs(np.hypot(p[:, 0] - hx, p[:, 1] - hy) - r)
            h = np.minimum(h, max(min(h_far, 0.35 * r), h_fine) + 0.35 * dbnd)
        for sx in (sup_l, sup_r, load_x):
            sy = 0.0 if sx != load_x else H
            dpt = np.hypot(p[:, 0] - sx, p[:, 1] - sy)
            h = np.minimum(h, max(min(h_far, sup_w / 2.0), h_fine) + 0.4 * dpt)
        return h

    # fixed points: corners, support/load segment ends, hole rings, notch chain
    pfix = [(0.0, 0.0), (L, 0.0), (L, H), (0.0, H)]
    for sx, sy in ((sup_l, 0.0), (sup_r, 0.0), (load_x, H)):
        pfix += [(sx - sup_w, sy), (sx, sy), (sx + sup_w, sy)]
    for hx, hy in holes:
        n_seg = max(32, int(np.ceil(2 * np.pi * r / min(h_far, 0.35 * r))))
        ang = 2 * np.pi * np.arange(n_seg) / n_seg
        pfix += [(hx + r * np.cos(t), hy + r * np.sin(t)) for t in ang]
    n_slit = max(4, int(np.ceil(notch_depth / (0.9 * h_fine))))
    slit_y = notch_depth * np.arange(n_slit + 1) / n_slit
    pfix += [(notch_x, y) for y in slit_y]
    pfix = np.asarray(pfix)

    p, tris = _distmesh(fd, fh, h_fine, ((0.0, L), (0.0, H)), pfix)

    # carve stray points off the slit line and remesh once
    d_slit = _seg_distance(p, (notch_x, 0.0), tip)
    local_h = fh(p)
    protected = np.zeros(p.shape[0], dtype=bool)
    protected[:pfix.shape[0]] = True
    drop = (~protected) & (d_slit < 0.45 * local_h)
    if np.any(drop):
        p = p[~drop]
        tri = Delaunay(p).simplices
        cent = (p[tri[:, 0]] + p[tri[:, 1]] + p[tri[:, 2]]) / 3.0
        tris = tri[fd(cent) < -1e-3 * h_fine]

    nodes, tris, dups = insert_slit(p, tris, (notch_x, 0.0), tuple(tip),
                                    tol=1e-6 * scale)
    dup_set = {d for _, d in dups}
    eps = 1e-6 * scale

    def classify(a, b, mid):
        if mid[1] < eps:
            if abs(mid[0] - notch_x) < 2 * eps:
                return "crack_right" if not (a in dup_set or b in dup_set) \
                    else "crack_left"
            for tag, sx in (("support_left", sup_l), ("support_right", sup_r)):
                if abs(mid[0] - sx) <= sup_w:
                    return tag
            return "bottom"
        if mid[1] > H - eps:
            if abs(mid[0] - load_x) <= sup_w:
                return "load"
            return "top"
        if mid[0] < eps:
            return "left"
        if mid[0] > L - eps:
            return "right"
        if a in dup_set or b in dup_set:
            return "crack_left"
        for k, (hx, hy) in enumerate(holes):
            if abs(np.hypot(mid[0] - hx, mid[1] - hy) - r) < 0.25 * r:
                return f"hole_{k}"
        return "crack_right"

    meta = {"geometry": "tpb_beam", "L": L, "H": H,
            "mouth": (notch_x, 0.0), "mouth_axis": 0,
            "notch_depth": notch_depth, "h_fine": h_fine, "h_far": h_far}
    return nodes, tris, classify, meta


_GENERATORS = {
    "trapezoid": _trapezoid,
    "sen_plate": _sen_plate,
    "tpb_beam": _tpb_beam,
    "den_plate": _den_plate,
}


def generate_benchmark(geometry, h_far, h_fine, *, l_c=None, scale=1.0,
                       mode="tension", band_length=None):
    """Generate one of the four benchmark meshes.

    Args:
        geometry: "trapezoid" | "sen_plate" | "tpb_beam" | "den_plate"
        h_far: far-field element size [mm]
        h_fine: element size in the refinement band [mm]
        l_c: phase-field regularization length; the band half-width is
            3*l_c (band width >= 6*l_c).  Defaults to 5*h_fine when omitted.
        scale: geometric scaling of the published dimensions
        mode: "tension" or "shear" (edge-cracked plate only; controls which
            region is refined)
        band_length: trapezoid only; how far beyond the notch tip the fine
            band extends
    """
    if h_fine > h_far:
        raise ValueError("h_fine must not exceed h_far")
    if geometry not in _GENERATORS:
        raise ValueError(f"unknown geometry '{geometry}'; "
                         f"expected one of {sorted(_GENERATORS)}")
    band = 3.0 * l_c if l_c else 15.0 * h_fine / 3.0
    if geometry == "sen_plate":
        nodes, tris, classify, meta = _sen_plate(h_far, h_fine, band, scale, mode)
    elif geometry == "den_plate":
        nodes, tris, classify, meta = _den_plate(h_far, h_fine, band, scale)
    elif geometry == "trapezoid":
        nodes, tris, classify, meta = _trapezoid(h_far, h_fine, band, scale,
                                                 band_length)
    else:
        nodes, tris, classify, meta = _tpb_beam(h_far, h_fine, band, scale)
    meta["band_halfwidth"] = band
    return _finish(nodes, tris, classify, meta)
