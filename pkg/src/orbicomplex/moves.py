"""Local moves on decorated triangulations and a greedy simplifier.

All moves preserve the underlying orbifold: the 2-3 and 3-2 bistellar moves,
the 2-0 squash of a pillow around a degree-2 edge, the 1-4 and barycentric
subdivisions, and boundary layerings (attaching a tetrahedron along one, two
or three boundary faces, which retriangulates the boundary without changing
the manifold).  Edge orders are transported through every move; a move that
would collapse or fuse singular edges of different orders is refused.

Moves are speculative: each returns a new triangulation or None when its
preconditions fail or the result does not validate.
"""

import random

from .orbtri import OrbifoldTriangulation
from .perm import TET_EDGES, EDGE_INDEX, FACE_VERTICES, compose, invert


def _perm_of_map(mapping):
    p = [None] * 4
    for a, b in mapping.items():
        p[a] = b
    assert sorted(p) == [0, 1, 2, 3], mapping
    return tuple(p)


def edge_fan(tri, t, e):
    """The cyclic fan of corners around an interior edge slot.

    Corners are (tet, x, y, u, w): the directed edge is (x, y), the fan was
    entered through the face containing u and leaves through the face
    containing w (face labels w and u respectively).  Returns None when the
    walk hits an unglued face.
    """
    a, b = TET_EDGES[e]
    zs = [v for v in range(4) if v not in (a, b)]
    start = (t, a, b, zs[0], zs[1])
    corners = [start]
    cur = start
    while True:
        tt, x, y, u, w = cur
        g = tri.gluings[tt][u]
        if g is None:
            return None
        t2, _, p = g
        x2, y2, u2 = p[x], p[y], p[w]
        w2 = 6 - x2 - y2 - u2
        cur = (t2, x2, y2, u2, w2)
        if cur == start:
            return corners
        corners.append(cur)
        if len(corners) > 6 * tri.tet_count:
            raise AssertionError("edge fan does not close")


def _transfer_orders(old, new_gluings, slot_map):
    """Build the new triangulation, carrying orders along slot_map, which
    sends new (tet, edge) slots to old slots (or None for fresh edges).

    Returns None when two distinct singular classes would fuse into one new
    class (identifying two arcs of the singular set changes the orbifold even
    when their orders agree), or when a singular class loses all its slots.
    """
    out = OrbifoldTriangulation(new_gluings)
    orders = {}
    contributor = {}
    covered = set()
    for (new_slot, old_slot) in slot_map.items():
        if old_slot is None:
            continue
        oc = old.edge_class_of[old_slot]
        covered.add(oc)
        p = old.edge_orders[oc]
        if p == 1:
            continue
        c = out.edge_class_of[new_slot]
        if contributor.setdefault(c, oc) != oc:
            return None
        orders[c] = p
    for c in old.singular_edge_classes():
        if c not in covered:
            return None
    return out.with_orders(orders)


def _identity_slot_map(old, kept, reindex):
    slot_map = {}
    for t in kept:
        for e in range(6):
            slot_map[(reindex[t], e)] = (t, e)
    return slot_map


def two_three(tri, t0, f0):
    """Replace two tetrahedra sharing the face (t0, f0) by three around a new
    edge joining their apexes."""
    g = tri.gluings[t0][f0]
    if g is None:
        return None
    t1, f1, sigma = g
    if t1 == t0:
        return None
    us = FACE_VERTICES[f0]                      # u0, u1, u2 in t0 labels
    removed = {t0, t1}
    kept = [t for t in range(tri.tet_count) if t not in removed]
    reindex = {t: i for i, t in enumerate(kept)}
    base = len(kept)
    gl = [[None] * 4 for _ in range(base + 3)]

    # New tet N_i omits face vertex u_i; slots (0,1,2,3) = (apex0, apex1,
    # u_j, u_k) with j < k.
    def uslot(i, j):
        pair = sorted(x for x in range(3) if x != i)
        return 2 + pair.index(j)

    lam0 = {}
    lam1 = {}
    for i in range(3):
        m0 = {f0: 0}
        m1 = {f1: 1}
        for j in range(3):
            if j == i:
                m0[us[j]] = 1
                m1[sigma[us[j]]] = 0
            else:
                m0[us[j]] = uslot(i, j)
                m1[sigma[us[j]]] = uslot(i, j)
        lam0[i] = _perm_of_map(m0)   # t0 labels -> N_i slots
        lam1[i] = _perm_of_map(m1)   # t1 labels -> N_i slots
    # Internal gluings: N_i and N_j share the face missing u_i and u_j.
    for i in range(3):
        for j in range(i + 1, 3):
            k = 3 - i - j
            m = {0: 0, 1: 1, uslot(i, k): uslot(j, k), uslot(i, j): uslot(j, i)}
            p = _perm_of_map(m)
            gl[base + i][uslot(i, j)] = (base + j, uslot(j, i), p)
            gl[base + j][uslot(j, i)] = (base + i, uslot(i, j), invert(p))

    outer_map = {}
    for i in range(3):
        outer_map[(t0, us[i])] = (base + i, lam0[i])
        outer_map[(t1, sigma[us[i]])] = (base + i, lam1[i])
    ok = _reglue(tri, removed, kept, reindex, gl, outer_map)
    if not ok:
        return None

    slot_map = _identity_slot_map(tri, kept, reindex)
    for i in range(3):
        js = [x for x in range(3) if x != i]
        slot_map[(base + i, EDGE_INDEX[(0, 1)])] = None
        for j in js:
            slot_map[(base + i, EDGE_INDEX[(0, uslot(i, j))])] = \
                (t0, EDGE_INDEX[(f0, us[j])])
            slot_map[(base + i, EDGE_INDEX[(1, uslot(i, j))])] = \
                (t1, EDGE_INDEX[(f1, sigma[us[j]])])
        slot_map[(base + i, EDGE_INDEX[(2, 3)])] = \
            (t0, EDGE_INDEX[(us[js[0]], us[js[1]])])
    try:
        out = _transfer_orders(tri, gl, slot_map)
    except Exception:
        return None
    if out is not None and not out.quick_valid(closed=tri.is_closed):
        return None
    return out


def three_two(tri, edge_class):
    """Collapse the three tetrahedra around a degree-3 order-1 edge into two."""
    slots = tri.edge_classes[edge_class]
    if len(slots) != 3 or tri.edge_orders[edge_class] != 1:
        return None
    t, e = slots[0]
    fan = edge_fan(tri, t, e)
    if fan is None or len(fan) != 3:
        return None
    tets = [c[0] for c in fan]
    if len(set(tets)) != 3:
        return None
    removed = set(tets)
    kept = [tt for tt in range(tri.tet_count) if tt not in removed]
    reindex = {tt: i for i, tt in enumerate(kept)}
    base = len(kept)
    gl = [[None] * 4 for _ in range(base + 2)]
    B, T = base, base + 1

    # Equatorial vertex U_i is label u_i in tet T_i (and w_{i-1} in T_{i-1});
    # bottom tet B = (apex x; U0,U1,U2), top T = (apex y; U0,U1,U2).
    gl[B][0] = (T, 0, (0, 1, 2, 3))
    gl[T][0] = (B, 0, (0, 1, 2, 3))
    outer_map = {}
    for i, (ti, x, y, u, w) in enumerate(fan):
        mtop = {y: 0, u: 1 + i, w: 1 + (i + 1) % 3, x: 1 + (i + 2) % 3}
        mbot = {x: 0, u: 1 + i, w: 1 + (i + 1) % 3, y: 1 + (i + 2) % 3}
        outer_map[(ti, x)] = (T, _perm_of_map(mtop))
        outer_map[(ti, y)] = (B, _perm_of_map(mbot))
    ok = _reglue(tri, removed, kept, reindex, gl, outer_map)
    if not ok:
        return None
    slot_map = _identity_slot_map(tri, kept, reindex)
    for i, (ti, x, y, u, w) in enumerate(fan):
        slot_map[(B, EDGE_INDEX[(0, 1 + i)])] = (ti, EDGE_INDEX[(x, u)])
        slot_map[(T, EDGE_INDEX[(0, 1 + i)])] = (ti, EDGE_INDEX[(y, u)])
        slot_map[(B, EDGE_INDEX[(1 + i, 1 + (i + 1) % 3)])] = (ti, EDGE_INDEX[(u, w)])
        slot_map[(T, EDGE_INDEX[(1 + i, 1 + (i + 1) % 3)])] = (ti, EDGE_INDEX[(u, w)])
    try:
        out = _transfer_orders(tri, gl, slot_map)
    except Exception:
        return None
    if out is not None and not out.quick_valid(closed=tri.is_closed):
        return None
    return out


def two_zero(tri, edge_class):
    """Squash the pillow formed by the two tetrahedra around a degree-2
    order-1 edge."""
    slots = tri.edge_classes[edge_class]
    if len(slots) != 2 or tri.edge_orders[edge_class] != 1:
        return None
    t, e = slots[0]
    fan = edge_fan(tri, t, e)
    if fan is None or len(fan) != 2:
        return None
    (T0, x0, y0, u0, w0), (T1, x1, y1, u1, w1) = fan
    if T0 == T1:
        return None
    if tri.tet_count == 2:
        return None
    # Any outer face glued back to the pillow makes the squashed region a
    # solid torus (or worse) rather than a product; collapsing it would
    # change the manifold.  Require all four outer faces to leave the pillow
    # (boundary outer faces would also retriangulate the boundary; refuse).
    for (tt, ff) in ((T0, x0), (T0, y0), (T1, x1), (T1, y1)):
        g = tri.gluings[tt][ff]
        if g is None or g[0] in (T0, T1):
            return None
    # The squash identifies the two ends of the collapsing edge.  If both
    # ends carry singular germs the merged point would violate the orbifold
    # local structure (or silently rewire the singular set); refuse.
    vx = tri.vertex_class_of[(T0, x0)]
    vy = tri.vertex_class_of[(T0, y0)]
    if vx != vy:
        germs = tri.germs()
        if germs.get(vx) and germs.get(vy):
            return None
    # The squash also identifies the north side edges with the south side
    # edges.  The four side edge classes must be pairwise distinct: if a
    # class takes part in two identifications (or is identified with itself)
    # an edge gets folded onto itself and the quotient pinches.
    def _ec(tt, a, b):
        return tri.edge_class_of[(tt, EDGE_INDEX[(a, b)])]
    sides = {_ec(T0, x0, u0), _ec(T0, y0, u0), _ec(T0, x0, w0), _ec(T0, y0, w0),
             _ec(T1, x1, u1), _ec(T1, y1, u1), _ec(T1, x1, w1), _ec(T1, y1, w1)}
    if len(sides) != 4:
        return None
    removed = {T0, T1}
    # The squash identifies, on each tetrahedron, the outer face containing y
    # with the outer face containing x, fixing the opposite (equatorial) edge.
    squash = {
        (T0, x0): ((T0, y0), _perm_of_map({y0: x0, u0: u0, w0: w0, x0: y0})),
        (T0, y0): ((T0, x0), _perm_of_map({x0: y0, u0: u0, w0: w0, y0: x0})),
        (T1, x1): ((T1, y1), _perm_of_map({y1: x1, u1: u1, w1: w1, x1: y1})),
        (T1, y1): ((T1, x1), _perm_of_map({x1: y1, u1: u1, w1: w1, y1: x1})),
    }
    kept = [tt for tt in range(tri.tet_count) if tt not in removed]
    reindex = {tt: i for i, tt in enumerate(kept)}
    gl = [[None] * 4 for _ in kept]

    def chase(slot, acc):
        # Starting on an outer pillow face, follow gluings through the squash
        # until leaving the pillow; acc maps original labels to current ones.
        seen = 0
        while True:
            (tt, ff) = slot
            g = tri.gluings[tt][ff]
            if g is None:
                return None, None
            t2, f2, p = g
            if t2 not in removed:
                return (t2, f2), compose(p, acc)
            nxt, mu = squash[(t2, f2)]
            acc = compose(mu, compose(p, acc))
            slot = nxt
            seen += 1
            if seen > 8:
                return "cycle", None

    for tt in kept:
        for ff in range(4):
            g = tri.gluings[tt][ff]
            if g is None or g[0] not in removed:
                continue
            dest, mu = squash[(g[0], g[1])]
            end, perm = chase(dest, compose(mu, g[2]))
            if end == "cycle" or end is None:
                return None
            t2, f2 = end
            if (t2, f2) == (tt, ff):
                return None
            gl[reindex[tt]][ff] = (reindex[t2], perm[ff], perm)
    for tt in kept:
        for ff in range(4):
            g = tri.gluings[tt][ff]
            if g is None:
                continue
            if g[0] in removed:
                continue
            gl[reindex[tt]][ff] = (reindex[g[0]], g[1], g[2])
    try:
        out = _transfer_orders(tri, gl, _identity_slot_map(tri, kept, reindex))
    except Exception:
        return None
    if out is not None and not out.quick_valid(closed=tri.is_closed):
        return None
    return out


def _reglue(tri, removed, kept, reindex, gl, outer_map):
    """Fill in gluings of the new complex: copies among kept tetrahedra,
    redirections through outer_map for faces that met the removed ones.

    outer_map sends each removed outer slot to (new tet index, label map from
    old labels to new slots).
    """
    for t in kept:
        for f in range(4):
            g = tri.gluings[t][f]
            if g is None:
                continue
            t2, f2, p = g
            if t2 in removed:
                if (t2, f2) not in outer_map:
                    return False
                nt, lam = outer_map[(t2, f2)]
                q = compose(lam, p)
                gl[reindex[t]][f] = (nt, q[f], q)
            else:
                gl[reindex[t]][f] = (reindex[t2], f2, p)
    # Pairs of outer slots glued to each other.
    for (rt, rf), (nt, lam) in outer_map.items():
        g = tri.gluings[rt][rf]
        if g is None:
            gl[nt][lam[rf]] = None
            continue
        t2, f2, p = g
        if t2 in removed and (t2, f2) in outer_map:
            nt2, lam2 = outer_map[(t2, f2)]
            q = compose(lam2, compose(p, invert(lam)))
            gl[nt][lam[rf]] = (nt2, q[lam[rf]], q)
    # Fill reverse copies for redirected kept-tet gluings.
    for t in range(len(gl)):
        for f in range(4):
            g = gl[t][f]
            if g is None:
                continue
            t2, f2, p = g
            if gl[t2][f2] is None:
                gl[t2][f2] = (t, f, invert(p))
    return True


def one_four(tri, t):
    """Cone tetrahedron t from an interior point: four tetrahedra around a
    new clean vertex."""
    removed = {t}
    kept = [tt for tt in range(tri.tet_count) if tt != t]
    reindex = {tt: i for i, tt in enumerate(kept)}
    base = len(kept)
    gl = [[None] * 4 for _ in range(base + 4)]
    # N_f keeps the labels of t except that slot f holds the centre.
    for f in range(4):
        for g2 in range(4):
            if g2 == f:
                continue
            swap = {x: x for x in range(4)}
            swap[f], swap[g2] = g2, f
            gl[base + f][g2] = (base + g2, f, _perm_of_map(swap))
    outer_map = {(t, f): (base + f, (0, 1, 2, 3)) for f in range(4)}
    if not _reglue(tri, removed, kept, reindex, gl, outer_map):
        return None
    slot_map = _identity_slot_map(tri, kept, reindex)
    for f in range(4):
        for e in range(6):
            a, b = TET_EDGES[e]
            if a != f and b != f:
                slot_map[(base + f, e)] = (t, e)
            else:
                slot_map[(base + f, e)] = None
    return _transfer_orders(tri, gl, slot_map)


_FLAGS = []
for _f in range(4):
    for _e in range(6):
        _a, _b = TET_EDGES[_e]
        if _a == _f or _b == _f:
            continue
        for _v in (_a, _b):
            _FLAGS.append((_v, _e, _f))
_FLAG_INDEX = {flag: i for i, flag in enumerate(_FLAGS)}


def barycentric(tri):
    """Barycentric subdivision: one tetrahedron per flag (vertex < edge <
    face), with slots (0,1,2,3) = (vertex corner, edge centre, face centre,
    tetrahedron centre).

    Afterwards every tetrahedron is embedded, every vertex/edge star is
    embedded, and each new tetrahedron carries at most one singular edge
    (its slot (0,1), lying on an original edge).
    """
    n = tri.tet_count
    gl = [[None] * 4 for _ in range(24 * n)]

    def tid(t, flag):
        return 24 * t + _FLAG_INDEX[flag]

    ident = (0, 1, 2, 3)
    for t in range(n):
        for (v, e, f) in _FLAGS:
            me = tid(t, (v, e, f))
            a, b = TET_EDGES[e]
            v2 = a + b - v
            gl[me][0] = (tid(t, (v2, e, f)), 0, ident)
            others = [u for u in FACE_VERTICES[f] if u != v]
            e2 = EDGE_INDEX[(v, others[0])] if EDGE_INDEX[(v, others[0])] != e \
                else EDGE_INDEX[(v, others[1])]
            gl[me][1] = (tid(t, (v, e2, f)), 1, ident)
            f2 = [x for x in range(4) if x not in (a, b) and x != f][0]
            gl[me][2] = (tid(t, (v, e, f2)), 2, ident)
            g = tri.gluings[t][f]
            if g is not None:
                t2, ff2, p = g
                e_img = EDGE_INDEX[(p[a], p[b])]
                gl[me][3] = (tid(t2, (p[v], e_img, ff2)), 3, ident)
    slot_map = {}
    for t in range(n):
        for (v, e, f) in _FLAGS:
            me = tid(t, (v, e, f))
            for ne in range(6):
                slot_map[(me, ne)] = (t, e) if ne == EDGE_INDEX[(0, 1)] else None
    return _transfer_orders(tri, gl, slot_map)


# -- boundary layerings -------------------------------------------------------


def attach_one(tri, t, f):
    """Glue a fresh tetrahedron onto boundary face (t, f) along one face:
    subdivides that boundary triangle into three."""
    if tri.gluings[t][f] is not None:
        return None
    n = tri.tet_count
    gl = [list(x) for x in tri.gluings] + [[None] * 4]
    gl[t][f] = (n, f, (0, 1, 2, 3))
    gl[n][f] = (t, f, (0, 1, 2, 3))
    slot_map = {(tt, e): (tt, e) for tt in range(n) for e in range(6)}
    for e in range(6):
        a, b = TET_EDGES[e]
        slot_map[(n, e)] = (t, e) if (a != f and b != f) else None
    return _transfer_orders(tri, gl, slot_map)


def attach_two(tri, slot_a, slot_b, edge_map):
    """Layer a tetrahedron across two boundary faces sharing a boundary edge:
    the flip move on the boundary surface.

    slot_a, slot_b are the two boundary (tet, face) slots and edge_map is the
    pair ((xa, ya), (xb, yb)) of directed edges, in the labels of the two
    slots, identified along the common boundary edge.
    """
    (ta, fa), (tb, fb) = slot_a, slot_b
    if tri.gluings[ta][fa] is not None or tri.gluings[tb][fb] is not None:
        return None
    if slot_a == slot_b:
        return None
    (xa, ya), (xb, yb) = edge_map
    za = [v for v in FACE_VERTICES[fa] if v not in (xa, ya)][0]
    zb = [v for v in FACE_VERTICES[fb] if v not in (xb, yb)][0]
    n = tri.tet_count
    gl = [list(x) for x in tri.gluings] + [[None] * 4]
    # New tet slots: 0 = xa image, 1 = ya image, 2 = za image, 3 = zb image.
    pa = _perm_of_map({xa: 0, ya: 1, za: 2, fa: 3})   # ta labels -> new slots
    pb = _perm_of_map({xb: 0, yb: 1, zb: 3, fb: 2})   # tb labels -> new slots
    gl[ta][fa] = (n, 3, pa)
    gl[n][3] = (ta, fa, invert(pa))
    gl[tb][fb] = (n, 2, pb)
    gl[n][2] = (tb, fb, invert(pb))
    slot_map = {(tt, e): (tt, e) for tt in range(n) for e in range(6)}
    ia = invert(pa)
    ib = invert(pb)
    for e in range(6):
        a, b = TET_EDGES[e]
        if 3 not in (a, b):
            slot_map[(n, e)] = (ta, EDGE_INDEX[(ia[a], ia[b])])
        elif 2 not in (a, b):
            slot_map[(n, e)] = (tb, EDGE_INDEX[(ib[a], ib[b])])
        else:
            slot_map[(n, e)] = None     # the new boundary diagonal
    return _transfer_orders(tri, gl, slot_map)


def attach_three(tri, slots, vertex_labels):
    """Cap a boundary vertex of boundary degree three: glue one tetrahedron
    onto the three boundary faces around it.

    slots = [(t0,f0),(t1,f1),(t2,f2)] in cyclic order around the vertex, and
    vertex_labels = the label of the capped vertex in each slot.  The three
    faces must be pairwise distinct and consecutive ones must share the
    boundary edges at the vertex.
    """
    if len(set(slots)) != 3:
        return None
    for (t, f) in slots:
        if tri.gluings[t][f] is not None:
            return None
    # Determine the identification of consecutive faces along their shared
    # boundary edge at the vertex: walk the boundary around the vertex.
    maps = _boundary_vertex_maps(tri, slots, vertex_labels)
    if maps is None:
        return None
    n = tri.tet_count
    gl = [list(x) for x in tri.gluings] + [[None] * 4]
    # New tet: slot 3 = capped vertex image; slots 0,1,2 = the three outer
    # boundary vertices, one per face.
    for i, (t, f) in enumerate(slots):
        pm = maps[i]
        gl[t][f] = (n, pm[f], pm)
        gl[n][pm[f]] = (t, f, invert(pm))
    slot_map = {(tt, e): (tt, e) for tt in range(n) for e in range(6)}
    for e in range(6):
        slot_map[(n, e)] = None
    for i, (t, f) in enumerate(slots):
        pm = invert(maps[i])
        for e in range(6):
            a, b = TET_EDGES[e]
            if pm[a] != f and pm[b] != f:
                slot_map[(n, e)] = (t, EDGE_INDEX[(pm[a], pm[b])])
    return _transfer_orders(tri, gl, slot_map)


def _boundary_vertex_maps(tri, slots, vertex_labels):
    # maps[i]: labels of slots[i] -> new tet slots, sending the capped vertex
    # to 3 and face i to the new face opposite outer vertex i.
    out = []
    for i in range(3):
        t, f = slots[i]
        v = vertex_labels[i]
        if v == f or v not in FACE_VERTICES[f]:
            return None
        others = [u for u in FACE_VERTICES[f] if u != v]
        # Identify which other vertex is shared with the previous/next slot
        # by walking the boundary edges at v.
        nxt = _boundary_step(tri, t, f, v, others[0])
        if nxt == (slots[(i + 1) % 3][0], slots[(i + 1) % 3][1]):
            lead, trail = others[0], others[1]
        else:
            nxt2 = _boundary_step(tri, t, f, v, others[1])
            if nxt2 != (slots[(i + 1) % 3][0], slots[(i + 1) % 3][1]):
                return None
            lead, trail = others[1], others[0]
        # lead vertex sits between face i and face i+1: give it outer slot
        # (i+2)%3 so that shared edges match up; trail between i-1 and i.
        m = {v: 3, lead: (i + 2) % 3, trail: (i + 1) % 3, f: i}
        out.append(_perm_of_map(m))
    return out


def _boundary_step(tri, t, f, v, u):
    """From boundary face (t,f), cross the boundary edge (v,u) to the next
    boundary face around it; returns its slot (possibly (t,f) itself when
    the face meets the edge cell twice)."""
    # Rotate through interior gluings around edge (v,u) until hitting an
    # unglued face; boundary edges always terminate the rotation.
    tt, ff = t, f
    vv, uu = v, u
    cross = [w for w in range(4) if w not in (vv, uu, ff)][0]
    steps = 0
    while True:
        g = tri.gluings[tt][cross]
        if g is None:
            return (tt, cross)
        t2, f2, p = g
        vv, uu, ff = p[vv], p[uu], p[cross]
        tt = t2
        cross = [w for w in range(4) if w not in (vv, uu, ff)][0]
        steps += 1
        if steps > 6 * tri.tet_count:
            raise AssertionError("rotation around a boundary edge does not terminate")


# -- simplification -----------------------------------------------------------


def greedy_simplify(tri):
    """Apply 3-2 and 2-0 moves until none applies; monotonically decreasing."""
    cur = tri
    progress = True
    while progress:
        progress = False
        for c in range(len(cur.edge_classes)):
            deg = len(cur.edge_classes[c])
            if deg == 3:
                nxt = three_two(cur, c)
                if nxt is not None:
                    cur = nxt
                    progress = True
                    break
            elif deg == 2:
                nxt = two_zero(cur, c)
                if nxt is not None:
                    cur = nxt
                    progress = True
                    break
    return cur


def simplify(tri, rounds=150, seed=0, stop_at=1):
    """Greedy descent with randomized 2-3 escapes.

    Escapes are biased towards faces of tetrahedra carrying low-degree edges
    (the configurations whose direct moves were refused); the walk explores
    plateaus and periodically restarts from the best triangulation seen.
    """
    rng = random.Random(seed)
    cur = greedy_simplify(tri)
    best = cur
    stall = 0
    for _ in range(rounds):
        if best.tet_count <= stop_at:
            break
        nxt = cur
        lowdeg_tets = set()
        for slots in nxt.edge_classes:
            if len(slots) <= 3:
                for (t, _e) in slots:
                    lowdeg_tets.add(t)
        for _ in range(rng.randrange(1, 4)):
            choices = [(t, f) for t in range(nxt.tet_count) for f in range(4)
                       if nxt.gluings[t][f] is not None and nxt.gluings[t][f][0] != t]
            if not choices:
                break
            pref = [tf for tf in choices if tf[0] in lowdeg_tets]
            pool = pref if pref and rng.random() < 0.8 else choices
            t, f = pool[rng.randrange(len(pool))]
            stepped = two_three(nxt, t, f)
            if stepped is not None:
                nxt = stepped
        nxt = greedy_simplify(nxt)
        if nxt.tet_count < best.tet_count:
            best = nxt
            cur = nxt
            stall = 0
        else:
            stall += 1
            if nxt.tet_count <= cur.tet_count:
                cur = nxt
            if stall >= 25:
                cur = best
                stall = 0
    return best
