"""Cutting a closed decorated triangulation along a normal surface.

The surface discs divide each tetrahedron into chambers: corner chambers
between parallel triangles and slabs between parallel quads.  Each chamber
is a ball whose boundary consists of face regions (shared with the chamber
on the other side of a face gluing) and surface discs (which become free
boundary after the cut).  Every boundary polygon is fanned from its first
vertex and each chamber is coned from an interior point; face regions are
fanned once per face class, so the two sides match triangle by triangle and
the whole assembly is a triangulation of the cut-open manifold.

Polygon sides are matched slot-locally: within the chamber of tetrahedron t,
a segment of an edge of t bounds exactly the two face regions of t at that
edge, and an arc on a face of t bounds one region and one disc on the t
side, even when the ambient edge or face class returns to the same chamber
several times.

Singular edges survive as chains of segments between consecutive crossing
points, each segment carrying the original cone order; the boundary spheres
thus carry cone points exactly where the surface crossed singular edges.
"""

from .orbtri import OrbifoldTriangulation
from .perm import TET_EDGES, EDGE_INDEX, FACE_VERTICES, invert
from . import normal as nm


def _points_on(tri, vec, t, e):
    return nm._corner_count(tri, vec, t, e)


def _pt(tri, vec, t, a, b, j):
    """The j-th crossing point on edge (a,b) counted from a, as a point id
    ('p', t, e, r) with r counted from the smaller label."""
    e = EDGE_INDEX[(a, b)]
    m = _points_on(tri, vec, t, e)
    r = j if a < b else m - 1 - j
    return ("p", t, e, r)


class _Side:
    """One side of a boundary polygon, in slot-local terms.

    Arc sides: key ('arc', t, f, v, j); forward means the polygon traverses
    the side from its endpoint on the lower of the two edges of face f at v.
    Segment sides: key ('seg', t, e, r) (the r-th inter-crossing segment from
    the smaller label); forward means traversal with ascending labels.
    """

    __slots__ = ("key", "forward")

    def __init__(self, key, forward):
        self.key = key
        self.forward = bool(forward)


def _arc_side(t, f, v, j, tail_label):
    o1 = min(u for u in FACE_VERTICES[f] if u != v)
    return _Side(("arc", t, f, v, j), tail_label == o1)


def _translate_side(tri, vec, side, t, f):
    """Translate a side living on face slot (t, f) through its gluing."""
    t2, f2, p = tri.gluings[t][f]
    key = side.key
    if key[0] == "arc":
        _, tt, ff, v, j = key
        assert (tt, ff) == (t, f)
        others = sorted(u for u in FACE_VERTICES[f] if u != v)
        flipped = p[others[0]] > p[others[1]]
        return _Side(("arc", t2, f2, p[v], j), side.forward ^ flipped)
    _, tt, e, r = key
    assert tt == t
    a, b = TET_EDGES[e]
    a2, b2 = p[a], p[b]
    e2 = EDGE_INDEX[(a2, b2)]
    if a2 < b2:
        return _Side(("seg", t2, e2, r), side.forward)
    m = _points_on(tri, vec, t, e)
    return _Side(("seg", t2, e2, m - r), not side.forward)


class _Cut:
    def __init__(self, tri, vec):
        if not tri.is_closed:
            raise ValueError("cut_along expects a closed triangulation")
        self.tri = tri
        self.vec = tuple(vec)
        if not nm.matching_check(tri, self.vec):
            raise nm.InvalidCoordinates("coordinates fail the matching equations")
        self.points = {}         # polygon id -> point list
        self.sides = {}          # polygon id -> list of _Side (rep/own slot)

    def _seg_side(self, t, a, b, j):
        """Segment j counted from vertex a on edge (a,b), traversed away
        from a."""
        e = EDGE_INDEX[(a, b)]
        m = _points_on(self.tri, self.vec, t, e)
        r = j if a < b else m - j
        return _Side(("seg", t, e, r), a < b)

    # -- polygons ----------------------------------------------------------------

    def _region_polys(self):
        """Face-region polygons per face class, built on the representative
        slot, with the chambers behind the two instances (instance 0 = rep
        side, 1 = partner side)."""
        tri, vec = self.tri, self.vec
        out = []
        for i, fc in enumerate(tri.face_classes):
            t, f = fc[0]
            t2, f2, p = tri.gluings[t][f]
            for v in FACE_VERTICES[f]:
                cnt = nm.arc_count(vec, t, f, v)
                o1, o2 = sorted(u for u in FACE_VERTICES[f] if u != v)
                for j in range(cnt):
                    pid = ("R", i, v, j)
                    if j == 0:
                        pts = [("v", t, v),
                               _pt(tri, vec, t, v, o1, 0),
                               _pt(tri, vec, t, v, o2, 0)]
                        sides = [self._seg_side(t, v, o1, 0),
                                 _arc_side(t, f, v, 0, o1),
                                 _rev(self._seg_side(t, v, o2, 0))]
                    else:
                        pts = [_pt(tri, vec, t, v, o1, j - 1),
                               _pt(tri, vec, t, v, o1, j),
                               _pt(tri, vec, t, v, o2, j),
                               _pt(tri, vec, t, v, o2, j - 1)]
                        sides = [self._seg_side(t, v, o1, j),
                                 _arc_side(t, f, v, j, o1),
                                 _rev(self._seg_side(t, v, o2, j)),
                                 _arc_side(t, f, v, j - 1, o2)]
                    ca = nm._face_region_chamber(tri, vec, t, f, v, j)
                    cb = nm._face_region_chamber(tri, vec, t2, f2, p[v], j)
                    out.append((pid, pts, sides, (t, f), ca, cb))
            # Central region.
            pts = []
            sides = []
            fv = sorted(FACE_VERTICES[f])
            for k in range(3):
                v0 = fv[k]
                v1 = fv[(k + 1) % 3]
                vp = fv[(k - 1) % 3]
                cnt = nm.arc_count(vec, t, f, v0)
                if cnt > 0:
                    pts.append(_pt(tri, vec, t, v0, vp, cnt - 1))
                    pts.append(_pt(tri, vec, t, v0, v1, cnt - 1))
                    sides.append(_arc_side(t, f, v0, cnt - 1, vp))
                else:
                    pts.append(("v", t, v0))
                sides.append(self._seg_side(t, v0, v1, cnt))
            pid = ("C", i)
            ca = nm._central_chamber(tri, vec, t, f)
            cb = nm._central_chamber(tri, vec, t2, f2)
            out.append((pid, pts, sides, (t, f), ca, cb))
        return out

    def _disc_polys(self):
        tri, vec = self.tri, self.vec
        out = []
        for piece in nm._pieces(tri, vec):
            t, kind, idx = piece
            if kind == "tri":
                v, i = idx
                others = sorted(u for u in range(4) if u != v)
                pts = [_pt(tri, vec, t, v, u, i) for u in others]
                sides = []
                for k in range(3):
                    u0, u1 = others[k], others[(k + 1) % 3]
                    ff = [x for x in range(4) if x not in (v, u0, u1)][0]
                    j = nm._piece_arc_index(tri, vec, t, ff, v, piece)
                    sides.append(_arc_side(t, ff, v, j, u0))
            else:
                q, kq = idx
                (x, y), (z, w) = nm.QUAD_PAIRS[q]
                cyc = [(x, z), (z, y), (y, w), (w, x)]
                pts = []
                for (a, b) in cyc:
                    aa, bb = (a, b) if a in (x, y) else (b, a)
                    pts.append(_pt(tri, vec, t, aa, bb,
                                   vec[nm.tri_index(t, aa)] + kq))
                sides = []
                for s in range(4):
                    e1 = set(cyc[s])
                    e2 = set(cyc[(s + 1) % 4])
                    three = e1 | e2
                    ff = [a for a in range(4) if a not in three][0]
                    vcut = (e1 & e2).pop()
                    j = nm._piece_arc_index(tri, vec, t, ff, vcut, piece)
                    tail_other = (e1 - {vcut}).pop()
                    sides.append(_arc_side(t, ff, vcut, j, tail_other))
            below, above = nm._disc_sides(tri, vec, piece)
            out.append((("D", piece), pts, sides, below, above))
        return out

    # -- assembly ----------------------------------------------------------------

    def build(self):
        tri, vec = self.tri, self.vec
        instances = {}           # chamber -> list of (pid, inst)
        inst_sides = {}          # (pid, inst) -> list of _Side (slot-local)
        pair_glue = []
        for (pid, pts, sides, slot, ca, cb) in self._region_polys():
            self.points[pid] = pts
            self.sides[pid] = sides
            instances.setdefault(ca, []).append((pid, 0))
            instances.setdefault(cb, []).append((pid, 1))
            inst_sides[(pid, 0)] = sides
            inst_sides[(pid, 1)] = [_translate_side(tri, vec, s, slot[0], slot[1])
                                    for s in sides]
            pair_glue.append((ca, (pid, 0), cb, (pid, 1)))
        for (pid, pts, sides, below, above) in self._disc_polys():
            self.points[pid] = pts
            self.sides[pid] = sides
            instances.setdefault(below, []).append((pid, 0))
            instances.setdefault(above, []).append((pid, 1))
            inst_sides[(pid, 0)] = sides
            inst_sides[(pid, 1)] = sides

        tets = []
        tet_index = {}
        for chamber in sorted(instances):
            for inst in instances[chamber]:
                k = len(self.points[inst[0]])
                for fan in range(k - 2):
                    tet_index[(chamber, inst, fan)] = len(tets)
                    tets.append((chamber, inst, fan))
        gl = [[None] * 4 for _ in tets]

        def join(a, fa, b, perm):
            assert gl[a][fa] is None and gl[b][perm[fa]] is None
            gl[a][fa] = (b, perm[fa], perm)
            gl[b][perm[fa]] = (a, fa, invert(perm))

        for chamber in sorted(instances):
            for inst in instances[chamber]:
                k = len(self.points[inst[0]])
                for fan in range(k - 3):
                    a = tet_index[(chamber, inst, fan)]
                    b = tet_index[(chamber, inst, fan + 1)]
                    join(a, 2, b, (0, 1, 3, 2))

        seg_orders = []
        for chamber in sorted(instances):
            registry = {}
            for inst in instances[chamber]:
                pid = inst[0]
                k = len(self.points[pid])
                for s in range(k):
                    side = inst_sides[inst][s]
                    fan, face, tail_slot, head_slot = _side_location(k, s)
                    if not side.forward:
                        tail_slot, head_slot = head_slot, tail_slot
                    entry = (tet_index[(chamber, inst, fan)], face,
                             tail_slot, head_slot)
                    registry.setdefault(side.key, []).append(entry)
                    if side.key[0] == "seg":
                        c = tri.edge_class_of[(side.key[1], side.key[2])]
                        p = tri.edge_orders[c]
                        if p > 1:
                            seg_orders.append((entry[0],
                                               EDGE_INDEX[(tail_slot, head_slot)], p))
            for key, occ in sorted(registry.items()):
                if len(occ) != 2:
                    raise AssertionError("side %s seen %d times in chamber %s"
                                         % (key, len(occ), chamber))
                (a, fa, ta, ha), (b, fb, tb, hb) = occ
                mapping = {0: 0, ta: tb, ha: hb}
                ra = [x for x in range(4) if x not in mapping][0]
                rb = [x for x in range(4) if x not in mapping.values()][0]
                mapping[ra] = rb
                perm = tuple(mapping[i] for i in range(4))
                assert perm[fa] == fb, (key, occ)
                join(a, fa, b, perm)

        for (ca, insta, cb, instb) in pair_glue:
            k = len(self.points[insta[0]])
            for fan in range(k - 2):
                a = tet_index[(ca, insta, fan)]
                b = tet_index[(cb, instb, fan)]
                join(a, 0, b, (0, 1, 2, 3))

        out = OrbifoldTriangulation(gl)
        orders = {}
        for (ti, e, p) in seg_orders:
            c = out.edge_class_of[(ti, e)]
            if orders.get(c, p) != p:
                raise AssertionError("conflicting segment orders")
            orders[c] = p
        return out.with_orders(orders)


def _rev(side):
    return _Side(side.key, not side.forward)


def _side_location(k, s):
    """(fan index, tet face, tail slot, head slot) of polygon side s when
    the polygon has k vertices and side s runs p_s -> p_{s+1}."""
    if s == 0:
        return 0, 3, 1, 2
    if s <= k - 2:
        return s - 1, 1, 2, 3
    return k - 3, 2, 3, 1


def cut_along(tri, vec):
    """Cut tri along the normal surface with coordinates vec; returns one
    bounded triangulation containing all the pieces."""
    return _Cut(tri, vec).build()


def split_components(tri):
    """Connected components as separate triangulations, orders transported."""
    n = tri.tet_count
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            t = stack.pop()
            comp.append(t)
            for f in range(4):
                g = tri.gluings[t][f]
                if g is not None and not seen[g[0]]:
                    seen[g[0]] = True
                    stack.append(g[0])
        comp.sort()
        reindex = {t: i for i, t in enumerate(comp)}
        gl = []
        for t in comp:
            row = []
            for f in range(4):
                g = tri.gluings[t][f]
                row.append(None if g is None else (reindex[g[0]], g[1], g[2]))
            gl.append(row)
        sub = OrbifoldTriangulation(gl)
        orders = {}
        for t in comp:
            for e in range(6):
                c = tri.edge_class_of[(t, e)]
                p = tri.edge_orders[c]
                if p > 1:
                    orders[sub.edge_class_of[(reindex[t], e)]] = p
        out.append(sub.with_orders(orders))
    return out
