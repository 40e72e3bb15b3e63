"""Normal 2-suborbifolds in triangle/quad coordinates.

A normal surface assigns to each tetrahedron four triangle weights (one per
vertex) and three quad weights (one per partition of the vertices into
pairs), all non-negative integers.  On a face, the arcs cutting off vertex v
number tri(v) + quad(q) where q is the quad type pairing v with the face
label; the matching equations equate these counts across every face gluing,
and an embedded surface has at most one nonzero quad type per tetrahedron.

Vertex solutions are the extremal rays of the matching cone, computed by the
double description method in exact integer arithmetic and filtered by the
quad condition.  Reconstruction assembles the quotient cell complex of a
solution: its components, their Euler characteristics and orientability,
the cone points inherited from crossings with singular edges, and a
separating flag obtained by two-colouring the complementary chambers.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .orbtri import OrbifoldTriangulation, _UnionFind
from .perm import TET_EDGES, EDGE_INDEX, FACE_VERTICES
from .twoorb import TwoOrbifold, classify, TwoOrbClass


class InvalidCoordinates(Exception):
    pass


class NotSeparating(Exception):
    pass


class BoundExceeded(Exception):
    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


# Quad type q separates PAIRS[q][0] from PAIRS[q][1]; QPAIR[(a,b)] is the
# type pairing vertices a and b.
QUAD_PAIRS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
QPAIR = {}
for _q, (_p1, _p2) in enumerate(QUAD_PAIRS):
    for (_a, _b) in (_p1, _p2):
        QPAIR[(_a, _b)] = _q
        QPAIR[(_b, _a)] = _q


def coord_size(tri):
    return 7 * tri.tet_count


def tri_index(t, v):
    return 7 * t + v


def quad_index(t, q):
    return 7 * t + 4 + q


def arc_count(vec, t, f, v):
    """Arcs on face f of tetrahedron t cutting off vertex v."""
    return vec[tri_index(t, v)] + vec[quad_index(t, QPAIR[(v, f)])]


def matching_equations(tri):
    """One equation per (face class, face vertex): the two sides of a gluing
    see the same arc counts.  Rows are integer coefficient vectors."""
    n = coord_size(tri)
    rows = []
    for fc in tri.face_classes:
        if len(fc) != 2:
            continue
        (t, f) = fc[0]
        t2, f2, p = tri.gluings[t][f]
        for v in FACE_VERTICES[f]:
            row = [0] * n
            row[tri_index(t, v)] += 1
            row[quad_index(t, QPAIR[(v, f)])] += 1
            row[tri_index(t2, p[v])] -= 1
            row[quad_index(t2, QPAIR[(p[v], f2)])] -= 1
            if any(row):
                rows.append(tuple(row))
    return rows


def quad_condition(vec, tet_count):
    for t in range(tet_count):
        if sum(1 for q in range(3) if vec[quad_index(t, q)] > 0) > 1:
            return False
    return True


def matching_check(tri, vec):
    """True iff vec satisfies the matching equations and the quad condition."""
    if len(vec) != coord_size(tri):
        raise InvalidCoordinates("expected %d coordinates" % coord_size(tri))
    if any(x < 0 for x in vec):
        raise InvalidCoordinates("negative normal coordinate")
    for row in matching_equations(tri):
        if sum(a * x for a, x in zip(row, vec)) != 0:
            return False
    return quad_condition(vec, tri.tet_count)


def vertex_link_coords(tri, vclass):
    """The normal coordinates of the link sphere of a vertex class."""
    vec = [0] * coord_size(tri)
    for (t, v) in tri.vertex_classes[vclass]:
        vec[tri_index(t, v)] += 1
    return tuple(vec)


def _primitive(vec):
    g = 0
    for x in vec:
        g = math.gcd(g, x)
    return tuple(x // g for x in vec) if g > 1 else tuple(vec)


def vertex_solutions(tri, bound=4096):
    """All extremal rays of the matching cone with admissible quad patterns,
    as primitive integer points in deterministic order.

    Double description: start from the coordinate rays of the non-negative
    orthant and intersect with one matching hyperplane at a time, combining
    adjacent positive/negative pairs; adjacency is the standard zero-set
    test.  Raises BoundExceeded when the intermediate ray count passes the
    given bound.
    """
    n = coord_size(tri)
    rows = sorted(set(matching_equations(tri)))
    rays = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    full = (1 << n) - 1

    def zeroset(r):
        m = 0
        for i, x in enumerate(r):
            if x == 0:
                m |= 1 << i
        return m

    for row in rows:
        pos, neg, zero = [], [], []
        for r in rays:
            s = sum(a * x for a, x in zip(row, r))
            (pos if s > 0 else neg if s < 0 else zero).append((r, s))
        new_rays = [r for r, _ in zero]
        zsets = {r: zeroset(r) for r in rays}
        for rp, sp in pos:
            for rn, sn in neg:
                common = zsets[rp] & zsets[rn]
                adjacent = True
                for r3 in rays:
                    if r3 is rp or r3 is rn:
                        continue
                    if common & ~zsets[r3] == 0:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                comb = tuple(sp * bn - sn * bp for bp, bn in zip(rp, rn))
                new_rays.append(_primitive(comb))
        rays = list(dict.fromkeys(new_rays))
        if len(rays) > bound:
            raise BoundExceeded("double description exceeded %d rays" % bound,
                                sorted(rays))
    admissible = [r for r in rays if quad_condition(r, tri.tet_count)]
    return sorted(admissible)


# -- reconstruction -------------------------------------------------------------

@dataclass
class NormalComponent:
    pieces: list             # (tet, kind, index) with kind 'tri' (v) or 'quad' (q)
    chi: int
    orientable: bool
    cone_orders: tuple
    separating: bool

    @property
    def two_orbifold(self):
        if not self.orientable:
            return None
        return TwoOrbifold((2 - self.chi) // 2, self.cone_orders)

    @property
    def classification(self) -> TwoOrbClass:
        if not self.orientable:
            return TwoOrbClass("Other")
        return classify(self.two_orbifold)


@dataclass
class NormalSurface:
    coords: tuple
    components: list         # NormalComponent
    edge_crossings: dict     # edge class -> intersection count

    def component_coords(self, i):
        vec = [0] * len(self.coords)
        for (t, kind, idx) in self.components[i].pieces:
            if kind == "tri":
                vec[tri_index(t, idx[0])] += 1
            else:
                vec[quad_index(t, idx[0])] += 1
        return tuple(vec)


def _pieces(tri, vec):
    out = []
    for t in range(tri.tet_count):
        for v in range(4):
            for i in range(vec[tri_index(t, v)]):
                out.append((t, "tri", (v, i)))
        for q in range(3):
            for i in range(vec[quad_index(t, q)]):
                out.append((t, "quad", (q, i)))
    return out


def _arc_piece(tri, vec, t, f, v, j):
    """The piece owning the j-th arc (counted from v) of type (f, v): the
    triangles at v come first, then the quads of the type pairing v with f,
    ordered from the A-pair edge of the quad stack."""
    nt = vec[tri_index(t, v)]
    if j < nt:
        return (t, "tri", (v, j))
    q = QPAIR[(v, f)]
    k = j - nt
    a_pair = QUAD_PAIRS[q][0]
    if v in a_pair:
        return (t, "quad", (q, k))
    return (t, "quad", (q, vec[quad_index(t, q)] - 1 - k))


def _piece_arc_index(tri, vec, t, f, v, piece):
    """Inverse of _arc_piece: which arc slot of type (f,v) does this piece
    use on face f."""
    _, kind, idx = piece
    if kind == "tri":
        return idx[1]
    q, k = idx
    nt = vec[tri_index(t, v)]
    a_pair = QUAD_PAIRS[q][0]
    if v in a_pair:
        return nt + k
    return nt + vec[quad_index(t, q)] - 1 - k


def _corner_count(tri, vec, t, e):
    a, b = TET_EDGES[e]
    q1, q2 = [q for q in range(3) if QPAIR[(a, b)] != q]
    return (vec[tri_index(t, a)] + vec[tri_index(t, b)]
            + vec[quad_index(t, q1)] + vec[quad_index(t, q2)])


def reconstruct(tri, vec):
    """Assemble the quotient surface of a matching admissible coordinate
    vector: components with chi, orientability, cone orders and separating
    flags, plus the per-edge-class crossing counts."""
    vec = tuple(vec)
    if not matching_check(tri, vec):
        raise InvalidCoordinates("coordinates fail the matching equations")
    pieces = _pieces(tri, vec)
    pidx = {p: i for i, p in enumerate(pieces)}

    # Glue pieces across face gluings: arc j of type (f, v) matches arc j of
    # type (f2, p[v]) on the partner face.
    uf = _UnionFind(len(pieces))
    arc_links = []           # ((piece, side), (piece2, side2)) used for chi
    for fc in tri.face_classes:
        if len(fc) != 2:
            continue
        t, f = fc[0]
        t2, f2, p = tri.gluings[t][f]
        for v in FACE_VERTICES[f]:
            cnt = arc_count(vec, t, f, v)
            for j in range(cnt):
                p1 = _arc_piece(tri, vec, t, f, v, j)
                p2 = _arc_piece(tri, vec, t2, f2, p[v], j)
                uf.union(pidx[p1], pidx[p2])
                arc_links.append((p1, (t, f, v, j), p2))

    comp_of_piece = {}
    comps = {}
    for p in pieces:
        root = uf.find(pidx[p])
        comp_of_piece[p] = root
        comps.setdefault(root, []).append(p)

    # Euler characteristic via quotient cells: faces are pieces, edges are
    # glued arc pairs, vertices are crossing points on edge classes.
    narcs = {root: 0 for root in comps}
    for (p1, _slot, _p2) in arc_links:
        narcs[comp_of_piece[p1]] += 1
    crossings = {}
    point_comp = {}
    for c, slots in enumerate(tri.edge_classes):
        t, e = slots[0]
        m = _corner_count(tri, vec, t, e)
        crossings[c] = m
        for r in range(m):
            pc = _point_piece(tri, vec, t, e, r)
            point_comp[(c, r)] = comp_of_piece[pc]
    nverts = {root: 0 for root in comps}
    for (c, r), root in point_comp.items():
        nverts[root] += 1

    # Orientability: transverse orientation as a parity union-find; a
    # component is 2-sided (hence orientable here) iff no parity clash.
    par = _ParityUF(len(pieces))
    ok_orient = {root: True for root in comps}
    for (p1, slot, p2) in arc_links:
        t, f, v, j = slot
        flip = _side_flip(p1, v, f) ^ _side_flip(p2, tri.gluings[t][f][2][v],
                                                 tri.gluings[t][f][1])
        if not par.union(pidx[p1], pidx[p2], flip):
            ok_orient[comp_of_piece[p1]] = False

    roots = sorted(comps)
    components = []
    for root in roots:
        chi = nverts[root] - narcs[root] + len(comps[root])
        cones = tuple(sorted(tri.edge_orders[c]
                             for (c, r), rt in point_comp.items()
                             if rt == root and tri.edge_orders[c] >= 2))
        components.append(NormalComponent(sorted(comps[root]), chi,
                                          ok_orient[root], cones, False))
    surf = NormalSurface(vec, components, crossings)
    _mark_separating(tri, vec, surf, comp_of_piece, roots)
    return surf


def _point_piece(tri, vec, t, e, r):
    """The piece whose corner is the r-th crossing point on edge slot (t,e),
    counted from the smaller-labelled end."""
    a, b = TET_EDGES[e]
    na = vec[tri_index(t, a)]
    nb = vec[tri_index(t, b)]
    if r < na:
        return (t, "tri", (a, r))
    if r >= _corner_count(tri, vec, t, e) - nb:
        return (t, "tri", (b, _corner_count(tri, vec, t, e) - 1 - r))
    # Quad corners, ordered along the edge from a to b: the quad type whose
    # A-pair contains a comes K-then... only one quad type is nonzero.
    k = r - na
    for q in range(3):
        if QPAIR[(a, b)] == q or vec[quad_index(t, q)] == 0:
            continue
        a_pair = QUAD_PAIRS[q][0]
        nq = vec[quad_index(t, q)]
        if k < nq:
            kk = k if a in a_pair else nq - 1 - k
            return (t, "quad", (q, kk))
        k -= nq
    raise AssertionError("crossing index out of range")


def _side_flip(piece, v, f):
    """0/1 parity describing which side of the arc of type (f, v) the
    canonical positive side of the piece lies on; the canonical side of a
    triangle is its vertex side, of a quad its A-pair side."""
    _t, kind, idx = piece
    if kind == "tri":
        return 0
    q, _k = idx
    return 0 if v in QUAD_PAIRS[q][0] else 1


class _ParityUF:
    def __init__(self, n):
        self.parent = list(range(n))
        self.par = [0] * n

    def find(self, x):
        if self.parent[x] == x:
            return x, 0
        root, p = self.find(self.parent[x])
        self.parent[x] = root
        self.par[x] ^= p
        return root, self.par[x]

    def union(self, x, y, flip):
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            return (px ^ py) == flip
        self.parent[rx] = ry
        self.par[rx] = px ^ py ^ flip
        return True


# -- complementary chambers (separating test) ----------------------------------

def _chambers(tri, vec):
    """Chamber identifiers per tetrahedron and the maps needed to walk the
    complement of the surface.

    Chambers: ('c', t, v, i) between triangles i-1 and i at vertex v (i=0 is
    the corner), ('s', t, k) the central slabs between consecutive quads
    (k = 0..Q, a single slab when Q = 0).
    """
    chambers = []
    for t in range(tri.tet_count):
        for v in range(4):
            for i in range(vec[tri_index(t, v)]):
                chambers.append(("c", t, v, i))
        qt = _quad_type(tri, vec, t)
        nq = vec[quad_index(t, qt)] if qt is not None else 0
        for k in range(nq + 1):
            chambers.append(("s", t, k))
    return chambers


def _quad_type(tri, vec, t):
    for q in range(3):
        if vec[quad_index(t, q)] > 0:
            return q
    return None


def _face_region_chamber(tri, vec, t, f, v, i):
    """Chamber on the t-side of the face region between arcs i-1 and i of
    type (f, v); i = arcs(f,v) means the central region beyond the last arc
    (only used through _central_chamber)."""
    nt = vec[tri_index(t, v)]
    if i < nt:
        return ("c", t, v, i)
    qt = _quad_type(tri, vec, t)
    k = i - nt
    nq = vec[quad_index(t, qt)] if qt is not None else 0
    if qt is None or QPAIR[(v, f)] != qt:
        assert k == 0
        return ("s", t, 0)
    a_pair = QUAD_PAIRS[qt][0]
    if v in a_pair:
        return ("s", t, k)
    return ("s", t, nq - k)


def _central_chamber(tri, vec, t, f):
    """Chamber behind the central region of face (t, f): past all the quad
    arcs, which sit in the last slab for A-pair faces and the first for
    B-pair faces."""
    qt = _quad_type(tri, vec, t)
    if qt is None:
        return ("s", t, 0)
    nq = vec[quad_index(t, qt)]
    if f in QUAD_PAIRS[qt][0]:
        return ("s", t, nq)
    return ("s", t, 0)


def _disc_sides(tri, vec, piece):
    """The two chambers on either side of a disc piece."""
    t, kind, idx = piece
    if kind == "tri":
        v, i = idx
        nt = vec[tri_index(t, v)]
        inner = ("c", t, v, i)
        if i + 1 < nt:
            outer = ("c", t, v, i + 1)
        else:
            qt = _quad_type(tri, vec, t)
            if qt is None:
                outer = ("s", t, 0)
            else:
                nq = vec[quad_index(t, qt)]
                outer = ("s", t, 0) if v in QUAD_PAIRS[qt][0] else ("s", t, nq)
        return inner, outer
    q, k = idx
    return ("s", t, k), ("s", t, k + 1)


def _mark_separating(tri, vec, surf, comp_of_piece, roots):
    """Two-colour the chambers for each component: crossing any other
    component's discs is allowed, crossing this component's is not."""
    chambers = _chambers(tri, vec)
    cidx = {c: i for i, c in enumerate(chambers)}
    face_links = []
    for fc in tri.face_classes:
        if len(fc) != 2:
            continue
        t, f = fc[0]
        t2, f2, p = tri.gluings[t][f]
        for v in FACE_VERTICES[f]:
            cnt = arc_count(vec, t, f, v)
            for i in range(cnt):
                face_links.append((_face_region_chamber(tri, vec, t, f, v, i),
                                   _face_region_chamber(tri, vec, t2, f2, p[v], i)))
        face_links.append((_central_chamber(tri, vec, t, f),
                           _central_chamber(tri, vec, t2, f2)))
    disc_links = []
    for i, comp in enumerate(surf.components):
        for piece in comp.pieces:
            disc_links.append((i, _disc_sides(tri, vec, piece)))

    for i, comp in enumerate(surf.components):
        uf = _UnionFind(len(chambers))
        for (a, b) in face_links:
            uf.union(cidx[a], cidx[b])
        for (j, (a, b)) in disc_links:
            if j != i:
                uf.union(cidx[a], cidx[b])
        classes = {uf.find(k) for k in range(len(chambers))}
        comp.separating = len(classes) >= 2


# -- brute-force oracle ---------------------------------------------------------

def admissible_points_upto(tri, maxcoord):
    """Every admissible matching integer point with all entries <= maxcoord,
    by meet-in-the-middle over per-tetrahedron vectors.  Exponential; only
    for small oracle sweeps."""
    tets = tri.tet_count
    per_tet = []
    for t in range(tets):
        vecs = []
        for tri_w in _tuples(4, maxcoord):
            for q in range(4):
                if q == 3:
                    vecs.append(tri_w + (0, 0, 0))
                else:
                    for w in range(1, maxcoord + 1):
                        quad = [0, 0, 0]
                        quad[q] = w
                        vecs.append(tri_w + tuple(quad))
        per_tet.append(vecs)
    rows = matching_equations(tri)
    sols = []
    _search(per_tet, rows, 0, [None] * tets, sols, tets)
    return sorted(set(sols))


def _tuples(k, m):
    if k == 0:
        yield ()
        return
    for rest in _tuples(k - 1, m):
        for x in range(m + 1):
            yield (x,) + rest


def _search(per_tet, rows, t, chosen, sols, tets):
    if t == tets:
        vec = tuple(x for tet in chosen for x in tet)
        if all(sum(a * x for a, x in zip(row, vec)) == 0 for row in rows):
            if any(vec):
                sols.append(vec)
        return
    for v in per_tet[t]:
        chosen[t] = v
        # Prune with equations fully supported on decided tetrahedra.
        ok = True
        for row in rows:
            support = {i // 7 for i, a in enumerate(row) if a != 0}
            if support and max(support) <= t:
                s = 0
                for i, a in enumerate(row):
                    if a != 0:
                        s += a * chosen[i // 7][i % 7]
                if s != 0:
                    ok = False
                    break
        if ok:
            _search(per_tet, rows, t + 1, chosen, sols, tets)
    chosen[t] = None


# -- essentiality ---------------------------------------------------------------

ESSENTIAL = "Essential"
INESSENTIAL = "Inessential"
UNKNOWN = "Unknown"


def is_essential_sphere(tri, surf, component=0, seed=0, rounds=25):
    """Decide whether a separating spherical component bounds a discal
    orbifold.

    The triangulation is cut along the component and both sides are capped;
    the sphere is inessential iff some capped side is the spherical orbifold
    of the same type (the double of the discal ball it would bound).
    Sides are compared against the certified models: an invariant mismatch
    certifies non-discal, a signature meet certifies discal, and the verdict
    is Unknown when the bounded search is inconclusive on some side.
    """
    from . import surgery
    from . import cutting
    from . import recognize
    from .spine import ExceptionalKind

    comp = surf.components[component]
    cls = comp.classification
    if not cls.spherical:
        raise InvalidCoordinates("component classifies as %s, not spherical" % (cls,))
    if not comp.separating:
        raise NotSeparating("component is not separating")
    if cls.tag == "SphericalOrdinary":
        kind = ExceptionalKind("S3c", (1,))
    elif cls.tag == "SphericalCyclic":
        kind = ExceptionalKind("S3c", cls.orders)
    else:
        kind = ExceptionalKind("S3v", cls.orders)
    vec = surf.component_coords(component)
    pieces = cutting.split_components(cutting.cut_along(tri, vec))
    if len(pieces) != 2:
        raise NotSeparating("cut yielded %d pieces" % len(pieces))
    inconclusive = False
    for piece in pieces:
        capped = surgery.cap(piece)
        verdict = recognize.is_kind(capped, kind, seed=seed, rounds=rounds)
        if verdict is True:
            return INESSENTIAL
        if verdict is None:
            inconclusive = True
    return UNKNOWN if inconclusive else ESSENTIAL


def is_extremal_rank(tri, vec):
    """Extremality via the support: vec spans an extremal ray iff the
    matching solutions supported inside supp(vec) form a 1-dimensional
    space.  Exact rational rank computation, independent of the double
    description path."""
    n = coord_size(tri)
    support = [i for i, x in enumerate(vec) if x > 0]
    if not support:
        return False
    rows = matching_equations(tri)
    # Solution space of: matching rows restricted to support variables.
    mat = [[Fraction(row[i]) for i in support] for row in rows]
    rank = 0
    cols = len(support)
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        r += 1
    rank = r
    return cols - rank == 1
