"""Connected-sum constructors, cutting/capping, efficient splitting, and the
additivity and estimate arithmetic.

Capping cones off each spherical boundary component; the cone radii over the
boundary cone points carry the interior germ orders, so capping a cyclic
boundary inserts the trivial arc through the new centre and capping a vertex
boundary inserts a Y-graph with a new trivalent vertex.

All three connected sums are built the same way: barycentrically subdivide,
drill out the star of a suitable vertex (an interior point of a clean
tetrahedron, an interior point of the chosen singular edge, or the chosen
trivalent vertex), retriangulate both boundary spheres down to standard
two-triangle pillows by boundary layerings, and glue the pillows.  The balls
removed are by construction ordinary, cyclic, or vertex discal, so the glued
complex realizes the ordinary, cyclic, or vertex connected sum.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .orbtri import OrbifoldTriangulation, NotAnOrbifold
from .perm import TET_EDGES, EDGE_INDEX, FACE_VERTICES, invert
from . import moves
from . import normal as nm
from .cutting import cut_along, split_components
from .twoorb import TwoOrbifold, classify
from .spine import complexity_weight


class OrderMismatch(Exception):
    pass


class CannotCap(Exception):
    pass


class UseEstimate(Exception):
    """Raised by additivity_predict when the expression has vertex sums."""


class NotSeparating(Exception):
    pass


@dataclass(frozen=True)
class Sum:
    """One connected sum in a sum expression."""
    kind: str                        # ordinary | cyclic | vertex
    orders: tuple = ()               # () | (p,) | (p, q, r)
    knot_involved: bool = False      # cyclic only

    def __str__(self):
        bits = [self.kind]
        if self.orders:
            bits.append(str(self.orders))
        if self.kind == "cyclic":
            bits.append("knot" if self.knot_involved else "no-knot")
        return " ".join(bits)


@dataclass
class SumExpression:
    leaves: list                     # opaque references (signatures, kinds, ...)
    sums: list                       # list of Sum

    def nu(self):
        """nu(p): the number of p-cyclic sums involving a knot."""
        out = {}
        for s in self.sums:
            if s.kind == "cyclic" and s.knot_involved:
                p = s.orders[0]
                out[p] = out.get(p, 0) + 1
        return out

    @property
    def has_vertex_sums(self):
        return any(s.kind == "vertex" for s in self.sums)


# -- boundary structure -----------------------------------------------------------


@dataclass
class BoundaryComponent:
    faces: list                      # boundary (tet, face) slots
    vertex_classes: list
    chi: int
    cone_orders: dict                # vertex class -> interior germ order >= 2

    @property
    def two_orbifold(self):
        return TwoOrbifold(max((2 - self.chi) // 2, 0),
                           tuple(sorted(self.cone_orders.values())))

    @property
    def classification(self):
        if self.chi != 2:
            return classify(TwoOrbifold(max((2 - self.chi) // 2, 0), ()))
        return classify(self.two_orbifold)


def boundary_components(tri):
    """Group the boundary faces into surface components with their Euler
    characteristics and cone data.  Raises CannotCap when a singular edge
    lies inside the boundary."""
    faces = list(tri.boundary_faces)
    if not faces:
        return []
    fset = set(faces)
    # Pair boundary face edges via rotation around each edge.
    adj = {}
    for (t, f) in faces:
        for v in FACE_VERTICES[f]:
            for u in FACE_VERTICES[f]:
                if u <= v:
                    continue
                c = tri.edge_class_of[(t, EDGE_INDEX[(v, u)])]
                if tri.edge_orders[c] > 1:
                    raise CannotCap("singular edge class %d lies in the boundary" % c)
                other = moves._boundary_step(tri, t, f, v, u)
                if other is None or other not in fset:
                    raise CannotCap("boundary is not closed at (%d,%d)" % (t, f))
                adj.setdefault((t, f), []).append(other)
    # Components by flood fill.
    comps = []
    seen = set()
    for start in faces:
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            s = stack.pop()
            comp.append(s)
            for o in adj[s]:
                if o not in seen:
                    seen.add(o)
                    stack.append(o)
        comps.append(sorted(comp))

    germs = tri.germs()
    out = []
    for comp in comps:
        vcs = sorted({tri.vertex_class_of[(t, v)]
                      for (t, f) in comp for v in FACE_VERTICES[f]})
        # chi: V - E + F with E = 3F/2 on a closed triangulated surface.
        nf = len(comp)
        ne = 3 * nf // 2
        chi = len(vcs) - ne + nf
        cones = {}
        for vc in vcs:
            gs = germs.get(vc, [])
            if len(gs) > 1:
                raise CannotCap("boundary vertex %d carries %d germs" % (vc, len(gs)))
            if gs:
                cones[vc] = tri.edge_orders[gs[0][0]]
        out.append(BoundaryComponent(comp, vcs, chi, cones))
    return out


def cap(tri):
    """Cap every boundary component with the discal orbifold it bounds.

    Each component must classify as a spherical 2-orbifold (ordinary, cyclic
    or vertex); the cone over it contributes one tetrahedron per boundary
    face, with the radii over cone points carrying the germ orders.
    """
    comps = boundary_components(tri)
    if not comps:
        return tri
    for bc in comps:
        cls = bc.classification
        if not cls.spherical:
            raise CannotCap("boundary component classifies as %s" % (cls,))
    gl = [list(row) for row in tri.gluings]
    n = tri.tet_count
    cone_radius_orders = []
    for bc in comps:
        germs = tri.germs()
        cone_index = {}
        for (t, f) in bc.faces:
            ci = len(gl)
            cone_index[(t, f)] = ci
            gl.append([None] * 4)
            gl[t][f] = (ci, f, (0, 1, 2, 3))
            gl[ci][f] = (t, f, (0, 1, 2, 3))
        # Glue adjacent cone tetrahedra along the faces through the apex.
        for (t, f) in bc.faces:
            for v in FACE_VERTICES[f]:
                for u in FACE_VERTICES[f]:
                    if u <= v:
                        continue
                    other = moves._boundary_step(tri, t, f, v, u)
                    t2, f2 = other
                    vu2 = _boundary_edge_map(tri, t, f, v, u)
                    v2, u2 = vu2
                    w1 = [x for x in FACE_VERTICES[f] if x not in (v, u)][0]
                    w2 = [x for x in FACE_VERTICES[f2] if x not in (v2, u2)][0]
                    a = cone_index[(t, f)]
                    b = cone_index[(t2, f2)]
                    perm = _perm_from({f: f2, v: v2, u: u2, w1: w2})
                    if gl[a][w1] is None:
                        gl[a][w1] = (b, w2, perm)
                        gl[b][w2] = (a, w1, invert(perm))
        # Radii orders, keyed after the complex is built.
        for (t, f) in bc.faces:
            for v in FACE_VERTICES[f]:
                vc = tri.vertex_class_of[(t, v)]
                p = bc.cone_orders.get(vc)
                if p:
                    cone_radius_orders.append((cone_index[(t, f)],
                                               EDGE_INDEX[(v, f)], p))
    out = OrbifoldTriangulation(gl)
    orders = {}
    for t in range(n):
        for e in range(6):
            p = tri.edge_orders[tri.edge_class_of[(t, e)]]
            if p > 1:
                orders[out.edge_class_of[(t, e)]] = p
    for (t, e, p) in cone_radius_orders:
        c = out.edge_class_of[(t, e)]
        if orders.get(c, p) != p:
            raise CannotCap("conflicting cone radius orders")
        orders[c] = p
    return out.with_orders(orders)


def _boundary_edge_map(tri, t, f, v, u):
    """Labels of (v, u) as seen from the boundary face on the other side of
    the boundary edge (v, u) of face (t, f)."""
    tt, ff = t, f
    vv, uu = v, u
    cross = [w for w in range(4) if w not in (vv, uu, ff)][0]
    while True:
        g = tri.gluings[tt][cross]
        if g is None:
            return (vv, uu)
        t2, f2, p = g
        vv, uu, ff = p[vv], p[uu], p[cross]
        tt = t2
        cross = [w for w in range(4) if w not in (vv, uu, ff)][0]


def _perm_from(mapping):
    p = [None] * 4
    for a, b in mapping.items():
        p[a] = b
    assert sorted(p) == [0, 1, 2, 3]
    return tuple(p)


# -- drilling ---------------------------------------------------------------------


def drill_vertex(tri, vclass):
    """Remove the open star of a vertex class whose star is embedded (each
    tetrahedron contains it at most once); the boundary becomes the link
    sphere, with cone points at the germs of the removed vertex."""
    star = set()
    for (t, v) in tri.vertex_classes[vclass]:
        if t in star:
            raise ValueError("vertex star is not embedded")
        star.add(t)
    kept = [t for t in range(tri.tet_count) if t not in star]
    if not kept:
        raise ValueError("vertex star covers the whole triangulation")
    reindex = {t: i for i, t in enumerate(kept)}
    gl = []
    for t in kept:
        row = []
        for f in range(4):
            g = tri.gluings[t][f]
            if g is None or g[0] in star:
                row.append(None)
            else:
                row.append((reindex[g[0]], g[1], g[2]))
        gl.append(row)
    out = OrbifoldTriangulation(gl)
    orders = {}
    for t in kept:
        for e in range(6):
            p = tri.edge_orders[tri.edge_class_of[(t, e)]]
            if p > 1:
                orders[out.edge_class_of[(reindex[t], e)]] = p
    return out.with_orders(orders)


# -- boundary standardization -------------------------------------------------------


def _boundary_vertex_star(tri, vc):
    """Boundary faces around a boundary vertex class in cyclic order, as
    (slot, vertex label) pairs."""
    start = None
    for (t, f) in tri.boundary_faces:
        for v in FACE_VERTICES[f]:
            if tri.vertex_class_of[(t, v)] == vc:
                start = (t, f, v)
                break
        if start:
            break
    if start is None:
        return None
    t, f, v = start
    out = [(t, f, v)]
    others = [u for u in FACE_VERTICES[f] if u != v]
    u = others[0]
    while True:
        nxt = moves._boundary_step(tri, t, f, v, u)
        v2, _u2 = _boundary_edge_map(tri, t, f, v, u)
        t2, f2 = nxt
        if (t2, f2, v2) == out[0]:
            return out
        out.append((t2, f2, v2))
        u2 = [x for x in FACE_VERTICES[f2] if x != v2 and x != _u2][0]
        t, f, v, u = t2, f2, v2, u2
        if len(out) > 4 * tri.tet_count:
            raise AssertionError("boundary star does not close")


def standardize_boundary(tri, seed=0, max_rounds=3000):
    """Retriangulate every boundary component down to a two-triangle pillow
    whose three vertex classes are distinct, by attaching tetrahedra
    (boundary layerings).  Cone vertices are never removed.

    Returns the new triangulation or None when the budget runs out.
    """
    rng = random.Random(seed)
    cur = tri
    for _ in range(max_rounds):
        comps = boundary_components(cur)
        todo = [bc for bc in comps if not _is_standard_pillow(cur, bc)]
        if not todo:
            return cur
        bc = todo[0]
        germs = cur.germs()
        killable = [vc for vc in bc.vertex_classes if vc not in germs]
        progressed = False
        # Cap a boundary-degree-3 killable vertex outright.
        rng.shuffle(killable)
        for vc in killable:
            if len(bc.vertex_classes) <= 3:
                break
            star = _boundary_vertex_star(cur, vc)
            if star is None or len(star) != 3:
                continue
            slots = [(t, f) for (t, f, v) in star]
            if len(set(slots)) != 3:
                continue
            nxt = moves.attach_three(cur, slots, [v for (_t, _f, v) in star])
            if nxt is not None and nxt.quick_valid(closed=False):
                cur = nxt
                progressed = True
                break
        if progressed:
            continue
        # Otherwise reduce some killable vertex's boundary degree by a flip,
        # preferring vertices of low degree.
        stars = []
        for vc in (killable if len(bc.vertex_classes) > 3 else []):
            star = _boundary_vertex_star(cur, vc)
            if star is not None and len(star) >= 4:
                stars.append((len(star), rng.random(), star))
        stars.sort(key=lambda x: (x[0], x[1]))
        for (_d, _r, star) in stars:
            nxt = _flip_at(cur, star, rng)
            if nxt is not None:
                cur = nxt
                progressed = True
                break
        if progressed:
            continue
        # Perturb: subdivide a random boundary face.
        bf = bc.faces[rng.randrange(len(bc.faces))]
        nxt = moves.attach_one(cur, bf[0], bf[1])
        if nxt is None:
            return None
        cur = nxt
    return None


def _flip_at(tri, star, rng):
    """Flip a boundary edge at the starred vertex: attach a tetrahedron over
    two consecutive boundary faces around it."""
    k = len(star)
    offsets = list(range(k))
    rng.shuffle(offsets)
    for i in offsets:
        (t1, f1, v1) = star[i]
        (t2, f2, v2) = star[(i + 1) % k]
        if (t1, f1) == (t2, f2):
            continue
        # Shared boundary edge: from face (t1,f1) it is (v1, u) where u is
        # the edge leading to the next face in the walk.
        u_candidates = [u for u in FACE_VERTICES[f1] if u != v1]
        for u in u_candidates:
            if moves._boundary_step(tri, t1, f1, v1, u) == (t2, f2):
                vu2 = _boundary_edge_map(tri, t1, f1, v1, u)
                if vu2[0] != v2:
                    continue
                nxt = moves.attach_two(tri, (t1, f1), (t2, f2),
                                       ((v1, u), vu2))
                if nxt is not None and nxt.quick_valid(closed=False):
                    # The flip must actually lower the degree at the vertex:
                    # the new diagonal avoids v1.
                    return nxt
    return None


def _is_standard_pillow(tri, bc):
    if len(bc.faces) != 2 or len(bc.vertex_classes) != 3:
        return False
    for (t, f) in bc.faces:
        vcs = {tri.vertex_class_of[(t, v)] for v in FACE_VERTICES[f]}
        if len(vcs) != 3:
            return False
    return True


def glue_pillows(a, b, order_match=True, seed=0):
    """Glue two triangulations along their standard pillow boundaries.

    Both inputs must have exactly one boundary component, a standard pillow;
    cone vertices are matched by order.  Both face pairings and all vertex
    matchings consistent with the cone orders are tried in deterministic
    order; the first result that validates as a closed orientable orbifold
    wins.
    """
    ca = boundary_components(a)
    cb = boundary_components(b)
    if len(ca) != 1 or len(cb) != 1:
        raise ValueError("each side must have exactly one boundary component")
    bca, bcb = ca[0], cb[0]
    if not (_is_standard_pillow(a, bca) and _is_standard_pillow(b, bcb)):
        raise ValueError("boundaries are not standard pillows")
    if order_match:
        if sorted(bca.cone_orders.values()) != sorted(bcb.cone_orders.values()):
            raise OrderMismatch("boundary cone orders %s vs %s"
                                % (sorted(bca.cone_orders.values()),
                                   sorted(bcb.cone_orders.values())))
    fa1, fa2 = bca.faces
    n = a.tet_count
    germs_a = {vc: bca.cone_orders.get(vc, 1) for vc in bca.vertex_classes}
    germs_b = {vc: bcb.cone_orders.get(vc, 1) for vc in bcb.vertex_classes}
    for (fb1, fb2) in ((bcb.faces[0], bcb.faces[1]), (bcb.faces[1], bcb.faces[0])):
        for vmap in _order_matchings(a, b, bca, bcb):
            gl = [list(r) for r in a.gluings]
            gl += [[None if g is None else (g[0] + n, g[1], g[2]) for g in row]
                   for row in b.gluings]
            ok = True
            for (sa, sb) in ((fa1, fb1), (fa2, fb2)):
                (ta, fa) = sa
                (tb, fb) = sb
                mapping = {fa: fb}
                for v in FACE_VERTICES[fa]:
                    vc = a.vertex_class_of[(ta, v)]
                    target = vmap[vc]
                    lbl = [u for u in FACE_VERTICES[fb]
                           if b.vertex_class_of[(tb, u)] == target]
                    if len(lbl) != 1:
                        ok = False
                        break
                    mapping[v] = lbl[0]
                if not ok or sorted(mapping.values()) != [0, 1, 2, 3]:
                    ok = False
                    break
                perm = _perm_from(mapping)
                gl[ta][fa] = (tb + n, fb, perm)
                gl[tb + n][fb] = (ta, fa, invert(perm))
            if not ok:
                continue
            try:
                out = OrbifoldTriangulation(gl)
            except Exception:
                continue
            orders = {}
            bad = False
            for (src, offset) in ((a, 0), (b, n)):
                for t in range(src.tet_count):
                    for e in range(6):
                        p = src.edge_orders[src.edge_class_of[(t, e)]]
                        if p > 1:
                            c = out.edge_class_of[(t + offset, e)]
                            if orders.get(c, p) != p:
                                bad = True
                            orders[c] = p
            if bad:
                continue
            out = out.with_orders(orders)
            if out.validate().valid:
                return out
    raise ValueError("no valid pillow gluing found")


def _order_matchings(a, b, bca, bcb):
    """All bijections of pillow vertex classes matching cone orders."""
    import itertools
    avs = list(bca.vertex_classes)
    for perm in itertools.permutations(bcb.vertex_classes):
        ok = True
        for av, bv in zip(avs, perm):
            if bca.cone_orders.get(av, 1) != bcb.cone_orders.get(bv, 1):
                ok = False
                break
        if ok:
            yield dict(zip(avs, perm))


# -- the three sums ----------------------------------------------------------------


def _drilled(tri, kind, site, seed=0):
    """Barycentrically subdivide, drill the star of the site vertex, shrink
    the piece, and standardize its boundary to a pillow."""
    b = moves.barycentric(tri)
    if kind == "ordinary":
        # centre of tetrahedron `site`: the flag vertex class holding slot 3
        # of any flag of that tetrahedron.
        w = b.vertex_class_of[(24 * site, 3)]
    elif kind == "cyclic":
        # centre of the chosen edge class: slot 1 of a flag over that edge.
        t, e = tri.edge_classes[site][0]
        flag = moves._FLAG_INDEX[_some_flag_over_edge(e)]
        w = b.vertex_class_of[(24 * t + flag, 1)]
    else:
        # original vertex: slot 0 of a flag at that vertex.
        t, v = tri.vertex_classes[site][0]
        flag = moves._FLAG_INDEX[_some_flag_at_vertex(v)]
        w = b.vertex_class_of[(24 * t + flag, 0)]
    piece = drill_vertex(b, w)
    small = moves.simplify(piece, rounds=60, seed=seed, stop_at=6)
    std = standardize_boundary(small, seed=seed)
    if std is None:
        std = standardize_boundary(piece, seed=seed + 1)
    if std is None:
        raise RuntimeError("boundary standardization failed")
    return moves.greedy_simplify(std)


def _some_flag_over_edge(e):
    a, b = TET_EDGES[e]
    for (v, e2, f) in moves._FLAGS:
        if e2 == e:
            return (v, e2, f)
    raise AssertionError


def _some_flag_at_vertex(v):
    for (v2, e, f) in moves._FLAGS:
        if v2 == v:
            return (v2, e, f)
    raise AssertionError


def ordinary_sum(a, b, seed=0):
    """Connected sum along ordinary balls removed from the interiors of the
    first tetrahedra of a and b."""
    pa = _drilled(a, "ordinary", 0, seed=seed)
    pb = _drilled(b, "ordinary", 0, seed=seed + 7)
    out = glue_pillows(pa, pb, seed=seed)
    return moves.simplify(out, rounds=80, seed=seed, stop_at=2)


def cyclic_sum(a, arc_a, b, arc_b, seed=0):
    """Cyclic connected sum along the singular edge classes arc_a of a and
    arc_b of b, which must carry equal orders."""
    pa_ord = a.edge_orders[arc_a]
    pb_ord = b.edge_orders[arc_b]
    if pa_ord < 2 or pa_ord != pb_ord:
        raise OrderMismatch("cyclic sum needs equal orders >= 2, got %d and %d"
                            % (pa_ord, pb_ord))
    pa = _drilled(a, "cyclic", arc_a, seed=seed)
    pb = _drilled(b, "cyclic", arc_b, seed=seed + 7)
    out = glue_pillows(pa, pb, seed=seed)
    return moves.simplify(out, rounds=80, seed=seed, stop_at=2)


def vertex_sum(a, va, b, vb, seed=0):
    """Vertex connected sum at trivalent singular vertices with matching
    order triples."""
    ga = sorted(a.edge_orders[c] for c, _ in a.germs().get(va, []))
    gb = sorted(b.edge_orders[c] for c, _ in b.germs().get(vb, []))
    if len(ga) != 3 or ga != gb:
        raise OrderMismatch("vertex sum needs matching triples, got %s and %s"
                            % (ga, gb))
    pa = _drilled(a, "vertex", va, seed=seed)
    pb = _drilled(b, "vertex", vb, seed=seed + 7)
    out = glue_pillows(pa, pb, seed=seed)
    return moves.simplify(out, rounds=80, seed=seed, stop_at=2)


def arc_is_knot(tri, edge_class):
    """True when the singular component through the given edge class is a
    circle of the singular graph (no trivalent vertices)."""
    sg = tri.singular_graph()
    kind, _ = sg.component_of_edge(edge_class)
    return kind == "circle"


# -- efficient splitting ------------------------------------------------------------


@dataclass
class SplitResult:
    """Outcome of the three-stage splitting procedure."""
    summands: list                   # closed triangulations (simplified)
    expression: SumExpression
    status: str                      # Complete | Incomplete | Rejected
    detail: str = ""
    system: list = field(default_factory=list)   # classifications of cut spheres

    def nu(self):
        return self.expression.nu()

    @property
    def nu_canonical(self):
        return self.status == "Complete" and not self.expression.has_vertex_sums


_STAGES = (("SphericalOrdinary", "ordinary"),
           ("SphericalCyclic", "cyclic"),
           ("SphericalVertex", "vertex"))


def _essential_sphere_of_stage(piece, tag, seed, sphere_bound, rounds):
    """Scan the vertex solutions of one piece for an essential sphere of the
    given class; returns ('bad', comp), ('cut', vec, comp), ('nonsep',),
    ('unknown',) or None.  Candidates are tried by total weight then
    lexicographically; vertex links are skipped (they bound vertex stars)."""
    from . import recognize
    sols = nm.vertex_solutions(piece, bound=sphere_bound)
    links = {nm.vertex_link_coords(piece, vc)
             for vc in range(len(piece.vertex_classes))}
    candidates = []
    for vec in sols:
        surf = nm.reconstruct(piece, vec)
        if len(surf.components) != 1:
            continue
        comp = surf.components[0]
        cls = comp.classification
        if cls.tag == "Bad":
            return ("bad", cls)
        if cls.tag != tag:
            continue
        if not comp.separating:
            return ("nonsep", cls)
        if vec in links:
            continue
        candidates.append((sum(vec), vec, surf))
    candidates.sort(key=lambda x: (x[0], x[1]))
    saw_unknown = False
    for (_w, vec, surf) in candidates:
        verdict = nm.is_essential_sphere(piece, surf, 0, seed=seed, rounds=rounds)
        if verdict == nm.ESSENTIAL:
            return ("cut", vec, surf.components[0])
        if verdict == nm.UNKNOWN:
            saw_unknown = True
    return ("unknown",) if saw_unknown else None


def _cyclic_knot_flag(capped_pieces, cone_slots):
    """Whether either side's spliced singular component is a circle: checked
    on the capped summands at the slots that carried the sphere's cones."""
    for (capped, slot) in zip(capped_pieces, cone_slots):
        vc = capped.vertex_class_of[slot]
        germs = capped.germs().get(vc, [])
        if not germs:
            continue
        sg = capped.singular_graph()
        kind, _ = sg.component_of_edge(germs[0][0])
        if kind == "circle":
            return True
    return False


def efficient_split(tri, seed=0, sphere_bound=4096, rounds=25,
                    max_summands=16):
    """Split a closed orbifold along essential normal spheres, ordinary
    first, then cyclic, then vertex, cutting a minimal-weight essential
    sphere at each step and capping the pieces.

    Returns a SplitResult whose expression records the sum types, orders and
    knot flags; status is Rejected when a bad or non-separating suborbifold
    turns up, Incomplete when essentiality runs out of budget.
    """
    work = [moves.simplify(tri, rounds=80, seed=seed, stop_at=2)]
    sums = []
    system = []
    status = "Complete"
    detail = ""
    for (tag, sum_kind) in _STAGES:
        changed = True
        while changed:
            changed = False
            for i, piece in enumerate(work):
                found = _essential_sphere_of_stage(piece, tag, seed,
                                                   sphere_bound, rounds)
                if found is None:
                    continue
                if found[0] == "bad":
                    return SplitResult(work, SumExpression([], sums),
                                       "Rejected",
                                       "bad 2-suborbifold found", system)
                if found[0] == "nonsep":
                    return SplitResult(work, SumExpression([], sums),
                                       "Rejected",
                                       "non-separating spherical suborbifold",
                                       system)
                if found[0] == "unknown":
                    status = "Incomplete"
                    detail = "essentiality budget exceeded on a %s sphere" % tag
                    continue
                _, vec, comp = found
                pieces = split_components(cut_along(piece, vec))
                capped = []
                cone_slots = []
                for p in pieces:
                    bcs = boundary_components(p)
                    slot = None
                    for bc in bcs:
                        for vc, _o in bc.cone_orders.items():
                            slot = p.vertex_classes[vc][0]
                    capped.append(cap(p))
                    cone_slots.append(slot)
                if sum_kind == "cyclic":
                    knot = _cyclic_knot_flag(capped, cone_slots)
                    sums.append(Sum("cyclic", comp.cone_orders[:1], knot))
                elif sum_kind == "vertex":
                    sums.append(Sum("vertex", comp.cone_orders))
                else:
                    sums.append(Sum("ordinary"))
                system.append(comp.classification)
                capped = [moves.simplify(c, rounds=80, seed=seed + 13 * len(sums),
                                         stop_at=2) for c in capped]
                work[i:i + 1] = capped
                changed = True
                if len(work) > max_summands:
                    return SplitResult(work, SumExpression([], sums),
                                       "Incomplete", "too many summands", system)
                break
    leaves = [w.iso_signature() for w in work]
    return SplitResult(work, SumExpression(leaves, sums), status, detail, system)


# -- additivity and estimates ---------------------------------------------------


def additivity_predict(expr: SumExpression, complexities) -> int:
    """c(X) = sum c(X_i) - sum nu(p) (p-1) for efficient sums without vertex
    connected sums."""
    if expr.has_vertex_sums:
        raise UseEstimate("vertex sums present; use estimate_bounds")
    total = sum(complexities)
    for p, count in expr.nu().items():
        total -= count * (p - 1)
    return total


def estimate_bounds(expr: SumExpression, complexities):
    """The two-sided bounds sum/4^(n-1) <= c(X) <= 6^(n-1) * sum, exact."""
    n = len(expr.leaves)
    if n < 1:
        raise ValueError("need at least one summand")
    s = sum(complexities)
    return (Fraction(s, 4 ** (n - 1)), Fraction(6 ** (n - 1) * s))
