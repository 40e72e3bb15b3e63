"""Decorated triangulations of closed orientable 3-orbifolds.

A triangulation is a finite set of abstract tetrahedra together with a system
of face pairings: face f of tetrahedron t may be glued to face f' of
tetrahedron t' via a permutation of the four vertex labels sending f to f'.
Multiple and self-adjacencies of tetrahedra are allowed, but a face is never
glued to itself.  The orbifold structure is a cone order (an integer >= 2)
attached to some of the edge classes; order 1 marks a non-singular edge, so a
single integer field covers both cases.

The singular locus is required to be a disjoint union of circles and
unitrivalent graphs inside the 1-skeleton: at every triangulation vertex the
number of singular edge germs is 0, 2 (equal orders) or 3 (orders forming an
admissible triple (2,2,p) for any p, or (2,3,p) for p in {3,4,5}).
"""

from dataclasses import dataclass, field

from .perm import (ALL_PERMS, PERM_INDEX, PERM_SIGN, IDENTITY, TET_EDGES,
                   EDGE_INDEX, FACE_VERTICES, compose, invert, perm_to_str,
                   perm_from_str)


class MalformedGluing(Exception):
    """The gluing table itself is ill-typed (bad indices or permutations)."""


class NotAnOrbifold(Exception):
    """The decorated triangulation violates an orbifold structure invariant."""


class InvalidOrder(Exception):
    """A cone order is out of range or a triple is inadmissible."""


ADMISSIBLE_SMALL = {(2, 3, 3), (2, 3, 4), (2, 3, 5)}


def admissible_triple(p, q, r):
    """True for the vertex order triples (2,2,p), p arbitrary, or (2,3,p),
    p in {3,4,5}."""
    a, b, c = sorted((p, q, r))
    if a < 2:
        return False
    if a == 2 and b == 2:
        return True
    return (a, b, c) in ADMISSIBLE_SMALL


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


@dataclass
class ValidationReport:
    """Outcome of the structural checks, one named pass/fail entry each."""
    checks: list = field(default_factory=list)

    def add(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    @property
    def valid(self):
        return all(ok for _, ok, _ in self.checks)

    def failed(self):
        return [(n, d) for n, ok, d in self.checks if not ok]

    def __str__(self):
        lines = []
        for name, ok, detail in self.checks:
            mark = "ok  " if ok else "FAIL"
            lines.append("%s %-18s %s" % (mark, name, detail))
        return "\n".join(lines)


@dataclass
class LinkSurface:
    """Triangulated link of a vertex class, assembled from corner triangles."""
    vertex_class: int
    corners: list            # (tet, vertex) pairs forming the link
    n_vertices: int
    n_edges: int
    n_faces: int
    closed: bool
    chi: int

    @property
    def genus(self):
        """Genus from chi alone; only meaningful for closed orientable links."""
        if not self.closed:
            return None
        return (2 - self.chi) // 2


@dataclass
class SingularGraph:
    """Decomposition of the order>=2 edge classes into circles and arcs.

    Arcs run between trivalent singular vertices (possibly the same one);
    circles pass through no trivalent vertex.  Each component carries the
    common cone order of its edge classes.
    """
    circles: list            # list of (edge class list, order)
    arcs: list               # list of (edge class list, (vclass, vclass), order)
    vertices_of_s: list      # vertex classes where three germs meet

    @property
    def component_count(self):
        return len(self.circles) + len(self.arcs)

    def component_of_edge(self, edge_class):
        """Return ('circle'|'arc', index) of the component containing the
        given singular edge class."""
        for i, (classes, _) in enumerate(self.circles):
            if edge_class in classes:
                return ("circle", i)
        for i, (classes, _ends, _) in enumerate(self.arcs):
            if edge_class in classes:
                return ("arc", i)
        raise KeyError("edge class %d is not singular" % edge_class)


class OrbifoldTriangulation:
    """A gluing table of tetrahedra plus cone orders on its edge classes.

    Instances are immutable after construction; all derived structure
    (face/edge/vertex classes, orientation signs, links) is computed once and
    cached, so they are safe to share between threads.
    """

    def __init__(self, gluings, edge_orders=None):
        self.gluings = tuple(tuple(face for face in tet) for tet in gluings)
        self._check_shape()
        self._build_classes()
        orders = dict(edge_orders or {})
        full = {}
        for c in range(len(self.edge_classes)):
            p = orders.pop(c, 1)
            if not isinstance(p, int) or p < 1:
                raise InvalidOrder("order of edge class %d must be an integer >= 1, got %r" % (c, p))
            full[c] = p
        if orders:
            raise InvalidOrder("orders given for nonexistent edge classes %s" % sorted(orders))
        self.edge_orders = full
        self._sig = None

    # -- basic structure ---------------------------------------------------

    @property
    def tet_count(self):
        return len(self.gluings)

    def _check_shape(self):
        if len(self.gluings) == 0:
            raise MalformedGluing("empty triangulation")
        for t, tet in enumerate(self.gluings):
            if len(tet) != 4:
                raise MalformedGluing("tetrahedron %d does not have 4 faces" % t)
            for f, g in enumerate(tet):
                if g is None:
                    continue
                try:
                    t2, f2, p = g
                except (TypeError, ValueError):
                    raise MalformedGluing("gluing at (%d,%d) is not (tet, face, perm)" % (t, f))
                if not (0 <= t2 < len(self.gluings) and 0 <= f2 < 4):
                    raise MalformedGluing("gluing at (%d,%d) targets nonexistent face (%d,%d)"
                                          % (t, f, t2, f2))
                if tuple(sorted(p)) != (0, 1, 2, 3):
                    raise MalformedGluing("malformed permutation %r at face (%d,%d)" % (p, t, f))
                if p[f] != f2:
                    raise MalformedGluing("permutation %r at face (%d,%d) does not map face %d to %d"
                                          % (p, t, f, f, f2))

    def _involution_ok(self):
        for t, tet in enumerate(self.gluings):
            for f, g in enumerate(tet):
                if g is None:
                    continue
                t2, f2, p = g
                if t2 == t and f2 == f:
                    return False, "face (%d,%d) glued to itself" % (t, f)
                back = self.gluings[t2][f2]
                if back is None or back[0] != t or back[1] != f or back[2] != invert(p):
                    return False, "gluing of (%d,%d) not mirrored at (%d,%d)" % (t, f, t2, f2)
        return True, ""

    def _build_classes(self):
        ok, why = self._involution_ok()
        self._involution = (ok, why)
        n = self.tet_count
        if not ok:
            self.face_classes = []
            self.edge_classes = []
            self.vertex_classes = []
            self.boundary_faces = []
            return

        # Face classes: glued pairs and boundary singletons.
        seen = set()
        faces = []
        boundary = []
        for t in range(n):
            for f in range(4):
                if (t, f) in seen:
                    continue
                g = self.gluings[t][f]
                if g is None:
                    faces.append(((t, f),))
                    boundary.append((t, f))
                    seen.add((t, f))
                else:
                    t2, f2, _ = g
                    faces.append(((t, f), (t2, f2)))
                    seen.add((t, f))
                    seen.add((t2, f2))
        self.face_classes = faces
        self.boundary_faces = boundary

        # Edge classes with orientation tracking: slot index = (t*6 + e)*2 + dir.
        uf = _UnionFind(n * 12)
        for t in range(n):
            for f in range(4):
                g = self.gluings[t][f]
                if g is None:
                    continue
                t2, _, p = g
                a, b, c = FACE_VERTICES[f]
                for (x, y) in ((a, b), (a, c), (b, c)):
                    e1 = EDGE_INDEX[(x, y)]
                    d1 = 0 if x < y else 1
                    x2, y2 = p[x], p[y]
                    e2 = EDGE_INDEX[(x2, y2)]
                    d2 = 0 if x2 < y2 else 1
                    uf.union((t * 6 + e1) * 2 + d1, (t2 * 6 + e2) * 2 + d2)
                    uf.union((t * 6 + e1) * 2 + (1 - d1), (t2 * 6 + e2) * 2 + (1 - d2))
        reps = {}
        edge_class_of = {}
        edge_reversed = set()
        classes = []
        for t in range(n):
            for e in range(6):
                r0 = uf.find((t * 6 + e) * 2)
                r1 = uf.find((t * 6 + e) * 2 + 1)
                if r0 == r1:
                    edge_reversed.add((t, e))
                key = min(r0, r1)
                if key not in reps:
                    reps[key] = len(classes)
                    classes.append([])
                c = reps[key]
                edge_class_of[(t, e)] = c
                classes[c].append((t, e))
        self.edge_classes = classes
        self.edge_class_of = edge_class_of
        self._edge_reversed = edge_reversed
        # Orientation of each slot relative to its class representative: the
        # slot (t,e) read in increasing vertex order agrees with the class
        # direction iff its dir-0 node sits in the representative's dir-0 set.
        self._edge_dir_root = {}
        for c, slots in enumerate(classes):
            t0, e0 = slots[0]
            self._edge_dir_root[c] = uf.find((t0 * 6 + e0) * 2)
        self._edge_uf = uf

        # Vertex classes.
        vf = _UnionFind(n * 4)
        for t in range(n):
            for f in range(4):
                g = self.gluings[t][f]
                if g is None:
                    continue
                t2, _, p = g
                for v in FACE_VERTICES[f]:
                    vf.union(t * 4 + v, t2 * 4 + p[v])
        vreps = {}
        vclass_of = {}
        vclasses = []
        for t in range(n):
            for v in range(4):
                r = vf.find(t * 4 + v)
                if r not in vreps:
                    vreps[r] = len(vclasses)
                    vclasses.append([])
                c = vreps[r]
                vclass_of[(t, v)] = c
                vclasses[c].append((t, v))
        self.vertex_classes = vclasses
        self.vertex_class_of = vclass_of

    def edge_slot_sign(self, t, e):
        """+1 if edge slot (t,e), read with increasing vertex labels, agrees
        with the canonical direction of its edge class, else -1."""
        c = self.edge_class_of[(t, e)]
        return 1 if self._edge_uf.find((t * 6 + e) * 2) == self._edge_dir_root[c] else -1

    def edge_class_ends(self, c):
        """Vertex classes at the tail and head of edge class c, using the
        canonical direction of the class."""
        t, e = self.edge_classes[c][0]
        a, b = TET_EDGES[e]
        return self.vertex_class_of[(t, a)], self.vertex_class_of[(t, b)]

    @property
    def is_closed(self):
        return not self.boundary_faces

    def order_of(self, c):
        return self.edge_orders[c]

    def with_orders(self, edge_orders):
        """Copy of this triangulation carrying the given edge orders."""
        return OrbifoldTriangulation(self.gluings, edge_orders)

    def _edge_fans_ok(self):
        """Every edge class must consist of a single rotation fan: a second
        fan would pinch the complex along the edge (non-manifold) without
        disturbing any vertex link."""
        for c, slots in enumerate(self.edge_classes):
            t, e = slots[0]
            a, b = TET_EDGES[e]
            zs = [v for v in range(4) if v not in (a, b)]
            count = 0
            # Walk forward until closing up or hitting boundary.
            start = (t, a, b, zs[0], zs[1])
            cur = start
            closed_fan = False
            while True:
                count += 1
                tt, x, y, u, w = cur
                g = self.gluings[tt][u]
                if g is None:
                    break
                t2, _, p = g
                cur = (t2, p[x], p[y], p[w], 6 - p[x] - p[y] - p[w])
                if cur == start:
                    closed_fan = True
                    break
                if count > len(slots) + 1:
                    return False, c
            if not closed_fan:
                # Walk backward from the start for the rest of the fan.
                cur = (t, a, b, zs[1], zs[0])
                while True:
                    tt, x, y, u, w = cur
                    g = self.gluings[tt][u]
                    if g is None:
                        break
                    count += 1
                    t2, _, p = g
                    cur = (t2, p[x], p[y], p[w], 6 - p[x] - p[y] - p[w])
                    if count > len(slots) + 1:
                        return False, c
            if count != len(slots):
                return False, c
        return True, None

    # -- orientation -------------------------------------------------------

    def orientation_signs(self):
        """Tetrahedron signs making all gluings orientation-reversing on the
        boundary, or None if the triangulation is non-orientable."""
        n = self.tet_count
        signs = [0] * n
        for start in range(n):
            if signs[start]:
                continue
            signs[start] = 1
            stack = [start]
            while stack:
                t = stack.pop()
                for f in range(4):
                    g = self.gluings[t][f]
                    if g is None:
                        continue
                    t2, _, p = g
                    want = -signs[t] * PERM_SIGN[p]
                    if signs[t2] == 0:
                        signs[t2] = want
                        stack.append(t2)
                    elif signs[t2] != want:
                        return None
        return signs

    @property
    def orientable(self):
        return self.orientation_signs() is not None

    # -- vertex links --------------------------------------------------------

    def vertex_link(self, vclass):
        """The link surface of a vertex class, built from corner triangles.

        Corner (t,v) is the triangle cut off at vertex v of tetrahedron t; its
        sides lie on the three faces of t through v and its corners on the
        three edges of t through v.  Face gluings glue the sides; chi is
        computed from the quotient cell counts.
        """
        corners = [s for s in self.vertex_classes[vclass]]
        corner_set = set(corners)
        # Link edges: (t, v, f) with f != v; link vertices: (t, v, u), u != v.
        euf = _UnionFind(len(corners) * 4)
        vuf = _UnionFind(len(corners) * 4)
        idx = {s: i for i, s in enumerate(corners)}
        closed = True
        for (t, v) in corners:
            for f in range(4):
                if f == v:
                    continue
                g = self.gluings[t][f]
                if g is None:
                    closed = False
                    continue
                t2, f2, p = g
                assert (t2, p[v]) in corner_set
                euf.union(idx[(t, v)] * 4 + f, idx[(t2, p[v])] * 4 + f2)
                for u in range(4):
                    if u != v and u != f:
                        vuf.union(idx[(t, v)] * 4 + u, idx[(t2, p[v])] * 4 + p[u])
        eset = set()
        vset = set()
        for (t, v) in corners:
            for u in range(4):
                if u != v:
                    eset.add(euf.find(idx[(t, v)] * 4 + u))
                    vset.add(vuf.find(idx[(t, v)] * 4 + u))
        n_f = len(corners)
        n_e = len(eset)
        n_v = len(vset)
        return LinkSurface(vclass, corners, n_v, n_e, n_f, closed, n_v - n_e + n_f)

    # -- singular structure --------------------------------------------------

    def singular_edge_classes(self):
        return [c for c in range(len(self.edge_classes)) if self.edge_orders[c] >= 2]

    def germs(self):
        """Map vertex class -> list of (edge class, end) singular germs."""
        out = {}
        for c in self.singular_edge_classes():
            u, w = self.edge_class_ends(c)
            out.setdefault(u, []).append((c, 0))
            out.setdefault(w, []).append((c, 1))
        return out

    def singular_graph(self):
        """Decompose the singular locus into circles and arcs.

        Raises NotAnOrbifold when a vertex has 1 or >= 4 singular germs, when
        two germs meet at a bivalent vertex with different orders, or when a
        trivalent vertex carries an inadmissible order triple.
        """
        germs = self.germs()
        for v, gs in germs.items():
            if len(gs) not in (2, 3):
                raise NotAnOrbifold("vertex class %d has %d singular germs" % (v, len(gs)))
            orders = sorted(self.edge_orders[c] for c, _ in gs)
            if len(gs) == 2:
                if orders[0] != orders[1]:
                    raise NotAnOrbifold("vertex class %d joins singular edges of orders %s"
                                        % (v, orders))
            else:
                if not admissible_triple(*orders):
                    raise NotAnOrbifold("vertex class %d carries inadmissible triple %s"
                                        % (v, tuple(orders)))
        trivalent = sorted(v for v, gs in germs.items() if len(gs) == 3)
        triv_set = set(trivalent)

        # Walk components germ-to-germ; at a bivalent vertex the incoming germ
        # continues through the unique other germ.
        def partner(v, germ):
            gs = germs[v]
            others = [g for g in gs if g != germ]
            assert len(others) == len(gs) - 1
            return others[0]

        used = set()
        circles = []
        arcs = []
        for start_v in trivalent:
            for germ in germs[start_v]:
                if germ in used:
                    continue
                # Walk an arc away from start_v.
                path = []
                v, g = start_v, germ
                while True:
                    c, end = g
                    used.add(g)
                    path.append(c)
                    other = (c, 1 - end)
                    u, w = self.edge_class_ends(c)
                    v2 = w if end == 0 else u
                    used.add(other)
                    if v2 in triv_set:
                        arcs.append((path, (start_v, v2), self.edge_orders[path[0]]))
                        break
                    v, g = v2, partner(v2, other)
        for c in self.singular_edge_classes():
            if (c, 0) in used:
                continue
            # Circle component through bivalent vertices only.
            path = []
            g = (c, 0)
            v = self.edge_class_ends(c)[0]
            while g not in used:
                cc, end = g
                used.add(g)
                used.add((cc, 1 - end))
                path.append(cc)
                u, w = self.edge_class_ends(cc)
                v2 = w if end == 0 else u
                g = partner(v2, (cc, 1 - end))
                v = v2
            circles.append((path, self.edge_orders[path[0]]))
        return SingularGraph(circles, arcs, trivalent)

    # -- validation ----------------------------------------------------------

    def validate(self, closed=True):
        """Run all structural checks and return a ValidationReport.

        With closed=True (the default) unglued faces are a failure; bounded
        complexes arising inside surgery are checked with closed=False, where
        boundary vertex links must be discs instead of spheres.
        """
        report = ValidationReport()
        ok, why = self._involution
        report.add("involution", ok, why)
        if not ok:
            return report
        if closed:
            report.add("closed", self.is_closed,
                       "" if self.is_closed else "%d unglued faces" % len(self.boundary_faces))
        report.add("orientable", self.orientable)
        rev = sorted(self._edge_reversed)
        report.add("edge-orientation", not rev,
                   "" if not rev else "edge slot %s glued to itself reversed" % (rev[0],))
        if rev:
            return report
        fans_ok, bad_class = self._edge_fans_ok()
        report.add("edge-fans", fans_ok,
                   "" if fans_ok else "edge class %d has several rotation fans" % bad_class)
        if not fans_ok:
            return report
        links_ok = True
        detail = ""
        boundary_vcs = set()
        for (t, f) in self.boundary_faces:
            for v in FACE_VERTICES[f]:
                boundary_vcs.add(self.vertex_class_of[(t, v)])
        for vc in range(len(self.vertex_classes)):
            link = self.vertex_link(vc)
            want = 1 if vc in boundary_vcs else 2
            if link.chi != want:
                links_ok = False
                detail = "vertex class %d has link chi=%d (expected %d)" % (vc, link.chi, want)
                break
        report.add("vertex-links", links_ok, detail)
        orders_ok = all(p >= 1 for p in self.edge_orders.values())
        report.add("orders", orders_ok)
        if closed:
            try:
                self.singular_graph()
                report.add("singular-graph", True)
            except NotAnOrbifold as e:
                report.add("singular-graph", False, str(e))
        else:
            ok, why = self._singular_ok_bounded(boundary_vcs)
            report.add("singular-graph", ok, why)
        return report

    def _singular_ok_bounded(self, boundary_vcs):
        # Interior vertices follow the closed rules; a boundary vertex may
        # carry at most one germ (a singular edge hitting the boundary sphere
        # transversely at a cone point).
        for v, gs in self.germs().items():
            if v in boundary_vcs:
                if len(gs) > 1:
                    return False, "boundary vertex class %d has %d singular germs" % (v, len(gs))
                continue
            if len(gs) not in (2, 3):
                return False, "vertex class %d has %d singular germs" % (v, len(gs))
            orders = sorted(self.edge_orders[c] for c, _ in gs)
            if len(gs) == 2 and orders[0] != orders[1]:
                return False, "vertex class %d joins singular edges of orders %s" % (v, orders)
            if len(gs) == 3 and not admissible_triple(*orders):
                return False, "vertex class %d carries inadmissible triple %s" % (v, tuple(orders))
        return True, ""

    def is_valid(self, closed=True):
        return self.validate(closed=closed).valid

    def quick_valid(self, closed=True):
        """Fast validity check, equivalent to validate().valid but without
        building vertex links.

        For an orientable complex without reversed edges, every vertex link
        is a sphere (and every boundary link a disc) iff the Euler
        characteristic vanishes for closed complexes, or equals half that of
        the boundary surface for bounded ones: doubling reduces the bounded
        case to the closed one, where chi(X) = sum over vertices of
        (1 - chi(link)/2) with every term non-negative.
        """
        if not self._involution[0]:
            return False
        if closed and self.boundary_faces:
            return False
        if self._edge_reversed:
            return False
        if self.orientation_signs() is None:
            return False
        if not self._edge_fans_ok()[0]:
            return False
        if self.is_closed:
            if self.euler_characteristic() != 0:
                return False
            try:
                self.singular_graph()
            except NotAnOrbifold:
                return False
            return True
        boundary_vcs = set()
        for (t, f) in self.boundary_faces:
            for v in FACE_VERTICES[f]:
                boundary_vcs.add(self.vertex_class_of[(t, v)])
        nf = len(self.boundary_faces)
        chi_boundary = len(boundary_vcs) - (3 * nf) // 2 + nf
        if 2 * self.euler_characteristic() != chi_boundary:
            return False
        return self._singular_ok_bounded(boundary_vcs)[0]

    # -- invariants ----------------------------------------------------------

    def euler_characteristic(self):
        return (len(self.vertex_classes) - len(self.edge_classes)
                + len(self.face_classes) - self.tet_count)

    def support_h1(self):
        """First homology of the support manifold as (betti, [torsion divisors]).

        Computed from the quotient cell complex via Smith normal form of the
        boundary maps, exact integer arithmetic throughout.
        """
        nE = len(self.edge_classes)
        nV = len(self.vertex_classes)
        d1 = [[0] * nE for _ in range(nV)]
        for c in range(nE):
            u, w = self.edge_class_ends(c)
            d1[w][c] += 1
            d1[u][c] -= 1
        d2 = [[0] * len(self.face_classes) for _ in range(nE)]
        for j, fc in enumerate(self.face_classes):
            t, f = fc[0]
            a, b, c = FACE_VERTICES[f]
            for (x, y) in ((a, b), (b, c), (c, a)):
                e = EDGE_INDEX[(x, y)]
                cls = self.edge_class_of[(t, e)]
                s = self.edge_slot_sign(t, e)
                if x > y:
                    s = -s
                d2[cls][j] += s
        r1 = _int_rank(d1)
        divisors = _smith_divisors(d2)
        r2 = len(divisors)
        betti = nE - r1 - r2
        torsion = sorted(d for d in divisors if d > 1)
        return betti, torsion

    # -- canonical signature ---------------------------------------------------

    def iso_signature(self):
        """Canonical string: equal iff the decorated triangulations are
        combinatorially isomorphic.

        The encoding runs a breadth-first relabeling from every (tetrahedron,
        labeling) start; first-visited gluings are normalized to the identity
        permutation, so the token stream depends only on the isomorphism
        class.  Edge orders are appended in canonical edge-class order, and
        the lexicographically smallest (tokens, orders) pair wins.
        """
        if self._sig is not None:
            return self._sig
        best = None
        n = self.tet_count
        for t0 in range(n):
            for p0 in ALL_PERMS:
                cand = self._encode_from(t0, p0)
                if best is None or cand < best:
                    best = cand
        tokens, orders = best
        parts = ["%d" % n]
        parts.append(",".join(str(x) for x in tokens))
        parts.append(";".join(str(p) for p in orders))
        self._sig = "|".join(parts)
        return self._sig

    def _encode_from(self, t0, p0):
        n = self.tet_count
        new_perm = {t0: p0}
        order = [t0]
        pos = {t0: 0}
        tokens = []
        i = 0
        while i < len(order):
            t = order[i]
            p = new_perm[t]
            pinv = invert(p)
            for nf in range(4):
                f = pinv[nf]
                g = self.gluings[t][f]
                if g is None:
                    tokens.append(-2)
                    continue
                t2, _, q = g
                if t2 not in pos:
                    # First visit: relabel t2 so this gluing becomes identity.
                    new_perm[t2] = compose(p, invert(q))
                    pos[t2] = len(order)
                    order.append(t2)
                    tokens.append(-3 - pos[t2])
                else:
                    nq = compose(new_perm[t2], compose(q, pinv))
                    tokens.append(pos[t2] * 24 + PERM_INDEX[nq])
            i += 1
        # Unreached tetrahedra (disconnected complexes) sort by their own
        # encodings; connectivity is the normal case so keep this simple.
        if len(order) < n:
            rest = sorted(t for t in range(n) if t not in pos)
            for t in rest:
                pos[t] = len(order)
                order.append(t)
                new_perm[t] = IDENTITY
                tokens.append(-1)
        # Edge orders in canonical class order: classes sorted by their
        # minimal (new tet index, relabeled edge) slot.
        slot_key = {}
        for c, slots in enumerate(self.edge_classes):
            best_key = None
            for (t, e) in slots:
                a, b = TET_EDGES[e]
                p = new_perm[t]
                ne = EDGE_INDEX[(p[a], p[b])]
                key = (pos[t], ne)
                if best_key is None or key < best_key:
                    best_key = key
            slot_key[c] = best_key
        ordered = sorted(range(len(self.edge_classes)), key=lambda c: slot_key[c])
        orders = tuple(self.edge_orders[c] for c in ordered)
        return tuple(tokens), orders

    def canonical_edge_class_order(self):
        """Edge class indices sorted by minimal (tet, edge slot); used as the
        stable keys of the .orb text format."""
        return sorted(range(len(self.edge_classes)),
                      key=lambda c: self.edge_classes[c][0])

    def __repr__(self):
        sing = {c: p for c, p in self.edge_orders.items() if p > 1}
        return "OrbifoldTriangulation(%d tets, %d singular edge classes%s)" % (
            self.tet_count, len(sing), ", closed" if self.is_closed else ", bounded")


# -- integer linear algebra ---------------------------------------------------

def _int_rank(mat):
    """Rank of an integer matrix, by fraction-free Gaussian elimination."""
    m = [row[:] for row in mat]
    if not m or not m[0]:
        return 0
    rows, cols = len(m), len(m[0])
    rank = 0
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            if m[i][c] != 0:
                a, b = m[r][c], m[i][c]
                m[i] = [x * a - y * b for x, y in zip(m[i], m[r])]
        r += 1
        rank += 1
        if r == rows:
            break
    return rank


def _smith_divisors(mat):
    """Nonzero elementary divisors of an integer matrix (Smith normal form)."""
    m = [row[:] for row in mat]
    if not m or not m[0]:
        return []
    rows, cols = len(m), len(m[0])
    divisors = []
    top = 0
    left = 0
    while top < rows and left < cols:
        # Find a pivot with minimal absolute value.
        piv = None
        best = None
        for i in range(top, rows):
            for j in range(left, cols):
                v = abs(m[i][j])
                if v and (best is None or v < best):
                    best = v
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        m[top], m[i0] = m[i0], m[top]
        for row in m:
            row[left], row[j0] = row[j0], row[left]
        again = True
        while again:
            again = False
            p = m[top][left]
            for i in range(top + 1, rows):
                if m[i][left]:
                    q = m[i][left] // p
                    m[i] = [x - q * y for x, y in zip(m[i], m[top])]
                    if m[i][left]:
                        m[top], m[i] = m[i], m[top]
                        again = True
                        break
            if again:
                continue
            for j in range(left + 1, cols):
                if m[top][j]:
                    q = m[top][j] // p
                    for row in m:
                        row[j] -= q * row[left]
                    if m[top][j]:
                        for row in m:
                            row[left], row[j] = row[j], row[left]
                        again = True
                        break
        d = abs(m[top][left])
        divisors.append(d)
        top += 1
        left += 1
    # Normalize divisibility d1 | d2 | ...
    import math
    changed = True
    while changed:
        changed = False
        for i in range(len(divisors) - 1):
            a, b = divisors[i], divisors[i + 1]
            if b % a != 0:
                g = math.gcd(a, b)
                divisors[i], divisors[i + 1] = g, a * b // g
                changed = True
    return divisors


# -- the .orb text format -------------------------------------------------------

def to_orb(tri):
    """Serialize to the .orb text format.

    One ``glue`` line per face pair (smaller slot first), ``order`` lines for
    the singular edge classes keyed by canonical edge class index.
    """
    lines = ["tets %d" % tri.tet_count]
    for t in range(tri.tet_count):
        for f in range(4):
            g = tri.gluings[t][f]
            if g is None:
                continue
            t2, f2, p = g
            if (t2, f2) < (t, f):
                continue
            lines.append("glue %d %d -> %d %d perm %s" % (t, f, t2, f2, perm_to_str(p)))
    canon = tri.canonical_edge_class_order()
    for i, c in enumerate(canon):
        if tri.edge_orders[c] > 1:
            lines.append("order %d %d" % (i, tri.edge_orders[c]))
    return "\n".join(lines) + "\n"


def from_orb(text):
    """Parse the .orb text format; inverse of to_orb up to comments/ordering."""
    tets = None
    glue_lines = []
    order_lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "tets":
            if tets is not None:
                raise MalformedGluing("duplicate tets line")
            tets = int(parts[1])
        elif parts[0] == "glue":
            if len(parts) != 8 or parts[3] != "->" or parts[6] != "perm":
                raise MalformedGluing("bad glue line: %r" % raw)
            glue_lines.append((int(parts[1]), int(parts[2]), int(parts[4]),
                               int(parts[5]), perm_from_str(parts[7])))
        elif parts[0] == "order":
            order_lines.append((int(parts[1]), int(parts[2])))
        else:
            raise MalformedGluing("unrecognized line: %r" % raw)
    if tets is None:
        raise MalformedGluing("missing tets line")
    gluings = [[None] * 4 for _ in range(tets)]
    for (t, f, t2, f2, p) in glue_lines:
        if not (0 <= t < tets and 0 <= t2 < tets):
            raise MalformedGluing("glue line references nonexistent tetrahedron")
        for (a, b, c, d, q) in (((t), (f), (t2), (f2), (p)),
                                ((t2), (f2), (t), (f), invert(p))):
            if gluings[a][b] is not None and gluings[a][b] != (c, d, q):
                raise MalformedGluing("conflicting gluings for face (%d,%d)" % (a, b))
            gluings[a][b] = (c, d, q)
    tri = OrbifoldTriangulation(gluings)
    canon = tri.canonical_edge_class_order()
    orders = {}
    for (i, p) in order_lines:
        if not (0 <= i < len(canon)):
            raise InvalidOrder("order line for nonexistent edge class %d" % i)
        orders[canon[i]] = p
    return tri.with_orders(orders)
