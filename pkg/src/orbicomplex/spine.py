"""Dual special spines and the complexity weight of a decorated triangulation.

The 2-skeleton of the dual cellularization of a closed triangulation is a
special polyhedron: spine vertices are dual to tetrahedra, edges of its
singular set to face classes, and 2-dimensional regions to edge classes.
Each triangulation edge crosses its dual region exactly once, so a singular
edge class of order p contributes a single order-p crossing to that region
and p-1 to the complexity weight.

The closed-form complexity table covers the orbifolds whose minimal spines
are never special (a 2-disc, the projective plane, the triple hat, and an
unknotted 2-sphere respectively); their values cannot be reached by any
triangulation weight, which always counts at least one spine vertex.
"""

from dataclasses import dataclass, field

from .orbtri import InvalidOrder, admissible_triple
from .perm import EDGE_INDEX, FACE_VERTICES


@dataclass
class SpineComplex:
    """Combinatorics of the dual spine: counts, incidences and the singular
    crossings carried by each region."""
    vertices: list           # tetrahedron indices
    edges: list              # face classes (tuples of (tet, face) slots)
    regions: list            # edge classes (lists of (tet, edge) slots)
    edge_corners: list       # per spine edge: the 3 region indices at its corners
    vertex_germs: list       # per spine vertex: the 4 spine edge indices at it
    region_crossings: list   # per region: list of (order, multiplicity)

    @property
    def vertex_count(self):
        return len(self.vertices)


@dataclass(frozen=True)
class ComplexityWeight:
    vertex_count: int
    singular_contribution: int

    @property
    def total(self):
        return self.vertex_count + self.singular_contribution


@dataclass(frozen=True)
class ExceptionalKind:
    """One of the orbifolds with non-special minimal spines: S3o, S3c(p),
    S3v(p,q,r), (P3,F_p) or (L31,F_p).  Order 1 parameters give the plain
    manifolds S3, P3 and L(3,1)."""
    tag: str                 # S3o | S3c | S3v | P3Fp | L31Fp
    orders: tuple = ()

    def __post_init__(self):
        if self.tag == "S3o":
            if self.orders:
                raise InvalidOrder("S3o takes no orders")
        elif self.tag in ("S3c", "P3Fp", "L31Fp"):
            if len(self.orders) != 1 or self.orders[0] < 1:
                raise InvalidOrder("%s takes one order >= 1" % self.tag)
        elif self.tag == "S3v":
            if len(self.orders) != 3 or not admissible_triple(*self.orders):
                raise InvalidOrder("inadmissible vertex triple %s" % (self.orders,))
            object.__setattr__(self, "orders", tuple(sorted(self.orders)))
        else:
            raise InvalidOrder("unknown exceptional tag %r" % (self.tag,))

    def __str__(self):
        return "%s%s" % (self.tag, self.orders if self.orders else "")


def dual_spine(tri) -> SpineComplex:
    """The dual special spine of a valid closed decorated triangulation."""
    face_index = {}
    for i, fc in enumerate(tri.face_classes):
        for slot in fc:
            face_index[slot] = i
    edge_corners = []
    for fc in tri.face_classes:
        t, f = fc[0]
        a, b, c = FACE_VERTICES[f]
        corners = [tri.edge_class_of[(t, EDGE_INDEX[(x, y)])]
                   for (x, y) in ((a, b), (a, c), (b, c))]
        edge_corners.append(corners)
    vertex_germs = [[face_index[(t, f)] for f in range(4)] for t in range(tri.tet_count)]
    crossings = []
    for c in range(len(tri.edge_classes)):
        p = tri.edge_orders[c]
        crossings.append([(p, 1)] if p >= 2 else [])
    return SpineComplex(list(range(tri.tet_count)), list(tri.face_classes),
                        list(tri.edge_classes), edge_corners, vertex_germs, crossings)


def complexity_weight(tri) -> ComplexityWeight:
    """c(P, S(X)) for the dual spine P: one vertex per tetrahedron plus p-1
    for every singular edge class."""
    sing = sum(tri.edge_orders[c] - 1 for c in range(len(tri.edge_classes)))
    return ComplexityWeight(tri.tet_count, sing)


def region_singularity_check(spine: SpineComplex) -> bool:
    """True iff every region meets the singular set at most once.  Dual
    spines satisfy this by construction; the check guards hand-built or
    surgered spine complexes."""
    for crossings in spine.region_crossings:
        if sum(mult for _, mult in crossings) > 1:
            return False
    return True


def exceptional_complexity(kind: ExceptionalKind) -> int:
    """The closed-form complexity of an exceptional orbifold: p-1 for the
    circle families, (p-1)+(q-1)+(r-1) for the theta-graph ones, 0 for S3o."""
    if kind.tag == "S3o":
        return 0
    if kind.tag in ("S3c", "P3Fp", "L31Fp"):
        return kind.orders[0] - 1
    return sum(p - 1 for p in kind.orders)
