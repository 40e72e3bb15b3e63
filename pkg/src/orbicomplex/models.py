"""Reference triangulations of the small orbifolds used throughout.

Everything here is certified by construction:

* discal orbifolds are cones over two-triangle pillow spheres, with the
  singular radii realized as cone edges;
* the spherical orbifolds are doubles of the corresponding discal ones;
* the lens spaces come from the join of two triangulated circles, quotiented
  by the obvious free cyclic rotation.  The join realizes the free circle
  action whose orbits fibre the quotient with no exceptional fibres, so the
  image of a polar circle is a regular fibre; decorating that edge class with
  a cone order gives the fibred circle orbifolds over P^3 and L(3,1).
"""

from .orbtri import OrbifoldTriangulation
from .perm import invert

# Permutations written as tuples; (1,0,2,3) swaps vertices 0 and 1, etc.
_P1023 = (1, 0, 2, 3)
_P0132 = (0, 1, 3, 2)


def double(tri):
    """Double a bounded triangulation: glue a second copy to the first along
    every boundary face by the identity permutation."""
    n = tri.tet_count
    gl = [list(t) for t in tri.gluings]
    gl += [[None if g is None else (g[0] + n, g[1], g[2]) for g in t] for t in tri.gluings]
    for (t, f) in tri.boundary_faces:
        gl[t][f] = (t + n, f, (0, 1, 2, 3))
        gl[t + n][f] = (t, f, (0, 1, 2, 3))
    orders = {}
    out = OrbifoldTriangulation(gl)
    # Transfer orders: each old edge slot keeps its order in both copies.
    for c, slots in enumerate(tri.edge_classes):
        p = tri.edge_orders[c]
        if p > 1:
            for (t, e) in slots:
                orders[out.edge_class_of[(t, e)]] = p
                orders[out.edge_class_of[(t + n, e)]] = p
    return out.with_orders(orders)


def discal_ball(marks=()):
    """Cone over a two-triangle pillow sphere: a triangulated 3-ball.

    marks is a tuple of up to three cone orders attached to the radii at
    pillow vertices 0, 1, 2; order 1 entries are non-singular.  With marks
    (p, p) this is the cyclic discal orbifold, with an admissible (p, q, r)
    the vertex discal one, with no marks the ordinary ball.

    Tetrahedron layout: both tets have vertices (0,1,2) on the pillow and
    vertex 3 at the cone apex; side faces are glued in pairs, the two faces
    opposite the apex stay as boundary.
    """
    gl = [[None] * 4 for _ in range(2)]
    for f in range(3):
        gl[0][f] = (1, f, (0, 1, 2, 3))
        gl[1][f] = (0, f, (0, 1, 2, 3))
    tri = OrbifoldTriangulation(gl)
    orders = {}
    for v, p in enumerate(marks):
        if p > 1:
            # Radius from pillow vertex v to the apex = edge {v, 3} of tet 0.
            from .perm import EDGE_INDEX
            orders[tri.edge_class_of[(0, EDGE_INDEX[(v, 3)])]] = p
    return tri.with_orders(orders)


def sphere_s3():
    """The double of a single tetrahedron: a 2-tet 3-sphere."""
    gl = [[(1, f, (0, 1, 2, 3)) for f in range(4)],
          [(0, f, (0, 1, 2, 3)) for f in range(4)]]
    return OrbifoldTriangulation(gl)


def spherical_cyclic(p):
    """S^3 with an unknotted circle of order p: the double of the cyclic
    discal ball, so the circle is certified trivial."""
    return double(discal_ball((p, p)))


def spherical_vertex(p, q, r):
    """The theta-graph orbifold: double of the vertex discal ball."""
    return double(discal_ball((p, q, r)))


def _join_lens(k):
    """L(k,1) as the join of two k-gon circles quotiented by the diagonal
    rotation; k = 2 gives P^3, k = 3 gives L(3,1).

    Representative tetrahedra are indexed by j with vertex labels
    (0,1,2,3) = (A_i, A_{i+1}, B_j, B_{j+1}); the quotient identifies
    (i,j) with (i+1,j+1).  The image of the A-circle is the single edge
    class containing edge {0,1} of every tetrahedron, a regular fibre of
    the induced free circle action.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    gl = [[None] * 4 for _ in range(k)]
    for j in range(k):
        gl[j][0] = ((j - 1) % k, 1, _P1023)
        gl[j][1] = ((j + 1) % k, 0, _P1023)
        gl[j][2] = ((j + 1) % k, 3, _P0132)
        gl[j][3] = ((j - 1) % k, 2, _P0132)
    return OrbifoldTriangulation(gl)


def projective_space(p=1):
    """(P^3, F_p): projective space with its regular-fibre circle of order p
    (plain P^3 for p = 1)."""
    tri = _join_lens(2)
    if p == 1:
        return tri
    return tri.with_orders({tri.edge_class_of[(0, 0)]: p})


def lens_l31(p=1):
    """(L(3,1), F_p): the lens space with its regular-fibre circle of order p
    (plain L(3,1) for p = 1)."""
    tri = _join_lens(3)
    if p == 1:
        return tri
    return tri.with_orders({tri.edge_class_of[(0, 0)]: p})


def one_tet_s3():
    """The 1-tetrahedron, 1-vertex 3-sphere; its two edge classes are loops
    of degree 5 and 1."""
    gl = [[(0, 1, (1, 0, 2, 3)), (0, 0, (1, 0, 2, 3)),
           (0, 3, (1, 2, 3, 0)), (0, 2, (3, 0, 1, 2))]]
    return OrbifoldTriangulation(gl)
