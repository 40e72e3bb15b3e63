"""Permutations of {0,1,2,3}, used as face gluing maps between tetrahedra.

A permutation is stored as a 4-tuple ``p`` with ``p[i]`` the image of vertex
label ``i``.  All 24 permutations, composition, inverse and sign tables are
precomputed once at import time.
"""

from itertools import permutations

ALL_PERMS = tuple(permutations(range(4)))
PERM_INDEX = {p: i for i, p in enumerate(ALL_PERMS)}

IDENTITY = (0, 1, 2, 3)


def compose(p, q):
    """Return p after q, i.e. the map i -> p[q[i]]."""
    return (p[q[0]], p[q[1]], p[q[2]], p[q[3]])


def invert(p):
    inv = [0] * 4
    for i in range(4):
        inv[p[i]] = i
    return tuple(inv)


def sign(p):
    """Parity of the permutation: +1 for even, -1 for odd."""
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                s = -s
    return s


PERM_SIGN = {p: sign(p) for p in ALL_PERMS}

# The 6 edges of a tetrahedron, as sorted vertex pairs, in a fixed order.
# EDGE_INDEX maps either orientation of a pair to the edge number.
TET_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {}
for _k, (_a, _b) in enumerate(TET_EDGES):
    EDGE_INDEX[(_a, _b)] = _k
    EDGE_INDEX[(_b, _a)] = _k

# Faces are labelled by the opposite vertex; FACE_VERTICES[f] lists the three
# vertices spanning face f in increasing order.
FACE_VERTICES = tuple(tuple(v for v in range(4) if v != f) for f in range(4))


def face_perms(f, g):
    """All permutations mapping face f onto face g (i.e. sending f to g)."""
    return [p for p in ALL_PERMS if p[f] == g]


def perm_to_str(p):
    return "".join(str(v) for v in p)


def perm_from_str(s):
    if len(s) != 4 or sorted(s) != ["0", "1", "2", "3"]:
        raise ValueError("not a permutation of 0123: %r" % (s,))
    return tuple(int(c) for c in s)
