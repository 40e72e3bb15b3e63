"""Recognition of small orbifolds up to triangulation moves.

Two decorated triangulations present the same orbifold whenever they are
connected by the (orbifold-preserving) local moves; equivalence is tested by
a meet-in-the-middle search collecting canonical signatures of forms reached
from both sides.  A signature meeting certifies equivalence; invariant
mismatches (support homology, singular profile) certify inequivalence;
otherwise the verdict is None (inconclusive within budget).

The exceptional orbifolds are recognized against the certified reference
models; the invariant key pins down the only possible candidate first, so at
most one equivalence search runs.
"""

import random

from . import moves
from . import models
from .spine import ExceptionalKind


def invariant_key(tri):
    """Cheap complete-enough invariants: support homology plus the singular
    graph profile (circle orders, arc orders, vertex triples)."""
    sg = tri.singular_graph()
    circles = tuple(sorted(o for _, o in sg.circles))
    arcs = tuple(sorted(o for _, _, o in sg.arcs))
    germs = tri.germs()
    triples = tuple(sorted(tuple(sorted(tri.edge_orders[c] for c, _ in germs[v]))
                           for v in sg.vertices_of_s))
    return (tri.support_h1(), circles, arcs, triples)


class _Explorer:
    """Randomized exploration of the move graph from one triangulation,
    collecting signatures of all small forms encountered."""

    def __init__(self, tri, rng, cap_margin=4):
        self.rng = rng
        small = moves.simplify(tri, rounds=60,
                               seed=rng.randrange(1 << 30), stop_at=1)
        self.best = small.tet_count
        self.cap = small.tet_count + cap_margin
        self.pool = [small]
        self.sigs = {small.iso_signature()}

    def step(self):
        rng = self.rng
        base = self.pool[rng.randrange(len(self.pool))]
        cur = base
        for _ in range(rng.randrange(1, 5)):
            choices = [(t, f) for t in range(cur.tet_count) for f in range(4)
                       if cur.gluings[t][f] is not None and cur.gluings[t][f][0] != t]
            if not choices:
                break
            t, f = choices[rng.randrange(len(choices))]
            up = moves.two_three(cur, t, f)
            if up is not None:
                cur = up
            down = moves.greedy_simplify(cur)
            self._offer(down)
            cur = down
        self._offer(moves.simplify(cur, rounds=15,
                                   seed=rng.randrange(1 << 30), stop_at=1))

    def _offer(self, tri):
        if tri.tet_count > self.cap:
            return
        sig = tri.iso_signature()
        if sig not in self.sigs:
            self.sigs.add(sig)
            if len(self.pool) < 60:
                self.pool.append(tri)
            else:
                self.pool[self.rng.randrange(len(self.pool))] = tri
        if tri.tet_count < self.best:
            self.best = tri.tet_count
            self.cap = min(self.cap, tri.tet_count + 4)


def equivalent(a, b, seed=0, rounds=25):
    """True if a and b present the same orbifold (signature meet under
    moves), False if an invariant separates them, None when inconclusive."""
    if invariant_key(a) != invariant_key(b):
        return False
    if a.iso_signature() == b.iso_signature():
        return True
    rng = random.Random(seed)
    ea = _Explorer(a, rng)
    eb = _Explorer(b, rng)
    if ea.sigs & eb.sigs:
        return True
    for _ in range(rounds):
        ea.step()
        eb.step()
        if ea.sigs & eb.sigs:
            return True
    return None


_EXCEPTIONAL_CACHE = {}


def _model_for(kind: ExceptionalKind):
    key = (kind.tag, kind.orders)
    if key not in _EXCEPTIONAL_CACHE:
        if kind.tag == "S3o":
            m = models.one_tet_s3()
        elif kind.tag == "S3c":
            p = kind.orders[0]
            m = models.one_tet_s3() if p == 1 else models.spherical_cyclic(p)
        elif kind.tag == "S3v":
            m = models.spherical_vertex(*kind.orders)
        elif kind.tag == "P3Fp":
            m = models.projective_space(kind.orders[0])
        else:
            m = models.lens_l31(kind.orders[0])
        _EXCEPTIONAL_CACHE[key] = m
    return _EXCEPTIONAL_CACHE[key]


def exceptional_candidate(tri):
    """The only exceptional kind compatible with the invariants, or None."""
    h1, circles, arcs, triples = invariant_key(tri)
    if arcs or triples:
        if circles or h1 != (0, []) or len(triples) != 2:
            return None
        if len(arcs) != 3 or triples[0] != triples[1]:
            return None
        try:
            return ExceptionalKind("S3v", triples[0])
        except Exception:
            return None
    if len(circles) > 1:
        return None
    p = circles[0] if circles else 1
    if h1 == (0, []):
        return ExceptionalKind("S3c", (p,))
    if h1 == (0, [2]):
        return ExceptionalKind("P3Fp", (p,))
    if h1 == (0, [3]):
        return ExceptionalKind("L31Fp", (p,))
    return None


def recognize_exceptional(tri, seed=0, rounds=25):
    """The ExceptionalKind this triangulation presents, or None when it is
    not recognized (either genuinely not exceptional or out of budget)."""
    kind = exceptional_candidate(tri)
    if kind is None:
        return None
    verdict = equivalent(tri, _model_for(kind), seed=seed, rounds=rounds)
    if verdict is True:
        if kind.tag == "S3c" and kind.orders == (1,):
            return ExceptionalKind("S3o")
        return kind
    return None


def is_kind(tri, kind: ExceptionalKind, seed=0, rounds=25):
    """Three-valued test whether tri presents the given exceptional
    orbifold: False on invariant mismatch, True on signature meet."""
    return equivalent(tri, _model_for(kind), seed=seed, rounds=rounds)
