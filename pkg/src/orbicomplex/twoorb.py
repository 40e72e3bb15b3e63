"""Closed orientable 2-orbifolds and their classification.

A 2-orbifold here is an orientable support genus together with a multiset of
cone orders.  The genus-0 cases split into the bad ones (one cone point, or
two of different orders), the spherical ones (boundaries of the discal
3-orbifolds: no cones, two equal cones, or an admissible vertex triple) and
everything else.
"""

from dataclasses import dataclass
from fractions import Fraction

from .orbtri import InvalidOrder, admissible_triple


@dataclass(frozen=True)
class TwoOrbifold:
    genus: int
    cone_orders: tuple

    def __post_init__(self):
        if self.genus < 0:
            raise InvalidOrder("genus must be >= 0")
        object.__setattr__(self, "cone_orders", tuple(sorted(self.cone_orders)))
        for p in self.cone_orders:
            if not isinstance(p, int) or p < 2:
                raise InvalidOrder("cone order %r out of range (need integers >= 2)" % (p,))


@dataclass(frozen=True)
class TwoOrbClass:
    tag: str                 # Bad | SphericalOrdinary | SphericalCyclic | SphericalVertex | Other
    orders: tuple = ()

    def __str__(self):
        if self.orders:
            return "%s%s" % (self.tag, self.orders)
        return self.tag

    @property
    def spherical(self):
        return self.tag in ("SphericalOrdinary", "SphericalCyclic", "SphericalVertex")


BAD = TwoOrbClass("Bad")
SPHERICAL_ORDINARY = TwoOrbClass("SphericalOrdinary")
OTHER = TwoOrbClass("Other")


def classify(s: TwoOrbifold) -> TwoOrbClass:
    """Classify a closed orientable 2-orbifold.

    Genus 0 with one cone point, or two cone points of different orders, is
    bad (covered by no surface); no cones, {p,p}, and admissible triples give
    the spherical families; anything else is Other.
    """
    if s.genus > 0:
        return OTHER
    cones = s.cone_orders
    if len(cones) == 0:
        return SPHERICAL_ORDINARY
    if len(cones) == 1:
        return BAD
    if len(cones) == 2:
        p, q = cones
        return TwoOrbClass("SphericalCyclic", (p,)) if p == q else BAD
    if len(cones) == 3 and admissible_triple(*cones):
        return TwoOrbClass("SphericalVertex", cones)
    return OTHER


def orb_euler(s: TwoOrbifold) -> Fraction:
    """Orbifold Euler characteristic 2 - 2g - sum(1 - 1/p), exact."""
    chi = Fraction(2 - 2 * s.genus)
    for p in s.cone_orders:
        chi -= 1 - Fraction(1, p)
    return chi


def boundary_of_discal(kind: str, *orders) -> TwoOrbifold:
    """The spherical 2-orbifold bounding a discal 3-orbifold.

    kind is 'ordinary' (no parameters), 'cyclic' (one order p, both boundary
    points of the trivial arc) or 'vertex' (an admissible triple).
    """
    if kind == "ordinary":
        if orders:
            raise InvalidOrder("ordinary discal orbifolds take no orders")
        return TwoOrbifold(0, ())
    if kind == "cyclic":
        (p,) = orders
        if p < 2:
            raise InvalidOrder("cyclic order must be >= 2")
        return TwoOrbifold(0, (p, p))
    if kind == "vertex":
        p, q, r = orders
        if not admissible_triple(p, q, r):
            raise InvalidOrder("inadmissible vertex triple %s" % (orders,))
        return TwoOrbifold(0, (p, q, r))
    raise InvalidOrder("unknown discal kind %r" % (kind,))
