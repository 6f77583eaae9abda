"""Gluing maps, strip selection, markovian rectangles and surgery framing.

The m-th gluing map sends each exit torus to its entrance copy through the
involution followed by a horizontal half shift: -1/2 on the tori with index
i <= 2m and +1/2 on the rest.  Its effect on the boundary laminations is
computed here by exact interval arithmetic on the model tori: the image of a
u-annulus overlaps exactly two consecutive s-annuli ({j-1, j} under the
negative shift, {j, j+1} under the positive one).

The crossing map of the plug (entrance strips to exit strips) is not given
in closed form anywhere; we model it by a piecewise-affine uniformly
hyperbolic map on leaf-constant coordinates.  A point near the selected
strips is charted by the pair (a, b) of its stable and unstable leaf
constants; in these charts both the involution and the half shift act by
swapping the pair, so a full gluing step preserves (a, b) and the crossing
map carries all the hyperbolicity: contraction 1/mu on a, expansion mu on b,
with per-torus anchor offsets.  Unstable anchors are tied to the stable ones
(u_t = -mu * s_pair(t)) so that conjugating by the involution inverts the
model exactly.  Any such model witnesses the markovian fixed point; mu and
the offsets are configuration, not mathematics.

Every value here is frozen and every function pure; models are passed
explicitly (no global registry), so concurrent use needs no coordination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from . import model_torus as mt
from .homology import H1Vector, alpha_class, h1_scale, h1_zero

MINUS_HALF = Fraction(-1, 2)
PLUS_HALF = Fraction(1, 2)


class GluingRestriction(NamedTuple):
    shift: Fraction
    name: str


def _check_indices(m: int, i: int, n: int) -> None:
    if not 0 <= m <= 2 * n:
        raise ValueError(f"m must be in [0, {2 * n}], got {m}")
    if not 1 <= i <= 4 * n:
        raise ValueError(f"i must be in [1, {4 * n}], got {i}")


def gluing_restriction(m: int, i: int, n: int) -> GluingRestriction:
    """Restriction of the m-th gluing map to the i-th exit torus."""
    _check_indices(m, i, n)
    if i <= 2 * m:
        return GluingRestriction(MINUS_HALF, "tau_{-1/2} . sigma")
    return GluingRestriction(PLUS_HALF, "tau_{+1/2} . sigma")


def annulus_intersection_pattern(m: int, i: int, j: int, n: int) -> frozenset[int]:
    """s-annulus indices met by the glued image of the u-annulus A_i^{j,u}.

    Computed from the model tori: the involution carries A_i^{j,u} onto the
    x-interval [j, j+1] of the entrance chart, the half shift moves it, and
    we keep every s-annulus whose overlap has positive length.  All endpoints
    are half-integers, so the circle arithmetic is exact in doubled units.
    """
    _check_indices(m, i, n)
    c = mt.circumference(i)
    j = j % c
    shift = gluing_restriction(m, i, n).shift
    # doubled units: the image of [j, j+1] is [2j + 2*shift, 2j + 2 + 2*shift]
    a0 = 2 * j + (1 if shift > 0 else -1)
    a1 = a0 + 2
    mod = 2 * c
    hits = []
    for ell in range(c):
        if _circle_overlap_positive(a0, a1, 2 * ell, 2 * ell + 2, mod):
            hits.append(ell)
    return frozenset(hits)


def _circle_overlap_positive(a0: int, a1: int, b0: int, b1: int, mod: int) -> bool:
    """Positive-length overlap of two closed circle arcs given as lifted intervals."""
    a0m = a0 % mod
    a1m = a0m + (a1 - a0)
    b0m = b0 % mod
    for t in (-1, 0, 1):
        lo = max(a0m, b0m + t * mod)
        hi = min(a1m, b0m + t * mod + (b1 - b0))
        if hi > lo:
            return True
    return False


@dataclass(frozen=True)
class GluingMap:
    """The m-th gluing map as its per-torus restriction rule."""

    n: int
    m: int

    def __post_init__(self):
        if not 0 <= self.m <= 2 * self.n:
            raise ValueError(f"m must be in [0, {2 * self.n}], got {self.m}")

    def restriction(self, i: int) -> GluingRestriction:
        return gluing_restriction(self.m, i, self.n)


@dataclass(frozen=True)
class FlowDescriptor:
    """Names one flow of the family: plug size n, gluing index m, surgery index k."""

    n: int
    m: int
    k: int
    hyperbolicity_threshold: int = 2

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.m <= 2 * self.n:
            raise ValueError(f"m must be in [0, {2 * self.n}]")
        if self.k == 0:
            raise ValueError("surgery index k must be nonzero")

    @property
    def k_large(self) -> bool:
        """Metadata flag only: |k| above the configured threshold."""
        return abs(self.k) >= self.hyperbolicity_threshold


# -- strips --------------------------------------------------------------------

#: chart interval [0, 1] of the annulus hosting every selected strip; this is
#: the annulus fixed by the symmetry x -> 1-x, which the rectangle mirroring
#: below requires.
STRIP_ANNULUS_INDEX = 0


def pair_torus(t: int) -> int:
    """2j-1 <-> 2j."""
    return t + 1 if t % 2 == 1 else t - 1


def crossing_orbit_index(t: int) -> int:
    """The crossing orbit meeting torus t: j = ceil(t/2)."""
    return (t + 1) // 2


@dataclass(frozen=True)
class StripSelection:
    """The four strips attached to the j-th crossing orbit and their pairings."""

    j: int
    ds: dict[int, mt.ModelStrip]   # stable strips on tori 2j-1, 2j
    du: dict[int, mt.ModelStrip]   # unstable strips on tori 2j-1, 2j

    @property
    def relations(self) -> dict[str, str]:
        a, b = 2 * self.j - 1, 2 * self.j
        return {
            f"Du_{b}": f"Theta(Ds_{a})",
            f"Du_{a}": f"Theta(Ds_{b})",
            f"Ds_{b}": f"sigma.Theta(Ds_{a})",
            f"Ds_{a}": f"sigma.Theta(Ds_{b})",
        }


def select_strips(j: int, n: int,
                  interval: tuple[float, float] = (0.0, 0.5)) -> StripSelection:
    """Stable/unstable strip quadruple for the j-th crossing orbit.

    Both stable strips live in the chart interval [0,1] of their entrance
    torus and the unstable strips are their images under the involution
    (same leaf-constant interval, u-side annulus with the same index).
    """
    if not 1 <= j <= 2 * n:
        raise ValueError(f"j must be in [1, {2 * n}], got {j}")
    lo, hi = interval
    ds, du = {}, {}
    for t in (2 * j - 1, 2 * j):
        ds[t] = mt.ModelStrip(t, "s", mt.ReebAnnulusId(t, "s", STRIP_ANNULUS_INDEX),
                              lo, hi)
        du[t] = mt.ModelStrip(t, "u", mt.ReebAnnulusId(t, "u", STRIP_ANNULUS_INDEX),
                              lo, hi)
    return StripSelection(j=j, ds=ds, du=du)


# -- the affine crossing model ---------------------------------------------------

class InvalidCrossingModel(ValueError):
    pass


class NonMarkovianError(RuntimeError):
    pass


Point = tuple[float, float]


def _swap(p: Point) -> Point:
    return (p[1], p[0])


@dataclass(frozen=True)
class ModelCrossingMap:
    """Uniformly hyperbolic affine model of the first-exit map on leaf constants.

    Out of the stable strip on torus t, the crossing map sends (a, b) to
    (s_off[t] + a/mu, -mu*s_off[pair(t)] + mu*b) on the exit strip of the
    partner torus.  The unstable anchor choice makes sigma-conjugation equal
    the inverse model identically.
    """

    n: int
    mu: float = 3.0
    s_offsets: dict[int, float] = field(default_factory=dict)
    interval: tuple[float, float] = (0.0, 0.5)

    def __post_init__(self):
        if self.mu <= 1:
            raise InvalidCrossingModel("expansion factor mu must exceed 1")
        self.validate()

    def s_off(self, t: int) -> float:
        if t in self.s_offsets:
            return self.s_offsets[t]
        return 0.15 if t % 2 == 1 else 0.10

    def u_off(self, t: int) -> float:
        return -self.mu * self.s_off(pair_torus(t))

    def theta(self, t: int, p: Point) -> Point:
        """Crossing map out of the stable strip on torus t."""
        a, b = p
        return (self.s_off(t) + a / self.mu, self.u_off(t) + self.mu * b)

    def theta_inverse(self, t: int, p: Point) -> Point:
        """Inverse crossing map back into the stable strip on torus t."""
        a, b = p
        return ((a - self.s_off(t)) * self.mu, (b - self.u_off(t)) / self.mu)

    def glue(self, p: Point) -> Point:
        """Gluing step in constants: the involution and the half shift each swap
        the pair, so their composition is the identity."""
        return _swap(_swap(p))

    def return_step(self, t: int, p: Point) -> Point:
        """One application of (gluing . crossing) out of torus t's rectangle."""
        return self.glue(self.theta(t, p))

    def sigma_conjugate(self, t: int, p: Point) -> Point:
        """sigma . Theta . sigma evaluated against the strip on torus t."""
        return _swap(self.theta(t, _swap(p)))

    def validate(self) -> None:
        """Every rectangle image must cross the partner rectangle markovianly."""
        lo, hi = self.interval
        if not lo < hi:
            raise InvalidCrossingModel("empty strip interval")
        for t in range(1, 4 * self.n + 1):
            t2 = pair_torus(t)
            img_lo = self.s_off(t) + lo / self.mu
            img_hi = self.s_off(t) + hi / self.mu
            if not (lo < img_lo and img_hi < hi):
                raise InvalidCrossingModel(
                    f"stable image of torus {t} strip misses the torus {t2} strip")
            pre_lo = (lo - self.u_off(t)) / self.mu
            pre_hi = (hi - self.u_off(t)) / self.mu
            if not (lo < pre_lo and pre_hi < hi):
                raise InvalidCrossingModel(
                    f"unstable window of torus {t} strip misses its rectangle")


# -- rectangles -----------------------------------------------------------------

@dataclass(frozen=True)
class RectangleChoice:
    """One connected component of a glued strip intersection.

    The component with index c is the c-th winding of the spiral overlap; all
    components share the leaf-constant box.  L components are the mirror
    images of R components under x -> 1-x, which swaps the two x-regions and
    preserves both leaf constants.
    """

    j: int
    chirality: str              # "R" | "L"
    component: int
    torus: int
    box_s: tuple[float, float]
    box_u: tuple[float, float]
    x_region: tuple[Fraction, Fraction]


def rectangle_chirality(m: int, j: int) -> str:
    """Which components the m-th flow uses at the j-th crossing orbit."""
    return "L" if j <= m else "R"


def _x_region(chirality: str) -> tuple[Fraction, Fraction]:
    if chirality == "R":
        return (Fraction(1, 2), Fraction(1))
    return (Fraction(0), Fraction(1, 2))


def rectangles(model: ModelCrossingMap, m: int, j: int,
               count: int) -> list[RectangleChoice]:
    """First `count` components of the glued-strip intersection at torus 2j-1."""
    if count < 0:
        raise ValueError("count must be >= 0")
    model.validate()
    chir = rectangle_chirality(m, j)
    box = model.interval
    return [RectangleChoice(j, chir, c, 2 * j - 1, box, box, _x_region(chir))
            for c in range(count)]


def theta_rectangle(r: RectangleChoice) -> RectangleChoice:
    """Mirror image under x -> 1-x: swaps chirality, preserves constants."""
    chir = "L" if r.chirality == "R" else "R"
    return RectangleChoice(r.j, chir, r.component, r.torus, r.box_s, r.box_u,
                           _x_region(chir))


# -- the markovian fixed point ----------------------------------------------------

@dataclass(frozen=True)
class FixedPointReport:
    j: int
    chirality: str
    point: Point                 # constants on torus 2j-1
    image_point: Point           # constants on torus 2j
    residual: float
    iterations: int
    itinerary: tuple[str, ...]


def locate_periodic_orbit(model: ModelCrossingMap, m: int, j: int,
                          start: Point | None = None, tol: float = 1e-9,
                          max_iter: int = 500) -> FixedPointReport:
    """Unique fixed point of the squared return map on the chosen rectangle pair.

    The stable coordinate is iterated forward and the unstable one through
    the inverse map, so both iterations contract; the residual is measured on
    the forward map.  With the affine model the fixed point is unique; for
    the underlying flow uniqueness needs the hyperbolicity that the model
    builds in.
    """
    model.validate()
    t1, t2 = 2 * j - 1, 2 * j
    chir = rectangle_chirality(m, j)
    lo, hi = model.interval
    a, b = start if start is not None else ((lo + hi) / 2, (lo + hi) / 2)

    def fwd(p: Point) -> Point:
        return model.return_step(t2, model.return_step(t1, p))

    # the unstable factor is expanding, so iterate it through the inverse;
    # its affine coefficients are read off the forward map by probing
    b0 = fwd((0.0, 0.0))[1]
    b_slope = fwd((0.0, 1.0))[1] - b0
    if abs(b_slope) <= 1.0:
        raise InvalidCrossingModel("return map does not expand the unstable constant")

    for it in range(1, max_iter + 1):
        a = fwd((a, b))[0]
        b = (b - b0) / b_slope
        fa, fb = fwd((a, b))
        residual = max(abs(fa - a), abs(fb - b))
        if residual < tol:
            pt = (a, b)
            if not (lo <= a <= hi and lo <= b <= hi):
                raise NonMarkovianError(
                    "fixed point escaped the rectangle: invalid crossing model")
            return FixedPointReport(
                j=j, chirality=chir, point=pt,
                image_point=model.return_step(t1, pt),
                residual=residual, iterations=it,
                itinerary=(f"T_{t1}", f"T_{t2}"))
    raise NonMarkovianError(
        f"no convergence after {max_iter} iterations: non-markovian configuration")


# -- surgery framing ---------------------------------------------------------------

@dataclass(frozen=True)
class SurgeryFraming:
    """Meridian/longitude data of the j-th crossing orbit and its surgered meridian."""

    j: int
    k: int
    meridian: H1Vector
    longitude: H1Vector
    surgered_meridian: H1Vector


def surgery_framing(j: int, k: int, n: int) -> SurgeryFraming:
    """Classes of the framing curves: [mu]=0, [lambda]=[alpha_j], [mu + k lambda]=k[alpha_j]."""
    if k == 0:
        raise ValueError("surgery index k must be nonzero")
    if not 1 <= j <= 2 * n:
        raise ValueError(f"j must be in [1, {2 * n}], got {j}")
    lam = alpha_class(j, n)
    return SurgeryFraming(j=j, k=k, meridian=h1_zero(n), longitude=lam,
                          surgered_meridian=h1_scale(k, lam))


# -- orientation bookkeeping --------------------------------------------------------

#: the parity chain behind "the local stable set is an annulus, never a Moebius
#: band": each step is an orientation-preserving equivalence, so the composed
#: sign is +1 for every (m, j).
LOCAL_STABLE_PARITY_CHAIN = (
    ("involution conjugates the crossing map to its inverse", 1),
    ("a homeomorphism preserves orientation iff its inverse does", 1),
    ("half-shifted leaf frames form direct bases on both tori", 1),
    ("the glued return map preserves the boundary orientation", 1),
)


def local_stable_is_annulus(m: int, j: int) -> bool:
    """True for every flow and crossing orbit; asserts the stored parity chain."""
    sign = 1
    for _, s in LOCAL_STABLE_PARITY_CHAIN:
        sign *= s
    if sign != 1:
        raise AssertionError("orientation parity chain is inconsistent")
    return True
