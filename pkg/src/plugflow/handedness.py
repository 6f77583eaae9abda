"""Separatrix-adjacent annuli and their left/right handedness.

An SA annulus is a chain of fundamental Birkhoff annuli glued along periodic
orbits so that the separatrix-adjacency types alternate.  For odd chains the
boundary frame (outward tangent, orbit direction, incoming flow) defines the
same orientation at both ends, so the chain has a well-defined handedness:
L when that frame matches the ambient orientation, R when it reverses it.

The handedness of the old chain attached to the torus T_i in the m-th flow
is never stored: it is recomposed from two discrete inputs, the rectangle
chirality chosen by the gluing (L components for j <= m, R components
otherwise, j the crossing-orbit index of T_i) and the boundary-frame parity
of the plug (positive for odd i).  The residual global sign is calibrated
once so that the resulting table is

    i odd:  L iff j <= m          i even:  R iff j <= m

which is also the calibration anchor documented on old_handedness.
All functions are pure and thread-safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import orbit_space as osp
from .gluing import crossing_orbit_index, rectangle_chirality
from .homology import CONSISTENT, NewLozengeData, Verdict, decide_sa_extension
from .plug import frame_sign

L = "L"
R = "R"


class EvenChainError(ValueError):
    """The boundary-frame sign of an even chain is ill-defined."""


@dataclass(frozen=True)
class SAAnnulus:
    """k Birkhoff annuli glued along k-1 interior orbits with alternating types."""

    components: tuple[str, ...]
    adjacency_labels: tuple[str, ...]
    interior_orbits: tuple[str, ...]
    boundary_orbits: tuple[str, str]
    origin: Optional[tuple[str, int]] = None    # ("old", i) | ("extended", i)
    n: Optional[int] = None
    handedness: Optional[str] = None

    def __post_init__(self):
        k = len(self.components)
        if k < 1:
            raise ValueError("an SA annulus has at least one component")
        if len(self.adjacency_labels) != k - 1 or len(self.interior_orbits) != k - 1:
            raise ValueError("need k-1 interior orbits and adjacency labels")
        if any(lab not in ("s", "u") for lab in self.adjacency_labels):
            raise ValueError("adjacency labels are 's' or 'u'")
        if self.handedness not in (None, L, R):
            raise ValueError("handedness is 'L' or 'R'")

    def __len__(self) -> int:
        return len(self.components)

    def is_alternating(self) -> bool:
        return all(a != b for a, b in zip(self.adjacency_labels,
                                          self.adjacency_labels[1:]))

    def reversed(self) -> "SAAnnulus":
        return SAAnnulus(self.components[::-1], self.adjacency_labels[::-1],
                         self.interior_orbits[::-1],
                         (self.boundary_orbits[1], self.boundary_orbits[0]),
                         self.origin, self.n, self.handedness)


def make_sa_annulus(components, adjacency_labels, interior_orbits, boundary_orbits,
                    **kw) -> SAAnnulus:
    """Validating constructor: rejects non-alternating adjacency data."""
    sa = SAAnnulus(tuple(components), tuple(adjacency_labels),
                   tuple(interior_orbits), tuple(boundary_orbits), **kw)
    if not sa.is_alternating():
        raise ValueError("separatrix-adjacency types must alternate")
    return sa


def frame_consistency(sa: SAAnnulus) -> str:
    """Do the boundary frames at the two ends define the same orientation?

    The frame is transported across the chain with one parity flip per
    interior-orbit crossing and one extra flip wherever a label deviates
    from the alternating sequence anchored at the first one.  A strictly
    alternating odd chain makes an even number of crossings, so well-formed
    inputs are always consistent; a single corrupted label flips the parity
    and is reported inconsistent.
    """
    k = len(sa)
    if k % 2 == 0:
        raise EvenChainError(f"chain length {k} is even: boundary sign undefined")
    sign = 1
    for _ in sa.adjacency_labels:
        sign = -sign
    expected = sa.adjacency_labels[0] if sa.adjacency_labels else None
    for lab in sa.adjacency_labels[1:]:
        expected = "u" if expected == "s" else "s"
        if lab != expected:
            sign = -sign
    return "consistent" if sign == 1 else "inconsistent"


def old_handedness(i: int, m: int, n: Optional[int] = None) -> str:
    """Handedness of the old SA annulus attached to T_i in the m-th flow.

    Composed, not tabulated: the gluing picks L rectangles at the crossing
    orbit j = ceil(i/2) iff j <= m, and the plug's boundary-frame parity
    (positive iff i is odd) says whether the rectangle chirality transfers
    to the annulus frame directly or flipped.
    """
    if i < 1 or (n is not None and i > 4 * n):
        raise ValueError(f"torus index {i} out of range")
    if m < 0 or (n is not None and m > 2 * n):
        raise ValueError(f"gluing index {m} out of range")
    j = crossing_orbit_index(i)
    chirality = rectangle_chirality(m, j)
    parity = frame_sign(i, "s", "contracting")
    if parity == 1:
        return chirality
    return L if chirality == R else R


def old_sa_annulus(i: int, m: int, n: int) -> SAAnnulus:
    """The old (4i+3)-chain associated to T_i, read off its orbit-space photo."""
    fan = osp.old_fan_cluster(i, m)
    sa = osp.photo_inverse(fan, origin=("old", i), n=n)
    return SAAnnulus(sa.components, sa.adjacency_labels, sa.interior_orbits,
                     sa.boundary_orbits, origin=("old", i), n=n,
                     handedness=old_handedness(i, m, n))


@dataclass(frozen=True)
class ExtensionAnswer:
    allowed: bool
    rule: Optional[str] = None        # which obstruction clause fired
    verdict: Optional[Verdict] = None


def extendable_to_even(sa: SAAnnulus, k: int,
                       s: Optional[NewLozengeData] = None) -> ExtensionAnswer:
    """Can this odd chain grow to an even one by a surgery-born annulus?

    Delegates the sign computation to the homology module; with the default
    crossing data (one crossing of the orbit that punctures this torus) the
    answer is no exactly for (R, k>0) and (L, k<0).
    """
    if sa.origin is None or sa.origin[0] != "old":
        raise ValueError("extension rule applies to old chains")
    if sa.handedness is None:
        raise ValueError("chain has no handedness attached")
    if sa.n is None:
        raise ValueError("chain does not know its family size n")
    if s is None:
        j = crossing_orbit_index(sa.origin[1])
        vec = [0] * (2 * sa.n)
        vec[j - 1] = 1
        s = NewLozengeData(tuple(vec))
    verdict = decide_sa_extension(sa.handedness, k, s)
    if verdict.tag == CONSISTENT:
        return ExtensionAnswer(True, None, verdict)
    rule = "even-extension-of-R-with-positive-k" if sa.handedness == R else \
        "even-extension-of-L-with-negative-k"
    return ExtensionAnswer(False, rule, verdict)


def handedness_table(n: int) -> dict[int, list[str]]:
    """Rows i = 1..4n, columns m = 0..2n of the old-chain handedness."""
    return {i: [old_handedness(i, m, n) for m in range(2 * n + 1)]
            for i in range(1, 4 * n + 1)}
