"""Executable case analysis distinguishing the flows of one family.

Given two gluing indices m1 < m2, an orbit-preserving homeomorphism between
the corresponding surgered flows would act on the old fan clusters.  The
orientation-preserving branch dies on the handedness table: every torus
whose crossing-orbit index lies in (m1, m2] carries old chains of opposite
handedness in the two flows, yet a preserving map sends unique-old to
unique-old keeping handedness.  The orientation-reversing branch dies on
the even-extension rule: the chains attached to T_1 (always L) and to
T_{4n-1} (always R) would both be forced to grow even extensions, which the
intersection positivity forbids for one of them whatever the sign of k.

Pairs touching m = 0 or m = 2n are reported Inconclusive: the argument is
only run inside the range where it is actually proved.

Every Inequivalent verdict carries a certificate whose witnesses re-verify
against the handedness and homology modules; verify_certificate does that
replay.  Verdict computation is pure, so pair enumeration parallelizes
with any deterministic merge order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from . import orbit_space as osp
from .gluing import crossing_orbit_index
from .handedness import old_handedness, old_sa_annulus, extendable_to_even
from .homology import NewLozengeData, decide_sa_extension
from .plug import build_plug

INEQUIVALENT = "Inequivalent"
INCONCLUSIVE = "Inconclusive"

MAPS_TO_UNIQUE_OLD = "maps-to-unique-old"
FORCES_EVEN_EXTENSION = "forces-even-extension"


@dataclass(frozen=True)
class EquivalenceHypothesis:
    m1: int
    m2: int
    orientation: str   # "preserving" | "reversing"

    def __post_init__(self):
        if not self.m1 < self.m2:
            raise ValueError("hypothesis requires m1 < m2")
        if self.orientation not in ("preserving", "reversing"):
            raise ValueError("orientation must be 'preserving' or 'reversing'")


@dataclass(frozen=True)
class HActionCase:
    case: int                    # 1: identity on the old fan, 2: shifted through an extension
    edge_type: Optional[str]     # "u"/"s" for case 2
    feasible: bool
    gate: str


def h_action_cases(i: int, m1: int, m2: int, n: int, k: int) -> list[HActionCase]:
    """The two possible actions of an orbit-space map on the old fan of T_i.

    Case 1 sends old to old.  Case 2 shifts the fan through a one-lozenge
    extension; it is feasible only when the extended cluster still
    classifies as the matching fan shape, and it can never exchange the u
    and s extension types (the map preserves adjacent-edge types).
    """
    if not 1 <= i <= 4 * n:
        raise ValueError(f"i out of range [1, {4 * n}]")
    del m1, m2  # the case list itself does not depend on the pair
    cases = [HActionCase(1, None, True, "old fan maps to the unique old fan")]
    fan = osp.old_fan_cluster(i, 0)
    ends = osp.fan_end_slots(fan)
    sites = {slot: idx for idx, slot in
             ((s.host_index, s.slot) for s in osp.attachment_sites(fan))}
    j = crossing_orbit_index(i)
    for fol in ("u", "s"):
        slot = ends[fol]
        host = sites[slot]
        s_vec = [0] * (2 * n)
        s_vec[j - 1] = 1
        new = osp.attach(osp.AttachmentSite(host, slot), NewLozengeData(tuple(s_vec)),
                         f"ext-{fol}")
        shape = osp.classify_maximal(list(fan.lozenges) + [new], k)
        want = f"C_i^{fol}"
        feasible = isinstance(shape, osp.MaximalShape) and shape.tag == want
        gate = (f"extension lozenge classifies as {want}" if feasible
                else f"extension rejected: {shape}")
        cases.append(HActionCase(2, fol, feasible, gate))
    return cases


def hoTEB_outcome(i: int, hyp: EquivalenceHypothesis, k: int, n: int) -> str:
    """What happens to the old chain of T_i under a hypothetical equivalence.

    The deciding index is the crossing-orbit index j = ceil(i/2): preserving
    maps always send the chain to the unique old chain; reversing maps do so
    exactly when j lies in (m1, m2] (where the handedness table flips), and
    otherwise force an even extension.
    """
    del k
    if not 1 <= i <= 4 * n:
        raise ValueError(f"i out of range [1, {4 * n}]")
    if hyp.orientation == "preserving":
        return MAPS_TO_UNIQUE_OLD
    j = crossing_orbit_index(i)
    if hyp.m1 < j <= hyp.m2:
        return MAPS_TO_UNIQUE_OLD
    return FORCES_EVEN_EXTENSION


@dataclass(frozen=True)
class BranchCertificate:
    orientation: str
    witness_torus: int
    lemma: str
    table_cells: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DistinguishVerdict:
    tag: str
    m1: int
    m2: int
    n: int
    k: int
    branches: tuple[BranchCertificate, ...] = ()
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "pair": [self.m1, self.m2],
            "n": self.n,
            "k": self.k,
            "verdict": self.tag,
            "reason": self.reason,
            "branches": [
                {"orientation": b.orientation, "witness_torus": b.witness_torus,
                 "lemma": b.lemma, "table_cells": b.table_cells}
                for b in self.branches
            ],
        }


def distinguish(m1: int, m2: int, n: int, k: int) -> DistinguishVerdict:
    """Inequivalent-with-certificate or Inconclusive for the pair (m1, m2)."""
    if m1 == m2:
        raise ValueError("the two gluing indices must differ")
    if m1 > m2:
        m1, m2 = m2, m1
    for m in (m1, m2):
        if not 0 <= m <= 2 * n:
            raise ValueError(f"gluing index {m} out of range [0, {2 * n}]")
    if k == 0:
        raise ValueError("surgery index k must be nonzero")
    if not (1 <= m1 and m2 <= 2 * n - 1):
        return DistinguishVerdict(INCONCLUSIVE, m1, m2, n, k,
                                  reason="outside proven range")

    # preserving branch: scan the torus indices whose crossing orbit flips
    witness = None
    for i in range(2 * m1 + 1, 2 * m2 + 1):
        h1, h2 = old_handedness(i, m1, n), old_handedness(i, m2, n)
        if h1 != h2:
            witness = (i, h1, h2)
            break
    if witness is None:
        return DistinguishVerdict(INCONCLUSIVE, m1, m2, n, k,
                                  reason="no handedness witness found")
    i_w, h1, h2 = witness
    preserving = BranchCertificate(
        orientation="preserving", witness_torus=i_w,
        lemma="handedness-table",
        table_cells={f"({i_w},{m1})": h1, f"({i_w},{m2})": h2})

    # reversing branch: both endpoint chains would be forced to grow even
    # extensions; one of the two is impossible for this sign of k
    ends = {}
    for i_end in (1, 4 * n - 1):
        sa = old_sa_annulus(i_end, m1, n)
        answer = extendable_to_even(sa, k)
        ends[i_end] = (sa.handedness, answer)
    refuting = 4 * n - 1 if k > 0 else 1
    if ends[refuting][1].allowed:
        return DistinguishVerdict(INCONCLUSIVE, m1, m2, n, k,
                                  reason="even-extension obstruction failed")
    reversing = BranchCertificate(
        orientation="reversing", witness_torus=refuting,
        lemma="even-extension-rule",
        table_cells={
            "handedness": {str(i_end): hd for i_end, (hd, _) in ends.items()},
            "extension_allowed": {str(i_end): ans.allowed
                                  for i_end, (_, ans) in ends.items()},
            "sign_k": "+" if k > 0 else "-",
        })
    return DistinguishVerdict(INEQUIVALENT, m1, m2, n, k,
                              branches=(preserving, reversing))


def verify_certificate(verdict: DistinguishVerdict) -> bool:
    """Replay every witness of an Inequivalent certificate; Inconclusive has none."""
    if verdict.tag != INEQUIVALENT:
        return True
    if {b.orientation for b in verdict.branches} != {"preserving", "reversing"}:
        return False
    for b in verdict.branches:
        if b.orientation == "preserving":
            h1 = old_handedness(b.witness_torus, verdict.m1, verdict.n)
            h2 = old_handedness(b.witness_torus, verdict.m2, verdict.n)
            if h1 == h2:
                return False
            if b.table_cells != {f"({b.witness_torus},{verdict.m1})": h1,
                                 f"({b.witness_torus},{verdict.m2})": h2}:
                return False
        else:
            i_w = b.witness_torus
            hd = b.table_cells["handedness"][str(i_w)]
            if old_handedness(i_w, verdict.m1, verdict.n) != hd:
                return False
            j = crossing_orbit_index(i_w)
            s_vec = [0] * (2 * verdict.n)
            s_vec[j - 1] = 1
            replay = decide_sa_extension(hd, verdict.k, NewLozengeData(tuple(s_vec)))
            if replay.tag != "Forbidden":
                return False
    return True


# -- non-R-covered certificates -----------------------------------------------------


def non_r_covered_certificate(m: int, n: int) -> dict:
    """Per-torus witness data for the non-R-covered property of the m-th flow.

    Every transverse torus is punctured once by a crossing orbit, inside the
    strip-carrying stable annulus; the other 2i+1 stable Reeb annuli survive,
    and the two boundary leaves of each surviving annulus lie on stable
    manifolds of distinct boundary orbits.
    """
    from .gluing import STRIP_ANNULUS_INDEX
    if not 0 <= m <= 2 * n:
        raise ValueError(f"m out of range [0, {2 * n}]")
    plug = build_plug(n)
    tori = []
    for i in range(1, 4 * n + 1):
        count = 2 * i + 2
        punctured_j = STRIP_ANNULUS_INDEX
        sign = "+" if i % 2 == 0 else "-"   # entrance-side stable leaves
        surviving = []
        for j in range(count):
            if j == punctured_j:
                continue
            lo = plug.orbit(i, j, sign)
            hi = plug.orbit(i, (j + 1) % count, sign)
            surviving.append({
                "annulus": j,
                "boundary_orbits": [f"gamma_{i}^{lo.j},{lo.sign}",
                                    f"gamma_{i}^{hi.j},{hi.sign}"],
            })
        assert len(surviving) == 2 * i + 1
        assert all(a["boundary_orbits"][0] != a["boundary_orbits"][1]
                   for a in surviving)
        tori.append({
            "torus": i,
            "punctured_annulus": punctured_j,
            "surviving_reeb_annuli": surviving,
            "reeb_witness": surviving[0],
        })
    return {"m": m, "n": n, "punctured_tori": tori}


def certificate_to_json(verdict: DistinguishVerdict) -> str:
    return json.dumps(verdict.to_json(), indent=2, sort_keys=True) + "\n"
