"""Pushforward of surface-bundle data to threefold Chern characters.

Surface-level quantities are carried as contracted numbers (integrals over
the divisor) rather than surface cohomology classes; the optional c1 lift is
a two-form on the ambient threefold restricting to the bundle's c1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from .chern import ChernRecord
from .geometry import (
    EvenClass,
    IngestError,
    SurfaceData,
    ThreefoldData,
    kahler_cone_status,
    rational,
    rational_vec,
)


class MissingLiftError(ValueError):
    """The requested output needs the ambient lift of c1, which was not supplied."""


class LiftMismatch(ValueError):
    """Stored surface contractions disagree with the supplied c1 lift."""


@dataclass(frozen=True)
class SurfaceBundleRecord:
    """Rank and contracted Chern data of a bundle supported on a divisor.

    c1_sq is the self-intersection of c1 on the surface, c1_dot_D its pairing
    with the divisor class, c2_num the integral of c2.
    """

    rank: int
    c1_sq: Fraction
    c1_dot_D: Fraction
    c2_num: Fraction
    c1_lift: tuple | None = None

    @property
    def ch2_num(self):
        return self.c1_sq * Fraction(1, 2) - self.c2_num

    @classmethod
    def with_lift(cls, rank, c1_lift, c2_num, D, g: ThreefoldData) -> "SurfaceBundleRecord":
        """Build a record whose contractions are computed from the lift."""
        c1_lift = tuple(c1_lift)
        return cls(
            rank=rank,
            c1_sq=g.triple(c1_lift, c1_lift, D),
            c1_dot_D=g.triple(c1_lift, D, D),
            c2_num=rational(c2_num) if not isinstance(c2_num, float) else c2_num,
            c1_lift=c1_lift,
        )

    def check_lift(self, D, g: ThreefoldData) -> None:
        if self.c1_lift is None:
            return
        want_sq = g.triple(self.c1_lift, self.c1_lift, D)
        want_dot = g.triple(self.c1_lift, D, D)
        if want_sq != self.c1_sq or want_dot != self.c1_dot_D:
            raise LiftMismatch(
                f"lift gives (c1_sq, c1_dot_D) = ({want_sq}, {want_dot}), "
                f"record stores ({self.c1_sq}, {self.c1_dot_D})"
            )


def direct_sum(
    a: SurfaceBundleRecord, b: SurfaceBundleRecord, D, g: ThreefoldData
) -> SurfaceBundleRecord:
    """Record of the direct sum; needs both lifts for the cross term in c1^2."""
    if a.c1_lift is None or b.c1_lift is None:
        raise MissingLiftError("direct sum needs both c1 lifts for the c1^2 cross term")
    lift = tuple(x + y for x, y in zip(a.c1_lift, b.c1_lift))
    c1_sq = a.c1_sq + b.c1_sq + 2 * g.triple(a.c1_lift, b.c1_lift, D)
    ch2 = a.ch2_num + b.ch2_num
    return SurfaceBundleRecord(
        rank=a.rank + b.rank,
        c1_sq=c1_sq,
        c1_dot_D=a.c1_dot_D + b.c1_dot_D,
        c2_num=c1_sq * Fraction(1, 2) - ch2,
        c1_lift=lift,
    )


def divisor_chern(D, g: ThreefoldData) -> SurfaceData:
    """Characteristic numbers of the divisor D: c1(D) = -D restricted, c2(D) = D^3 + c2 . D."""
    D = tuple(D)
    if kahler_cone_status(D, g) != "interior":
        warnings.warn(f"divisor {D} is not ample; surface data may not be meaningful")
    d3 = g.triple(D, D, D)
    c2d = d3 + sum(c * v for c, v in zip(g.c2_pair, D))
    return SurfaceData(divisor=D, d_cubed=d3, c1D_sq=d3, c2D=c2d)


def push_scalars(w: SurfaceBundleRecord, D, g: ThreefoldData) -> dict:
    """Lift-free contractions of the pushforward: rank-weighted divisor and ch3."""
    D = tuple(D)
    d3 = g.triple(D, D, D)
    return {
        "rank": Fraction(0),
        "ch1": tuple(w.rank * v for v in D),
        "ch3": w.rank * d3 * Fraction(1, 6) + w.ch2_num - w.c1_dot_D * Fraction(1, 2),
    }


def grr_push(w: SurfaceBundleRecord, D, g: ThreefoldData) -> ChernRecord:
    """Chern character on the threefold of the bundle pushed forward from the divisor."""
    D = tuple(D)
    if w.c1_lift is None:
        raise MissingLiftError("grr_push needs c1_lift to express the degree-4 part")
    w.check_lift(D, g)
    r = w.rank
    dd = g.pair_vec(D, D)
    lift_d = g.pair_vec(w.c1_lift, D)
    ch2 = tuple(-Fraction(r, 2) * a + b for a, b in zip(dd, lift_d))
    ch3 = push_scalars(w, D, g)["ch3"]
    return ChernRecord(Fraction(0), tuple(r * v for v in D), ch2, ch3)


def push_mukai(w: SurfaceBundleRecord, D, g: ThreefoldData) -> EvenClass:
    """Mukai vector of the pushforward via the surface-side expansion.

    Uses the divisor's own characteristic numbers (c2 of the surface) for the
    degree-6 term, independent of composing grr_push with the ambient Todd
    factor; the two paths agree identically.
    """
    D = tuple(D)
    if w.c1_lift is None:
        raise MissingLiftError("push_mukai needs c1_lift to express the degree-4 part")
    w.check_lift(D, g)
    r = w.rank
    sd = divisor_chern(D, g)
    dd = g.pair_vec(D, D)
    lift_d = g.pair_vec(w.c1_lift, D)
    d4 = tuple(-Fraction(r, 2) * a + b for a, b in zip(dd, lift_d))
    d6 = (
        Fraction(r, 8) * sd.d_cubed
        + w.ch2_num
        - w.c1_dot_D * Fraction(1, 2)
        + Fraction(r, 24) * sd.c2D
    )
    return EvenClass(Fraction(0), tuple(r * v for v in D), d4, d6)


def surface_record_from_dict(data: dict, g: ThreefoldData) -> SurfaceBundleRecord:
    try:
        rank = int(data["rank"])
        c1_sq = rational(data["c1_sq"])
        c1_dot_D = rational(data["c1_dot_D"])
        c2_num = rational(data["c2_num"])
    except KeyError as exc:
        raise IngestError(f"surface record is missing required field {exc.args[0]!r}") from None
    lift = data.get("c1_lift")
    if lift is not None:
        lift = rational_vec(lift)
        if len(lift) != g.b2:
            raise IngestError("c1_lift length does not match geometry b2")
    return SurfaceBundleRecord(
        rank=rank, c1_sq=c1_sq, c1_dot_D=c1_dot_D, c2_num=c2_num, c1_lift=lift
    )
