"""Chern-character records and the calculus on them.

A record stores (rank, c1, ch2, ch3): c1 by basis coefficients, ch2 by its
pairing vector, ch3 by its integral.  Chern classes c2 and c3 are derived,
never stored, so the rational rescaling map acts componentwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .geometry import (
    DimensionMismatch,
    EvenClass,
    IngestError,
    ThreefoldData,
    dot,
    exp2,
    in_kahler_cone,
    integrate,
    involute,
    log_unit,
    rational,
    rational_vec,
    sqrt_todd,
    wedge,
)


class RankZeroError(ValueError):
    """Operation needs a record of nonzero rank."""


@dataclass(frozen=True)
class ChernRecord:
    rank: object
    c1: tuple
    ch2: tuple
    ch3: object

    @property
    def b2(self) -> int:
        return len(self.c1)

    def __post_init__(self):
        if len(self.ch2) != len(self.c1):
            raise DimensionMismatch("c1 and ch2 must have equal length")

    @classmethod
    def trivial(cls, b2: int, rank=1) -> "ChernRecord":
        z = (Fraction(0),) * b2
        return cls(Fraction(rank), z, z, Fraction(0))

    @classmethod
    def line_bundle(cls, L, g: ThreefoldData) -> "ChernRecord":
        return from_even_class(exp2(L, g))

    @classmethod
    def from_chern_classes(cls, rank, c1, c2_pair, c3, g: ThreefoldData) -> "ChernRecord":
        """Build a record from (r, c1, c2, c3) data; c2 by pairing vector, c3 by integral."""
        c1 = tuple(c1)
        c1sq = g.pair_vec(c1, c1)
        ch2 = tuple(a * Fraction(1, 2) - b for a, b in zip(c1sq, c2_pair))
        c1cubed = g.triple(c1, c1, c1)
        ch3 = (c3 - c1cubed * Fraction(1, 6) + dot(c1, ch2)) * Fraction(1, 2)
        return cls(rank, c1, ch2, ch3)

    def c2_pair(self, g: ThreefoldData) -> tuple:
        c1sq = g.pair_vec(self.c1, self.c1)
        return tuple(a * Fraction(1, 2) - b for a, b in zip(c1sq, self.ch2))

    def c3_number(self, g: ThreefoldData):
        return 2 * self.ch3 + g.triple(self.c1, self.c1, self.c1) * Fraction(1, 6) - dot(
            self.c1, self.ch2
        )

    def __add__(self, other: "ChernRecord") -> "ChernRecord":
        if not isinstance(other, ChernRecord):
            return NotImplemented
        return ChernRecord(
            self.rank + other.rank,
            tuple(a + b for a, b in zip(self.c1, other.c1)),
            tuple(a + b for a, b in zip(self.ch2, other.ch2)),
            self.ch3 + other.ch3,
        )

    def key(self) -> tuple:
        """Exact identity key used for deduplication."""
        return (self.rank, self.c1, self.ch2, self.ch3)


MukaiVector = EvenClass


def to_even_class(c: ChernRecord) -> EvenClass:
    """Pack a record as its Chern-character class (no Todd factor)."""
    return EvenClass(c.rank, c.c1, c.ch2, c.ch3)


def from_even_class(x: EvenClass) -> ChernRecord:
    return ChernRecord(x.d0, x.d2, x.d4, x.d6)


def mukai(c: ChernRecord, g: ThreefoldData) -> MukaiVector:
    """Generalized Mukai vector: the Chern character times sqrt of the Todd class."""
    return wedge(to_even_class(c), sqrt_todd(g), g)


def euler_pairing(a: ChernRecord, b: ChernRecord, g: ThreefoldData):
    """Euler pairing chi(a, b): integral of the dualized first factor against the second.

    Normalized so that chi(O, L) is the Riemann-Roch index of the line bundle L.
    """
    return integrate(wedge(involute(mukai(a, g)), mukai(b, g), g))


class DrezetInvariants(NamedTuple):
    delta1: tuple
    delta2: tuple
    delta3: object


def drezet(c: ChernRecord, g: ThreefoldData) -> DrezetInvariants:
    """Rescale-invariant generators read off the truncated log of ch/rank.

    delta1 is a coefficient vector, delta2 a pairing vector, delta3 the
    degree-6 integral; signs alternate so that delta2 matches the Bogomolov
    discriminant.
    """
    if c.rank == 0:
        raise RankZeroError("Drezet invariants need nonzero rank")
    l = log_unit(to_even_class(c), g)
    return DrezetInvariants(l.d2, tuple(-v for v in l.d4), l.d6)


def tensor(a: ChernRecord, b: ChernRecord, g: ThreefoldData) -> ChernRecord:
    """Record of the tensor product: the ring product of the two characters."""
    return from_even_class(wedge(to_even_class(a), to_even_class(b), g))


def twist(c: ChernRecord, L, g: ThreefoldData) -> ChernRecord:
    """Tensor with the line bundle of first Chern class L (any rational two-form)."""
    L = tuple(L)
    if all(v == 0 for v in L):
        return c
    return from_even_class(wedge(exp2(L, g), to_even_class(c), g))


def slope(c: ChernRecord, J, g: ThreefoldData):
    """Slope c1 . J^2 / rank at the polarization J."""
    if c.rank == 0:
        raise RankZeroError("slope needs nonzero rank")
    ok, margin = in_kahler_cone(J, g)
    if not ok:
        raise ValueError(f"slope needs J in the Kahler cone, margin {margin}")
    return g.triple(c.c1, J, J) / c.rank


def bogomolov(c: ChernRecord, J, g: ThreefoldData):
    """Bogomolov discriminant margin delta2 . J; nonnegative iff the bound holds."""
    if c.rank == 0:
        raise RankZeroError("use the surface-level bounds for rank-zero records")
    ok, margin = in_kahler_cone(J, g)
    if not ok:
        raise ValueError(f"Bogomolov margin needs J in the Kahler cone, margin {margin}")
    _, delta2, _ = drezet(c, g)
    return dot(J, delta2)


def rescale(c: ChernRecord, N) -> ChernRecord:
    N = rational(N) if not isinstance(N, float) else N
    if N <= 0:
        raise ValueError("rescale factor must be positive")
    return ChernRecord(
        N * c.rank,
        tuple(N * v for v in c.c1),
        tuple(N * v for v in c.ch2),
        N * c.ch3,
    )


def validate_integral(c: ChernRecord, g: ThreefoldData) -> None:
    """Check that (r, c1, c2, c3) are integral; raises IngestError when not."""
    problems = []
    if Fraction(c.rank).denominator != 1:
        problems.append(f"rank {c.rank}")
    for a, v in enumerate(c.c1):
        if Fraction(v).denominator != 1:
            problems.append(f"c1[{a}] = {v}")
    for a, v in enumerate(c.c2_pair(g)):
        if Fraction(v).denominator != 1:
            problems.append(f"c2 pairing [{a}] = {v}")
    c3 = c.c3_number(g)
    if Fraction(c3).denominator != 1:
        problems.append(f"c3 = {c3}")
    if problems:
        raise IngestError("record declared integral but has fractional " + ", ".join(problems))


def record_from_dict(data: dict, g: ThreefoldData) -> ChernRecord:
    """Parse the record JSON layout.

    Exactly one of c2_pair/ch2_pair and exactly one of c3/ch3 must be present.
    """
    try:
        rank = rational(data["rank"])
        c1 = rational_vec(data["c1"])
    except KeyError as exc:
        raise IngestError(f"record is missing required field {exc.args[0]!r}") from None
    if len(c1) != g.b2:
        raise IngestError(f"record c1 has length {len(c1)}, geometry has b2 = {g.b2}")
    has_c2 = "c2_pair" in data
    has_ch2 = "ch2_pair" in data
    if has_c2 == has_ch2:
        raise IngestError("record must carry exactly one of 'c2_pair' or 'ch2_pair'")
    has_c3 = "c3" in data
    has_ch3 = "ch3" in data
    if has_c3 == has_ch3:
        raise IngestError("record must carry exactly one of 'c3' or 'ch3'")
    if has_ch2:
        ch2 = rational_vec(data["ch2_pair"])
        if len(ch2) != g.b2:
            raise IngestError("ch2_pair length does not match geometry b2")
        if has_ch3:
            rec = ChernRecord(rank, c1, ch2, rational(data["ch3"]))
        else:
            c3 = rational(data["c3"])
            ch3 = (c3 - g.triple(c1, c1, c1) * Fraction(1, 6) + dot(c1, ch2)) * Fraction(1, 2)
            rec = ChernRecord(rank, c1, ch2, ch3)
    else:
        c2 = rational_vec(data["c2_pair"])
        if len(c2) != g.b2:
            raise IngestError("c2_pair length does not match geometry b2")
        if has_c3:
            rec = ChernRecord.from_chern_classes(rank, c1, c2, rational(data["c3"]), g)
        else:
            c1sq = g.pair_vec(c1, c1)
            ch2 = tuple(a * Fraction(1, 2) - b for a, b in zip(c1sq, c2))
            rec = ChernRecord(rank, c1, ch2, rational(data["ch3"]))
    if data.get("integral"):
        validate_integral(rec, g)
    return rec


def record_to_dict(c: ChernRecord) -> dict:
    from .geometry import format_rational

    return {
        "rank": format_rational(c.rank),
        "c1": [format_rational(v) for v in c.c1],
        "ch2_pair": [format_rational(v) for v in c.ch2],
        "ch3": format_rational(c.ch3),
    }
