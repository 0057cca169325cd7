"""Named constructions and the surface-level index bounds.

The construction generators return exact ChernRecords; the surface bounds
evaluate the four index inequalities with exact rational margins.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .attractor import solve_positive_rank
from .chern import ChernRecord, bogomolov
from .geometry import ThreefoldData, rational, rational_vec
from .reports import BoundEntry, BoundsReport

K3_C2 = Fraction(24)
K3_C1SQ = Fraction(0)

SURFACE_KINDS = ("k3", "fano", "ample_canonical", "general")


class WrongGeometryError(ValueError):
    """The construction is defined on a specific geometry preset."""


def dot_h(u, v):
    return sum(a * b for a, b in zip(u, v))


def _require_quintic(g: ThreefoldData) -> None:
    if g.b2 != 1 or g.intersect[0][0][0] != 5 or g.c2_pair != (Fraction(50),):
        raise WrongGeometryError("this construction lives on the quintic preset")


def tangent_quintic(g: ThreefoldData) -> ChernRecord:
    """Tangent bundle of the quintic hypersurface: rank 3, c1 = 0, c3 integral -200."""
    _require_quintic(g)
    return ChernRecord(Fraction(3), (Fraction(0),), (Fraction(-50),), Fraction(-100))


def monad_chern(r: int, n: int, H, g: ThreefoldData) -> ChernRecord:
    """Character of the rank-r monad-construction bundle at twist parameter n.

    Stability of the underlying bundle is only guaranteed for sufficiently
    large n; that proviso is not enforced here.
    """
    if not isinstance(r, int) or r < 3:
        raise ValueError("monad construction needs integer rank r >= 3")
    if not isinstance(n, int) or n < 1:
        raise ValueError("monad construction needs integer n >= 1")
    H = rational_vec(H)
    c2_coeff = Fraction(r, 2) * (2 * n + 1 - r)
    c3_coeff = -Fraction(r * (r - 1) * (r - 2), 6) + Fraction(r, 2) * (
        2 * (n + 1) ** 2 - r * (2 * n - r + 3)
    )
    c2_pair = tuple(c2_coeff * v for v in g.pair_vec(H, H))
    c3_num = c3_coeff * g.triple(H, H, H)
    zero = (Fraction(0),) * g.b2
    return ChernRecord.from_chern_classes(Fraction(r), zero, c2_pair, c3_num, g)


def monad_c3_threshold(r: int, H, g: ThreefoldData, n_max: int = 200) -> int | None:
    """Smallest n at which the monad record violates the attractor c3 bound."""
    for n in range(1, n_max + 1):
        outcome = solve_positive_rank(monad_chern(r, n, H, g), g)
        if outcome.reason == "c3 bound violated":
            return n
    return None


@dataclass(frozen=True)
class FibrationData:
    """Elliptic-fibration bookkeeping: ambient classes and base cone data.

    sigma and pi_c1_base are two-form coefficient vectors on the threefold,
    fiber_pair the pairing vector of the fiber class, pi_star the linear map
    taking base two-form coefficients to threefold coefficients, and
    base_rays the effective-cone generators used for the base cone tests.
    """

    sigma: tuple
    fiber_pair: tuple
    pi_star: tuple
    c1_base: tuple
    base_rays: tuple

    def lift(self, eta) -> tuple:
        cols = len(self.pi_star[0]) if self.pi_star else 0
        if len(eta) != cols:
            raise ValueError(f"base class has length {len(eta)}, map expects {cols}")
        return tuple(sum(row[j] * eta[j] for j in range(cols)) for row in self.pi_star)


def spectral_c2(r: int, eta, m_V: int, fib: FibrationData, g: ThreefoldData):
    """Second Chern pairing vector of a spectral-cover bundle, plus cone flags.

    Returns (c2_pair, eta_ample, eta_minus_r_c1B_effective).
    """
    if fib is None:
        raise ValueError("spectral construction needs fibration data")
    eta = rational_vec(eta)
    lifted = fib.lift(eta)
    sigma_eta = g.pair_vec(fib.sigma, lifted)
    c2_pair = tuple(a + m_V * b for a, b in zip(sigma_eta, fib.fiber_pair))
    eta_ample = all(
        sum(rr * v for rr, v in zip(ray, eta)) > 0 for ray in fib.base_rays
    ) and any(v != 0 for v in eta)
    residue = tuple(v - r * w for v, w in zip(eta, fib.c1_base))
    effective = all(sum(rr * v for rr, v in zip(ray, residue)) >= 0 for ray in fib.base_rays)
    return c2_pair, eta_ample, effective


def jardim_record(g: ThreefoldData):
    """Rank-3 kernel bundle on the quintic with c1 = -H, c2 = H^2.

    Returns the record together with the report showing that it satisfies the
    classical Bogomolov bound while violating the strengthened surface-style
    inequality on the threefold.
    """
    _require_quintic(g)
    # kernel of four generic sections of O(H): ch = 4 - e^H
    rec = ChernRecord(
        Fraction(3), (Fraction(-1),), (Fraction(-5, 2),), Fraction(-5, 6)
    )
    H = (Fraction(1),)
    r = rec.rank
    c2p = rec.c2_pair(g)
    c1sq = g.pair_vec(rec.c1, rec.c1)
    lhs = dot_h(H, tuple(2 * r * a - (r - 1) * b for a, b in zip(c2p, c1sq)))
    rhs = Fraction(r * r, 12) * dot_h(H, g.c2_pair)
    report = BoundsReport()
    report.add(BoundEntry(key="strengthened_bogomolov", lhs=lhs, relation=">=", rhs=rhs))
    report.add(
        BoundEntry(key="bogomolov", lhs=bogomolov(rec, H, g), relation=">=", rhs=Fraction(0))
    )
    return rec, report


@dataclass(frozen=True)
class SurfaceBoundInput:
    """Inputs to the surface index bounds; k3 fixes its characteristic numbers."""

    r: int
    c1_sq: Fraction
    c2_num: Fraction
    surface_kind: str
    c2D: Fraction | None = None
    c1D_sq: Fraction | None = None

    def __post_init__(self):
        if self.surface_kind not in SURFACE_KINDS:
            raise ValueError(f"unknown surface kind {self.surface_kind!r}")
        if self.r < 2:
            raise ValueError("surface bounds need rank >= 2")
        if self.surface_kind == "k3":
            if self.c2D is None:
                object.__setattr__(self, "c2D", K3_C2)
            elif self.c2D != K3_C2:
                raise ValueError("a K3 surface has c2 = 24")
            if self.c1D_sq is None:
                object.__setattr__(self, "c1D_sq", K3_C1SQ)
            elif self.c1D_sq != K3_C1SQ:
                raise ValueError("a K3 surface has c1^2 = 0")
        else:
            if self.c2D is None or self.c1D_sq is None:
                raise ValueError(f"surface kind {self.surface_kind!r} needs explicit c2D and c1D_sq")

    @classmethod
    def from_dict(cls, data: dict) -> "SurfaceBoundInput":
        return cls(
            r=int(data["r"]),
            c1_sq=rational(data["c1_sq"]),
            c2_num=rational(data["c2_num"]),
            surface_kind=str(data["surface_kind"]),
            c2D=rational(data["c2D"]) if "c2D" in data else None,
            c1D_sq=rational(data["c1D_sq"]) if "c1D_sq" in data else None,
        )


def yoshioka_check(v: SurfaceBoundInput) -> BoundEntry:
    """Existence bound for semistable sheaves on a K3 surface."""
    if v.surface_kind != "k3":
        raise ValueError("the Yoshioka bound is stated for K3 surfaces")
    r = v.r
    lhs = 2 * r * v.c2_num - (r - 1) * v.c1_sq - Fraction(r * r, 12) * v.c2D
    return BoundEntry(key="yoshioka_k3", lhs=lhs, relation=">=", rhs=Fraction(-2))


def surface_index_bounds(v: SurfaceBoundInput) -> BoundsReport:
    """Index inequalities applicable to the given surface kind, with exact margins."""
    r = v.r
    report = BoundsReport()
    if v.surface_kind == "k3" and v.c1_sq == 0:
        report.add(
            BoundEntry(
                key="index_k3",
                lhs=r * v.c2_num - Fraction(r * r, 12) * v.c2D,
                relation=">=",
                rhs=Fraction(0),
            )
        )
    if v.surface_kind == "fano":
        if v.c1_sq == 0:
            report.add(
                BoundEntry(
                    key="index_fano",
                    lhs=r * v.c2_num - Fraction(r * r, 12) * (v.c2D + v.c1D_sq),
                    relation=">=",
                    rhs=Fraction(0),
                )
            )
        report.add(
            BoundEntry(
                key="index_negative_canonical",
                lhs=2 * r * v.c2_num
                - (r - 1) * v.c1_sq
                - Fraction(r * r, 12) * (v.c2D + v.c1D_sq),
                relation=">=",
                rhs=Fraction(-1),
            )
        )
    if v.surface_kind in ("k3", "ample_canonical", "general"):
        report.add(
            BoundEntry(
                key="strengthened_bogomolov",
                lhs=2 * r * v.c2_num - (r - 1) * v.c1_sq - Fraction(r * r, 12) * v.c2D,
                relation=">=",
                rhs=Fraction(0),
            )
        )
    return report
