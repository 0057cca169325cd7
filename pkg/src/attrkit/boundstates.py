"""Algebraic bound-state conditions: pairing sign, marginal-stability time,
large-volume slope form, charge-set closure, extension characters and the
parameterized c3 guess bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .attractor import BOUND_COEFF, ZETA_3, central_charge, _require_interior
from .chern import ChernRecord, RankZeroError, euler_pairing, from_even_class, slope
from .geometry import RationalComplex, ThreefoldData, dot, exp2, rational
from .reports import BoundEntry, NotApplicableEntry


@dataclass(frozen=True)
class ChargePair:
    """Two records with their Euler pairing, recomputed at construction."""

    a: ChernRecord
    b: ChernRecord
    pairing: object

    @property
    def dirac(self):
        # Symplectic pairing of the two charge vectors: the Euler index of
        # maps from the second object to the first, the opposite orientation
        # of self.pairing on a threefold with trivial canonical bundle.
        return -self.pairing


def charge_pair(a: ChernRecord, b: ChernRecord, g: ThreefoldData) -> ChargePair:
    return ChargePair(a=a, b=b, pairing=euler_pairing(a, b, g))


def _im_z_zbar(pair: ChargePair, B, J, g: ThreefoldData):
    za = central_charge(pair.a, B, J, g)
    zb = central_charge(pair.b, B, J, g)
    if isinstance(za, RationalComplex) and isinstance(zb, RationalComplex):
        return (za * zb.conjugate()).im, za, zb
    za, zb = complex(za), complex(zb)
    return (za * zb.conjugate()).imag, za, zb


def bps_bound_condition(pair: ChargePair, B, J, g: ThreefoldData):
    """Sign condition for the pair to support a two-center bound state at (B, J).

    Returns (holds, lhs) where lhs is the symplectic pairing times
    Im(Z' conj(Z'')); the orientation reduces to the large-volume slope form.
    """
    im, _, _ = _im_z_zbar(pair, B, J, g)
    lhs = pair.dirac * im
    return lhs >= 0, lhs


def tau_vs(pair: ChargePair, B, J, g: ThreefoldData) -> float:
    """Flow time at which the combined charge crosses marginal stability."""
    if pair.pairing == 0:
        raise ValueError("marginal-stability time needs a nonzero pairing")
    im, za, zb = _im_z_zbar(pair, B, J, g)
    z = complex(za) + complex(zb)
    mod = abs(z)
    if mod == 0.0:
        raise ValueError("total central charge vanishes at this point")
    return 2.0 * float(im) / (mod * float(pair.dirac))


def large_volume_condition(pair: ChargePair, J, g: ThreefoldData):
    """Large-volume form of the bound-state condition: chi times the slope gap.

    Returns (holds, chi, slope_gap, note); chi is the Euler pairing of maps
    from the first record to the second.
    """
    if pair.a.rank == 0 or pair.b.rank == 0:
        raise RankZeroError("the large-volume form needs positive ranks")
    chi = pair.pairing
    gap = slope(pair.b, J, g) - slope(pair.a, J, g)
    value = chi * gap
    if gap > 0:
        note = "needs Hom(first, second) > 0 or Ext^2(first, second) > 0" if chi > 0 else ""
    elif gap < 0:
        note = "needs Hom(second, first) > 0 or Ext^2(second, first) > 0" if chi < 0 else ""
    else:
        note = "equal slopes; condition holds with equality"
    return value >= 0, chi, gap, note


def extension_chern(p: int, q: int, J, g: ThreefoldData) -> ChernRecord:
    """Character of the kernel extension built from p and q multiples of a polarization.

    Computed as p e^{qJ} - q e^{pJ} and checked against the closed form
    (p - q) + pq(q - p)/2 J^2 + pq(q^2 - p^2)/6 J^3.
    """
    if not (isinstance(p, int) and isinstance(q, int)):
        raise TypeError("p and q must be integers")
    if p <= q:
        raise ValueError("extension character needs p > q")
    J = tuple(rational(v) for v in J)
    cls = exp2(tuple(q * v for v in J), g) * Fraction(p) - exp2(
        tuple(p * v for v in J), g
    ) * Fraction(q)
    jj = g.pair_vec(J, J)
    jjj = g.triple(J, J, J)
    closed_d4 = tuple(Fraction(p * q * (q - p), 2) * v for v in jj)
    closed_d6 = Fraction(p * q * (q * q - p * p), 6) * jjj
    if (
        cls.d0 != p - q
        or any(v != 0 for v in cls.d2)
        or cls.d4 != closed_d4
        or cls.d6 != closed_d6
    ):
        raise ArithmeticError("extension character disagrees with its closed form")
    return from_even_class(cls)


def j_closure(seed, B, J, g: ThreefoldData, budget: int):
    """Close a charge list under pairwise sums allowed by the bound-state condition.

    Sweeps index pairs (i, j) with i < j in lexicographic order, appending
    sums of pairs that satisfy the condition at (B, J), deduplicated by exact
    record equality, until no pair fires or `budget` new records were added.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    out: list[ChernRecord] = []
    known = set()
    for rec in seed:
        k = rec.key()
        if k not in known:
            known.add(k)
            out.append(rec)
    if budget == 0:
        return out
    added = 0
    checked: set[tuple[int, int]] = set()
    changed = True
    while changed and added < budget:
        changed = False
        n = len(out)
        for i in range(n):
            for j in range(i + 1, n):
                if (i, j) in checked:
                    continue
                checked.add((i, j))
                holds, _ = bps_bound_condition(charge_pair(out[i], out[j], g), B, J, g)
                if not holds:
                    continue
                s = out[i] + out[j]
                k = s.key()
                if k in known:
                    continue
                known.add(k)
                out.append(s)
                added += 1
                changed = True
                if added >= budget:
                    return out
    return out


def guess_bound(c: ChernRecord, J, g: ThreefoldData, const_c=0):
    """Candidate homogeneous c3 bound for vanishing first Chern class.

    Sum of three terms along the polarization J: the volume-correction term
    weighted by zeta(3) and the Euler characteristic, the attractor-volume
    term, and a quadratic term with the free constant const_c.
    """
    if c.rank <= 0:
        raise ValueError("the guess bound applies to positive rank")
    if any(v != 0 for v in c.c1):
        raise ValueError("the guess bound is stated for vanishing first Chern class")
    J = tuple(J)
    _require_interior(J, g)
    const_c = rational(const_c)
    if const_c < 0:
        raise ValueError("const_c must be nonnegative")
    r = float(c.rank)
    c2p = c.c2_pair(g)
    c2j = float(dot(J, c2p))
    j3 = float(g.triple(J, J, J))
    rad1 = c2j / r
    target = tuple(v / c.rank - cm * Fraction(1, 24) for v, cm in zip(c2p, g.c2_pair))
    rad2 = float(dot(J, target))
    if rad1 < 0 or rad2 < 0:
        return NotApplicableEntry(key="c3_guess", note="negative radicand along J")
    term1 = 2.0 * ZETA_3 * abs(g.euler) / (2.0 * math.pi) ** 3 * r * math.sqrt(rad1) * j3 ** (
        -1.0 / 6.0
    )
    term2 = BOUND_COEFF * r * rad2 ** 1.5 / math.sqrt(j3)
    term3 = float(const_c) * r * rad1 ** 2 * j3 ** (-2.0 / 3.0)
    return BoundEntry(
        key="c3_guess",
        lhs=abs(2 * c.ch3),
        relation="<=",
        rhs=term1 + term2 + term3,
        note=f"terms {term1:.17g} + {term2:.17g} + {term3:.17g}",
    )
