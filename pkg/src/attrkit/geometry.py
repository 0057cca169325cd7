"""Topological threefold data and exact arithmetic on its even cohomology ring.

A class in H^{2*} is stored by four graded pieces: a degree-0 scalar, the
degree-2 part as a coefficient vector in the Kahler-cone basis {J_a}, the
degree-4 part as its pairing vector against the same basis, and the degree-6
part as its integral.  With b4 = b2 (simply connected threefolds) the pairing
representation of four-forms is faithful, and integration reduces to a dot
product.

All ring arithmetic is exact over Fraction scalars.  Complex scalars (either
exact RationalComplex values or machine complex) pass through the same
operations, which is what the solver layer uses.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

STRICT_CONE_TOL = 1e-9


class GeometryError(ValueError):
    """Threefold data violates a structural invariant."""


class DimensionMismatch(ValueError):
    """A cohomology class does not match the geometry's b2."""


class IngestError(ValueError):
    """Malformed input file or record; carries a field-level diagnostic."""


def rational(x) -> Fraction:
    """Parse an exact rational from int, Fraction, float or 'p/q' text."""
    if isinstance(x, bool):
        raise IngestError(f"expected a rational number, got boolean {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise IngestError(f"cannot parse rational from {x!r}: {exc}") from None
    raise IngestError(f"cannot parse rational from {type(x).__name__} value {x!r}")


def rational_vec(xs) -> tuple[Fraction, ...]:
    return tuple(rational(x) for x in xs)


def format_rational(x) -> str:
    """Serialize a scalar: exact values as 'p/q', floats as 17-digit decimals."""
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    return f"{float(x):.17g}"


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class RationalComplex:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def conjugate(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    def norm_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        if isinstance(other, RationalComplex):
            return RationalComplex(self.re + other.re, self.im + other.im)
        if is_exact(other):
            return RationalComplex(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        o = other if isinstance(other, RationalComplex) else RationalComplex(other)
        return RationalComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return RationalComplex(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalComplex):
            return RationalComplex(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if is_exact(other):
            return RationalComplex(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, RationalComplex):
            return self.re == other.re and self.im == other.im
        if is_exact(other):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return float(self.norm_sq()) ** 0.5

    def __repr__(self):
        return f"RationalComplex({self.re}, {self.im})"


@dataclass(frozen=True)
class EvenClass:
    """Element of the even cohomology, graded pieces as described in the module docstring."""

    d0: object
    d2: tuple
    d4: tuple
    d6: object

    @property
    def b2(self) -> int:
        return len(self.d2)

    @classmethod
    def scalar(cls, s, b2: int) -> "EvenClass":
        z = (Fraction(0),) * b2
        return cls(s, z, z, Fraction(0))

    @classmethod
    def two_form(cls, v, b2: int | None = None) -> "EvenClass":
        v = tuple(v)
        z = (Fraction(0),) * len(v)
        return cls(Fraction(0), v, z, Fraction(0))

    @classmethod
    def four_form(cls, pair, b2: int | None = None) -> "EvenClass":
        pair = tuple(pair)
        z = (Fraction(0),) * len(pair)
        return cls(Fraction(0), z, pair, Fraction(0))

    @classmethod
    def point(cls, s, b2: int) -> "EvenClass":
        z = (Fraction(0),) * b2
        return cls(Fraction(0), z, z, s)

    @classmethod
    def one(cls, b2: int) -> "EvenClass":
        return cls.scalar(Fraction(1), b2)

    @classmethod
    def zero(cls, b2: int) -> "EvenClass":
        return cls.scalar(Fraction(0), b2)

    def __add__(self, other: "EvenClass") -> "EvenClass":
        if not isinstance(other, EvenClass):
            return NotImplemented
        if other.b2 != self.b2:
            raise DimensionMismatch(f"b2 mismatch: {self.b2} vs {other.b2}")
        return EvenClass(
            self.d0 + other.d0,
            tuple(a + b for a, b in zip(self.d2, other.d2)),
            tuple(a + b for a, b in zip(self.d4, other.d4)),
            self.d6 + other.d6,
        )

    def __sub__(self, other: "EvenClass") -> "EvenClass":
        return self + (-other)

    def __neg__(self) -> "EvenClass":
        return self * Fraction(-1)

    def __mul__(self, s) -> "EvenClass":
        if isinstance(s, EvenClass):
            raise TypeError("use wedge() for the ring product of two classes")
        return EvenClass(
            s * self.d0,
            tuple(s * v for v in self.d2),
            tuple(s * v for v in self.d4),
            s * self.d6,
        )

    __rmul__ = __mul__


@dataclass(frozen=True)
class ThreefoldData:
    """Topological model of a threefold: intersection tensor, c2 pairings, cones.

    The Kahler cone is taken simplicial, generated by the basis {J_a}; the
    mori_rays give the pairing of each effective-curve generator with that
    basis.  Invariants (tensor symmetry, nonnegative c2 pairings, positive
    triple products on the cone interior) are checked at construction and
    violations abort ingestion.
    """

    name: str
    b2: int
    intersect: tuple
    c2_pair: tuple
    euler: int
    mori_rays: tuple

    def __post_init__(self):
        m = self.b2
        if m < 1:
            raise GeometryError("b2 must be a positive integer")
        t = self.intersect
        if len(t) != m or any(len(p) != m or any(len(r) != m for r in p) for p in t):
            raise GeometryError("intersection tensor must have shape b2 x b2 x b2")
        for a in range(m):
            for b in range(m):
                for c in range(m):
                    v = t[a][b][c]
                    if v != t[a][c][b] or v != t[b][a][c] or v != t[c][a][b]:
                        raise GeometryError(
                            f"intersection tensor not symmetric at ({a},{b},{c})"
                        )
        if len(self.c2_pair) != m:
            raise GeometryError("c2_pair must have length b2")
        for a, v in enumerate(self.c2_pair):
            if v < 0:
                raise GeometryError(f"c2_pair[{a}] = {v} is negative")
        for ray in self.mori_rays:
            if len(ray) != m:
                raise GeometryError("each Mori ray needs one pairing per basis element")
        ones = (Fraction(1),) * m
        if self.triple(ones, ones, ones) <= 0:
            raise GeometryError("interior Kahler class has nonpositive triple product")

    def _check_vec(self, v):
        if len(v) != self.b2:
            raise DimensionMismatch(
                f"vector of length {len(v)} on geometry with b2 = {self.b2}"
            )

    def triple(self, u, v, w):
        """Triple intersection number of three two-forms given by coefficients."""
        self._check_vec(u), self._check_vec(v), self._check_vec(w)
        t = self.intersect
        total = 0
        for a, ua in enumerate(u):
            if ua == 0:
                continue
            for b, vb in enumerate(v):
                if vb == 0:
                    continue
                row = t[a][b]
                for c, wc in enumerate(w):
                    if wc == 0:
                        continue
                    total = total + row[c] * ua * vb * wc
        return total

    def pair_vec(self, u, v) -> tuple:
        """Pairing vector of the four-form u wedge v: entry a is its integral against J_a."""
        self._check_vec(u), self._check_vec(v)
        t = self.intersect
        out = []
        for a in range(self.b2):
            acc = 0
            ta = t[a]
            for b, ub in enumerate(u):
                if ub == 0:
                    continue
                row = ta[b]
                for c, vc in enumerate(v):
                    if vc == 0:
                        continue
                    acc = acc + row[c] * ub * vc
            out.append(acc)
        return tuple(out)

    def to_dict(self) -> dict:
        entries = []
        for a in range(self.b2):
            for b in range(a, self.b2):
                for c in range(b, self.b2):
                    v = self.intersect[a][b][c]
                    if v != 0:
                        entries.append([a, b, c, str(v)])
        return {
            "name": self.name,
            "b2": self.b2,
            "intersect": entries,
            "c2_pair": [str(v) for v in self.c2_pair],
            "euler": self.euler,
            "mori_rays": [[str(v) for v in ray] for ray in self.mori_rays],
        }


def dot(u, v):
    """Contraction of a degree-2 coefficient vector with a degree-4 pairing vector."""
    if len(u) != len(v):
        raise DimensionMismatch(f"dot of vectors of length {len(u)} and {len(v)}")
    total = 0
    for a, b in zip(u, v):
        total = total + a * b
    return total


def wedge(x: EvenClass, y: EvenClass, g: ThreefoldData) -> EvenClass:
    """Cup product of two even classes, truncated above degree six."""
    if x.b2 != g.b2 or y.b2 != g.b2:
        raise DimensionMismatch("class does not match geometry b2")
    pair = g.pair_vec(x.d2, y.d2)
    return EvenClass(
        x.d0 * y.d0,
        tuple(x.d0 * yb + y.d0 * xb for xb, yb in zip(x.d2, y.d2)),
        tuple(x.d0 * y4 + y.d0 * x4 + p for x4, y4, p in zip(x.d4, y.d4, pair)),
        x.d0 * y.d6 + y.d0 * x.d6 + dot(x.d2, y.d4) + dot(y.d2, x.d4),
    )


def integrate(x: EvenClass):
    """Fundamental-class integral: the degree-6 piece."""
    return x.d6


def involute(x: EvenClass) -> EvenClass:
    """Dualizing involution: (-1)^k on the degree-2k piece."""
    return EvenClass(x.d0, tuple(-v for v in x.d2), x.d4, -x.d6)


def exp2(v, g: ThreefoldData) -> EvenClass:
    """Truncated exponential 1 + x + x^2/2 + x^3/6 of a two-form.

    The coefficient vector may carry rational, complex or RationalComplex
    entries; the series is exact for exact inputs.
    """
    v = tuple(v)
    x = EvenClass.two_form(v)
    x2 = wedge(x, x, g)
    x3 = wedge(x2, x, g)
    return EvenClass.one(g.b2) + x + x2 * Fraction(1, 2) + x3 * Fraction(1, 6)


def log_unit(x: EvenClass, g: ThreefoldData) -> EvenClass:
    """Truncated logarithm of x / x.d0; inverse of exp2 on unit classes."""
    if x.d0 == 0:
        raise ValueError("log_unit needs a nonvanishing degree-0 part")
    inv = Fraction(1) / x.d0 if is_exact(x.d0) else 1.0 / x.d0
    u = x * inv - EvenClass.one(x.b2)
    u2 = wedge(u, u, g)
    u3 = wedge(u2, u, g)
    return u - u2 * Fraction(1, 2) + u3 * Fraction(1, 3)


def sqrt_todd(g: ThreefoldData) -> EvenClass:
    """Square root of the Todd class for trivial canonical bundle: 1 + c2/24."""
    return EvenClass(
        Fraction(1),
        (Fraction(0),) * g.b2,
        tuple(v * Fraction(1, 24) for v in g.c2_pair),
        Fraction(0),
    )


def cone_margin(v, g: ThreefoldData):
    """Minimum cone margin of a two-form, normalized to unit max-entry.

    Margins are the basis coefficients together with the Mori-ray pairings;
    the sign of the smallest one decides membership.
    """
    g._check_vec(v)
    margins = list(v)
    for ray in g.mori_rays:
        margins.append(sum(r * x for r, x in zip(ray, v)))
    scale = max(abs(x) for x in v) if any(x != 0 for x in v) else 0
    if scale == 0:
        return Fraction(0)
    m = min(margins)
    return m / scale if is_exact(m) and is_exact(scale) else float(m) / float(scale)


def in_kahler_cone(v, g: ThreefoldData, strict: bool = False, tol: float = STRICT_CONE_TOL):
    """Cone membership of a two-form; returns (ok, margin)."""
    m = cone_margin(v, g)
    if strict:
        return m > tol, m
    if is_exact(m):
        return m >= 0, m
    return m >= -tol, m


def kahler_cone_status(v, g: ThreefoldData, tol: float = STRICT_CONE_TOL) -> str:
    """Classify a two-form as 'interior', 'boundary' or 'outside' the Kahler cone."""
    m = cone_margin(v, g)
    if m > tol:
        return "interior"
    if is_exact(m) and m == 0:
        return "boundary"
    if abs(m) <= tol:
        return "boundary"
    return "outside"


def ample_positivity_check(h1, h2, h3, g: ThreefoldData):
    """Evaluate (H1 H2 H3)^3 >= H1^3 H2^3 H3^3 for three ample classes.

    Returns (holds, lhs, rhs).  Non-ample input is rejected.
    """
    for h in (h1, h2, h3):
        ok, margin = in_kahler_cone(h, g, strict=True)
        if not ok:
            raise ValueError(f"ample positivity needs strictly ample input, margin {margin}")
    mixed = g.triple(h1, h2, h3)
    lhs = mixed ** 3
    rhs = g.triple(h1, h1, h1) * g.triple(h2, h2, h2) * g.triple(h3, h3, h3)
    return lhs >= rhs, lhs, rhs


@dataclass(frozen=True)
class SurfaceData:
    """Characteristic numbers of a divisor surface inside the threefold."""

    divisor: tuple
    d_cubed: Fraction
    c1D_sq: Fraction
    c2D: Fraction


def threefold_from_dict(data: dict) -> ThreefoldData:
    """Build ThreefoldData from the JSON geometry layout.

    Expected fields: name, b2, intersect as a list of [a, b, c, value] with
    0-based indices (symmetrized on load), c2_pair, euler, mori_rays.
    """
    try:
        b2 = int(data["b2"])
        name = str(data.get("name", ""))
        euler = int(data["euler"])
        raw_entries = data["intersect"]
        c2_pair = rational_vec(data["c2_pair"])
        mori = tuple(rational_vec(ray) for ray in data["mori_rays"])
    except KeyError as exc:
        raise IngestError(f"geometry is missing required field {exc.args[0]!r}") from None
    tensor = [[[Fraction(0)] * b2 for _ in range(b2)] for _ in range(b2)]
    seen: dict[tuple, Fraction] = {}
    for entry in raw_entries:
        if len(entry) != 4:
            raise IngestError(f"intersect entry {entry!r} is not [a, b, c, value]")
        a, b, c = (int(entry[i]) for i in range(3))
        if not all(0 <= i < b2 for i in (a, b, c)):
            raise IngestError(f"intersect entry {entry!r} has an index outside 0..{b2 - 1}")
        val = rational(entry[3])
        key = tuple(sorted((a, b, c)))
        if key in seen and seen[key] != val:
            raise IngestError(f"conflicting intersect values for indices {key}")
        seen[key] = val
    for (a, b, c), val in seen.items():
        for i, j, k in ((a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)):
            tensor[i][j][k] = val
    return ThreefoldData(
        name=name,
        b2=b2,
        intersect=tuple(tuple(tuple(r) for r in p) for p in tensor),
        c2_pair=c2_pair,
        euler=euler,
        mori_rays=mori,
    )


def _quintic() -> ThreefoldData:
    return threefold_from_dict(
        {
            "name": "quintic",
            "b2": 1,
            "intersect": [[0, 0, 0, 5]],
            "c2_pair": [50],
            "euler": -200,
            "mori_rays": [[1]],
        }
    )


def _elliptic_p2() -> ThreefoldData:
    # Smooth Weierstrass fibration over the projective plane in the nef basis
    # J1 = section + 3 fiber-pullbacks, J2 = pullback of the hyperplane.
    return threefold_from_dict(
        {
            "name": "elliptic_p2",
            "b2": 2,
            "intersect": [[0, 0, 0, 9], [0, 0, 1, 3], [0, 1, 1, 1], [1, 1, 1, 0]],
            "c2_pair": [102, 36],
            "euler": -540,
            "mori_rays": [[1, 0], [0, 1]],
        }
    )


PRESETS = {"quintic": _quintic, "elliptic_p2": _elliptic_p2}

GEOMETRY_DIR_ENV = "ATTRKIT_GEOMETRY_DIR"


def preset(name: str) -> ThreefoldData:
    try:
        return PRESETS[name]()
    except KeyError:
        raise IngestError(
            f"unknown geometry preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None


def load_geometry(spec: str | Path) -> ThreefoldData:
    """Resolve a geometry by preset name, by name under $ATTRKIT_GEOMETRY_DIR, or by path."""
    spec = str(spec)
    if spec in PRESETS:
        return PRESETS[spec]()
    search_dir = os.environ.get(GEOMETRY_DIR_ENV)
    candidates = []
    if search_dir:
        candidates.append(Path(search_dir) / f"{spec}.json")
        candidates.append(Path(search_dir) / spec)
    candidates.append(Path(spec))
    for path in candidates:
        if path.is_file():
            try:
                with open(path, encoding="utf-8") as fh:
                    data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise IngestError(
                    f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
                ) from None
            return threefold_from_dict(data)
    raise IngestError(f"geometry {spec!r} is neither a preset nor a readable file")
