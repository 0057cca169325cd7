"""Central charges, the attractor solutions for both rank branches, and the bounds.

The ring layer stays exact; this module converts to floating point exactly
where a square root or a nonlinear solve intervenes.  Bound left/right sides
that need no square root are reported as exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .chern import ChernRecord, drezet, mukai, twist
from .geometry import (
    EvenClass,
    RationalComplex,
    ThreefoldData,
    dot,
    in_kahler_cone,
    is_exact,
    kahler_cone_status,
    rational_vec,
)
from .pushforward import MissingLiftError, SurfaceBundleRecord, divisor_chern, grr_push
from .reports import BoundEntry, BoundsReport, NotApplicableEntry

ZETA_3 = 1.2020569031595943
BOUND_COEFF = 2.0 ** 2.5 / 3.0

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 80
RESIDUAL_TOL = 1e-8
BOUNDARY_TOL = 1e-9
S_BOUNDARY_TOL = 1e-12
MINIMIZE_MAX_EVALS = 100_000


class ConeError(ValueError):
    """A polarization argument is not where the operation requires it."""


class SolveError(RuntimeError):
    """A bound or predicate needed attractor data that could not be produced."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class AttractorSolution:
    branch: str
    H_tilde: tuple | None
    xi: float
    lam: float | None
    B: tuple
    J: tuple
    C_bar: complex
    residual: float
    cone_status: str
    large_volume: bool


@dataclass(frozen=True)
class SolveOutcome:
    """Classification of a charge against the attractor set, with solution data.

    status is 'interior', 'boundary' or 'outside'; reason is empty for
    interior points.  detail carries named numeric diagnostics, exact where
    no square root entered.
    """

    status: str
    reason: str
    solution: AttractorSolution | None
    detail: dict = field(default_factory=dict)

    @property
    def in_att(self) -> bool:
        return self.status in ("interior", "boundary")


class ChargeVector(NamedTuple):
    p0: object
    p: tuple
    q: tuple
    q0: object


class MinimizeResult(NamedTuple):
    B: tuple
    J: tuple
    value: float
    grad_norm: float
    n_eval: int
    converged: bool
    boundary_flow: bool


def _require_interior(J, g: ThreefoldData, what: str = "J"):
    ok, margin = in_kahler_cone(J, g, strict=True)
    if not ok:
        raise ConeError(f"{what} must lie strictly inside the Kahler cone (margin {margin})")


def central_charge(c: ChernRecord, B, J, g: ThreefoldData, corrections: bool = False):
    """Central charge: integral of exp(-(B+iJ)) against the Mukai vector of c.

    Exact rational inputs produce an exact RationalComplex; otherwise (or with
    the volume correction enabled) a machine complex is returned.  The
    correction adds the six-form term i zeta(3) chi / (2 pi)^3 to the
    exponential side, which shifts Z by -i zeta(3) chi rank / (2 pi)^3 after
    dualizing.
    """
    B, J = tuple(B), tuple(J)
    _require_interior(J, g)
    gamma = mukai(c, g)
    exact = (
        not corrections
        and all(is_exact(v) for v in B)
        and all(is_exact(v) for v in J)
        and is_exact(gamma.d0)
        and all(is_exact(v) for v in gamma.d2)
        and all(is_exact(v) for v in gamma.d4)
        and is_exact(gamma.d6)
    )
    if exact:
        t = tuple(RationalComplex(b, j) for b, j in zip(B, J))
    else:
        t = tuple(complex(float(b), float(j)) for b, j in zip(B, J))
        gamma = _float_class(gamma)
    z = (
        gamma.d6
        - dot(t, gamma.d4)
        + Fraction(1, 2) * dot(gamma.d2, g.pair_vec(t, t))
        - Fraction(1, 6) * gamma.d0 * g.triple(t, t, t)
    )
    if corrections:
        z = complex(z) - 1j * ZETA_3 * g.euler / (2 * math.pi) ** 3 * float(gamma.d0)
    return z


def z_norm_sq(c: ChernRecord, B, J, g: ThreefoldData, corrections: bool = False):
    """|Z|^2 divided by the volume integral of J^3."""
    z = central_charge(c, B, J, g, corrections=corrections)
    vol = g.triple(tuple(J), tuple(J), tuple(J))
    if isinstance(z, RationalComplex):
        return z.norm_sq() / vol
    return abs(z) ** 2 / float(vol)


def _float_class(x: EvenClass) -> EvenClass:
    return EvenClass(
        float(x.d0), tuple(float(v) for v in x.d2), tuple(float(v) for v in x.d4), float(x.d6)
    )


@lru_cache(maxsize=64)
def _np_tensor(g: ThreefoldData) -> np.ndarray:
    m = g.b2
    out = np.empty((m, m, m))
    for a in range(m):
        for b in range(m):
            for c in range(m):
                out[a, b, c] = float(g.intersect[a][b][c])
    return out


def _newton_starts(g: ThreefoldData) -> list[np.ndarray]:
    """Multi-start set: cone rays and pairwise midpoints at scales 0.1, 1, 10."""
    m = g.b2
    base = [np.eye(m)[a] for a in range(m)]
    for a in range(m):
        for b in range(a + 1, m):
            base.append((np.eye(m)[a] + np.eye(m)[b]) / 2.0)
    return [s * v for v in base for s in (0.1, 1.0, 10.0)]


def solve_quadratic_system(target, g: ThreefoldData) -> list[tuple[float, ...]]:
    """All distinct real roots h of sum_bc D_abc h_b h_c = target_a found by damped Newton."""
    D = _np_tensor(g)
    t = np.array([float(v) for v in target])
    scale = max(1.0, float(np.max(np.abs(t))))

    def fun(h):
        return np.einsum("abc,b,c->a", D, h, h) - t

    def jac(h):
        return 2.0 * np.einsum("abc,c->ab", D, h)

    roots: list[np.ndarray] = []
    for start in _newton_starts(g):
        h = start.copy()
        ok = False
        for _ in range(NEWTON_MAX_ITER):
            f = fun(h)
            n = np.max(np.abs(f))
            if n <= NEWTON_TOL * scale:
                ok = True
                break
            try:
                step = np.linalg.solve(jac(h), -f)
            except np.linalg.LinAlgError:
                break
            alpha = 1.0
            for _ in range(30):
                cand = h + alpha * step
                if np.max(np.abs(fun(cand))) < n:
                    h = cand
                    break
                alpha *= 0.5
            else:
                break
        if not ok:
            continue
        # roots come in +- pairs; store one representative, signs are tried later
        known = any(
            np.allclose(h, r, rtol=1e-7, atol=1e-9) or np.allclose(h, -r, rtol=1e-7, atol=1e-9)
            for r in roots
        )
        if not known:
            roots.append(h)
    return [tuple(float(x) for x in r) for r in roots]


def _pick_cone_root(roots, target, g: ThreefoldData):
    """Best root in the closed Kahler cone among +-h, or None with the best margin seen.

    Deterministic selection: interior before boundary, then smallest system
    residual, then lexicographic coordinates.
    """
    D = _np_tensor(g)
    t = np.array([float(v) for v in target])
    candidates = []
    best_outside = None
    for h in roots:
        for sgn in (1, -1):
            v = tuple(sgn * x for x in h)
            status = kahler_cone_status(v, g, tol=BOUNDARY_TOL)
            if status == "outside":
                _, margin = in_kahler_cone(v, g)
                if best_outside is None or margin > best_outside[1]:
                    best_outside = (v, margin)
            else:
                arr = np.array(v)
                res = float(np.max(np.abs(np.einsum("abc,b,c->a", D, arr, arr) - t)))
                candidates.append((status != "interior", res, v, status))
    if not candidates:
        return None, best_outside
    candidates.sort(key=lambda it: (it[0], it[1], it[2]))
    _, _, v, status = candidates[0]
    return (v, status), best_outside


def _attractor_target(c: ChernRecord, g: ThreefoldData):
    """Twisted record (c1 set to zero) and the pairing vector its attractor class must square to."""
    r = c.rank
    c1_over_r = tuple(v / r if is_exact(v) and is_exact(r) else float(v) / float(r) for v in c.c1)
    twisted = twist(c, tuple(-v for v in c1_over_r), g)
    c2t = twisted.c2_pair(g)
    target = tuple(
        v / r - cm * Fraction(1, 24) if is_exact(v) and is_exact(r) else float(v) / float(r) - float(cm) / 24.0
        for v, cm in zip(c2t, g.c2_pair)
    )
    return twisted, c1_over_r, target


def _attractor_residual(gamma: EvenClass, B, J, c_bar: complex, g: ThreefoldData) -> float:
    gamma = _float_class(gamma)
    t = tuple(complex(b, j) for b, j in zip(B, J))
    parts = [abs(gamma.d0 - c_bar.real)]
    for a in range(g.b2):
        parts.append(abs(gamma.d2[a] - (c_bar * t[a]).real))
    tt = g.pair_vec(t, t)
    for a in range(g.b2):
        parts.append(abs(gamma.d4[a] - (c_bar * tt[a]).real / 2.0))
    parts.append(abs(gamma.d6 - (c_bar * g.triple(t, t, t)).real / 6.0))
    return max(parts)


def solve_positive_rank(c: ChernRecord, g: ThreefoldData) -> SolveOutcome:
    """Analytic attractor solution for a positive-rank charge.

    Steps: twist c1 to zero; solve the quadratic system for the attractor
    class by multi-start damped Newton; keep the cone root; read the cubic
    coefficient off the degree-6 equation and reject it when it exceeds the
    attractor bound; assemble (xi, lambda, B, J, C) and verify the fixed-point
    residual componentwise.
    """
    if c.rank <= 0:
        raise ValueError("positive-rank branch needs rank > 0")
    r = c.rank
    twisted, c1_over_r, target = _attractor_target(c, g)
    detail: dict = {"target_pair": target}
    roots = solve_quadratic_system(target, g)
    if not roots:
        return SolveOutcome(
            "outside", "no real solution for the attractor class", None, detail
        )
    picked, best_outside = _pick_cone_root(roots, target, g)
    if picked is None:
        v, margin = best_outside
        detail["best_root"] = v
        detail["best_root_margin"] = float(margin)
        return SolveOutcome(
            "outside", "attractor class lies outside the Kahler cone", None, detail
        )
    h, h_status = picked
    h3 = float(np.einsum("abc,a,b,c->", _np_tensor(g), np.array(h), np.array(h), np.array(h)))
    c3t = twisted.c3_number(g)
    bound_rhs = BOUND_COEFF * float(r) * h3
    detail.update(
        {
            "H_tilde": h,
            "H_tilde_cubed": h3,
            "c3_twisted": c3t,
            "c3_abs": abs(c3t),
            "c3_bound_rhs": bound_rhs,
        }
    )
    if h3 <= 0.0:
        if float(abs(c3t)) <= S_BOUNDARY_TOL:
            return SolveOutcome(
                "boundary", "degenerate attractor class with vanishing volume", None, detail
            )
        return SolveOutcome("outside", "c3 bound violated", None, detail)
    # the exact ratio c3/r keeps s, and hence J, bitwise invariant under rescaling
    c3_over_r = c3t / r
    s = 3.0 * float(c3_over_r) / (2.0 ** 2.5 * h3)
    detail["s"] = s
    if abs(s) > 1.0 + S_BOUNDARY_TOL:
        return SolveOutcome("outside", "c3 bound violated", None, detail)
    if abs(abs(s) - 1.0) <= S_BOUNDARY_TOL:
        return SolveOutcome("boundary", "c3 saturates the attractor bound", None, detail)
    xi = s / math.sqrt(1.0 - s * s)
    lam = math.sqrt(2.0 / (1.0 + xi * xi))
    J = tuple(lam * x for x in h)
    B = tuple(float(b) - xi * j for b, j in zip(c1_over_r, J))
    c_bar = complex(float(r), -float(r) * xi)
    residual = _attractor_residual(mukai(c, g), B, J, c_bar, g)
    if residual > RESIDUAL_TOL:
        raise ArithmeticError(f"attractor fixed-point residual {residual} exceeds tolerance")
    sol = AttractorSolution(
        branch="positive_rank",
        H_tilde=h,
        xi=xi,
        lam=lam,
        B=B,
        J=J,
        C_bar=c_bar,
        residual=residual,
        cone_status=h_status,
        large_volume=min(J) > 1.0,
    )
    status = "boundary" if h_status == "boundary" else "interior"
    reason = "attractor class on the cone boundary" if status == "boundary" else ""
    return SolveOutcome(status, reason, sol, detail)


def solve_rank_zero(w: SurfaceBundleRecord, D, g: ThreefoldData) -> SolveOutcome:
    """Attractor solution for a charge supported on an ample divisor.

    The free parameter xi is normalized so the discriminant equation reads
    L = r^2 D^3 / (3 xi^2); the fixed point it solves is C = -i r xi with
    J = D / xi, which is what the componentwise residual verifies.
    """
    D = tuple(D)
    if w.rank <= 0:
        raise ValueError("rank-zero branch needs positive rank on the surface")
    _require_interior(D, g, what="divisor")
    if w.c1_lift is None:
        raise MissingLiftError("rank-zero solve needs the ambient lift of c1")
    w.check_lift(D, g)
    r = w.rank
    sd = divisor_chern(D, g)
    L = 2 * r * w.c2_num - (r - 1) * w.c1_sq - Fraction(r * r, 12) * sd.c2D
    detail = {"discriminant": L, "c2D": sd.c2D, "d_cubed": sd.d_cubed}
    zero = L == 0 if is_exact(L) else abs(float(L)) <= BOUNDARY_TOL
    if zero:
        return SolveOutcome("boundary", "rank-zero discriminant vanishes", None, detail)
    if L < 0:
        return SolveOutcome("outside", "rank-zero discriminant negative", None, detail)
    xi_sq = Fraction(r * r) * sd.d_cubed / (3 * L) if is_exact(L) else r * r * float(sd.d_cubed) / (3 * float(L))
    detail["xi_sq"] = xi_sq
    xi = math.sqrt(float(xi_sq))
    J = tuple(float(v) / xi for v in D)
    B = tuple(float(l) / r - float(v) / 2.0 for l, v in zip(w.c1_lift, D))
    c_bar = complex(0.0, -float(r) * xi)
    gamma = mukai(grr_push(w, D, g), g)
    residual = _attractor_residual(gamma, B, J, c_bar, g)
    if residual > RESIDUAL_TOL:
        raise ArithmeticError(f"attractor fixed-point residual {residual} exceeds tolerance")
    sol = AttractorSolution(
        branch="rank_zero",
        H_tilde=None,
        xi=xi,
        lam=None,
        B=B,
        J=J,
        C_bar=c_bar,
        residual=residual,
        cone_status=kahler_cone_status(J, g),
        large_volume=min(J) > 1.0,
    )
    return SolveOutcome("interior", "", sol, detail)


def _c3_completed(c: ChernRecord, g: ThreefoldData):
    """Twist-invariant c3 quantity 2 r delta3; equals the c3 integral when c1 = 0."""
    _, _, d3 = drezet(c, g)
    return 2 * c.rank * d3


def c3_bound(c: ChernRecord, g: ThreefoldData) -> BoundEntry:
    """|c3| against the attractor-volume bound; needs a solvable attractor class."""
    outcome = solve_positive_rank(c, g)
    if "c3_bound_rhs" not in outcome.detail:
        raise SolveError(outcome.reason)
    return BoundEntry(
        key="c3_attractor",
        lhs=outcome.detail["c3_abs"],
        relation="<=",
        rhs=outcome.detail["c3_bound_rhs"],
    )


def _delta2_minus_c2_over_24(c: ChernRecord, g: ThreefoldData) -> tuple:
    _, delta2, _ = drezet(c, g)
    return tuple(v - cm * Fraction(1, 24) for v, cm in zip(delta2, g.c2_pair))


def c3_bound_ample(c: ChernRecord, w, g: ThreefoldData):
    """The attractor c3 bound relaxed along an arbitrary ample direction w.

    Follows from the volume bound via the ample positivity inequality, so its
    right side dominates the attractor-class bound wherever both apply.
    """
    if c.rank <= 0:
        raise ValueError("the c3 bound applies to positive rank")
    w = tuple(w)
    _require_interior(w, g, what="w")
    target = _delta2_minus_c2_over_24(c, g)
    radicand = dot(w, target)
    if radicand < 0:
        return NotApplicableEntry(
            key="c3_ample",
            note="radicand negative along w; attractor-class pairing not positive",
        )
    w3 = g.triple(w, w, w)
    rhs = BOUND_COEFF * float(c.rank) * float(radicand) ** 1.5 / math.sqrt(float(w3))
    return BoundEntry(key="c3_ample", lhs=abs(_c3_completed(c, g)), relation="<=", rhs=rhs)


def reflexive_sheaf_existence(c: ChernRecord, g: ThreefoldData) -> BoundsReport:
    """Existence predicate for positive rank: ample attractor class plus strict c3 bound.

    Part (a) asks for an ample square root of the completed discriminant;
    part (b) compares the twist-invariant c3 quantity strictly against the
    volume bound.
    """
    if c.rank <= 1:
        raise ValueError("the existence predicate needs rank > 1")
    report = BoundsReport()
    outcome = solve_positive_rank(c, g)
    if "H_tilde" in outcome.detail:
        h = outcome.detail["H_tilde"]
        _, margin = in_kahler_cone(h, g)
        report.add(
            BoundEntry(
                key="attractor_class_ample",
                lhs=float(margin),
                relation=">",
                rhs=0.0,
                note="cone margin of the attractor class",
            )
        )
        report.add(
            BoundEntry(
                key="c3_strict",
                lhs=abs(_c3_completed(c, g)),
                relation="<",
                rhs=outcome.detail["c3_bound_rhs"],
            )
        )
    else:
        report.add(
            BoundEntry(
                key="attractor_class_ample",
                lhs=-1.0,
                relation=">",
                rhs=0.0,
                note=outcome.reason,
            )
        )
        report.add(NotApplicableEntry(key="c3_strict", note=outcome.reason))
    return report


def surface_bundle_existence(w: SurfaceBundleRecord, D, g: ThreefoldData) -> BoundEntry:
    """Existence predicate for a bundle on an ample divisor: positive discriminant."""
    D = tuple(D)
    _require_interior(D, g, what="divisor")
    sd = divisor_chern(D, g)
    r = w.rank
    lhs = 2 * r * w.c2_num - (r - 1) * w.c1_sq - Fraction(r * r, 12) * sd.c2D
    return BoundEntry(key="rank_zero_discriminant", lhs=lhs, relation=">", rhs=Fraction(0))


def charge_map(c: ChernRecord, g: ThreefoldData, A=None) -> ChargeVector:
    """Electric/magnetic charge components of a record in the dual-basis normalization."""
    if A is None:
        A = tuple((Fraction(0),) * g.b2 for _ in range(g.b2))
    else:
        A = tuple(rational_vec(row) for row in A)
        if len(A) != g.b2 or any(len(row) != g.b2 for row in A):
            raise ValueError("A must be a b2 x b2 matrix")
        for i in range(g.b2):
            for j in range(g.b2):
                if A[i][j] != A[j][i]:
                    raise ValueError("A must be symmetric")
    q = tuple(
        -(ch2 + c.rank * cm * Fraction(1, 12)) + sum(c.c1[b] * A[b][a] for b in range(g.b2))
        for a, (ch2, cm) in enumerate(zip(c.ch2, g.c2_pair))
    )
    return ChargeVector(p0=c.rank, p=c.c1, q=q, q0=c.ch3)


def z_norm_fd_gradient(c: ChernRecord, B, J, g: ThreefoldData, step: float = 1e-6) -> tuple:
    """Central finite-difference gradient of z_norm_sq over the (B, J) coordinates."""
    B = [float(v) for v in B]
    J = [float(v) for v in J]
    m = g.b2
    x = B + J

    def value(coords):
        return float(z_norm_sq(c, tuple(coords[:m]), tuple(coords[m:]), g))

    grads = []
    for i in range(2 * m):
        h = step * max(1.0, abs(x[i]))
        xp, xm = list(x), list(x)
        xp[i] += h
        xm[i] -= h
        grads.append((value(xp) - value(xm)) / (2.0 * h))
    return tuple(grads)


def _cone_margins(J, g: ThreefoldData) -> list[float]:
    out = [float(v) for v in J]
    for ray in g.mori_rays:
        out.append(sum(float(r) * float(x) for r, x in zip(ray, J)))
    return out


def minimize_z_norm(
    c: ChernRecord,
    start_B,
    start_J,
    g: ThreefoldData,
    corrections: bool = False,
    max_evals: int = MINIMIZE_MAX_EVALS,
) -> MinimizeResult:
    """Local minimization of |Z|^2 / J^3 over (B, J) with J kept inside the cone.

    Derivative-free polytope descent under a logarithmic barrier on the cone
    margins, with the barrier weight decayed to 1e-12; this is the
    independent cross-check for the analytic solver.  Deterministic for a
    given start.
    """
    start_B, start_J = tuple(start_B), tuple(start_J)
    _require_interior(start_J, g, what="start_J")
    m = g.b2
    D = _np_tensor(g)
    gamma = _float_class(mukai(c, g))
    g0, g2 = gamma.d0, np.array(gamma.d2)
    g4, g6 = np.array(gamma.d4), gamma.d6
    corr = -1j * ZETA_3 * g.euler / (2 * math.pi) ** 3 * g0 if corrections else 0.0
    rays = [np.array([float(v) for v in ray]) for ray in g.mori_rays]
    evals = [0]

    def raw(x):
        evals[0] += 1
        B, J = x[:m], x[m:]
        t = B + 1j * J
        z = (
            g6
            - t @ g4
            + 0.5 * np.einsum("a,abc,b,c->", g2, D, t, t)
            - g0 / 6.0 * np.einsum("abc,a,b,c->", D, t, t, t)
            + corr
        )
        vol = np.einsum("abc,a,b,c->", D, J, J, J)
        return (z.real * z.real + z.imag * z.imag) / vol

    def margins(x):
        J = x[m:]
        out = list(J)
        for ray in rays:
            out.append(float(ray @ J))
        return out

    def barrier_obj(weight):
        def f(x):
            ms = margins(x)
            lo = min(ms)
            if lo <= 0.0:
                return 1e50 * (1.0 - lo)
            return raw(x) + weight * sum(-math.log(v) for v in ms)

        return f

    x0 = np.array([float(v) for v in start_B] + [float(v) for v in start_J])
    converged = True
    per_stage = max(500, max_evals // 8)
    for weight in (1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 0.0):
        obj = barrier_obj(weight) if weight > 0.0 else barrier_obj(0.0)
        res = _scipy_minimize(
            obj,
            x0,
            method="Nelder-Mead",
            options={
                "xatol": 1e-10,
                "fatol": 1e-14,
                "maxiter": per_stage,
                "maxfev": per_stage,
                "adaptive": False,
            },
        )
        x0 = res.x
        if evals[0] >= max_evals:
            converged = False
            break

    value = raw(x0)
    grad = 0.0
    for i in range(2 * m):
        h = 1e-6 * max(1.0, abs(x0[i]))
        xp, xm = x0.copy(), x0.copy()
        xp[i] += h
        xm[i] -= h
        grad = max(grad, abs((raw(xp) - raw(xm)) / (2.0 * h)))
    final_margin = min(margins(x0))
    boundary_flow = bool(final_margin < 1e-6 * max(1.0, float(np.max(np.abs(x0[m:])))))
    return MinimizeResult(
        B=tuple(float(v) for v in x0[:m]),
        J=tuple(float(v) for v in x0[m:]),
        value=float(value),
        grad_norm=float(grad),
        n_eval=evals[0],
        converged=converged,
        boundary_flow=boundary_flow,
    )
