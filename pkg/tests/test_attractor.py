import math
import random
from fractions import Fraction

import pytest

from attrkit.attractor import (
    BOUND_COEFF,
    ZETA_3,
    ConeError,
    SolveError,
    c3_bound,
    c3_bound_ample,
    central_charge,
    charge_map,
    reflexive_sheaf_existence,
    surface_bundle_existence,
    minimize_z_norm,
    solve_positive_rank,
    solve_quadratic_system,
    solve_rank_zero,
    z_norm_fd_gradient,
    z_norm_sq,
)
from attrkit.chern import ChernRecord, mukai, rescale, twist
from attrkit.geometry import RationalComplex, exp2, integrate, wedge
from attrkit.pushforward import MissingLiftError, SurfaceBundleRecord

from conftest import rand_record, rand_vec

F = Fraction
H = (F(1),)

TQ = ChernRecord(F(3), (F(0),), (F(-50),), F(-100))


def series_oracle_z(rec, B, J, g):
    """Independent central-charge evaluation through the generic exponential series."""
    t = tuple(RationalComplex(-b, -j) for b, j in zip(B, J))
    return integrate(wedge(exp2(t, g), mukai(rec, g), g))


def forward_instance(g, h, xi, r, c1):
    """Record whose attractor data is (h, xi) by construction; floats where a root enters."""
    u = g.pair_vec(h, h)
    h3 = float(g.triple(h, h, h))
    c2t = tuple(r * a + F(r) / 24 * cm for a, cm in zip(u, g.c2_pair))
    c3 = 2.0 ** 2.5 * r / 3.0 * h3 * xi / math.sqrt(1.0 + xi * xi)
    twisted = ChernRecord(F(r), (F(0),) * g.b2, tuple(-v for v in c2t), c3 / 2.0)
    return twist(twisted, tuple(F(v, r) for v in c1), g)


def test_central_charge_exact_example(quintic):
    O = ChernRecord.trivial(1)
    z = central_charge(O, (F(0),), H, quintic)
    assert z == RationalComplex(0, F(-5, 4))
    assert z == series_oracle_z(O, (F(0),), H, quintic)


def test_central_charge_vs_series_oracle(geometry, rng):
    g = geometry
    for _ in range(40):
        rec = rand_record(rng, g.b2)
        B = rand_vec(rng, g.b2, -3, 3)
        J = tuple(F(rng.randint(1, 5)) for _ in range(g.b2))
        assert central_charge(rec, B, J, g) == series_oracle_z(rec, B, J, g)


def test_central_charge_homogeneity(quintic, rng):
    rec = rand_record(rng, 1)
    z1 = central_charge(rec, (F(1),), H, quintic)
    z3 = central_charge(rescale(rec, 3), (F(1),), H, quintic)
    assert z3 == RationalComplex(3) * z1


def test_central_charge_cone_error(quintic):
    with pytest.raises(ConeError):
        central_charge(TQ, (F(0),), (F(-1),), quintic)


def test_central_charge_corrections(quintic):
    O = ChernRecord.trivial(1)
    z0 = complex(central_charge(O, (F(0),), H, quintic))
    z1 = central_charge(O, (F(0),), H, quintic, corrections=True)
    shift = z1 - z0
    expect = -1j * ZETA_3 * quintic.euler / (2 * math.pi) ** 3
    assert abs(shift - expect) < 1e-15


def test_large_volume_polynomial_form(geometry, rng):
    # pairing the character against e^{H} reproduces the quartic polynomial in H
    g = geometry
    for _ in range(20):
        rec = rand_record(rng, g.b2)
        Hv = tuple(F(rng.randint(1, 4)) for _ in range(g.b2))
        gamma = mukai(rec, g)
        z = integrate(wedge(exp2(Hv, g), gamma, g))
        q0, q2, q4, q6 = gamma.d0, gamma.d2, gamma.d4, gamma.d6
        expect = (
            F(1, 6) * q0 * g.triple(Hv, Hv, Hv)
            + F(1, 2) * sum(a * b for a, b in zip(g.pair_vec(Hv, Hv), q2))
            + sum(a * b for a, b in zip(Hv, q4))
            + q6
        )
        assert z == expect


def test_z_norm_sq(quintic, rng):
    O = ChernRecord.trivial(1)
    for t in (F(1), F(2), F(7, 3)):
        val = z_norm_sq(O, (F(0),), (t,), quintic)
        z_im = 5 * t**3 / 6 - 25 * t / 12
        assert val == z_im**2 / (5 * t**3)
    rec = rand_record(rng, 1)
    v1 = z_norm_sq(rec, (F(1),), H, quintic)
    v3 = z_norm_sq(rescale(rec, 3), (F(1),), H, quintic)
    assert v3 == 9 * v1
    assert v1 >= 0


def test_solve_tq(quintic):
    out = solve_positive_rank(TQ, quintic)
    assert out.status == "outside"
    assert out.reason == "c3 bound violated"
    assert out.detail["target_pair"] == (F(175, 12),)
    assert abs(out.detail["H_tilde_cubed"] - 5 * (35 / 12) ** 1.5) < 1e-12
    assert out.detail["c3_abs"] == 200
    assert abs(out.detail["c3_bound_rhs"] - BOUND_COEFF * 3 * 5 * (35 / 12) ** 1.5) < 1e-9


def test_solve_no_real_class(quintic):
    O = ChernRecord.trivial(1)
    out = solve_positive_rank(O, quintic)
    assert out.status == "outside"
    assert out.reason == "no real solution for the attractor class"


def test_solve_zero_c3(quintic):
    # c2 chosen so the attractor class is the unit ray; c3 = 0 forces xi = 0
    c2t = (F(2) * 5 + F(2, 24) * 50,)
    rec = ChernRecord(F(2), (F(0),), tuple(-v for v in c2t), F(0))
    out = solve_positive_rank(rec, quintic)
    assert out.status == "interior"
    sol = out.solution
    assert sol.xi == 0.0
    assert abs(sol.lam - math.sqrt(2)) < 1e-15
    assert sol.B == (0.0,)
    twisted = twist(rec, (F(1),), quintic)
    out2 = solve_positive_rank(twisted, quintic)
    assert abs(out2.solution.B[0] - 1.0) < 1e-12
    assert out2.solution.J == sol.J


def test_forward_roundtrip_with_exact_c3(quintic):
    # xi = 1 makes the forward c3 exactly 40/3
    c2t = (F(10) + F(25, 6),)
    rec = ChernRecord(F(2), (F(0),), tuple(-v for v in c2t), F(40, 3) / 2)
    out = solve_positive_rank(rec, quintic)
    assert out.status == "interior"
    assert out.solution.residual < 1e-10
    assert abs(out.solution.xi - 1.0) < 1e-12
    assert abs(out.solution.J[0] - 1.0) < 1e-12


def test_forward_roundtrip_b2_2(ell2):
    local = random.Random(5)
    for _ in range(10):
        h = tuple(F(local.randint(1, 5), 2) for _ in range(2))
        xi = local.uniform(-1.5, 1.5)
        r = local.randint(2, 5)
        c1 = rand_vec(local, 2, -3, 3)
        rec = forward_instance(ell2, h, xi, r, c1)
        out = solve_positive_rank(rec, ell2)
        assert out.status == "interior", out.reason
        assert out.solution.residual < 1e-8
        lam = math.sqrt(2.0 / (1.0 + xi * xi))
        for a in range(2):
            assert abs(out.solution.J[a] - lam * float(h[a])) < 1e-8


def test_rescale_invariance_of_solution(quintic, ell2, rng):
    for g in (quintic, ell2):
        for _ in range(25):
            rec = rand_record(rng, g.b2)
            out1 = solve_positive_rank(rec, g)
            out2 = solve_positive_rank(rescale(rec, F(7, 2)), g)
            assert out1.status == out2.status
            assert out1.reason == out2.reason
            if out1.solution is not None:
                assert out1.solution.J == out2.solution.J
                assert out1.solution.lam == out2.solution.lam
                assert out1.solution.H_tilde == out2.solution.H_tilde


def test_twist_covariance(quintic, rng):
    c2t = (F(10) + F(25, 6),)
    rec = ChernRecord(F(2), (F(0),), tuple(-v for v in c2t), F(40, 3) / 2)
    base = solve_positive_rank(rec, quintic)
    for L in ((F(1),), (F(-2),), (F(3),)):
        moved = solve_positive_rank(twist(rec, L, quintic), quintic)
        assert moved.solution.J == base.solution.J
        assert moved.solution.xi == base.solution.xi
        assert abs(moved.solution.B[0] - (base.solution.B[0] + float(L[0]))) < 1e-9


def test_boundary_saturation(quintic):
    # same discriminant data as the tangent record, c3 placed exactly on the bound
    h3 = 5 * (35 / 12) ** 1.5
    c3 = BOUND_COEFF * 3 * h3
    rec = ChernRecord(F(3), (F(0),), (F(-50),), c3 / 2)
    out = solve_positive_rank(rec, quintic)
    assert out.status == "boundary"
    assert out.reason == "c3 saturates the attractor bound"


def test_quadratic_system_solver(ell2):
    target = ell2.pair_vec((F(1), F(2)), (F(1), F(2)))
    roots = solve_quadratic_system(target, ell2)
    assert any(
        all(abs(abs(x) - e) < 1e-9 for x, e in zip(r, (1.0, 2.0))) for r in roots
    )


def test_solve_rank_zero_worked(quintic):
    w = SurfaceBundleRecord.with_lift(2, (F(0),), F(10), H, quintic)
    out = solve_rank_zero(w, H, quintic)
    assert out.status == "interior"
    assert out.detail["discriminant"] == F(65, 3)
    assert out.detail["xi_sq"] == F(4, 13)
    assert abs(out.solution.xi - 2 / math.sqrt(13)) < 1e-15
    assert out.solution.B == (-0.5,)
    assert out.solution.residual < 1e-12
    assert out.solution.C_bar == complex(0, -2 * out.solution.xi)


def test_solve_rank_zero_boundary_and_outside(quintic):
    w = SurfaceBundleRecord.with_lift(2, (F(0),), F(55, 12), H, quintic)
    out = solve_rank_zero(w, H, quintic)
    assert out.status == "boundary"
    w = SurfaceBundleRecord.with_lift(2, (F(0),), F(0), H, quintic)
    out = solve_rank_zero(w, H, quintic)
    assert out.status == "outside"


def test_solve_rank_zero_errors(quintic, ell2):
    w = SurfaceBundleRecord(rank=2, c1_sq=F(0), c1_dot_D=F(0), c2_num=F(10))
    with pytest.raises(MissingLiftError):
        solve_rank_zero(w, H, quintic)
    w2 = SurfaceBundleRecord.with_lift(2, (F(0), F(0)), F(10), (F(1), F(1)), ell2)
    with pytest.raises(ConeError):
        solve_rank_zero(w2, (F(1), F(0)), ell2)


def test_surface_bundle_existence_matches_solver(quintic, ell2, rng):
    for g in (quintic, ell2):
        for _ in range(50):
            D = tuple(F(rng.randint(1, 3)) for _ in range(g.b2))
            w = SurfaceBundleRecord.with_lift(
                rng.randint(1, 5), rand_vec(rng, g.b2, -2, 2), F(rng.randint(-6, 12)), D, g
            )
            entry = surface_bundle_existence(w, D, g)
            out = solve_rank_zero(w, D, g)
            assert entry.satisfied == (out.status == "interior")


def test_c3_bound(quintic):
    entry = c3_bound(TQ, quintic)
    assert entry.lhs == 200
    assert abs(entry.rhs - 140.88838503239737) < 1e-9
    assert not entry.satisfied
    assert abs(entry.margin + 59.1116149676) < 1e-6
    zero_c3 = ChernRecord(F(3), (F(0),), (F(-175, 4),), F(0))
    assert c3_bound(zero_c3, quintic).satisfied
    with pytest.raises(SolveError):
        c3_bound(ChernRecord.trivial(1), quintic)


def test_c3_bound_ample(quintic, ell2):
    entry = c3_bound_ample(TQ, H, quintic)
    ref = c3_bound(TQ, quintic)
    assert abs(entry.rhs - ref.rhs) < 1e-9  # b2 = 1 forces equality
    assert entry.lhs == 200
    local = random.Random(3)
    for _ in range(50):
        h = tuple(F(local.randint(1, 5), 2) for _ in range(2))
        rec = forward_instance(ell2, h, local.uniform(-1, 1), local.randint(2, 4), (F(0), F(0)))
        ref = c3_bound(rec, ell2)
        for _ in range(3):
            w = tuple(F(local.randint(1, 7)) for _ in range(2))
            relaxed = c3_bound_ample(rec, w, ell2)
            assert relaxed.rhs >= ref.rhs - 1e-9 * abs(ref.rhs)
    bad = ChernRecord(F(2), (F(0),), (F(20),), F(0))  # negative discriminant direction
    assert c3_bound_ample(bad, H, quintic).status == "not_applicable"


def test_reflexive_sheaf_existence(quintic, rng):
    report = reflexive_sheaf_existence(TQ, quintic)
    assert report["attractor_class_ample"].satisfied
    assert not report["c3_strict"].satisfied
    # forward-constructed interior record passes both parts
    c2t = (F(10) + F(25, 6),)
    rec = ChernRecord(F(2), (F(0),), tuple(-v for v in c2t), F(40, 3) / 2)
    report = reflexive_sheaf_existence(rec, quintic)
    assert report.all_satisfied
    # twist invariance of the two sides
    moved = reflexive_sheaf_existence(twist(rec, (F(2),), quintic), quintic)
    for key in ("attractor_class_ample", "c3_strict"):
        assert math.isclose(float(moved[key].lhs), float(report[key].lhs), rel_tol=1e-12, abs_tol=1e-12)
        assert math.isclose(float(moved[key].rhs), float(report[key].rhs), rel_tol=1e-12, abs_tol=1e-12)
    with pytest.raises(ValueError):
        reflexive_sheaf_existence(ChernRecord.trivial(1), quintic)


def test_charge_map(quintic, ell2, rng):
    O = ChernRecord.trivial(1)
    cv = charge_map(O, quintic)
    assert cv.p0 == 1 and cv.p == (F(0),) and cv.q == (F(-50, 12),) and cv.q0 == 0
    a = rand_record(rng, 2)
    b = rand_record(rng, 2)
    ca, cb, cab = charge_map(a, ell2), charge_map(b, ell2), charge_map(a + b, ell2)
    assert cab.q == tuple(x + y for x, y in zip(ca.q, cb.q))
    assert cab.q0 == ca.q0 + cb.q0
    ident = ((F(1), F(0)), (F(0), F(1)))
    cva = charge_map(a, ell2, ident)
    assert cva.q == tuple(q + c for q, c in zip(ca.q, a.c1))
    assert cva.p == ca.p and cva.q0 == ca.q0
    with pytest.raises(ValueError):
        charge_map(a, ell2, ((F(0), F(1)), (F(2), F(0))))


def test_minimizer_matches_analytic(quintic):
    c2t = (F(10) + F(25, 6),)
    rec = ChernRecord(F(2), (F(0),), tuple(-v for v in c2t), F(40, 3) / 2)
    out = solve_positive_rank(rec, quintic)
    sol = out.solution
    res = minimize_z_norm(
        rec, tuple(b + 0.05 for b in sol.B), tuple(j * 1.08 for j in sol.J), quintic
    )
    assert abs(res.B[0] - sol.B[0]) < 1e-4
    assert abs(res.J[0] - sol.J[0]) < 1e-4
    assert res.value > 0
    # stationarity of the analytic point
    grads = z_norm_fd_gradient(rec, sol.B, sol.J, quintic)
    assert max(abs(v) for v in grads) / max(res.value, 1.0) < 1e-5


def test_minimizer_determinism(quintic):
    c2t = (F(10) + F(25, 6),)
    rec = ChernRecord(F(2), (F(0),), tuple(-v for v in c2t), F(40, 3) / 2)
    r1 = minimize_z_norm(rec, (0.3,), (1.4,), quintic)
    r2 = minimize_z_norm(rec, (0.3,), (1.4,), quintic)
    assert r1 == r2


def test_minimizer_rescale_quadratic(quintic):
    c2t = (F(10) + F(25, 6),)
    rec = ChernRecord(F(2), (F(0),), tuple(-v for v in c2t), F(40, 3) / 2)
    r1 = minimize_z_norm(rec, (0.1,), (1.2,), quintic)
    r2 = minimize_z_norm(rescale(rec, 3), (0.1,), (1.2,), quintic)
    assert math.isclose(r2.value, 9 * r1.value, rel_tol=1e-6)


def test_minimizer_trivial_charge_finds_zero(quintic):
    # |Z| of the trivial bundle vanishes at an interior point: the minimum is zero
    O = ChernRecord.trivial(1)
    res = minimize_z_norm(O, (0.0,), (1.2,), quintic)
    assert res.value < 1e-12
    assert abs(res.J[0] - math.sqrt(2.5)) < 1e-3
