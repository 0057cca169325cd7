from fractions import Fraction

import pytest

from attrkit.attractor import solve_positive_rank
from attrkit.catalog import (
    FibrationData,
    SurfaceBoundInput,
    WrongGeometryError,
    jardim_record,
    monad_c3_threshold,
    monad_chern,
    spectral_c2,
    surface_index_bounds,
    tangent_quintic,
    yoshioka_check,
)
from attrkit.chern import bogomolov

F = Fraction
H = (F(1),)


def test_tangent_quintic(quintic, ell2):
    tq = tangent_quintic(quintic)
    assert tq.rank == 3 and tq.c1 == (F(0),)
    assert tq.c2_pair(quintic) == (F(50),)
    assert tq.c3_number(quintic) == -200
    assert bogomolov(tq, H, quintic) == F(50, 3)
    with pytest.raises(WrongGeometryError):
        tangent_quintic(ell2)


def test_monad_values(quintic):
    rec = monad_chern(3, 2, H, quintic)
    assert rec.c2_pair(quintic) == (F(15),)
    assert rec.c3_number(quintic) == 40
    # hand-expanded closed forms at r = 3: c2 = 3(n-1) H^2, c3 = (3n^2 - 3n + 2) H^3
    for n in range(2, 11):
        rec = monad_chern(3, n, H, quintic)
        assert rec.c2_pair(quintic) == (F(15) * (n - 1),)
        assert rec.c3_number(quintic) == 5 * (3 * n * n - 3 * n + 2)
    with pytest.raises(ValueError):
        monad_chern(2, 5, H, quintic)
    with pytest.raises(ValueError):
        monad_chern(3, 0, H, quintic)


def test_monad_growth(quintic):
    # c2 grows linearly and c3 quadratically in n
    c2 = lambda n: monad_chern(3, n, H, quintic).c2_pair(quintic)[0]
    c3 = lambda n: monad_chern(3, n, H, quintic).c3_number(quintic)
    for n in range(10, 101, 10):
        assert abs(c2(2 * n) / c2(n) - 2) < 0.2
        assert abs(c3(2 * n) / c3(n) - 4) < 0.2


def test_monad_threshold(quintic):
    n0 = monad_c3_threshold(3, H, quintic)
    assert n0 is not None
    assert n0 == 2
    out = solve_positive_rank(monad_chern(3, n0, H, quintic), quintic)
    assert out.reason == "c3 bound violated"
    # bogomolov always satisfied at the generating ray by construction
    for n in range(2, 20):
        assert bogomolov(monad_chern(3, n, H, quintic), H, quintic) >= 0


def _p2_fibration(g):
    # base is the projective plane: one ray, c1 = 3 hyperplanes, lift h -> J2
    return FibrationData(
        sigma=(F(1), F(-3)),
        fiber_pair=(F(1), F(0)),
        pi_star=((F(0),), (F(1),)),
        c1_base=(F(3),),
        base_rays=((F(1),),),
    )


def test_spectral_c2(ell2):
    fib = _p2_fibration(ell2)
    c2p, ample, effective = spectral_c2(2, (F(0),), 0, fib, ell2)
    assert c2p == (F(0), F(0)) and not ample and not effective
    # monotone flags along the ample direction of the base
    c2p, ample, effective = spectral_c2(2, (F(7),), 3, fib, ell2)
    assert ample and effective
    _, ample_small, eff_small = spectral_c2(2, (F(5),), 3, fib, ell2)
    assert ample_small and not eff_small


def test_spectral_decomposition_consistency(ell2):
    # c2 of the geometry minus 12 sigma pi*c1(base) is proportional to the fiber
    fib = _p2_fibration(ell2)
    twelve = tuple(12 * v for v in ell2.pair_vec(fib.sigma, fib.lift(fib.c1_base)))
    residue = tuple(a - b for a, b in zip(ell2.c2_pair, twelve))
    ratio = None
    for res, fib_v in zip(residue, fib.fiber_pair):
        if fib_v == 0:
            assert res == 0
        else:
            r = res / fib_v
            assert ratio is None or r == ratio
            ratio = r
    assert ratio == 102


def test_jardim(quintic):
    rec, report = jardim_record(quintic)
    assert rec.rank == 3
    assert rec.c1 == (F(-1),)
    assert rec.c2_pair(quintic) == (F(5),)
    entry = report["strengthened_bogomolov"]
    assert entry.lhs == F(20)
    assert entry.rhs == F(75, 2)
    assert not entry.satisfied
    assert entry.margin == F(-35, 2)
    classical = report["bogomolov"]
    assert classical.lhs == F(10, 9)
    assert classical.satisfied


def test_yoshioka(quintic):
    v = SurfaceBoundInput(r=2, c1_sq=F(0), c2_num=F(2), surface_kind="k3")
    assert yoshioka_check(v).satisfied
    v = SurfaceBoundInput(r=2, c1_sq=F(0), c2_num=F(1), surface_kind="k3")
    assert not yoshioka_check(v).satisfied
    v = SurfaceBoundInput(r=2, c1_sq=F(0), c2_num=F(3, 2), surface_kind="k3")
    entry = yoshioka_check(v)
    assert entry.margin == 0 and entry.status == "boundary"
    # monotone in c2
    margins = [
        yoshioka_check(
            SurfaceBoundInput(r=2, c1_sq=F(0), c2_num=F(k), surface_kind="k3")
        ).margin
        for k in range(0, 5)
    ]
    assert all(b > a for a, b in zip(margins, margins[1:]))
    with pytest.raises(ValueError):
        yoshioka_check(
            SurfaceBoundInput(r=2, c1_sq=F(0), c2_num=F(2), surface_kind="fano", c2D=F(3), c1D_sq=F(9))
        )


def test_k3_constants_enforced():
    v = SurfaceBoundInput(r=2, c1_sq=F(0), c2_num=F(4), surface_kind="k3")
    assert v.c2D == 24 and v.c1D_sq == 0
    with pytest.raises(ValueError):
        SurfaceBoundInput(r=2, c1_sq=F(0), c2_num=F(4), surface_kind="k3", c2D=F(20))
    with pytest.raises(ValueError):
        SurfaceBoundInput(r=1, c1_sq=F(0), c2_num=F(4), surface_kind="k3")
    with pytest.raises(ValueError):
        SurfaceBoundInput(r=2, c1_sq=F(0), c2_num=F(4), surface_kind="fano")


def test_surface_index_bounds_k3_boundary():
    v = SurfaceBoundInput(r=2, c1_sq=F(0), c2_num=F(4), surface_kind="k3")
    report = surface_index_bounds(v)
    entry = report["index_k3"]
    assert entry.margin == 0 and entry.status == "boundary"


def test_surface_index_bounds_fano_p2():
    v = SurfaceBoundInput(
        r=2, c1_sq=F(0), c2_num=F(2), surface_kind="fano", c2D=F(3), c1D_sq=F(9)
    )
    report = surface_index_bounds(v)
    entry = report["index_fano"]
    assert entry.margin == 0
    maruyama = report["index_negative_canonical"]
    assert maruyama.lhs == 2 * 2 * 2 - F(4, 12) * 12
    assert maruyama.satisfied


def test_strengthened_bound_reproduces_jardim_violation(quintic):
    # threefold-contracted numbers of the kernel bundle against the hyperplane
    rec, _ = jardim_record(quintic)
    v = SurfaceBoundInput(
        r=3,
        c1_sq=quintic.triple(rec.c1, rec.c1, H),
        c2_num=sum(a * b for a, b in zip(H, rec.c2_pair(quintic))),
        surface_kind="general",
        c2D=sum(a * b for a, b in zip(H, quintic.c2_pair)),
        c1D_sq=F(0),
    )
    report = surface_index_bounds(v)
    entry = report["strengthened_bogomolov"]
    assert entry.margin == F(20) - F(75, 2)
    assert not entry.satisfied


def test_yoshioka_structural_identity():
    # the K3 bound is the strengthened inequality with slack 2
    for c2 in (F(0), F(3, 2), F(2), F(7)):
        for r in (2, 3, 5):
            v = SurfaceBoundInput(r=r, c1_sq=F(0), c2_num=c2, surface_kind="k3")
            yos = yoshioka_check(v)
            conj = surface_index_bounds(v)["strengthened_bogomolov"]
            assert yos.margin == conj.margin + 2
