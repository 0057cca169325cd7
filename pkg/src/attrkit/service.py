"""Handlers behind the HTTP endpoints; the CLI drives the same functions in-process.

Every handler is a pure function from a request model to a response model.
Reports are byte-deterministic for identical inputs.
"""

from __future__ import annotations

from fractions import Fraction

from . import attractor, boundstates, catalog, chern, pushforward
from .chern import ChernRecord
from .geometry import (
    IngestError,
    ThreefoldData,
    format_rational,
    load_geometry,
    PRESETS,
    rational_vec,
    threefold_from_dict,
)
from .reports import BoundEntry, BoundsReport
from .schemas import (
    BoundEntryOut,
    BoundsRequest,
    BoundsResponse,
    CatalogRequest,
    CatalogResponse,
    ChargeVectorOut,
    CheckRequest,
    CheckResponse,
    ChernRecordIn,
    ChernRecordOut,
    ClosureRequest,
    ClosureResponse,
    GeometryData,
    MinimizeRequest,
    MinimizeResponse,
    PresetsResponse,
    PushRequest,
    PushResponse,
    SolutionOut,
    SurfaceBoundsRequest,
    SurfaceBoundsResponse,
    SurfaceRecordIn,
)

EXIT_BY_STATUS = {"interior": 0, "boundary": 1, "outside": 2}


def resolve_geometry(spec) -> ThreefoldData:
    if isinstance(spec, GeometryData):
        return threefold_from_dict(spec.model_dump())
    if isinstance(spec, dict):
        return threefold_from_dict(spec)
    return load_geometry(spec)


def record_from_model(model: ChernRecordIn, g: ThreefoldData) -> ChernRecord:
    return chern.record_from_dict(model.model_dump(exclude_none=True), g)


def surface_from_model(model: SurfaceRecordIn, g: ThreefoldData):
    return pushforward.surface_record_from_dict(model.model_dump(exclude_none=True), g)


def record_out(rec: ChernRecord) -> ChernRecordOut:
    return ChernRecordOut(**chern.record_to_dict(rec))


def _entry_out(entry) -> BoundEntryOut:
    return BoundEntryOut(**entry.to_dict())


def _entries_out(report: BoundsReport) -> list[BoundEntryOut]:
    return [_entry_out(e) for e in report]


def _solution_out(sol) -> SolutionOut:
    return SolutionOut(
        branch=sol.branch,
        H_tilde=list(sol.H_tilde) if sol.H_tilde is not None else None,
        xi=sol.xi,
        lam=sol.lam,
        B=list(sol.B),
        J=list(sol.J),
        C_bar=[sol.C_bar.real, sol.C_bar.imag],
        residual=sol.residual,
        cone_status=sol.cone_status,
        large_volume=sol.large_volume,
    )


def _detail_out(detail: dict) -> dict:
    out = {}
    for key, value in sorted(detail.items()):
        if isinstance(value, tuple):
            out[key] = [format_rational(v) for v in value]
        else:
            out[key] = format_rational(value)
    return out


def run_check(req: CheckRequest) -> CheckResponse:
    g = resolve_geometry(req.geometry)
    if req.record is not None:
        return _check_positive_rank(req, g)
    return _check_rank_zero(req, g)


def _check_positive_rank(req: CheckRequest, g: ThreefoldData) -> CheckResponse:
    rec = record_from_model(req.record, g)
    if rec.rank == 0:
        raise IngestError("a rank-zero charge needs surface bundle data plus a divisor")
    if rec.rank < 0:
        raise IngestError("rank must be nonnegative")
    report = BoundsReport()
    for a, ray in enumerate(_cone_rays(g)):
        report.add(
            BoundEntry(
                key=f"bogomolov_ray{a}",
                lhs=chern.bogomolov(rec, ray, g),
                relation=">=",
                rhs=Fraction(0),
            )
        )
    outcome = attractor.solve_positive_rank(rec, g)
    if "c3_bound_rhs" in outcome.detail:
        report.add(attractor.c3_bound(rec, g))
    for a, w in enumerate(_ample_ray_probes(g)):
        entry = attractor.c3_bound_ample(rec, w, g)
        report.add(_rekey(entry, f"c3_ample_ray{a}"))
    notes = []
    if rec.rank > 1:
        for entry in attractor.reflexive_sheaf_existence(rec, g):
            report.add(entry)
    else:
        notes.append("existence predicate skipped: it is stated for rank > 1")
    if req.const_c is not None and all(v == 0 for v in rec.c1):
        report.add(boundstates.guess_bound(rec, _cone_interior_point(g), g, req.const_c))
    charge = attractor.charge_map(rec, g, req.a_matrix)
    return CheckResponse(
        classification=outcome.status,
        exit_status=EXIT_BY_STATUS[outcome.status],
        reason=outcome.reason,
        solution=_solution_out(outcome.solution) if outcome.solution else None,
        entries=_entries_out(report),
        charge_vector=ChargeVectorOut(
            p0=format_rational(charge.p0),
            p=[format_rational(v) for v in charge.p],
            q=[format_rational(v) for v in charge.q],
            q0=format_rational(charge.q0),
        ),
        detail=_detail_out(outcome.detail),
        notes=notes,
    )


def _check_rank_zero(req: CheckRequest, g: ThreefoldData) -> CheckResponse:
    w = surface_from_model(req.surface, g)
    D = rational_vec(req.divisor)
    report = BoundsReport()
    report.add(attractor.surface_bundle_existence(w, D, g))
    outcome = attractor.solve_rank_zero(w, D, g)
    return CheckResponse(
        classification=outcome.status,
        exit_status=EXIT_BY_STATUS[outcome.status],
        reason=outcome.reason,
        solution=_solution_out(outcome.solution) if outcome.solution else None,
        entries=_entries_out(report),
        charge_vector=None,
        detail=_detail_out(outcome.detail),
        notes=[],
    )


def _cone_rays(g: ThreefoldData) -> list[tuple]:
    rays = []
    for a in range(g.b2):
        rays.append(tuple(Fraction(1 if i == a else 0) for i in range(g.b2)))
    return rays


def _cone_interior_point(g: ThreefoldData) -> tuple:
    return (Fraction(1),) * g.b2


def _ample_ray_probes(g: ThreefoldData) -> list[tuple]:
    # the relaxed c3 bound is scale-invariant in w and needs strict ampleness,
    # so probe along interior directions dominated by each cone ray; for
    # b2 = 1 this is the ray itself up to scale
    ones = _cone_interior_point(g)
    probes = []
    for ray in _cone_rays(g):
        probes.append(tuple(g.b2 * r + o for r, o in zip(ray, ones)))
    return probes


def _rekey(entry, key: str):
    from dataclasses import replace

    return replace(entry, key=key)


def run_minimize(req: MinimizeRequest) -> MinimizeResponse:
    g = resolve_geometry(req.geometry)
    rec = record_from_model(req.record, g)
    start_B = rational_vec(req.start_B)
    start_J = rational_vec(req.start_J)
    result = attractor.minimize_z_norm(rec, start_B, start_J, g, corrections=req.corrections)
    return MinimizeResponse(
        start_B=[float(v) for v in start_B],
        start_J=[float(v) for v in start_J],
        B=list(result.B),
        J=list(result.J),
        value=result.value,
        grad_norm=result.grad_norm,
        n_eval=result.n_eval,
        converged=result.converged,
        boundary_flow=result.boundary_flow,
    )


def run_catalog(req: CatalogRequest) -> CatalogResponse:
    g = resolve_geometry(req.geometry)
    notes: list[str] = []
    name = req.construction
    if name in ("tangent-quintic", "tangent_quintic"):
        rec = catalog.tangent_quintic(g)
    elif name == "monad":
        if req.r is None or req.n is None:
            raise IngestError("monad construction needs parameters r and n")
        rec = catalog.monad_chern(req.r, req.n, _cone_interior_point_first_ray(g), g)
        notes.append("stability of the monad bundle is only guaranteed for large n")
    elif name == "jardim":
        rec, extra = catalog.jardim_record(g)
        check = _check_from_record(rec, g)
        check.entries = _entries_out(extra) + check.entries
        return CatalogResponse(
            construction=name, record=record_out(rec), check=check, notes=notes
        )
    else:
        raise IngestError(
            f"unknown construction {name!r}; available: tangent-quintic, monad, jardim"
        )
    return CatalogResponse(
        construction=name, record=record_out(rec), check=_check_from_record(rec, g), notes=notes
    )


def _cone_interior_point_first_ray(g: ThreefoldData) -> tuple:
    return tuple(Fraction(1 if a == 0 else 0) for a in range(g.b2))


def _check_from_record(rec: ChernRecord, g: ThreefoldData) -> CheckResponse:
    model = ChernRecordIn(**chern.record_to_dict(rec))
    return run_check(CheckRequest(geometry=GeometryData(**g.to_dict()), record=model))


def run_closure(req: ClosureRequest) -> ClosureResponse:
    g = resolve_geometry(req.geometry)
    seeds = [record_from_model(m, g) for m in req.seeds]
    B = rational_vec(req.B)
    J = rational_vec(req.J)
    out = boundstates.j_closure(seeds, B, J, g, req.budget)
    return ClosureResponse(records=[record_out(r) for r in out], added=len(out) - len(seeds))


def run_bounds(req: BoundsRequest) -> BoundsResponse:
    g = resolve_geometry(req.geometry)
    rec = record_from_model(req.record, g)
    report = BoundsReport()
    for a, ray in enumerate(_cone_rays(g)):
        report.add(
            BoundEntry(
                key=f"bogomolov_ray{a}",
                lhs=chern.bogomolov(rec, ray, g),
                relation=">=",
                rhs=Fraction(0),
            )
        )
    outcome = attractor.solve_positive_rank(rec, g)
    if "c3_bound_rhs" in outcome.detail:
        report.add(attractor.c3_bound(rec, g))
    targets = [rational_vec(req.w)] if req.w else _ample_ray_probes(g)
    for a, w in enumerate(targets):
        report.add(_rekey(attractor.c3_bound_ample(rec, w, g), f"c3_ample_w{a}"))
    if rec.rank > 1:
        report.extend(list(attractor.reflexive_sheaf_existence(rec, g)))
    if req.const_c is not None and all(v == 0 for v in rec.c1):
        J = rational_vec(req.w) if req.w else _cone_interior_point(g)
        report.add(boundstates.guess_bound(rec, J, g, req.const_c))
    return BoundsResponse(entries=_entries_out(report), all_satisfied=report.all_satisfied)


def run_push(req: PushRequest) -> PushResponse:
    g = resolve_geometry(req.geometry)
    w = surface_from_model(req.surface, g)
    D = rational_vec(req.divisor)
    rec = pushforward.grr_push(w, D, g)
    mk = pushforward.push_mukai(w, D, g)
    sd = pushforward.divisor_chern(D, g)
    return PushResponse(
        record=record_out(rec),
        mukai_d2=[format_rational(v) for v in mk.d2],
        mukai_d4=[format_rational(v) for v in mk.d4],
        mukai_d6=format_rational(mk.d6),
        divisor_d_cubed=format_rational(sd.d_cubed),
        divisor_c2D=format_rational(sd.c2D),
    )


def run_surface_bounds(req: SurfaceBoundsRequest) -> SurfaceBoundsResponse:
    data = req.model_dump(exclude_none=True)
    v = catalog.SurfaceBoundInput.from_dict(data)
    report = catalog.surface_index_bounds(v)
    if v.surface_kind == "k3":
        report.add(catalog.yoshioka_check(v))
    return SurfaceBoundsResponse(entries=_entries_out(report), all_satisfied=report.all_satisfied)


def run_presets() -> PresetsResponse:
    return PresetsResponse(presets=sorted(PRESETS))
