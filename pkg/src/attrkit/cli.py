"""Command-line client for the toolkit.

Each subcommand builds the same request model the HTTP service consumes and
either calls the handler in-process (the default) or posts it to a running
server given with --server.  Exit status for `check`: 0 the charge admits an
interior attractor point, 1 boundary, 2 outside, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import pydantic

from . import service
from .geometry import GeometryError, IngestError, PRESETS
from .pushforward import LiftMismatch, MissingLiftError
from .schemas import (
    BoundsRequest,
    BoundsResponse,
    CatalogRequest,
    CatalogResponse,
    CheckRequest,
    CheckResponse,
    ClosureRequest,
    ClosureResponse,
    GeometryData,
    MinimizeRequest,
    MinimizeResponse,
    PushRequest,
    PushResponse,
    SurfaceBoundsRequest,
    SurfaceBoundsResponse,
)

EXIT_INPUT_ERROR = 3

_INPUT_ERRORS = (
    IngestError,
    GeometryError,
    MissingLiftError,
    LiftMismatch,
    ValueError,
    KeyError,
    pydantic.ValidationError,
)


def _load_json(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise IngestError(f"{path}: file not found")
    try:
        with open(p, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise IngestError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


def _geometry_spec(name: str):
    """Preset names pass through; file paths are inlined so a server never reads them."""
    if name in PRESETS:
        return name
    return GeometryData(**_load_json(name))


def _parse_vec(text: str) -> list:
    text = text.strip()
    if text.startswith("["):
        return json.loads(text)
    return [part.strip() for part in text.split(",") if part.strip()]


def _dispatch(args, path: str, request, response_model):
    if args.server:
        import httpx

        resp = httpx.post(
            args.server.rstrip("/") + path, json=request.model_dump(mode="json"), timeout=300.0
        )
        if resp.status_code >= 400:
            raise IngestError(f"server rejected the request: {resp.text}")
        return response_model.model_validate(resp.json())
    handler = {
        "/check": service.run_check,
        "/minimize": service.run_minimize,
        "/catalog": service.run_catalog,
        "/closure": service.run_closure,
        "/bounds": service.run_bounds,
        "/push": service.run_push,
        "/surface-bounds": service.run_surface_bounds,
    }[path]
    return handler(request)


def _emit(args, model) -> None:
    if args.json:
        print(json.dumps(model.model_dump(mode="json"), indent=2, sort_keys=True))
    else:
        print(_render(model))


def _render(model) -> str:
    if isinstance(model, CheckResponse):
        return _render_check(model)
    if isinstance(model, CatalogResponse):
        lines = [f"construction: {model.construction}"]
        lines.append("record: " + json.dumps(model.record.model_dump(), sort_keys=True))
        for note in model.notes:
            lines.append(f"note: {note}")
        lines.append(_render_check(model.check))
        return "\n".join(lines)
    if isinstance(model, MinimizeResponse):
        return "\n".join(
            [
                f"start: B {model.start_B} J {model.start_J}",
                f"end:   B {list(model.B)} J {list(model.J)}",
                f"value: {model.value:.17g}",
                f"gradient max-norm: {model.grad_norm:.17g}",
                f"evaluations: {model.n_eval}  converged: {model.converged}"
                + ("  boundary flow" if model.boundary_flow else ""),
            ]
        )
    if isinstance(model, ClosureResponse):
        lines = [f"closure size {len(model.records)} (added {model.added})"]
        for rec in model.records:
            lines.append(json.dumps(rec.model_dump(), sort_keys=True))
        return "\n".join(lines)
    if isinstance(model, (BoundsResponse, SurfaceBoundsResponse)):
        lines = [_render_entry(e) for e in model.entries]
        lines.append(f"all satisfied: {model.all_satisfied}")
        return "\n".join(lines)
    if isinstance(model, PushResponse):
        return "\n".join(
            [
                "pushforward record: " + json.dumps(model.record.model_dump(), sort_keys=True),
                f"mukai d2 {model.mukai_d2} d4 {model.mukai_d4} d6 {model.mukai_d6}",
                f"divisor: D^3 {model.divisor_d_cubed}  c2(D) {model.divisor_c2D}",
            ]
        )
    return json.dumps(model.model_dump(mode="json"), indent=2, sort_keys=True)


def _render_entry(e) -> str:
    if e.lhs is None:
        return f"  [{e.status}] {e.key}: {e.note}"
    line = f"  [{e.status}] {e.key}: {e.lhs} {e.relation} {e.rhs} (margin {e.margin})"
    if e.note:
        line += f"  note: {e.note}"
    return line


def _render_check(model: CheckResponse) -> str:
    lines = [f"classification: {model.classification}" + (f" ({model.reason})" if model.reason else "")]
    if model.solution is not None:
        s = model.solution
        lines.append(
            f"solution[{s.branch}]: xi {s.xi:.12g}"
            + (f" lambda {s.lam:.12g}" if s.lam is not None else "")
            + f" B {s.B} J {s.J} residual {s.residual:.3g}"
        )
        lines.append(
            f"  cone status {s.cone_status}, large volume: {s.large_volume}"
        )
    for key, value in model.detail.items():
        lines.append(f"  {key}: {value}")
    if model.entries:
        lines.append("bounds:")
        lines.extend(_render_entry(e) for e in model.entries)
    if model.charge_vector is not None:
        cv = model.charge_vector
        lines.append(f"charge vector: p0 {cv.p0} p {cv.p} q {cv.q} q0 {cv.q0}")
    for note in model.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="attrkit",
        description="attractor-set membership and Chern-character bounds on threefold data",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--geometry", default="quintic", help="preset name or geometry JSON path")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--server", default=None, help="base URL of a running attrkit service")
    common.add_argument("--corrections", action="store_true", help="enable the volume correction term")
    common.add_argument("--const-c", default=None, help="constant for the c3 guess bound")
    common.add_argument("--a-matrix", default=None, help="JSON file with the symmetric charge-map matrix")
    common.add_argument("--budget", type=int, default=0, help="closure budget")
    common.add_argument("--tol", type=float, default=None, help="boundary tolerance override")

    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("check", parents=[common], help="classify a charge against the attractor set")
    p.add_argument("record", help="record JSON path")

    p = sub.add_parser("minimize", parents=[common], help="numerically minimize |Z|^2 / J^3")
    p.add_argument("record", help="record JSON path")
    p.add_argument("--start-b", required=True, help="start B, comma separated")
    p.add_argument("--start-j", required=True, help="start J, comma separated")

    p = sub.add_parser("catalog", parents=[common], help="emit a named construction and check it")
    p.add_argument("construction", help="tangent-quintic | monad | jardim")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--out", default=None, help="write the record JSON here")

    p = sub.add_parser("closure", parents=[common], help="close seed charges under allowed sums")
    p.add_argument("seeds", help="JSON file with a list of records")
    p.add_argument("--point-b", required=True, help="B of the evaluation point")
    p.add_argument("--point-j", required=True, help="J of the evaluation point")

    p = sub.add_parser("bounds", parents=[common], help="evaluate every applicable bound")
    p.add_argument("record", help="record JSON path")
    p.add_argument("--w", default=None, help="ample direction for the relaxed c3 bound")

    p = sub.add_parser("push", parents=[common], help="push surface-bundle data to the threefold")
    p.add_argument("surface", help="surface record JSON path")
    p.add_argument("--divisor", required=True, help="divisor class, comma separated")

    p = sub.add_parser("surface-bounds", parents=[common], help="surface index bounds")
    p.add_argument("input", help="surface-bound input JSON path")

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 0
    if args.tol is not None:
        from . import reports

        reports.BOUNDARY_MARGIN_TOL = args.tol
    try:
        return _run_command(args)
    except _INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def _run_command(args) -> int:
    if args.command == "serve":
        import uvicorn

        uvicorn.run("attrkit.app:app", host=args.host, port=args.port)
        return 0

    geometry = _geometry_spec(args.geometry)

    if args.command == "check":
        data = _load_json(args.record)
        req = _check_request(geometry, data, args)
        resp = _dispatch(args, "/check", req, CheckResponse)
        _emit(args, resp)
        return resp.exit_status

    if args.command == "minimize":
        data = _load_json(args.record)
        req = MinimizeRequest(
            geometry=geometry,
            record=data,
            start_B=_parse_vec(args.start_b),
            start_J=_parse_vec(args.start_j),
            corrections=args.corrections,
        )
        _emit(args, _dispatch(args, "/minimize", req, MinimizeResponse))
        return 0

    if args.command == "catalog":
        req = CatalogRequest(geometry=geometry, construction=args.construction, r=args.r, n=args.n)
        resp = _dispatch(args, "/catalog", req, CatalogResponse)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(resp.record.model_dump(), fh, indent=2, sort_keys=True)
                fh.write("\n")
        _emit(args, resp)
        return 0

    if args.command == "closure":
        seeds = _load_json(args.seeds)
        if not isinstance(seeds, list):
            raise IngestError(f"{args.seeds}: expected a JSON list of records")
        req = ClosureRequest(
            geometry=geometry,
            seeds=seeds,
            B=_parse_vec(args.point_b),
            J=_parse_vec(args.point_j),
            budget=args.budget,
        )
        _emit(args, _dispatch(args, "/closure", req, ClosureResponse))
        return 0

    if args.command == "bounds":
        data = _load_json(args.record)
        req = BoundsRequest(
            geometry=geometry,
            record=data,
            w=_parse_vec(args.w) if args.w else None,
            const_c=args.const_c,
        )
        _emit(args, _dispatch(args, "/bounds", req, BoundsResponse))
        return 0

    if args.command == "push":
        data = _load_json(args.surface)
        req = PushRequest(geometry=geometry, surface=data, divisor=_parse_vec(args.divisor))
        _emit(args, _dispatch(args, "/push", req, PushResponse))
        return 0

    if args.command == "surface-bounds":
        data = _load_json(args.input)
        req = SurfaceBoundsRequest(**data)
        _emit(args, _dispatch(args, "/surface-bounds", req, SurfaceBoundsResponse))
        return 0

    raise IngestError(f"unknown command {args.command!r}")


def _check_request(geometry, data: dict, args) -> CheckRequest:
    a_matrix = None
    if args.a_matrix:
        a_matrix = _load_json(args.a_matrix)
    kwargs = dict(
        geometry=geometry,
        corrections=args.corrections,
        a_matrix=a_matrix,
        const_c=args.const_c,
    )
    if "c2_num" in data:
        divisor = data.get("divisor")
        surface = {k: v for k, v in data.items() if k != "divisor"}
        return CheckRequest(surface=surface, divisor=divisor, **kwargs)
    return CheckRequest(record=data, **kwargs)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
