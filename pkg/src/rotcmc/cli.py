"""Command-line interface: a thin client of the service layer.

Every subcommand builds a request model, dispatches it either in-process or
to a running server (`--server http://host:port`), and formats the response.
No numerics happen here.

Exit codes: 0 success, 2 invalid input (including usage errors), 3 numerical
or I/O failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__, service
from .errors import InvalidInputError, NumericalError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def _parse_pole(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise InvalidInputError("--pole needs four comma-separated numbers")
    try:
        x, y, z, w = (float(v) for v in parts)
    except ValueError as exc:
        raise InvalidInputError(f"bad --pole value: {text!r}") from exc
    return x, y, z, w


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rotcmc",
        description="Rotational CMC surfaces in the 3-sphere")
    ap.add_argument("--server", metavar="URL",
                    help="send the request to a running service instead of "
                         "computing in-process")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--format", dest="fmt", default=None)
        return sp

    sp = add("k-value", "rotation angle K(H,C) of one fundamental piece")
    sp.add_argument("--H", type=float, required=True)
    sp.add_argument("--C", type=float, required=True)

    sp = add("b-value", "axis-case rotation angle b(H), H < 0")
    sp.add_argument("--H", type=float, required=True)

    sp = add("limits", "closed-form limits of K for a given H")
    sp.add_argument("--H", type=float, required=True)

    sp = add("profile", "sample the profile curve over fundamental pieces")
    sp.add_argument("--H", type=float, required=True)
    sp.add_argument("--C", type=float, required=True)
    sp.add_argument("--pieces", type=int, default=1)
    sp.add_argument("--samples", type=int, default=400)
    sp.add_argument("--anchor", choices=("piece", "origin"), default="piece")

    sp = add("solve-closure", "solve K(H,C) = 2 pi m / k for C")
    sp.add_argument("--H", type=float, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--side", default="whole_ray",
                    choices=("below_axis_C", "above_axis_C", "whole_ray"))

    sp = add("solve-axis", "solve b(H) = 2 pi / m on the axis hyperbola")
    sp.add_argument("--m", type=int, required=True)

    sp = add("classify", "isoparametric / closed / presumed dense")
    sp.add_argument("--H", type=float, required=True)
    sp.add_argument("--C", type=float, required=True)
    sp.add_argument("--qmax", type=int, default=64)
    sp.add_argument("--no-embedded-check", action="store_true")

    sp = add("check-embedded", "profile self-intersection over pieces")
    sp.add_argument("--H", type=float, required=True)
    sp.add_argument("--C", type=float, required=True)
    sp.add_argument("--pieces", type=int, default=4)
    sp.add_argument("--samples", type=int, default=400)
    sp.add_argument("--anchor", choices=("piece", "origin"), default="piece")

    sp = add("mesh", "OBJ mesh via stereographic projection")
    sp.add_argument("--H", type=float, required=True)
    sp.add_argument("--C", type=float, required=True)
    sp.add_argument("--ns", type=int, default=64)
    sp.add_argument("--nt", type=int, default=64)
    sp.add_argument("--pieces", type=int, default=1)
    sp.add_argument("--pole", default="0,0,0,1")

    sp = add("sweep", "grid evaluation over (H, C)")
    sp.add_argument("--H-range", dest="h_range", nargs=3, type=float,
                    required=True, metavar=("LO", "HI", "STEPS"))
    sp.add_argument("--C-range", dest="c_range", nargs=3, type=float,
                    required=True, metavar=("LO", "HI", "STEPS"))
    sp.add_argument("--offset", action="store_true",
                    help="C range is an offset from c_min(H)")
    sp.add_argument("--outputs", default="K,bounds,classification")

    sp = add("verify", "randomized ODE-residual and radius-identity suites")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--cases", type=int, default=1000)

    sp = sub.add_parser("serve", help="run the FastAPI service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    return ap


def _build_request(args) -> tuple[str, dict]:
    """Map parsed args to (endpoint path, request payload)."""
    cmd = args.command
    if cmd == "k-value":
        body = {"H": args.H, "C": args.C}
        if args.tol:
            body["tol"] = args.tol
        return "/k-value", body
    if cmd == "b-value":
        body = {"H": args.H}
        if args.tol:
            body["tol"] = args.tol
        return "/b-value", body
    if cmd == "limits":
        return "/limits", {"H": args.H}
    if cmd == "profile":
        return "/profile", {"H": args.H, "C": args.C, "pieces": args.pieces,
                            "samples": args.samples, "anchor": args.anchor,
                            "fmt": args.fmt or "csv"}
    if cmd == "solve-closure":
        body = {"H": args.H, "m": args.m, "k": args.k, "side": args.side}
        if args.tol:
            body["tol"] = args.tol
        return "/solve-closure", body
    if cmd == "solve-axis":
        body = {"m": args.m}
        if args.tol:
            body["tol"] = args.tol
        return "/solve-axis", body
    if cmd == "classify":
        body = {"H": args.H, "C": args.C, "q_max": args.qmax,
                "decide_embedded": not args.no_embedded_check}
        if args.tol:
            body["tol"] = args.tol
        return "/classify", body
    if cmd == "check-embedded":
        body = {"H": args.H, "C": args.C, "pieces": args.pieces,
                "samples": args.samples, "anchor": args.anchor}
        if args.tol:
            body["tol"] = args.tol
        return "/check-embedded", body
    if cmd == "mesh":
        return "/mesh", {"H": args.H, "C": args.C, "n_s": args.ns,
                         "n_t": args.nt, "pieces": args.pieces,
                         "pole": _parse_pole(args.pole)}
    if cmd == "sweep":
        h_lo, h_hi, h_steps = args.h_range
        c_lo, c_hi, c_steps = args.c_range
        return "/sweep", {
            "h_lo": h_lo, "h_hi": h_hi, "h_steps": int(h_steps),
            "c_lo": c_lo, "c_hi": c_hi, "c_steps": int(c_steps),
            "c_mode": "offset" if args.offset else "absolute",
            "outputs": [s for s in args.outputs.split(",") if s],
            "fmt": args.fmt or "csv"}
    if cmd == "verify":
        return "/verify", {"seed": args.seed, "cases": args.cases}
    raise InvalidInputError(f"unknown command {cmd!r}")


_LOCAL_HANDLERS = {
    "/k-value": (service.KValueRequest, service.k_value),
    "/b-value": (service.BValueRequest, service.b_value),
    "/limits": (service.LimitsRequest, service.limits),
    "/profile": (service.ProfileRequest, service.profile),
    "/solve-closure": (service.SolveClosureRequest, service.solve_closure),
    "/solve-axis": (service.SolveAxisRequest, service.solve_axis),
    "/classify": (service.ClassifyRequest, service.classify),
    "/check-embedded": (service.CheckEmbeddedRequest, service.check_embedded),
    "/mesh": (service.MeshRequest, service.build_mesh),
    "/sweep": (service.SweepRequest, service.run_sweep),
    "/verify": (service.VerifyRequest, service.verify),
}


def _dispatch(path: str, body: dict, server: str | None) -> dict:
    if server is None:
        model, handler = _LOCAL_HANDLERS[path]
        return handler(model(**body)).model_dump()
    import httpx

    resp = httpx.post(server.rstrip("/") + path, json=body, timeout=600.0)
    if resp.status_code >= 400:
        try:
            detail = resp.json()
        except ValueError:
            detail = {"detail": resp.text}
        if resp.status_code in (400, 422):
            raise InvalidInputError(detail.get("detail", str(detail)))
        raise NumericalError(detail.get("detail", str(detail)))
    return resp.json()


def _emit(args, resp: dict) -> int:
    """Print or save the response; returns the exit code."""
    cmd = args.command
    content_key = {"profile": "content", "mesh": "obj",
                   "sweep": "content"}.get(cmd)
    if content_key:
        text = resp[content_key]
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
            summary = {k: v for k, v in resp.items()
                       if k not in (content_key, "points", "rows")}
            print(json.dumps(summary))
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if getattr(args, "fmt", None) == "json":
        print(json.dumps(resp, indent=1))
    else:
        for key, val in resp.items():
            if key in ("points", "rows"):
                continue
            print(f"{key} = {val}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(resp, fh, indent=1)
    if cmd == "verify" and not resp.get("passed", False):
        return EXIT_NUMERICAL
    return EXIT_OK


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:   # argparse usage errors exit with code 2
        return int(exc.code) if exc.code else EXIT_OK

    if args.command == "serve":
        import uvicorn

        from .api import app
        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    try:
        path, body = _build_request(args)
        resp = _dispatch(path, body, args.server)
        return _emit(args, resp)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except Exception as exc:  # pydantic validation of local requests
        if type(exc).__name__ == "ValidationError":
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        raise


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
