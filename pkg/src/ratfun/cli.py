"""Command-line front end; a thin client of the HTTP service.

Every subcommand builds one request, sends it through the FastAPI app (via
an in-process ASGI transport by default, or over the network when --server
is given) and formats the response.  All computation happens service-side;
this module only parses flags, renders text tables and maps error kinds to
exit codes:

    0  success (an Inconclusive verdict is a success)
    2  expression parse error (also argparse usage errors)
    3  wrong form (exp where exact form is needed, non-polynomial fta, ...)
    4  numerical failure (contour singularity after retries)

JSON mode re-serializes the response body with a fixed layout, so identical
invocations print byte-identical output.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

EXIT_USAGE = 2
_KIND_EXITS = {"parse": 2, "wrong-form": 3, "contour": 4}

_TIMEOUT = 600.0


def _post(path: str, payload: dict, server: str | None) -> tuple[int, dict]:
    async def go():
        if server:
            async with httpx.AsyncClient(base_url=server, timeout=_TIMEOUT) as client:
                resp = await client.post(path, json=payload)
                return resp.status_code, resp.json()
        from .service import app  # deferred: keeps --help snappy

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://ratfun.internal", timeout=_TIMEOUT
        ) as client:
            resp = await client.post(path, json=payload)
            return resp.status_code, resp.json()

    return asyncio.run(go())


def _fail(body: dict) -> int:
    err = body.get("error")
    if err is None:
        # pydantic request validation: a usage problem, not a domain one
        print(f"error: invalid parameters: {json.dumps(body)}", file=sys.stderr)
        return EXIT_USAGE
    print(f"error ({err['kind']}): {err['message']}", file=sys.stderr)
    return _KIND_EXITS.get(err["kind"], 1)


def _emit_json(body: dict) -> None:
    print(json.dumps(body, indent=2))


def _complex_str(pair) -> str:
    re, im = pair
    return f"{re:.12g}{im:+.12g}i"


def _verdict_line(verdict: dict) -> str:
    kind = verdict["kind"]
    if kind == "rational":
        return f"verdict: Rational(d={verdict['d']})"
    if kind == "not_rational":
        return f"verdict: NotRational({verdict['reason']})"
    return f"verdict: Inconclusive ({verdict['reason']})"


def _run_command(args, path: str, payload: dict, render) -> int:
    try:
        status, body = _post(path, payload, args.server)
    except httpx.HTTPError as err:
        print(f"error: cannot reach server: {err}", file=sys.stderr)
        return 1
    if status != 200:
        return _fail(body)
    if args.format == "json":
        _emit_json(body)
    else:
        render(body)
    return 0


def _cmd_divisor(args) -> int:
    def render(body: dict) -> None:
        r = body["result"]
        print(f"P = {r['numer']['text']}")
        print(f"Q = {r['denom']['text']}")
        print(f"m = deg P = {r['m']}")
        print(f"n = deg Q = {r['n']}")
        print(f"d = m - n = {r['d']}")

    return _run_command(
        args, "/v1/divisor", {"expression": args.expression}, render
    )


def _quad_payload(args) -> dict:
    return {
        "initial_nodes": args.nodes,
        "max_nodes": args.max_nodes,
        "tol": args.tol,
    }


def _cmd_classify(args) -> int:
    payload = {
        "expression": args.expression,
        "growth": args.growth,
        "steps": args.steps,
        "tol_int": args.tol_int,
        "decay_factor": args.decay_factor,
        **_quad_payload(args),
    }
    if args.r0 is not None:
        payload["r0"] = args.r0

    def render(body: dict) -> None:
        r = body["result"]
        mean_title = "mean(z*f'/f)"
        print(
            f"{'radius':>12}  {mean_title:>28}  {'spread':>10}  "
            f"{'wind':>5}  {'residual':>10}  {'nodes':>6}  conv"
        )
        for p in r["probes"]:
            w = p["winding"]
            print(
                f"{p['radius']:>12.6g}  {_complex_str(p['mean']):>28}  "
                f"{p['spread']:>10.3e}  {w['nearest_int']:>5}  "
                f"{w['residual']:>10.3e}  {w['nodes']:>6}  "
                f"{'yes' if w['converged'] else 'no'}"
            )
        print(_verdict_line(r["verdict"]))
        if "exact" in r:
            agrees = "yes" if r["agrees"] else "NO"
            print(f"exact divisor: {r['exact']['d']}; numeric agrees: {agrees}")

    return _run_command(args, "/v1/classify", payload, render)


def _cmd_winding(args) -> int:
    payload = {
        "expression": args.expression,
        "radius": args.radius,
        "center": list(args.center),
        **_quad_payload(args),
    }

    def render(body: dict) -> None:
        r = body["result"]
        print(f"raw = {_complex_str(r['raw'])}")
        print(f"nearest integer = {r['nearest_int']}")
        print(f"residual = {r['residual']:.3e}")
        print(f"nodes used = {r['nodes']}")
        print(f"converged = {'yes' if r['converged'] else 'no'}")
        print(f"radius used = {r['radius_used']:.12g}")

    return _run_command(args, "/v1/winding", payload, render)


def _cmd_fta(args) -> int:
    payload = {"expression": args.expression, **_quad_payload(args)}

    def render(body: dict) -> None:
        r = body["result"]
        print(f"degree = {r['degree']}")
        print(f"count = {r['count']} (winding at radius {r['radius']:.12g})")
        print("pass" if r["pass"] else "FAIL")

    return _run_command(args, "/v1/fta", payload, render)


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("ratfun.service:app", host=args.host, port=args.port)
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("expression", help="expression in z, e.g. \"(z^2+1)/(z-2)\"")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--nodes", type=int, default=64,
                   help="initial quadrature nodes (power of two)")
    p.add_argument("--max-nodes", type=int, default=65536, dest="max_nodes")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="quadrature convergence tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratfun",
        description="Rational-function divisors and black-box rationality "
        "classification via the boundary behavior of z*f'/f.",
    )
    parser.add_argument("--server", default=None,
                        help="URL of a running ratfun service; default runs "
                        "the service in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("divisor", help="exact divisor of a rational expression")
    p.add_argument("expression")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_divisor)

    p = sub.add_parser("classify", help="rational / not-rational verdict from "
                       "a radius schedule")
    _add_common(p)
    p.add_argument("--r0", type=float, default=None,
                   help="first probe radius (default: 2x joint Cauchy bound "
                   "when exact form exists, else 4)")
    p.add_argument("--growth", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--tol-int", type=float, default=1e-3, dest="tol_int")
    p.add_argument("--decay-factor", type=float, default=1.5, dest="decay_factor")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("winding", help="argument-principle count on one circle")
    _add_common(p)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--center", type=float, nargs=2, default=(0.0, 0.0),
                   metavar=("RE", "IM"))
    p.set_defaults(func=_cmd_winding)

    p = sub.add_parser("fta", help="zero count of a polynomial vs its degree")
    _add_common(p)
    p.set_defaults(func=_cmd_fta)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)
    sys.exit(args.func(args))


if __name__ == "__main__":
    main()
